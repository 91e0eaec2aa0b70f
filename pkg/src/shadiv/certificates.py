"""Replayable JSON certificates.

A certificate is a plain dict with sorted keys, serialized as UTF-8
JSON in which every number is a decimal string, so that serialization
is exact and byte-identical across machines.  The `timing` field is the
only volatile entry; comparisons for determinism and replay strip it.
"""

from __future__ import annotations

import json
from typing import Any, Callable

from jsonschema import Draft202012Validator

from .errors import SchemaError

SCHEMA_VERSION = "1"

STATUS_VERIFIED = "verified"
STATUS_REFUTED = "refuted"
STATUS_AXIOM = "axiom"
STATUS_ANALYTIC = "analytic"

CERT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "inputs", "steps", "verdict", "timing"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"type": "string"},
        "command": {"type": "string"},
        "inputs": {"type": "object", "additionalProperties": {"type": "string"}},
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["claim", "evidence", "status"],
                "additionalProperties": False,
                "properties": {
                    "claim": {"type": "string"},
                    "evidence": {},
                    "status": {
                        "type": "string",
                        "enum": [
                            STATUS_VERIFIED,
                            STATUS_REFUTED,
                            STATUS_AXIOM,
                            STATUS_ANALYTIC,
                        ],
                    },
                },
            },
        },
        "verdict": {"type": "string", "enum": ["VERIFIED", "REFUTED", "UNDECIDED"]},
        "timing": {"type": "string"},
    },
}

_validator = Draft202012Validator(CERT_SCHEMA)


def step(claim: str, evidence: Any, status: str) -> dict:
    return {"claim": claim, "evidence": stringify(evidence), "status": status}


def stringify(obj: Any) -> Any:
    """Recursively convert numbers to decimal strings for exact JSON."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, str) or obj is None:
        return obj
    if isinstance(obj, dict):
        return {str(k): stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [stringify(x) for x in obj]
    return str(obj)


def make_certificate(
    command: str, inputs: dict, steps: list[dict], verdict: str, timing: float = 0.0
) -> dict:
    cert = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": {str(k): str(v) for k, v in inputs.items()},
        "steps": steps,
        "verdict": verdict,
        "timing": repr(timing),
    }
    validate(cert)
    return cert


def validate(cert: dict) -> None:
    errors = sorted(_validator.iter_errors(cert), key=lambda e: list(e.path))
    if errors:
        raise SchemaError("; ".join(e.message for e in errors[:3]))


def to_json(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, ensure_ascii=False, indent=1)


def save(cert: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(cert))
        fh.write("\n")


def load(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            cert = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    validate(cert)
    return cert


def strip_volatile(cert: dict) -> dict:
    return {k: v for k, v in cert.items() if k != "timing"}


def equivalent(a: dict, b: dict) -> bool:
    return to_json(strip_volatile(a)) == to_json(strip_volatile(b))


def replay(path: str, executor: Callable[[str, dict], dict]) -> bool:
    """Re-run the certificate's command and compare all non-volatile
    content; True iff every step and the verdict reproduce."""
    cert = load(path)
    fresh = executor(cert["command"], dict(cert["inputs"]))
    return equivalent(cert, fresh)
