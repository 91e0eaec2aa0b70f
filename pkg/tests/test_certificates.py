"""Certificate schema, serialization, and replay."""

import json

import pytest

from shadiv import certificates as certs
from shadiv.errors import SchemaError


def sample_cert():
    return certs.make_certificate(
        command="demo",
        inputs={"x": "1"},
        steps=[
            certs.step("claim one", {"n": 5, "f": 0.5, "ok": True}, "verified"),
            certs.step("claim two", ["a", 2], "axiom"),
        ],
        verdict="VERIFIED",
    )


class TestSchema:
    def test_make_and_validate(self):
        cert = sample_cert()
        certs.validate(cert)
        assert cert["verdict"] == "VERIFIED"

    def test_bad_verdict_rejected(self):
        cert = sample_cert()
        cert["verdict"] = "MAYBE"
        with pytest.raises(SchemaError):
            certs.validate(cert)

    def test_bad_status_rejected(self):
        with pytest.raises(SchemaError):
            certs.make_certificate(
                command="demo",
                inputs={},
                steps=[certs.step("c", None, "plausible")],
                verdict="VERIFIED",
            )

    def test_missing_field_rejected(self):
        cert = sample_cert()
        del cert["steps"]
        with pytest.raises(SchemaError):
            certs.validate(cert)


class TestStringify:
    def test_numbers_become_strings(self):
        out = certs.stringify({"a": 5, "b": 0.5, "c": [1, 2.25]})
        assert out == {"a": "5", "b": "0.5", "c": ["1", "2.25"]}

    def test_bool_passthrough(self):
        assert certs.stringify({"ok": True}) == {"ok": True}

    def test_float_repr_roundtrip(self):
        x = 2.1905570950363184
        assert float(certs.stringify(x)) == x


class TestSerialization:
    def test_json_deterministic(self):
        a = certs.to_json(sample_cert())
        b = certs.to_json(sample_cert())
        assert a == b
        assert json.loads(a)["command"] == "demo"

    def test_sorted_keys(self):
        text = certs.to_json(sample_cert())
        parsed = json.loads(text)
        assert list(parsed) == sorted(parsed)

    def test_save_load_roundtrip(self, tmp_path):
        cert = sample_cert()
        path = tmp_path / "cert.json"
        certs.save(cert, str(path))
        assert certs.load(str(path)) == cert

    def test_load_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError):
            certs.load(str(path))

    def test_equivalent_ignores_timing(self):
        a, b = sample_cert(), sample_cert()
        a["timing"] = "1.0"
        b["timing"] = "2.0"
        assert certs.equivalent(a, b)


class TestReplay:
    def test_replay_match(self, tmp_path):
        cert = sample_cert()
        path = tmp_path / "cert.json"
        certs.save(cert, str(path))

        def executor(command, inputs):
            assert command == "demo"
            return sample_cert()

        assert certs.replay(str(path), executor)

    def test_replay_tamper_detected(self, tmp_path):
        cert = sample_cert()
        cert["verdict"] = "REFUTED"
        path = tmp_path / "cert.json"
        certs.save(cert, str(path))
        assert not certs.replay(str(path), lambda c, i: sample_cert())
