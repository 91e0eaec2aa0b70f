"""End-to-end CLI: exit codes, certificates, replay."""

import json

import pytest

from shadiv import certificates as certs
from shadiv.cli import UsageError, execute, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExecute:
    def test_verify_4div_verified(self):
        cert = execute("verify-4div", {"curve": "80 205", "terms": "1000"})
        assert cert["verdict"] == "VERIFIED"
        assert any(s["status"] == "analytic" for s in cert["steps"])

    def test_verify_4div_refuted(self):
        cert = execute("verify-4div", {"curve": "1 2", "terms": "1000"})
        assert cert["verdict"] == "REFUTED"

    def test_selmer(self):
        cert = execute("selmer", {"curve": "80 205"})
        assert cert["verdict"] == "VERIFIED"

    def test_bad_curve_string(self):
        with pytest.raises(UsageError):
            execute("selmer", {"curve": "80"})

    def test_cyclic_verify(self):
        cert = execute("cyclic-verify", {"p": "2", "q": "17", "bound": "100"})
        assert cert["verdict"] == "VERIFIED"

    def test_cyclic_inadmissible(self):
        cert = execute("cyclic-verify", {"p": "2", "q": "7", "bound": "100"})
        assert cert["verdict"] == "REFUTED"

    def test_cyclic_search(self):
        cert = execute("cyclic-search-c", {"p": "2", "q": "17", "bound": "50"})
        assert cert["verdict"] == "VERIFIED"
        text = json.dumps(cert)
        assert '"3"' in text and '"7"' in text


class TestMain:
    def test_verify_exit_zero(self, capsys):
        code, out, _ = run(capsys, "verify-4div", "--curve", "80 205", "--terms", "1000")
        assert code == 0
        cert = json.loads(out)
        assert cert["verdict"] == "VERIFIED"
        certs.validate(cert)

    def test_refuted_exit_one(self, capsys):
        code, out, _ = run(capsys, "verify-4div", "--curve", "1 2", "--terms", "500")
        assert code == 1

    def test_quartic_els(self, capsys):
        code, out, _ = run(
            capsys, "quartic-els", "--factors", "(11*x**2-67*x+31)*(-x**2-3*x-1)"
        )
        assert code == 0

    def test_quartic_refuted(self, capsys):
        code, out, _ = run(capsys, "quartic-els", "--coeffs", "[-1,0,0,0,-1]")
        assert code == 1

    def test_usage_error_exit_three(self, capsys):
        code, _, err = run(capsys, "selmer", "--curve", "nonsense")
        assert code == 3

    def test_unknown_command_exit_three(self, capsys):
        assert main(["no-such-command"]) == 3

    def test_out_writes_file(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        code, out, _ = run(
            capsys, "selmer", "--curve", "80 205", "--out", str(path)
        )
        assert code == 0
        cert = certs.load(str(path))
        assert cert["verdict"] == "VERIFIED"
        assert "timing" in cert


class TestReplayCommand:
    def test_replay_roundtrip(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        assert run(capsys, "selmer", "--curve", "80 205", "--out", str(path))[0] == 0
        code, out, _ = run(capsys, "replay", str(path))
        assert code == 0
        assert "reproduces" in out

    def test_replay_tamper(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        run(capsys, "selmer", "--curve", "80 205", "--out", str(path))
        cert = certs.load(str(path))
        cert["verdict"] = "REFUTED"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(certs.to_json(cert))
        code, out, _ = run(capsys, "replay", str(path))
        assert code == 1
        assert "MISMATCH" in out

    def test_replay_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "replay", str(tmp_path / "none.json"))
        assert code == 3
