"""Command-line surface: golden outputs, exit codes, determinism and the
round-trip of JSON outputs through the input grammars."""

from __future__ import annotations

import json

import pytest

from equiloc.algebra import parse_polynomial
from equiloc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGoldenCommands:
    def test_thom_porteous(self, capsys):
        code, out, _ = run(capsys, "thom", "--k", "1", "--codim", "0")
        assert code == 0
        assert out == "c1\n"

    def test_grass_integrate(self, capsys):
        code, out, _ = run(capsys, "grass-integrate", "--n", "4", "--k", "2",
                           "--class", "c1^2*c2")
        assert code == 0
        assert out == "2\n"

    def test_theta(self, capsys):
        code, out, _ = run(capsys, "theta", "--n", "2")
        assert (code, out) == (0, "12\n")

    def test_euler(self, capsys):
        code, out, _ = run(capsys, "euler", "--n", "1", "--d", "4")
        assert code == 0
        assert out == "4*m - 2\n"

    def test_gg_with_values(self, capsys):
        code, out, _ = run(capsys, "gg", "--n", "1", "--delta", "0",
                           "--d", "5")
        assert code == 0
        assert out == "2\n"


class TestErrors:
    def test_missing_job_file_exits_2(self, capsys):
        code, out, err = run(capsys, "residue", "--job", "missing.json")
        assert code == 2
        payload = json.loads(err)
        assert payload["error"] == "parse-error"

    def test_domain_error_exits_1(self, capsys):
        code, _, err = run(capsys, "grass-integrate", "--n", "4", "--k", "2",
                           "--class", "c1")
        assert code == 1
        assert json.loads(err)["error"] == "degree-mismatch"

    def test_bad_class_text_exits_2(self, capsys):
        code, _, err = run(capsys, "grass-integrate", "--n", "4", "--k", "2",
                           "--class", "c1^^")
        assert code == 2

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["thom"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestResidueJobs:
    def test_job_file(self, capsys, tmp_path):
        job = tmp_path / "job.json"
        job.write_text(json.dumps({
            "numerator": "1",
            "denominators": ["z1", "z2"],
            "order": ["z1", "z2"],
        }))
        code, out, _ = run(capsys, "residue", "--job", str(job))
        assert (code, out) == (0, "1\n")
        code, out, _ = run(capsys, "residue", "--job", str(job),
                           "--format", "json")
        assert code == 0
        assert json.loads(out) == {"residue": "1"}


class TestDeterminism:
    def test_flag_check_repeats_byte_identically(self, capsys):
        args = ("flag-check", "--n", "3", "--d", "2", "--trials", "3",
                "--seed", "11")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second
        assert "all_match=True" in first

    def test_seed_changes_draws_not_value(self, capsys):
        _, a, _ = run(capsys, "grass-integrate", "--n", "3", "--k", "1",
                      "--class", "c1^2", "--seed", "1")
        _, b, _ = run(capsys, "grass-integrate", "--n", "3", "--k", "1",
                      "--class", "c1^2", "--seed", "2")
        assert a == b == "1\n"


class TestJsonRoundTrip:
    def test_thom_json_reparses(self, capsys):
        code, out, _ = run(capsys, "thom", "--k", "3", "--codim", "0",
                           "--format", "json")
        assert code == 0
        payload = json.loads(out)
        poly = parse_polynomial(payload["polynomial"])
        assert poly == parse_polynomial("c1^3 + 3*c1*c2 + 2*c3")
        rebuilt = sum((parse_polynomial(f"({c})*{m}") for m, c in
                       payload["terms"]), parse_polynomial("0"))
        assert rebuilt == poly

    def test_gg_json_reparses(self, capsys):
        code, out, _ = run(capsys, "gg", "--n", "2", "--format", "json")
        payload = json.loads(out)
        assert code == 0
        poly = parse_polynomial(payload["polynomial"])
        assert parse_polynomial(payload["leading"]) == \
            poly.coefficient(parse_polynomial("d").variables().pop(), 2)

    def test_flag_check_json(self, capsys):
        code, out, _ = run(capsys, "flag-check", "--n", "3", "--d", "1",
                           "--trials", "2", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["all_match"] is True
        assert len(payload["results"]) == 2


class TestScanAndUserTables:
    def test_thom_scan_with_positivity(self, capsys):
        code, out, _ = run(capsys, "thom-scan", "--kmax", "2", "--lmax", "1",
                           "--check-positivity")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 4
        assert lines[0] == "k=1 codim=0: c1  [all coefficients nonnegative]"
        assert "c1^2 + c2" in lines[2]

    def test_user_q_file(self, capsys, tmp_path):
        # any homogeneous degree-3 entry exercises the k=5 plumbing; the
        # resulting polynomial is unverified but must be weighted degree 5
        qfile = tmp_path / "q5.json"
        qfile.write_text(json.dumps({"5": "z1*z5^2"}))
        code, out, _ = run(capsys, "thom", "--k", "5", "--codim", "0",
                           "--q-file", str(qfile), "--format", "json")
        assert code == 0
        payload = json.loads(out)
        poly = parse_polynomial(payload["polynomial"])
        assert not poly.is_zero
        degrees = poly.weighted_degrees(
            lambda v: v.index if v.name.startswith("c") else 0)
        assert degrees == {5}

    def test_missing_q_exits_1(self, capsys):
        code, _, err = run(capsys, "thom", "--k", "5", "--codim", "0")
        assert code == 1
        assert json.loads(err)["error"] == "missing-q"


class TestJetCommands:
    @pytest.fixture
    def jet_file(self, tmp_path):
        path = tmp_path / "jet.json"
        path.write_text(json.dumps({
            "coefficients": [["1", "0"], ["1/2", "1"], ["0", "2/3"]],
        }))
        return str(path)

    def test_rho(self, capsys, jet_file):
        code, out, _ = run(capsys, "rho", "--n", "2", "--k", "3",
                           "--jet", jet_file, "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert len(payload["matrix"]) == 3
        assert len(payload["matrix"][0]) == len(payload["basis"]) == 9
        assert payload["matrix"][0][:2] == ["1", "0"]

    def test_minors(self, capsys, jet_file):
        code, out, _ = run(capsys, "minors", "--n", "2", "--k", "3",
                           "--jet", jet_file)
        assert code == 0
        import math
        assert len(out.splitlines()) == math.comb(9, 3)

    def test_shape_mismatch(self, capsys, jet_file):
        code, _, err = run(capsys, "rho", "--n", "2", "--k", "4",
                           "--jet", jet_file)
        assert code == 2
        assert json.loads(err)["error"] == "parse-error"

    def test_derivative_input(self, capsys, tmp_path):
        path = tmp_path / "jet2.json"
        path.write_text(json.dumps({"derivatives": [[1, 2], [3, 0]]}))
        code, out, _ = run(capsys, "rho", "--n", "2", "--k", "2",
                           "--jet", str(path), "--format", "json")
        assert code == 0
        row2 = json.loads(out)["matrix"][1]
        assert row2[:2] == ["3/2", "0"]
