import csv
import io
import json
import math
import re
import subprocess
import sys

import pytest

from alzer.cli import (
    EXIT_COUNTEREXAMPLES,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VIOLATION,
    format_number,
    main,
    parse_endpoint,
    to_json,
)

HEADER = re.compile(r"^# alzer \S+ generated \S+\n")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def payload(text):
    return json.loads(HEADER.sub("", text, count=1))


def report(text, theorem):
    return next(r for r in payload(text)["reports"] if r["theorem_id"] == theorem)


class TestVerify:
    def test_thm3_equality(self):
        code, out, _ = run("verify", "--expr", "6*x^2-6*x+1", "--interval", "0", "1", "--theorem", "thm3")
        assert code == EXIT_OK
        r = report(out, "thm3")
        assert abs(r["lhs"] - 1) <= 1e-9 and abs(r["rhs"] - 1) <= 1e-9
        assert abs(r["sharpness_ratio"] - 1) <= 1e-9
        assert r["satisfied"] and r["hypotheses_met"]

    def test_zero_all(self):
        code, out, _ = run("verify", "--expr", "0", "--interval", "0", "1", "--theorem", "all")
        assert code == EXIT_OK
        reports = payload(out)["reports"]
        assert len(reports) == 8
        assert all(r["satisfied"] for r in reports)

    def test_higher_order_violation(self):
        code, out, _ = run(
            "verify", "--expr", "sin(x)", "--interval", "0", "6.283185307179586", "--theorem", "higher", "--n", "1"
        )
        assert code == EXIT_VIOLATION
        r = report(out, "higher")
        assert r["lhs"] == pytest.approx(1.0, abs=1e-12)
        assert r["rhs"] == pytest.approx(math.pi / 6 * math.sqrt(math.pi), rel=1e-10)
        assert r["satisfied"] is False

    def test_violation_without_hypotheses_exits_ok(self):
        # lhs 25 > rhs 0 for the constant 5, but its mean is not zero
        code, out, _ = run("verify", "--expr", "5", "--theorem", "thm3", "--no-header")
        r = report(out, "thm3")
        assert not r["satisfied"] and not r["hypotheses_met"]
        assert code == EXIT_OK

    def test_theorem_list_forms(self):
        _, out1, _ = run("verify", "--expr", "x-0.5", "--theorem", "thm4,cor1", "--no-header")
        _, out2, _ = run("verify", "--expr", "x-0.5", "--theorem", "thm4", "--theorem", "cor1", "--no-header")
        assert out1 == out2
        assert [r["theorem_id"] for r in payload(out1)["reports"]] == ["thm4", "cor1"]

    def test_generated_corpus(self):
        code, out, _ = run(
            "verify", "--family", "polynomial", "--targets", "convex,mean-zero", "--trials", "5", "--theorem", "thm6"
        )
        assert code == EXIT_OK
        data = payload(out)
        assert len(data["reports"]) == 5
        assert data["config_echo"]["generator"]["targets"] == ["convex", "mean-zero"]

    def test_pi_tokens(self):
        _, out1, _ = run("verify", "--expr", "sin(x)", "--interval", "0", "2pi", "--theorem", "thm6", "--no-header")
        _, out2, _ = run(
            "verify", "--expr", "sin(x)", "--interval", "0", "6.283185307179586", "--theorem", "thm6", "--no-header"
        )
        assert out1 == out2


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "--expr", "6*x^^2"],
            ["verify", "--expr", "tan(x)"],
            ["verify"],
            ["verify", "--expr", "x", "--family", "polynomial"],
            ["verify", "--expr", "x", "--interval", "1", "0"],
            ["verify", "--expr", "x", "--interval", "0", "banana"],
            ["verify", "--expr", "x", "--theorem", "thm9"],
            ["verify", "--expr", "x", "--tol", "0"],
            ["verify", "--expr", "x", "--n", "0"],
            ["verify", "--expr", "log(x)", "--interval", "-1", "1", "--theorem", "thm6"],
            ["mine", "--family", "polynomial"],
            ["mine", "--family", "polynomial", "--theorem", "thm3", "--targets", "convex,increasing"],
            ["frobnicate"],
            [],
        ],
    )
    def test_exit_one(self, argv):
        code, out, err = run(*argv)
        assert code == EXIT_USAGE
        assert out == ""

    def test_parse_error_message(self):
        _, _, err = run("verify", "--expr", "6*x^^2")
        assert err.strip() == "alzer: error: unexpected token '^' at offset 4"


class TestAudit:
    def test_table(self):
        code, out, _ = run("audit", "--theorem", "all", "--no-header")
        assert code == EXIT_OK
        reports = {r["theorem_id"]: r for r in payload(out)["reports"]}
        assert list(reports) == ["thm2", "thm3", "thm4", "thm5", "thm6"]
        for t in ("thm2", "thm3", "thm5", "thm6"):
            assert reports[t]["sharp_confirmed"] is True
        assert reports["thm4"]["sharp_confirmed"] is False
        assert math.isfinite(reports["thm4"]["sharpness_ratio"])

    def test_markdown(self):
        code, out, _ = run("audit", "--format", "markdown", "--no-header")
        lines = out.strip().splitlines()
        assert lines[0].startswith("| theorem_id")
        assert len(lines) == 2 + 5


class TestBounds:
    def test_quadratic(self):
        code, out, _ = run("bounds", "--expr", "6*x^2-6*x+1", "--interval", "0", "1", "--no-header")
        assert code == EXIT_OK
        r = payload(out)["reports"][0]
        for key in ("t_rap", "classic_bound", "new_bound"):
            assert abs(r[key] - 1) <= 1e-9

    def test_csv(self):
        code, out, _ = run("bounds", "--expr", "sin(x)", "--interval", "0", "pi", "--format", "csv", "--no-header")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 1
        assert float(rows[0]["t_rap"]) == pytest.approx(-2.0, abs=1e-10)
        assert float(rows[0]["classic_bound"]) == pytest.approx(math.pi**3 / 12, rel=1e-12)


class TestMine:
    ARGS = ("mine", "--family", "trig-polynomial", "--degree", "2", "--seed", "8", "--trials", "10", "--theorem", "higher")

    def test_exit_three(self):
        code, out, _ = run(*self.ARGS, "--no-header")
        assert code == EXIT_COUNTEREXAMPLES
        data = payload(out)
        assert data["reports"] and data["summary"][0]["theorem_id"] == "higher"
        assert all(r["margin"] < 0 for r in data["reports"])

    def test_exit_zero(self):
        code, out, _ = run(
            "mine", "--family", "polynomial", "--targets", "convex,mean-zero", "--trials", "10", "--theorem", "thm6"
        )
        assert code == EXIT_OK
        assert payload(out)["reports"] == []

    def test_byte_identical(self):
        _, out1, _ = run(*self.ARGS, "--no-header")
        _, out2, _ = run(*self.ARGS, "--no-header")
        assert out1 == out2

    def test_workers_do_not_change_payload(self):
        _, out1, _ = run(*self.ARGS, "--no-header")
        _, out2, _ = run(*self.ARGS, "--no-header", "--workers", "2")
        assert out1 == out2

    def test_header_is_the_only_difference(self):
        _, with_header, _ = run(*self.ARGS)
        _, without, _ = run(*self.ARGS, "--no-header")
        assert HEADER.match(with_header)
        assert HEADER.sub("", with_header, count=1) == without

    def test_output_file(self, tmp_path):
        target = tmp_path / "records.json"
        code, out, _ = run(*self.ARGS, "--no-header", "-o", str(target))
        assert code == EXIT_COUNTEREXAMPLES and out == ""
        _, stdout_text, _ = run(*self.ARGS, "--no-header")
        assert target.read_text(encoding="utf-8") == stdout_text
        assert [p.name for p in tmp_path.iterdir()] == ["records.json"]


class TestSerialisation:
    def test_seventeen_digits(self):
        assert format_number(0.1) == "0.10000000000000001"
        assert format_number(1.0) == "1"
        assert format_number(float("nan")) == "null"
        assert format_number(float("inf")) == "null"

    def test_round_trip(self):
        values = [math.pi, 1 / 3, -2.5e-300, 6 / math.pi**1.5]
        assert json.loads(to_json(values)) == values

    def test_floats_in_payload_have_17_digits(self):
        _, out, _ = run("verify", "--expr", "sin(x)", "--interval", "0", "2pi", "--theorem", "higher", "--no-header")
        r = report(out, "higher")
        text = HEADER.sub("", out)
        assert format(r["rhs"], ".17g") in text

    @pytest.mark.parametrize(
        "text, value",
        [("pi", math.pi), ("2pi", 2 * math.pi), ("-0.5pi", -0.5 * math.pi), ("2*pi", 2 * math.pi), ("1.25", 1.25)],
    )
    def test_endpoint_tokens(self, text, value):
        assert parse_endpoint(text) == value


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "alzer", "verify", "--expr", "0", "--no-header", "--theorem", "thm3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["tool_version"]
