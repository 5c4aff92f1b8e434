import json
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critheight.certify import INCONCLUSIVE, PASS, VIOLATION
from critheight.dynmap import make_map, milnor2, polynomial_map
from critheight.exactnum import ARCH, RBound, log_abs
from critheight.explorer import (
    JobError,
    JobSpec,
    ResultRecord,
    exit_status,
    farey_count,
    farey_values,
    pcf_test_exact,
    quad_grid,
    quad_grid_count,
    spectrum,
)
from critheight.explorer.cli import main
from critheight.explorer.jobs import parse_point, parse_poly, parse_rational
from critheight.explorer.tasks import BUDGET_EXHAUSTED, NOT_PCF, PCF

SQUARE_JSON = '{"num": [0, 0, 1], "den": [1, 0, 0]}'


def run_cli(tmp_path, *argv, name="out.jsonl"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    lines = [json.loads(s) for s in out.read_text().splitlines()] if out.exists() else []
    return code, lines


# --- grids ------------------------------------------------------------------------------

@settings(max_examples=40)
@given(st.integers(0, 12), st.integers(1, 12))
def test_farey_count_matches_enumeration(P, Q):
    brute = {F(p, q) for p in range(-P, P + 1) for q in range(1, Q + 1)}
    assert farey_count(P, Q) == len(brute) == len(farey_values(P, Q))
    assert all(abs(x.numerator) <= P and x.denominator <= Q for x in farey_values(P, Q))


@settings(max_examples=25)
@given(st.integers(0, 6), st.integers(1, 6))
def test_quad_grid_count_matches_enumeration(P, Q):
    grid = quad_grid(P, Q)
    assert len(grid) == quad_grid_count(P, Q)
    assert all(a * b != 1 for a, b in grid)
    assert len(set(grid)) == len(grid)


def test_default_grid_size():
    assert farey_count(3, 2) == 11
    assert quad_grid_count(3, 2) == 121 - 6


# --- PCF test and spectrum ------------------------------------------------------------------

@pytest.mark.parametrize("c, expect", [(0, PCF), (-1, PCF), (-2, PCF), (2, NOT_PCF), (1, NOT_PCF)])
def test_pcf_test_exact_on_quadratic_polynomials(c, expect):
    assert pcf_test_exact(polynomial_map([c, 0, 1])).verdict == expect


def test_pcf_verdicts_consistent_across_budgets():
    for f in (polynomial_map([-2, 0, 1]), polynomial_map([F(-1, 4), 0, 1]), milnor2(2, 3)):
        seen = {pcf_test_exact(f, b).verdict for b in (2, 6, 12)}
        # a proof of one kind never coexists with a proof of the other
        assert not {PCF, NOT_PCF} <= seen


def test_budget_exhausted_is_reported_not_guessed():
    # z^2 - 2 has critical orbit 0 -> -2 -> 2 -> 2, so a budget of 1 cannot close it
    v = pcf_test_exact(polynomial_map([-2, 0, 1]), budget=1)
    assert v.verdict in (BUDGET_EXHAUSTED, PCF)
    assert v.verdict != NOT_PCF


def test_spectrum_examples():
    s = spectrum(make_map([0, 0, 1], [1, 0, 0]), 1)
    assert s["char_poly"] == [0, 0, -2, 1] and s["degree"] == 3
    assert RBound.from_json(s["height_sum"]).overlaps(log_abs(2, ARCH))
    assert spectrum(milnor2(2, 3), 2)["degree"] == 5


# --- parsing ------------------------------------------------------------------------------------

def test_parsers():
    assert parse_rational("-3/4") == F(-3, 4)
    assert parse_point("inf") == "inf"
    assert parse_point("2/3") == [F(2, 3)]
    assert parse_point("2:3") == [F(2), F(3)]
    assert parse_point("0") == [F(0)]
    with pytest.raises(JobError):
        parse_point("0:0")
    assert parse_poly("-2,0,1") == [-2, 0, 1]
    for bad in ("x", "1/0"):
        with pytest.raises(JobError):
            parse_rational(bad)


# --- exit codes ------------------------------------------------------------------------------------

def _rec(verdicts=(), error=None):
    return ResultRecord("j", 0, {}, certificates=[{"verdict": v} for v in verdicts], error=error)


def test_exit_status_precedence():
    assert exit_status([_rec([PASS])]) == 0
    assert exit_status([_rec([PASS, INCONCLUSIVE])]) == 3
    assert exit_status([_rec([INCONCLUSIVE]), _rec(error="boom")]) == 1
    assert exit_status([_rec([VIOLATION]), _rec(error="boom"), _rec([INCONCLUSIVE])]) == 2
    floor_broken = ResultRecord("j", 1, {}, extra={"summary": {"floor_respected": False}})
    assert exit_status([_rec([PASS]), floor_broken]) == 2


# --- CLI tasks ---------------------------------------------------------------------------------------

def test_height_task(tmp_path):
    code, lines = run_cli(tmp_path, "height", "--point", "2/3")
    assert code == 0 and len(lines) == 2
    assert "header" in lines[0] and "started" in lines[0]["header"]
    assert RBound.from_json(lines[1]["heights"][0]["value"]).overlaps(log_abs(3, ARCH))
    _, lines = run_cli(tmp_path, "height", "--point", "4:6", name="proj.jsonl")
    assert RBound.from_json(lines[1]["heights"][0]["value"]).overlaps(log_abs(3, ARCH))
    _, lines = run_cli(tmp_path, "height", "--map", SQUARE_JSON, name="map.jsonl")
    assert RBound.from_json(lines[1]["heights"][0]["value"]) == RBound.zero()


def test_canonical_and_green_tasks(tmp_path):
    code, lines = run_cli(tmp_path, "canonical-height", "--map", SQUARE_JSON, "--point", "1/2")
    assert code == 0
    assert RBound.from_json(lines[1]["heights"][0]["value"]).overlaps(log_abs(2, ARCH))
    code, lines = run_cli(tmp_path, "canonical-height", "--map", '{"num": [-1, 0, 1], "den": [1, 0, 0]}',
                          "--point", "0", name="zero.jsonl")
    assert code == 0 and RBound.from_json(lines[1]["heights"][0]["value"]) == RBound.zero()
    code, lines = run_cli(tmp_path, "green", "--map", SQUARE_JSON, "--point", "2", name="g.jsonl")
    assert code == 0


def test_crit_height_and_spectrum_tasks(tmp_path):
    code, lines = run_cli(tmp_path, "crit-height", "--map", '{"family": "milnor2", "params": {"lam0": 2, "lam_inf": 3}}')
    assert code == 0 and RBound.from_json(lines[1]["heights"][0]["value"]).lo > 0
    code, lines = run_cli(tmp_path, "spectrum", "--map", SQUARE_JSON, name="s.jsonl")
    assert code == 0 and lines[1]["extra"]["spectrum"]["char_poly"] == [0, 0, -2, 1]


@pytest.mark.parametrize("argv", [
    ["verify", "--statement", "theorem-quad", "--lam0", "2", "--lam-inf", "3"],
    ["verify", "--statement", "quad-k", "--lam0", "2", "--lam-inf", "3", "--k", "10"],
    ["verify", "--statement", "root-coeff", "--poly=-2,0,1", "--place", "2"],
    ["verify", "--statement", "greens-lower", "--map", SQUARE_JSON, "--point", "3/7"],
    ["verify", "--statement", "kbound", "--lam", "13", "--k", "9"],
    ["verify", "--statement", "iterate-identity", "--map", SQUARE_JSON, "--n", "2"],
    ["verify", "--statement", "theorem-geom", "--map", SQUARE_JSON],
])
def test_verify_statements_pass(tmp_path, argv):
    code, lines = run_cli(tmp_path, *argv)
    assert code == 0
    assert all(c["verdict"] == PASS for c in lines[1]["certificates"])


def test_verify_violation_exit_code(tmp_path):
    code, lines = run_cli(tmp_path, "verify", "--statement", "kbound", "--lam", "1000000", "--k", "9")
    assert code == 2 and lines[1]["certificates"][0]["verdict"] == VIOLATION


def test_sweep_quad_small_grid(tmp_path):
    code, lines = run_cli(tmp_path, "sweep-quad", "--grid-num-cap", "1", "--grid-den-cap", "1")
    summary = lines[-1]["extra"]["summary"]
    assert summary["points"] == summary["expected_points"] == quad_grid_count(1, 1)
    assert summary["verdicts"][VIOLATION] == 0
    assert code in (0, 3)
    assert {"lambda0": "0", "lambda_inf": "0"} in summary["pcf_hits"]


def test_pcf_search_pm(tmp_path):
    code, lines = run_cli(tmp_path, "pcf-search", "--family", "pm", "--grid-num-cap", "2", "--grid-den-cap", "1")
    summary = lines[-1]["extra"]["summary"]
    assert summary["points"] == farey_count(2, 1)
    assert sum(summary["pcf_verdicts"].values()) == summary["points"]


def test_per1_slice_modes(tmp_path):
    code, lines = run_cli(tmp_path, "per1-slice", "--lam", "13", "--grid-num-cap", "2", "--grid-den-cap", "1")
    summary = lines[-1]["extra"]["summary"]
    assert summary["mode"] == "ratio" and "min_ratio" in summary and summary["floor_respected"]
    assert code != 2
    code, lines = run_cli(tmp_path, "per1-slice", "--lam", "1", "--grid-num-cap", "2", "--grid-den-cap", "1",
                          name="abs.jsonl")
    summary = lines[-1]["extra"]["summary"]
    assert summary["mode"] == "absolute" and "min_ratio" not in summary
    assert all(r["inputs"]["lambda0"] != "1" for r in lines[1:-1])


# --- determinism and output format ---------------------------------------------------------------

def _strip_header(path):
    return path.read_text().splitlines()[1:]


def test_worker_count_does_not_change_output(tmp_path):
    argv = ["sweep-quad", "--grid-num-cap", "1", "--grid-den-cap", "2"]
    run_cli(tmp_path, *argv, "--jobs", "1", name="a.jsonl")
    run_cli(tmp_path, *argv, "--jobs", "4", name="b.jsonl")
    assert _strip_header(tmp_path / "a.jsonl") == _strip_header(tmp_path / "b.jsonl")


def test_timings_only_on_request(tmp_path):
    _, plain = run_cli(tmp_path, "height", "--point", "5")
    assert all("wall_time" not in r for r in plain)
    _, timed = run_cli(tmp_path, "height", "--point", "5", "--timings", name="t.jsonl")
    assert "wall_time" in timed[1]


def test_tsv_summary(tmp_path):
    tsv = tmp_path / "out.tsv"
    code, _ = run_cli(tmp_path, "sweep-quad", "--grid-num-cap", "1", "--grid-den-cap", "1", "--tsv", str(tsv))
    rows = tsv.read_text().splitlines()
    assert rows[0].split("\t")[0] == "index"
    assert len(rows) == 1 + quad_grid_count(1, 1) + 1


# --- configuration and validation -------------------------------------------------------------------

def test_config_precedence(tmp_path):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("# comment\nlam0 = 2\nlam-inf = 3\nprec_bits = 96\n")
    code, lines = run_cli(tmp_path, "verify", "--statement", "theorem-quad", "--config", str(cfg),
                          "--prec-bits", "200")
    job = lines[0]["header"]["job"]
    assert code == 0
    assert job["prec_bits"] == 200 and job["lam0"] == "2" and job["lam_inf"] == "3"
    assert job["tol"] == 1e-6


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["height", "--point", "2", "--config", str(cfg)]) == 1
    assert "unknown config keys: colour" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["height"],
    ["verify"],
    ["verify", "--statement", "nonsense"],
    ["verify", "--statement", "kbound", "--lam", "13", "--k", "8"],
    ["height", "--point", "2", "--prec-bits", "8"],
    ["sweep-quad", "--grid-num-cap", "1000"],
    ["crit-height", "--map", '{"num": [0, 0], "den": [1, 0]}'],
    ["crit-height", "--map", "not json"],
    ["per1-slice"],
    ["height", "--point", "2", "--tol", "0"],
])
def test_validation_errors_exit_one(argv):
    assert main(argv) == 1


def test_argparse_usage_errors_exit_one():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-task"])
    assert exc.value.code == 1


def test_jobspec_digest_ignores_output_and_workers():
    a = JobSpec("height", point="2", out="x", jobs=1)
    b = JobSpec("height", point="2", out="y", jobs=8)
    assert a.digest == b.digest


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.jsonl"
    proc = subprocess.run([sys.executable, "-m", "critheight.explorer", "height", "--point", "7", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert len(out.read_text().splitlines()) == 2
