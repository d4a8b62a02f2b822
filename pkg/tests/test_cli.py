import io
import json
import subprocess
import sys

import pytest

from legendre_e import cli
from legendre_e.aux_expansions import read_region_csv, region_grid


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_eval_first_order_one():
    code, text = run("eval", "--lambda", "0.8", "--k", "0.8", "--order", "1", "--method", "first")
    assert code == 0
    fields = dict(line.split(None, 1) for line in text.splitlines())
    assert round(float(fields["estimate"]), 4) == 0.8715  # printed as .8714 (truncated)
    assert float(fields["estimate"]) == pytest.approx(0.87147, abs=1e-5)
    assert float(fields["lower"]) <= 0.8501769 <= float(fields["upper"])


def test_eval_boundary_is_exact():
    code, text = run("eval", "--lambda", "0", "--k", "0.5")
    assert code == 0
    assert "estimate        0\n" in text


def test_eval_second_json_with_oracle():
    code, text = run("eval", "--lambda", "0.99", "--k", "0.95", "--order", "1",
                     "--method", "second", "--format", "json", "--oracle")
    assert code == 0
    rec = json.loads(text)
    assert rec["method"] == "second" and rec["order"] == 1
    assert f"{float(rec['estimate']):.4f}" == "1.0575"  # printed 1.0574, truncated
    assert float(rec["lower"]) <= float(rec["oracle"]) <= float(rec["upper"])
    assert float(rec["rel_err"]) == pytest.approx(-2.771e-4, rel=1e-3)


@pytest.mark.parametrize("method", ["first", "second", "aux-bf", "aux-carlson", "baseline", "auto"])
def test_eval_every_method_contains_oracle(method):
    code, text = run("eval", "--lambda", "0.6", "--k", "0.6", "--method", method,
                     "--oracle", "--format", "json")
    assert code == 0
    rec = json.loads(text)
    assert float(rec["lower"]) <= float(rec["oracle"]) <= float(rec["upper"])


def test_exit_codes():
    assert run("eval", "--lambda", "2", "--k", "0.5")[0] == 2
    assert run("eval", "--lambda", "0.9", "--k", "0.1", "--method", "aux-bf")[0] == 2
    assert run("eval", "--lambda", "abc", "--k", "0.5")[0] == 1
    assert run("eval", "--k", "0.5")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("table", "4")[0] == 1
    assert run("eval", "--lambda", "0.5", "--k", "0.5", "--method", "nope")[0] == 1


def test_table_csv_header():
    code, text = run("table", "2", "--format", "csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].startswith("lambda,k,E,approx,refined,rel_err,rel_err_refined,range")
    assert len(lines) == 13


def test_table3_markdown():
    code, text = run("table", "3", "--format", "md")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "| lambda | k | E | approx | rel_err | delta1 | delta2 |"
    assert len(lines) == 2 + 7


def test_table_check_reports_and_exits_three():
    code, text = run("table", "3", "--check")
    assert code == 3
    assert "6/7 rows match" in text
    assert "delta1: printed .44780" in text


def test_table_check_is_deterministic():
    assert run("table", "1", "--check") == run("table", "1", "--check")


def test_regions_small(tmp_path):
    path = tmp_path / "r.csv"
    code, text = run("regions", "--resolution", "2", "--out", str(path))
    assert code == 0
    assert "neither=0" in text
    rows = read_region_csv(open(path))
    assert len(rows) == 1 and rows[0].flags.cond1 and rows[0].flags.cond2


def test_regions_round_trip(tmp_path):
    path = tmp_path / "r.csv"
    assert run("regions", "--resolution", "40", "--out", str(path))[0] == 0
    assert read_region_csv(open(path)) == list(region_grid(40))


def test_regions_bad_path():
    assert run("regions", "--resolution", "4", "--out", "/nonexistent/dir/x.csv")[0] == 2


def test_bench_small():
    code, text = run("bench", "--grid", "6", "--orders", "1,2")
    assert code == 0
    assert "containment violations: 0" in text
    for m in ("first", "second", "aux-bf", "aux-carlson", "baseline"):
        assert m in text
    assert run("bench", "--grid", "0")[0] == 1
    assert run("bench", "--orders", "0")[0] == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "legendre_e", "eval", "--lambda", "0.5", "--k", "0.5"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "estimate" in r.stdout


def test_bench_default_runs_quickly():
    import time
    t0 = time.perf_counter()
    code, text = run("bench")
    assert code == 0 and "containment violations: 0" in text
    assert time.perf_counter() - t0 < 10.0


def test_bench_grid_100_sound():
    code, text = run("bench", "--grid", "100", "--orders", "1,2,3")
    assert code == 0
    assert "containment violations: 0" in text
