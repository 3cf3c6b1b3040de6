import json
import math
import subprocess
import sys

import pytest

from breathkit import io as bio
from breathkit.cli import main
from breathkit.packing import PackingScenario
from breathkit.sweep import Spacing, SweepConfig, run_sweep


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    header = lines[0].split(",")
    return header, [dict(zip(header, l.split(","))) for l in lines[1:]]


def same_float(a, b):
    return (math.isnan(a) and math.isnan(b)) or a == b


# --- classify --------------------------------------------------------------


def test_classify_balanced(capsys):
    code, out, _ = run(capsys, "classify", "--db", "2", "--ds", "1", "--def", "bs", "--sigma", "0")
    assert code == 0
    assert "value,2\n" in out
    assert "limit_case,BalancedBreathing" in out
    assert "d_void (inferred),1" in out


def test_classify_internal_transfer(capsys):
    code, out, _ = run(capsys, "classify", "--ds", "1", "--dv", "-1", "--def", "bs", "--sigma", "0")
    assert code == 0
    assert "value,0\n" in out
    assert "limit_case,InternalTransfer (void disappearance)" in out


def test_classify_table_has_six_rows(capsys):
    _, out, _ = run(capsys, "classify", "--db", "3", "--ds", "1")
    for d in ("bs", "vs", "vb", "sb", "sv", "bv"):
        assert f"\nu_{d}," in out


def test_classify_inconsistent(capsys):
    code, _, err = run(capsys, "classify", "--db", "2", "--ds", "1", "--dv", "0.5")
    assert code == 2
    assert "ConsistencyError" in err


def test_classify_within_tolerance(capsys):
    code, _, _ = run(capsys, "classify", "--db", "2", "--ds", "1", "--dv", str(1 + 1e-12))
    assert code == 0


def test_classify_needs_two_deltas(capsys):
    code, _, _ = run(capsys, "classify", "--db", "2")
    assert code == 1


def test_classify_all_zero_is_domain_error(capsys):
    code, _, _ = run(capsys, "classify", "--ds", "0", "--dv", "0")
    assert code == 2


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--db", "1", "--ds", "0", "--def", "bs", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "+inf"
    assert doc["limit_case"] == "VoidBreathing"
    assert doc["inferred"] == "d_void"


def test_classify_gate(capsys):
    code, out, _ = run(capsys, "classify", "--db", "1", "--ds", "0.001", "--sigma", "0.01")
    assert code == 0
    assert "validity,value_only" in out


# --- sweep -----------------------------------------------------------------


def test_sweep_minimum_near_four(capsys):
    code, out, _ = run(
        capsys, "sweep", "--packing", "hex60", "--alpha0", "0", "--xi", "1.001:8",
        "--samples", "2000", "--format", "csv",
    )
    assert code == 0
    _, rows = csv_rows(out)
    window = [float(r["u_bs"]) for r in rows if 3.9 <= float(r["xi"]) <= 4.1]
    assert min(window) == pytest.approx(1.1027, abs=1e-3)


def test_sweep_square_first_row(capsys):
    code, out, _ = run(capsys, "sweep", "--packing", "square", "--alpha0", "0", "--xi", "1.001:2", "--samples", "100")
    assert code == 0
    _, rows = csv_rows(out)
    assert float(rows[0]["u_bs"]) == pytest.approx(0.6366, abs=1e-3)


def test_sweep_csv_layout(capsys):
    _, out, _ = run(capsys, "sweep", "--packing", "hex60", "--xi", "2:8", "--samples", "400")
    lines = out.splitlines()
    assert lines[0] == "xi,n,alpha,u_bs,u_vs,chi,a_body_tilde,validity"
    assert any(l.startswith("# min xi=") and " u_bs=" in l for l in lines)
    assert any(l.startswith("# max xi=") for l in lines)
    # 17 significant digits
    assert lines[1].split(",")[2] == format(float(lines[1].split(",")[2]), ".17g")
    assert "\r" not in out


def test_sweep_infinity_serialised(capsys):
    _, out, _ = run(capsys, "sweep", "--packing", "hex60", "--xi", "1:2", "--samples", "5")
    _, rows = csv_rows(out)
    assert rows[0]["u_bs"] == "+inf"
    _, out, _ = run(capsys, "sweep", "--packing", "hex60", "--xi", "1:2", "--samples", "5", "--format", "json")
    assert json.loads(out)["points"][0]["u_bs"] == "+inf"


def test_sweep_invalid_points_have_empty_fields(capsys):
    _, out, _ = run(
        capsys, "sweep", "--packing", "hex60", "--alpha0", "0.3", "--xi", "1:1.5",
        "--samples", "40", "--spacing", "linear", "--sigma", "0.05",
    )
    _, rows = csv_rows(out)
    bad = [r for r in rows if r["validity"] == "invalid"]
    assert bad
    assert all(r["u_bs"] == "" and r["u_vs"] == "" for r in bad)


def test_sweep_samples_one_is_usage_error(capsys):
    code, _, _ = run(capsys, "sweep", "--xi", "1:2", "--samples", "1")
    assert code == 1


@pytest.mark.parametrize("xi", ["1", "a:b", "0.5:2", "2:1"])
def test_sweep_bad_range_is_usage_error(capsys, xi):
    code, _, _ = run(capsys, "sweep", "--xi", xi)
    assert code == 1


def test_sweep_bad_alpha0_is_usage_error(capsys):
    code, _, _ = run(capsys, "sweep", "--xi", "1:2", "--alpha0", "1.2")
    assert code == 1


def test_sweep_unwritable_output(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--xi", "1:2", "--samples", "3", "--output", str(tmp_path / "no" / "x.csv"))
    assert code == 4


def test_sweep_degrees(capsys):
    _, a, _ = run(capsys, "sweep", "--xi", "1:3", "--samples", "9", "--alpha0", "30", "--degrees")
    _, b, _ = run(capsys, "sweep", "--xi", "1:3", "--samples", "9", "--alpha0", repr(math.pi / 6))
    assert a == b


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_sweep_output_is_deterministic(capsys, tmp_path, fmt):
    paths = [tmp_path / f"run{i}.{fmt}" for i in range(3)]
    args = ["sweep", "--packing", "square", "--alpha0", "0.1", "--xi", "1:40", "--samples", "300", "--format", fmt]
    assert main(args + ["--output", str(paths[0])]) == 0
    assert main(args + ["--output", str(paths[1])]) == 0
    assert main(args + ["--output", str(paths[2]), "--jobs", "3"]) == 0
    data = [p.read_bytes() for p in paths]
    assert data[0] == data[1] == data[2]


def test_sweep_jobs_env_fallback(capsys, monkeypatch):
    base = run(capsys, "sweep", "--xi", "1:9", "--samples", "50")[1]
    monkeypatch.setenv("BREATHKIT_JOBS", "2")
    assert run(capsys, "sweep", "--xi", "1:9", "--samples", "50")[1] == base
    monkeypatch.setenv("BREATHKIT_JOBS", "many")
    assert run(capsys, "sweep", "--xi", "1:9", "--samples", "50")[0] == 1


def test_json_round_trip_is_bit_exact(capsys):
    sc = PackingScenario.create("hex60", 0.3)
    cfg = SweepConfig(sc, 1.0, 100.0, 500, Spacing.LOG2)
    points = run_sweep(cfg)
    code, out, _ = run(capsys, "sweep", "--packing", "hex60", "--alpha0", "0.3", "--xi", "1:100", "--samples", "500", "--format", "json")
    assert code == 0
    back = bio.read_sweep_json(out)
    assert len(back) == len(points)
    for p, q in zip(points, back):
        for f in ("xi", "alpha", "u_bs", "u_vs", "chi", "a_body_tilde"):
            assert same_float(getattr(p, f), getattr(q, f)), f
        assert (p.n, p.validity) == (q.n, q.validity)


def test_csv_round_trip_is_bit_exact(capsys):
    sc = PackingScenario.create("square", 0.0)
    points = run_sweep(SweepConfig(sc, 1.0, 50.0, 300))
    _, out, _ = run(capsys, "sweep", "--packing", "square", "--xi", "1:50", "--samples", "300")
    back = bio.read_sweep_csv(out)
    for p, q in zip(points, back):
        for f in ("xi", "alpha", "u_bs", "u_vs", "chi", "a_body_tilde"):
            assert same_float(getattr(p, f), getattr(q, f)), f


def test_json_layout(capsys):
    _, out, _ = run(capsys, "sweep", "--xi", "2:8", "--samples", "300", "--format", "json")
    doc = json.loads(out)
    assert set(doc) == {"config", "points", "extrema"}
    assert list(doc["points"][0]) == ["xi", "n", "alpha", "u_bs", "u_vs", "chi", "a_body_tilde", "validity"]
    assert doc["config"]["command"] == "sweep"
    assert doc["extrema"]["minima"]


# --- eval ------------------------------------------------------------------


def test_eval_points(capsys):
    code, out, _ = run(capsys, "eval", "--packing", "hex60", "--xi", "4,2.802")
    assert code == 0
    _, rows = csv_rows(out)
    assert float(rows[0]["u_bs"]) == pytest.approx(1.102657790843584, rel=1e-15)
    assert float(rows[1]["chi"]) == pytest.approx(0.785, abs=1e-3)


def test_eval_shrinking_is_domain_error(capsys):
    code, _, _ = run(capsys, "eval", "--xi", "0.5")
    assert code == 2


# --- verify ----------------------------------------------------------------


def test_verify_random(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "200", "--seed", "42")
    assert code == 0
    worst = float(next(l for l in out.splitlines() if l.startswith("worst_rel_error,")).split(",")[1])
    assert worst < 1e-10


def test_verify_single_square(capsys):
    code, _, _ = run(capsys, "verify", "--trials", "1", "--seed", "7", "--packing", "square", "--xi", "1.02")
    assert code == 0


def test_verify_zero_trials(capsys):
    code, _, _ = run(capsys, "verify", "--trials", "0")
    assert code == 1


def test_verify_is_deterministic(capsys):
    a = run(capsys, "verify", "--trials", "20", "--seed", "5", "--format", "json")[1]
    b = run(capsys, "verify", "--trials", "20", "--seed", "5", "--format", "json")[1]
    assert a == b
    assert json.loads(a)["status"] == "pass"


def test_verify_reports_failures(capsys, monkeypatch):
    from breathkit import cli

    monkeypatch.setattr(cli, "ORACLE_RTOL", -1.0)
    code, out, _ = run(capsys, "verify", "--trials", "2", "--seed", "1")
    assert code == 3
    assert "# FAIL trial=0" in out and "xi=" in out and "alpha0=" in out


# --- limits ----------------------------------------------------------------


def test_limits_constants(capsys):
    code, out, _ = run(capsys, "limits")
    assert code == 0
    assert "sqrt12_over_pi,1.102657790" in out
    assert "pi_over_sqrt12,0.906899682" in out
    assert "two_over_pi,0.636619772" in out


def test_limits_table(capsys):
    _, out, _ = run(capsys, "limits")
    rows = [l for l in out.splitlines() if l.startswith(("square,", "hex60,"))]
    assert len(rows) == 2 * 3 * 7
    assert "hex60,0,0,,,degenerate" in rows
    _, out, _ = run(capsys, "limits", "--format", "json")
    doc = json.loads(out)
    assert doc["constants"]["sqrt12_over_pi"] == pytest.approx(1.102657790843584)


# --- parser ----------------------------------------------------------------


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["sweep"], ["limits", "--format", "xml"]])
def test_usage_errors(capsys, argv):
    assert main(argv) == 1


def test_manifest_rejects_unknown_command():
    with pytest.raises(ValueError):
        bio.RunManifest("plot")
    with pytest.raises(ValueError):
        bio.RunManifest("sweep", output_format="xml")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "breathkit", "limits"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("sqrt12_over_pi,1.102657790")
