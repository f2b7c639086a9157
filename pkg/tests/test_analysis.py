import math

import numpy as np
import pytest

from homogplate.analysis import (
    TABLE1_PRESET,
    calibrate_convention,
    discrepancy,
    emit_trace,
    full_precision_csv,
    read_table_csv,
    reproduce_table1,
    round_half_away,
    rounded_table,
    run_sweep,
    table_csv,
    table_deviation,
    table_structure_checks,
    trace_csv,
)
from homogplate.errors import GeometryError, InvalidConfigError, ShapeError
from homogplate.field import NormKind, ScalarField, make_grid, norm
from homogplate.homogenized import HomogenizedProblem, fixed_point_solve
from homogplate.table1_data import PUBLISHED_TABLE


def test_discrepancy_examples():
    g = make_grid(16)
    a = ScalarField.from_function(g, lambda x, y: np.exp(x) * y)
    b = ScalarField.from_function(g, lambda x, y: x + y)
    assert discrepancy(a, a.copy()) == 0.0
    assert discrepancy(ScalarField.constant(g, 10.0), ScalarField.constant(g, 10.02), "linf") == pytest.approx(0.02)
    for kind in NormKind:
        assert discrepancy(a, b, kind) == discrepancy(b, a, kind)


def test_discrepancy_grid_mismatch():
    with pytest.raises(ShapeError):
        discrepancy(ScalarField.zeros(make_grid(8)), ScalarField.zeros(make_grid(16)))


def test_sweep_zero_source():
    g = make_grid(64)
    res = run_sweep(["1/2"], 0.5, 64, ScalarField.zeros(g), 10.0)
    (rec,) = res.records
    assert rec.discrepancy_l2h == rec.discrepancy_linf == 0.0
    assert rec.baseline_discrepancy_l2h == rec.baseline_discrepancy_linf == 0.0


def test_sweep_sorting_and_failures():
    g = make_grid(128)
    res = run_sweep(["1/3", "1/2", "1/4"], 0.35, 128, ScalarField.constant(g, 1.0), 10.0, baseline_mu0=False)
    assert [r.epsilon for r in res.records] == ["1/2", "1/3"]
    assert [f.epsilon for f in res.failures] == ["1/4"]
    assert res.failures[0].error == "UnderResolvedGeometryError"
    assert all(r.discrepancy_l2h >= 0 and r.discrepancy_linf >= 0 for r in res.records)
    assert res.records[0].holes == 4 and res.records[1].holes == 9
    assert res.baseline is None and res.records[0].baseline_discrepancy_l2h is None


def test_sweep_needs_one_success():
    g = make_grid(64)
    with pytest.raises(GeometryError):
        run_sweep(["1/3"], 0.5, 64, ScalarField.constant(g, 1.0), 10.0)
    with pytest.raises(InvalidConfigError):
        run_sweep([], 0.5, 64, ScalarField.constant(g, 1.0), 10.0)


def test_sweep_reproducible_from_persisted_fields(tmp_path):
    g = make_grid(64)
    res = run_sweep(["1/2"], 0.5, 64, ScalarField.constant(g, 1.0), 10.0, keep_fields=True)
    saved = {}
    for name, field in res.fields.items():
        path = tmp_path / (name.replace("/", "-") + ".csv")
        path.write_text(full_precision_csv(field))
        saved[name] = ScalarField(g, read_table_csv(path.read_text()))
    (rec,) = res.records
    ext = saved["perforated_extended[1/2]"]
    for got, want in (
        (discrepancy(ext, saved["homogenized"], "l2h"), rec.discrepancy_l2h),
        (discrepancy(ext, saved["homogenized"], "linf"), rec.discrepancy_linf),
        (discrepancy(ext, saved["homogenized_mu0"], "l2h"), rec.baseline_discrepancy_l2h),
        (norm(ext, "h1h"), rec.h1_norm_extended),
    ):
        assert got == pytest.approx(want, rel=1e-12, abs=1e-15)


def test_sweep_parallel_matches_serial():
    g = make_grid(64)
    f = ScalarField.constant(g, 1.0)
    a = run_sweep(["1/2"], 0.5, 64, f, 10.0).to_dict()
    b = run_sweep(["1/2"], 0.5, 64, f, 10.0, jobs=2).to_dict()
    assert a == b
    assert "runtime_seconds" not in a["records"][0]


@pytest.mark.slow
def test_central_experiment(sweep_1024):
    result, _ = sweep_1024
    recs = {r.epsilon: r for r in result.records}
    assert recs["1/3"].discrepancy_l2h < recs["1/2"].discrepancy_l2h
    assert recs["1/3"].discrepancy_l2h < recs["1/3"].baseline_discrepancy_l2h


def test_round_half_away():
    assert round_half_away(10.0205) == 10.021
    assert round_half_away(0.0005) == 0.001
    assert round_half_away(-0.0005) == -0.001
    assert round_half_away(10.0204999) == 10.02
    assert round_half_away(10.0) == 10.0


def test_table1_reproduction_structure():
    rep = reproduce_table1()
    assert rep.ok, rep.checks
    tab = rep.table
    assert tab.shape == (17, 17)
    assert (tab[0] == 10.0).all()
    assert tab[1, 1] == tab[15, 15] == tab[15, 1] == tab[1, 15]
    assert tab[8, 8] == tab.max()
    assert rep.u.values.argmax() == 8 * 17 + 8
    text = rep.format()
    assert "PASS" in text and "FAIL" not in text
    assert rep.csv().splitlines()[0] == "," + ",".join(str(i) for i in range(17))
    assert rep.csv().splitlines()[1].split(",")[1:] == ["10.000"] * 17


def test_structure_checks_catch_asymmetry():
    rep = reproduce_table1()
    u = rep.u.copy()
    u.values[3, 5] += 0.004
    checks = table_structure_checks(u, 10.0, 10.1)
    assert not checks["8-fold symmetry after rounding"]
    u = rep.u.copy()
    u.values[2, 2] = 10.5
    checks = table_structure_checks(u, 10.0, 10.1)
    assert not checks["maximum only at the central node block"]
    assert not checks["interior values in (10, 10.1)"]


def test_published_table_fixture():
    pub = np.asarray(PUBLISHED_TABLE)
    assert pub.shape == (17, 17)
    assert pub[8, 8] == 10.021 and pub.max() == 10.021
    assert (pub[0] == 10).all() and (pub[:, 16] == 10).all()
    assert pub[1, 1] == 10.004
    assert table_deviation(pub, PUBLISHED_TABLE) == 0.0


def test_calibration_report():
    rep = calibrate_convention()
    assert rep["self_comparison_deviation"] == 0.0
    default = rep["candidates"][0]
    assert default["convention"].startswith("unit square, mu = pi")
    assert default["centre_deviation"] == pytest.approx(abs(default["centre_value"] - 10.021), abs=1e-12)
    assert default["centre_deviation"] > 0.03
    devs = [c["linf_deviation"] for c in rep["candidates"]]
    if rep["best_beats_default"]:
        assert min(devs) < default["linf_deviation"]
        assert rep["best_convention"] in rep["summary"]
    else:
        assert "no candidate" in rep["summary"]
    assert set(rep["stop_tol_sensitivity"]["tolerances"]) == {"1e-06", "1e-10"}
    # The defaults are not altered by calibration.
    assert TABLE1_PRESET == {"n": 16, "c0": 0.5, "f": 1.0, "t_boundary": 10.0}


def test_calibration_flags_divergent_fixed_point():
    rep = calibrate_convention()
    by_name = {c["convention"]: c for c in rep["candidates"]}
    assert not by_name["unit spacing (side 16), mu = pi"]["fixed_point_converges"]
    assert by_name["unit square, mu = pi"]["fixed_point_converges"]


def _trace(f_value, n=16):
    g = make_grid(n)
    p = HomogenizedProblem(0.5, 10.0, ScalarField.constant(g, f_value))
    return fixed_point_solve(p)[1]


def test_emit_trace_examples():
    tr = _trace(1.0)
    rows = emit_trace(tr)
    assert rows[-1][1] <= tr.stop_tol
    assert [k for k, _ in rows] == list(range(1, tr.iterations + 1))
    deltas = [d for _, d in rows]
    assert all(deltas[k + 1] < deltas[k] for k in range(1, len(deltas) - 1))
    assert emit_trace(_trace(0.0)) == [(1, 0.0)]


def test_trace_csv_lossless():
    tr = _trace(1.0)
    lines = trace_csv(tr).splitlines()
    assert lines[0] == "iteration,delta"
    assert [float(l.split(",")[1]) for l in lines[1:]] == tr.deltas


def test_table_csv_roundtrip():
    g = make_grid(4)
    u = ScalarField.from_function(g, lambda x, y: np.pi * x + np.e * y)
    back = read_table_csv(full_precision_csv(u))
    assert np.array_equal(back, u.values)
    assert table_csv(rounded_table(u)).splitlines()[2].startswith("1,0.680,1.465,")
    assert math.isclose(back[1, 0], np.e / 4)
