"""End-to-end checks of the Python bindings against the bundled data."""

from pathlib import Path

import pytest

import resrisk

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="module")
def triangle():
    return resrisk.load_triangle(str(DATA / "triangle_gl.csv"))


def test_triangle_shape(triangle):
    assert triangle.horizon == 8
    assert triangle.years == 9
    assert triangle.cell(0, 0) == 2202584.0
    assert triangle.cell(0, 8) == 3678633.0
    rows = triangle.rows()
    assert len(rows) == 9
    assert len(rows[8]) == 1
    round_trip = resrisk.parse_triangle(resrisk.serialize_triangle(triangle))
    assert round_trip.rows() == rows


def test_reserves(triangle):
    _, total_g0 = resrisk.reserve_t0(triangle, 0)
    _, total_g1 = resrisk.reserve_t0(triangle, 1)
    assert total_g0 == pytest.approx(2243574.0, abs=1.0)
    assert total_g1 == pytest.approx(2237826.0, abs=1.0)

    by_year, total = resrisk.reserve_t0(triangle, 1)
    assert by_year[0] == 0.0
    assert sum(by_year) == pytest.approx(total, rel=1e-12)


def test_estimates_slicing(triangle):
    est = resrisk.estimate(triangle, 1)
    assert est.gamma == 1
    assert len(est.fhat) == 8
    assert len(est.sigma2hat) == 8
    assert est.fhat[0] > 1.4  # first development factor
    assert est.sigma2hat[7] == 0.0  # single observed ratio, no dof


def test_one_year_reval(triangle):
    z = [0.0] * triangle.horizon  # no payments next year
    loss = resrisk.cdr_loss(triangle, z, 0)
    assert isinstance(loss, float)


def test_compute_scr_deterministic(triangle):
    one = resrisk.compute_scr(triangle, "bootstrap", 0, 0.995, 2000, 7, workers=1)
    two = resrisk.compute_scr(triangle, "bootstrap", 0, 0.995, 2000, 7, workers=2)
    assert one.scr == two.scr
    assert one.method == "bootstrap"
    assert one.scenarios == 2000
    assert one.seed == 7
    # Plausibility: the one-year SCR is a small fraction of the reserve.
    assert 0.02 * one.reserve0 < one.scr < 0.5 * one.reserve0

    without = resrisk.compute_scr(triangle, "without", 0, 0.995, 2000, 7)
    assert without.scr > 0.0


def test_backtest_tiny():
    cfg = resrisk.load_backtest_config(str(DATA / "backtest_g0.cfg"))
    assert cfg.s == 20000 and cfg.t == 2000
    cfg.s = 120
    cfg.t = 150
    cfg.workers = 2
    report = resrisk.run_backtest(cfg)
    assert len(report.cells) == 12
    for cell in report.cells:
        assert 0 <= cell.successes <= cfg.s
        assert cell.probability == pytest.approx(cell.successes / cfg.s)
    assert report.to_csv().startswith(
        "method,alpha,successes,s,probability,std_error"
    )
    assert "one-year solvency backtest" in report.to_table()


def test_simulate_triangle_roundtrip():
    cfg = resrisk.load_backtest_config(str(DATA / "backtest_g1.cfg"))
    sim = resrisk.simulate_triangle(cfg.true_params, seed=5)
    assert sim.tri.horizon == 10
    est = resrisk.estimate(sim.tri, 1)
    assert est.fhat[0] == pytest.approx(1.5, abs=0.5)


def test_fiducial_tiny():
    rows = resrisk.fiducial_coverage(1.0, 10, [0.9, 0.995], 150, 200, 3, workers=2)
    assert [row.alpha for row in rows] == [0.9, 0.995]
    for row in rows:
        assert 0.0 <= row.coverage_fiducial <= 1.0
        assert row.s == 150

    exact = resrisk.scr_fiducial_analytic(10, 4.0, 0.9)
    mc = resrisk.scr_fiducial(10, 4.0, 0.9, 100000, 11)
    assert mc == pytest.approx(exact, rel=0.05)


def test_density_identity():
    for x in (0.1, 0.5, 1.0, 2.0):
        assert resrisk.density_b(x, 10) == pytest.approx(
            resrisk.density_a(1.0 / x, 10) / x**2, rel=1e-12
        )


def test_error_propagation():
    with pytest.raises(RuntimeError):
        resrisk.Triangle([[100.0, 150.0], [110.0, 120.0]])  # bad row lengths
    flat = resrisk.Triangle([[100.0, 150.0, 165.0], [110.0, 165.0], [120.0]])
    with pytest.raises(RuntimeError):
        resrisk.compute_scr(flat, "bootstrap", 0, 0.9, 10, 1)
