"""Stochastic one-year reserve risk engine (chain-ladder based)."""

from ._core import (
    BacktestCell,
    BacktestConfig,
    BacktestReport,
    DevFactorEstimates,
    FiducialCoverageRow,
    ScrResult,
    SimulatedTriangle,
    Triangle,
    TrueParams,
    cdr_loss,
    compute_scr,
    density_a,
    density_b,
    estimate,
    fiducial_coverage,
    load_backtest_config,
    load_triangle,
    parse_triangle,
    reserve_t0,
    reserve_t1,
    run_backtest,
    scr_fiducial,
    scr_fiducial_analytic,
    serialize_triangle,
    simulate_triangle,
)

__all__ = [
    "BacktestCell",
    "BacktestConfig",
    "BacktestReport",
    "DevFactorEstimates",
    "FiducialCoverageRow",
    "ScrResult",
    "SimulatedTriangle",
    "Triangle",
    "TrueParams",
    "cdr_loss",
    "compute_scr",
    "density_a",
    "density_b",
    "estimate",
    "fiducial_coverage",
    "load_backtest_config",
    "load_triangle",
    "parse_triangle",
    "reserve_t0",
    "reserve_t1",
    "run_backtest",
    "scr_fiducial",
    "scr_fiducial_analytic",
    "serialize_triangle",
    "simulate_triangle",
]

__version__ = "0.1.0"
