import sys
import math
from pathlib import Path

import numpy as np
import pytest

# Add project root to sys.path
sys.path.append(str(Path(__file__).parent.parent))

from src.continuum import (
    continuum_limit_check,
    periodic_kernel_direct,
    periodic_kernel_zeta,
    periodic_limit_check,
    riesz_kernel_infinite,
    sample_kernel,
    scaling,
)
from src.errors import NON_MONOTONE_CONVERGENCE, DomainError, SingularityError
from src.lattice_nd import riesz_constant
from src.types import ContinuumConfig, ConvergenceReport, ConvergenceRow, KernelRoute

def test_riesz_kernel_infinite():
    assert riesz_kernel_infinite(1.0, 1.0) == pytest.approx(1 / math.pi, rel=1e-14)
    assert riesz_kernel_infinite(1.0, 1.0) == pytest.approx(riesz_constant(1, 1.0), rel=1e-14)
    assert riesz_kernel_infinite(1.0, 2.0) == pytest.approx(1 / math.pi / 8, rel=1e-14)
    assert riesz_kernel_infinite(0.7, -1.3) == riesz_kernel_infinite(0.7, 1.3)

def test_riesz_kernel_infinite_errors():
    with pytest.raises(SingularityError):
        riesz_kernel_infinite(1.0, 0.0)
    with pytest.raises(DomainError):
        riesz_kernel_infinite(2.0, 1.0)
    with pytest.raises(DomainError):
        riesz_kernel_infinite(-1.0, 1.0)

@pytest.mark.parametrize("alpha, period, x", [(0.5, 1.0, 0.3), (1.5, 2 * math.pi, 1.0), (1.0, 3.0, 2.2)])
def test_zeta_route_matches_direct_sum(alpha, period, x):
    cfg = ContinuumConfig(alpha=alpha, period=period)
    direct, bound = periodic_kernel_direct(cfg, x, return_bound=True)
    zeta = periodic_kernel_zeta(cfg, x)
    assert zeta == pytest.approx(direct, rel=1e-8)
    assert bound < 1e-8 * abs(zeta)

def test_periodic_kernel_symmetries():
    cfg = ContinuumConfig(alpha=1.2, period=2.5)
    for x in (0.1, 0.9, 1.7):
        value = periodic_kernel_zeta(cfg, x)
        assert periodic_kernel_zeta(cfg, x + 2.5) == pytest.approx(value, rel=1e-12)
        assert periodic_kernel_zeta(cfg, 2.5 - x) == pytest.approx(value, rel=1e-12)
        assert periodic_kernel_zeta(cfg, -x) == pytest.approx(value, rel=1e-12)
        assert value > 0
    assert periodic_kernel_direct(cfg, 0.4, terms=1000) == pytest.approx(
        periodic_kernel_direct(cfg, 2.1, terms=1000), rel=1e-10
    )

@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_periodic_kernel_decreases_on_half_period(alpha):
    cfg = ContinuumConfig(alpha=alpha, period=2.0)
    x = np.linspace(0.05, 1.0, 20)
    values = np.array([periodic_kernel_zeta(cfg, xi) for xi in x])
    assert np.all(values > 0)
    assert np.all(np.diff(values) < 0)

def test_periodic_kernel_approaches_infinite_space():
    x = 0.5
    values = [periodic_kernel_zeta(ContinuumConfig(alpha=1.0, period=L), x) for L in (10.0, 100.0, 1000.0)]
    infinite = riesz_kernel_infinite(1.0, x)
    deviations = [abs(v - infinite) / infinite for v in values]
    assert deviations[0] > deviations[1] > deviations[2]
    assert deviations[2] < 1e-5

def test_periodic_kernel_errors():
    cfg = ContinuumConfig(alpha=1.0, period=2.0)
    for x in (0.0, 2.0, -4.0):
        with pytest.raises(SingularityError):
            periodic_kernel_zeta(cfg, x)
        with pytest.raises(SingularityError):
            periodic_kernel_direct(cfg, x, terms=10)
    with pytest.raises(DomainError):
        periodic_kernel_zeta(ContinuumConfig(alpha=1.0), 0.5)
    with pytest.raises(DomainError):
        periodic_kernel_direct(cfg, 0.5, terms=0)
    with pytest.raises(DomainError):
        periodic_kernel_zeta(ContinuumConfig(alpha=4.0, period=2.0), 0.5)

def test_scaling():
    cfg = ContinuumConfig(alpha=1.5, a_const=2.0, rho0=3.0)
    assert scaling(1.0, 1.5, cfg) == (2.0, 3.0)
    omega_h, _ = scaling(0.1, 1.5, cfg)
    omega_half, _ = scaling(0.05, 1.5, cfg)
    assert omega_half / omega_h == pytest.approx(2**1.5)
    # total mass mu(h) N(h) stays rho0 L
    for h in (0.5, 0.25, 0.125):
        _, mass = scaling(h, 1.5, cfg)
        assert mass * (4.0 / h) == pytest.approx(12.0)
    with pytest.raises(DomainError):
        scaling(0.0, 1.5, cfg)

def test_sample_kernel_routes():
    cfg = ContinuumConfig(alpha=0.8, period=1.0)
    xs = [0.1, 0.25, 0.5]
    zeta = sample_kernel(cfg, xs, KernelRoute.HURWITZ_ZETA)
    direct = sample_kernel(cfg, xs, KernelRoute.DIRECT_SUM, terms=100_000)
    assert zeta.route is KernelRoute.HURWITZ_ZETA
    np.testing.assert_allclose(zeta.values, direct.values, rtol=1e-8)
    with pytest.raises(ValueError):
        zeta.values[0] = 0.0

    infinite = sample_kernel(ContinuumConfig(alpha=0.8), [1.0, 2.0], KernelRoute.INFINITE_SPACE)
    assert infinite.values[1] / infinite.values[0] == pytest.approx(2**-1.8)
    with pytest.raises(DomainError):
        sample_kernel(cfg, xs, KernelRoute.INFINITE_SPACE)

def test_continuum_limit_alpha_one():
    report = continuum_limit_check(1.0, 1.0, [1 / 16, 1 / 64, 1 / 256], ContinuumConfig(alpha=1.0))
    assert report.monotone
    assert report.status == "ok"
    deviations = [row.deviation for row in report.rows]
    assert deviations[0] > deviations[1] > deviations[2]
    # f_p = -(4/pi)/(4p^2 - 1): relative deviation 1/(4p^2 - 1) at p = 1/h
    for row in report.rows:
        assert row.deviation == pytest.approx(1 / (4 * row.site**2 - 1), rel=1e-8)
        assert not row.rounded
    assert report.final_deviation < 0.02

def test_continuum_limit_scales_target_with_constants():
    cfg = ContinuumConfig(alpha=0.6, a_const=2.0, rho0=0.5)
    report = continuum_limit_check(0.6, 2.0, [0.5, 0.1, 0.02], cfg)
    assert report.rows[0].target == pytest.approx(riesz_kernel_infinite(0.6, 2.0), rel=1e-14)
    assert report.monotone

def test_continuum_limit_input_errors():
    cfg = ContinuumConfig(alpha=1.0)
    with pytest.raises(DomainError):
        continuum_limit_check(2.0, 1.0, [0.1, 0.01], cfg)
    with pytest.raises(SingularityError):
        continuum_limit_check(1.0, 0.0, [0.1, 0.01], cfg)
    with pytest.raises(DomainError):
        continuum_limit_check(1.0, 1.0, [0.01, 0.1], cfg)
    with pytest.raises(DomainError):
        continuum_limit_check(1.0, 1.0, [4.0], cfg)

def test_non_monotone_sequence_is_reported_not_raised():
    # x/h rounds to the same site at two spacings: deviations can jump
    report = continuum_limit_check(1.0, 1.0, [0.4, 0.35, 0.3], ContinuumConfig(alpha=1.0))
    assert [row.rounded for row in report.rows] == [True, True, True]
    assert report.monotone == all(b < a for a, b in zip(
        [row.deviation for row in report.rows], [row.deviation for row in report.rows][1:]
    ))
    if not report.monotone:
        assert report.status == NON_MONOTONE_CONVERGENCE

def test_finish_report_flags_non_monotone():
    from src.continuum import _finish_report

    report = ConvergenceReport(alpha=1.0, x=1.0, mode="infinite")
    report.rows = [ConvergenceRow(0.1, 10, 1.0, 1.0, 0.01, False), ConvergenceRow(0.05, 20, 1.0, 1.0, 0.02, False)]
    report = _finish_report(report)
    assert not report.monotone
    assert report.status == NON_MONOTONE_CONVERGENCE

def test_periodic_limit_check():
    cfg = ContinuumConfig(alpha=1.0, period=4.0)
    report = periodic_limit_check(1.0, 1.0, [1 / 4, 1 / 16, 1 / 64], cfg)
    assert report.mode == "periodic"
    assert report.rows[0].target == pytest.approx(periodic_kernel_zeta(cfg, 1.0))
    assert report.monotone
    assert report.final_deviation < 1e-3

def test_periodic_limit_check_requires_dividing_spacing():
    cfg = ContinuumConfig(alpha=1.0, period=4.0)
    with pytest.raises(DomainError):
        periodic_limit_check(1.0, 1.0, [0.3], cfg)
    with pytest.raises(DomainError):
        periodic_limit_check(1.0, 1.0, [0.5], ContinuumConfig(alpha=1.0))

if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
