"""
Continuum limit of the fractional chain: Riesz kernels of the infinite and the
L-periodic string, the lattice scaling relations, and lattice-to-continuum
convergence checks.
"""
import math
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from src.chain1d import asymptotic_prefactor, finite_element_periodized, infinite_element, is_integer_half_order
from src.config import DEFAULT_KERNEL_TERMS
from src.errors import NON_MONOTONE_CONVERGENCE, DomainError, SingularityError
from src.logging import get_logger
from src.specfun import hurwitz_zeta
from src.types import (
    ChainConfig,
    ContinuumConfig,
    ConvergenceReport,
    ConvergenceRow,
    KernelRoute,
    KernelSamples,
    ZetaVariant,
)

logger = get_logger("continuum")

def _kernel_prefactor(alpha: float) -> float:
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if is_integer_half_order(alpha):
        raise DomainError(f"The Riesz kernel vanishes away from x=0 for integer alpha/2 (alpha={alpha})")
    return asymptotic_prefactor(alpha)

def riesz_kernel_infinite(alpha: float, x: float) -> float:
    """Gamma(alpha+1) sin(alpha pi/2) / (pi |x|^{alpha+1})."""
    prefactor = _kernel_prefactor(alpha)
    if x == 0:
        raise SingularityError("The Riesz kernel is singular at x=0")
    return prefactor * abs(x) ** (-alpha - 1.0)

def _reduce(cfg: ContinuumConfig, x: float) -> float:
    """x mod L in (0, L); multiples of L are singular."""
    if cfg.is_infinite:
        raise DomainError("The periodic kernel needs a finite period L")
    x0 = math.fmod(x, cfg.period)
    if x0 < 0:
        x0 += cfg.period
    if x0 == 0 or math.isclose(x0, cfg.period, rel_tol=0.0, abs_tol=1e-15 * cfg.period):
        raise SingularityError(f"x={x} is a multiple of the period L={cfg.period}")
    return x0

def periodic_kernel_direct(
    cfg: ContinuumConfig,
    x: float,
    terms: int = DEFAULT_KERNEL_TERMS,
    return_bound: bool = False,
) -> Union[float, Tuple[float, float]]:
    """
    Image sum prefactor * sum_{|n| <= terms} |x - nL|^{-alpha-1}, closed by a
    midpoint-rule integral for |n| > terms.

    With return_bound=True also returns a bound on the remaining absolute error.
    """
    prefactor = _kernel_prefactor(cfg.alpha)
    if int(terms) != terms or terms < 1:
        raise DomainError(f"terms must be a positive integer, got {terms}")
    L, beta = cfg.period, cfg.alpha + 1.0
    x0 = _reduce(cfg, x)

    n = np.arange(1, int(terms) + 1, dtype=float)
    images = (n * L + x0) ** (-beta) + (n * L - x0) ** (-beta)
    total = x0 ** (-beta) + float(np.sum(images[::-1]))

    edge = (terms + 0.5) * L
    tail = ((edge + x0) ** (1.0 - beta) + (edge - x0) ** (1.0 - beta)) / ((beta - 1.0) * L)
    bound = beta * L * (edge - x0) ** (-beta - 1.0) / 6.0

    value = prefactor * (total + tail)
    if return_bound:
        return value, abs(prefactor) * bound
    return value

def periodic_kernel_zeta(cfg: ContinuumConfig, x: float) -> float:
    """
    prefactor / L^{alpha+1} * (-xi^{-alpha-1} + zeta~(alpha+1, xi) + zeta~(alpha+1, -xi)),
    xi = (x mod L)/L. zeta~ at -xi is read through its absolute-value series.
    """
    prefactor = _kernel_prefactor(cfg.alpha)
    x0 = _reduce(cfg, x)
    L, beta = cfg.period, cfg.alpha + 1.0
    xi = x0 / L
    bracket = (
        -(xi ** (-beta))
        + hurwitz_zeta(ZetaVariant.ABSOLUTE_VALUE, beta, xi)
        + hurwitz_zeta(ZetaVariant.ABSOLUTE_VALUE, beta, -xi)
    )
    return prefactor * L ** (-beta) * bracket

def scaling(h: float, alpha: float, cfg: ContinuumConfig) -> Tuple[float, float]:
    """Omega^2(h) = A h^{-alpha}, mu(h) = rho0 h: total mass and elastic energy stay finite as h -> 0."""
    if not h > 0:
        raise DomainError(f"h must be > 0, got {h}")
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    return cfg.a_const * h ** (-alpha), cfg.rho0 * h

def sample_kernel(
    cfg: ContinuumConfig,
    abscissae: Iterable[float],
    route: KernelRoute = KernelRoute.HURWITZ_ZETA,
    terms: int = DEFAULT_KERNEL_TERMS,
) -> KernelSamples:
    route = KernelRoute(route)
    xs = np.asarray(list(abscissae), dtype=float)
    if route is KernelRoute.INFINITE_SPACE:
        if not cfg.is_infinite:
            raise DomainError("The infinite-space kernel takes no period")
        values = [riesz_kernel_infinite(cfg.alpha, x) for x in xs]
    elif route is KernelRoute.HURWITZ_ZETA:
        values = [periodic_kernel_zeta(cfg, x) for x in xs]
    else:
        values = [periodic_kernel_direct(cfg, x, terms) for x in xs]

    xs.setflags(write=False)
    values = np.array(values)
    values.setflags(write=False)
    return KernelSamples(abscissae=xs, values=values, config=cfg, route=route)

def _check_limit_inputs(alpha: float, x: float, h_sequence: Sequence[float]):
    if not 0 < alpha < 2:
        raise DomainError(f"The continuum-limit check needs 0 < alpha < 2, got {alpha}")
    if x == 0:
        raise SingularityError("The continuum limit is evaluated away from x=0")
    hs = [float(h) for h in h_sequence]
    if not hs or any(h <= 0 for h in hs):
        raise DomainError("h_sequence must hold positive lattice constants")
    if any(b >= a for a, b in zip(hs, hs[1:])):
        raise DomainError(f"h_sequence must be strictly decreasing, got {hs}")
    return hs

def _nearest_site(x: float, h: float) -> Tuple[int, bool]:
    ratio = abs(x) / h
    site = int(round(ratio))
    if site == 0:
        raise DomainError(f"h={h} is too coarse to resolve x={x}")
    return site, not math.isclose(ratio, site, rel_tol=1e-12)

def _finish_report(report: ConvergenceReport) -> ConvergenceReport:
    deviations = [row.deviation for row in report.rows]
    report.monotone = all(b < a for a, b in zip(deviations, deviations[1:]))
    if not report.monotone:
        report.status = NON_MONOTONE_CONVERGENCE
        jitter = any(row.rounded for row in report.rows)
        logger.warning(
            f"Non-monotone convergence at alpha={report.alpha}, x={report.x}: deviations {deviations}"
            + (" (x/h rounded to the nearest site)" if jitter else "")
        )
    return report

def continuum_limit_check(
    alpha: float,
    x: float,
    h_sequence: Sequence[float],
    cfg: ContinuumConfig,
) -> ConvergenceReport:
    """
    Scaled lattice kernel -rho0 A h^{-alpha-1} f_{round(|x|/h)} (Omega^2 = 1 elements) against
    rho0 A K_inf(x) along decreasing h. Non-monotone deviations are reported in the status,
    never raised.
    """
    hs = _check_limit_inputs(alpha, x, h_sequence)
    unit_chain = ChainConfig(size=None, alpha=alpha)
    target = cfg.rho0 * cfg.a_const * riesz_kernel_infinite(alpha, x)

    report = ConvergenceReport(alpha=alpha, x=x, mode="infinite")
    for h in hs:
        site, rounded = _nearest_site(x, h)
        omega_sq, mass = scaling(h, alpha, cfg)
        # mu Omega^2 / h^2 = rho0 A h^{-alpha-1}
        estimate = -(mass * omega_sq / h**2) * infinite_element(unit_chain, site)
        deviation = abs(estimate - target) / abs(target)
        report.rows.append(ConvergenceRow(h, site, estimate, target, deviation, rounded))
        logger.debug(f"h={h}: site={site}, estimate={estimate:.10g}, deviation={deviation:.3e}")
    return _finish_report(report)

def periodic_limit_check(
    alpha: float,
    x: float,
    h_sequence: Sequence[float],
    cfg: ContinuumConfig,
) -> ConvergenceReport:
    """
    Ring of N = L/h sites: scaled periodized elements against rho0 A K_L(x).
    Each h must divide the period.
    """
    hs = _check_limit_inputs(alpha, x, h_sequence)
    if cfg.is_infinite:
        raise DomainError("The periodic limit check needs a finite period L")
    target = cfg.rho0 * cfg.a_const * periodic_kernel_zeta(cfg, x)

    report = ConvergenceReport(alpha=alpha, x=x, mode="periodic")
    for h in hs:
        n_sites = int(round(cfg.period / h))
        if n_sites < 3 or not math.isclose(n_sites * h, cfg.period, rel_tol=1e-12):
            raise DomainError(f"h={h} must divide L={cfg.period} into at least 3 sites")
        site, rounded = _nearest_site(x, h)
        omega_sq, mass = scaling(h, alpha, cfg)
        ring = ChainConfig(size=n_sites, alpha=alpha)
        estimate = -(mass * omega_sq / h**2) * finite_element_periodized(ring, site % n_sites)
        deviation = abs(estimate - target) / abs(target)
        report.rows.append(ConvergenceRow(h, site, estimate, target, deviation, rounded))
        logger.debug(f"h={h}: N={n_sites}, site={site}, estimate={estimate:.10g}, deviation={deviation:.3e}")
    return _finish_report(report)
