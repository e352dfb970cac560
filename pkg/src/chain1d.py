"""
Fractional Laplacian on the 1D chain.

Elements f_p are those of the characteristic matrix Omega^2 (L_1)^{alpha/2} with
L_1 = 2I - A the Born-von Karman generator; the Laplacian is -mu * f.
Four routes are available: closed form (infinite chain), Fourier quadrature
(infinite chain), periodization over N-shifts and the spectral sum (ring of N sites).
"""
import math

import mpmath
import numpy as np
import scipy.fft
from scipy import special

from src.config import (
    DIRECT_SPECTRAL_MAX_N,
    MP_DIGITS,
    MP_REL_TOLERANCE,
    PERIODIZATION_TAIL_TOLERANCE,
    SPECTRAL_IMAG_TOLERANCE,
)
from src.errors import DimensionMismatch, DomainError, QuadratureNonConvergence, ToleranceNotMet
from src.logging import get_logger
from src.specfun import gen_binomial, gen_binomial_array, hurwitz_zeta
from src.toeplitz import SymToeplitz
from src.types import ChainConfig, Convention, Definiteness, FieldState, ZetaVariant

logger = get_logger("chain1d")

MAX_WRAPS = 100_000

def is_integer_half_order(alpha: float) -> bool:
    return float(alpha) % 2.0 == 0.0

def asymptotic_prefactor(alpha: float) -> float:
    """Gamma(alpha+1) sin(alpha pi/2) / pi; zero for integer alpha/2."""
    if is_integer_half_order(alpha):
        return 0.0
    return math.gamma(alpha + 1.0) * math.sin(alpha * math.pi / 2.0) / math.pi

def _require_finite(cfg: ChainConfig):
    if cfg.is_infinite:
        raise DomainError("This operation needs a finite ring (size N)")

# --- infinite chain ---

def infinite_element(cfg: ChainConfig, p: int) -> float:
    """Omega^2 (-1)^p Gamma(alpha+1) / (Gamma(alpha/2-p+1) Gamma(alpha/2+p+1))."""
    p = abs(int(p))
    sign = -1.0 if p % 2 else 1.0
    return cfg.omega_sq * sign * gen_binomial(cfg.alpha, p)

def infinite_elements(cfg: ChainConfig, p) -> np.ndarray:
    p = np.abs(np.asarray(p, dtype=np.int64))
    sign = np.where(p % 2 == 1, -1.0, 1.0)
    return cfg.omega_sq * sign * gen_binomial_array(cfg.alpha, p)

def beta_element(cfg: ChainConfig, p: int) -> float:
    """
    -Omega^2 sin(alpha pi/2)/pi * B(p - alpha/2, alpha + 1), valid for |p| > alpha/2.

    Equal to infinite_element there; every Gamma argument is positive, which exposes
    f_p = asymptote * (1 + O(p^-2)).
    """
    p = abs(int(p))
    if p <= cfg.alpha / 2:
        raise DomainError(f"Beta form needs |p| > alpha/2, got p={p}, alpha={cfg.alpha}")
    log_beta = special.betaln(p - cfg.alpha / 2.0, cfg.alpha + 1.0)
    return -cfg.omega_sq * math.sin(cfg.alpha * math.pi / 2.0) / math.pi * math.exp(log_beta)

def _wrap_elements(cfg: ChainConfig, q: np.ndarray) -> np.ndarray:
    """Closed-form elements for q >= 1, through the Beta form wherever q > alpha/2."""
    q = np.asarray(q, dtype=np.int64)
    out = np.empty(q.shape)
    far = q > cfg.alpha / 2.0
    log_beta = special.betaln(q[far] - cfg.alpha / 2.0, cfg.alpha + 1.0)
    out[far] = -cfg.omega_sq * math.sin(cfg.alpha * math.pi / 2.0) / math.pi * np.exp(log_beta)
    out[~far] = infinite_elements(cfg, q[~far])
    return out

def infinite_element_quadrature(cfg: ChainConfig, p: int) -> float:
    """
    (Omega^2/pi) int_0^pi cos(p k) (2 sin(k/2))^alpha dk at MP_DIGITS significant digits.

    The integral cancels to ~|p|^{-alpha-1} of its integrand scale, so double precision
    runs out of digits around |p| ~ 50. Panels span half an oscillation period.
    """
    p = abs(int(p))
    ctx = mpmath.MPContext()
    ctx.dps = MP_DIGITS
    alpha = ctx.mpf(cfg.alpha)

    def integrand(k):
        return ctx.cos(p * k) * (2 * ctx.sin(k / 2)) ** alpha

    n_panels = max(2, 2 * p)
    points = ctx.linspace(0, ctx.pi, n_panels + 1)
    value, error = ctx.quad(integrand, points, method="tanh-sinh", error=True)

    floor = ctx.mpf(10) ** (-(MP_DIGITS // 2))
    if error > MP_REL_TOLERANCE * max(abs(value), floor):
        raise QuadratureNonConvergence(
            f"Fourier quadrature for p={p}, alpha={cfg.alpha} stopped at error {float(error):.3e}"
        )
    logger.debug(f"quadrature p={p}: {n_panels} panels, error estimate {float(error):.3e}")
    return cfg.omega_sq * float(value / ctx.pi)

def asymptotic_element(cfg: ChainConfig, p: int) -> float:
    """-Omega^2 (Gamma(alpha+1)/pi) sin(alpha pi/2) |p|^{-alpha-1}."""
    if int(p) == 0:
        raise DomainError("The power-law asymptote is undefined at p=0")
    if is_integer_half_order(cfg.alpha):
        raise DomainError(f"The asymptote vanishes identically for integer alpha/2 (alpha={cfg.alpha})")
    return -cfg.omega_sq * asymptotic_prefactor(cfg.alpha) * abs(int(p)) ** (-cfg.alpha - 1.0)

def dispersion(cfg: ChainConfig, kappa):
    """omega^2(kappa) = Omega^2 (4 sin^2(kappa/2))^{alpha/2}."""
    value = cfg.omega_sq * np.abs(2.0 * np.sin(np.asarray(kappa, dtype=float) / 2.0)) ** cfg.alpha
    return float(value) if np.ndim(value) == 0 else value

def laurent_partial_sum(alpha: float, kappa: float, P: int) -> float:
    """f_0 + 2 sum_{p=1}^{P} f_p cos(p kappa) with Omega^2 = 1."""
    if int(P) != P or P < 0:
        raise DomainError(f"P must be a non-negative integer, got {P}")
    cfg = ChainConfig(size=None, alpha=alpha)
    p = np.arange(int(P) + 1)
    f = infinite_elements(cfg, p)
    weights = np.where(p == 0, 1.0, 2.0) * np.cos(p * kappa)
    return float(np.sum((weights * f)[::-1]))

# --- finite ring ---

def _check_site(cfg: ChainConfig, p: int) -> int:
    _require_finite(cfg)
    if int(p) != p or not 0 <= p < cfg.size:
        raise DomainError(f"p must be an integer in [0, {cfg.size - 1}], got {p}")
    return int(p)

def wrap_count(cfg: ChainConfig) -> int:
    """
    Shifts summed exactly before the asymptotic tail takes over; the tail's remainder
    is O((S N)^{-alpha-2}).
    """
    target = PERIODIZATION_TAIL_TOLERANCE ** (-1.0 / (cfg.alpha + 2.0))
    return int(min(MAX_WRAPS, max(1, math.ceil(target / cfg.size))))

def finite_element_periodized(cfg: ChainConfig, p: int) -> float:
    """
    sum_s f^{inf}_{|p+sN|}.

    Integer alpha/2: the row is a finite binomial sum. Otherwise shifts s = 1..S are
    summed from the closed form and the rest from the power-law asymptote in closed
    form via the Hurwitz zeta function.
    """
    p = _check_site(cfg, p)
    N, alpha = cfg.size, cfg.alpha

    if is_integer_half_order(alpha):
        m = int(alpha // 2)
        reach = m // N + 1
        total = 0.0
        for s in range(-reach, reach + 1):
            q = abs(p + s * N)
            if q <= m:
                total += infinite_element(cfg, q)
        return total

    S = wrap_count(cfg)
    s = np.arange(1, S + 1, dtype=np.int64)
    wraps = _wrap_elements(cfg, s * N + p) + _wrap_elements(cfg, s * N - p)
    exact = infinite_element(cfg, p) + float(np.sum(wraps[::-1]))

    beta = alpha + 1.0
    tail = -cfg.omega_sq * asymptotic_prefactor(alpha) * N ** (-beta) * (
        hurwitz_zeta(ZetaVariant.STANDARD, beta, S + 1 + p / N)
        + hurwitz_zeta(ZetaVariant.STANDARD, beta, S + 1 - p / N)
    )
    logger.debug(f"periodized N={N} p={p}: {S} exact wraps, tail={tail:.3e}")
    return exact + tail

def spectral_values(cfg: ChainConfig) -> np.ndarray:
    """Omega^2 (4 sin^2(kappa_l/2))^{alpha/2} for l = 0..N-1; exactly 0 at l = 0."""
    _require_finite(cfg)
    ell = np.arange(cfg.size)
    return cfg.omega_sq * np.abs(2.0 * np.sin(np.pi * ell / cfg.size)) ** cfg.alpha

def first_row_spectral(cfg: ChainConfig) -> np.ndarray:
    return np.real(scipy.fft.ifft(spectral_values(cfg)))

def first_row_periodized(cfg: ChainConfig) -> np.ndarray:
    _require_finite(cfg)
    return np.array([finite_element_periodized(cfg, p) for p in range(cfg.size)])

def finite_element_spectral(cfg: ChainConfig, p: int) -> float:
    """(Omega^2/N) sum_l exp(i kappa_l p) (4 sin^2(kappa_l/2))^{alpha/2}."""
    _require_finite(cfg)
    N, p = cfg.size, int(p) % cfg.size
    if N > DIRECT_SPECTRAL_MAX_N:
        return float(first_row_spectral(cfg)[p])

    values = spectral_values(cfg)
    ell = np.arange(N)
    total = np.sum(np.exp(2j * np.pi * ell * p / N) * values) / N
    scale = max(1.0, float(np.mean(values)))
    if abs(total.imag) > SPECTRAL_IMAG_TOLERANCE * scale:
        raise ToleranceNotMet(f"spectral sum for p={p} left imaginary part {total.imag:.3e}")
    return float(total.real)

def assemble_matrix(cfg: ChainConfig, convention: Convention = Convention.LAPLACIAN) -> SymToeplitz:
    """
    Laplacian convention: first row -mu * f (negative semidefinite).
    Characteristic convention: first row +f (positive semidefinite).
    The infinite chain yields a lazily indexed matrix.
    """
    convention = Convention(convention)
    if convention is Convention.LAPLACIAN:
        scale, tag = -cfg.mass, Definiteness.NEG_SEMI_DEF
    else:
        scale, tag = 1.0, Definiteness.POS_SEMI_DEF

    if cfg.is_infinite:
        return SymToeplitz(
            element_fn=lambda p: infinite_element(cfg, p[0]), scale=scale, definiteness=tag, dimension=1
        )
    return SymToeplitz(first_row_periodized(cfg), scale=scale, definiteness=tag)

def elastic_potential(cfg: ChainConfig, u) -> float:
    """
    V = (mu/2) sum_pq u_q* f_{|p-q|} u_p, evaluated in the Bloch basis as
    (mu/2N) sum_l omega^2(kappa_l) |u_hat_l|^2, which is real and >= 0 term by term.
    """
    _require_finite(cfg)
    values = u.values if isinstance(u, FieldState) else np.asarray(u)
    if values.size != cfg.size:
        raise DimensionMismatch(f"field has {values.size} values, ring has {cfg.size} sites")
    u_hat = scipy.fft.fft(values.ravel())
    return 0.5 * cfg.mass * float(np.sum(spectral_values(cfg) * np.abs(u_hat) ** 2)) / cfg.size
