"""
Fractional Laplacian on the n-dimensional cubic lattice.

Elements are those of Omega^2 (L_n)^{alpha/2}, with L_n = 2n I - A_n the nearest-neighbour
generator whose Bloch eigenvalues are lambda(kappa) = 4 sum_j sin^2(kappa_j/2).
"""
import math
import warnings
from functools import lru_cache, partial
from itertools import combinations_with_replacement, permutations
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import scipy.fft
from scipy import integrate, special

from src.config import (
    BESSEL_GAUSS_NODES,
    BESSEL_IMAG_TOLERANCE,
    BESSEL_PANEL_TOLERANCE,
    DEFAULT_BESSEL_CUTOFF,
    DEFAULT_BESSEL_EPSILON,
    MAX_QUADRATURE_DIMENSION,
    QUAD_EPSABS,
    QUAD_EPSREL,
    QUAD_LIMIT,
)
from src.errors import (
    DimensionMismatch,
    DomainError,
    QuadratureNonConvergence,
    ResourceLimit,
    ToleranceNotMet,
)
from src.chain1d import infinite_element, infinite_element_quadrature
from src.logging import get_logger
from src.parallel import map_elements
from src.specfun import bessel_j
from src.types import ChainConfig, LatticeConfig, MatrixRoute, MultiIndex

logger = get_logger("lattice_nd")

NQUAD_REL_TARGET = 1e-8

def _kappa_array(cfg: LatticeConfig, kappa) -> np.ndarray:
    kappa = np.asarray(kappa, dtype=float)
    if kappa.shape[-1:] != (cfg.dimension,):
        raise DimensionMismatch(f"wave vector needs {cfg.dimension} components, got shape {kappa.shape}")
    return kappa

def generator_eigenvalue(cfg: LatticeConfig, kappa):
    """2n - 2 sum_j cos(kappa_j) = 4 sum_j sin^2(kappa_j/2); kappa may carry leading batch axes."""
    kappa = _kappa_array(cfg, kappa)
    value = 4.0 * np.sum(np.sin(kappa / 2.0) ** 2, axis=-1)
    return float(value) if np.ndim(value) == 0 else value

def dispersion_nd(cfg: LatticeConfig, kappa, normalized: bool = False):
    """
    omega_alpha(kappa) = Omega lambda^{alpha/4}.

    normalized=True divides by the Born-von Karman corner frequency
    omega_{alpha=2}(pi,...,pi) = (4n)^{1/2} (Omega cancels).
    """
    lam = np.asarray(generator_eigenvalue(cfg, kappa))
    omega = lam ** (cfg.alpha / 4.0)
    omega = omega / math.sqrt(4.0 * cfg.dimension) if normalized else omega * math.sqrt(cfg.omega_sq)
    return float(omega) if np.ndim(omega) == 0 else omega

def spectral_values_nd(cfg: LatticeConfig) -> np.ndarray:
    """Omega^2 lambda^{alpha/2} on the Bloch grid kappa_j = 2 pi l_j / N_j, FFT ordering."""
    if cfg.is_infinite:
        raise DomainError("Spectral values need a finite lattice")
    if cfg.n_sites > cfg.max_sites:
        raise ResourceLimit(f"{cfg.n_sites} sites exceed the cap of {cfg.max_sites}")

    lam = np.zeros(cfg.dims)
    for axis, n_axis in enumerate(cfg.dims):
        shape = [1] * cfg.dimension
        shape[axis] = n_axis
        lam = lam + (4.0 * np.sin(np.pi * np.arange(n_axis) / n_axis) ** 2).reshape(shape)
    return cfg.omega_sq * lam ** (cfg.alpha / 2.0)

@lru_cache(maxsize=8)
def first_block_row_spectral(cfg: LatticeConfig) -> np.ndarray:
    """All elements (1/N) sum_l cos(kappa_l . p) Omega^2 lambda_l^{alpha/2} by one inverse nD FFT."""
    row = np.real(scipy.fft.ifftn(spectral_values_nd(cfg)))
    row.setflags(write=False)
    logger.debug(f"spectral block row for dims={cfg.dims}, alpha={cfg.alpha}")
    return row

def finite_element_spectral_nd(cfg: LatticeConfig, p: MultiIndex) -> float:
    p = cfg.check_index(p)
    row = first_block_row_spectral(cfg)
    return float(row[tuple(c % n for c, n in zip(p, cfg.dims))])

def _require_infinite(cfg: LatticeConfig):
    if not cfg.is_infinite:
        raise DomainError("This route evaluates the infinite lattice; drop dims")

def _brillouin_integrand(alpha: float, p: Sequence[int]):
    half = alpha / 2.0

    def integrand(*kappa):
        lam = 4.0 * sum(math.sin(k / 2.0) ** 2 for k in kappa)
        weight = 1.0
        for k, pj in zip(kappa, p):
            weight *= math.cos(pj * k)
        return weight * lam ** half

    return integrand

def infinite_element_nd(cfg: LatticeConfig, p: MultiIndex) -> float:
    """
    Omega^2 pi^{-n} int_{[0,pi]^n} prod_j cos(p_j kappa_j) lambda(kappa)^{alpha/2} d^n kappa.

    Nested adaptive quadrature (scipy quad / nquad); limited to n <= 3.
    """
    _require_infinite(cfg)
    p = tuple(abs(c) for c in cfg.check_index(p))
    n = cfg.dimension
    if n > MAX_QUADRATURE_DIMENSION:
        raise ResourceLimit(f"Brillouin-zone quadrature is limited to n <= {MAX_QUADRATURE_DIMENSION}, got n={n}")

    integrand = _brillouin_integrand(cfg.alpha, p)
    opts = {"limit": QUAD_LIMIT, "epsabs": QUAD_EPSABS, "epsrel": QUAD_EPSREL}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        if n == 1:
            value, abserr = integrate.quad(integrand, 0.0, math.pi, **opts)
        else:
            value, abserr = integrate.nquad(integrand, [(0.0, math.pi)] * n, opts=[opts] * n)

    value /= math.pi**n
    abserr /= math.pi**n
    integration_warnings = [w for w in caught if issubclass(w.category, integrate.IntegrationWarning)]
    if integration_warnings and abserr > max(NQUAD_REL_TARGET * abs(value), QUAD_EPSABS):
        raise QuadratureNonConvergence(
            f"Brillouin-zone quadrature for p={p}: {integration_warnings[0].message} (error {abserr:.3e})"
        )
    if integration_warnings:
        logger.debug(f"quadrature p={p}: {len(integration_warnings)} warning(s), error {abserr:.3e} accepted")
    return cfg.omega_sq * value

def _gauss_panels(edges: np.ndarray, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    left, right = edges[:-1, None], edges[1:, None]
    half = 0.5 * (right - left)
    return left + half * (x + 1.0), half * w

def _bessel_phi(p: Sequence[int], xi: np.ndarray) -> np.ndarray:
    """e^{2 i n xi} prod_j (-i)^{|p_j|} J_{|p_j|}(2 xi), the lattice Fourier factor of exp(i xi L_n)."""
    phi = np.exp(2j * len(p) * xi)
    for pj in p:
        phi = phi * (-1j) ** pj * bessel_j(pj, 2.0 * xi)
    return phi

def _regularized_integral(alpha: float, p: Sequence[int], epsilon: float, cutoff: float, nodes: int) -> complex:
    """
    int_0^inf D_eps(xi) [phi(xi) + phi(-xi) - 2 phi(0)] d xi with
    D_eps(xi) = (1/pi) Re Gamma(s+1) (eps + i xi)^{-(s+1)}, s = alpha/2.

    D_eps integrates to zero over the real line, so subtracting phi(0) is free and removes
    the eps^{-s} cancellation around the origin. Beyond the cutoff the phi(0) part and the
    non-oscillatory (4 pi xi)^{-n/2} part of phi + phi(-xi) are added in closed form.
    """
    s = alpha / 2.0
    n = len(p)
    phi0 = 1.0 if all(pj == 0 for pj in p) else 0.0

    geometric = epsilon * 2.0 ** np.arange(0, max(1, math.ceil(math.log2(math.pi / 4 / epsilon))) + 1)
    geometric = geometric[geometric < math.pi / 4]
    uniform = np.arange(math.pi / 4, cutoff, math.pi / 4)
    edges = np.concatenate(([0.0], geometric, uniform, [cutoff]))

    xi, w = _gauss_panels(edges, nodes)
    kernel = np.real(special.gamma(s + 1.0) * (epsilon + 1j * xi) ** (-(s + 1.0))) / math.pi
    integrand = kernel * (_bessel_phi(p, xi) + _bessel_phi(p, -xi) - 2.0 * phi0)
    body = np.sum(integrand * w)

    phi0_tail = -2.0 * phi0 * special.gamma(s) / math.pi * np.real(-1j * (epsilon + 1j * cutoff) ** (-s))
    d0 = -special.gamma(s + 1.0) * math.sin(s * math.pi / 2.0) / math.pi  # D_eps(xi) ~ d0 xi^{-s-1}
    edge_tail = 2.0 * d0 * math.cos(n * math.pi / 4.0) * (4.0 * math.pi) ** (-n / 2.0) * (
        cutoff ** (-s - n / 2.0) / (s + n / 2.0)
    )
    return body + phi0_tail + edge_tail

def bessel_integral_element(
    cfg: LatticeConfig,
    p: MultiIndex,
    epsilon: float = DEFAULT_BESSEL_EPSILON,
    cutoff: float = DEFAULT_BESSEL_CUTOFF,
) -> float:
    """
    Element from the Bessel-product integral representation, for 0 < alpha < 4.

    Evaluates the eps-regularized integral at eps and eps/2 and extrapolates linearly
    to eps -> 0. Panels are geometric from eps to pi/4, then pi/4 wide up to the cutoff,
    each with Gauss-Legendre nodes; a coarser node count serves as the error estimate.
    """
    _require_infinite(cfg)
    p = tuple(abs(c) for c in cfg.check_index(p))
    if not 0 < cfg.alpha < 4:
        raise DomainError(f"The Bessel-integral route needs 0 < alpha < 4, got {cfg.alpha}")
    if epsilon <= 0 or cutoff <= 0:
        raise DomainError("epsilon and cutoff must be positive")
    if cutoff <= math.pi / 4:
        raise DomainError(f"cutoff must exceed pi/4, got {cutoff}")

    coarse_nodes = (3 * BESSEL_GAUSS_NODES) // 4
    estimates = []
    for eps in (epsilon, epsilon / 2.0):
        fine = _regularized_integral(cfg.alpha, p, eps, cutoff, BESSEL_GAUSS_NODES)
        coarse = _regularized_integral(cfg.alpha, p, eps, cutoff, coarse_nodes)
        if abs(fine - coarse) > BESSEL_PANEL_TOLERANCE * max(1.0, abs(fine)):
            raise QuadratureNonConvergence(
                f"Bessel integral for p={p}, eps={eps}: node refinement changed the value by {abs(fine - coarse):.3e}"
            )
        estimates.append(fine)

    value = 2.0 * estimates[1] - estimates[0]
    if abs(value.imag) > BESSEL_IMAG_TOLERANCE * max(1.0, abs(value.real)):
        raise ToleranceNotMet(f"Bessel integral for p={p} left imaginary residual {value.imag:.3e}")

    logger.debug(
        f"bessel p={p}: I(eps)={estimates[0].real:.12g}, I(eps/2)={estimates[1].real:.12g}, "
        f"extrapolated={value.real:.12g}"
    )
    return cfg.omega_sq * float(value.real)

def riesz_constant(n: int, alpha: float) -> float:
    """C_{n,alpha} = 2^{alpha-1} alpha Gamma((alpha+n)/2) / (pi^{n/2} Gamma(1-alpha/2)), 0 < alpha < 2."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not 0 < alpha < 2:
        raise DomainError(f"The Riesz constant exists only for 0 < alpha < 2, got {alpha}")
    return (
        2.0 ** (alpha - 1.0) * alpha * math.gamma((alpha + n) / 2.0)
        / (math.pi ** (n / 2.0) * math.gamma(1.0 - alpha / 2.0))
    )

def asymptotic_element_nd(cfg: LatticeConfig, p: MultiIndex) -> float:
    """-Omega^2 C_{n,alpha} |p|^{-n-alpha}."""
    p = cfg.check_index(p)
    norm = math.sqrt(sum(c * c for c in p))
    if norm == 0:
        raise DomainError("The power-law asymptote is undefined at p=0")
    return -cfg.omega_sq * riesz_constant(cfg.dimension, cfg.alpha) * norm ** (-cfg.dimension - cfg.alpha)

# --- dispersion data ---

SECTION_DIRECTIONS = {"010": (1.0, 0.0), "110": (1.0, 1.0)}

def cross_section(alphas: Iterable[float], plane: str, points: int = 65) -> Tuple[np.ndarray, Dict[float, np.ndarray]]:
    """
    Normalized 2D dispersion along kappa = t * direction, t in [0, pi].

    Each section is divided by the Born-von Karman frequency at its own endpoint:
    omega_2(pi, 0) = 2 for (0 1 0), omega_2(pi, pi) = 2^{3/2} for (1 1 0).
    """
    if plane not in SECTION_DIRECTIONS:
        raise DomainError(f"plane must be one of {sorted(SECTION_DIRECTIONS)}, got {plane!r}")
    if points < 2:
        raise DomainError("points must be >= 2")

    t = np.linspace(0.0, math.pi, points)
    kappa = t[:, None] * np.array(SECTION_DIRECTIONS[plane])
    endpoint = math.sqrt(4.0 * sum(SECTION_DIRECTIONS[plane]))

    sections = {}
    for alpha in alphas:
        cfg = LatticeConfig(dimension=2, alpha=alpha)
        lam = generator_eigenvalue(cfg, kappa)
        sections[alpha] = lam ** (alpha / 4.0) / endpoint
    return t, sections

def dispersion_grid(alphas: Iterable[float], points: int = 65) -> Tuple[np.ndarray, Dict[float, np.ndarray]]:
    """omega_alpha(k1, k2) / omega_2(pi, pi) on a points x points grid over the first Brillouin zone."""
    if points < 2:
        raise DomainError("points must be >= 2")
    k = np.linspace(-math.pi, math.pi, points)
    grid = np.stack(np.meshgrid(k, k, indexing="ij"), axis=-1)
    surfaces = {}
    for alpha in alphas:
        cfg = LatticeConfig(dimension=2, alpha=alpha)
        surfaces[alpha] = dispersion_nd(cfg, grid, normalized=True)
    return k, surfaces

# --- infinite-lattice block row ---

def _closed_form_element(cfg: LatticeConfig, p: MultiIndex) -> float:
    return infinite_element(ChainConfig(size=None, alpha=cfg.alpha, omega_sq=cfg.omega_sq, mass=cfg.mass), p[0])

def _chain_quadrature_element(cfg: LatticeConfig, p: MultiIndex) -> float:
    return infinite_element_quadrature(ChainConfig(size=None, alpha=cfg.alpha, omega_sq=cfg.omega_sq, mass=cfg.mass), p[0])

def _bessel_element(cfg: LatticeConfig, epsilon: float, cutoff: float, p: MultiIndex) -> float:
    return bessel_integral_element(cfg, p, epsilon, cutoff)

def element_function(cfg: LatticeConfig, route: MatrixRoute, epsilon=DEFAULT_BESSEL_EPSILON, cutoff=DEFAULT_BESSEL_CUTOFF):
    """Picklable element evaluator p -> value for an infinite-lattice route."""
    route = MatrixRoute(route)
    if route is MatrixRoute.CLOSED_FORM:
        if cfg.dimension != 1:
            raise DomainError("The closed-form route exists only for n=1")
        return partial(_closed_form_element, cfg)
    if route is MatrixRoute.QUADRATURE:
        if cfg.dimension == 1:
            return partial(_chain_quadrature_element, cfg)
        return partial(infinite_element_nd, cfg)
    if route is MatrixRoute.BESSEL:
        return partial(_bessel_element, cfg, epsilon, cutoff)
    raise DomainError(f"route '{route.value}' does not evaluate the infinite lattice")

def infinite_block_row_nd(
    cfg: LatticeConfig,
    radius: int,
    route: MatrixRoute = MatrixRoute.QUADRATURE,
    workers: int = 1,
    epsilon: float = DEFAULT_BESSEL_EPSILON,
    cutoff: float = DEFAULT_BESSEL_CUTOFF,
) -> np.ndarray:
    """
    Elements for p in the box [0, radius]^n.

    Only sorted representatives are evaluated; cubic symmetry (axis permutations)
    fills the rest.
    """
    _require_infinite(cfg)
    if radius < 0:
        raise DomainError("radius must be >= 0")
    n = cfg.dimension
    if (radius + 1) ** n > cfg.max_sites:
        raise ResourceLimit(f"block row of {(radius + 1) ** n} elements exceeds the cap of {cfg.max_sites}")

    representatives: List[MultiIndex] = [
        tuple(sorted(c, reverse=True)) for c in combinations_with_replacement(range(radius + 1), n)
    ]
    values = map_elements(element_function(cfg, route, epsilon, cutoff), representatives, workers)

    block = np.empty((radius + 1,) * n)
    for rep, value in zip(representatives, values):
        for perm in set(permutations(rep)):
            block[perm] = value
    return block
