"""
Spectral time evolution under the fractional Laplacian.

Every operator here is diagonal in the Bloch basis, so evolution is exact:
forward FFT, multiply by the mode factor, inverse FFT.
"""
import numpy as np
import scipy.fft

from src.config import DEFAULT_DIFFUSIVITY
from src.errors import DimensionMismatch, DomainError
from src.lattice_nd import spectral_values_nd
from src.logging import get_logger
from src.types import ChainConfig, Convention, FieldState, LatticeConfig, LatticeLike

logger = get_logger("dynamics")

def _as_lattice(cfg: LatticeLike) -> LatticeConfig:
    if isinstance(cfg, ChainConfig):
        return LatticeConfig.from_chain(cfg)
    return cfg

def _mode_values(cfg: LatticeLike) -> np.ndarray:
    """Omega^2 lambda_l^{alpha/2} on the lattice's Bloch grid."""
    return spectral_values_nd(_as_lattice(cfg))

def _apply_mode_factor(values: np.ndarray, factor: np.ndarray) -> np.ndarray:
    result = scipy.fft.ifftn(factor * scipy.fft.fftn(values))
    return result if np.iscomplexobj(values) else result.real

def apply_laplacian(state: FieldState, convention: Convention = Convention.LAPLACIAN) -> np.ndarray:
    """
    Laplacian convention: -mu Omega^2 lambda^{alpha/2} per mode.
    Characteristic convention: +Omega^2 lambda^{alpha/2} per mode.
    """
    convention = Convention(convention)
    modes = _mode_values(state.config)
    if modes.shape != state.values.shape:
        raise DimensionMismatch(f"field shape {state.values.shape} does not match lattice {modes.shape}")
    factor = -state.config.mass * modes if convention is Convention.LAPLACIAN else modes
    return _apply_mode_factor(state.values, factor)

def evolve_diffusion(state: FieldState, t: float, diffusivity: float = DEFAULT_DIFFUSIVITY) -> FieldState:
    """
    Exact solution of du/dt = c (Delta_alpha / mu) u after time t: mode l decays by
    exp(-c Omega^2 lambda_l^{alpha/2} t). The zero mode is untouched, so mass is conserved.
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if not diffusivity > 0:
        raise DomainError(f"diffusivity must be > 0, got {diffusivity}")
    if t == 0:
        return FieldState(values=state.values, config=state.config, time=state.time)

    factor = np.exp(-diffusivity * t * _mode_values(state.config))
    values = _apply_mode_factor(state.values, factor)

    # Positivity (hence a non-increasing max-norm) holds only for alpha <= 2
    before, after = np.max(np.abs(state.values)), np.max(np.abs(values))
    if after > before * (1 + 1e-12):
        logger.warning(
            f"max-norm grew from {before:.6g} to {after:.6g} at alpha={state.config.alpha} "
            "(the semigroup is not positivity preserving for alpha > 2)"
        )
    return FieldState(values=values, config=state.config, time=state.time + t)

def normal_mode_frequencies(cfg: LatticeLike) -> np.ndarray:
    """Omega lambda_l^{alpha/4} over the Brillouin zone, ascending; the first entry is exactly 0."""
    if cfg.is_infinite:
        raise DomainError("Normal modes need a finite lattice")
    return np.sort(np.sqrt(_mode_values(cfg)).ravel())

def return_probability(cfg: LatticeLike, t: float, diffusivity: float = DEFAULT_DIFFUSIVITY) -> float:
    """(1/N) sum_l exp(-c Omega^2 lambda_l^{alpha/2} t): the walker's probability of sitting at its start."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    modes = _mode_values(cfg)
    return float(np.mean(np.exp(-diffusivity * t * modes)))

def total_mass(state: FieldState):
    mass = np.sum(state.values)
    return complex(mass) if np.iscomplexobj(mass) else float(mass)

# --- initial conditions ---

def delta_state(cfg: LatticeLike) -> FieldState:
    """Unit mass at the origin site."""
    if cfg.is_infinite:
        raise DomainError("Field states need a finite lattice")
    values = np.zeros(cfg.shape)
    values[(0,) * len(cfg.shape)] = 1.0
    return FieldState(values=values, config=cfg)

def bloch_state(cfg: LatticeLike, ell, real: bool = False) -> FieldState:
    """
    exp(i kappa_l . p) with kappa_l = 2 pi l / N; a scalar l selects the mode along the
    first axis. real=True gives cos(kappa_l . p), which lies in the same eigenspace.
    """
    if cfg.is_infinite:
        raise DomainError("Field states need a finite lattice")
    shape = cfg.shape
    ell = np.atleast_1d(np.asarray(ell, dtype=int))
    if ell.size == 1 and len(shape) > 1:
        ell = np.concatenate([ell, np.zeros(len(shape) - 1, dtype=int)])
    if ell.size != len(shape):
        raise DimensionMismatch(f"mode index has {ell.size} components for a {len(shape)}D lattice")

    phase = np.zeros(shape)
    for axis, (l_j, n_j) in enumerate(zip(ell, shape)):
        axis_shape = [1] * len(shape)
        axis_shape[axis] = n_j
        phase = phase + (2.0 * np.pi * l_j * np.arange(n_j) / n_j).reshape(axis_shape)
    values = np.cos(phase) if real else np.exp(1j * phase)
    return FieldState(values=values, config=cfg)

def state_from_values(cfg: LatticeLike, values) -> FieldState:
    return FieldState(values=np.asarray(values), config=cfg)
