from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, List, Union, Dict

import numpy as np

from src.config import DEFAULT_MAX_SITES
from src.errors import DomainError, DimensionMismatch

class ZetaVariant(str, Enum):
    STANDARD = "standard"          # sum (x+n)^-beta, x > 0
    ABSOLUTE_VALUE = "absolute"    # sum |x+n|^-beta, any x with x+n != 0

class Convention(str, Enum):
    LAPLACIAN = "laplacian"                # -mu * f, negative semidefinite
    CHARACTERISTIC = "characteristic"      # +f, positive semidefinite

class Definiteness(str, Enum):
    NEG_SEMI_DEF = "NegSemiDef"
    POS_SEMI_DEF = "PosSemiDef"

class KernelRoute(str, Enum):
    DIRECT_SUM = "direct"
    HURWITZ_ZETA = "zeta"
    INFINITE_SPACE = "infinite"

class MatrixRoute(str, Enum):
    PERIODIZED = "periodized"
    SPECTRAL = "spectral"
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"
    BESSEL = "bessel"

MultiIndex = Tuple[int, ...]

def _require_positive(name: str, value: float):
    if not np.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")

@dataclass(frozen=True)
class ChainConfig:
    """
    1D lattice: cyclic ring of `size` sites, or the infinite chain when size is None.

    Elements are per unit spacing; `lattice_const` records h as metadata and no
    element route reads it.
    """
    size: Optional[int]
    alpha: float
    omega_sq: float = 1.0       # Omega_alpha^2, sec^-2
    lattice_const: float = 1.0  # h, cm
    mass: float = 1.0           # mu, g

    def __post_init__(self):
        _require_positive("alpha", self.alpha)
        _require_positive("omega_sq", self.omega_sq)
        _require_positive("lattice_const", self.lattice_const)
        _require_positive("mass", self.mass)
        if self.size is not None:
            if int(self.size) != self.size or self.size < 3:
                raise DomainError(f"A ring needs at least 3 sites, got size={self.size!r}")
            object.__setattr__(self, "size", int(self.size))

    @property
    def is_infinite(self) -> bool:
        return self.size is None

    @property
    def n_sites(self) -> int:
        if self.size is None:
            raise DomainError("The infinite chain has no finite site count")
        return self.size

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n_sites,)

@dataclass(frozen=True)
class LatticeConfig:
    """n-dimensional cubic lattice; dims=None is the infinite lattice."""
    dimension: int
    alpha: float
    dims: Optional[Tuple[int, ...]] = None
    omega_sq: float = 1.0   # Omega_{alpha,n}^2, treated as one opaque constant
    mass: float = 1.0
    max_sites: int = DEFAULT_MAX_SITES

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.dimension!r}")
        _require_positive("alpha", self.alpha)
        _require_positive("omega_sq", self.omega_sq)
        _require_positive("mass", self.mass)
        if self.dims is not None:
            dims = tuple(int(d) for d in self.dims)
            if len(dims) != self.dimension:
                raise DimensionMismatch(f"dims has {len(dims)} entries for a {self.dimension}D lattice")
            if any(d < 1 or d != d0 for d, d0 in zip(dims, self.dims)):
                raise DomainError(f"dims must be positive integers, got {self.dims!r}")
            object.__setattr__(self, "dims", dims)

    @classmethod
    def from_chain(cls, chain: ChainConfig) -> "LatticeConfig":
        dims = None if chain.is_infinite else (chain.size,)
        return cls(dimension=1, alpha=chain.alpha, dims=dims, omega_sq=chain.omega_sq, mass=chain.mass)

    @property
    def is_infinite(self) -> bool:
        return self.dims is None

    @property
    def n_sites(self) -> int:
        if self.dims is None:
            raise DomainError("The infinite lattice has no finite site count")
        return int(np.prod(self.dims, dtype=np.int64))

    @property
    def shape(self) -> Tuple[int, ...]:
        if self.dims is None:
            raise DomainError("The infinite lattice has no finite shape")
        return self.dims

    def check_index(self, p) -> MultiIndex:
        p = tuple(int(c) for c in p)
        if len(p) != self.dimension:
            raise DimensionMismatch(f"index {p} has {len(p)} components for a {self.dimension}D lattice")
        return p

@dataclass(frozen=True)
class ContinuumConfig:
    """Continuum string of period L (None = infinite space) with its lattice scaling constants."""
    alpha: float
    period: Optional[float] = None  # L, cm
    a_const: float = 1.0            # A_alpha, sec^-2 cm^alpha
    rho0: float = 1.0               # g cm^-1

    def __post_init__(self):
        _require_positive("alpha", self.alpha)
        _require_positive("a_const", self.a_const)
        _require_positive("rho0", self.rho0)
        if self.period is not None:
            _require_positive("period", self.period)

    @property
    def is_infinite(self) -> bool:
        return self.period is None

LatticeLike = Union[ChainConfig, LatticeConfig]

@dataclass(frozen=True)
class FieldState:
    """Scalar field over the sites of a finite lattice at a given time."""
    values: np.ndarray
    config: LatticeLike
    time: float = 0.0

    def __post_init__(self):
        if self.config.is_infinite:
            raise DomainError("Field states live on finite lattices only")
        values = np.array(self.values, copy=True)
        if values.size != self.config.n_sites:
            raise DimensionMismatch(
                f"field has {values.size} values, lattice has {self.config.n_sites} sites"
            )
        if self.time < 0:
            raise DomainError(f"time must be >= 0, got {self.time}")
        values = values.reshape(self.config.shape)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_sites(self) -> int:
        return self.values.size

@dataclass(frozen=True)
class KernelSamples:
    abscissae: np.ndarray
    values: np.ndarray
    config: ContinuumConfig
    route: KernelRoute

    def __post_init__(self):
        if len(self.abscissae) != len(self.values):
            raise DimensionMismatch("abscissae and values differ in length")

@dataclass
class ConvergenceRow:
    h: float
    site: int
    estimate: float
    target: float
    deviation: float
    rounded: bool  # x/h was not an integer; the evaluation point moved to the nearest site

@dataclass
class ConvergenceReport:
    alpha: float
    x: float
    mode: str
    rows: List[ConvergenceRow] = field(default_factory=list)
    monotone: bool = True
    status: str = "ok"

    @property
    def final_deviation(self) -> float:
        return self.rows[-1].deviation if self.rows else float("nan")

@dataclass
class RunManifest:
    command: str
    params: Dict
    version: str
    timestamp: str
    checksums: Dict[str, str] = field(default_factory=dict)
    diagnostics: Dict = field(default_factory=dict)
