import math
from pathlib import Path
from typing import Optional, List, Literal, Dict, Any

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.errors import InvalidInputError

# Resource guards
DEFAULT_MAX_SITES = 2**24
MAX_QUADRATURE_DIMENSION = 3

# Tolerances
DEFAULT_TOLERANCE = 1e-9
SPECTRAL_IMAG_TOLERANCE = 1e-12
PERIODIZATION_TAIL_TOLERANCE = 1e-13
DIRECT_SPECTRAL_MAX_N = 4096

# Brillouin-zone quadrature (scipy.integrate.quad / nquad)
QUAD_LIMIT = 200
QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-10

# Infinite-chain Fourier quadrature (mpmath)
MP_DIGITS = 30
MP_REL_TOLERANCE = 1e-12

# Bessel-integral route
DEFAULT_BESSEL_EPSILON = 1e-3
DEFAULT_BESSEL_CUTOFF = 1e3
BESSEL_GAUSS_NODES = 20
BESSEL_PANEL_TOLERANCE = 1e-9
BESSEL_IMAG_TOLERANCE = 1e-6

# Direct image sum for the periodic kernel
DEFAULT_KERNEL_TERMS = 100_000

DEFAULT_DIFFUSIVITY = 1.0

Route = Literal["periodized", "spectral", "closed-form", "quadrature", "bessel"]
ConventionName = Literal["laplacian", "characteristic"]
KernelRouteName = Literal["direct", "zeta", "infinite"]

def _normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_")

def load_config_file(path) -> Dict[str, str]:
    """
    Reads a flat `key = value` text file.

    Blank lines and `#` comments are skipped; `omega-sq` and `omega_sq` name the same key.
    Values stay strings here; the parameter models coerce them.
    """
    path = Path(path)
    if not path.exists():
        raise InvalidInputError(f"Config file not found: {path}")

    params: Dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = _normalize_key(key)
        if not key:
            raise InvalidInputError(f"{path}:{lineno}: empty key")
        params[key] = value.strip()
    return params

def merge_params(file_params: Optional[Dict[str, Any]], flag_params: Dict[str, Any]) -> Dict[str, Any]:
    """Flags override file values; flags left at None do not."""
    merged = dict(file_params or {})
    for key, value in flag_params.items():
        if value is not None:
            merged[_normalize_key(key)] = value
    return merged

def _split_list(value):
    if value is None or isinstance(value, (list, tuple)):
        return value
    if isinstance(value, str):
        parts = [part for part in value.replace(" ", ",").split(",") if part]
        return parts
    return [value]

def _parse_size(value):
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinite", "none"):
        return None
    return value

class CommonParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    out: str
    config: Optional[str] = None
    verbose: int = 0
    logs_directory: str = "logs"
    workers: int = 1

    @field_validator("workers")
    @classmethod
    def _workers_positive(cls, v):
        if v < 1:
            raise ValueError("workers must be >= 1")
        return v

class LatticeParams(CommonParams):
    alpha: float
    n: int = 1
    N: Optional[List[int]] = None  # None: infinite lattice
    omega_sq: float = 1.0
    mass: float = 1.0

    @field_validator("N", mode="before")
    @classmethod
    def _parse_dims(cls, v):
        v = _parse_size(v)
        if v is None:
            return None
        return _split_list(v)

    @field_validator("alpha", "omega_sq", "mass")
    @classmethod
    def _positive(cls, v, info):
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"{info.field_name} must be positive")
        return v

    @field_validator("n")
    @classmethod
    def _dimension_positive(cls, v):
        if v < 1:
            raise ValueError("n must be >= 1")
        return v

    @model_validator(mode="after")
    def _dims_match_dimension(self):
        if self.N is not None:
            if len(self.N) == 1 and self.n > 1:
                self.N = self.N * self.n
            if len(self.N) != self.n:
                raise ValueError(f"N has {len(self.N)} entries for n={self.n}")
            if any(d < 1 for d in self.N):
                raise ValueError("N entries must be positive")
        return self

class MatrixParams(LatticeParams):
    route: Optional[Route] = None
    convention: ConventionName = "laplacian"
    cross_check: Optional[Route] = None
    radius: int = 8
    epsilon: float = DEFAULT_BESSEL_EPSILON
    cutoff: float = DEFAULT_BESSEL_CUTOFF
    tolerance: float = DEFAULT_TOLERANCE

    @field_validator("radius")
    @classmethod
    def _radius_nonnegative(cls, v):
        if v < 0:
            raise ValueError("radius must be >= 0")
        return v

    @field_validator("epsilon", "cutoff", "tolerance")
    @classmethod
    def _positive_numeric(cls, v, info):
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"{info.field_name} must be positive")
        return v

    @model_validator(mode="after")
    def _route_fits_lattice(self):
        finite = self.N is not None
        if self.route is None:
            self.route = "periodized" if finite and self.n == 1 else "spectral" if finite else (
                "closed-form" if self.n == 1 else "quadrature"
            )
        for name in filter(None, (self.route, self.cross_check)):
            if finite and name not in ("periodized", "spectral"):
                raise ValueError(f"route '{name}' needs an infinite lattice (omit --N or pass --N inf)")
            if not finite and name in ("periodized", "spectral"):
                raise ValueError(f"route '{name}' needs a finite lattice (--N)")
            if name in ("periodized", "closed-form") and self.n != 1:
                raise ValueError(f"route '{name}' exists only for n=1")
        return self

class DispersionParams(CommonParams):
    alpha: List[float]
    n: int = 2
    section: Literal["grid", "010", "110"] = "110"
    points: int = 65

    @field_validator("alpha", mode="before")
    @classmethod
    def _parse_alphas(cls, v):
        return _split_list(v)

    @field_validator("alpha")
    @classmethod
    def _alphas_positive(cls, v):
        if not v or any(not math.isfinite(a) or a <= 0 for a in v):
            raise ValueError("alpha values must be positive")
        return v

    @field_validator("points")
    @classmethod
    def _points_at_least_two(cls, v):
        if v < 2:
            raise ValueError("points must be >= 2")
        return v

    @model_validator(mode="after")
    def _sections_are_2d(self):
        if self.section in ("010", "110") and self.n != 2:
            raise ValueError("cross-sections are defined on the 2D lattice (n=2)")
        if self.section == "grid" and self.n != 2:
            raise ValueError("grid output is defined for n=2")
        return self

class KernelParams(CommonParams):
    alpha: float
    period: Optional[float] = None
    route: KernelRouteName = "zeta"
    x: Optional[List[float]] = None
    points: int = 33
    terms: int = DEFAULT_KERNEL_TERMS
    a_const: float = 1.0
    rho0: float = 1.0

    @field_validator("period", mode="before")
    @classmethod
    def _parse_period(cls, v):
        return _parse_size(v)

    @field_validator("x", mode="before")
    @classmethod
    def _parse_x(cls, v):
        return _split_list(v)

    @field_validator("alpha", "a_const", "rho0")
    @classmethod
    def _positive(cls, v, info):
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"{info.field_name} must be positive")
        return v

    @field_validator("terms", "points")
    @classmethod
    def _count_positive(cls, v, info):
        if v < 1:
            raise ValueError(f"{info.field_name} must be >= 1")
        return v

    @model_validator(mode="after")
    def _route_fits_period(self):
        if self.period is not None and self.period <= 0:
            raise ValueError("period must be positive")
        if self.route == "infinite" and self.period is not None:
            raise ValueError("route 'infinite' takes no period (use --period inf)")
        if self.route in ("direct", "zeta") and self.period is None:
            raise ValueError(f"route '{self.route}' needs a finite --period")
        return self

class LimitParams(CommonParams):
    alpha: float
    x: float = 1.0
    h: List[float] = [1 / 16, 1 / 64, 1 / 256]
    mode: Literal["infinite", "periodic"] = "infinite"
    period: Optional[float] = None
    a_const: float = 1.0
    rho0: float = 1.0

    @field_validator("h", mode="before")
    @classmethod
    def _parse_h(cls, v):
        return _split_list(v)

    @field_validator("period", mode="before")
    @classmethod
    def _parse_period(cls, v):
        return _parse_size(v)

    @field_validator("alpha", "a_const", "rho0")
    @classmethod
    def _positive(cls, v, info):
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"{info.field_name} must be positive")
        return v

    @model_validator(mode="after")
    def _periodic_needs_period(self):
        if any(h <= 0 for h in self.h):
            raise ValueError("h values must be positive")
        if self.mode == "periodic" and self.period is None:
            raise ValueError("mode 'periodic' needs --period")
        return self

class EvolveParams(LatticeParams):
    t: List[float] = [0.0, 1.0, 10.0, 100.0]
    diffusivity: float = DEFAULT_DIFFUSIVITY
    initial: Literal["delta", "bloch", "file"] = "delta"
    mode_index: int = 1
    input: Optional[str] = None

    @field_validator("t", mode="before")
    @classmethod
    def _parse_times(cls, v):
        return _split_list(v)

    @field_validator("diffusivity")
    @classmethod
    def _diffusivity_positive(cls, v):
        if not math.isfinite(v) or v <= 0:
            raise ValueError("diffusivity must be positive")
        return v

    @model_validator(mode="after")
    def _evolution_inputs(self):
        if self.N is None:
            raise ValueError("evolution needs a finite lattice (--N)")
        if any(t < 0 for t in self.t):
            raise ValueError("times must be >= 0")
        if self.initial == "file" and not self.input:
            raise ValueError("initial 'file' needs --input")
        return self

PARAM_MODELS = {
    "matrix": MatrixParams,
    "dispersion": DispersionParams,
    "kernel": KernelParams,
    "limit": LimitParams,
    "evolve": EvolveParams,
}

def build_params(command: str, flag_params: Dict[str, Any]) -> BaseModel:
    """Merges an optional config file under the CLI flags and validates the result."""
    file_params = None
    config_path = flag_params.get("config")
    if config_path:
        file_params = load_config_file(config_path)
        unknown = set(file_params) - set(PARAM_MODELS[command].model_fields)
        if unknown:
            raise InvalidInputError(f"Unknown config keys for '{command}': {', '.join(sorted(unknown))}")
    merged = merge_params(file_params, flag_params)
    merged.pop("command", None)
    return PARAM_MODELS[command].model_validate(merged)
