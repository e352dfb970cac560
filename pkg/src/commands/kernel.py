from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from src.config import KernelParams
from src.continuum import sample_kernel
from src.logging import get_logger
from src.output import write_csv
from src.types import ContinuumConfig, KernelRoute

logger = get_logger("commands.kernel")

INFINITE_SPAN = 4.0

def _abscissae(params: KernelParams) -> np.ndarray:
    if params.x:
        return np.array(params.x, dtype=float)
    if params.period is None:
        return np.linspace(0.0, INFINITE_SPAN, params.points + 1)[1:]
    # interior points of (0, L)
    return np.linspace(0.0, params.period, params.points + 2)[1:-1]

def cmd_kernel(params: KernelParams) -> Tuple[List[Path], Dict]:
    """Riesz kernel samples K(x) and the scaled continuum operator kernel rho0 A K(x) as CSV."""
    cfg = ContinuumConfig(alpha=params.alpha, period=params.period, a_const=params.a_const, rho0=params.rho0)
    route = KernelRoute(params.route)
    samples = sample_kernel(cfg, _abscissae(params), route, terms=params.terms)

    meta = {"alpha": cfg.alpha, "period": cfg.period, "route": route.value, "a_const": cfg.a_const, "rho0": cfg.rho0}
    columns = {
        "x": samples.abscissae,
        "kernel": samples.values,
        "scaled": cfg.rho0 * cfg.a_const * samples.values,
    }
    logger.info(f"{len(samples.values)} kernel samples via {route.value} route, alpha={cfg.alpha}, L={cfg.period}")
    return [write_csv(params.out, columns, meta)], {}
