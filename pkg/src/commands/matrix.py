from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from src.chain1d import first_row_periodized, first_row_spectral
from src.config import MatrixParams
from src.errors import ToleranceNotMet
from src.lattice_nd import first_block_row_spectral, infinite_block_row_nd
from src.logging import get_logger
from src.output import write_json
from src.toeplitz import SymToeplitz
from src.types import ChainConfig, Convention, Definiteness, LatticeConfig, MatrixRoute

logger = get_logger("commands.matrix")

def _elements(params: MatrixParams, route: MatrixRoute) -> np.ndarray:
    """Characteristic-matrix elements f (first row or block row) for one route."""
    if params.N is not None:
        if route is MatrixRoute.PERIODIZED:
            chain = ChainConfig(size=params.N[0], alpha=params.alpha, omega_sq=params.omega_sq, mass=params.mass)
            return first_row_periodized(chain)
        if params.n == 1:
            chain = ChainConfig(size=params.N[0], alpha=params.alpha, omega_sq=params.omega_sq, mass=params.mass)
            return first_row_spectral(chain)
        lattice = LatticeConfig(
            dimension=params.n, alpha=params.alpha, dims=tuple(params.N), omega_sq=params.omega_sq, mass=params.mass
        )
        return np.array(first_block_row_spectral(lattice))

    lattice = LatticeConfig(dimension=params.n, alpha=params.alpha, omega_sq=params.omega_sq, mass=params.mass)
    return infinite_block_row_nd(
        lattice,
        params.radius,
        route=route,
        workers=params.workers,
        epsilon=params.epsilon,
        cutoff=params.cutoff,
    )

def cmd_matrix(params: MatrixParams) -> Tuple[List[Path], Dict]:
    """
    Writes the first (block) row of the fractional Laplacian as JSON.

    `elements` holds f (characteristic matrix, positive semidefinite); `matrix_row` holds the
    row of the selected convention (-mu f for the Laplacian, +f for the characteristic matrix).
    Infinite-lattice routes cover the box [0, radius]^n.
    """
    route = MatrixRoute(params.route)
    convention = Convention(params.convention)
    elements = _elements(params, route)

    scale, tag = (-params.mass, Definiteness.NEG_SEMI_DEF) if convention is Convention.LAPLACIAN else (
        1.0,
        Definiteness.POS_SEMI_DEF,
    )
    payload = {
        "alpha": params.alpha,
        "n": params.n,
        "N": params.N,
        "route": route.value,
        "convention": convention.value,
        "definiteness": tag.value,
        "omega_sq": params.omega_sq,
        "mass": params.mass,
        "elements": elements,
        "matrix_row": scale * elements + 0.0,  # no negative zeros
    }
    diagnostics = {}

    if params.N is not None:
        matrix = SymToeplitz(elements, scale=scale, definiteness=tag)
        row_sum = float(matrix.row_sums()[0])
        payload["row_sum"] = row_sum
        diagnostics["row_sum"] = row_sum
        logger.info(f"{route.value} row for N={params.N}, alpha={params.alpha}: row sum {row_sum:.3e}")
    else:
        payload["radius"] = params.radius
        logger.info(f"{route.value} block row on [0, {params.radius}]^{params.n}, alpha={params.alpha}")

    if params.cross_check:
        check_route = MatrixRoute(params.cross_check)
        reference = _elements(params, check_route)
        deviation = float(np.max(np.abs(elements - reference)) / max(1.0, float(np.max(np.abs(elements)))))
        payload["cross_check"] = {"route": check_route.value, "max_deviation": deviation, "tolerance": params.tolerance}
        diagnostics["cross_check_deviation"] = deviation
        logger.info(f"cross-check {route.value} vs {check_route.value}: max deviation {deviation:.3e}")
        if deviation > params.tolerance:
            diagnostics["status"] = ToleranceNotMet.__name__
            raise ToleranceNotMet(
                f"{route.value} and {check_route.value} differ by {deviation:.3e} > tolerance {params.tolerance}",
                outputs=[write_json(params.out, payload)],
                diagnostics=diagnostics,
            )

    return [write_json(params.out, payload)], diagnostics
