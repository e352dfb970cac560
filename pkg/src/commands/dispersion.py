from pathlib import Path
from typing import Dict, List, Tuple

from src.config import DispersionParams
from src.lattice_nd import cross_section, dispersion_grid
from src.logging import get_logger
from src.output import write_csv, write_json

logger = get_logger("commands.dispersion")

def cmd_dispersion(params: DispersionParams) -> Tuple[List[Path], Dict]:
    """
    Normalized 2D dispersion: CSV along the (0 1 0) / (1 1 0) cross-sections,
    JSON surfaces over the first Brillouin zone for --section grid.
    """
    if params.section == "grid":
        k, surfaces = dispersion_grid(params.alpha, params.points)
        payload = {
            "n": params.n,
            "normalization": "omega_2(pi,pi)",
            "kappa": k,
            "alphas": params.alpha,
            "surfaces": [surfaces[a] for a in params.alpha],
        }
        corner = {str(a): float(surfaces[a][-1, -1]) for a in params.alpha}
        logger.info(f"dispersion surfaces on a {params.points}x{params.points} grid for alpha={params.alpha}")
        return [write_json(params.out, payload)], {"corner_values": corner}

    t, sections = cross_section(params.alpha, params.section, params.points)
    columns = {"kappa": t}
    columns.update({f"alpha={a}": sections[a] for a in params.alpha})
    meta = {
        "section": params.section,
        "normalization": "omega_2(pi,0)" if params.section == "010" else "omega_2(pi,pi)",
        "alpha": params.alpha,
        "n": params.n,
    }
    endpoints = {str(a): float(sections[a][-1]) for a in params.alpha}
    for a, value in endpoints.items():
        logger.info(f"({params.section}) endpoint alpha={a}: {value:.6f}")
    return [write_csv(params.out, columns, meta)], {"endpoint_values": endpoints}
