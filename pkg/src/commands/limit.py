from pathlib import Path
from typing import Dict, List, Tuple

from src.config import LimitParams
from src.continuum import continuum_limit_check, periodic_limit_check
from src.logging import get_logger
from src.output import write_csv
from src.types import ContinuumConfig

logger = get_logger("commands.limit")

def cmd_limit(params: LimitParams) -> Tuple[List[Path], Dict]:
    """Lattice-to-continuum convergence table; a non-monotone sequence is reported in the status column."""
    cfg = ContinuumConfig(alpha=params.alpha, period=params.period, a_const=params.a_const, rho0=params.rho0)
    check = periodic_limit_check if params.mode == "periodic" else continuum_limit_check
    report = check(params.alpha, params.x, params.h, cfg)

    columns = {
        "h": [row.h for row in report.rows],
        "site": [row.site for row in report.rows],
        "estimate": [row.estimate for row in report.rows],
        "target": [row.target for row in report.rows],
        "deviation": [row.deviation for row in report.rows],
        "rounded": [int(row.rounded) for row in report.rows],
    }
    meta = {
        "alpha": report.alpha,
        "x": report.x,
        "mode": report.mode,
        "period": params.period,
        "status": report.status,
        "monotone": report.monotone,
    }
    for row in report.rows:
        logger.info(f"h={row.h:.6g} site={row.site} deviation={row.deviation:.3e}" + (" (rounded)" if row.rounded else ""))
    logger.info(f"status: {report.status}, final deviation {report.final_deviation:.3e}")

    diagnostics = {"status": report.status, "final_deviation": report.final_deviation}
    return [write_csv(params.out, columns, meta)], diagnostics
