import dataclasses
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import numpy as np

from src import __version__
from src.errors import DimensionMismatch, InvalidInputError
from src.logging import get_logger, write_run_manifest
from src.output_utils.common import numpy_converter
from src.output_utils.formatting import build_header, get_iso_now, sha256_file
from src.types import RunManifest

logger = get_logger("output")

CSV_FORMAT = "%.17g"  # round-trips float64 exactly

def write_csv(path, columns: Dict[str, Any], meta: Dict[str, Any]) -> Path:
    """Columns of equal length as CSV, with `# key=value` header lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arrays = [np.asarray(col, dtype=float).ravel() for col in columns.values()]
    if len({a.size for a in arrays}) > 1:
        raise DimensionMismatch(f"CSV columns differ in length: {[a.size for a in arrays]}")
    np.savetxt(
        path,
        np.column_stack(arrays),
        fmt=CSV_FORMAT,
        delimiter=",",
        header=build_header(meta, list(columns)),
        comments="# ",
    )
    return path

def read_csv_values(path) -> np.ndarray:
    """Last column of a CSV written by write_csv (or any comma-separated numeric file)."""
    path = Path(path)
    if not path.exists():
        raise InvalidInputError(f"Input file not found: {path}")
    try:
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except ValueError as e:
        raise InvalidInputError(f"Could not parse {path}: {e}") from e
    return data[:, -1]

def write_json(path, payload: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, default=numpy_converter)
        f.write("\n")
    return path

def manifest_path(out_path) -> Path:
    out_path = Path(out_path)
    return out_path.with_name(out_path.name + ".manifest.json")

def write_manifest(
    command: str,
    params: Dict[str, Any],
    outputs: Iterable[Path],
    diagnostics: Optional[Dict[str, Any]] = None,
) -> Path:
    """<first output>.manifest.json with the parameters, version, timestamp and SHA-256 per file."""
    outputs = [Path(p) for p in outputs]
    manifest = RunManifest(
        command=command,
        params=params,
        version=__version__,
        timestamp=get_iso_now(),
        checksums={p.name: sha256_file(p) for p in outputs},
        diagnostics=diagnostics or {},
    )
    record = json.loads(json.dumps(dataclasses.asdict(manifest), default=numpy_converter))
    path = write_run_manifest(manifest_path(outputs[0]), record)
    logger.debug(f"Saved manifest to {path}")
    return path
