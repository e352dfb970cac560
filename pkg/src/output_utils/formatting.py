import hashlib
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

def get_iso_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S+00:00")

def format_header_value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(format_header_value(v) for v in value)
    if value is None:
        return "inf"
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)

def build_header(meta: Dict[str, Any], columns: List[str]) -> str:
    """`key=value` lines followed by the column names; numpy.savetxt prefixes each with '# '."""
    lines = [f"{key}={format_header_value(value)}" for key, value in meta.items()]
    lines.append(",".join(columns))
    return "\n".join(lines)

def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
