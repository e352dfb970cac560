import logging
import sys
import json
import datetime
import traceback
import fcntl
from pathlib import Path

from src import __version__

def setup_logging(verbose: int = 0) -> logging.Logger:
    """
    Configures the application logger.

    - WARNING and above always go to stderr.
    - INFO level goes to stdout as bare messages if verbose >= 1.
    - DEBUG level goes to stderr if verbose >= 2.
    """
    logger = logging.getLogger("fraclattice")
    logger.setLevel(logging.DEBUG if verbose >= 2 else logging.INFO)

    # Clear existing handlers to avoid duplicates on repeated CLI calls in one process
    if logger.handlers:
        logger.handlers.clear()

    if verbose >= 1:
        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setLevel(logging.INFO)
        console_handler.addFilter(lambda record: record.levelno < logging.WARNING)
        console_handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(console_handler)

    problem_handler = logging.StreamHandler(sys.stderr)
    problem_handler.setLevel(logging.WARNING)
    problem_handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
    logger.addHandler(problem_handler)

    if verbose >= 2:
        debug_handler = logging.StreamHandler(sys.stderr)
        debug_handler.setLevel(logging.DEBUG)
        debug_handler.addFilter(lambda record: record.levelno < logging.INFO)
        debug_handler.setFormatter(logging.Formatter("[%(levelname)s] %(name)s: %(message)s"))
        logger.addHandler(debug_handler)

    logger.propagate = False
    return logger

def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(f"fraclattice.{name}")

def failures_path(log_dir, run_timestamp: str) -> Path:
    return Path(log_dir) / f"{run_timestamp}_failures.jsonl"

def log_failure(
    run_timestamp: str,
    command: str,
    error: Exception,
    exit_code: int,
    params: dict = None,
    log_dir: str = "logs",
):
    """
    Appends one JSON record per terminal CLI failure to {log_dir}/{run_timestamp}_failures.jsonl.
    Never raises.
    """
    try:
        path = failures_path(log_dir, run_timestamp)
        path.parent.mkdir(exist_ok=True, parents=True)

        record = {
            "timestamp": datetime.datetime.now().isoformat(),
            "version": __version__,
            "command": command,
            "exit_code": exit_code,
            "error_type": type(error).__name__,
            "error_message": str(error),
            "params": {k: v for k, v in (params or {}).items() if v is not None},
            "stack_trace": traceback.format_exc() if sys.exc_info()[0] else None,
        }
        line = json.dumps(record, default=str)

        with open(path, "a", encoding="utf-8") as f:
            try:
                fcntl.flock(f, fcntl.LOCK_EX)
                f.write(line + "\n")
                f.flush()
            finally:
                fcntl.flock(f, fcntl.LOCK_UN)

    except Exception as e:
        print(f"CRITICAL: could not record {command} failure: {e}", file=sys.stderr)

def write_run_manifest(path: Path, manifest: dict, verbose: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(exist_ok=True, parents=True)
    with open(path, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True, default=str)
    if verbose:
        get_logger("logging").info(f"Saved manifest to {path}")
    return path
