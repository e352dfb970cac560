from datetime import datetime

from pydantic import ValidationError

from src.commands import COMMANDS
from src.config import build_params
from src.errors import FracLatticeError, InvalidInputError
from src.logging import get_logger, log_failure, setup_logging
from src.output import write_manifest

def run_app(command: str, **flags) -> int:
    """
    Validates the flags (merged over an optional config file), runs one subcommand and
    writes its data file(s) plus `<out>.manifest.json`. Returns the process exit code.
    """
    setup_logging(flags.get("verbose") or 0)
    logger = get_logger("runner")
    run_timestamp = datetime.now().strftime("%Y-%m-%d_%H-%M-%S")
    logs_directory = flags.get("logs_directory") or "logs"

    if command not in COMMANDS:
        logger.error(f"Unknown command: {command}")
        return InvalidInputError.exit_code

    params = None
    try:
        params = build_params(command, flags)
        outputs, diagnostics = COMMANDS[command](params)
        manifest = write_manifest(command, params.model_dump(), outputs, diagnostics)
    except ValidationError as e:
        logger.error(f"Invalid parameters for '{command}':\n{e}")
        log_failure(run_timestamp, command, e, InvalidInputError.exit_code, params=flags, log_dir=logs_directory)
        return InvalidInputError.exit_code
    except FracLatticeError as e:
        logger.error(f"{type(e).__name__}: {e}")
        log_failure(run_timestamp, command, e, e.exit_code, params=flags, log_dir=logs_directory)
        if e.outputs and params is not None:
            # files written before the failure keep their manifest
            manifest = write_manifest(command, params.model_dump(), e.outputs, e.diagnostics)
            logger.info(f"Manifest: {manifest}")
        return e.exit_code

    for path in outputs:
        logger.info(f"Wrote {path}")
    logger.info(f"Manifest: {manifest}")
    return 0
