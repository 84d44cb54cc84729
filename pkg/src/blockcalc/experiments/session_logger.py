"""Per-invocation log files for experiment, fit and simulate runs."""
import logging
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional


class SessionLogger:
    """Logger that creates one log file per blockcalc invocation."""

    def __init__(self, command: str, log_dir: Optional[Path] = None):
        """Initialize session logger.

        Args:
            command: Name of the CLI command being run.
            log_dir: Directory to store log files. Defaults to ~/.blockcalc/logs/
        """
        if log_dir is None:
            log_dir = Path.home() / ".blockcalc" / "logs"

        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)

        timestamp = datetime.now().strftime("%Y-%m-%d_%H-%M-%S_%f")
        self.log_file = self.log_dir / f"{command}_{timestamp}.log"

        self.logger = logging.getLogger(f"blockcalc.session.{command}.{timestamp}")
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        self.logger.handlers.clear()

        file_handler = logging.FileHandler(self.log_file, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(
            logging.Formatter(
                fmt="%(asctime)s [%(levelname)s] %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S",
            )
        )
        self.logger.addHandler(file_handler)

        self.logger.info("=" * 80)
        self.logger.info(f"BLOCKCALC {command.upper()} STARTED")
        self.logger.info(f"Log file: {self.log_file}")
        self.logger.info("=" * 80)

    def log_parameters(self, **params):
        for name, value in params.items():
            self.logger.info(f"{name} = {value}")

    def log_spec(self, name: str, kind: str, parameter: str, values: Iterable[float]):
        self.logger.info("-" * 40)
        self.logger.info(f"EXPERIMENT {name} ({kind}) sweeping {parameter} over {list(values)}")

    def log_point(self, parameter: str, value: float, **results):
        summary = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in results.items())
        self.logger.debug(f"{parameter}={value}: {summary}")

    def log_output(self, path: Path):
        self.logger.info(f"Wrote {path}")

    def log_warning(self, message: str):
        self.logger.warning(message)

    def log_exception(self, error: BaseException):
        self.logger.error(f"ERROR: {error}", exc_info=error)

    def log_session_end(self, status: str = "ok"):
        self.logger.info("=" * 80)
        self.logger.info(f"BLOCKCALC SESSION ENDED ({status})")
        self.logger.info("=" * 80)
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)

    def get_log_path(self) -> Path:
        """Get the path to the current session log file."""
        return self.log_file
