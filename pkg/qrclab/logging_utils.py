"""
Logging setup shared by the library and the ``qrclab`` command.

Everything hangs off the ``qrclab`` logger. ``configure_logging`` attaches a
stderr handler and a rotating log file once per process; library modules
only ever call ``logging.getLogger(__name__)`` and pass structured context
through ``extra``.

Environment variables
---------------------
- ``QRCLAB_LOG_LEVEL``: DEBUG, INFO, WARNING or ERROR. Default: INFO.
- ``QRCLAB_LOG_FILE``: log file path; an empty value turns file logging off.
- ``QRCLAB_LOG_DIR``: directory of the default ``qrclab.log``
  (default ``~/.cache/qrclab/logs``).
- ``QRCLAB_LOG_MAX_BYTES``: rotation size in bytes. Default: 5_000_000.
- ``QRCLAB_LOG_BACKUPS``: rotated files kept. Default: 3.
- ``QRCLAB_LOG_CONSOLE``: ``1``/``0`` toggle for stderr output. Default: on.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
import importlib.metadata
import logging
from logging.handlers import RotatingFileHandler
import os
from pathlib import Path
import platform
import sys

from qrclab import __version__

ROOT_LOGGER = "qrclab"

_LOG_FORMAT = (
    "%(asctime)s %(levelname)s [%(name)s] [%(process)d:%(threadName)s] %(message)s"
)
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Chatty during JIT compilation and process-pool startup
_QUIET_LIBRARIES = ("jax", "jax._src", "absl", "asyncio", "concurrent.futures")

_TRUE_VALUES = frozenset({"1", "true", "yes", "on"})

_configured = False
_active_log_file: Path | None = None


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def _env_level(default: str = "INFO") -> int:
    level = logging.getLevelName(os.environ.get("QRCLAB_LOG_LEVEL", default).upper())
    return level if isinstance(level, int) else logging.INFO


def _default_log_file() -> Path:
    base = os.environ.get("QRCLAB_LOG_DIR")
    log_dir = Path(base) if base else Path.home() / ".cache" / "qrclab" / "logs"
    return log_dir / "qrclab.log"


@dataclass(frozen=True)
class LoggingSettings:
    """Resolved logging options; ``log_file`` None means no file handler."""

    level: int = logging.INFO
    console: bool = True
    log_file: Path | None = None
    max_bytes: int = 5_000_000
    backups: int = 3

    @classmethod
    def from_env(
        cls,
        *,
        level: str | int | None = None,
        log_file: str | os.PathLike[str] | None = None,
        console: bool | None = None,
    ) -> LoggingSettings:
        """Merge explicit arguments over the ``QRCLAB_LOG_*`` environment."""
        if level is None:
            resolved_level = _env_level()
        elif isinstance(level, str):
            named = logging.getLevelName(level.upper())
            resolved_level = named if isinstance(named, int) else logging.INFO
        else:
            resolved_level = int(level)

        if console is None:
            console_env = os.environ.get("QRCLAB_LOG_CONSOLE")
            console = (
                True if console_env is None else console_env.strip().lower() in _TRUE_VALUES
            )

        if log_file is None:
            env_file = os.environ.get("QRCLAB_LOG_FILE")
            path = _default_log_file() if env_file is None else (Path(env_file) if env_file else None)
        else:
            path = Path(log_file) if str(log_file) else None

        return cls(
            level=resolved_level,
            console=console,
            log_file=path,
            max_bytes=_env_int("QRCLAB_LOG_MAX_BYTES", 5_000_000),
            backups=_env_int("QRCLAB_LOG_BACKUPS", 3),
        )

    def handlers(self) -> list[logging.Handler]:
        formatter = logging.Formatter(fmt=_LOG_FORMAT, datefmt=_DATE_FORMAT)
        created: list[logging.Handler] = []
        if self.console:
            created.append(logging.StreamHandler(sys.stderr))
        if self.log_file is not None:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)
            created.append(
                RotatingFileHandler(
                    self.log_file, maxBytes=self.max_bytes, backupCount=self.backups
                )
            )
        for handler in created:
            handler.setLevel(self.level)
            handler.setFormatter(formatter)
        return created


def _detach_handlers(logger: logging.Logger) -> None:
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()


def configure_logging(
    *,
    level: str | int | None = None,
    log_file: str | os.PathLike[str] | None = None,
    console: bool | None = None,
    force: bool = False,
) -> logging.Logger:
    """Attach handlers to the ``qrclab`` logger and return it.

    Only the first call has an effect unless ``force`` is set; the CLI forces
    a reconfiguration for ``--verbose``.

    Args:
        level: Level name or number; defaults to ``QRCLAB_LOG_LEVEL``
        log_file: Log file path; ``""`` disables file logging
        console: Emit to stderr; defaults to ``QRCLAB_LOG_CONSOLE``
        force: Replace handlers installed by an earlier call
    """
    global _configured, _active_log_file

    logger = logging.getLogger(ROOT_LOGGER)
    if _configured and not force:
        return logger

    settings = LoggingSettings.from_env(level=level, log_file=log_file, console=console)

    _detach_handlers(logger)
    logger.setLevel(settings.level)
    logger.propagate = False
    for handler in settings.handlers():
        logger.addHandler(handler)

    for name in _QUIET_LIBRARIES:
        logging.getLogger(name).setLevel(logging.WARNING)

    _configured = True
    _active_log_file = settings.log_file
    logger.debug(
        "Logging configured",
        extra={
            "level": logging.getLevelName(settings.level),
            "console": settings.console,
            "log_file": str(settings.log_file) if settings.log_file else None,
        },
    )
    return logger


def get_logger(name: str | None = None) -> logging.Logger:
    """Logger ``qrclab.<name>``, configuring logging on first use."""
    configure_logging()
    return logging.getLogger(f"{ROOT_LOGGER}.{name}" if name else ROOT_LOGGER)


def get_log_file_path() -> str | None:
    configure_logging()
    return str(_active_log_file) if _active_log_file is not None else None


def _package_version(dist: str) -> str | None:
    try:
        return importlib.metadata.version(dist)
    except importlib.metadata.PackageNotFoundError:
        return None


def log_environment(
    logger: logging.Logger,
    *,
    component: str,
    extra_keys: Iterable[tuple[str, str]] | None = None,
) -> None:
    """Log one record with versions, the array backend and the host."""
    from qrclab.backend import get_backend

    context: dict[str, object] = {
        "component": component,
        "version": __version__,
        "python": platform.python_version(),
        "numpy": _package_version("numpy"),
        "scipy": _package_version("scipy"),
        "jax": _package_version("jax"),
        "backend": get_backend().name,
        "platform": platform.platform(),
        "pid": os.getpid(),
    }
    if extra_keys:
        context.update(dict(extra_keys))
    logger.info("Runtime environment", extra=context)


def reset_logging() -> None:
    """Remove all handlers and forget the configuration (test helper)."""
    global _configured, _active_log_file

    logger = logging.getLogger(ROOT_LOGGER)
    _detach_handlers(logger)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)
    _configured = False
    _active_log_file = None
