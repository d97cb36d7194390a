"""
Loggers for the confocal diagram pipeline: one console handler on stderr
(stdout carries the CLI tables) and one rotating file under `settings.log_dir`.
"""
import logging
import sys
from logging.handlers import RotatingFileHandler

from .settings import settings

# Track configured loggers to avoid duplicate configuration
_configured_loggers: set[str] = set()

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
QUIET_LIBRARIES = ("matplotlib", "PIL", "trimesh", "shapely")


def get_logger(name: str) -> logging.Logger:
    """
    Get or create a logger with standardized configuration.

    Args:
        name: Logger name (typically `__name__` of the module).

    Returns:
        Configured logger instance with console and rotating file handlers.
    """
    if name in _configured_loggers:
        return logging.getLogger(name)

    logger = logging.getLogger(name)
    logger.setLevel(settings.log_level)

    # Prevent duplicate handlers when logger is retrieved multiple times
    if logger.hasHandlers() and logger.handlers:
        return logger

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(settings.log_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    try:
        settings.log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            settings.log_dir / settings.log_file,
            maxBytes=10_485_760,  # 10MB
            backupCount=5,
        )
        file_handler.setLevel(settings.log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    except OSError:
        # read-only working directory: console logging only
        logger.debug("File logging disabled, cannot write to %s", settings.log_dir)

    logger.propagate = False
    _configured_loggers.add(name)

    return logger


def set_level(level: str) -> None:
    """Change the level of every logger configured so far."""
    settings.log_level = level.upper()
    for name in _configured_loggers:
        logger = logging.getLogger(name)
        logger.setLevel(settings.log_level)
        for handler in logger.handlers:
            handler.setLevel(settings.log_level)


def setup_root_logger():
    """Configure the root logger for libraries that use it; plotting and mesh libraries stay at WARNING."""
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt=DATE_FORMAT,
        stream=sys.stderr,
    )
    for noisy in QUIET_LIBRARIES:
        logging.getLogger(noisy).setLevel(logging.WARNING)
