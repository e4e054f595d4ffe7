import logging
import os
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler
from typing import Optional

from app.config.settings import get_settings

# Global logger configurations
_loggers = {}
_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _file_handler(name: str) -> Optional[RotatingFileHandler]:
    settings = get_settings()
    log_dir = settings.logging.file
    if not log_dir:
        return None
    os.makedirs(log_dir, exist_ok=True)
    log_file = os.path.join(
        log_dir,
        f"{name.replace('.', '_')}_{datetime.now().strftime('%Y%m%d')}.log"
    )
    handler = RotatingFileHandler(
        log_file,
        maxBytes=settings.logging.max_size,
        backupCount=settings.logging.backup_count
    )
    handler.setFormatter(logging.Formatter(_FORMAT))
    return handler


def get_logger(name: str, log_level: Optional[str] = None) -> logging.Logger:
    """Get a configured logger.

    Args:
        name: Logger name
        log_level: Log level

    Returns:
        Configured logger
    """
    if name in _loggers:
        return _loggers[name]

    logger = logging.getLogger(name)

    settings = get_settings()
    logger.setLevel(log_level or settings.logging.level)

    # Console output goes to stderr so command payloads on stdout stay clean
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(_FORMAT))
    console_handler.setLevel(logging.WARNING)
    logger.addHandler(console_handler)

    file_handler = _file_handler(name)
    if file_handler is not None:
        logger.addHandler(file_handler)

    logger.propagate = False
    _loggers[name] = logger

    return logger


def configure_logging(verbose: bool = False) -> None:
    """Configure global logging settings."""
    settings = get_settings()
    if verbose:
        settings.logging.level = "DEBUG"
    level = settings.logging.level

    for logger in _loggers.values():
        logger.setLevel(level)
        for handler in logger.handlers:
            if not isinstance(handler, RotatingFileHandler):
                handler.setLevel(level if verbose else logging.WARNING)

    logging.getLogger().setLevel(level)

    # Suppress noisy loggers
    logging.getLogger('networkx').setLevel(logging.WARNING)
