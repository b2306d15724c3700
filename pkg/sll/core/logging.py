import logging
import sys
from typing import Optional

from .config import settings
from .errors import ConfigurationError

LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def configure_logging(level: Optional[str] = None) -> int:
    """Route package diagnostics to stderr at the requested level (defaults to SLL_LOG)."""
    name = (level or settings.log).lower()
    if name not in LEVELS:
        raise ConfigurationError(f"unknown log level {name!r}; choose from error, warn, info, debug")

    numeric = LEVELS[name]
    logger = logging.getLogger("sll")
    logger.setLevel(numeric)

    handler = next((h for h in logger.handlers if getattr(h, "_sll_handler", False)), None)
    if handler is None:
        handler = logging.StreamHandler(sys.stderr)
        handler._sll_handler = True
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)
    else:
        # the previous stream may already be closed; rebind without flushing it
        handler.stream = sys.stderr
    handler.setLevel(numeric)
    logger.propagate = False
    return numeric
