"""Score-based local structure learning for discrete Bayesian networks."""

from .core.config import settings

__version__ = settings.version
