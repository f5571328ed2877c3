"""
Legendre Lab Core Library - Utilities Module

Logging setup, the exception hierarchy, and small helpers shared across modules.
"""

import logging
import sys
from fractions import Fraction
from typing import Any, Optional, Union
from .config import config

# Setup logging
LOG_FILE = config.log_file
LOG_FILE.parent.mkdir(parents=True, exist_ok=True)

logging.basicConfig(
    level=getattr(logging, str(config.get("logging.level", "WARNING")).upper()),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.FileHandler(LOG_FILE), logging.StreamHandler(sys.stderr)],
)

logger = logging.getLogger("legendre")


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance"""
    return logging.getLogger(f"legendre.{name}")


def set_log_level(level: str):
    """Change the level of every legendre logger"""
    logging.getLogger("legendre").setLevel(getattr(logging, level.upper()))


class LegendreError(Exception):
    """Base class for every error raised by legendre_core"""


class ConfigError(LegendreError):
    """Invalid configuration value or file"""


class ParseError(LegendreError):
    """Syntax or restriction violation in a function expression"""

    def __init__(self, position: int, message: str, text: str = ""):
        self.position = position
        self.message = message
        self.text = text
        super().__init__(f"{message} at position {position}")

    def caret(self) -> str:
        """Render the input with a caret under the offending character"""
        if not self.text:
            return str(self)
        return f"{self.text}\n{' ' * self.position}^ {self.message}"


class EvaluationError(LegendreError):
    """Domain violation while evaluating an expression"""

    def __init__(self, subexpression: Any, message: str):
        self.subexpression = subexpression
        self.message = message
        super().__init__(f"{message}: {subexpression}")


class QuadratureError(LegendreError):
    """Node computation failure or non-finite integrand values"""


class ExtrapolationError(LegendreError):
    """Endpoint ladder could not be evaluated"""


class OperatorError(LegendreError):
    """Inconsistent operator data (Stirling sums, indicial samples, JSON)"""


class ConditioningError(LegendreError):
    """Gram matrix too ill-conditioned to factor"""


class EigenSolverError(LegendreError):
    """Jacobi rotations failed to converge"""


class CEConfigurationError(LegendreError):
    """Chisholm-Everitt problem violates the theorem's hypotheses"""


class BoundViolation(LegendreError):
    """A norm ratio exceeded 2K"""

    def __init__(self, message: str, report: Any = None):
        self.report = report
        super().__init__(message)


def to_fraction(value: Union[int, str, float, Fraction]) -> Fraction:
    """Convert user input to an exact rational"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


def format_fraction(value: Fraction) -> str:
    """Render an exact rational as 'p' or 'p/q'"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_endpoint(value: Optional[Union[int, float, str]]) -> int:
    """Normalize an endpoint argument to +1 or -1"""
    try:
        endpoint = int(float(value))
    except (TypeError, ValueError):
        raise ConfigError(f"Endpoint must be +1 or -1, got {value!r}")
    if endpoint not in (1, -1):
        raise ConfigError(f"Endpoint must be +1 or -1, got {value!r}")
    return endpoint
