"""
Helper utilities for mtm-bench
"""

import hashlib
import numbers
import time
from functools import wraps
from typing import Optional
from src.utils.logger import get_logger

logger = get_logger(__name__)


def format_scalar(value: Optional[float]) -> str:
    """
    Serialize a scalar as its shortest round-trip decimal

    Args:
        value: Scalar or None

    Returns:
        Text form; empty string for missing values
    """
    if value is None:
        return ""
    if isinstance(value, numbers.Integral) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def parse_scalar(text: str) -> Optional[float]:
    """
    Inverse of format_scalar

    Args:
        text: CSV cell

    Returns:
        float, or None for an empty cell
    """
    text = text.strip()
    if not text:
        return None
    return float(text)


def content_hash(body: str) -> str:
    """
    Git-style blob hash of a text body

    Args:
        body: Text content

    Returns:
        Hex digest of sha1("blob <len>\\0" + body)
    """
    data = body.encode("utf-8")
    header = f"blob {len(data)}\0".encode("utf-8")
    return hashlib.sha1(header + data).hexdigest()


def measure_time(func):
    """
    Decorator to measure function execution time

    Args:
        func: Function to measure

    Returns:
        Wrapped function
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        duration = time.perf_counter() - start_time

        logger.debug(
            f"Function '{func.__name__}' executed in {duration:.4f} seconds"
        )

        return result

    return wrapper

