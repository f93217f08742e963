"""
Utility modules for mtm-bench
"""

from src.utils.logger import setup_logger, get_logger
from src.utils.helpers import content_hash, format_scalar, measure_time, parse_scalar

__all__ = [
    "setup_logger",
    "get_logger",
    "content_hash",
    "format_scalar",
    "measure_time",
    "parse_scalar",
]
