import os
import re
import time
import functools
from typing import Callable, List, Tuple

from app.utils.logger import get_logger

logger = get_logger(__name__)


def ensure_directory(path: str) -> str:
    """Ensure a directory exists.

    Args:
        path: Directory path

    Returns:
        Absolute path
    """
    abs_path = os.path.abspath(path)
    os.makedirs(abs_path, exist_ok=True)
    return abs_path


def sanitize_filename(filename: str) -> str:
    """Replace characters that are not safe in file names with underscores."""
    sanitized = re.sub(r'[\\/*?:"<>|()\s,]', "_", filename)
    return sanitized[:255]


def split_top_level(text: str, separator: str = ",") -> List[str]:
    """Split on a separator, ignoring separators nested in parentheses or braces.

    Args:
        text: Text to split
        separator: Single-character separator

    Returns:
        Stripped non-empty parts
    """
    parts, depth, current = [], 0, []
    for char in text:
        if char in "({":
            depth += 1
        elif char in ")}":
            depth -= 1
        if char == separator and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(char)
    parts.append("".join(current).strip())
    return [p for p in parts if p]


def format_duration(seconds: float) -> str:
    """Format a duration in seconds to a human-readable string."""
    if seconds < 60:
        return f"{seconds:.1f} seconds"
    elif seconds < 3600:
        return f"{seconds / 60:.1f} minutes"
    return f"{seconds / 3600:.1f} hours"


def timeit(func: Callable) -> Callable:
    """Decorator logging the execution time of a function at DEBUG level."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.time()
        result = func(*args, **kwargs)
        logger.debug(f"{func.__name__} took {format_duration(time.time() - start_time)}")
        return result

    return wrapper


def timed(func: Callable, *args, **kwargs) -> Tuple[object, float]:
    """Call a function and return its result with the elapsed seconds."""
    start_time = time.time()
    result = func(*args, **kwargs)
    return result, time.time() - start_time
