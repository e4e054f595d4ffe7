import sys
import traceback
from typing import Dict, Optional, Type, Union, Callable
import functools

from app.utils.logger import get_logger

# Set up logger
logger = get_logger(__name__)


class OmegaError(Exception):
    """Base class for all engine exceptions."""

    def __init__(self, message: str, details: Optional[Dict] = None):
        """Initialize error.

        Args:
            message: Error message
            details: Additional error details
        """
        self.message = message
        self.details = details or {}
        super().__init__(message)


class InputError(OmegaError):
    """Error raised for malformed or mismatched inputs."""
    pass


class CapacityError(OmegaError):
    """Error raised when a construction exceeds its state or letter budget."""
    pass


class UnsupportedFragmentError(OmegaError):
    """Error raised for formulas outside the fragment a presentation supports."""
    pass


class InvariantViolation(OmegaError):
    """Error raised when an internal self-check fails."""
    pass


class PresentationError(OmegaError):
    """Error raised for malformed presentations."""
    pass


class Budget:
    """Counts constructed states against a cap and aborts with CapacityError."""

    def __init__(self, limit: int, what: str):
        self.limit = limit
        self.what = what
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            logger.warning(f"{self.what}: state budget of {self.limit} exceeded")
            raise CapacityError(
                f"{self.what} exceeded the state budget of {self.limit}",
                {"budget": self.limit, "operation": self.what},
            )


def handle_exceptions(
    error_classes: Optional[Union[Type[Exception], Dict[Type[Exception], str]]] = None,
    default_message: str = "An unexpected error occurred",
    log_error: bool = True,
) -> Callable:
    """Decorator turning exceptions raised by a command into error outcomes.

    Args:
        error_classes: Exception classes to handle, optionally mapped to messages
        default_message: Default error message
        log_error: Whether to log the error

    Returns:
        Decorated function
    """
    if error_classes is None:
        error_classes = Exception

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            from app.models.result import CommandOutcome

            try:
                return func(*args, **kwargs)
            except Exception as e:
                message = None
                if isinstance(error_classes, dict):
                    for error_class, text in error_classes.items():
                        if isinstance(e, error_class):
                            message = text
                            break
                elif isinstance(e, error_classes):
                    message = default_message

                if message is None:
                    if log_error:
                        logger.error(f"Unexpected error: {str(e)}")
                        logger.error(traceback.format_exc())
                    return CommandOutcome.error_outcome("An unexpected error occurred", str(e))

                if log_error:
                    logger.error(f"{message}: {str(e)}")
                    logger.debug(traceback.format_exc())
                details = getattr(e, "details", {}) or {}
                return CommandOutcome.error_outcome(message, str(e), details)

        return wrapper

    return decorator


def setup_global_exception_handler():
    """Set up a global handler that logs uncaught exceptions."""
    def handle_uncaught_exception(exc_type, exc_value, exc_traceback):
        if issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_traceback)
            return

        logger.critical("Uncaught exception", exc_info=(exc_type, exc_value, exc_traceback))

    sys.excepthook = handle_uncaught_exception
