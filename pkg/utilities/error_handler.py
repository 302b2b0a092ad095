#!/usr/bin/env python3
"""
Centralized Error Handling System
Provides the exception hierarchy, logging setup and error reporting shared by every
estimator, study runner and the command-line interface.
"""

import logging
import threading
from datetime import datetime
from functools import wraps
from typing import Any, Callable, Dict, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.text import Text

import config

# Diagnostics go to stderr; stdout is reserved for machine output.
console = Console(stderr=True)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_ESTIMATION_ERROR = 3


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Install the rich stderr handler and, when configured, a file handler."""
    level_name = (level or config.LOG_LEVEL).upper()
    handlers: list = [RichHandler(console=console, show_path=False, rich_tracebacks=False)]
    handlers[0].setFormatter(logging.Formatter(config.LOG_FORMAT))

    target = log_file or config.LOG_FILE
    if target:
        file_handler = logging.FileHandler(target)
        file_handler.setFormatter(logging.Formatter(config.FILE_LOG_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(level=getattr(logging, level_name, logging.WARNING),
                        handlers=handlers, force=True)


class PipError(Exception):
    """Base exception for PIP toolkit errors."""
    exit_code = EXIT_ESTIMATION_ERROR


class InvalidArgumentError(PipError):
    """Exception for non-finite inputs, dimension mismatches and unknown names."""
    exit_code = EXIT_INPUT_ERROR


class DomainError(PipError):
    """Exception for values outside a function's mathematical domain."""
    exit_code = EXIT_INPUT_ERROR


class DataError(PipError):
    """Exception for dataset and CSV invariant violations."""
    exit_code = EXIT_INPUT_ERROR


class ConfigError(PipError):
    """Exception for invalid configuration files or flag combinations."""
    exit_code = EXIT_INPUT_ERROR


class FileError(PipError):
    """Exception for file operation errors."""
    exit_code = EXIT_INPUT_ERROR


class SingularDesignError(PipError):
    """Exception for rank-deficient design matrices."""


class InsufficientDataError(PipError):
    """Exception for fits with too few observations."""


class InvalidCovarianceError(PipError):
    """Exception for covariance matrices that are not positive semi-definite."""


class EstimationFailedError(PipError):
    """Exception for a failed resampling, Monte-Carlo or study step."""
    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None,
                 cause: Optional[BaseException] = None):
        self.context = context or {}
        self.cause = cause
        detail = f"{message}: {cause}" if cause is not None else message
        super().__init__(detail)


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code."""
    if isinstance(error, PipError):
        return error.exit_code
    if isinstance(error, (FileNotFoundError, PermissionError, IsADirectoryError)):
        return EXIT_INPUT_ERROR
    return EXIT_ESTIMATION_ERROR


class ErrorHandler:
    """Centralized error reporting with per-type counts."""

    def __init__(self):
        self.error_counts: Dict[str, int] = {}
        # worker threads record through handle_exceptions
        self._lock = threading.Lock()

    def record(self, error: BaseException) -> None:
        key = type(error).__name__
        with self._lock:
            self.error_counts[key] = self.error_counts.get(key, 0) + 1

    def log_error_with_context(self, error: BaseException, context: Dict[str, Any] = None,
                               show_panel: bool = True) -> None:
        """Log error with additional context information."""
        self.record(error)
        error_info = {
            'error_type': type(error).__name__,
            'error_message': str(error),
            'timestamp': datetime.now().isoformat(),
            'context': {**getattr(error, 'context', {}), **(context or {})},
        }
        logger.error(f"Error occurred: {error_info}")

        if not show_panel:
            return

        error_text = Text()
        error_text.append(f"Error Type: {error_info['error_type']}\n", style=config.STYLE_ERROR)
        error_text.append(f"Message: {error_info['error_message']}", style="white")
        if error_info['context']:
            error_text.append("\nContext:\n", style="bold")
            for key, value in error_info['context'].items():
                error_text.append(f"  {key}: {value}\n", style="dim")

        console.print(Panel(error_text, title="Error Details", border_style=config.STYLE_ERROR))

    def create_error_summary(self) -> Dict[str, Any]:
        """Create a summary of all errors encountered."""
        with self._lock:
            counts = dict(self.error_counts)
        return {'total_errors': sum(counts.values()), 'error_breakdown': counts}

    def reset_error_counts(self) -> None:
        with self._lock:
            self.error_counts.clear()


# Global error handler instance
error_handler = ErrorHandler()


def handle_exceptions(func: Callable) -> Callable:
    """Decorator that logs toolkit errors with the function context and re-raises."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except PipError as e:
            error_handler.record(e)
            logger.debug(f"{func.__name__} raised {type(e).__name__}: {e}")
            raise
        except Exception as e:
            error_handler.log_error_with_context(e, {'function': func.__name__}, show_panel=False)
            raise
    return wrapper
