import functools
import logging
import time

from humanfriendly import format_timespan

logger = logging.getLogger(__name__)


def log_runtime(label: str):
    """
    Decorator that logs how long the wrapped callable took.

    Args:
      label: Name shown in the log line.
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed = time.perf_counter() - start
                logger.info("⏲️ %s finished in %s", label, format_timespan(elapsed, detailed=True))

        return wrapper

    return decorator
