"""
Command logging.
Logs start, finish and elapsed time of every CLI verb.
"""

import functools
import time
from typing import Callable

from infobound.config import settings
from infobound.utils.logger import log_error, log_info


def log_command(name: str) -> Callable[[Callable[..., int]], Callable[..., int]]:
    """Decorator logging one CLI verb under `name`."""

    def decorator(func: Callable[..., int]) -> Callable[..., int]:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> int:
            start_time = time.time()
            log_info(f"Command started: {name}", version=settings.APP_VERSION)
            try:
                exit_code = func(*args, **kwargs)
            except Exception as e:
                elapsed_ms = round((time.time() - start_time) * 1000, 2)
                log_error(f"Command failed: {name}", error=str(e), elapsed_ms=elapsed_ms)
                raise
            elapsed_ms = round((time.time() - start_time) * 1000, 2)
            log_info(f"Command finished: {name}", exit_code=exit_code, elapsed_ms=elapsed_ms)
            return exit_code

        return wrapper

    return decorator
