"""
Command error handler.
Maps exceptions raised by CLI verbs to exit codes and one structured error
object on stderr.
"""

import functools
import json
import sys
import traceback
from typing import Any, Callable, Dict, List

from pydantic import ValidationError

from infobound.utils.exceptions import InfoBoundException, format_error
from infobound.utils.logger import log_error


EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload), file=sys.stderr)


def _validation_details(error: ValidationError) -> List[Dict[str, str]]:
    details = []
    for err in error.errors():
        details.append({
            "field": " -> ".join(str(loc) for loc in err["loc"]),
            "message": err["msg"],
            "type": err["type"],
        })
    return details


def handle_command_errors(func: Callable[..., int]) -> Callable[..., int]:
    """
    Wrap a CLI verb so every failure becomes an exit code.

    Exit codes: 1 numerical inconsistency, 2 usage or validation,
    3 I/O, 4 unexpected internal error.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)

        except InfoBoundException as e:
            _emit(format_error(e.error_code, e.message, e.exit_code, e.details() or None))
            return e.exit_code

        except ValidationError as e:
            _emit(format_error("VALIDATION_ERROR", "Parameter validation failed", EXIT_USAGE,
                               {"errors": _validation_details(e)}))
            return EXIT_USAGE

        except json.JSONDecodeError as e:
            _emit(format_error("INSTANCE_FORMAT", f"line {e.lineno} column {e.colno}: {e.msg}", EXIT_USAGE))
            return EXIT_USAGE

        except ValueError as e:
            _emit(format_error("INVALID_VALUE", str(e), EXIT_USAGE))
            return EXIT_USAGE

        except OSError as e:
            _emit(format_error("IO_ERROR", str(e), EXIT_IO))
            return EXIT_IO

        except Exception as e:
            log_error(
                "Unexpected error occurred",
                error=str(e),
                error_type=type(e).__name__,
                traceback=traceback.format_exc()
            )
            _emit(format_error("INTERNAL_ERROR", "An unexpected error occurred", EXIT_INTERNAL))
            return EXIT_INTERNAL

    return wrapper
