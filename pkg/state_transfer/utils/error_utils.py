# Error handling utilities

from datetime import datetime
import logging
from traceback import format_exception
from typing import Any, Dict

from django.core.management.base import CommandError
import xxhash

from state_transfer.utils.message_themes import errors as error_messages

EXIT_CODE_COMPUTATION = 1
EXIT_CODE_USAGE = 2


class StateTransferError(ValueError):
    pass


class ValidationError(StateTransferError):
    """A parameter is outside its physical or configured domain."""


class ConfigurationError(StateTransferError):
    pass


class UnsupportedSubspaceError(StateTransferError):

    def __init__(self, message: str, offending: list | None = None, weight: float = 0.0):
        super().__init__(message)
        self.offending = offending or []
        self.weight = weight


class DegenerateInputError(StateTransferError):
    pass


class ChannelConsistencyError(StateTransferError):
    pass


class MatchingError(StateTransferError):

    def __init__(self, message: str, diagnostic: Dict[str, Any] | None = None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class OutputError(StateTransferError):
    """The result file cannot be written."""


class ChecksFailedError(StateTransferError):

    def __init__(self, message: str, failures: list[str] | None = None):
        super().__init__(message)
        self.failures = failures or []


def extract_error_traceback(error: Exception) -> list[str]:
    """Transform the error traceback in a list of strings."""
    formatted_err_traceback = format_exception(error.__class__, error, error.__traceback__)

    cleaned_traceback = []

    for line in formatted_err_traceback:
        line = line.strip(' \n')

        split_strings = line.split('\n')

        for sub_string in split_strings:
            sub_str = sub_string.strip()
            cleaned_traceback.append(sub_str)

    return cleaned_traceback


def generate_error_id(error_message: str) -> str:
    timestamp = datetime.now().isoformat()
    return xxhash.xxh64(f'{timestamp}|{error_message}').hexdigest()[:12]


def log_error(
    error_type: str, error_message: str, error_traceback: list[str], command_info: Dict[str, Any] | None = None
) -> str:
    error_id = generate_error_id(error_message)
    logger = logging.getLogger(error_type)
    logger.error(
        error_message,
        extra={'traceback': error_traceback, 'command_info': command_info or {}, 'error_id': error_id}
    )

    return error_id


def get_command_info(command: str, options: Dict[str, Any]) -> Dict[str, Any]:
    command_params = {
        key: val for key, val in options.items()
        if val is not None and key not in ('verbosity', 'settings', 'pythonpath', 'traceback', 'no_color', 'force_color', 'skip_checks')
    }
    return {'command': command, 'command_params': command_params}


def handle_known_error(
    error_type: str, error: Exception, command_info: Dict[str, Any], returncode: int = EXIT_CODE_COMPUTATION
) -> CommandError:
    """Known inconsistencies - log without traceback and build the CommandError to raise."""
    error_message = f'{error.__class__.__name__}: {str(error)}'
    log_error(error_type, error_message, [], command_info)

    return CommandError(error_message, returncode=returncode)


def handle_unknown_error(error_type: str, unknwn_err: Exception, command_info: Dict[str, Any]) -> CommandError:
    """Unknown exception - log the traceback and build the CommandError to raise."""
    error_message = f'{unknwn_err.__class__.__name__}: {str(unknwn_err)}'
    error_id = log_error(error_type, error_message, extract_error_traceback(unknwn_err), command_info)

    return CommandError(
        error_messages.command_failed(command_info.get('command', ''), error_id), returncode=EXIT_CODE_COMPUTATION
    )


def require_in_range(name: str, value: float, low: float, high: float) -> None:
    if not (low <= value <= high):
        raise ValidationError(error_messages.parameter_out_of_range(name, value, low, high))


def require_non_negative(name: str, value: float) -> None:
    if value < 0:
        raise ValidationError(error_messages.negative_parameter(name, value))
