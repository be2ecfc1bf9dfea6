# Command configuration files (YAML) and their merge with CLI options

import os
from typing import Any, Dict, Iterable

import yaml

from state_transfer.utils.error_utils import ConfigurationError
from state_transfer.utils.message_themes import errors as error_messages


def load_config_file(config_path: str) -> Dict[str, Any]:
    if not os.path.isfile(config_path):
        raise ConfigurationError(error_messages.config_file_not_found(config_path))

    try:
        with open(config_path, 'r', encoding='utf-8') as config_file:
            config_data = yaml.safe_load(config_file)
    except yaml.YAMLError as yaml_err:
        raise ConfigurationError(f'{error_messages.INVALID_CONFIG_FILE_FORMAT} {yaml_err}') from yaml_err

    # An empty file is an empty configuration
    if config_data is None:
        return {}
    if not isinstance(config_data, dict):
        raise ConfigurationError(error_messages.INVALID_CONFIG_FILE_FORMAT)

    # Accept both the CLI spelling (pump-nmax) and the option name (pump_nmax)
    return {str(key).replace('-', '_'): value for key, value in config_data.items()}


def merge_options(
    cli_options: Dict[str, Any], allowed_keys: Iterable[str], config_path: str | None = None
) -> Dict[str, Any]:
    """
    Config file values first, explicit CLI flags on top. Options left at None
    were not given on the command line.
    """
    allowed_keys = set(allowed_keys)
    merged: Dict[str, Any] = {}

    if config_path:
        config_data = load_config_file(config_path)
        unknown_keys = sorted(set(config_data) - allowed_keys)
        if unknown_keys:
            raise ConfigurationError(error_messages.unknown_config_keys(unknown_keys))
        merged.update(config_data)

    merged.update({key: value for key, value in cli_options.items() if key in allowed_keys and value is not None})

    return merged
