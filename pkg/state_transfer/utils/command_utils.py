# Shared plumbing of the management commands: config file merge, option
# validation through the command serializer and error-to-exit-code mapping

import json
from typing import Any, Dict, Type

from django.core.management.base import BaseCommand, CommandError, CommandParser
from rest_framework.serializers import Serializer

from state_transfer.utils.config_utils import merge_options
from state_transfer.utils.error_utils import (
    ConfigurationError, EXIT_CODE_COMPUTATION, EXIT_CODE_USAGE, get_command_info, handle_known_error,
    handle_unknown_error, OutputError, StateTransferError, ValidationError
)
from state_transfer.utils.message_themes import errors as error_messages


class StateTransferCommand(BaseCommand):
    serializer_class: Type[Serializer] = Serializer

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--config', type=str, default=None, help='YAML file with option values.')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser: CommandParser) -> None:
        pass

    def execute_command(self, validated_data: Dict[str, Any]) -> str | None:
        raise NotImplementedError

    @property
    def command_name(self) -> str:
        return self.__module__.rpartition('.')[-1]

    def validate_options(self, options: Dict[str, Any]) -> Dict[str, Any]:
        serializer_fields = self.serializer_class().fields.keys()
        merged_options = merge_options(options, serializer_fields, options.get('config'))

        serializer = self.serializer_class(data=merged_options)
        if not serializer.is_valid():
            raise ValidationError(error_messages.invalid_options(json.dumps(serializer.errors)))

        return dict(serializer.validated_data)     # type: ignore

    def handle(self, *args, **options) -> None:
        command_info = get_command_info(self.command_name, options)

        try:
            validated_data = self.validate_options(options)
        except StateTransferError as config_err:
            raise handle_known_error('configuration', config_err, command_info, returncode=EXIT_CODE_USAGE)

        try:
            report = self.execute_command(validated_data)
        except (ConfigurationError, ValidationError) as usage_err:
            raise handle_known_error('configuration', usage_err, command_info, returncode=EXIT_CODE_USAGE)
        except OutputError as output_err:
            raise handle_known_error('output', output_err, command_info, returncode=EXIT_CODE_COMPUTATION)
        except StateTransferError as computation_err:
            raise handle_known_error('computation', computation_err, command_info, returncode=EXIT_CODE_COMPUTATION)
        except OSError as output_err:
            raise handle_known_error('output', output_err, command_info, returncode=EXIT_CODE_COMPUTATION)
        except CommandError:
            raise
        except Exception as unknwn_err:
            raise handle_unknown_error('computation', unknwn_err, command_info)

        if report:
            self.stdout.write(report, ending='' if report.endswith('\n') else '\n')
