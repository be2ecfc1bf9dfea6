import logging
from typing import Any, Dict

from django.core.management.base import CommandParser

from state_transfer.serializers import ValidateSerializer
from state_transfer.utils.command_utils import StateTransferCommand
from state_transfer.utils.error_utils import ChecksFailedError
from state_transfer.utils.message_themes import errors as error_messages, success as success_messages
from state_transfer.validation import run_validation

logger = logging.getLogger('state_transfer')


class Command(StateTransferCommand):
    help = 'Cross-check the perturbative engine, the channels, the pipeline and the distillation bookkeeping.'
    serializer_class = ValidateSerializer

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--g', type=float, default=None)
        parser.add_argument('--alpha', type=float, default=None)
        parser.add_argument('--nmax', type=int, default=None, help='Photons per path mode.')
        parser.add_argument('--pump-nmax', type=int, default=None, help='Pump Fock truncation of the oracle.')
        parser.add_argument('--tol', type=float, default=None, help='Oracle tolerance; default 20 (g alpha)^3.')

    def execute_command(self, validated_data: Dict[str, Any]) -> None:
        report = run_validation(
            g=validated_data['g'], alpha=validated_data['alpha'], n_max=validated_data['nmax'],
            pump_n_max=validated_data['pump_nmax'], tolerance=validated_data['tol']
        )

        # The report goes out in both outcomes
        self.stdout.write(report.to_json(), ending='')
        if not report.passed:
            raise ChecksFailedError(error_messages.validation_checks_failed(report.failures), failures=report.failures)

        logger.info(success_messages.VALIDATION_PASSED)
