import logging
from typing import Any, Dict

from django.core.management.base import CommandParser

from state_transfer.serializers import SweepSerializer
from state_transfer.sweep import (
    BETA2_SYMMETRIC, BETA2_ZERO, DEPHASING, DEPOLARIZING, OUTPUT_FORMATS, run_sweep, SweepConfig, write_rows
)
from state_transfer.utils.command_utils import StateTransferCommand
from state_transfer.utils.message_themes import info as info_messages

logger = logging.getLogger('state_transfer')

# Option name -> SweepConfig field
CONFIG_FIELDS = {
    'mode': 'mode', 'theta_min': 'theta_min', 'theta_max': 'theta_max', 'theta_steps': 'theta_steps',
    'p_min': 'p_min', 'p_max': 'p_max', 'p_steps': 'p_steps',
    'beta_min': 'beta_min', 'beta_max': 'beta_max', 'beta_steps': 'beta_steps', 'beta2_mode': 'beta2_mode',
    'phi': 'phi_deg', 'g': 'g', 'alpha': 'alpha', 'nmax': 'n_max', 'pump_nmax': 'pump_n_max',
    'output': 'output', 'format': 'output_format',
}


class Command(StateTransferCommand):
    help = 'Evaluate the transfer on a (theta, p) or (theta, beta) grid and write the rows to a file.'
    serializer_class = SweepSerializer

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--mode', choices=(DEPOLARIZING, DEPHASING), default=None)
        for range_name, unit in (('theta', ' (deg)'), ('p', ''), ('beta', '')):
            parser.add_argument(f'--{range_name}-min', type=float, default=None, help=f'Lower {range_name}{unit}.')
            parser.add_argument(f'--{range_name}-max', type=float, default=None, help=f'Upper {range_name}{unit}.')
            parser.add_argument(f'--{range_name}-steps', type=int, default=None, help=f'Grid points in {range_name}.')
        parser.add_argument('--beta2-mode', choices=(BETA2_SYMMETRIC, BETA2_ZERO), default=None)
        parser.add_argument('--phi', type=float, default=None, help='Qubit relative phase in degrees.')
        parser.add_argument('--g', type=float, default=None)
        parser.add_argument('--alpha', type=float, default=None)
        parser.add_argument('--nmax', type=int, default=None, help='Photons per path mode.')
        parser.add_argument('--pump-nmax', type=int, default=None, help='Pump Fock truncation.')
        parser.add_argument('--output', type=str, default=None)
        parser.add_argument('--format', choices=OUTPUT_FORMATS, default=None)
        parser.add_argument('--workers', type=int, default=None, help='Overrides PST_WORKERS.')

    def execute_command(self, validated_data: Dict[str, Any]) -> str:
        config = SweepConfig(**{field: validated_data[option] for option, field in CONFIG_FIELDS.items()})

        rows = run_sweep(config, workers=validated_data['workers'])
        output = write_rows(rows, config.row_class, config.output, config.output_format)

        result_message = info_messages.sweep_results(output, len(rows))
        logger.info(result_message)

        return result_message
