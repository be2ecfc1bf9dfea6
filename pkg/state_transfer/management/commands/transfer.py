from typing import Any, Dict

from django.core.management.base import CommandParser

from state_transfer.channels import ChannelParams
from state_transfer.fock_core import BBOCoupling
from state_transfer.protocol import AliceSettings, QubitSpec
from state_transfer.serializers import TransferSerializer
from state_transfer.sweep import evaluate_transfer, OUTPUT_FORMATS, render_rows
from state_transfer.utils.command_utils import StateTransferCommand

CHANNEL_KEYS = ('p', 'gamma', 'distance', 'beta1', 'beta2', 'p2')


class Command(StateTransferCommand):
    help = 'Run one protected transfer of the qubit (theta, phi) through the path channels.'
    serializer_class = TransferSerializer

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--theta', type=float, default=None, help='Qubit polar angle in degrees, [0, 90].')
        parser.add_argument('--phi', type=float, default=None, help='Qubit relative phase in degrees.')
        parser.add_argument('--p', type=float, default=None, help='Depolarization probability of each path.')
        parser.add_argument('--gamma', type=float, default=None, help='Depolarization rate (1/s).')
        parser.add_argument('--distance', type=float, default=None, help='Path length (m).')
        parser.add_argument('--p2', type=float, default=None, help='Separate depolarization of path 2.')
        parser.add_argument('--beta1', type=float, default=None, help='Dephasing of path 1.')
        parser.add_argument('--beta2', type=float, default=None, help='Dephasing of path 2.')
        parser.add_argument('--g', type=float, default=None, help='Dimensionless crystal coupling.')
        parser.add_argument('--alpha', type=float, default=None, help='Initial pump amplitude.')
        parser.add_argument('--format', choices=OUTPUT_FORMATS, default=None)

    def execute_command(self, validated_data: Dict[str, Any]) -> str:
        channel = ChannelParams(**{key: validated_data[key] for key in CHANNEL_KEYS})
        qubit = QubitSpec.from_degrees(validated_data['theta'], validated_data['phi'])
        alice = AliceSettings.protocol_preset(
            qubit, alpha=validated_data['alpha'], coupling=BBOCoupling(validated_data['g'])
        )

        row = evaluate_transfer(validated_data['theta'], validated_data['phi'], channel, alice)

        return render_rows([row], type(row), validated_data['format'])
