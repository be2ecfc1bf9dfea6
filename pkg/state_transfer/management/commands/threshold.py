import json
from typing import Any, Dict

from django.core.management.base import CommandParser

from state_transfer.distill_compare import advantage_threshold, AdvantageThreshold
from state_transfer.serializers import ThresholdSerializer
from state_transfer.sweep import format_float, OUTPUT_FORMATS
from state_transfer.utils.command_utils import StateTransferCommand


def render_threshold(threshold: AdvantageThreshold, output_format: str) -> str:
    if output_format == 'json':
        data = {
            'p_star': threshold.p_star,
            'windows': [
                {'p': p, 'theta_lo': window[0] if window else None, 'theta_hi': window[1] if window else None}
                for p, window in threshold.windows.items()
            ],
        }
        return json.dumps(data, indent=2, allow_nan=False) + '\n'

    lines = [f'p_star,{format_float(threshold.p_star)}', 'p,theta_lo,theta_hi']
    for p, window in threshold.windows.items():
        bounds = [format_float(bound) for bound in window] if window else ['', '']
        lines.append(','.join([format_float(p), *bounds]))
    return '\n'.join(lines) + '\n'


class Command(StateTransferCommand):
    help = 'Locate the depolarization above which matched distilled teleportation can win, and its theta windows.'
    serializer_class = ThresholdSerializer

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--tol', type=float, default=None, help='Bisection tolerance on p.')
        parser.add_argument('--theta-tol', type=float, default=None, help='Bisection tolerance on theta (deg).')
        parser.add_argument(
            '--p-samples', type=float, nargs='+', default=None,
            help='p values for the windows. The window opens at p_star as a narrow band around 45 deg and widens '
                 'with p, reaching about 28-62 deg at p=1; at p <= p_star it is empty.'
        )
        parser.add_argument('--format', choices=OUTPUT_FORMATS, default=None)

    def execute_command(self, validated_data: Dict[str, Any]) -> str:
        threshold = advantage_threshold(
            sample_ps=tuple(validated_data['p_samples']), tolerance=validated_data['tol'],
            tolerance_deg=validated_data['theta_tol']
        )
        return render_threshold(threshold, validated_data['format'])
