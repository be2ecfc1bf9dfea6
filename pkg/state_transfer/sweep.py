# Figure-data sweeps over (theta, p) or (theta, beta) grids

import csv
from dataclasses import asdict, dataclass, fields
from io import StringIO
import json
import os
from typing import Iterable, Sequence, Type

from django.conf import settings
import numpy as np

from state_transfer.channels import ChannelKind, ChannelParams
from state_transfer.distill_compare import matched_k, matched_teleport_success
from state_transfer.fock_core import BBOCoupling
from state_transfer.protocol import (
    AliceSettings, analytic_success, p_direct_dephasing, p_pst_analytic, p_pst_dephasing, p_straight_analytic,
    QubitSpec, run_transfer, simulate_direct
)
from state_transfer.utils.error_utils import OutputError, require_in_range, require_non_negative, ValidationError
from state_transfer.utils.message_themes import errors as error_messages

CONCURRENT_SIMULATION_MODE = settings.CONCURRENT_SIMULATION_MODE
DEFAULT_ALPHA = settings.DEFAULT_ALPHA
DEFAULT_G = settings.DEFAULT_G
FOCK_N_MAX = settings.FOCK_N_MAX
PUMP_N_MAX = settings.PUMP_N_MAX

DEPOLARIZING = 'depolarizing'
DEPHASING = 'dephasing'
BETA2_SYMMETRIC = 'symmetric'
BETA2_ZERO = 'zero'
OUTPUT_FORMATS = ('csv', 'json')


def format_float(value: float) -> str:
    return format(value, '.17g')


@dataclass(frozen=True)
class SweepConfig:
    mode: str = DEPOLARIZING
    theta_min: float = 0.0      # deg
    theta_max: float = 90.0
    theta_steps: int = 19
    p_min: float = 0.0
    p_max: float = 1.0
    p_steps: int = 21
    beta_min: float = 0.0
    beta_max: float = 1.0
    beta_steps: int = 11
    beta2_mode: str = BETA2_SYMMETRIC
    phi_deg: float = 0.0
    g: float = DEFAULT_G
    alpha: float = DEFAULT_ALPHA
    n_max: int = FOCK_N_MAX
    pump_n_max: int = PUMP_N_MAX
    output: str = 'sweep.csv'
    output_format: str = 'csv'

    def __post_init__(self):
        if self.mode not in (DEPOLARIZING, DEPHASING):
            raise ValidationError(error_messages.unknown_channel_kind(self.mode))
        if self.beta2_mode not in (BETA2_SYMMETRIC, BETA2_ZERO):
            raise ValidationError(error_messages.unknown_channel_kind(f'beta2 mode {self.beta2_mode}'))
        if self.output_format not in OUTPUT_FORMATS:
            raise ValidationError(error_messages.unknown_output_format(self.output_format))
        self._check_range('theta', self.theta_min, self.theta_max, self.theta_steps, 0.0, 90.0)
        self._check_range('p', self.p_min, self.p_max, self.p_steps, 0.0, 1.0)
        self._check_range('beta', self.beta_min, self.beta_max, self.beta_steps, 0.0, 1.0)
        require_non_negative('alpha', self.alpha)
        for name in ('n_max', 'pump_n_max'):
            if getattr(self, name) < 1:
                raise ValidationError(error_messages.ensure_value_greater_than_or_equal_to(1))
        BBOCoupling(self.g)

    @staticmethod
    def _check_range(name: str, low: float, high: float, steps: int, domain_low: float, domain_high: float) -> None:
        if steps < 2:
            raise ValidationError(error_messages.range_requires_steps(name))
        if low > high:
            raise ValidationError(error_messages.range_min_greater_than_max(name, low, high))
        require_in_range(f'{name}_min', low, domain_low, domain_high)
        require_in_range(f'{name}_max', high, domain_low, domain_high)

    def theta_grid(self) -> list[float]:
        return [float(theta) for theta in np.linspace(self.theta_min, self.theta_max, self.theta_steps)]

    def inner_grid(self) -> list[float]:
        if self.mode == DEPHASING:
            return [float(beta) for beta in np.linspace(self.beta_min, self.beta_max, self.beta_steps)]
        return [float(p) for p in np.linspace(self.p_min, self.p_max, self.p_steps)]

    def grid_points(self) -> list[tuple[float, float]]:
        """Row order: theta outer, p (or beta) inner."""
        return [(theta, value) for theta in self.theta_grid() for value in self.inner_grid()]

    @property
    def row_class(self) -> Type['SweepRow'] | Type['DephasingSweepRow']:
        return DephasingSweepRow if self.mode == DEPHASING else SweepRow


@dataclass(frozen=True)
class SweepRow:
    theta_deg: float
    p: float
    p_pst_sim: float
    p_pst_analytic: float
    p_straight: float
    p_teleport: float
    k_star: float
    enhancement_direct: float
    enhancement_teleport: float


@dataclass(frozen=True)
class DephasingSweepRow:
    theta_deg: float
    beta1: float
    beta2: float
    p_pst_sim: float
    p_pst_analytic: float
    p_straight: float
    enhancement_direct: float


@dataclass(frozen=True)
class TransferRow:
    theta_deg: float
    phi_deg: float
    p: float
    p2: float
    p_pst_sim: float
    p_pst_analytic: float
    postselect_probability: float
    p_straight: float


@dataclass(frozen=True)
class DephasingTransferRow:
    theta_deg: float
    phi_deg: float
    beta1: float
    beta2: float
    p_pst_sim: float
    p_pst_analytic: float
    postselect_probability: float
    p_straight: float


def evaluate_transfer(
    theta_deg: float, phi_deg: float, channel: ChannelParams, alice: AliceSettings
) -> TransferRow | DephasingTransferRow:
    """One end-to-end run next to its closed form and the unprotected photon."""
    qubit = QubitSpec.from_degrees(theta_deg, phi_deg)
    outcome = run_transfer(qubit, channel, alice)
    common = {
        'theta_deg': theta_deg,
        'phi_deg': phi_deg,
        'p_pst_sim': outcome.success_probability,
        'p_pst_analytic': analytic_success(qubit, channel),
        'postselect_probability': outcome.postselect_probability,
        'p_straight': simulate_direct(qubit, channel).success_probability,
    }
    if channel.kind == ChannelKind.DEPHASING:
        return DephasingTransferRow(beta1=channel.beta1 or 0.0, beta2=channel.beta2 or 0.0, **common)
    return TransferRow(p=channel.p1, p2=channel.p_path2, **common)


def column_names(row_class: Type) -> list[str]:
    return [row_field.name for row_field in fields(row_class)]


def _alice(qubit: QubitSpec, config: SweepConfig) -> AliceSettings:
    return AliceSettings.protocol_preset(qubit, alpha=config.alpha, coupling=BBOCoupling(config.g))


def evaluate_depolarizing_point(theta_deg: float, p: float, config: SweepConfig) -> SweepRow:
    qubit = QubitSpec.from_degrees(theta_deg, config.phi_deg)
    outcome = run_transfer(
        qubit, ChannelParams(p=p), _alice(qubit, config), n_max=config.n_max, pump_n_max=config.pump_n_max
    )
    p_straight = p_straight_analytic(p)
    p_teleport = matched_teleport_success(p)

    return SweepRow(
        theta_deg=theta_deg,
        p=p,
        p_pst_sim=outcome.success_probability,
        p_pst_analytic=p_pst_analytic(theta_deg, p),
        p_straight=p_straight,
        p_teleport=p_teleport,
        k_star=matched_k(p),
        enhancement_direct=outcome.success_probability - p_straight,
        enhancement_teleport=outcome.success_probability - p_teleport,
    )


def evaluate_dephasing_point(theta_deg: float, beta: float, config: SweepConfig) -> DephasingSweepRow:
    beta2 = beta if config.beta2_mode == BETA2_SYMMETRIC else 0.0
    qubit = QubitSpec.from_degrees(theta_deg, config.phi_deg)
    outcome = run_transfer(
        qubit, ChannelParams(beta1=beta, beta2=beta2), _alice(qubit, config),
        n_max=config.n_max, pump_n_max=config.pump_n_max
    )
    p_straight = p_direct_dephasing(theta_deg, beta)

    return DephasingSweepRow(
        theta_deg=theta_deg,
        beta1=beta,
        beta2=beta2,
        p_pst_sim=outcome.success_probability,
        p_pst_analytic=p_pst_dephasing(theta_deg, beta, beta2),
        p_straight=p_straight,
        enhancement_direct=outcome.success_probability - p_straight,
    )


def evaluate_point(point: tuple[float, float], config: SweepConfig) -> SweepRow | DephasingSweepRow:
    theta_deg, value = point
    if config.mode == DEPHASING:
        return evaluate_dephasing_point(theta_deg, value, config)
    return evaluate_depolarizing_point(theta_deg, value, config)


def evaluate_chunk(points: Sequence[tuple[float, float]], config: SweepConfig) -> list:
    return [evaluate_point(point, config) for point in points]


def render_csv(rows: Iterable, row_class: Type) -> str:
    buffer = StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(column_names(row_class))
    for row in rows:
        writer.writerow([format_float(value) for value in asdict(row).values()])
    return buffer.getvalue()


def render_json(rows: Iterable, row_class: Type) -> str:
    data = {
        'columns': column_names(row_class),
        'rows': [asdict(row) for row in rows],
    }
    return json.dumps(data, indent=2, allow_nan=False) + '\n'


def render_rows(rows: Sequence, row_class: Type, output_format: str) -> str:
    if output_format == 'json':
        return render_json(rows, row_class)
    return render_csv(rows, row_class)


def write_rows(rows: Sequence, row_class: Type, output: str, output_format: str) -> str:
    """Writes UTF-8 output, creating missing parent folders."""
    content = render_rows(rows, row_class, output_format)
    try:
        directory = os.path.dirname(output)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(output, 'w', encoding='utf-8', newline='') as output_file:
            output_file.write(content)
    except OSError as output_err:
        raise OutputError(error_messages.unwritable_output(output, output_err.strerror or str(output_err))) from output_err
    return output


def run_sweep(config: SweepConfig, workers: int | None = None, concurrency_mode: str | None = None) -> list:
    """All rows in deterministic order, computed by the configured sweep runner."""
    from state_transfer.utils.concurrency_utils import get_sweep_runner

    runner_class = get_sweep_runner(concurrency_mode or CONCURRENT_SIMULATION_MODE)
    runner = runner_class(config, workers=workers)
    return runner.run()
