# Cross-engine checks behind the `validate` command

from dataclasses import asdict, dataclass, field
import json
import logging
from typing import Callable

from django.conf import settings
import numpy as np

from state_transfer.channels import ChannelParams, ChannelSpec, check_cptp
from state_transfer.distill_compare import (
    initial_fidelity, match_resources, pst_resource_ratio, yield_closed, yield_product
)
from state_transfer.fock_core import (
    bbo_apply_perturbative, BBOCoupling, exact_evolve_oracle, PumpField, PureFockState
)
from state_transfer.protocol import (
    AliceSettings, p_pst_analytic, p_pst_dephasing, QubitSpec, run_transfer
)
from state_transfer.utils.error_utils import StateTransferError
from state_transfer.utils.message_themes import success as success_messages

CP_TOLERANCE = settings.CP_TOLERANCE
MATCHING_YIELD_TOLERANCE = settings.MATCHING_YIELD_TOLERANCE

PIPELINE_TOLERANCE = 1e-9
ORACLE_TOLERANCE_FACTOR = 20
THETA_GRID = [float(theta) for theta in np.linspace(0.0, 90.0, 19)]
P_GRID = [float(p) for p in np.linspace(0.0, 1.0, 21)]
BETA_GRID = [float(beta) for beta in np.linspace(0.0, 1.0, 11)]
CHANNEL_GRID = [float(value) for value in np.linspace(0.0, 1.0, 11)]
YIELD_K_GRID = range(13)

logger = logging.getLogger('state_transfer')


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_deviation: float | None = None
    tolerance: float | None = None
    message: str = ''


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_json(self) -> str:
        data = {
            'passed': self.passed,
            'failures': self.failures,
            'checks': [asdict(check) for check in self.checks],
            'details': self.details,
        }
        return json.dumps(data, indent=2) + '\n'


def _run_check(name: str, tolerance: float, compute_deviation: Callable[[], float]) -> CheckResult:
    """Any domain error inside a check marks it failed with the error text."""
    try:
        max_deviation = float(compute_deviation())
    except StateTransferError as check_err:
        return CheckResult(name, False, tolerance=tolerance, message=f'{check_err.__class__.__name__}: {check_err}')

    passed = max_deviation <= tolerance
    message = success_messages.check_passed(name, max_deviation, tolerance) if passed else ''
    if passed:
        logger.info(message)
    return CheckResult(name, passed, max_deviation, tolerance, message)


def single_crystal_state(g: float, alpha: float, n_max: int, pump_n_max: int) -> tuple[PureFockState, PureFockState]:
    """(initial vacuum with its pump, perturbative state after one crystal)"""
    initial = PureFockState.vacuum(pump=PumpField(amp_H=complex(alpha), pump_n_max=pump_n_max), n_max=n_max)
    return initial, bbo_apply_perturbative(initial, BBOCoupling(g), initial.pump.amp_H)


def oracle_deviation(g: float, alpha: float, n_max: int, pump_n_max: int) -> float:
    """One crystal on vacuum: perturbative amplitudes against the pump-Fock matrix exponential."""
    coupling = BBOCoupling(g)
    initial, perturbative = single_crystal_state(g, alpha, n_max, pump_n_max)
    oracle = exact_evolve_oracle(initial, coupling, pump_n_max).path_state()

    basis = set(perturbative.amplitudes) | set(oracle.amplitudes)
    return max(abs(perturbative.amplitude(occ) - oracle.amplitude(occ)) for occ in basis)


def channel_deviation() -> float:
    deviation = 0.0
    for value in CHANNEL_GRID:
        for channel in (ChannelSpec.depolarizing(value), ChannelSpec.dephasing(value)):
            min_eigenvalue, trace_deviation = check_cptp(channel)
            deviation = max(deviation, -min_eigenvalue, trace_deviation)
    return deviation


def _alice(qubit: QubitSpec, g: float, alpha: float) -> AliceSettings:
    return AliceSettings.protocol_preset(qubit, alpha=alpha, coupling=BBOCoupling(g))


def depolarizing_pipeline_deviation(g: float, alpha: float, n_max: int) -> float:
    deviation = 0.0
    for theta in THETA_GRID:
        qubit = QubitSpec.from_degrees(theta)
        alice = _alice(qubit, g, alpha)
        for p in P_GRID:
            outcome = run_transfer(qubit, ChannelParams(p=p), alice, n_max=n_max)
            deviation = max(deviation, abs(outcome.success_probability - p_pst_analytic(theta, p)))
    return deviation


def dephasing_pipeline_deviation(g: float, alpha: float, n_max: int, symmetric: bool) -> float:
    deviation = 0.0
    for theta in THETA_GRID:
        qubit = QubitSpec.from_degrees(theta)
        alice = _alice(qubit, g, alpha)
        for beta in BETA_GRID:
            beta2 = beta if symmetric else 0.0
            outcome = run_transfer(qubit, ChannelParams(beta1=beta, beta2=beta2), alice, n_max=n_max)
            deviation = max(deviation, abs(outcome.success_probability - p_pst_dephasing(theta, beta, beta2)))
    return deviation


def yield_deviation() -> float:
    """Product and closed-form yields differ at second order in sqrt(1 - F0); scaled by that bound."""
    deviation = 0.0
    for p in CHANNEL_GRID:
        F0 = initial_fidelity(p)
        bound = 2 * (1 - F0)
        for k in YIELD_K_GRID:
            difference = abs(yield_product(k, F0) - yield_closed(k, F0))
            if bound == 0:
                deviation = max(deviation, difference)
            else:
                deviation = max(deviation, difference / bound)
    return deviation


def matched_yield_deviation() -> float:
    return max(
        abs(yield_closed(match_resources(p), initial_fidelity(p)) - pst_resource_ratio(p)) for p in CHANNEL_GRID
    )


def run_validation(
    g: float, alpha: float, n_max: int, pump_n_max: int, tolerance: float | None = None
) -> ValidationReport:
    oracle_tolerance = ORACLE_TOLERANCE_FACTOR * abs(g * alpha) ** 3 if tolerance is None else tolerance

    report = ValidationReport()
    report.checks.append(
        _run_check('oracle', oracle_tolerance, lambda: oracle_deviation(g, alpha, n_max, pump_n_max))
    )
    report.checks.append(_run_check('channels_cptp', CP_TOLERANCE, channel_deviation))
    report.checks.append(
        _run_check('pipeline_depolarizing', PIPELINE_TOLERANCE, lambda: depolarizing_pipeline_deviation(g, alpha, n_max))
    )
    report.checks.append(_run_check(
        'pipeline_dephasing_symmetric', PIPELINE_TOLERANCE,
        lambda: dephasing_pipeline_deviation(g, alpha, n_max, symmetric=True)
    ))
    report.checks.append(_run_check(
        'pipeline_dephasing_beta2_zero', PIPELINE_TOLERANCE,
        lambda: dephasing_pipeline_deviation(g, alpha, n_max, symmetric=False)
    ))
    # Relative to 2 (1 - F0), so the bound itself is 1
    report.checks.append(_run_check('yield_product', 1.0, yield_deviation))
    report.checks.append(_run_check('matched_yield', MATCHING_YIELD_TOLERANCE, matched_yield_deviation))

    try:
        _, state = single_crystal_state(g, alpha, n_max, pump_n_max)
        report.details['perturbative_state'] = json.loads(state.to_json())
        report.details['perturbative_state_digest'] = state.digest()
    except StateTransferError:
        pass

    return report
