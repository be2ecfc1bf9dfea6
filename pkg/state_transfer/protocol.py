# Protected state transfer: Alice's adder-based encoding, transmission through
# the path channels and Bob's polarizer + BBO3 reconstruction, next to the
# closed-form success probabilities the pipeline has to reproduce.

from dataclasses import dataclass, field, replace
import logging
import math
from typing import Any, Dict

from django.conf import settings
import numpy as np

from state_transfer.channels import (
    apply_per_path, apply_qutrit_channel, ChannelKind, ChannelParams, clip_psd, JointPathDensity,
    QutritDensity, POL_H, POL_V, VAC
)
from state_transfer.fock_core import (
    bbo_apply_perturbative, BBOCoupling, polarization_rotation_to, PumpField, PureFockState,
    reduce_to_path_qutrits, rotate_polarization
)
from state_transfer.utils.error_utils import DegenerateInputError, require_in_range, ValidationError
from state_transfer.utils.message_themes import errors as error_messages, info as info_messages

BOB_RETARDER_PHASE = settings.BOB_RETARDER_PHASE
DEFAULT_ALPHA = settings.DEFAULT_ALPHA
DEFAULT_G = settings.DEFAULT_G
FOCK_N_MAX = settings.FOCK_N_MAX
QUTRIT_LEAKAGE_TOLERANCE = settings.QUTRIT_LEAKAGE_TOLERANCE

PRESET_TOLERANCE = 1e-12
DEGENERATE_NORM = 1e-24

logger = logging.getLogger('state_transfer')


@dataclass(frozen=True)
class QubitSpec:
    """a1 = exp(i phi_q) cos(theta), a2 = sin(theta) (real, >= 0)."""
    theta_deg: float
    phi_q: float = 0.0      # rad

    def __post_init__(self):
        if not (0.0 <= self.theta_deg <= 90.0) or not (0.0 <= self.phi_q < 2 * math.pi):
            raise ValidationError(error_messages.invalid_qubit(self.theta_deg, self.phi_q))

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float = 0.0) -> 'QubitSpec':
        phi_q = math.radians(phi_deg % 360.0)
        # Tiny negative phases round up to a full turn
        return cls(theta_deg=theta_deg, phi_q=0.0 if phi_q >= 2 * math.pi else phi_q)

    @property
    def theta(self) -> float:
        return math.radians(self.theta_deg)

    @property
    def a1(self) -> complex:
        return complex(np.exp(1j * self.phi_q) * math.cos(self.theta))

    @property
    def a2(self) -> float:
        return math.sin(self.theta)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a1, self.a2], dtype=complex)


@dataclass(frozen=True)
class AliceSettings:
    """
    Pump half-wave plate (b1, b2), attenuator A and retarder phase between the
    two crystals, plus the initial pump amplitude and the crystal coupling.
    """
    b1: float = 1.0
    b2: float = 0.0
    A: float = 0.0
    phi_ret: float = math.pi
    alpha: complex = DEFAULT_ALPHA
    coupling: BBOCoupling = field(default_factory=lambda: BBOCoupling(DEFAULT_G))

    def __post_init__(self):
        if abs(self.b1 ** 2 + self.b2 ** 2 - 1) > PRESET_TOLERANCE:
            raise ValidationError(error_messages.invalid_alice_settings(f'b1^2 + b2^2 = {self.b1 ** 2 + self.b2 ** 2}'))
        if not (0.0 <= self.A <= 1.0):
            raise ValidationError(error_messages.invalid_alice_settings(f'A = {self.A} outside [0, 1]'))

    @classmethod
    def protocol_preset(cls, qubit: QubitSpec, alpha: complex = DEFAULT_ALPHA, coupling: BBOCoupling | None = None):
        """b1 = 1, A = a2, phi = pi"""
        return cls(b1=1.0, b2=0.0, A=qubit.a2, phi_ret=math.pi, alpha=alpha, coupling=coupling or BBOCoupling(DEFAULT_G))

    @classmethod
    def alternative_preset(cls, qubit: QubitSpec, alpha: complex = DEFAULT_ALPHA, coupling: BBOCoupling | None = None):
        """b1 = a2, A = 1, phi = pi - the wave plate does the attenuation."""
        return cls(
            b1=qubit.a2, b2=math.cos(qubit.theta), A=1.0, phi_ret=math.pi, alpha=alpha,
            coupling=coupling or BBOCoupling(DEFAULT_G)
        )

    @property
    def f(self) -> complex:
        return complex(np.exp(1j * self.phi_ret) * self.A * self.b1)

    def cancels_pair_term(self, qubit: QubitSpec) -> bool:
        return abs(self.f + qubit.a2) <= PRESET_TOLERANCE

    def pump_after_plates(self) -> PumpField:
        """Pump reaching BBO2 - only the horizontal component couples to the crystal."""
        retarder = np.exp(1j * self.phi_ret)
        return PumpField(
            amp_H=complex(retarder * self.A * self.b1 * self.alpha),
            amp_V=complex(retarder * self.A * self.b2 * self.alpha),
        )


@dataclass(frozen=True)
class AdderSpec:
    """R (|psi_A> + f |C>) with the fixed state C = |V>."""
    f: complex
    fixed_state: np.ndarray = field(default_factory=lambda: np.array([0, 1], dtype=complex))

    def unnormalized(self, qubit: QubitSpec) -> np.ndarray:
        return qubit.vector + self.f * self.fixed_state

    def R(self, qubit: QubitSpec) -> float:
        squared_norm = float(np.sum(np.abs(self.unnormalized(qubit)) ** 2))
        if squared_norm <= DEGENERATE_NORM:
            raise DegenerateInputError(error_messages.degenerate_adder_output(qubit.a1, qubit.a2 + self.f))
        return squared_norm ** -0.5


@dataclass(frozen=True)
class AdderOutput:
    qubit: np.ndarray
    pair_probability: float


@dataclass(frozen=True, eq=False)
class TransferOutcome:
    output_qubit_density: np.ndarray
    success_probability: float
    postselect_probability: float
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def adder_output(qubit: QubitSpec, alice: AliceSettings) -> AdderOutput:
    adder = AdderSpec(f=alice.f)
    R = adder.R(qubit)
    g_alpha_squared = abs(alice.coupling.g * alice.alpha) ** 2
    return AdderOutput(
        qubit=R * adder.unnormalized(qubit),
        pair_probability=g_alpha_squared / R ** 2,
    )


def encode(
    qubit: QubitSpec, alice: AliceSettings, n_max: int = FOCK_N_MAX, pump_n_max: int | None = None
) -> PureFockState:
    """
    BBO1 on vacuum, path-1 photon rotated V -> psi_A, pump through the plates,
    then BBO2 on top - any settings.
    """
    coupling = alice.coupling
    state = PureFockState.vacuum(pump=PumpField(amp_H=complex(alice.alpha), pump_n_max=pump_n_max), n_max=n_max)
    state = bbo_apply_perturbative(state, coupling, state.pump.amp_H)
    state = rotate_polarization(state, 1, polarization_rotation_to(qubit.a1, qubit.a2))
    after_plates = alice.pump_after_plates()
    state = replace(state, pump=state.pump.transformed(after_plates.amp_H, after_plates.amp_V))
    state = bbo_apply_perturbative(state, coupling, state.pump.amp_H)

    if state.truncation_loss:
        logger.debug(info_messages.truncation_loss(state.truncation_loss))

    return state


def prepare_S1(
    qubit: QubitSpec, alice: AliceSettings | None = None, n_max: int = FOCK_N_MAX, pump_n_max: int | None = None
) -> PureFockState:
    """Encoding state with the V1 V2 pair term cancelled by the pump preset."""
    alice = alice or AliceSettings.protocol_preset(qubit)
    if not alice.cancels_pair_term(qubit):
        raise ValidationError(error_messages.PROTOCOL_PRESET_REQUIRED)
    return encode(qubit, alice, n_max=n_max, pump_n_max=pump_n_max)


def alpha2_regulation(qubit: QubitSpec, target_alpha2: complex, coupling: BBOCoupling | None = None) -> complex:
    """Initial pump giving `target_alpha2` after BBO2 at the preset (alpha2 = -a2 alpha)."""
    if qubit.a2 == 0:
        raise DegenerateInputError(error_messages.zero_a2_regulation(qubit.theta_deg))
    alpha = complex(-target_alpha2 / qubit.a2)
    if coupling is not None:
        PumpField(amp_H=alpha).validate_regime(coupling)
    return alpha


def transmit(
    state: PureFockState, channel: ChannelParams, leading_order: bool = True,
    leakage_tolerance: float = QUTRIT_LEAKAGE_TOLERANCE
) -> JointPathDensity:
    joint = reduce_to_path_qutrits(state, leading_order=leading_order, leakage_tolerance=leakage_tolerance)
    if joint.leakage:
        logger.debug(info_messages.qutrit_leakage_discarded(joint.leakage))
    ch1, ch2 = channel.channel_specs()
    return apply_per_path(joint, ch1, ch2)


def bob_pump(channel: ChannelParams, alpha2: complex) -> complex:
    """alpha3 = exp(i pi) sqrt(estimated pair intensity loss) alpha2"""
    return complex(np.exp(1j * BOB_RETARDER_PHASE) * math.sqrt(channel.pair_intensity_factor()) * alpha2)


# Polarizers: path 1 passes {|0>, |H>}, path 2 passes {|0>, |V>}
_POLARIZER_1 = np.diag([1, 1, 0]).astype(complex)
_POLARIZER_2 = np.diag([1, 0, 1]).astype(complex)
POLARIZERS = np.kron(_POLARIZER_1, _POLARIZER_2)

# |V1 V2><0 0| - pair creation restricted to the qutrits
PAIR_CREATION = np.zeros((9, 9), dtype=complex)
PAIR_CREATION[JointPathDensity.index(POL_V, POL_V), JointPathDensity.index(VAC, VAC)] = 1.0

# Heralding pattern: one photon per path, path 2 vertical -> path-1 (H, V)
HERALDED_ROWS = [JointPathDensity.index(POL_H, POL_V), JointPathDensity.index(POL_V, POL_V)]


def bob_reconstruct(
    joint: JointPathDensity, channel: ChannelParams, coupling: BBOCoupling, alpha2: complex, qubit: QubitSpec
) -> TransferOutcome:
    alpha3 = bob_pump(channel, alpha2)
    crystal = np.eye(9, dtype=complex) + 1j * coupling.g * alpha3 * PAIR_CREATION
    operator = (crystal @ POLARIZERS)[HERALDED_ROWS, :]

    heralded = operator @ np.asarray(joint.matrix, dtype=complex) @ operator.conj().T
    postselect_probability = float(np.trace(heralded).real)
    if postselect_probability <= 0.0:
        raise DegenerateInputError(error_messages.ZERO_POSTSELECTION)

    output_density = clip_psd(heralded / postselect_probability)
    psi = qubit.vector
    success_probability = float(np.real(psi.conj() @ output_density @ psi))

    return TransferOutcome(
        output_qubit_density=output_density,
        success_probability=success_probability,
        postselect_probability=postselect_probability,
        diagnostics={'qutrit_leakage': joint.leakage, 'alpha3': alpha3},
    )


def run_transfer(
    qubit: QubitSpec, channel: ChannelParams, alice: AliceSettings | None = None, leading_order: bool = True,
    n_max: int = FOCK_N_MAX, pump_n_max: int | None = None
) -> TransferOutcome:
    """prepare_S1 -> transmit -> bob_reconstruct"""
    alice = alice or AliceSettings.protocol_preset(qubit)
    state = prepare_S1(qubit, alice, n_max=n_max, pump_n_max=pump_n_max)
    joint = transmit(state, channel, leading_order=leading_order)
    outcome = bob_reconstruct(joint, channel, alice.coupling, state.pump.amp_H, qubit)
    outcome.diagnostics['truncation_loss'] = state.truncation_loss
    return outcome


# === Closed forms ===

def p_pst_analytic(theta_deg: float, p: float) -> float:
    require_in_range('theta', theta_deg, 0.0, 90.0)
    require_in_range('p', p, 0.0, 1.0)
    ratio = (p / 2) / (1 - p / 2)
    return 1 - 0.25 * ratio * (1 - math.cos(4 * math.radians(theta_deg)))


def p_straight_analytic(p: float) -> float:
    require_in_range('p', p, 0.0, 1.0)
    return 1 - p / 2


def p_pst_dephasing(theta_deg: float, beta1: float, beta2: float) -> float:
    require_in_range('theta', theta_deg, 0.0, 90.0)
    require_in_range('beta1', beta1, 0.0, 1.0)
    require_in_range('beta2', beta2, 0.0, 1.0)
    sin_squared = math.sin(2 * math.radians(theta_deg)) ** 2
    return 1 - 0.5 * sin_squared * (1 - math.sqrt(1 - beta1) * math.sqrt(1 - beta2))


def p_direct_dephasing(theta_deg: float, beta: float) -> float:
    require_in_range('theta', theta_deg, 0.0, 90.0)
    require_in_range('beta', beta, 0.0, 1.0)
    return 1 - 0.5 * math.sin(2 * math.radians(theta_deg)) ** 2 * beta


def simulate_direct(qubit: QubitSpec, channel: ChannelParams) -> TransferOutcome:
    """The bare qubit as a single photon in path 1 through the path-1 channel."""
    rho = QutritDensity.from_vector([0, qubit.a1, qubit.a2])
    ch1, _ = channel.channel_specs()
    output = apply_qutrit_channel(rho, ch1).polarization_block()
    psi = qubit.vector
    return TransferOutcome(
        output_qubit_density=output,
        success_probability=float(np.real(psi.conj() @ output @ psi)),
        postselect_probability=1.0,
    )


def analytic_success(qubit: QubitSpec, channel: ChannelParams) -> float:
    if channel.kind == ChannelKind.DEPHASING:
        return p_pst_dephasing(qubit.theta_deg, channel.beta1 or 0.0, channel.beta2 or 0.0)
    return p_pst_analytic(qubit.theta_deg, channel.p1)
