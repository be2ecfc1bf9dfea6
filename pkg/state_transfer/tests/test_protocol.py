from inspect import currentframe
import math

import numpy as np

from state_transfer.channels import ChannelParams, JointPathDensity
from state_transfer.fock_core import BBOCoupling, OccupationVector, reduce_to_path_qutrits
from state_transfer.protocol import (
    adder_output, AliceSettings, alpha2_regulation, bob_pump, p_direct_dephasing, p_pst_analytic, p_pst_dephasing,
    p_straight_analytic, prepare_S1, QubitSpec, run_transfer, simulate_direct, transmit
)
from state_transfer.tests.test_utils import ANCHOR_THETA_DEG, BaseTestcase, PIPELINE_TOLERANCE
from state_transfer.utils.error_utils import DegenerateInputError, ValidationError

G = 1e-3
PAIR_H1_V2 = OccupationVector((1, 0, 0, 1))
PAIR_V1_V2 = OccupationVector((0, 1, 0, 1))
VACUUM_INDEX = JointPathDensity.index(0, 0)
PAIR_INDEX = JointPathDensity.index(1, 2)
THETA_GRID = [float(theta) for theta in np.linspace(0.0, 90.0, 19)]
P_GRID = [float(p) for p in np.linspace(0.0, 1.0, 21)]
BETA_GRID = [float(beta) for beta in np.linspace(0.0, 1.0, 11)]


def preset(theta_deg: float, g: float = G, alpha: float = 1.0) -> tuple[QubitSpec, AliceSettings]:
    qubit = QubitSpec.from_degrees(theta_deg)
    return qubit, AliceSettings.protocol_preset(qubit, alpha=alpha, coupling=BBOCoupling(g))


class AdderTest(BaseTestcase):
    description = 'Quantum adder output for general pump settings'

    def test_no_pump_interference(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit = QubitSpec.from_degrees(30.0, 40.0)
        output = adder_output(qubit, AliceSettings(b1=1.0, A=0.0, coupling=BBOCoupling(G)))
        passed = np.allclose(output.qubit, qubit.vector, atol=1e-15) and abs(output.pair_probability - G ** 2) < 1e-20
        self.check_and_log(passed, 'A=0', (qubit.vector, G ** 2), (output.qubit, output.pair_probability), test_case_source)

    def test_protocol_preset_gives_horizontal(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        for theta in (0.0, 30.0, 45.0, 80.0):
            with self.subTest(theta=theta):
                qubit, alice = preset(theta)
                output = adder_output(qubit, alice)
                self.check_and_log(
                    np.allclose(output.qubit, [1.0, 0.0], atol=1e-12), f'theta={theta}', '|H>', output.qubit,
                    test_case_source
                )

    def test_constructive_settings(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit = QubitSpec.from_degrees(0.0)
        output = adder_output(qubit, AliceSettings(b1=1.0, A=1.0, phi_ret=0.0, coupling=BBOCoupling(G)))
        expected = np.array([1.0, 1.0]) / math.sqrt(2)
        passed = np.allclose(output.qubit, expected, atol=1e-15) and abs(output.pair_probability - 2 * G ** 2) < 1e-20
        self.check_and_log(
            passed, 'theta=0, b1=1, A=1, phi=0', (expected, 2 * G ** 2), (output.qubit, output.pair_probability),
            test_case_source
        )

    def test_degenerate_output(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit = QubitSpec.from_degrees(90.0)
        self.check_raises(
            DegenerateInputError, adder_output, 'theta=90, preset', test_case_source,
            qubit, AliceSettings.protocol_preset(qubit)
        )

    def test_invalid_settings(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        self.check_raises(ValidationError, AliceSettings, 'b1=0.5, b2=0', test_case_source, b1=0.5, b2=0.0)
        self.check_raises(ValidationError, AliceSettings, 'A=1.5', test_case_source, A=1.5)
        self.check_raises(ValidationError, QubitSpec, 'theta=95', test_case_source, 95.0)


class EncodingTest(BaseTestcase):
    description = 'Encoding state and pump regulation'

    def test_s1_amplitudes(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        cases = [
            (90.0, 0.0, -1.0),
            (0.0, G, 0.0),
            (45.0, G / math.sqrt(2), -1 / math.sqrt(2)),
        ]
        for theta, pair_amplitude, pump_amplitude in cases:
            with self.subTest(theta=theta):
                qubit, alice = preset(theta)
                state = prepare_S1(qubit, alice)
                amplitudes = state.leading_amplitudes()
                actual_pair = amplitudes.get(PAIR_H1_V2, 0j)
                self.check_close(actual_pair.imag, pair_amplitude, 1e-15, f'theta={theta}', test_case_source)
                self.check_close(abs(actual_pair.real), 0.0, 1e-15, f'theta={theta}', test_case_source)
                self.check_close(abs(amplitudes.get(PAIR_V1_V2, 0j)), 0.0, 1e-15, f'theta={theta}', test_case_source)
                self.check_close(state.pump.amp_H.real, pump_amplitude, 1e-15, f'theta={theta}', test_case_source)

    def test_phase_in_degrees_wraps(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        for phi_deg in (-1e-14, -90.0, 370.0, 720.0, 359.999999):
            with self.subTest(phi_deg=phi_deg):
                qubit = QubitSpec.from_degrees(30.0, phi_deg)
                expected_a1 = complex(np.exp(1j * math.radians(phi_deg)) * math.cos(math.radians(30.0)))
                passed = 0.0 <= qubit.phi_q < 2 * math.pi and abs(qubit.a1 - expected_a1) <= 1e-12
                self.check_and_log(passed, f'phi={phi_deg} deg', expected_a1, qubit.a1, test_case_source)

    def test_alternative_preset_same_state(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit = QubitSpec.from_degrees(30.0, 60.0)
        state = prepare_S1(qubit, AliceSettings.protocol_preset(qubit))
        alternative = prepare_S1(qubit, AliceSettings.alternative_preset(qubit))
        deviation = max(abs(state.amplitude(occ) - alternative.amplitude(occ)) for occ in state.basis + alternative.basis)
        self.check_close(deviation, 0.0, 1e-15, 'theta=30, phi=60', test_case_source)

    def test_non_cancelling_settings(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit = QubitSpec.from_degrees(45.0)
        self.check_raises(
            ValidationError, prepare_S1, 'A=1, phi=0', test_case_source,
            qubit, AliceSettings(b1=1.0, A=1.0, phi_ret=0.0)
        )

    def test_alpha2_regulation(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        cases = [
            (30.0, -0.5, 1.0),
            (60.0, 0.0, 0.0),
            (90.0, 0.3, -0.3),
        ]
        for theta, target, expected in cases:
            with self.subTest(theta=theta, target=target):
                alpha = alpha2_regulation(QubitSpec.from_degrees(theta), target)
                self.check_close(alpha.real, expected, 1e-12, (theta, target), test_case_source)

    def test_alpha2_regulation_undefined(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore
        self.check_raises(
            DegenerateInputError, alpha2_regulation, 'theta=0', test_case_source, QubitSpec.from_degrees(0.0), -0.5
        )


class TransmissionTest(BaseTestcase):
    description = 'Encoding state through the path channels'

    def test_noiseless(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit, alice = preset(30.0)
        state = prepare_S1(qubit, alice)
        joint = transmit(state, ChannelParams(p=0.0))
        pure = reduce_to_path_qutrits(state, leading_order=True)
        self.check_and_log(
            np.allclose(joint.matrix, pure.matrix, atol=1e-15), 'p=0', 'pure density', joint.matrix.diagonal(),
            test_case_source
        )

    def test_full_dephasing(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit, alice = preset(45.0)
        state = prepare_S1(qubit, alice)
        joint = transmit(state, ChannelParams(beta1=1.0, beta2=1.0))
        pure = reduce_to_path_qutrits(state, leading_order=True)
        passed = (
            abs(joint.matrix[VACUUM_INDEX, PAIR_INDEX]) <= 1e-15 and
            np.allclose(joint.matrix.diagonal(), pure.matrix.diagonal(), atol=1e-15)
        )
        self.check_and_log(passed, 'beta1=beta2=1', 'no coherence, populations intact', joint.matrix[0], test_case_source)

    def test_depolarizing_scaling(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit, alice = preset(45.0)
        state = prepare_S1(qubit, alice)
        joint = transmit(state, ChannelParams(p=0.5))
        pure = reduce_to_path_qutrits(state, leading_order=True)
        population_ratio = joint.matrix[PAIR_INDEX, PAIR_INDEX].real / pure.matrix[PAIR_INDEX, PAIR_INDEX].real
        coherence_ratio = abs(joint.matrix[VACUUM_INDEX, PAIR_INDEX]) / abs(pure.matrix[VACUUM_INDEX, PAIR_INDEX])
        self.check_close(population_ratio, 0.5625, 1e-12, 'theta=45, p=0.5 population', test_case_source)
        self.check_close(coherence_ratio, 0.5, 1e-12, 'theta=45, p=0.5 coherence', test_case_source)

    def test_bob_pump(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        alpha3 = bob_pump(ChannelParams(p=0.5), -0.5)
        self.check_close(abs(alpha3 - 0.375), 0.0, 1e-15, 'p=0.5, alpha2=-0.5', test_case_source)


class TransferTest(BaseTestcase):
    description = 'End-to-end transfer against the closed forms'

    def test_anchor_points(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        cases = [
            (ANCHOR_THETA_DEG, 0.0, 1.0),
            (30.0, 0.0, 1.0),
            (ANCHOR_THETA_DEG, 1.0, 0.5),
            (ANCHOR_THETA_DEG, 0.5, 5 / 6),
            (0.0, 0.7, 1.0),
        ]
        for theta, p, expected in cases:
            with self.subTest(theta=theta, p=p):
                qubit, alice = preset(theta)
                outcome = run_transfer(qubit, ChannelParams(p=p), alice)
                self.check_close(outcome.success_probability, expected, PIPELINE_TOLERANCE, (theta, p), test_case_source)

    def test_depolarizing_grid(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        for g in (1e-4, 1e-3, 1e-2):
            deviation = 0.0
            for theta in THETA_GRID:
                qubit, alice = preset(theta, g=g)
                for p in P_GRID:
                    outcome = run_transfer(qubit, ChannelParams(p=p), alice)
                    deviation = max(deviation, abs(outcome.success_probability - p_pst_analytic(theta, p)))
            with self.subTest(g=g):
                self.check_close(deviation, 0.0, PIPELINE_TOLERANCE, f'19x21 grid, g alpha={g}', test_case_source)

    def test_dephasing_grid(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        for symmetric in (True, False):
            deviation = 0.0
            for theta in THETA_GRID:
                qubit, alice = preset(theta)
                for beta in BETA_GRID:
                    beta2 = beta if symmetric else 0.0
                    outcome = run_transfer(qubit, ChannelParams(beta1=beta, beta2=beta2), alice)
                    deviation = max(deviation, abs(outcome.success_probability - p_pst_dephasing(theta, beta, beta2)))
            with self.subTest(symmetric=symmetric):
                self.check_close(deviation, 0.0, PIPELINE_TOLERANCE, f'symmetric={symmetric}', test_case_source)

    def test_output_density_is_physical(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        qubit = QubitSpec.from_degrees(30.0, 120.0)
        outcome = run_transfer(qubit, ChannelParams(p=0.4), AliceSettings.protocol_preset(qubit))
        density = outcome.output_qubit_density
        passed = (
            abs(np.trace(density).real - 1.0) < 1e-12 and
            float(np.min(np.linalg.eigvalsh(density))) >= -1e-12 and
            0.0 < outcome.postselect_probability
        )
        self.check_and_log(passed, 'theta=30, phi=120, p=0.4', 'unit-trace PSD output', density, test_case_source)

    def test_phase_independence(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        for phi in (0.0, 90.0, 200.0):
            with self.subTest(phi=phi):
                qubit = QubitSpec.from_degrees(60.0, phi)
                outcome = run_transfer(qubit, ChannelParams(p=0.3), AliceSettings.protocol_preset(qubit))
                self.check_close(
                    outcome.success_probability, p_pst_analytic(60.0, 0.3), PIPELINE_TOLERANCE, f'phi={phi}',
                    test_case_source
                )

    def test_postselection_scales_with_pair_rate(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        for theta, p in ((ANCHOR_THETA_DEG, 0.3), (30.0, 0.8)):
            ratios = []
            for g in (1e-4, 1e-3):
                qubit, alice = preset(theta, g=g)
                outcome = run_transfer(qubit, ChannelParams(p=p), alice)
                ratios.append(outcome.postselect_probability / g ** 2)
            with self.subTest(theta=theta, p=p):
                passed = ratios[0] > 0 and abs(ratios[1] / ratios[0] - 1) <= 0.01
                self.check_and_log(passed, f'theta={theta}, p={p}', 'P_ps / (g alpha)^2 stable within 1%', ratios, test_case_source)


class ClosedFormTest(BaseTestcase):
    description = 'Closed-form success probabilities'

    def test_advantage_over_direct_zero_set(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        zeros, negatives = [], []
        for theta in THETA_GRID:
            for p in P_GRID:
                gain = p_pst_analytic(theta, p) - p_straight_analytic(p)
                if gain < -1e-15:
                    negatives.append((theta, p))
                elif gain <= 1e-12:
                    zeros.append((theta, p))
        expected_zeros = sorted([(theta, 0.0) for theta in THETA_GRID] + [(ANCHOR_THETA_DEG, 1.0)])
        passed = not negatives and sorted(zeros) == expected_zeros
        self.check_and_log(passed, '19x21 grid', 'zero only at p=0 and (45 deg, p=1)', (zeros, negatives), test_case_source)

    def test_p_pst_analytic(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        cases = [((0.0, 0.3), 1.0), ((0.0, 1.0), 1.0), ((45.0, 1.0), 0.5), ((45.0, 0.5), 5 / 6)]
        for args, expected in cases:
            with self.subTest(args=args):
                self.check_close(p_pst_analytic(*args), expected, 1e-15, args, test_case_source)

    def test_p_straight_analytic(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        for p, expected in ((0.0, 1.0), (1.0, 0.5), (0.4, 0.8)):
            with self.subTest(p=p):
                self.check_close(p_straight_analytic(p), expected, 1e-15, p, test_case_source)

    def test_dephasing_forms(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        cases = [
            (p_pst_dephasing, (30.0, 0.0, 0.0), 1.0),
            (p_pst_dephasing, (45.0, 1.0, 1.0), 0.5),
            (p_pst_dephasing, (45.0, 0.19, 0.0), 0.95),
            (p_direct_dephasing, (30.0, 0.0), 1.0),
            (p_direct_dephasing, (0.0, 0.7), 1.0),
            (p_direct_dephasing, (45.0, 0.5), 0.75),
        ]
        for function, args, expected in cases:
            with self.subTest(function=function.__name__, args=args):
                self.check_close(function(*args), expected, 1e-15, (function.__name__, args), test_case_source)

    def test_symmetric_dephasing_equals_direct(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        deviation = max(
            abs(p_pst_dephasing(theta, beta, beta) - p_direct_dephasing(theta, beta))
            for theta in THETA_GRID for beta in BETA_GRID
        )
        self.check_close(deviation, 0.0, 1e-15, 'beta1 = beta2 grid', test_case_source)

    def test_out_of_domain(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        self.check_raises(ValidationError, p_pst_analytic, 'theta=91', test_case_source, 91.0, 0.5)
        self.check_raises(ValidationError, p_straight_analytic, 'p=-0.1', test_case_source, -0.1)

    def test_simulate_direct(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        cases = [
            (QubitSpec.from_degrees(30.0), ChannelParams(p=0.0), 1.0),
            (QubitSpec.from_degrees(10.0), ChannelParams(p=0.6), 0.7),
            (QubitSpec.from_degrees(70.0, 45.0), ChannelParams(p=0.6), 0.7),
            (QubitSpec.from_degrees(45.0), ChannelParams(beta1=0.5, beta2=0.5), 0.75),
        ]
        for qubit, channel, expected in cases:
            with self.subTest(qubit=qubit, channel=channel):
                outcome = simulate_direct(qubit, channel)
                self.check_close(outcome.success_probability, expected, 1e-12, (qubit, channel), test_case_source)
