from inspect import currentframe

import numpy as np

from state_transfer.distill_compare import (
    advantage, advantage_threshold, ComparisonPoint, DistillationModel, find_p_star, fidelity_after_k,
    initial_fidelity, match_resources, matched_teleport_success, pst_resource_ratio, teleport_success, theta_window,
    yield_closed, yield_product
)
from state_transfer.protocol import p_pst_analytic
from state_transfer.tests.test_utils import (
    BaseTestcase, K_STAR_AT_069, K_STAR_AT_1, P_STAR_RANGE, TELEPORT_AT_069, WINDOW_AT_P1
)
from state_transfer.utils.error_utils import MatchingError, ValidationError


class RecurrenceTest(BaseTestcase):
    description = 'Werner-pair recurrence bookkeeping'

    def test_fidelities(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        self.check_close(initial_fidelity(0.69), 0.4825, 1e-15, 'p=0.69', test_case_source)
        self.check_close(initial_fidelity(0.0), 1.0, 0.0, 'p=0', test_case_source)
        self.check_close(fidelity_after_k(0.4825, 1), 0.655, 1e-15, 'F0=0.4825, k=1', test_case_source)
        self.check_close(fidelity_after_k(0.6, 0), 0.6, 1e-15, 'F0=0.6, k=0', test_case_source)

    def test_yields(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        cases = [
            (yield_closed, (1, 0.96), 0.43333333333333335),
            (yield_product, (1, 0.96), 0.43333333333333335),
            (yield_closed, (0, 0.4), 1.0),
            (yield_closed, (12, 0.25), 0.0),
        ]
        for function, args, expected in cases:
            with self.subTest(function=function.__name__, args=args):
                self.check_close(function(*args), expected, 1e-12, (function.__name__, args), test_case_source)

    def test_product_within_closed_form_bound(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        worst = 0.0
        for index in range(11):
            F0 = initial_fidelity(index / 10)
            for k in range(13):
                worst = max(worst, abs(yield_product(k, F0) - yield_closed(k, F0)) - 2 * (1 - F0))
        self.check_and_log(worst <= 1e-12, 'k=0..12, p grid', '|product - closed| <= 2 (1 - F0)', worst, test_case_source)

    def test_invalid_inputs(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        self.check_raises(ValidationError, yield_product, 'k=1.5', test_case_source, 1.5, 0.9)
        self.check_raises(ValidationError, yield_closed, 'F0=0.2', test_case_source, 1, 0.2)
        self.check_raises(ValidationError, fidelity_after_k, 'k=-1', test_case_source, 0.5, -1)
        self.check_raises(ValidationError, initial_fidelity, 'p=1.2', test_case_source, 1.2)

    def test_teleport_success(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        self.check_close(teleport_success(1.0), 1.0, 1e-15, 'F=1', test_case_source)
        self.check_close(teleport_success(0.25), 0.5, 1e-15, 'F=0.25', test_case_source)


class ResourceMatchingTest(BaseTestcase):
    description = 'Matching the distillation yield to the protocol resources'

    def test_matched_k(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        self.check_close(match_resources(0.69), K_STAR_AT_069, 1e-3, 'p=0.69', test_case_source)
        self.check_close(match_resources(1.0), K_STAR_AT_1, 1e-3, 'p=1', test_case_source)
        self.check_close(match_resources(0.0), 0.0, 0.0, 'p=0', test_case_source)

    def test_matched_yield_equals_ratio(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        for p in (0.2, 0.5, 0.69, 0.9, 1.0):
            with self.subTest(p=p):
                k_star = match_resources(p)
                self.check_close(
                    yield_closed(k_star, initial_fidelity(p)), pst_resource_ratio(p), 1e-10, f'p={p}', test_case_source
                )

    def test_integer_matching(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        k_integer = match_resources(1.0, integer=True)
        self.check_close(k_integer, 0.0, 0.0, 'p=1, integer', test_case_source)

    def test_matching_fails_below_bracket(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        error = self.check_raises(MatchingError, match_resources, 'p=1, k_max=0.5', test_case_source, 1.0, k_max=0.5)
        self.check_and_log(
            getattr(error, 'diagnostic', {}).get('k_max') == 0.5, 'p=1, k_max=0.5', 'diagnostic k_max=0.5',
            getattr(error, 'diagnostic', None), test_case_source
        )

    def test_matched_teleport_success(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        self.check_close(matched_teleport_success(0.69), TELEPORT_AT_069, 1e-3, 'p=0.69', test_case_source)
        self.check_close(matched_teleport_success(0.0), 1.0, 1e-12, 'p=0', test_case_source)

    def test_distillation_model(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        model = DistillationModel.matched(0.69)
        self.check_close(model.teleport_success, TELEPORT_AT_069, 1e-3, 'matched p=0.69', test_case_source)
        counted = DistillationModel(F0=0.96, k=1, N=300)
        self.check_close(counted.expected_pairs(), 130.0, 1e-9, 'F0=0.96, k=1, N=300', test_case_source)
        self.check_and_log(
            DistillationModel(F0=0.9).expected_pairs() is None, 'N unset', None,
            DistillationModel(F0=0.9).expected_pairs(), test_case_source
        )


class AdvantageTest(BaseTestcase):
    description = 'Advantage threshold against distilled teleportation'

    def test_p_star(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        p_star = find_p_star()
        self.check_and_log(
            P_STAR_RANGE[0] <= p_star <= P_STAR_RANGE[1], 'default tolerance', P_STAR_RANGE, p_star, test_case_source
        )
        self.check_close(advantage(45.0, p_star), 0.0, 1e-5, 'advantage at p_star', test_case_source)

    def test_protocol_wins_below_threshold(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        worst = min(advantage(theta, p) for theta in (0.0, 20.0, 45.0, 70.0, 90.0) for p in (0.1, 0.3, 0.5, 0.65))
        self.check_and_log(worst > 0, 'p < 0.68', 'advantage > 0', worst, test_case_source)

    def test_window_at_full_noise(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        window = theta_window(1.0)
        passed = (
            window is not None and
            abs(window[0] - WINDOW_AT_P1[0]) <= 0.1 and
            abs(window[1] - WINDOW_AT_P1[1]) <= 0.1
        )
        self.check_and_log(passed, 'p=1', WINDOW_AT_P1, window, test_case_source)

    def test_window_symmetry_and_edges(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        window = theta_window(0.85)
        passed = (
            window is not None and
            27.0 <= window[0] < 45.0 < window[1] <= 63.0 and
            abs(window[0] + window[1] - 90.0) <= 5e-3 and
            abs(p_pst_analytic(window[0], 0.85) - matched_teleport_success(0.85)) <= 1e-4
        )
        self.check_and_log(passed, 'p=0.85', 'symmetric window inside [27, 63]', window, test_case_source)

    def test_sign_structure_on_fine_grid(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        p_star = find_p_star()
        mismatches = []
        for p in np.linspace(0.0, 1.0, 101):
            p = float(p)
            window = theta_window(p) if p > p_star else None
            for theta in np.linspace(0.0, 90.0, 181):
                theta = float(theta)
                gain = advantage(theta, p)
                # Points on a window edge are decided by the solver tolerance
                if abs(gain) <= 1e-5:
                    continue
                inside = window is not None and window[0] <= theta <= window[1]
                if (gain < 0) != inside:
                    mismatches.append((theta, p, gain, window))
        self.check_and_log(not mismatches, '181x101 grid', 'advantage < 0 exactly inside the window', mismatches, test_case_source)

    def test_empty_window(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        window = theta_window(0.5)
        self.check_and_log(window is None, 'p=0.5', None, window, test_case_source)

    def test_advantage_threshold(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        threshold = advantage_threshold((0.5, 1.0))
        passed = (
            P_STAR_RANGE[0] <= threshold.p_star <= P_STAR_RANGE[1] and
            threshold.windows[0.5] is None and
            threshold.windows[1.0] is not None
        )
        self.check_and_log(passed, 'samples 0.5, 1.0', 'p_star in range, empty then open window', threshold, test_case_source)

    def test_comparison_point(self):
        test_case_source = self._get_test_case_source(currentframe().f_code.co_name, self.__class__.__name__)  # type: ignore

        point = ComparisonPoint.evaluate(45.0, 1.0)
        self.check_close(point.p_pst, 0.5, 1e-15, 'theta=45, p=1', test_case_source)
        self.check_close(point.k_star, K_STAR_AT_1, 1e-3, 'theta=45, p=1', test_case_source)
        self.check_close(point.yield_matched, 0.25, 1e-10, 'theta=45, p=1', test_case_source)
        self.check_and_log(point.advantage < 0, 'theta=45, p=1', 'advantage < 0', point.advantage, test_case_source)
