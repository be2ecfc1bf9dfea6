# Distilled-teleportation baseline: Werner-pair recurrence bookkeeping at lowest
# order, resource matching against the protocol and the advantage threshold.

from dataclasses import dataclass
from functools import lru_cache
import logging
import math

from django.conf import settings
from scipy import optimize

from state_transfer.protocol import p_pst_analytic
from state_transfer.utils.error_utils import MatchingError, require_in_range, require_non_negative, ValidationError
from state_transfer.utils.message_themes import errors as error_messages, info as info_messages

MATCHING_K_MAX = settings.MATCHING_K_MAX
MATCHING_YIELD_TOLERANCE = settings.MATCHING_YIELD_TOLERANCE
THRESHOLD_P_TOLERANCE = settings.THRESHOLD_P_TOLERANCE
THRESHOLD_THETA_TOLERANCE_DEG = settings.THRESHOLD_THETA_TOLERANCE_DEG

SQRT_TWO_THIRDS = math.sqrt(2 / 3)
# (2/3) / (1 - sqrt(2/3)) - geometric sum of the per-step failure terms
FAILURE_SERIES_FACTOR = (2 / 3) / (1 - SQRT_TWO_THIRDS)
# Lower end of the threshold bracket - the advantage vanishes at p = 0 itself
THRESHOLD_P_LOW = 0.01
# Bisection step tolerance on k; the yield slope is below 1
MATCHING_K_XTOL = 1e-13

logger = logging.getLogger('state_transfer')


def initial_fidelity(p: float) -> float:
    require_in_range('p', p, 0.0, 1.0)
    return 1 - 3 * p / 4


def fidelity_after_k(F0: float, k: float) -> float:
    require_in_range('F0', F0, 0.25, 1.0)
    require_non_negative('k', k)
    return 1 - (2 / 3) ** k * (1 - F0)


def step_failure_prob(F: float) -> float:
    require_in_range('F', F, 0.0, 1.0)
    return (2 / 3) * math.sqrt(1 - F)


def yield_closed(k: float, F0: float, report_clamp: bool = False) -> float:
    """2^-k (1 - (2/3)/(1 - sqrt(2/3)) (1 - sqrt(2/3)^k) sqrt(1 - F0)), clamped at 0."""
    require_in_range('F0', F0, 0.25, 1.0)
    require_non_negative('k', k)
    bracket = 1 - FAILURE_SERIES_FACTOR * (1 - SQRT_TWO_THIRDS ** k) * math.sqrt(1 - F0)
    if bracket < 0:
        if report_clamp:
            logger.info(info_messages.yield_clamped(k, F0))
        return 0.0
    return bracket / 2 ** k


def yield_product(k: int, F0: float) -> float:
    """Step j fails with the probability of the fidelity reached after j steps."""
    if isinstance(k, bool) or not float(k).is_integer() or k < 0:
        raise ValidationError(error_messages.negative_parameter('k (integer)', k))
    require_in_range('F0', F0, 0.25, 1.0)
    product = 1.0
    for j in range(int(k)):
        product *= 1 - step_failure_prob(fidelity_after_k(F0, j))
    return product / 2 ** int(k)


def pst_resource_ratio(p: float) -> float:
    require_in_range('p', p, 0.0, 1.0)
    return (1 - p / 2) ** 2


def match_resources(p: float, integer: bool = False, k_max: float = MATCHING_K_MAX) -> float:
    """
    k* with yield_closed(k*, F0(p)) = (1 - p/2)^2. With `integer`, the largest
    whole k whose yield still covers the ratio.
    """
    F0 = initial_fidelity(p)
    target = pst_resource_ratio(p)
    if p == 0:
        return 0.0

    def mismatch(k: float) -> float:
        return yield_closed(k, F0) - target

    mismatch_at_max = mismatch(k_max)
    if mismatch_at_max > 0:
        raise MatchingError(
            error_messages.matching_failed(p, mismatch_at_max + target, target, k_max),
            diagnostic={'p': p, 'F0': F0, 'target': target, 'k_max': k_max, 'yield_at_k_max': mismatch_at_max + target},
        )

    k_star = optimize.bisect(mismatch, 0.0, k_max, xtol=MATCHING_K_XTOL, maxiter=500)
    if abs(mismatch(k_star)) > MATCHING_YIELD_TOLERANCE:
        raise MatchingError(
            error_messages.matching_failed(p, mismatch(k_star) + target, target, k_max),
            diagnostic={'p': p, 'F0': F0, 'target': target, 'k_star': k_star},
        )

    if integer:
        return float(math.floor(k_star + MATCHING_K_XTOL))
    return float(k_star)


@lru_cache(maxsize=4096)
def matched_k(p: float) -> float:
    return match_resources(p)


def teleport_success(F: float) -> float:
    """Average teleportation fidelity through a Werner resource of fidelity F."""
    require_in_range('F', F, 0.25, 1.0)
    return (2 * F + 1) / 3


def matched_teleport_success(p: float) -> float:
    return teleport_success(fidelity_after_k(initial_fidelity(p), matched_k(p)))


@dataclass(frozen=True)
class DistillationModel:
    F0: float
    k: float = 0.0
    N: int | None = None    # pairs sent
    m: int | None = None    # pairs kept

    def __post_init__(self):
        require_in_range('F0', self.F0, 0.25, 1.0)
        require_non_negative('k', self.k)

    @classmethod
    def matched(cls, p: float, integer: bool = False) -> 'DistillationModel':
        return cls(F0=initial_fidelity(p), k=match_resources(p, integer=integer))

    @property
    def fidelity(self) -> float:
        return fidelity_after_k(self.F0, self.k)

    @property
    def yield_ratio(self) -> float:
        return yield_closed(self.k, self.F0, report_clamp=True)

    @property
    def teleport_success(self) -> float:
        return teleport_success(self.fidelity)

    def expected_pairs(self) -> float | None:
        return None if self.N is None else self.N * self.yield_ratio


@dataclass(frozen=True)
class ComparisonPoint:
    theta: float    # deg
    p: float
    p_pst: float
    p_teleport: float
    k_star: float
    yield_matched: float

    @property
    def advantage(self) -> float:
        return self.p_pst - self.p_teleport

    @classmethod
    def evaluate(cls, theta_deg: float, p: float) -> 'ComparisonPoint':
        k_star = matched_k(p)
        F0 = initial_fidelity(p)
        return cls(
            theta=theta_deg,
            p=p,
            p_pst=p_pst_analytic(theta_deg, p),
            p_teleport=teleport_success(fidelity_after_k(F0, k_star)),
            k_star=k_star,
            yield_matched=yield_closed(k_star, F0),
        )


def advantage(theta_deg: float, p: float) -> float:
    return p_pst_analytic(theta_deg, p) - matched_teleport_success(p)


def _threshold_gap(p: float) -> float:
    # The protocol is worst at 45 deg; teleportation is theta-independent
    return advantage(45.0, p)


def find_p_star(tolerance: float = THRESHOLD_P_TOLERANCE) -> float:
    gap_low, gap_high = _threshold_gap(THRESHOLD_P_LOW), _threshold_gap(1.0)
    if gap_low <= 0 or gap_high >= 0:
        raise MatchingError(
            error_messages.threshold_not_bracketed(gap_low, gap_high),
            diagnostic={'p_low': THRESHOLD_P_LOW, 'p_high': 1.0, 'gap_low': gap_low, 'gap_high': gap_high},
        )
    return float(optimize.bisect(_threshold_gap, THRESHOLD_P_LOW, 1.0, xtol=tolerance, maxiter=500))


def theta_window(p: float, tolerance_deg: float = THRESHOLD_THETA_TOLERANCE_DEG) -> tuple[float, float] | None:
    """Interval of theta (deg) where distilled teleportation wins; None when empty."""
    teleport = matched_teleport_success(p)

    def gap(theta_deg: float) -> float:
        return p_pst_analytic(theta_deg, p) - teleport

    if gap(45.0) >= 0:
        return None
    lower = optimize.bisect(gap, 0.0, 45.0, xtol=tolerance_deg, maxiter=500)
    upper = optimize.bisect(gap, 45.0, 90.0, xtol=tolerance_deg, maxiter=500)
    return float(lower), float(upper)


@dataclass(frozen=True)
class AdvantageThreshold:
    p_star: float
    windows: dict[float, tuple[float, float] | None]


def advantage_threshold(
    sample_ps: tuple[float, ...] = (0.75, 0.85, 0.95), tolerance: float = THRESHOLD_P_TOLERANCE,
    tolerance_deg: float = THRESHOLD_THETA_TOLERANCE_DEG
) -> AdvantageThreshold:
    p_star = find_p_star(tolerance)
    return AdvantageThreshold(
        p_star=p_star,
        windows={p: theta_window(p, tolerance_deg) for p in sample_ps},
    )
