# Decoherence maps on the {|0>, |H>, |V>} path qutrits and their local
# extension to the two-path joint density.

from dataclasses import dataclass
from enum import Enum
import math
from threading import Lock
from typing import Callable, Dict

from django.conf import settings
import numpy as np

from state_transfer.utils.error_utils import (
    ChannelConsistencyError, require_in_range, require_non_negative, ValidationError
)
from state_transfer.utils.message_themes import errors as error_messages

PSD_TOLERANCE = settings.PSD_TOLERANCE
CP_TOLERANCE = settings.CP_TOLERANCE
TRACE_TOLERANCE = settings.TRACE_TOLERANCE
SPEED_OF_LIGHT = settings.SPEED_OF_LIGHT

VAC, POL_H, POL_V = 0, 1, 2


def _check_density(matrix: np.ndarray, dimension: int) -> None:
    if matrix.shape != (dimension, dimension):
        raise ValidationError(error_messages.invalid_density(f'shape {matrix.shape} != ({dimension}, {dimension})'))
    if not np.allclose(matrix, matrix.conj().T, atol=TRACE_TOLERANCE, rtol=0):
        raise ValidationError(error_messages.invalid_density('not Hermitian'))
    trace = float(np.trace(matrix).real)
    if not (-TRACE_TOLERANCE <= trace <= 1 + TRACE_TOLERANCE):
        raise ValidationError(error_messages.invalid_density(f'trace {trace} outside [0, 1]'))
    min_eigenvalue = float(np.min(np.linalg.eigvalsh(matrix)))
    if min_eigenvalue < -PSD_TOLERANCE:
        raise ValidationError(error_messages.invalid_density(f'eigenvalue {min_eigenvalue:.3e} < 0'))


def clip_psd(matrix: np.ndarray) -> np.ndarray:
    """Symmetrize and zero tiny negative eigenvalues (floating-point hygiene only)."""
    hermitian = (matrix + matrix.conj().T) / 2
    eigenvalues, eigenvectors = np.linalg.eigh(hermitian)
    if np.all(eigenvalues >= 0):
        return hermitian
    eigenvalues = np.where(eigenvalues < 0, 0.0, eigenvalues)
    return (eigenvectors * eigenvalues) @ eigenvectors.conj().T


@dataclass(frozen=True, eq=False)
class QutritDensity:
    """
    Single-path density over (|0>, |H>, |V>):

        | a    x1   x2 |
        | x1*  b    x3 |
        | x2*  x3*  c  |
    """
    matrix: np.ndarray

    @classmethod
    def from_entries(
        cls, a: float = 0.0, b: float = 0.0, c: float = 0.0, x1: complex = 0j, x2: complex = 0j, x3: complex = 0j
    ) -> 'QutritDensity':
        matrix = np.array([
            [a, x1, x2],
            [np.conj(x1), b, x3],
            [np.conj(x2), np.conj(x3), c],
        ], dtype=complex)
        return cls(matrix)

    @classmethod
    def from_vector(cls, vector) -> 'QutritDensity':
        vector = np.asarray(vector, dtype=complex)
        return cls(np.outer(vector, vector.conj()))

    a = property(lambda self: float(self.matrix[VAC, VAC].real))
    b = property(lambda self: float(self.matrix[POL_H, POL_H].real))
    c = property(lambda self: float(self.matrix[POL_V, POL_V].real))
    x1 = property(lambda self: complex(self.matrix[VAC, POL_H]))
    x2 = property(lambda self: complex(self.matrix[VAC, POL_V]))
    x3 = property(lambda self: complex(self.matrix[POL_H, POL_V]))

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def polarization_block(self) -> np.ndarray:
        return self.matrix[POL_H:, POL_H:]

    def validate(self) -> None:
        _check_density(self.matrix, 3)


@dataclass(frozen=True, eq=False)
class JointPathDensity:
    """9x9 density over path1 (x) path2 qutrits; index = 3 * q1 + q2."""
    matrix: np.ndarray
    # Weight outside the qutrit subspace discarded when the density was formed
    leakage: float = 0.0

    @staticmethod
    def index(q1: int, q2: int) -> int:
        return 3 * q1 + q2

    def element(self, row: tuple[int, int], column: tuple[int, int]) -> complex:
        return complex(self.matrix[self.index(*row), self.index(*column)])

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def reduced(self, path: int) -> QutritDensity:
        tensor = self.matrix.reshape(3, 3, 3, 3)
        if path == 1:
            return QutritDensity(np.einsum('ijkj->ik', tensor))
        if path == 2:
            return QutritDensity(np.einsum('ijil->jl', tensor))
        raise ValidationError(error_messages.invalid_path(path))

    def validate(self) -> None:
        _check_density(self.matrix, 9)


class ChannelKind(str, Enum):
    IDENTITY = 'identity'
    DEPOLARIZING = 'depolarizing'
    DEPHASING = 'dephasing'


def _depolarize_matrix(matrix: np.ndarray, p: float) -> np.ndarray:
    """Linear action on any 3x3 operator (the density map extended off the Hermitian set)."""
    result = np.empty_like(matrix)
    coherence_vacuum = math.sqrt(1 - p)
    result[VAC, VAC] = matrix[VAC, VAC]
    result[VAC, POL_H:] = coherence_vacuum * matrix[VAC, POL_H:]
    result[POL_H:, VAC] = coherence_vacuum * matrix[POL_H:, VAC]
    result[POL_H, POL_V] = (1 - p) * matrix[POL_H, POL_V]
    result[POL_V, POL_H] = (1 - p) * matrix[POL_V, POL_H]
    mixed = (matrix[POL_H, POL_H] + matrix[POL_V, POL_V]) * p / 2
    result[POL_H, POL_H] = mixed + (1 - p) * matrix[POL_H, POL_H]
    result[POL_V, POL_V] = mixed + (1 - p) * matrix[POL_V, POL_V]
    return result


def _dephase_matrix(matrix: np.ndarray, beta: float) -> np.ndarray:
    result = matrix.copy()
    coherence_vacuum = math.sqrt(1 - beta)
    result[VAC, POL_H:] *= coherence_vacuum
    result[POL_H:, VAC] *= coherence_vacuum
    result[POL_H, POL_V] *= 1 - beta
    result[POL_V, POL_H] *= 1 - beta
    return result


@dataclass(frozen=True)
class ChannelSpec:
    kind: ChannelKind = ChannelKind.IDENTITY
    strength: float = 0.0

    def __post_init__(self):
        if not isinstance(self.kind, ChannelKind):
            try:
                object.__setattr__(self, 'kind', ChannelKind(self.kind))
            except ValueError:
                raise ValidationError(error_messages.unknown_channel_kind(self.kind))
        parameter_name = 'beta' if self.kind == ChannelKind.DEPHASING else 'p'
        require_in_range(parameter_name, self.strength, 0.0, 1.0)

    @classmethod
    def depolarizing(cls, p: float) -> 'ChannelSpec':
        return cls(ChannelKind.DEPOLARIZING, float(p))

    @classmethod
    def dephasing(cls, beta: float) -> 'ChannelSpec':
        return cls(ChannelKind.DEPHASING, float(beta))

    @classmethod
    def identity(cls) -> 'ChannelSpec':
        return cls()

    def action(self) -> Callable[[np.ndarray], np.ndarray]:
        if self.kind == ChannelKind.DEPOLARIZING:
            return lambda matrix: _depolarize_matrix(matrix, self.strength)
        if self.kind == ChannelKind.DEPHASING:
            return lambda matrix: _dephase_matrix(matrix, self.strength)
        return lambda matrix: matrix.copy()

    def __str__(self) -> str:
        return f'{self.kind.value}({self.strength})'


def depolarize_qutrit(rho: QutritDensity, p: float) -> QutritDensity:
    require_in_range('p', p, 0.0, 1.0)
    return QutritDensity(_depolarize_matrix(np.asarray(rho.matrix, dtype=complex), p))


def dephase_qutrit(rho: QutritDensity, beta: float) -> QutritDensity:
    require_in_range('beta', beta, 0.0, 1.0)
    return QutritDensity(_dephase_matrix(np.asarray(rho.matrix, dtype=complex), beta))


def apply_qutrit_channel(rho: QutritDensity, channel: ChannelSpec) -> QutritDensity:
    return QutritDensity(channel.action()(np.asarray(rho.matrix, dtype=complex)))


def p_from_distance(gamma: float, distance: float, speed_of_light: float = SPEED_OF_LIGHT) -> float:
    """Depolarization p = 1 - exp(-gamma L / c)."""
    require_non_negative('gamma', gamma)
    require_non_negative('distance', distance)
    return float(-np.expm1(-gamma * distance / speed_of_light))


def choi_matrix(channel: ChannelSpec) -> np.ndarray:
    """C = sum_ij |i><j| (x) channel(|i><j|)"""
    action = channel.action()
    choi = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        for j in range(3):
            unit = np.zeros((3, 3), dtype=complex)
            unit[i, j] = 1.0
            choi[3 * i:3 * i + 3, 3 * j:3 * j + 3] = action(unit)
    return choi


def choi_partial_trace(choi: np.ndarray) -> np.ndarray:
    """Trace over the output factor - the identity for trace-preserving maps."""
    return np.einsum('iaja->ij', choi.reshape(3, 3, 3, 3))


def check_cptp(channel: ChannelSpec, tolerance: float = CP_TOLERANCE) -> tuple[float, float]:
    """Returns (min Choi eigenvalue, max |Tr_out C - 1|); raises when either fails."""
    choi = choi_matrix(channel)
    min_eigenvalue = float(np.min(np.linalg.eigvalsh(choi)))
    trace_deviation = float(np.max(np.abs(choi_partial_trace(choi) - np.eye(3))))
    if min_eigenvalue < -tolerance or trace_deviation > tolerance:
        raise ChannelConsistencyError(error_messages.channel_not_cp(str(channel), min_eigenvalue))
    return min_eigenvalue, trace_deviation


class KrausCache:
    """Kraus decompositions per channel spec; insertions serialized, reads lock-free."""

    def __init__(self):
        self._kraus: Dict[ChannelSpec, tuple[np.ndarray, ...]] = {}
        self._lock = Lock()

    def get(self, channel: ChannelSpec) -> tuple[np.ndarray, ...]:
        kraus = self._kraus.get(channel)
        if kraus is not None:
            return kraus
        with self._lock:
            kraus = self._kraus.get(channel)
            if kraus is None:
                kraus = kraus_operators(channel)
                self._kraus[channel] = kraus
        return kraus

    def clear(self) -> None:
        with self._lock:
            self._kraus.clear()

    def __len__(self) -> int:
        return len(self._kraus)


def kraus_operators(channel: ChannelSpec) -> tuple[np.ndarray, ...]:
    """K_k = sqrt(lambda_k) * reshape(v_k) from the Choi eigendecomposition."""
    check_cptp(channel)
    eigenvalues, eigenvectors = np.linalg.eigh(choi_matrix(channel))
    operators = []
    for eigenvalue, eigenvector in zip(eigenvalues, eigenvectors.T):
        if eigenvalue <= CP_TOLERANCE:
            continue
        operators.append(math.sqrt(eigenvalue) * eigenvector.reshape(3, 3).T)
    for operator in operators:
        operator.setflags(write=False)
    return tuple(operators)


KRAUS_CACHE = KrausCache()


def apply_per_path(joint: JointPathDensity, ch1: ChannelSpec, ch2: ChannelSpec) -> JointPathDensity:
    """(ch1 (x) id) then (id (x) ch2) in Kraus form."""
    matrix = np.asarray(joint.matrix, dtype=complex)
    identity = np.eye(3, dtype=complex)

    for channel, embed in ((ch1, lambda k: np.kron(k, identity)), (ch2, lambda k: np.kron(identity, k))):
        if channel.kind == ChannelKind.IDENTITY:
            continue
        local_operators = [embed(kraus) for kraus in KRAUS_CACHE.get(channel)]
        matrix = sum(operator @ matrix @ operator.conj().T for operator in local_operators)

    trace_deviation = abs(np.trace(matrix).real - joint.trace())
    if trace_deviation > TRACE_TOLERANCE:
        raise ChannelConsistencyError(error_messages.invalid_density(f'trace changed by {trace_deviation:.3e}'))
    min_eigenvalue = float(np.min(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)))
    if min_eigenvalue < -PSD_TOLERANCE:
        raise ChannelConsistencyError(error_messages.invalid_density(f'eigenvalue {min_eigenvalue:.3e} < 0'))

    return JointPathDensity(matrix, leakage=joint.leakage)


@dataclass(frozen=True)
class ChannelParams:
    """
    Either depolarization (p directly, or gamma and distance) or dephasing
    (beta1, beta2). `p2` makes the depolarization asymmetric (experimental).
    """
    p: float | None = None
    gamma: float | None = None
    distance: float | None = None
    beta1: float | None = None
    beta2: float | None = None
    p2: float | None = None
    speed_of_light: float = SPEED_OF_LIGHT

    def __post_init__(self):
        depolarizing = any(value is not None for value in (self.p, self.gamma, self.distance, self.p2))
        dephasing = self.beta1 is not None or self.beta2 is not None
        if depolarizing and dephasing:
            raise ValidationError(error_messages.DEPOLARIZING_AND_DEPHASING_EXCLUSIVE)
        if self.p is not None and (self.gamma is not None or self.distance is not None):
            raise ValidationError(error_messages.P_AND_DISTANCE_EXCLUSIVE)
        if (self.gamma is None) != (self.distance is None):
            raise ValidationError(error_messages.P_OR_DISTANCE_REQUIRED)
        if self.p2 is not None and self.p is None and self.gamma is None:
            raise ValidationError(error_messages.P_OR_DISTANCE_REQUIRED)
        if self.p is not None:
            require_in_range('p', self.p, 0.0, 1.0)
        if self.p2 is not None:
            require_in_range('p2', self.p2, 0.0, 1.0)
        for name in ('gamma', 'distance'):
            if getattr(self, name) is not None:
                require_non_negative(name, getattr(self, name))
        for name in ('beta1', 'beta2'):
            if getattr(self, name) is not None:
                require_in_range(name, getattr(self, name), 0.0, 1.0)

    @property
    def kind(self) -> ChannelKind:
        if self.beta1 is not None or self.beta2 is not None:
            return ChannelKind.DEPHASING
        if self.p is None and self.gamma is None:
            return ChannelKind.IDENTITY
        return ChannelKind.DEPOLARIZING

    @property
    def p1(self) -> float:
        if self.p is not None:
            return self.p
        if self.gamma is not None and self.distance is not None:
            return p_from_distance(self.gamma, self.distance, self.speed_of_light)
        return 0.0

    @property
    def p_path2(self) -> float:
        return self.p1 if self.p2 is None else self.p2

    def channel_specs(self) -> tuple[ChannelSpec, ChannelSpec]:
        if self.kind == ChannelKind.DEPHASING:
            return ChannelSpec.dephasing(self.beta1 or 0.0), ChannelSpec.dephasing(self.beta2 or 0.0)
        if self.kind == ChannelKind.DEPOLARIZING:
            return ChannelSpec.depolarizing(self.p1), ChannelSpec.depolarizing(self.p_path2)
        return ChannelSpec.identity(), ChannelSpec.identity()

    def pair_intensity_factor(self) -> float:
        """Surviving H1 V2 pattern intensity - (1 - p/2)**2 when symmetric, 1 for dephasing."""
        if self.kind == ChannelKind.DEPOLARIZING:
            return (1 - self.p1 / 2) * (1 - self.p_path2 / 2)
        return 1.0
