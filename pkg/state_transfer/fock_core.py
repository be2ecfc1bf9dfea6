# Bosonic Fock states on the two single-photon paths and their evolution through
# type-I BBO pair creation. The perturbative engine keeps every amplitude as a
# Taylor series in the crystal coupling g; the oracle exponentiates the full
# pump-quantized Hamiltonian on a truncated space.

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
import json
from math import comb, factorial, sqrt
from typing import Dict, Iterable, Mapping

from django.conf import settings
import numpy as np
from scipy import constants
from scipy.linalg import expm
import xxhash

from state_transfer.channels import JointPathDensity
from state_transfer.utils.error_utils import (
    ConfigurationError, UnsupportedSubspaceError, ValidationError
)
from state_transfer.utils.message_themes import errors as error_messages

FOCK_N_MAX = settings.FOCK_N_MAX
PUMP_N_MAX = settings.PUMP_N_MAX
ORACLE_MAX_DIMENSION = settings.ORACLE_MAX_DIMENSION
PUMP_REGIME_BOUND = settings.PUMP_REGIME_BOUND
PERTURBATIVE_ORDER = settings.PERTURBATIVE_ORDER
QUTRIT_LEAKAGE_TOLERANCE = settings.QUTRIT_LEAKAGE_TOLERANCE
UNITARITY_TOLERANCE = settings.UNITARITY_TOLERANCE


class Polarization(str, Enum):
    H = 'H'
    V = 'V'


@dataclass(frozen=True, order=True)
class ModeLabel:
    path: int
    polarization: Polarization

    def __post_init__(self):
        if self.path not in (1, 2):
            raise ValidationError(error_messages.invalid_path(self.path))

    def __str__(self) -> str:
        return f'{self.path}{self.polarization.value}'


MODE_1H = ModeLabel(1, Polarization.H)
MODE_1V = ModeLabel(1, Polarization.V)
MODE_2H = ModeLabel(2, Polarization.H)
MODE_2V = ModeLabel(2, Polarization.V)

# Fixed mode order - defines the lexicographic basis order
MODES = (MODE_1H, MODE_1V, MODE_2H, MODE_2V)
MODE_INDEX = {mode: index for index, mode in enumerate(MODES)}


@dataclass(frozen=True, order=True)
class OccupationVector:
    """Photon numbers of (1H, 1V, 2H, 2V); printed as |n1H,n1V;n2H,n2V>."""
    counts: tuple[int, int, int, int] = (0, 0, 0, 0)

    def count(self, mode: ModeLabel) -> int:
        return self.counts[MODE_INDEX[mode]]

    def with_count(self, mode: ModeLabel, count: int) -> 'OccupationVector':
        counts = list(self.counts)
        counts[MODE_INDEX[mode]] = count
        return OccupationVector(tuple(counts))   # type: ignore[arg-type]

    def path_counts(self, path: int) -> tuple[int, int]:
        offset = 0 if path == 1 else 2
        return self.counts[offset], self.counts[offset + 1]

    def with_path_counts(self, path: int, n_h: int, n_v: int) -> 'OccupationVector':
        counts = list(self.counts)
        offset = 0 if path == 1 else 2
        counts[offset], counts[offset + 1] = n_h, n_v
        return OccupationVector(tuple(counts))   # type: ignore[arg-type]

    def validate(self, n_max: int) -> None:
        for mode, count in zip(MODES, self.counts):
            if not (0 <= count <= n_max):
                raise ValidationError(error_messages.occupation_out_of_range(str(mode), count, n_max))

    def label(self) -> str:
        n1h, n1v, n2h, n2v = self.counts
        return f'|{n1h},{n1v};{n2h},{n2v}>'

    def __str__(self) -> str:
        return self.label()


VACUUM = OccupationVector()


@dataclass(frozen=True)
class BBOCoupling:
    g: float
    g_prime: float | None = None    # J
    t: float | None = None          # s

    def __post_init__(self):
        if isinstance(self.g, complex) or not abs(self.g) < 1:
            raise ValidationError(error_messages.coupling_out_of_range(self.g))

    @classmethod
    def from_interaction(cls, g_prime: float, t: float) -> 'BBOCoupling':
        return cls(g=-g_prime * t / constants.hbar, g_prime=g_prime, t=t)


@dataclass(frozen=True)
class PumpField:
    amp_H: complex = 0j
    amp_V: complex = 0j
    # None - classical undepleted pump; otherwise the oracle's Fock truncation
    pump_n_max: int | None = None

    def validate_regime(self, coupling: BBOCoupling) -> None:
        for amplitude in (self.amp_H, self.amp_V):
            g_pump = abs(coupling.g * amplitude)
            if g_pump > PUMP_REGIME_BOUND:
                raise ValidationError(error_messages.pump_regime_violated(g_pump, PUMP_REGIME_BOUND))

    def transformed(self, amp_H: complex, amp_V: complex) -> 'PumpField':
        return PumpField(amp_H=complex(amp_H), amp_V=complex(amp_V), pump_n_max=self.pump_n_max)


# === Order-resolved amplitude series ===

Series = np.ndarray
Terms = Dict[OccupationVector, Series]


def _zero_series(order: int) -> Series:
    return np.zeros(order + 1, dtype=complex)


def _shift_series(series: Series, power: int) -> Series:
    """Multiply by g**power, dropping orders beyond the retained one."""
    shifted = np.zeros_like(series)
    if power < len(series):
        shifted[power:] = series[:len(series) - power]
    return shifted


def _evaluate_series(series: Series, g: float) -> complex:
    return complex(np.polynomial.polynomial.polyval(g, series))


def _leading_series_value(series: Series, g: float) -> complex:
    nonzero = np.flatnonzero(series)
    if nonzero.size == 0:
        return 0j
    leading_order = int(nonzero[0])
    return complex(series[leading_order] * g ** leading_order)


def _accumulate(terms: Terms, occupation: OccupationVector, series: Series) -> None:
    if occupation in terms:
        terms[occupation] = terms[occupation] + series
    else:
        terms[occupation] = series.copy()


def _scale_terms(terms: Terms, factor: complex, power: int = 0) -> Terms:
    return {occ: _shift_series(series * factor, power) for occ, series in terms.items()}


def _add_terms(*terms_list: Terms) -> Terms:
    result: Terms = {}
    for terms in terms_list:
        for occ, series in terms.items():
            _accumulate(result, occ, series)
    return result


def _ladder(terms: Terms, mode: ModeLabel, create: bool, n_max: int) -> tuple[Terms, Terms]:
    """Apply a creation/annihilation operator. Returns (result, dropped source terms)."""
    result: Terms = {}
    dropped: Terms = {}
    for occ, series in terms.items():
        n = occ.count(mode)
        if create:
            if n + 1 > n_max:
                dropped[occ] = series
                continue
            _accumulate(result, occ.with_count(mode, n + 1), sqrt(n + 1) * series)
        elif n > 0:
            _accumulate(result, occ.with_count(mode, n - 1), sqrt(n) * series)
    return result, dropped


@dataclass(frozen=True, eq=False)
class PureFockState:
    """
    Sparse pure state of the four path modes.
    `terms` hold Taylor coefficients in g (index = power of g); `g` is the
    coupling the series is evaluated at.
    """
    terms: Mapping[OccupationVector, Series]
    pump: PumpField = field(default_factory=PumpField)
    g: float = 0.0
    n_max: int = FOCK_N_MAX
    order: int = PERTURBATIVE_ORDER
    normalized: bool = True
    truncation_loss: float = 0.0

    @classmethod
    def vacuum(cls, pump: PumpField | None = None, n_max: int = FOCK_N_MAX) -> 'PureFockState':
        return cls.from_amplitudes({VACUUM: 1.0}, pump=pump, n_max=n_max)

    @classmethod
    def from_amplitudes(
        cls, amplitudes: Mapping[OccupationVector | tuple, complex], pump: PumpField | None = None,
        n_max: int = FOCK_N_MAX, g: float = 0.0, normalized: bool = True, order: int = PERTURBATIVE_ORDER
    ) -> 'PureFockState':
        """Build a state whose amplitudes carry no g-dependence."""
        terms: Terms = {}
        for occ, amplitude in amplitudes.items():
            occupation = occ if isinstance(occ, OccupationVector) else OccupationVector(tuple(occ))  # type: ignore[arg-type]
            occupation.validate(n_max)
            series = _zero_series(order)
            series[0] = amplitude
            _accumulate(terms, occupation, series)
        return cls(terms=terms, pump=pump or PumpField(), g=g, n_max=n_max, order=order, normalized=normalized)

    def _derive(self, terms: Terms, **changes) -> 'PureFockState':
        params = {
            'pump': self.pump, 'g': self.g, 'n_max': self.n_max, 'order': self.order,
            'normalized': self.normalized, 'truncation_loss': self.truncation_loss,
        }
        params.update(changes)
        return PureFockState(terms=terms, **params)

    @property
    def basis(self) -> list[OccupationVector]:
        return sorted(self.terms)

    @property
    def amplitudes(self) -> Dict[OccupationVector, complex]:
        return {occ: _evaluate_series(self.terms[occ], self.g) for occ in self.basis}

    def leading_amplitudes(self) -> Dict[OccupationVector, complex]:
        """Each amplitude truncated to its lowest non-vanishing power of g."""
        return {occ: _leading_series_value(self.terms[occ], self.g) for occ in self.basis}

    def amplitude(self, occupation: OccupationVector | tuple) -> complex:
        if not isinstance(occupation, OccupationVector):
            occupation = OccupationVector(tuple(occupation))    # type: ignore[arg-type]
        series = self.terms.get(occupation)
        return 0j if series is None else _evaluate_series(series, self.g)

    def squared_norm(self) -> float:
        return float(sum(abs(amplitude) ** 2 for amplitude in self.amplitudes.values()))

    def inner(self, other: 'PureFockState') -> complex:
        """<self|other> on the evaluated amplitudes."""
        other_amplitudes = other.amplitudes
        return complex(sum(
            np.conj(amplitude) * other_amplitudes.get(occ, 0j) for occ, amplitude in self.amplitudes.items()
        ))

    def validate(self, norm_tolerance: float = 1e-12) -> None:
        for occ in self.terms:
            occ.validate(self.n_max)
        squared_norm = self.squared_norm()
        if squared_norm > 1 + norm_tolerance:
            raise ValidationError(error_messages.invalid_density(f'squared norm {squared_norm} > 1'))

    def to_json(self) -> str:
        """Deterministic serialization - occupation vector -> [re, im]."""
        data = {
            'g': format(self.g, '.17g'),
            'pump': {
                'amp_H': [format(self.pump.amp_H.real, '.17g'), format(self.pump.amp_H.imag, '.17g')],
                'amp_V': [format(self.pump.amp_V.real, '.17g'), format(self.pump.amp_V.imag, '.17g')],
            },
            'amplitudes': [
                [occ.label(), [format(amplitude.real, '.17g'), format(amplitude.imag, '.17g')]]
                for occ, amplitude in self.amplitudes.items()
            ],
            'truncation_loss': format(self.truncation_loss, '.17g'),
        }
        return json.dumps(data, separators=(',', ':'))

    def digest(self) -> str:
        return xxhash.xxh64(self.to_json()).hexdigest()


def _dropped_weight(dropped: Terms, g: float, scale: float = 1.0) -> float:
    return float(sum(scale * abs(_evaluate_series(series, g)) ** 2 for series in dropped.values()))


def apply_creation(state: PureFockState, mode: ModeLabel) -> PureFockState:
    """
    a† on `mode`. Terms pushed beyond n_max are dropped and their squared norm
    is added to `truncation_loss`.
    """
    terms, dropped = _ladder(state.terms, mode, create=True, n_max=state.n_max)
    loss = _dropped_weight(dropped, state.g)
    return state._derive(terms, truncation_loss=state.truncation_loss + loss, normalized=False)


def apply_annihilation(state: PureFockState, mode: ModeLabel) -> PureFockState:
    terms, _ = _ladder(state.terms, mode, create=False, n_max=state.n_max)
    return state._derive(terms, normalized=False)


def _pair_operator(terms: Terms, pump_amplitude: complex, n_max: int) -> tuple[Terms, Terms]:
    """X = pump * a†1V a†2V + conj(pump) * a1V a2V"""
    created, dropped_1 = _ladder(terms, MODE_1V, create=True, n_max=n_max)
    created, dropped_2 = _ladder(created, MODE_2V, create=True, n_max=n_max)
    annihilated, _ = _ladder(terms, MODE_1V, create=False, n_max=n_max)
    annihilated, _ = _ladder(annihilated, MODE_2V, create=False, n_max=n_max)
    result = _add_terms(_scale_terms(created, pump_amplitude), _scale_terms(annihilated, np.conj(pump_amplitude)))
    dropped = _add_terms(dropped_1, dropped_2)
    return result, dropped


def _check_coupling_compatible(state: PureFockState, coupling: BBOCoupling) -> None:
    has_g_dependence = any(np.any(series[1:]) for series in state.terms.values())
    if has_g_dependence and state.g != coupling.g:
        raise ConfigurationError(error_messages.mixed_couplings(state.g, coupling.g))


def bbo_apply_perturbative(state: PureFockState, coupling: BBOCoupling, effective_pump: complex) -> PureFockState:
    """
    One type-I crystal pumped by the classical amplitude `effective_pump`
    (horizontal pump mode, after every waveplate/attenuator/retarder):

        M = 1 + i g X - (g**2 / 2) X**2,   X = pump a†1V a†2V + conj(pump) a1V a2V

    The pump itself is left unchanged.
    """
    g_pump = abs(coupling.g * effective_pump)
    if g_pump > PUMP_REGIME_BOUND:
        raise ValidationError(error_messages.pump_regime_violated(g_pump, PUMP_REGIME_BOUND))
    _check_coupling_compatible(state, coupling)

    x_terms, dropped_x = _pair_operator(state.terms, effective_pump, state.n_max)
    xx_terms, dropped_xx = _pair_operator(x_terms, effective_pump, state.n_max)

    terms = _add_terms(
        state.terms,
        _scale_terms(x_terms, 1j, power=1),
        _scale_terms(xx_terms, -0.5, power=2),
    )
    loss = (
        _dropped_weight(dropped_x, coupling.g, abs(coupling.g * effective_pump) ** 2) +
        _dropped_weight(dropped_xx, coupling.g, abs(coupling.g * effective_pump) ** 4 / 4)
    )

    return state._derive(terms, g=coupling.g, truncation_loss=state.truncation_loss + loss)


# === Polarization rotation ===

def check_unitary(u: np.ndarray, tolerance: float = UNITARITY_TOLERANCE) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValidationError(error_messages.non_unitary_rotation(float('inf'), tolerance))
    deviation = float(np.max(np.abs(u.conj().T @ u - np.eye(2))))
    if deviation > tolerance:
        raise ValidationError(error_messages.non_unitary_rotation(deviation, tolerance))
    return u


def _rotated_path_components(n_h: int, n_v: int, u: np.ndarray) -> Dict[tuple[int, int], complex]:
    """
    Expand (u_HH a†H + u_VH a†V)^n_h (u_HV a†H + u_VV a†V)^n_v |0> / sqrt(n_h! n_v!)
    into |m_h, m_v> components.
    """
    components: Dict[tuple[int, int], complex] = {}
    n_total = n_h + n_v
    for j, l in product(range(n_h + 1), range(n_v + 1)):
        coefficient = (
            comb(n_h, j) * u[0, 0] ** j * u[1, 0] ** (n_h - j) *
            comb(n_v, l) * u[0, 1] ** l * u[1, 1] ** (n_v - l)
        )
        m_h = j + l
        m_v = n_total - m_h
        components[(m_h, m_v)] = components.get((m_h, m_v), 0j) + coefficient * sqrt(factorial(m_h) * factorial(m_v))

    normalization = sqrt(factorial(n_h) * factorial(n_v))
    return {key: value / normalization for key, value in components.items()}


def rotate_polarization(state: PureFockState, path: int, u: np.ndarray) -> PureFockState:
    """Polarization unitary u (columns = images of |H>, |V>) on the photons of `path`."""
    if path not in (1, 2):
        raise ValidationError(error_messages.invalid_path(path))
    u = check_unitary(u)

    terms: Terms = {}
    for occ, series in state.terms.items():
        n_h, n_v = occ.path_counts(path)
        if n_h + n_v == 0:
            _accumulate(terms, occ, series)
            continue
        for (m_h, m_v), coefficient in _rotated_path_components(n_h, n_v, u).items():
            if coefficient == 0:
                continue
            _accumulate(terms, occ.with_path_counts(path, m_h, m_v), coefficient * series)

    return state._derive(terms)


def polarization_rotation_to(a1: complex, a2: float) -> np.ndarray:
    """Unitary sending |V> to a1|H> + a2|V> (a2 real)."""
    return np.array([[a2, a1], [-np.conj(a1), a2]], dtype=complex)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


# === Reduction to path qutrits ===

# Single-path photon numbers -> qutrit index {|0>, |H>, |V>}
QUTRIT_INDEX = {(0, 0): 0, (1, 0): 1, (0, 1): 2}


def reduce_to_path_qutrits(
    state: PureFockState, leading_order: bool = False, leakage_tolerance: float = QUTRIT_LEAKAGE_TOLERANCE
) -> JointPathDensity:
    """
    |psi><psi| on path1 (x) path2 qutrits. Support with more than one photon in a
    path is discarded when its weight stays within `leakage_tolerance`, otherwise
    UnsupportedSubspaceError lists the offending occupation vectors.
    With `leading_order`, every amplitude is cut to its lowest power of g.
    """
    amplitudes = state.leading_amplitudes() if leading_order else state.amplitudes
    vector = np.zeros(9, dtype=complex)
    offending = []
    leakage = 0.0

    for occ, amplitude in amplitudes.items():
        index_1 = QUTRIT_INDEX.get(occ.path_counts(1))
        index_2 = QUTRIT_INDEX.get(occ.path_counts(2))
        if index_1 is None or index_2 is None:
            if amplitude != 0:
                offending.append(occ.label())
                leakage += abs(amplitude) ** 2
            continue
        vector[3 * index_1 + index_2] += amplitude

    if leakage > leakage_tolerance:
        raise UnsupportedSubspaceError(
            error_messages.unsupported_subspace(offending, leakage), offending=offending, weight=leakage
        )

    return JointPathDensity(np.outer(vector, vector.conj()), leakage=leakage)


# === Exact oracle ===

def _ladder_matrix(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


def _path_basis(n_max: int) -> list[OccupationVector]:
    return [OccupationVector(counts) for counts in product(range(n_max + 1), repeat=4)]   # type: ignore[misc]


def truncated_coherent_state(alpha: complex, pump_n_max: int) -> np.ndarray:
    """Coherent state cut at pump_n_max photons, renormalized."""
    n = np.arange(pump_n_max + 1)
    log_factorials = np.array([sum(np.log(np.arange(1, k + 1))) for k in n])
    magnitudes = np.exp(-abs(alpha) ** 2 / 2 - log_factorials / 2) * np.abs(alpha) ** n
    vector = magnitudes * np.exp(1j * np.angle(alpha) * n) if alpha != 0 else (n == 0).astype(complex)
    return vector / np.linalg.norm(vector)


def _kron_all(matrices: Iterable[np.ndarray]) -> np.ndarray:
    result = np.array([[1.0 + 0j]])
    for matrix in matrices:
        result = np.kron(result, matrix)
    return result


@dataclass(frozen=True, eq=False)
class OracleResult:
    joint_vector: np.ndarray        # pump (x) 1H (x) 1V (x) 2H (x) 2V
    pump_vector: np.ndarray         # initial truncated coherent pump
    initial_joint_vector: np.ndarray
    n_max: int
    pump_n_max: int
    g: float

    def _pump_number(self, joint_vector: np.ndarray) -> float:
        probabilities = np.abs(joint_vector.reshape(self.pump_n_max + 1, -1)) ** 2
        return float(np.sum(probabilities.sum(axis=1) * np.arange(self.pump_n_max + 1)))

    def pump_photon_number(self) -> float:
        return self._pump_number(self.joint_vector)

    def initial_pump_photon_number(self) -> float:
        return self._pump_number(self.initial_joint_vector)

    def path_state(self) -> PureFockState:
        """Path amplitudes with the pump projected back onto its initial coherent state."""
        path_amplitudes = self.pump_vector.conj() @ self.joint_vector.reshape(self.pump_n_max + 1, -1)
        amplitudes = {
            occ: amplitude for occ, amplitude in zip(_path_basis(self.n_max), path_amplitudes) if amplitude != 0
        }
        return PureFockState.from_amplitudes(amplitudes, n_max=self.n_max, g=self.g, normalized=False)


def exact_evolve_oracle(
    initial: PureFockState, coupling: BBOCoupling, pump_n_max: int | None = None
) -> OracleResult:
    """
    exp(-i H_BBO t / hbar) = exp(i g K), K = a0H a†1V a†2V + h.c., on the truncated
    pump (x) paths space via dense matrix exponential.
    """
    pump_n_max = pump_n_max or initial.pump.pump_n_max or PUMP_N_MAX
    n_max = initial.n_max
    path_dimension = (n_max + 1) ** 4
    dimension = (pump_n_max + 1) * path_dimension
    if dimension > ORACLE_MAX_DIMENSION:
        raise ConfigurationError(error_messages.oracle_dimension_exceeded(dimension, ORACLE_MAX_DIMENSION))

    a_pump = _ladder_matrix(pump_n_max)
    a_path = _ladder_matrix(n_max)
    identity_path = np.eye(n_max + 1, dtype=complex)
    a_1v = _kron_all([identity_path, a_path, identity_path, identity_path])
    a_2v = _kron_all([identity_path, identity_path, identity_path, a_path])

    k_operator = np.kron(a_pump, a_1v.conj().T @ a_2v.conj().T)
    k_operator = k_operator + k_operator.conj().T
    propagator = expm(1j * coupling.g * k_operator)

    path_vector = np.zeros(path_dimension, dtype=complex)
    basis_index = {occ: index for index, occ in enumerate(_path_basis(n_max))}
    for occ, amplitude in initial.amplitudes.items():
        path_vector[basis_index[occ]] = amplitude

    pump_vector = truncated_coherent_state(initial.pump.amp_H, pump_n_max)
    initial_joint = np.kron(pump_vector, path_vector)

    return OracleResult(
        joint_vector=propagator @ initial_joint,
        pump_vector=pump_vector,
        initial_joint_vector=initial_joint,
        n_max=n_max,
        pump_n_max=pump_n_max,
        g=coupling.g,
    )
