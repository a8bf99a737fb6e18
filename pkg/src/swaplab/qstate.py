"""Dense pure-state engine for a handful of labeled qubits.

Conventions used throughout the package:

* A state over labels ``(l_0, ..., l_{n-1})`` stores ``2**n`` complex
  amplitudes indexed by ``sum(b_k * 2**(n-1-k))``, i.e. the first label is
  the most significant bit.  Bit 0 is spin-up along z (``|z+>``), bit 1 is
  spin-down (``|z->``).
* States are immutable values; all operations are pure functions.  States
  that differ only by a global phase are physically identical, and
  :func:`states_equal` compares them accordingly.
* ``ATOL_EXACT`` guards algebraic identities, ``ATOL_NUMERIC`` guards
  accumulated numerics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

ATOL_EXACT = 1e-12
ATOL_NUMERIC = 1e-10
MAX_QUBITS = 8

#: probability below which a projective outcome is treated as impossible
PROB_FLOOR = 1e-14

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

X_DIR = np.array([1.0, 0.0, 0.0])
Y_DIR = np.array([0.0, 1.0, 0.0])
Z_DIR = np.array([0.0, 0.0, 1.0])


class StateError(ValueError):
    """Invalid state, basis, or operation input."""


class LabelError(StateError):
    """Qubit labels missing, duplicated, or mismatched."""


class ImpossibleOutcomeError(StateError):
    """Requested a projective outcome whose probability is (numerically) zero."""


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _unit_vector(direction) -> np.ndarray:
    vec = np.asarray(direction, dtype=float).reshape(3)
    if not np.all(np.isfinite(vec)):
        raise StateError("direction has non-finite components")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > ATOL_EXACT:
        raise StateError(f"direction must be a unit vector, |n| = {norm}")
    return _frozen_array(vec, float)


@dataclass(frozen=True)
class PureState:
    """Normalized pure state over an ordered tuple of distinct qubit labels."""

    labels: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        labels = tuple(int(l) for l in self.labels)
        if len(set(labels)) != len(labels):
            raise LabelError(f"duplicate qubit labels: {labels}")
        n = len(labels)
        if not 1 <= n <= MAX_QUBITS:
            raise StateError(f"supported qubit count is 1..{MAX_QUBITS}, got {n}")
        amps = np.ascontiguousarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != 2**n:
            raise StateError(f"expected {2**n} amplitudes for {n} qubits, got {amps.size}")
        if not np.all(np.isfinite(amps.view(float))):
            raise StateError("amplitudes contain NaN/Inf")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > ATOL_EXACT:
            raise StateError(f"state is not normalized: |amps| = {norm}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amps", _frozen_array(amps, complex))

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def axis_of(self, label: int) -> int:
        """Tensor axis of `label` (0 = most significant bit)."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"label {label} not in state over {self.labels}") from None

    def as_tensor(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.n_qubits)


@dataclass(frozen=True)
class Observable1Q:
    """Spin observable n.sigma for a Bloch direction n."""

    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "direction", _unit_vector(self.direction))

    @property
    def matrix(self) -> np.ndarray:
        nx, ny, nz = self.direction
        return nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z


@dataclass(frozen=True)
class ProjectiveBasis:
    """Complete orthonormal basis on a subset of qubits."""

    target_labels: tuple[int, ...]
    states: tuple[PureState, ...]

    def __post_init__(self):
        labels = tuple(int(l) for l in self.target_labels)
        states = tuple(self.states)
        m = len(labels)
        if len(states) != 2**m:
            raise StateError(f"basis on {m} qubits needs {2**m} states, got {len(states)}")
        for s in states:
            if s.labels != labels:
                raise LabelError(f"basis state labels {s.labels} != target {labels}")
        mat = np.array([s.amps for s in states])
        gram = mat @ mat.conj().T
        if np.max(np.abs(gram - np.eye(2**m))) > ATOL_EXACT:
            raise StateError("basis states are not orthonormal")
        completeness = mat.conj().T @ mat  # = sum_k |b_k><b_k|
        if np.max(np.abs(completeness - np.eye(2**m))) > ATOL_EXACT:
            raise StateError("basis is not complete")
        object.__setattr__(self, "target_labels", labels)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator over labeled qubits."""

    labels: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        labels = tuple(int(l) for l in self.labels)
        if len(set(labels)) != len(labels) or not labels:
            raise LabelError(f"invalid label set: {labels}")
        dim = 2 ** len(labels)
        mat = np.ascontiguousarray(self.matrix, dtype=complex).reshape(dim, dim)
        if not np.all(np.isfinite(mat.view(float))):
            raise StateError("density matrix contains NaN/Inf")
        if np.max(np.abs(mat - mat.conj().T)) > ATOL_EXACT:
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > ATOL_EXACT:
            raise StateError(f"trace != 1: {np.trace(mat)}")
        if np.min(np.linalg.eigvalsh(mat)) < -1e-10:
            raise StateError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", _frozen_array(mat, complex))

    def bloch_vector(self) -> np.ndarray:
        """Bloch vector (r_x, r_y, r_z); single-qubit matrices only."""
        if len(self.labels) != 1:
            raise StateError("Bloch vector is defined for a single qubit")
        return np.array([float(np.trace(self.matrix @ s).real) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])


def ket(bits: str | Sequence[int], labels: Iterable[int]) -> PureState:
    """Computational (z) basis state, e.g. ket("01", labels=(0, 1))."""
    bit_values = [int(b) for b in bits]
    labels = tuple(labels)
    if len(bit_values) != len(labels) or any(b not in (0, 1) for b in bit_values):
        raise StateError(f"bad bit pattern {bits!r} for labels {labels}")
    amps = np.zeros(2 ** len(labels), dtype=complex)
    index = 0
    for b in bit_values:
        index = 2 * index + b
    amps[index] = 1.0
    return PureState(labels, amps)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; labels are concatenated in order."""
    if set(a.labels) & set(b.labels):
        raise LabelError(f"overlapping labels: {set(a.labels) & set(b.labels)}")
    return PureState(a.labels + b.labels, np.kron(a.amps, b.amps))


def inner(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.labels != b.labels:
        raise LabelError(f"label mismatch: {a.labels} vs {b.labels}")
    return complex(np.vdot(a.amps, b.amps))


def states_equal(a: PureState, b: PureState, atol: float = ATOL_NUMERIC) -> bool:
    """Equality up to global phase, aligned on a's largest-magnitude amplitude."""
    if a.labels != b.labels:
        return False
    k = int(np.argmax(np.abs(a.amps)))
    if abs(b.amps[k]) < atol:
        return False
    phase = (a.amps[k] / abs(a.amps[k])) / (b.amps[k] / abs(b.amps[k]))
    return bool(np.max(np.abs(a.amps - phase * b.amps)) <= atol)


def reorder(state: PureState, labels: Iterable[int]) -> PureState:
    """The same state with its qubits listed in a different order."""
    labels = tuple(labels)
    if sorted(labels) != sorted(state.labels):
        raise LabelError(f"{labels} is not a permutation of {state.labels}")
    perm = [state.axis_of(l) for l in labels]
    return PureState(labels, state.as_tensor().transpose(perm).reshape(-1))


def apply_unitary(state: PureState, label: int, matrix: np.ndarray) -> PureState:
    """Apply a single-qubit unitary to one qubit of the state."""
    mat = np.asarray(matrix, dtype=complex).reshape(2, 2)
    if np.max(np.abs(mat @ mat.conj().T - np.eye(2))) > 1e-9:
        raise StateError("matrix is not unitary")
    axis = state.axis_of(label)
    t = np.tensordot(mat, state.as_tensor(), axes=([1], [axis]))
    t = np.moveaxis(t, 0, axis)
    return PureState(state.labels, t.reshape(-1))


def _residual_tensor(state: PureState, outcome_state: PureState) -> tuple[np.ndarray, tuple[int, ...]]:
    """Contract <outcome_state| into `state`; returns (tensor, remaining labels)."""
    positions = [state.axis_of(l) for l in outcome_state.labels]
    bra = outcome_state.as_tensor().conj()
    residual = np.tensordot(bra, state.as_tensor(), axes=(list(range(bra.ndim)), positions))
    remaining = tuple(l for l in state.labels if l not in outcome_state.labels)
    return residual, remaining


def condition_on(state: PureState, outcome_state: PureState) -> tuple[float, PureState]:
    """Probability of finding `outcome_state` on its qubits, and the
    renormalized state left on the remaining qubits."""
    if not set(outcome_state.labels) < set(state.labels):
        raise LabelError("outcome state must act on a proper subset of the qubits")
    residual, remaining = _residual_tensor(state, outcome_state)
    prob = float(np.sum(np.abs(residual) ** 2))
    if prob <= PROB_FLOOR:
        raise ImpossibleOutcomeError(f"outcome has probability {prob:.3e}")
    return prob, PureState(remaining, residual.reshape(-1) / math.sqrt(prob))


def project(state: PureState, basis: ProjectiveBasis, outcome_index: int) -> tuple[float, PureState]:
    """Born probability of `outcome_index` and the renormalized projected state
    (on all original qubits, in the original label order)."""
    if not set(basis.target_labels) <= set(state.labels):
        raise LabelError(f"basis targets {basis.target_labels} not all in {state.labels}")
    outcome = basis.states[outcome_index]
    if set(outcome.labels) == set(state.labels):
        outcome = reorder(outcome, state.labels)
        amp = inner(outcome, state)
        prob = abs(amp) ** 2
        if prob <= PROB_FLOOR:
            raise ImpossibleOutcomeError(f"outcome {outcome_index} has probability {prob:.3e}")
        return float(prob), PureState(state.labels, outcome.amps * (amp / abs(amp)))
    prob, factor = condition_on(state, outcome)
    return prob, reorder(tensor(outcome, factor), state.labels)


def outcome_probabilities(state: PureState, basis: ProjectiveBasis) -> np.ndarray:
    """Born probabilities of every outcome of `basis`; sums to 1."""
    dist = born_distribution(state, [basis])
    return np.array([dist[(k,)] for k in range(len(basis))])


def born_distribution(state: PureState, bases: Sequence[ProjectiveBasis]) -> dict[tuple[int, ...], float]:
    """Joint outcome distribution for simultaneous measurements on disjoint
    qubit subsets.  The result is independent of the order of `bases`."""
    seen: set[int] = set()
    for basis in bases:
        targets = set(basis.target_labels)
        if targets & seen:
            raise LabelError(f"bases overlap on {targets & seen}")
        if not targets <= set(state.labels):
            raise LabelError(f"basis targets {basis.target_labels} not all in {state.labels}")
        seen |= targets
    dist: dict[tuple[int, ...], float] = {}
    for combo in product(*(range(len(b)) for b in bases)):
        t = state.as_tensor()
        labels = list(state.labels)
        for basis, k in zip(bases, combo):
            positions = [labels.index(l) for l in basis.target_labels]
            bra = basis.states[k].as_tensor().conj()
            t = np.tensordot(bra, t, axes=(list(range(bra.ndim)), positions))
            labels = [l for l in labels if l not in basis.target_labels]
        dist[combo] = float(np.sum(np.abs(t) ** 2))
    total = sum(dist.values())
    if abs(total - 1.0) > ATOL_NUMERIC:
        raise StateError(f"outcome probabilities sum to {total}, not 1")
    return dist


def expectation(state: PureState, observables: Sequence[tuple[int, Observable1Q | np.ndarray]]) -> float:
    """Expectation value of a tensor product of spin observables,
    one per listed qubit (identity on the rest)."""
    labels = [l for l, _ in observables]
    if len(set(labels)) != len(labels):
        raise LabelError(f"duplicate observable labels: {labels}")
    t = state.as_tensor()
    for label, obs in observables:
        if not isinstance(obs, Observable1Q):
            obs = Observable1Q(obs)
        axis = state.axis_of(label)
        t = np.moveaxis(np.tensordot(obs.matrix, t, axes=([1], [axis])), 0, axis)
    value = complex(np.vdot(state.amps, t.reshape(-1)))
    if abs(value.imag) > ATOL_NUMERIC:
        raise StateError(f"expectation has imaginary part {value.imag}")
    return value.real


def reduced_density(state: PureState, keep_labels: Iterable[int]) -> DensityMatrix:
    """Partial trace down to `keep_labels` (kept in the state's label order)."""
    keep = set(keep_labels)
    if not keep:
        raise LabelError("must keep at least one qubit")
    if not keep <= set(state.labels):
        raise LabelError(f"labels {keep - set(state.labels)} not in state")
    kept = tuple(l for l in state.labels if l in keep)
    traced = [i for i, l in enumerate(state.labels) if l not in keep]
    t = state.as_tensor()
    rho = np.tensordot(t, t.conj(), axes=(traced, traced))
    dim = 2 ** len(kept)
    return DensityMatrix(kept, rho.reshape(dim, dim))


def direction_basis(direction, label: int) -> ProjectiveBasis:
    """Eigenbasis of n.sigma on one qubit; index 0 is the +1 outcome."""
    n = _unit_vector(direction)
    theta = math.acos(min(1.0, max(-1.0, n[2])))
    phi = math.atan2(n[1], n[0])
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    plus = np.array([c, s * np.exp(1j * phi)])
    minus = np.array([-s * np.exp(-1j * phi), c])
    return ProjectiveBasis((label,), (PureState((label,), plus), PureState((label,), minus)))


def _haar_unit_vectors(rng: np.random.Generator, count: int, dim: int = 2) -> np.ndarray:
    """`count` Haar-random unit vectors in C^dim, one per row."""
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise StateError("degenerate Gaussian draw")
    return z / norms


def haar_random_qubit(rng: np.random.Generator, label: int = 0) -> PureState:
    """Single-qubit state distributed by the Haar measure."""
    return PureState((label,), _haar_unit_vectors(rng, 1)[0])


def haar_random_state(rng: np.random.Generator, labels: Iterable[int]) -> PureState:
    """Haar-random pure state over the given qubits."""
    labels = tuple(labels)
    return PureState(labels, _haar_unit_vectors(rng, 1, 2 ** len(labels))[0])


def haar_random_basis(rng: np.random.Generator, labels: Iterable[int]) -> ProjectiveBasis:
    """Haar-random orthonormal basis over the given qubits."""
    labels = tuple(labels)
    dim = 2 ** len(labels)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return ProjectiveBasis(labels, tuple(PureState(labels, q[:, k]) for k in range(dim)))
