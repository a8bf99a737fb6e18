"""States and bases of the entanglement-swapping protocol.

Two singlet pairs 0-1 and 2-3 are prepared; Victor projects qubits (1, 2)
onto a one-parameter family of orthonormal two-qubit states that
interpolates between the Bell basis and the separable z-product basis.
Projecting leaves qubits (0, 3) in the partner state of the same family
with the complementary weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qstate import (
    ATOL_EXACT,
    ProjectiveBasis,
    PureState,
    StateError,
    condition_on,
    tensor,
)

#: fixed outcome indexing, used everywhere including logs and CLI output
PSI_PLUS, PSI_MINUS, PHI_PLUS, PHI_MINUS = 0, 1, 2, 3
OUTCOME_NAMES = ("psi+", "psi-", "phi+", "phi-")

#: coefficients of the four-term decomposition of the total state
DECOMPOSITION_COEFFS = (0.5, -0.5, 0.5, -0.5)

PROTOCOL_LABELS = (0, 1, 2, 3)
VICTOR_LABELS = (1, 2)
SWAPPED_LABELS = (0, 3)


def make_singlet(label_a: int, label_b: int) -> PureState:
    """The spin singlet (|z+ z-> - |z- z+>)/sqrt(2)."""
    if label_a == label_b:
        raise StateError(f"singlet needs two distinct qubits, got {label_a} twice")
    amps = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
    return PureState((label_a, label_b), amps)


def make_total_state() -> PureState:
    """Product of the two source singlets, on qubits (0, 1, 2, 3)."""
    return tensor(make_singlet(0, 1), make_singlet(2, 3))


def _check_alpha(alpha: float) -> float:
    if isinstance(alpha, complex):
        raise StateError(f"alpha must be real, got {alpha!r}")
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise StateError(f"alpha must be in [0, 1], got {alpha!r}")
    return alpha


def beta_of(alpha: float) -> float:
    """The complementary weight, fixed to the nonnegative root of 1 - alpha^2."""
    return math.sqrt(max(0.0, 1.0 - _check_alpha(alpha) ** 2))


@dataclass(frozen=True)
class AlphaBellBasis:
    """The four orthonormal two-qubit states psi+, psi-, phi+, phi- with
    weights (alpha, beta); alpha = beta = 1/sqrt(2) is the Bell basis and
    alpha in {0, 1} the separable z-product basis."""

    alpha: float
    beta: float
    target_labels: tuple[int, ...]
    states: tuple[PureState, PureState, PureState, PureState]

    def __post_init__(self):
        if abs(self.alpha**2 + self.beta**2 - 1.0) > ATOL_EXACT:
            raise StateError("alpha^2 + beta^2 != 1")
        mat = np.array([s.amps for s in self.states])
        if np.max(np.abs(mat @ mat.conj().T - np.eye(4))) > ATOL_EXACT:
            raise StateError("basis states are not orthonormal")

    def projective(self) -> ProjectiveBasis:
        return ProjectiveBasis(self.target_labels, self.states)


def make_alpha_basis(alpha: float, labels: tuple[int, int] = VICTOR_LABELS) -> AlphaBellBasis:
    """Build the weighted Bell-type basis on a pair of qubits.

    Amplitude layout on (|z+ z+>, |z+ z->, |z- z+>, |z- z->):

    ==========  ==========================
    psi+        (0,  alpha,  beta, 0)
    psi-        (0,  beta,  -alpha, 0)
    phi+        (alpha, 0, 0,  beta)
    phi-        (beta,  0, 0, -alpha)
    ==========  ==========================
    """
    a = _check_alpha(alpha)
    b = beta_of(a)
    labels = (int(labels[0]), int(labels[1]))
    vecs = (
        np.array([0, a, b, 0], dtype=complex),
        np.array([0, b, -a, 0], dtype=complex),
        np.array([a, 0, 0, b], dtype=complex),
        np.array([b, 0, 0, -a], dtype=complex),
    )
    states = tuple(PureState(labels, v) for v in vecs)
    return AlphaBellBasis(a, b, labels, states)


@dataclass(frozen=True)
class DecompositionTerm:
    """One term of the four-term expansion of the total state:
    coefficient * state03 (x) state12."""

    coefficient: float
    state03: PureState
    state12: PureState


def swap_decomposition(alpha: float) -> list[DecompositionTerm]:
    """Expand the total state over Victor's basis with weight beta on (1, 2).

    The (0, 3) factors carry weight alpha and are obtained by projection, so
    summing coefficient * tensor(state03, state12) reproduces the total
    state exactly.  Each factor equals the corresponding alpha-basis state
    up to a global sign; outcome k occurs with probability 1/4 for any alpha.
    """
    a = _check_alpha(alpha)
    total = make_total_state()
    basis12 = make_alpha_basis(beta_of(a), VICTOR_LABELS)
    terms = []
    for k, coeff in enumerate(DECOMPOSITION_COEFFS):
        prob, factor = condition_on(total, basis12.states[k])
        if abs(prob - 0.25) > ATOL_EXACT:
            raise StateError(f"outcome {k} has probability {prob}, expected 1/4")
        state03 = PureState(factor.labels, factor.amps * (math.sqrt(prob) / coeff))
        terms.append(DecompositionTerm(coeff, state03, basis12.states[k]))
    return terms


@lru_cache(maxsize=None)
def _conditional_cached(victor_alpha: float, outcome_index: int) -> PureState:
    basis = make_alpha_basis(victor_alpha, VICTOR_LABELS)
    _, factor = condition_on(make_total_state(), basis.states[outcome_index])
    return factor


def conditional_state(victor_alpha: float, outcome_index: int) -> PureState:
    """State of qubits (0, 3) after Victor finds outcome `outcome_index`
    measuring (1, 2) in the basis with weight `victor_alpha`.

    Equals the same-index basis state with weights swapped (alpha <-> beta),
    up to a global phase.
    """
    if outcome_index not in (0, 1, 2, 3):
        raise StateError(f"outcome index must be 0..3, got {outcome_index}")
    return _conditional_cached(_check_alpha(victor_alpha), outcome_index)
