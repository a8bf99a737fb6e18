"""Classical teleportation fidelity of the swapping measurement.

Victor's two-qubit projection induces an effective measurement on particle 1
alone (particle 2 arrives as half of a singlet, i.e. maximally mixed).
Estimating the input as the normalized effective element and resending it
achieves the average fidelity 2/3 * (1 - alpha^2 * beta^2), which is 1/2 for
the Bell measurement and reaches the classical limit 2/3 only when the
measurement is a separable z-projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import rng as _rng
from .qstate import ATOL_EXACT, DensityMatrix, StateError, _frozen_array, _haar_unit_vectors
from .swapkit import _check_alpha, beta_of, make_alpha_basis

#: label of the teleported input particle
INPUT_LABEL = 1


@dataclass(frozen=True)
class EffectiveElement:
    """Positive operator on particle 1 implementing one of Victor's outcomes."""

    outcome_index: int
    operator: np.ndarray

    def __post_init__(self):
        op = np.asarray(self.operator, dtype=complex).reshape(2, 2)
        if np.max(np.abs(op - op.conj().T)) > ATOL_EXACT:
            raise StateError("effective element is not Hermitian")
        if np.min(np.linalg.eigvalsh(op)) < -1e-12:
            raise StateError("effective element is not positive semidefinite")
        object.__setattr__(self, "operator", _frozen_array(op, complex))


@dataclass(frozen=True)
class FidelityResult:
    alpha: float
    f_analytic: float
    f_montecarlo: float
    stderr: float
    samples: int

    def __post_init__(self):
        for name in ("f_analytic", "f_montecarlo"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0 + 1e-12:
                raise StateError(f"{name} out of [0, 1]: {v}")


def effective_elements(alpha: float) -> list[EffectiveElement]:
    """Effective measurement elements E_k = Tr_2[|b_k><b_k| (I (x) I/2)].

    Diagonal in z with entries {alpha^2/2, beta^2/2}; they sum to identity.
    """
    basis = make_alpha_basis(_check_alpha(alpha))
    elements = []
    for k, state in enumerate(basis.states):
        m = state.amps.reshape(2, 2)
        elements.append(EffectiveElement(k, 0.5 * (m @ m.conj().T)))
    total = sum(e.operator for e in elements)
    if np.max(np.abs(total - np.eye(2))) > ATOL_EXACT:
        raise StateError("effective elements do not sum to identity")
    return elements


def estimate_state(element: EffectiveElement) -> DensityMatrix:
    """State estimate broadcast on outcome k: the normalized effective element."""
    tr = float(np.trace(element.operator).real)
    if tr <= 0.0:
        raise StateError("cannot normalize a zero-trace element")
    return DensityMatrix((INPUT_LABEL,), element.operator / tr)


def _estimates(elements: list[EffectiveElement], method: str) -> list[np.ndarray]:
    if method == "element":
        return [estimate_state(e).matrix for e in elements]
    if method == "max-eigenvector":
        # estimate with the likeliest pure state instead; kept for comparison,
        # averages to 1/3 + max(alpha^2, beta^2)/3
        guesses = []
        for e in elements:
            vals, vecs = np.linalg.eigh(e.operator)
            top = vecs[:, int(np.argmax(vals))]
            guesses.append(np.outer(top, top.conj()))
        return guesses
    raise ValueError(f"unknown estimator {method!r}")


def analytic_fidelity(alpha: float, method: str = "element") -> float:
    """Haar-averaged estimation fidelity, evaluated in closed form.

    Uses the qubit Haar moment
    integral of <psi|A|psi><psi|B|psi> = (trA trB + tr(AB)) / 6
    on the effective elements and their broadcast estimates; for the
    normalized-element estimator this equals 2/3 * (1 - alpha^2 * beta^2).
    """
    alpha = _check_alpha(alpha)
    elements = effective_elements(alpha)
    estimates = _estimates(elements, method)
    value = sum(
        (np.trace(e.operator).real * np.trace(r).real + np.trace(e.operator @ r).real) / 6.0
        for e, r in zip(elements, estimates)
    )
    if method == "element":
        closed_form = 2.0 / 3.0 * (1.0 - (alpha * beta_of(alpha)) ** 2)
        if abs(value - closed_form) > 1e-12:
            raise StateError("analytic fidelity disagrees with its closed form")
    return float(value)


def average_fidelity(alpha: float, samples: int, seed: int, method: str = "element") -> FidelityResult:
    """Average overlap between a Haar-random input and its broadcast estimate.

    The analytic value comes from :func:`analytic_fidelity`; the Monte-Carlo
    value samples the same integral, and the two agree within 3 stderr.
    """
    alpha = _check_alpha(alpha)
    if samples < 1:
        raise StateError(f"samples must be >= 1, got {samples}")
    elements = effective_elements(alpha)
    estimates = _estimates(elements, method)
    f_analytic = analytic_fidelity(alpha, method)

    psi = _haar_unit_vectors(_rng.stream(seed, "fidelity"), samples)
    per_sample = np.zeros(samples)
    for e, r in zip(elements, estimates):
        p_k = np.einsum("ni,ij,nj->n", psi.conj(), e.operator, psi).real
        overlap = np.einsum("ni,ij,nj->n", psi.conj(), r, psi).real
        per_sample += p_k * overlap
    f_mc = float(per_sample.mean())
    stderr = float(per_sample.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return FidelityResult(alpha, float(f_analytic), f_mc, stderr, samples)


class FidelityBound(NamedTuple):
    i_ind_bound: float
    f_bound: float


def fidelity_bound_from_chsh(s: float) -> FidelityBound:
    """Cap on input information and estimation fidelity implied by an
    observed Bell parameter: i_ind <= 2 - S^2/4, f <= 1/2 + i_ind/6."""
    if not 2.0 <= s <= 2.0 * math.sqrt(2.0) + 1e-9:
        raise StateError(f"Bell parameter {s} outside [2, 2*sqrt(2)]")
    i_ind_bound = 2.0 - s * s / 4.0
    return FidelityBound(i_ind_bound, 0.5 + i_ind_bound / 6.0)
