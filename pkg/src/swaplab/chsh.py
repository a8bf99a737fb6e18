"""CHSH correlation functions and Bell-parameter maximization.

S = |E(a,b) + E(a,b') + E(a',b) - E(a',b')| with the local-realistic bound 2
and the quantum maximum 2*sqrt(2).  For a two-qubit state the maximum over
settings is 2*sqrt(t1^2 + t2^2) in terms of the two largest singular values
of the correlation tensor, which also ties the Bell parameter to the
information in correlations via i_corr = S^2 / 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import rng as _rng
from .infometrics import correlation_tensor
from .qstate import PureState, StateError, _unit_vector, expectation

TSIRELSON = 2.0 * math.sqrt(2.0)

#: seed of the deterministic restart schedule used by the numeric optimizer
_OPTIMIZER_SEED = 0x5B311


@dataclass(frozen=True)
class Settings:
    """Two measurement directions per particle: (a, a') and (b, b')."""

    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            object.__setattr__(self, name, _unit_vector(getattr(self, name)))


@dataclass(frozen=True)
class ChshResult:
    settings: Settings
    s_value: float

    def __post_init__(self):
        if not -1e-12 <= self.s_value <= TSIRELSON + 1e-9:
            raise StateError(f"Bell parameter {self.s_value} outside [0, 2*sqrt(2)]")


def chsh_value(state: PureState, settings: Settings) -> ChshResult:
    """Bell parameter of `state` for the given settings."""
    if state.n_qubits != 2:
        raise StateError(f"need a two-qubit state, got {state.n_qubits} qubits")
    la, lb = state.labels

    def corr(na, nb):
        return expectation(state, [(la, na), (lb, nb)])

    s = abs(
        corr(settings.a, settings.b)
        + corr(settings.a, settings.b_prime)
        + corr(settings.a_prime, settings.b)
        - corr(settings.a_prime, settings.b_prime)
    )
    return ChshResult(settings, float(s))


def _spherical(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    )


def _partner_settings(tensor_t: np.ndarray, a: np.ndarray, ap: np.ndarray):
    """Optimal (b, b') for fixed (a, a'): align with T^T(a +/- a')."""
    u = tensor_t @ (a + ap)
    w = tensor_t @ (a - ap)
    b = u / np.linalg.norm(u) if np.linalg.norm(u) > 1e-14 else np.array([0.0, 0.0, 1.0])
    bp = w / np.linalg.norm(w) if np.linalg.norm(w) > 1e-14 else np.array([1.0, 0.0, 0.0])
    return b, bp


def _chsh_max_numeric(state: PureState, n_starts: int = 8) -> ChshResult:
    tensor_t = correlation_tensor(state).T

    def negated(angles):
        a = _spherical(angles[0], angles[1])
        ap = _spherical(angles[2], angles[3])
        return -(np.linalg.norm(tensor_t @ (a + ap)) + np.linalg.norm(tensor_t @ (a - ap)))

    gen = _rng.stream(_OPTIMIZER_SEED, "chsh-starts")
    starts = [
        np.array([0.0, 0.0, math.pi / 2, 0.0]),  # (z, x)
        np.array([math.pi / 2, 0.0, math.pi / 2, math.pi / 2]),  # (x, y)
        np.array([0.0, 0.0, math.pi / 2, math.pi / 2]),  # (z, y)
    ]
    while len(starts) < n_starts:
        starts.append(gen.uniform(0.0, math.pi, size=4) * np.array([1, 2, 1, 2]))
    starts.sort(key=negated)
    best = None
    for start in starts:
        res = minimize(
            negated,
            start,
            method="Nelder-Mead",
            options={"fatol": 1e-11, "xatol": 1e-8, "maxiter": 3000, "maxfev": 5000},
        )
        if best is None or res.fun < best.fun:
            best = res
    a = _spherical(best.x[0], best.x[1])
    ap = _spherical(best.x[2], best.x[3])
    b, bp = _partner_settings(tensor_t, a, ap)
    # final value from the four expectation values, not the reduced objective
    return chsh_value(state, Settings(a, ap, b, bp))


def chsh_max(state: PureState, method: str = "analytic") -> ChshResult:
    """Maximal Bell parameter of `state` over all settings.

    analytic: 2*sqrt(t1^2 + t2^2) from the correlation tensor, settings
    constructed from the singular vectors.  numeric: multi-start search over
    settings.  The methods agree within 1e-6.
    """
    if method == "numeric":
        return _chsh_max_numeric(state)
    if method != "analytic":
        raise ValueError(f"unknown method {method!r}")
    tensor = correlation_tensor(state)
    u, s, vh = np.linalg.svd(tensor)
    t1, t2 = float(s[0]), float(s[1])
    gamma = math.atan2(t2, t1)
    b = math.cos(gamma) * vh[0] + math.sin(gamma) * vh[1]
    bp = math.cos(gamma) * vh[0] - math.sin(gamma) * vh[1]
    settings = Settings(u[:, 0], u[:, 1], b, bp)
    return ChshResult(settings, 2.0 * math.hypot(t1, t2))


def i_corr_from_s(s: float) -> float:
    """Information in correlations implied by a Bell parameter: S^2 / 4."""
    if not 0.0 <= s <= TSIRELSON + 1e-9:
        raise StateError(f"Bell parameter {s} outside [0, 2*sqrt(2)]")
    return s * s / 4.0
