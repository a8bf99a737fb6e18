"""Information measures for joint and individual spin properties.

The knowledge carried by a joint measurement along a pair of directions is
the squared bias (p_equal - p_opposite)^2; summing the z-pair and x-pair
values and maximizing over local frames gives the information contained in
correlations, which is at most 1 for separable states and 2 for maximally
entangled ones.  A single particle's information is the squared bias of its
outcomes along a direction.  The two quantities trade off exactly in the
swapping protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .qstate import (
    ATOL_NUMERIC,
    DensityMatrix,
    PureState,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    StateError,
    X_DIR,
    Z_DIR,
    _unit_vector,
    born_distribution,
    direction_basis,
    project,
    reduced_density,
)
from .swapkit import PSI_MINUS, conditional_state, make_alpha_basis, make_total_state

_PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class CorrelationProbs:
    """Probabilities that two spin outcomes along a direction pair agree/disagree."""

    p_plus: float
    p_minus: float
    axis_pair: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        for p in (self.p_plus, self.p_minus):
            if not -1e-12 <= p <= 1.0 + 1e-12:
                raise StateError(f"probability out of range: {p}")
        if abs(self.p_plus + self.p_minus - 1.0) > ATOL_NUMERIC:
            raise StateError(f"p_plus + p_minus = {self.p_plus + self.p_minus} != 1")
        object.__setattr__(self, "axis_pair", tuple(_unit_vector(d) for d in self.axis_pair))


@dataclass(frozen=True)
class LocalFrames:
    """A (z', x') measurement frame for each of two particles."""

    a_z: np.ndarray
    a_x: np.ndarray
    b_z: np.ndarray
    b_x: np.ndarray

    def __post_init__(self):
        for name in ("a_z", "a_x", "b_z", "b_x"):
            object.__setattr__(self, name, _unit_vector(getattr(self, name)))
        if abs(np.dot(self.a_z, self.a_x)) > 1e-9 or abs(np.dot(self.b_z, self.b_x)) > 1e-9:
            raise StateError("frame axes are not orthogonal")


@dataclass(frozen=True)
class InfoMeasures:
    """Joint-information summary of a two-qubit state.

    i_zz and i_xx are taken in the default (z, x) frame; i_corr is the
    frame-maximized total, so i_corr >= i_zz + i_xx always holds.
    """

    i_zz: float
    i_xx: float
    i_corr: float
    frame: LocalFrames

    def __post_init__(self):
        for name in ("i_zz", "i_xx"):
            v = getattr(self, name)
            if not -1e-12 <= v <= 1.0 + 1e-9:
                raise StateError(f"{name} out of [0, 1]: {v}")
        if not -1e-12 <= self.i_corr <= 2.0 + 1e-9:
            raise StateError(f"i_corr out of [0, 2]: {self.i_corr}")
        if self.i_corr + 1e-9 < self.i_zz + self.i_xx:
            raise StateError("maximized i_corr fell below the default-frame value")


@dataclass(frozen=True)
class IndividualInfo:
    """Squared outcome bias of a single particle along a direction."""

    i_ind: float
    direction: np.ndarray

    def __post_init__(self):
        if not -1e-12 <= self.i_ind <= 1.0 + 1e-9:
            raise StateError(f"i_ind out of [0, 1]: {self.i_ind}")
        object.__setattr__(self, "direction", _unit_vector(self.direction))


def correlation_probs(state: PureState, dir_a, dir_b) -> CorrelationProbs:
    """Born probabilities for equal/opposite outcomes of spin measurements
    along dir_a (first qubit) and dir_b (second qubit)."""
    if state.n_qubits != 2:
        raise StateError(f"need a two-qubit state, got {state.n_qubits} qubits")
    la, lb = state.labels
    dist = born_distribution(state, [direction_basis(dir_a, la), direction_basis(dir_b, lb)])
    p_plus = dist[(0, 0)] + dist[(1, 1)]
    p_minus = dist[(0, 1)] + dist[(1, 0)]
    return CorrelationProbs(p_plus, p_minus, (dir_a, dir_b))


def info_measure(probs: CorrelationProbs) -> float:
    """(p_plus - p_minus)^2, in [0, 1]."""
    return (probs.p_plus - probs.p_minus) ** 2


def info_chain(i01: float, i12: float, i23: float) -> float:
    """Combine the three pair measures along one axis into the 0-3 measure.

    Valid for the protocol's states, where each link has either perfect or
    entirely absent correlation structure; validity against direct
    simulation is checked in tests rather than assumed.
    """
    for v in (i01, i12, i23):
        if not -1e-12 <= v <= 1.0 + 1e-9:
            raise StateError(f"information measure out of [0, 1]: {v}")
    return i01 * i12 * i23


def correlation_tensor(state: PureState) -> np.ndarray:
    """3x3 tensor of pairwise spin expectations, T[i, j] = <sigma_i (x) sigma_j>."""
    if state.n_qubits != 2:
        raise StateError(f"need a two-qubit state, got {state.n_qubits} qubits")
    rho = np.outer(state.amps, state.amps.conj())
    return np.array(
        [[float(np.trace(rho @ np.kron(si, sj)).real) for sj in _PAULIS] for si in _PAULIS]
    )


def _frame_axes(theta: float, phi: float, psi: float) -> tuple[np.ndarray, np.ndarray]:
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    z_axis = np.array([st * cp, st * sp, ct])
    e1 = np.array([ct * cp, ct * sp, -st])
    e2 = np.array([-sp, cp, 0.0])
    x_axis = math.cos(psi) * e1 + math.sin(psi) * e2
    return z_axis, x_axis


# coarse per-particle frame grid: z'-direction angles plus two x'-roll values
_GRID_ANGLES = np.array(
    [
        (theta, phi, psi)
        for theta in (math.pi / 4, math.pi / 2, 3 * math.pi / 4)
        for phi in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)
        for psi in (0.0, math.pi / 4)
    ]
    + [(0.0, 0.0, 0.0)]  # canonical (z, x)
)
_GRID_Z = np.array([_frame_axes(*row)[0] for row in _GRID_ANGLES])
_GRID_X = np.array([_frame_axes(*row)[1] for row in _GRID_ANGLES])


def _maximize_over_frames(tensor: np.ndarray, n_refine: int = 5) -> tuple[np.ndarray, float]:
    """Score the coarse frame grid, then simplex-refine the best candidates."""
    t00, t01, t02, t10, t11, t12, t20, t21, t22 = (float(v) for v in tensor.ravel())

    def negated(angles):
        sta, cta = math.sin(angles[0]), math.cos(angles[0])
        spa, cpa = math.sin(angles[1]), math.cos(angles[1])
        ssa, csa = math.sin(angles[2]), math.cos(angles[2])
        stb, ctb = math.sin(angles[3]), math.cos(angles[3])
        spb, cpb = math.sin(angles[4]), math.cos(angles[4])
        ssb, csb = math.sin(angles[5]), math.cos(angles[5])
        az = (sta * cpa, sta * spa, cta)
        ax = (csa * cta * cpa - ssa * spa, csa * cta * spa + ssa * cpa, -csa * sta)
        bz = (stb * cpb, stb * spb, ctb)
        bx = (csb * ctb * cpb - ssb * spb, csb * ctb * spb + ssb * cpb, -csb * stb)
        zz = (
            az[0] * (t00 * bz[0] + t01 * bz[1] + t02 * bz[2])
            + az[1] * (t10 * bz[0] + t11 * bz[1] + t12 * bz[2])
            + az[2] * (t20 * bz[0] + t21 * bz[1] + t22 * bz[2])
        )
        xx = (
            ax[0] * (t00 * bx[0] + t01 * bx[1] + t02 * bx[2])
            + ax[1] * (t10 * bx[0] + t11 * bx[1] + t12 * bx[2])
            + ax[2] * (t20 * bx[0] + t21 * bx[1] + t22 * bx[2])
        )
        return -(zz * zz + xx * xx)

    scores = (_GRID_Z @ tensor @ _GRID_Z.T) ** 2 + (_GRID_X @ tensor @ _GRID_X.T) ** 2
    flat = np.argsort(scores, axis=None)[::-1][:n_refine]
    best_angles, best_val = None, -1.0
    for idx in flat:
        ia, ib = np.unravel_index(idx, scores.shape)
        start = np.concatenate([_GRID_ANGLES[ia], _GRID_ANGLES[ib]])
        res = minimize(
            negated,
            start,
            method="Nelder-Mead",
            options={"fatol": 1e-11, "xatol": 1e-7, "maxiter": 4000, "maxfev": 6000},
        )
        if -res.fun > best_val:
            best_val, best_angles = -res.fun, res.x
    return best_angles, best_val


def i_corr(state: PureState, method: str = "analytic") -> InfoMeasures:
    """Information in correlations, maximized over local measurement frames.

    analytic: sum of the two largest squared singular values of the
    correlation tensor, with the frame read off the singular vectors.
    numeric: direct search over frames; the returned value is re-evaluated
    from Born probabilities at the optimum.  The two agree within 1e-6.
    """
    i_zz = info_measure(correlation_probs(state, Z_DIR, Z_DIR))
    i_xx = info_measure(correlation_probs(state, X_DIR, X_DIR))
    tensor = correlation_tensor(state)
    if method == "analytic":
        u, s, vh = np.linalg.svd(tensor)
        value = float(s[0] ** 2 + s[1] ** 2)
        frame = LocalFrames(u[:, 0], u[:, 1], vh[0], vh[1])
    elif method == "numeric":
        angles, _ = _maximize_over_frames(tensor)
        az, ax = _frame_axes(*angles[:3])
        bz, bx = _frame_axes(*angles[3:])
        frame = LocalFrames(az, ax, bz, bx)
        value = info_measure(correlation_probs(state, frame.a_z, frame.b_z)) + info_measure(
            correlation_probs(state, frame.a_x, frame.b_x)
        )
    else:
        raise ValueError(f"unknown method {method!r}")
    return InfoMeasures(i_zz, i_xx, value, frame)


def i_ind(marginal: DensityMatrix, direction=None) -> IndividualInfo:
    """Squared bias of a single particle's outcomes along `direction`.

    With no direction given, measures along the state's Bloch vector, which
    maximizes the bias (falls back to z for a maximally mixed marginal).
    """
    if len(marginal.labels) != 1:
        raise StateError("i_ind needs a single-qubit marginal")
    bloch = marginal.bloch_vector()
    if direction is None:
        length = float(np.linalg.norm(bloch))
        direction = bloch / length if length > 1e-12 else Z_DIR
    n = _unit_vector(direction)
    bias = float(n @ bloch)
    return IndividualInfo(min(bias**2, 1.0), n)


class ComplementarityResult(NamedTuple):
    i_ind: float
    i_corr: float
    total: float


def complementarity(alpha: float) -> ComplementarityResult:
    """Individual information of particle 1 plus joint information of the
    swapped pair (0, 3), both obtained from projective simulation of the
    protocol with Victor outcome psi-.  The total is identically 2."""
    basis = make_alpha_basis(alpha).projective()
    _, post = project(make_total_state(), basis, PSI_MINUS)
    ind = i_ind(reduced_density(post, (1,))).i_ind
    corr = i_corr(conditional_state(alpha, PSI_MINUS), method="analytic").i_corr
    return ComplementarityResult(ind, corr, ind + corr)
