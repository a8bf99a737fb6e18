import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from swaplab import rng
from swaplab.qstate import (
    DensityMatrix,
    ImpossibleOutcomeError,
    LabelError,
    Observable1Q,
    ProjectiveBasis,
    PureState,
    StateError,
    X_DIR,
    Y_DIR,
    Z_DIR,
    _haar_unit_vectors,
    apply_unitary,
    born_distribution,
    condition_on,
    direction_basis,
    expectation,
    haar_random_qubit,
    haar_random_state,
    inner,
    ket,
    outcome_probabilities,
    project,
    reduced_density,
    reorder,
    states_equal,
    tensor,
)
from swaplab.swapkit import make_alpha_basis, make_singlet, make_total_state

SQ2 = 1.0 / math.sqrt(2.0)

# hand expansion of the two-singlet product: +1/2 |0101>, -1/2 |0110>,
# -1/2 |1001>, +1/2 |1010>  (bit order q0 q1 q2 q3, |z+> = 0)
TOTAL_STATE_AMPS = {5: 0.5, 6: -0.5, 9: -0.5, 10: 0.5}


def x_plus(label=0):
    return PureState((label,), np.array([SQ2, SQ2]))


class TestPureState:
    def test_index_convention(self):
        state = ket("01", labels=(0, 1))
        assert_allclose(state.amps, [0, 1, 0, 0])
        assert ket("10", labels=(0, 1)).amps[2] == 1

    def test_rejects_unnormalized(self):
        with pytest.raises(StateError):
            PureState((0,), np.array([1.0, 1.0]))

    def test_rejects_duplicate_labels(self):
        with pytest.raises(LabelError):
            PureState((1, 1), np.array([1, 0, 0, 0], dtype=complex))

    def test_rejects_nonfinite(self):
        with pytest.raises(StateError):
            PureState((0,), np.array([np.nan, 0.0]))

    def test_amps_are_immutable(self):
        state = ket("0", labels=(0,))
        with pytest.raises(ValueError):
            state.amps[0] = 0.0


class TestTensor:
    def test_product_basis_state(self):
        out = tensor(ket("0", (0,)), ket("0", (1,)))
        assert out.labels == (0, 1)
        assert_allclose(out.amps, [1, 0, 0, 0])

    def test_two_singlets(self):
        out = tensor(make_singlet(0, 1), make_singlet(2, 3))
        nonzero = {i: out.amps[i].real for i in range(16) if abs(out.amps[i]) > 1e-12}
        assert nonzero.keys() == TOTAL_STATE_AMPS.keys()
        for i, expected in TOTAL_STATE_AMPS.items():
            assert_allclose(out.amps[i], expected, atol=1e-15)

    def test_shared_label_rejected(self):
        with pytest.raises(LabelError):
            tensor(make_singlet(0, 1), make_singlet(1, 2))

    def test_norm_preserved(self):
        gen = rng.stream(5, "tensor")
        for _ in range(10):
            out = tensor(haar_random_qubit(gen, 0), haar_random_state(gen, (1, 2)))
            assert abs(np.linalg.norm(out.amps) - 1.0) < 1e-12


class TestInner:
    def test_same_state(self):
        assert inner(ket("0", (0,)), ket("0", (0,))) == 1

    def test_z_with_x(self):
        assert_allclose(inner(ket("0", (0,)), x_plus()), SQ2, atol=1e-15)

    @pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, SQ2, 0.9, 1.0])
    def test_alpha_basis_orthogonal(self, alpha):
        basis = make_alpha_basis(alpha)
        # direct expansion: <psi-|psi+> = beta*alpha - alpha*beta = 0
        assert abs(inner(basis.states[1], basis.states[0])) < 1e-15

    def test_conjugate_linearity(self):
        gen = rng.stream(6, "inner")
        a, b = haar_random_state(gen, (0, 1)), haar_random_state(gen, (0, 1))
        assert_allclose(inner(a, b), np.conj(inner(b, a)), atol=1e-14)

    def test_label_mismatch(self):
        with pytest.raises(LabelError):
            inner(ket("0", (0,)), ket("0", (1,)))


class TestProject:
    def test_bell_outcome_on_total_state(self):
        total = make_total_state()
        bell = make_alpha_basis(SQ2, (1, 2)).projective()
        prob, post = project(total, bell, 1)  # psi- outcome
        assert_allclose(prob, 0.25, atol=1e-14)
        assert post.labels == (0, 1, 2, 3)
        expected = reorder(tensor(bell.states[1], make_singlet(0, 3)), (0, 1, 2, 3))
        assert states_equal(post, expected, atol=1e-12)

    def test_impossible_outcome(self):
        state = tensor(ket("0", (0,)), ket("0", (1,)))
        zbasis = direction_basis(Z_DIR, 1)
        with pytest.raises(ImpossibleOutcomeError):
            project(state, zbasis, 1)

    def test_alpha_basis_probability_quarter(self):
        total = make_total_state()
        basis = make_alpha_basis(0.5, (1, 2)).projective()  # alpha^2 = 0.25
        prob, _ = project(total, basis, 1)
        assert_allclose(prob, 0.25, atol=1e-14)

    def test_probabilities_sum_to_one(self):
        gen = rng.stream(7, "project")
        for _ in range(5):
            state = haar_random_state(gen, (0, 1, 2))
            basis = make_alpha_basis(gen.uniform(0, 1), (0, 2)).projective()
            assert_allclose(outcome_probabilities(state, basis).sum(), 1.0, atol=1e-10)

    def test_post_state_normalized(self):
        total = make_total_state()
        basis = make_alpha_basis(0.3, (1, 2)).projective()
        for k in range(4):
            _, post = project(total, basis, k)
            assert abs(np.linalg.norm(post.amps) - 1.0) < 1e-12

    def test_full_cover_basis(self):
        state = haar_random_state(rng.stream(9, "full-cover"), (0, 1))
        basis = make_alpha_basis(0.3, (0, 1)).projective()
        probs = []
        for k in range(4):
            prob, post = project(state, basis, k)
            probs.append(prob)
            assert states_equal(post, basis.states[k], atol=1e-12)
        assert_allclose(sum(probs), 1.0, atol=1e-12)

    def test_full_cover_basis_reordered_labels(self):
        state = haar_random_state(rng.stream(10, "full-cover-perm"), (0, 1))
        basis = make_alpha_basis(0.3, (1, 0)).projective()
        prob, post = project(state, basis, 2)
        assert post.labels == (0, 1)
        assert_allclose(prob, abs(inner(reorder(basis.states[2], (0, 1)), state)) ** 2, atol=1e-14)


class TestBornDistribution:
    def test_singlet_zz(self):
        dist = born_distribution(
            make_singlet(0, 1), [direction_basis(Z_DIR, 0), direction_basis(Z_DIR, 1)]
        )
        assert_allclose(dist[(0, 1)], 0.5, atol=1e-14)
        assert_allclose(dist[(1, 0)], 0.5, atol=1e-14)
        assert_allclose(dist[(0, 0)], 0.0, atol=1e-14)
        assert_allclose(dist[(1, 1)], 0.0, atol=1e-14)

    def test_total_state_with_victor_bell(self):
        total = make_total_state()
        bases = [
            direction_basis(Z_DIR, 0),
            direction_basis(Z_DIR, 3),
            make_alpha_basis(SQ2, (1, 2)).projective(),
        ]
        dist = born_distribution(total, bases)
        # conditioned on psi-, qubits 0 and 3 form a singlet: no ++ component
        assert_allclose(dist[(0, 0, 1)], 0.0, atol=1e-14)
        # 1/4 (victor) x 1/2 (singlet zz anticorrelation)
        assert_allclose(dist[(0, 1, 1)], 0.125, atol=1e-14)
        assert_allclose(sum(dist.values()), 1.0, atol=1e-10)

    def test_order_independence(self):
        total = make_total_state()
        a = direction_basis(X_DIR, 0)
        b = direction_basis(Z_DIR, 3)
        v = make_alpha_basis(0.3, (1, 2)).projective()
        ref = born_distribution(total, [a, b, v])
        for perm, unscramble in [
            (([b, v, a]), lambda k: (k[2], k[0], k[1])),
            (([v, a, b]), lambda k: (k[1], k[2], k[0])),
        ]:
            other = born_distribution(total, perm)
            for key, p in other.items():
                assert abs(ref[unscramble(key)] - p) < 1e-12

    def test_overlapping_targets_rejected(self):
        total = make_total_state()
        with pytest.raises(LabelError):
            born_distribution(total, [direction_basis(Z_DIR, 0), direction_basis(X_DIR, 0)])


class TestExpectation:
    def test_singlet_zz(self):
        assert_allclose(expectation(make_singlet(0, 1), [(0, Z_DIR), (1, Z_DIR)]), -1.0, atol=1e-12)

    def test_singlet_zx(self):
        assert_allclose(expectation(make_singlet(0, 1), [(0, Z_DIR), (1, X_DIR)]), 0.0, atol=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, SQ2, 0.9, 1.0])
    def test_alpha_state_xx(self, alpha):
        state = make_alpha_basis(alpha).states[1]  # psi-
        beta = math.sqrt(1 - alpha**2)
        got = expectation(state, [(1, X_DIR), (2, X_DIR)])
        assert_allclose(got, -2 * alpha * beta, atol=1e-12)

    def test_matches_born_rule_path(self):
        # independent path: sum of (+-1 products) weighted by Born probabilities
        gen = rng.stream(8, "expectation")
        for _ in range(20):
            state = haar_random_state(gen, (0, 1))
            na = gen.standard_normal(3)
            nb = gen.standard_normal(3)
            na, nb = na / np.linalg.norm(na), nb / np.linalg.norm(nb)
            direct = expectation(state, [(0, na), (1, nb)])
            dist = born_distribution(state, [direction_basis(na, 0), direction_basis(nb, 1)])
            summed = sum((1 - 2 * ka) * (1 - 2 * kb) * p for (ka, kb), p in dist.items())
            assert abs(direct - summed) < 1e-10
            assert -1.0 - 1e-10 <= direct <= 1.0 + 1e-10

    def test_observable_validation(self):
        with pytest.raises(StateError):
            Observable1Q(np.array([1.0, 1.0, 0.0]))
        with pytest.raises(LabelError):
            expectation(make_singlet(0, 1), [(0, Z_DIR), (0, X_DIR)])


class TestReducedDensity:
    def test_singlet_marginal(self):
        dm = reduced_density(make_singlet(0, 1), {0})
        assert_allclose(dm.matrix, np.eye(2) / 2, atol=1e-14)
        assert_allclose(dm.bloch_vector(), [0, 0, 0], atol=1e-14)

    def test_product_marginal(self):
        dm = reduced_density(ket("01", (0, 1)), {0})
        assert_allclose(dm.matrix, [[1, 0], [0, 0]], atol=1e-14)

    @pytest.mark.parametrize("alpha", [0.0, 0.3, 0.5, SQ2, 1.0])
    def test_alpha_state_particle1(self, alpha):
        state = make_alpha_basis(alpha).states[1]  # psi- on (1, 2)
        beta2 = 1 - alpha**2
        dm = reduced_density(state, {1})
        assert_allclose(dm.matrix, np.diag([beta2, alpha**2]), atol=1e-14)

    def test_empty_keep_rejected(self):
        with pytest.raises(LabelError):
            reduced_density(make_singlet(0, 1), set())

    def test_density_invariants_enforced(self):
        with pytest.raises(StateError):
            DensityMatrix((0,), np.array([[0.5, 0.5], [0.4, 0.5]]))  # not Hermitian
        with pytest.raises(StateError):
            DensityMatrix((0,), np.array([[0.9, 0.0], [0.0, 0.0]]))  # trace != 1
        with pytest.raises(StateError):
            DensityMatrix((0,), np.array([[1.5, 0.0], [0.0, -0.5]]))  # negative eigenvalue


class TestHaarSampling:
    def test_moments_bulk(self):
        # Haar moments on the sampling path used by haar_random_qubit:
        # E|psi_0|^2 = 1/2 (p uniform on [0,1]), E|psi_0|^4 = 1/3
        n = 10**6
        psi = _haar_unit_vectors(rng.stream(11, "haar-moments"), n)
        p = np.abs(psi[:, 0]) ** 2
        sigma2 = math.sqrt(1.0 / 12.0) / math.sqrt(n)
        sigma4 = math.sqrt(4.0 / 45.0) / math.sqrt(n)
        assert abs(p.mean() - 0.5) < 3 * sigma2
        assert abs((p**2).mean() - 1.0 / 3.0) < 3 * sigma4

    def test_moments_public_api(self):
        n = 20_000
        gen = rng.stream(12, "haar-public")
        mean = np.mean([abs(haar_random_qubit(gen).amps[0]) ** 2 for _ in range(n)])
        assert abs(mean - 0.5) < 3 * math.sqrt(1.0 / 12.0) / math.sqrt(n)

    def test_deterministic_given_seed(self):
        a = [haar_random_qubit(rng.stream(13, "haar-det")) for _ in range(5)]
        b = [haar_random_qubit(rng.stream(13, "haar-det")) for _ in range(5)]
        for sa, sb in zip(a, b):
            assert np.array_equal(sa.amps, sb.amps)

    def test_distinct_streams_differ(self):
        a = haar_random_qubit(rng.stream(13, "haar-det", 0))
        b = haar_random_qubit(rng.stream(13, "haar-det", 1))
        assert not np.allclose(a.amps, b.amps)

    def test_label_and_norm(self):
        state = haar_random_qubit(rng.stream(14, "haar"), label=7)
        assert state.labels == (7,)
        assert abs(np.linalg.norm(state.amps) - 1.0) < 1e-12


class TestDirectionBasis:
    def test_z_and_x(self):
        zb = direction_basis(Z_DIR, 0)
        assert_allclose(zb.states[0].amps, [1, 0], atol=1e-15)
        xb = direction_basis(X_DIR, 0)
        assert_allclose(np.abs(xb.states[0].amps), [SQ2, SQ2], atol=1e-15)

    def test_eigen_relation_random_directions(self):
        gen = rng.stream(15, "dirs")
        for _ in range(20):
            n = gen.standard_normal(3)
            n /= np.linalg.norm(n)
            basis = direction_basis(n, 0)
            matrix = Observable1Q(n).matrix
            for k, value in zip(range(2), (1.0, -1.0)):
                vec = basis.states[k].amps
                assert_allclose(matrix @ vec, value * vec, atol=1e-12)

    def test_y_basis_is_complex(self):
        yb = direction_basis(Y_DIR, 0)
        assert abs(yb.states[0].amps[1].imag) > 0.1


class TestBasisValidation:
    def test_rejects_non_orthonormal(self):
        s0 = ket("0", (0,))
        with pytest.raises(StateError):
            ProjectiveBasis((0,), (s0, s0))

    def test_rejects_wrong_count(self):
        with pytest.raises(StateError):
            ProjectiveBasis((0,), (ket("0", (0,)),))

    def test_rejects_label_mismatch(self):
        with pytest.raises(LabelError):
            ProjectiveBasis((0,), (ket("0", (1,)), ket("1", (1,))))


class TestStatesEqual:
    def test_global_phase_ignored(self):
        state = haar_random_state(rng.stream(16, "phase"), (0, 1))
        rotated = PureState(state.labels, state.amps * np.exp(0.7j))
        assert states_equal(state, rotated)

    def test_different_states(self):
        assert not states_equal(ket("0", (0,)), ket("1", (0,)))

    def test_reorder_roundtrip(self):
        state = haar_random_state(rng.stream(17, "reorder"), (0, 1, 2))
        back = reorder(reorder(state, (2, 0, 1)), (0, 1, 2))
        assert np.allclose(back.amps, state.amps)


class TestApplyUnitary:
    def test_singlet_invariant_under_common_rotation(self):
        gen = rng.stream(18, "unitary")
        singlet = make_singlet(0, 1)
        for _ in range(5):
            z = gen.standard_normal((2, 2)) + 1j * gen.standard_normal((2, 2))
            q, r = np.linalg.qr(z)
            u = q * (np.diag(r) / np.abs(np.diag(r)))
            rotated = apply_unitary(apply_unitary(singlet, 0, u), 1, u)
            assert states_equal(singlet, rotated, atol=1e-10)

    def test_rejects_non_unitary(self):
        with pytest.raises(StateError):
            apply_unitary(ket("0", (0,)), 0, np.array([[1, 1], [0, 1]]))


class TestConditionOn:
    def test_factor_labels(self):
        total = make_total_state()
        outcome = make_alpha_basis(0.4, (1, 2)).states[2]
        prob, factor = condition_on(total, outcome)
        assert factor.labels == (0, 3)
        assert_allclose(prob, 0.25, atol=1e-14)

    def test_requires_proper_subset(self):
        with pytest.raises(LabelError):
            condition_on(make_singlet(0, 1), make_singlet(0, 1))
