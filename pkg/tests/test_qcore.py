import math

import numpy as np
import pytest

from conftest import random_state
from oracles import entropy_bits, jacobi_eigvalsh
from toolate import qcore
from toolate.audit import oracle_conditional_state
from toolate.experiments import chi_square
from toolate.protocol import JOINT_LAYOUT, three_port_splitter
from toolate.rng import TrialRng
from toolate.spinlab import SpinValue, singlet, spin_eigenstates

E0 = np.array([1, 0], dtype=complex)
E1 = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)


class TestTensor:
    def test_basis_product(self):
        out = qcore.tensor(E0, E1)
        assert out.shape == (4,)
        assert out[1] == 1.0 and np.count_nonzero(out) == 1

    def test_linearity(self):
        out = qcore.tensor(PLUS, E0)
        np.testing.assert_allclose(out, [1 / math.sqrt(2), 0, 1 / math.sqrt(2), 0], atol=1e-15)

    def test_norm_multiplicative(self, rand):
        for _ in range(25):
            u = random_state(rand, 3)
            v = random_state(rand, 4)
            assert abs(np.linalg.norm(qcore.tensor(u, v)) - 1.0) < 1e-12

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            qcore.tensor(2 * E0, E1)


class TestApplyUnitary:
    def test_identity_leaves_amplitudes(self, rand):
        state = random_state(rand, 6)
        out = qcore.apply_unitary(np.eye(2), state, (3, 2), axis=1)
        np.testing.assert_allclose(out, state, atol=1e-15)

    def test_splitter_spreads_first_port(self):
        state = np.zeros(3, dtype=complex)
        state[0] = 1.0
        out = qcore.apply_unitary(three_port_splitter(), state, (3,), axis=0)
        np.testing.assert_allclose(np.abs(out), np.full(3, 1 / math.sqrt(3)), atol=1e-12)

    def test_norm_preserved_on_random_states(self, rand):
        u = three_port_splitter()
        for _ in range(100):
            state = random_state(rand, 36)
            out = qcore.apply_unitary(u, state, JOINT_LAYOUT, axis=2)
            assert abs(np.linalg.norm(out) - 1.0) < 1e-12

    def test_dimension_mismatch(self, rand):
        with pytest.raises(ValueError):
            qcore.apply_unitary(np.eye(3), random_state(rand, 6), (2, 3), axis=0)

    def test_non_unitary_rejected(self, rand):
        with pytest.raises(ValueError):
            qcore.apply_unitary(np.ones((2, 2)), random_state(rand, 2), (2,), axis=0)


class TestProject:
    def test_half_weight_collapse(self):
        prob, post = qcore.project(np.outer(E0, E0), PLUS)
        assert abs(prob - 0.5) < 1e-15
        np.testing.assert_allclose(post, E0, atol=1e-15)

    def test_identity_projector(self, rand):
        state = random_state(rand, 4)
        prob, post = qcore.project(np.eye(4), state)
        assert abs(prob - 1.0) < 1e-12
        np.testing.assert_allclose(post, state, atol=1e-12)

    def test_singlet_same_axis_same_value_is_forbidden(self):
        up, _ = spin_eigenstates(0.77)
        joint = np.kron(up, up)
        with pytest.raises(qcore.ZeroProbability):
            qcore.project(np.outer(joint, joint.conj()), singlet())

    def test_projection_is_idempotent(self, rand):
        up, _ = spin_eigenstates(1.3)
        proj = np.outer(up, up.conj())
        _, post = qcore.project(proj, random_state(rand, 2))
        prob2, _ = qcore.project(proj, post)
        assert abs(prob2 - 1.0) < 1e-12

    def test_non_projector_rejected(self):
        with pytest.raises(ValueError):
            qcore.project(np.array([[0, 1], [0, 0]]), PLUS)


class TestSample:
    def partition(self):
        return [np.outer(E0, E0), np.outer(E1, E1)]

    def test_definite_state_always_same_outcome(self):
        rng = TrialRng(99)
        for _ in range(20):
            index, post = qcore.sample(E0, self.partition(), rng)
            assert index == 0
            np.testing.assert_allclose(post, E0)

    def test_seeded_reproducibility(self, rand):
        state = random_state(rand, 2)
        first = [qcore.sample(state, self.partition(), TrialRng.for_trial(5, i))[0] for i in range(200)]
        second = [qcore.sample(state, self.partition(), TrialRng.for_trial(5, i))[0] for i in range(200)]
        assert first == second

    def test_frequencies_match_born_weights(self):
        up, down = spin_eigenstates(2.0)
        partition = [np.outer(up, up.conj()), np.outer(down, down.conj())]
        state = np.array([0.8, 0.6], dtype=complex)
        exact = [qcore.projection_probability(p, state) for p in partition]
        counts = [0, 0]
        for i in range(20000):
            index, _ = qcore.sample(state, partition, TrialRng.for_trial(2024, i))
            counts[index] += 1
        _, p = chi_square(counts, exact)
        assert p > 0.001

    def test_incomplete_partition_rejected(self):
        with pytest.raises(qcore.InvalidPartition):
            qcore.sample(E0, [np.outer(E0, E0)], TrialRng(0))

    def test_non_orthogonal_partition_rejected(self):
        fuzzy = np.outer(PLUS, PLUS.conj())
        with pytest.raises(qcore.InvalidPartition):
            qcore.sample(E0, [fuzzy, np.eye(2) - fuzzy + 1e-3 * np.outer(E0, E0)], TrialRng(0))

    def test_complete_partition_weights_sum_to_one(self, rand, trine):
        from toolate.protocol import PARTICLE_A, exit_labels, exit_projector

        partition = [exit_projector(trine, PARTICLE_A, lab) for lab in exit_labels(trine)]
        for _ in range(20):
            state = random_state(rand, 36)
            total = sum(qcore.projection_probability(p, state) for p in partition)
            assert abs(total - 1.0) < 1e-10


class TestReducedDensity:
    def test_bell_state_reduces_to_maximally_mixed(self):
        bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
        rho = qcore.reduced_density(bell, (2, 2), keep=(0,))
        np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-15)

    def test_product_state_reduces_to_rank_one(self, rand):
        u = random_state(rand, 3)
        v = random_state(rand, 2)
        rho = qcore.reduced_density(np.kron(u, v), (3, 2), keep=(1,))
        evals = np.linalg.eigvalsh(rho)
        assert abs(evals[-1] - 1.0) < 1e-12 and np.all(evals[:-1] < 1e-12)

    def test_singlet_reduces_to_maximally_mixed(self):
        rho = qcore.reduced_density(singlet(), (2, 2), keep=(0,))
        np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-15)

    def test_trace_one_and_eigenvalue_bounds(self, rand):
        for _ in range(20):
            state = random_state(rand, 36)
            rho = qcore.reduced_density(state, JOINT_LAYOUT, keep=(0, 1))
            assert abs(np.trace(rho).real - 1.0) < 1e-10
            evals = np.linalg.eigvalsh(rho)
            assert np.all(evals > -1e-10) and np.all(evals < 1 + 1e-10)

    def test_layout_mismatch(self, rand):
        with pytest.raises(ValueError):
            qcore.reduced_density(random_state(rand, 6), (2, 2), keep=(0,))


class TestEntropy:
    def test_pure_state_entropy_zero(self, rand):
        v = random_state(rand, 4)
        rho = np.outer(v, v.conj())
        assert abs(qcore.entanglement_entropy(rho)) < 1e-10

    def test_maximally_mixed_qubit_is_one_bit(self):
        assert abs(qcore.entanglement_entropy(np.eye(2) / 2) - 1.0) < 1e-14

    def test_conditional_state_reduction_against_jacobi_oracle(self, trine):
        state, _ = oracle_conditional_state(SpinValue.UP, SpinValue.UP, trine)
        rho = qcore.reduced_density(state.vec, JOINT_LAYOUT, keep=(0, 1))
        assert rho.shape == (6, 6)
        assert abs(qcore.entanglement_entropy(rho) - entropy_bits(rho)) < 1e-9
        # frozen: spectrum (1/2, 1/2, 0, 0, 0, 0) -> exactly one bit
        assert abs(qcore.entanglement_entropy(rho) - 1.0) < 1e-10

    def test_jacobi_oracle_agrees_with_lapack(self, rand):
        m = rand.normal(size=(6, 6)) + 1j * rand.normal(size=(6, 6))
        h = (m + m.conj().T) / 2
        np.testing.assert_allclose(jacobi_eigvalsh(h), np.linalg.eigvalsh(h), atol=1e-9)


class TestFidelity:
    def test_self_fidelity(self, rand):
        v = random_state(rand, 6)
        assert abs(qcore.fidelity(v, v) - 1.0) < 1e-14

    def test_orthogonal_states(self):
        assert qcore.fidelity(E0, E1) == 0.0

    def test_global_phase_invariance(self, rand):
        v = random_state(rand, 4)
        assert abs(qcore.fidelity(v, np.exp(0.7j) * v) - 1.0) < 1e-13

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            qcore.fidelity(E0, np.array([1, 0, 0], dtype=complex))
