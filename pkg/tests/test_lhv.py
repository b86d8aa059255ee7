import math

import numpy as np
import pytest

from toolate.lhv import (
    ConspiracyModel,
    DeterministicStrategy,
    conspiracy_predictions,
    enumerate_chsh_max,
    lhv_epr_sample,
)
from toolate.protocol import joint_distribution, prepare_joint
from toolate.spinlab import chsh_value


class TestEnumeration:
    def test_maximum_is_exactly_two(self, rand):
        for _ in range(10):
            angles = rand.uniform(0, 2 * math.pi, size=4)
            max_s, best = enumerate_chsh_max(*angles)
            assert max_s == 2.0
            assert abs(best.chsh()) == 2

    def test_all_plus_strategy(self):
        strat = DeterministicStrategy(1, 1, 1, 1)
        assert strat.chsh() == 2

    def test_quantum_value_beats_the_bound(self):
        s = chsh_value(0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)
        max_s, _ = enumerate_chsh_max(0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)
        assert abs(s) > max_s

    def test_rejects_non_sign_values(self):
        with pytest.raises(ValueError):
            DeterministicStrategy(1, 0, 1, 1)


class TestSampling:
    def test_single_strategy_reproduces_its_value(self):
        strat = DeterministicStrategy(1, -1, 1, -1)
        est = lhv_epr_sample([(1.0, strat)], n=5000, master_seed=3)
        assert est["S"] == strat.chsh()

    def test_anticorrelated_pair_at_equal_angles(self):
        # B assigns the opposite of A at the shared setting
        strat = DeterministicStrategy(1, 1, -1, -1)
        est = lhv_epr_sample([(1.0, strat)], n=2000, master_seed=9)
        assert est["E_ab"] == -1.0

    def test_mixtures_never_beat_the_bound(self, rand):
        for seed in range(10):
            weights = rand.uniform(0.0, 1.0, size=4)
            mixture = [
                (float(w), DeterministicStrategy(*signs))
                for w, signs in zip(
                    weights, ((1, 1, 1, 1), (1, -1, -1, 1), (-1, 1, 1, -1), (-1, -1, 1, 1))
                )
            ]
            est = lhv_epr_sample(mixture, n=100000, master_seed=seed)
            sigma = math.sqrt(4.0 / est["n"])  # generous bound on stderr of S
            assert abs(est["S"]) <= 2.0 + 5 * sigma

    def test_bit_exact_reproducibility(self):
        mixture = [(0.5, DeterministicStrategy(1, 1, 1, 1)), (0.5, DeterministicStrategy(-1, 1, -1, 1))]
        a = lhv_epr_sample(mixture, n=4096, master_seed=77)
        b = lhv_epr_sample(mixture, n=4096, master_seed=77)
        assert a == b

    def test_rejects_empty_or_negative(self):
        with pytest.raises(ValueError):
            lhv_epr_sample([(1.0, DeterministicStrategy(1, 1, 1, 1))], n=0, master_seed=0)
        with pytest.raises(ValueError):
            lhv_epr_sample([(-1.0, DeterministicStrategy(1, 1, 1, 1))], n=10, master_seed=0)


class TestConspiracy:
    def test_uniform_model_is_valid(self):
        model = ConspiracyModel.uniform()
        assert abs(model.table.sum() - 1.0) < 1e-12

    def test_copying_the_quantum_table(self, trine):
        quantum = joint_distribution(prepare_joint(trine))
        model = ConspiracyModel.from_exit_table(quantum)
        exit_table, _ = conspiracy_predictions(model, trine)
        np.testing.assert_allclose(exit_table, quantum, atol=1e-15)

    def test_every_model_recombines_uniformly(self, trine, rand):
        for _ in range(20):
            raw = rand.uniform(0, 1, size=(3, 3, 2, 2))
            model = ConspiracyModel(raw / raw.sum())
            _, ports = conspiracy_predictions(model, trine)
            np.testing.assert_allclose(ports, np.full(3, 1 / 3), atol=1e-12)

    def test_rebinding_does_not_change_the_prediction(self, trine):
        model = ConspiracyModel.uniform()
        for perm in ((1, 2, 0), (2, 1, 0)):
            _, ports = conspiracy_predictions(model, trine.permuted(perm))
            np.testing.assert_allclose(ports, np.full(3, 1 / 3), atol=1e-12)

    def test_validation(self):
        bad = np.full((3, 3, 2, 2), 1 / 36.0)
        with pytest.raises(ValueError):
            ConspiracyModel(bad * 2)
        with pytest.raises(ValueError):
            ConspiracyModel(np.zeros((3, 3)))
        neg = bad.copy()
        neg[0, 0, 0, 0] = -0.1
        with pytest.raises(ValueError):
            ConspiracyModel(neg)
