import numpy as np
import pytest

from conftest import random_orthogonal
from ts1mc.matrix import (compute_svd, ky_fan_norm, numerical_rank,
                          partial_trace, shrinkage_identity, singular_values,
                          threshold_spectrum, ts1_penalty, ts1_prox_matrix)
from ts1mc.scalar import make_threshold_params, ts1_prox_scalar


def ts1_of(x, a):
    return ts1_penalty(singular_values(x), a)


class TestSvdFactors:
    def test_invariants_on_random_matrices(self):
        rng = np.random.default_rng(0)
        for shape in [(6, 9), (9, 6), (7, 7)]:
            x = rng.standard_normal(shape)
            f = compute_svd(x)
            assert np.all(np.diff(f.sigma) <= 0)
            assert np.all(f.sigma >= 0)
            k = f.sigma.size
            assert np.abs(f.u.T @ f.u - np.eye(k)).max() <= 1e-8
            assert np.abs(f.v.T @ f.v - np.eye(k)).max() <= 1e-8
            rel = np.linalg.norm(f.reconstruct() - x) / max(np.linalg.norm(x), 1.0)
            assert rel <= 1e-8


class TestPenalty:
    def test_zero_spectrum(self):
        assert ts1_penalty(np.zeros(4), 3.0) == 0.0

    def test_unit_spectrum(self):
        assert ts1_penalty(np.ones(3), 1.0) == pytest.approx(3.0, abs=1e-15)

    def test_direct_evaluation(self):
        assert ts1_penalty(np.array([3.0, 2.0]), 2.0) == pytest.approx(3.3, abs=1e-12)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            ts1_penalty(np.array([1.0, -0.1]), 1.0)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((6, 8))
        q = random_orthogonal(rng, 6)
        p = random_orthogonal(rng, 8)
        assert ts1_of(q @ x @ p, 1.3) == pytest.approx(ts1_of(x, 1.3), abs=1e-8)


class TestProxMatrix:
    def test_zero_matrix(self):
        out = ts1_prox_matrix(np.zeros((4, 3)), 1.0, 0.3)
        assert np.all(out == 0.0)

    def test_diagonal_example(self):
        # t = 0.5 kills the 0.1 entry; the kept value solves
        # (3 - y)(1 + y)^2 = 0.5, i.e. y ~ 2.968248 (grid oracle agrees).
        out = ts1_prox_matrix(np.diag([3.0, 0.1]), 1.0, 0.25)
        assert out[1, 1] == pytest.approx(0.0, abs=1e-12)
        assert out[0, 0] == pytest.approx(2.968247902936453, abs=1e-9)
        assert abs(out[0, 1]) + abs(out[1, 0]) <= 1e-12

    def test_diagonal_example_against_diagonal_grid(self):
        y = np.diag([3.0, 0.1])
        a, lm = 1.0, 0.25
        out = ts1_prox_matrix(y, a, lm)
        obj_out = 0.5 * np.sum((out - y) ** 2) + lm * ts1_of(out, a)
        best = np.inf
        for d0 in np.arange(0.0, 4.0, 1e-3):
            # second diagonal entry scanned coarsely around the kill region
            for d1 in np.arange(0.0, 0.3, 1e-3):
                cand = 0.5 * ((d0 - 3.0) ** 2 + (d1 - 0.1) ** 2) \
                    + lm * ts1_penalty(np.array([d0, d1]), a)
                best = min(best, cand)
        assert obj_out <= best + 1e-6

    def test_random_probe_optimality(self):
        rng = np.random.default_rng(11)
        y = rng.standard_normal((5, 4))
        a, lm = 1.0, 0.4
        out = ts1_prox_matrix(y, a, lm)
        obj = lambda x: 0.5 * np.sum((x - y) ** 2) + lm * ts1_of(x, a)
        base = obj(out)
        for _ in range(1000):
            probe = out + rng.standard_normal(out.shape) * rng.uniform(1e-4, 0.3)
            assert base <= obj(probe) + 1e-10

    def test_rank_equals_spectrum_above_threshold(self):
        rng = np.random.default_rng(4)
        y = rng.standard_normal((8, 8))
        a, lm = 1.0, 1.0
        t = make_threshold_params(a, lm).t
        out = ts1_prox_matrix(y, a, lm)
        expected_rank = int(np.sum(singular_values(y) > t))
        assert numerical_rank(singular_values(out)) == expected_rank

    def test_diagonal_consistency_with_scalar_prox(self):
        diag = np.array([4.0, 2.5, 0.9, 0.2])
        y = np.zeros((4, 6))
        np.fill_diagonal(y, diag)
        a, lm = 1.5, 0.3
        out = ts1_prox_matrix(y, a, lm)
        p = make_threshold_params(a, lm)
        expected = ts1_prox_scalar(diag, p)
        assert np.abs(np.diag(out) - expected).max() <= 1e-8
        off = out.copy()
        np.fill_diagonal(off, 0.0)
        assert np.abs(off).max() <= 1e-8

    def test_rank_nonincreasing_in_lambda_mu(self):
        rng = np.random.default_rng(9)
        y = rng.standard_normal((10, 10))
        ranks = []
        for lm in [0.01, 0.05, 0.2, 0.8, 2.0, 8.0]:
            out = ts1_prox_matrix(y, 1.0, lm)
            ranks.append(numerical_rank(singular_values(out)))
        assert all(r2 <= r1 for r1, r2 in zip(ranks, ranks[1:]))


class TestThresholdSpectrum:
    def test_boundary_conventions(self):
        a, lm = 1.0, 1.0
        t = make_threshold_params(a, lm).t
        sig = np.array([2.0, t, 0.5])
        kill = threshold_spectrum(sig, a, lm, t)
        keep = threshold_spectrum(sig, a, lm, t, keep_boundary=True)
        assert kill[1] == 0.0
        assert keep[1] > 0.0
        assert kill[2] == keep[2] == 0.0
        assert kill[0] == keep[0] > 0.0


class TestTraceAndKyFan:
    def test_partial_trace_identity(self):
        assert partial_trace(np.eye(3), 2) == 2.0

    def test_partial_trace_diag(self):
        assert partial_trace(np.diag([5.0, 4.0, 3.0]), 3) == 12.0

    def test_partial_trace_rectangular(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((4, 6))
        assert partial_trace(x, 2) == pytest.approx(x[0, 0] + x[1, 1], abs=1e-15)

    def test_partial_trace_index_error(self):
        with pytest.raises(IndexError):
            partial_trace(np.eye(3), 4)

    def test_ky_fan_examples(self):
        sigma = np.array([3.0, 2.0, 1.0])
        assert ky_fan_norm(sigma, 2) == 5.0
        assert ky_fan_norm(sigma, 3) == 6.0  # nuclear norm

    def test_ky_fan_index_error(self):
        with pytest.raises(IndexError):
            ky_fan_norm(np.array([1.0]), 2)

    def test_trace_inequality_random(self):
        rng = np.random.default_rng(15)
        for _ in range(100):
            m = int(rng.integers(2, 12))
            n = int(rng.integers(2, 12))
            x = rng.standard_normal((m, n)) * rng.uniform(0.5, 3.0)
            sigma = singular_values(x)
            for k in range(1, min(m, n) + 1):
                assert partial_trace(x, k) <= ky_fan_norm(sigma, k) + 1e-9

    def test_equality_for_sorted_diagonal(self):
        d = np.array([4.0, 2.0, 1.0, 0.5])
        x = np.zeros((4, 5))
        np.fill_diagonal(x, d)
        for k in range(1, 5):
            assert partial_trace(x, k) == pytest.approx(
                ky_fan_norm(singular_values(x), k), abs=1e-10)

    def test_trace_as_shrinkage_identity_inner_product(self):
        rng = np.random.default_rng(21)
        x = rng.standard_normal((5, 7))
        for k in (1, 3, 5):
            ip = float(np.sum(x * shrinkage_identity(5, 7, k)))
            assert ip == pytest.approx(partial_trace(x, k), abs=1e-12)

    def test_shrinkage_identity_bounds(self):
        with pytest.raises(IndexError):
            shrinkage_identity(3, 4, 0)
        with pytest.raises(IndexError):
            shrinkage_identity(3, 4, 4)
