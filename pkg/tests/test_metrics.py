import math

import numpy as np
import pytest

from ts1mc.metrics import evaluate, mse, psnr, relative_error


class TestRelativeError:
    def test_exact_recovery(self):
        m = np.arange(6.0).reshape(2, 3) + 1
        assert relative_error(m, m) == 0.0

    def test_doubling(self):
        m = np.arange(6.0).reshape(2, 3) + 1
        assert relative_error(2 * m, m) == pytest.approx(1.0, rel=1e-12)

    def test_constructed_perturbation(self):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((8, 8))
        e = rng.standard_normal((8, 8))
        e *= 0.01 * np.linalg.norm(m) / np.linalg.norm(e)
        assert relative_error(m + e, m) == pytest.approx(0.01, rel=1e-12)

    def test_scale_covariance(self):
        rng = np.random.default_rng(1)
        x, m = rng.standard_normal((5, 5)), rng.standard_normal((5, 5))
        assert relative_error(3.7 * x, 3.7 * m) == pytest.approx(
            relative_error(x, m), rel=1e-12)

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            relative_error(np.ones((2, 2)), np.zeros((2, 2)))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            relative_error(np.ones((2, 2)), np.ones((2, 3)))


class TestMse:
    def test_exact(self):
        m = np.ones((3, 3))
        assert mse(m, m) == 0.0

    def test_single_entry(self):
        assert mse(np.array([[0.1]]), np.array([[0.0]])) == pytest.approx(0.01)

    def test_uniform_offset(self):
        m = np.zeros((4, 5))
        assert mse(m + 0.3, m) == pytest.approx(0.09, rel=1e-12)


class TestPsnr:
    def test_forty_db(self):
        x = np.zeros((10, 10))
        x[0, 0] = 0.1  # mse = 1e-4 over 100 entries
        m = np.zeros((10, 10))
        assert psnr(x, m, peak=1.0) == pytest.approx(40.0, abs=1e-9)

    def test_twenty_db(self):
        m = np.zeros((2, 2))
        assert psnr(m + 0.1, m, peak=1.0) == pytest.approx(20.0, abs=1e-9)

    def test_doubling_peak_adds_six_db(self):
        rng = np.random.default_rng(2)
        x, m = rng.standard_normal((6, 6)), rng.standard_normal((6, 6))
        assert psnr(x, m, peak=2.0) - psnr(x, m, peak=1.0) == pytest.approx(
            20 * math.log10(2), abs=1e-12)

    def test_exact_recovery_is_infinite(self):
        m = np.ones((3, 3))
        assert psnr(m, m) == math.inf

    def test_monotone_in_mse(self):
        m = np.zeros((4, 4))
        values = [psnr(m + d, m) for d in (0.01, 0.05, 0.2, 0.7)]
        assert all(b < a for a, b in zip(values, values[1:]))


class TestEvaluate:
    def test_success_threshold(self):
        rng = np.random.default_rng(3)
        m = rng.standard_normal((10, 10))
        e = rng.standard_normal((10, 10))
        small = m + e * (1e-3 * np.linalg.norm(m) / np.linalg.norm(e))
        big = m + e * (1e-2 * np.linalg.norm(m) / np.linalg.norm(e))
        assert evaluate(small, m).success
        assert not evaluate(big, m).success

    def test_fields_consistent(self):
        rng = np.random.default_rng(4)
        x, m = rng.standard_normal((5, 5)), rng.standard_normal((5, 5))
        met = evaluate(x, m, peak=1.0)
        assert met.mse == pytest.approx(mse(x, m), rel=1e-15)
        assert met.psnr == pytest.approx(10 * math.log10(1.0 / met.mse),
                                         rel=1e-12)
