import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_psd
from densemimo.array_geometry import ArrayConfig, dft_matrix
from densemimo.covariance import (
    CovarianceSpec,
    closeness_trace,
    critical_sigma,
    dense_sigma,
    extend,
    hermitian_sqrt,
    q_from_sigma,
)


class TestExtend:
    def test_definition(self):
        a, b, c, d = 1.0, 2.0, 3.0, 4.0
        out = extend(np.array([[a, b], [c, d]]), 1, 1)
        np.testing.assert_array_equal(out, [[a, 0, b], [0, 0, 0], [c, 0, d]])

    def test_no_zeros(self, rng):
        s = random_psd(rng, 4)
        np.testing.assert_array_equal(extend(s, 2, 0), s)

    def test_trace(self, rng):
        s = random_psd(rng, 5)
        assert np.trace(extend(s, 2, 3)) == pytest.approx(np.trace(s), abs=1e-15)

    @pytest.mark.parametrize("after,zeros", [(-1, 1), (6, 1), (2, -1)])
    def test_bad_dims(self, after, zeros):
        with pytest.raises(ValueError):
            extend(np.eye(5), after, zeros)

    @given(st.integers(1, 6), st.data())
    def test_block_structure(self, n, data):
        after = data.draw(st.integers(0, n))
        k = data.draw(st.integers(0, 4))
        s = np.arange(n * n, dtype=float).reshape(n, n) + 1
        out = extend(s, after, k)
        assert out.shape == (n + k, n + k)
        assert not np.any(out[after : after + k]) and not np.any(out[:, after : after + k])
        keep = np.r_[0:after, after + k : n + k]
        np.testing.assert_array_equal(out[np.ix_(keep, keep)], s)


class TestPatterns:
    def test_dense_example(self):
        d = np.diag(dense_sigma(3, 12).sigma).real
        np.testing.assert_allclose(d, np.array([1, 1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 1]) / 7, atol=0)

    def test_dense_boundary(self):
        np.testing.assert_allclose(dense_sigma(1, 3).sigma, np.eye(3) / 3)

    def test_dense_too_small(self):
        with pytest.raises(ValueError):
            dense_sigma(3, 6)

    def test_critical(self):
        np.testing.assert_allclose(critical_sigma(3).sigma, np.eye(6) / 6)
        with pytest.raises(ValueError):
            critical_sigma(0)

    @pytest.mark.parametrize("lt", [1, 2, 3, 8, 16])
    def test_unit_trace_and_eigen_bound(self, lt):
        dense, crit = dense_sigma(lt, 4 * lt), critical_sigma(lt)
        assert np.trace(dense.sigma).real == pytest.approx(1, abs=1e-12)
        assert np.trace(crit.sigma).real == pytest.approx(1, abs=1e-12)
        assert dense.max_scaled_eigenvalue(lt) == pytest.approx(2 * lt / (2 * lt + 1), abs=1e-12)
        assert crit.max_scaled_eigenvalue(lt) == pytest.approx(1, abs=1e-12)

    def test_closeness_shrinks(self):
        vals = [closeness_trace(lt) for lt in (1, 2, 4, 8, 16)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        # 2 Lt (1/(2Lt (2Lt+1)))^2 + (2Lt+1)^-2 at Lt = 1
        assert vals[0] == pytest.approx(2 / 36 + 1 / 9, abs=1e-15)


class TestSpecValidation:
    def test_trace_budget(self):
        with pytest.raises(ValueError):
            CovarianceSpec(np.eye(2))

    def test_not_hermitian(self):
        with pytest.raises(ValueError):
            CovarianceSpec(np.array([[0.5, 0.1], [0.0, 0.5]]))

    def test_not_psd(self):
        with pytest.raises(ValueError):
            CovarianceSpec(np.diag([0.6, -0.1]))


class TestQFromSigma:
    def test_scaled_identity(self):
        tx = ArrayConfig(2, 0.25)
        q = q_from_sigma(CovarianceSpec(np.eye(8) / 8), tx)
        np.testing.assert_allclose(q, np.eye(8) / 8, atol=1e-15)

    def test_trace_and_spectrum(self, rng):
        tx = ArrayConfig(3, 0.25)
        s = random_psd(rng, 12, trace=0.8)
        q = q_from_sigma(CovarianceSpec(s), tx)
        assert np.trace(q).real == pytest.approx(np.trace(s).real, abs=1e-12)
        np.testing.assert_allclose(np.linalg.eigvalsh(q), np.linalg.eigvalsh(s), atol=1e-12)

    def test_round_trip(self, rng):
        tx = ArrayConfig(2, 0.125)
        s = random_psd(rng, 16)
        u = dft_matrix(tx)
        back = u.conj().T @ q_from_sigma(CovarianceSpec(s), tx) @ u
        assert np.max(np.abs(back - s)) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            q_from_sigma(critical_sigma(3), ArrayConfig(3, 0.25))


class TestSqrt:
    def test_identity(self):
        np.testing.assert_allclose(hermitian_sqrt(np.eye(4)), np.eye(4), atol=1e-15)

    def test_diag(self):
        np.testing.assert_allclose(hermitian_sqrt(np.diag([4.0, 0.0, 1.0])), np.diag([2.0, 0.0, 1.0]), atol=1e-15)

    def test_reconstruction(self, rng):
        q = random_psd(rng, 8)
        r = hermitian_sqrt(q)
        assert np.linalg.norm(r @ r - q) <= 1e-10 * np.linalg.norm(q)
        np.testing.assert_allclose(r, r.conj().T, atol=1e-15)
        assert np.linalg.eigvalsh(r).min() >= -1e-12

    def test_rank_deficient(self):
        tx = ArrayConfig(3, 0.25)
        q = q_from_sigma(dense_sigma(3, tx.elements), tx)
        r = hermitian_sqrt(q)
        assert np.linalg.norm(r @ r - q) <= 1e-10 * np.linalg.norm(q)

    def test_clamps_roundoff(self):
        r = hermitian_sqrt(np.diag([1.0, -1e-12]))
        np.testing.assert_allclose(r, np.diag([1.0, 0.0]), atol=1e-15)

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="PSD"):
            hermitian_sqrt(np.diag([1.0, -1e-6]))
