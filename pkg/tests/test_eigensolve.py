import numpy as np
import pytest

import helsonspec as hs
from helsonspec import ConfigurationError, IterationError


def householder_tridiagonal(A):
    """Independent tridiagonalization for the Sturm oracle (no LAPACK)."""
    A = A.copy().astype(float)
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1:, k].copy()
        alpha = -np.sign(x[0] if x[0] != 0 else 1.0) * np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] -= alpha
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        v /= nv
        H = np.eye(n)
        H[k + 1:, k + 1:] -= 2.0 * np.outer(v, v)
        A = H @ A @ H
    return np.diag(A), np.diag(A, 1)


def sturm_count_below(d, e, x):
    """Number of eigenvalues of the tridiagonal (d, e) strictly below x."""
    count = 0
    q = 1.0
    for i in range(len(d)):
        off = e[i - 1] ** 2 if i > 0 else 0.0
        q = d[i] - x - (off / q if q != 0.0 else off / 1e-300)
        if q < 0.0:
            count += 1
    return count


class TestEigenFull:
    def test_identity(self):
        res = hs.eigen_full(np.eye(5))
        assert np.allclose(res.values, np.ones(5))

    def test_diagonal_sorted(self):
        res = hs.eigen_full(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(res.values, [1.0, 2.0, 3.0])

    def test_swap_matrix(self):
        res = hs.eigen_full(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(res.values, [-1.0, 1.0])

    def test_trace_frobenius_orthogonality(self):
        rng = np.random.default_rng(5)
        for n in (8, 33, 120):
            A = rng.standard_normal((n, n))
            A = 0.5 * (A + A.T)
            res = hs.eigen_full(A, want_vectors=True)
            assert res.values.sum() == pytest.approx(np.trace(A), rel=1e-10)
            assert np.sum(res.values ** 2) == pytest.approx(
                np.linalg.norm(A) ** 2, rel=1e-10)
            gram = res.vectors.T @ res.vectors
            assert np.abs(gram - np.eye(n)).max() <= 1e-10
            assert res.residual_max <= 1e-9

    def test_sturm_oracle_brackets(self):
        rng = np.random.default_rng(17)
        for n in (6, 17, 41, 64):
            A = rng.standard_normal((n, n))
            A = 0.5 * (A + A.T)
            values = hs.eigen_full(A).values
            d, e = householder_tridiagonal(A)
            for x in rng.uniform(values[0] - 1.0, values[-1] + 1.0, 12):
                assert sturm_count_below(d, e, x) == int(np.sum(values < x))

    def test_dimension_cap(self):
        with pytest.raises(ConfigurationError):
            hs.eigen_full(np.eye(5000))


class TestTopEigenpairs:
    def test_diagonal_operator(self):
        d = np.arange(1.0, 101.0)
        res = hs.top_eigenpairs(lambda x: d * x, 100, count=2)
        assert np.allclose(res.values, [99.0, 100.0], atol=1e-10)
        assert res.residual_max <= 1e-10

    def test_helson_small_a_top_at_least_ten(self):
        mv, dim = hs.helson_operator(0.1, 512)
        res = hs.top_eigenpairs(mv, dim, count=1)
        assert res.values[-1] >= 10.0

    def test_agreement_with_dense(self):
        M = hs.helson_matrix(1.0, 256).matrix
        dense = hs.eigen_full(M).values[-3:]
        res = hs.top_eigenpairs(M.matvec, M.dim, count=3, tol=1e-12)
        assert np.abs(res.values - dense).max() <= 1e-9
        # the iterative top never exceeds the dense one beyond the tolerance
        assert res.values[-1] <= dense[-1] + 1e-12

    def test_rank_one_breakdown_handled(self):
        v = np.arange(1.0, 9.0)
        v /= np.linalg.norm(v)
        res = hs.top_eigenpairs(lambda x: v * (v @ x), 8, count=2)
        assert res.values[-1] == pytest.approx(1.0, abs=1e-12)
        assert abs(res.values[-2]) <= 1e-12

    def test_matrix_input_accepted(self):
        A = np.diag([1.0, 5.0, 2.0])
        res = hs.top_eigenpairs(A, 3, count=1)
        assert res.values[-1] == pytest.approx(5.0, abs=1e-12)

    def test_count_validation(self):
        with pytest.raises(ConfigurationError):
            hs.top_eigenpairs(lambda x: x, 100, count=11)

    def test_nonconvergence_carries_best(self):
        rng = np.random.default_rng(23)
        A = rng.standard_normal((60, 60))
        A = 0.5 * (A + A.T)
        with pytest.raises(IterationError) as exc:
            hs.top_eigenpairs(lambda x: A @ x, 60, count=4, tol=1e-30, max_steps=5)
        assert exc.value.result is not None
        assert exc.value.result.values.size >= 1


class TestCountAbove:
    def test_spec_examples(self):
        assert hs.count_above([0.1, 0.5, 3.2], np.pi) == 1
        assert hs.count_above([], np.pi) == 0
        assert hs.count_above([np.pi, np.pi], np.pi) == 0  # strict

    def test_random_consistency(self):
        rng = np.random.default_rng(2)
        vals = np.sort(rng.standard_normal(200))
        for thr in rng.standard_normal(20):
            assert hs.count_above(vals, thr) == int(np.sum(vals > thr))
