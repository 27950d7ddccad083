import numpy as np
import pytest

from shuffled_regression.exceptions import InvalidInputError, RankError
from shuffled_regression.linalg import kron_singular_basis, least_squares, thin_svd

from conftest import random_orthonormal


def test_identity():
    svd = thin_svd(np.eye(3))
    np.testing.assert_allclose(svd.U, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(svd.sigma, [1, 1, 1])
    np.testing.assert_allclose(svd.V, np.eye(3), atol=1e-15)
    assert svd.r == 3


def test_diagonal_case():
    A = np.array([[2.0, 0], [0, 0], [0, 3]])
    svd = thin_svd(A)
    np.testing.assert_allclose(svd.sigma, [3, 2])
    np.testing.assert_allclose(svd.U, [[0, 1], [0, 0], [1, 0]], atol=1e-15)
    np.testing.assert_allclose(svd.V, [[0, 1], [1, 0]], atol=1e-15)


def test_random_reconstruction(rng):
    A = rng.standard_normal((10, 3))
    svd = thin_svd(A)
    assert np.abs(A - svd.U @ np.diag(svd.sigma) @ svd.V.T).max() <= 1e-8
    assert np.abs(svd.U.T @ svd.U - np.eye(3)).max() <= 1e-10


def test_corpus_invariants(rng):
    for _ in range(100):
        m = int(rng.integers(1, 31))
        n = int(rng.integers(1, min(m, 9) + 1))
        A = rng.standard_normal((m, n)) * rng.uniform(0.1, 10)
        svd = thin_svd(A)
        assert svd.r == n
        assert np.abs(A - svd.U @ np.diag(svd.sigma) @ svd.V.T).max() <= 1e-8 * svd.sigma[0]
        assert np.abs(svd.U.T @ svd.U - np.eye(n)).max() <= 1e-10
        assert np.abs(svd.V.T @ svd.V - np.eye(n)).max() <= 1e-10
        assert np.all(np.diff(svd.sigma) <= 0)
        # independent route: LAPACK singular values
        np.testing.assert_allclose(svd.sigma, np.linalg.svd(A, compute_uv=False), rtol=1e-10)
        pivots = np.argmax(np.abs(svd.V), axis=0)
        assert np.all(svd.V[pivots, np.arange(n)] > 0)


def test_rank_deficient_duplicate_column(rng):
    A = rng.standard_normal((12, 3))
    A = np.column_stack([A, A[:, 1]])
    svd = thin_svd(A)
    assert svd.r == 3
    assert svd.U.shape == (12, 3)
    assert np.abs(A - svd.U @ np.diag(svd.sigma) @ svd.V.T).max() <= 1e-8 * svd.sigma[0]


def test_errors():
    with pytest.raises(InvalidInputError):
        thin_svd(np.array([[1.0, np.nan]]))
    with pytest.raises(RankError):
        thin_svd(np.zeros((4, 2)))
    with pytest.raises(InvalidInputError):
        least_squares(np.eye(2), [1.0, 2.0, 3.0])


@pytest.mark.parametrize(
    "A, b, expected",
    [
        (np.eye(2), [3.0, 4.0], [3.0, 4.0]),
        ([[1.0], [1.0]], [1.0, 3.0], [2.0]),
    ],
)
def test_least_squares_small(A, b, expected):
    np.testing.assert_allclose(least_squares(A, b), expected, rtol=1e-14)


def test_least_squares_consistent(rng):
    for _ in range(20):
        A = rng.standard_normal((8, 3))
        x0 = rng.standard_normal(3)
        x = least_squares(A, A @ x0)
        assert np.linalg.norm(x - x0) <= 1e-9 * np.linalg.norm(x0)


def test_least_squares_min_norm(rng):
    A = rng.standard_normal((9, 2))
    A = np.column_stack([A, A[:, 0] + A[:, 1]])
    b = rng.standard_normal(9)
    np.testing.assert_allclose(least_squares(A, b), np.linalg.pinv(A) @ b, atol=1e-10)


def test_kron_unit_vector():
    V = kron_singular_basis([1.0, 0.0], [[1.0], [0.0]])
    np.testing.assert_array_equal(V[:, 0], [1, 0, 0, 0])


def test_kron_is_singular_basis(rng):
    m, r = 6, 2
    y = rng.standard_normal(m)
    y_bar = y / np.linalg.norm(y)
    U = random_orthonormal(rng, m, r)
    V = kron_singular_basis(y_bar, U)
    K = np.kron(y_bar[None, :], U.T)
    assert K.shape == (2, 36)
    np.testing.assert_allclose(V.T @ V, np.eye(r), atol=1e-12)
    for i in range(r):
        assert abs(np.linalg.norm(K @ V[:, i]) - 1.0) <= 1e-12
    # independent SVD of the materialized K
    _, s, vt = np.linalg.svd(K, full_matrices=False)
    np.testing.assert_allclose(s, 1.0, atol=1e-10)
    np.testing.assert_allclose(vt.T @ vt @ V, V, atol=1e-10)


def test_kron_rejects_unnormalized():
    with pytest.raises(InvalidInputError):
        kron_singular_basis([1.0, 1.0], [[1.0], [0.0]])
