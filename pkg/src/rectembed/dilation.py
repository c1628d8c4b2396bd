"""Singular values and k-dilation of linear maps.

``k_dilation_compound_oracle`` is deliberately built from k x k minors and a
symmetric eigen-solve so that it shares nothing with ``singular_values``.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import CapacityError, ValidationError

COMPOUND_GUARD = 10_000


def as_matrix(L) -> np.ndarray:
    A = np.asarray(L, dtype=float)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2 or A.size == 0:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    return A


def singular_values(L) -> np.ndarray:
    """Ascending singular values, length min(rows, cols)."""
    A = as_matrix(L)
    return np.sort(np.linalg.svd(A, compute_uv=False))


def _check_k(A: np.ndarray, k: int) -> None:
    if not 1 <= k <= min(A.shape):
        raise IndexError(f"k={k} outside [1, {min(A.shape)}]")


def _log_product(values) -> float:
    values = np.asarray(values, dtype=float)
    if np.any(values == 0.0):
        return -math.inf
    return math.fsum(np.log(values))


def k_dilation_linear(L, k: int) -> float:
    """Product of the k largest singular values."""
    A = as_matrix(L)
    _check_k(A, k)
    s = singular_values(A)
    return math.exp(_log_product(s[-k:]))


def pointwise_k_expansion(L, k: int) -> float:
    """Product of the k smallest singular values: the least k-volume stretch."""
    A = as_matrix(L)
    _check_k(A, k)
    s = singular_values(A)
    return math.exp(_log_product(s[:k]))


def batch_k_expansion(J: np.ndarray, k: int) -> np.ndarray:
    """``pointwise_k_expansion`` over a stack of square Jacobians, shape (m, n, n)."""
    s = np.linalg.svd(J, compute_uv=False)  # descending per row
    s = np.sort(s, axis=-1)[..., :k]
    with np.errstate(divide="ignore"):
        return np.exp(np.sum(np.log(s), axis=-1))


def compound_matrix(L, k: int) -> np.ndarray:
    """Matrix of all k x k minors, rows/cols indexed by sorted index k-subsets."""
    A = as_matrix(L)
    _check_k(A, k)
    nr, nc = math.comb(A.shape[0], k), math.comb(A.shape[1], k)
    if nr * nc > COMPOUND_GUARD:
        raise CapacityError(f"compound matrix of order {k} would have {nr}x{nc} entries")
    rows = list(itertools.combinations(range(A.shape[0]), k))
    cols = list(itertools.combinations(range(A.shape[1]), k))
    C = np.empty((len(rows), len(cols)))
    for a, r in enumerate(rows):
        sub = A[list(r), :]
        for b, c in enumerate(cols):
            C[a, b] = np.linalg.det(sub[:, list(c)])
    return C


def k_dilation_compound_oracle(L, k: int) -> float:
    """Operator norm of the k-th exterior power, via the compound matrix."""
    C = compound_matrix(L, k)
    G = C.T @ C if C.shape[0] >= C.shape[1] else C @ C.T
    top = float(np.linalg.eigvalsh(G)[-1])
    return math.sqrt(max(top, 0.0))
