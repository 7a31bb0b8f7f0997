"""Dense real matrix primitives.

Validated array construction, a full SVD with a deterministic sign
convention, reference norm computations (spectral and nuclear), and a
Householder-QR least-squares solve.  Everything here is oracle-grade: the
closed forms elsewhere in the package are tested against these routines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import FactorizationError, RankDeficientError, ValidationError

# A matrix is treated as rank deficient when sigma_min <= RANK_TOLERANCE * sigma_max.
# Double-precision unit roundoff is ~1.1e-16; 1e-12 leaves a safety margin.
RANK_TOLERANCE = 1e-12


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d float array with at least one row and column."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError(f"{name} must have at least one row and one column, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite 1-d float array with at least one entry."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be 1-dimensional, got ndim={arr.ndim}")
    if arr.size < 1:
        raise ValidationError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class SvdResult:
    """Full singular value decomposition A = U diag(s) V^T.

    ``left_vectors`` is m-by-m orthogonal, ``right_vectors`` is n-by-n
    orthogonal, and ``singular_values`` holds the min(m, n) values in
    nonincreasing order.
    """

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray


def svd(matrix) -> SvdResult:
    """Full SVD with deterministic singular-vector signs.

    For each singular pair the sign is fixed so the largest-magnitude entry
    of the left vector is positive (ties broken by lowest index); the paired
    right vector flips with it so the product still reconstructs the input.
    Unpaired null-space columns are sign-fixed on their own entries.

    Raises
    ------
    FactorizationError
        If the iteration underlying the factorization does not converge.
    """
    m = as_matrix(matrix)
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"SVD did not converge: {exc}") from exc
    v = vt.T.copy()
    u = u.copy()
    k = s.size
    for i in range(u.shape[1]):
        col = u[:, i]
        if col[int(np.argmax(np.abs(col)))] < 0:
            u[:, i] = -col
            if i < k:
                v[:, i] = -v[:, i]
    for i in range(k, v.shape[1]):
        col = v[:, i]
        if col[int(np.argmax(np.abs(col)))] < 0:
            v[:, i] = -col
    return SvdResult(left_vectors=u, singular_values=s, right_vectors=v)


def singular_values(matrix) -> np.ndarray:
    """Singular values only, nonincreasing."""
    m = as_matrix(matrix)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"SVD did not converge: {exc}") from exc


def nuclear_norm(matrix) -> float:
    """Sum of the singular values with multiplicities (trace norm).

    This is the dual of the spectral norm under the pairing
    ``<A, B> = tr(A^T B)``.  Nonnegative, and zero iff the matrix is zero.
    """
    return float(singular_values(matrix).sum())


def spectral_norm(matrix) -> float:
    """Largest singular value (the matrix 2-norm)."""
    return float(singular_values(matrix)[0])


def _qr_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(a, mode="reduced")
    return solve_triangular(r, q.T @ b, lower=False)


def qr_least_squares(matrix, rhs) -> np.ndarray:
    """Minimize ``||b - A x||_2`` for a full-column-rank A via Householder QR.

    The result satisfies ``A^T (b - A x) = 0`` to roughly machine precision
    relative to ``||A||_2 ||b||_2``.

    Raises
    ------
    RankDeficientError
        When ``sigma_min <= RANK_TOLERANCE * sigma_max``.
    ValidationError
        On shape mismatch or an underdetermined (m < n) system.
    """
    a = as_matrix(matrix, "matrix")
    b = as_vector(rhs, "rhs")
    m, n = a.shape
    if b.size != m:
        raise ValidationError(f"rhs has length {b.size}, expected {m} (one entry per matrix row)")
    if m < n:
        raise ValidationError(
            f"matrix is {m}x{n}: full column rank needs at least as many rows as columns"
        )
    s = singular_values(a)
    if s[-1] <= RANK_TOLERANCE * s[0]:
        raise RankDeficientError(
            f"matrix is numerically rank deficient (sigma_min={s[-1]:.3e}, "
            f"sigma_max={s[0]:.3e}); the least-squares solution is not unique and "
            "arbitrarily small matrix changes can change it arbitrarily much"
        )
    return _qr_solve(a, b)
