"""Least-squares problem model and the geometry that drives its conditioning.

A problem is the pair (A, b) with A of full column rank; its solution is
``x = argmin ||b - A u||_2`` with residual ``r = b - A x`` orthogonal to
col(A).  Three quantities control every condition number in this package:

    kappa     = ||A||_2 / sigma_min          (spectral condition number of A)
    nu        = ||A x||_2 / (||x||_2 sigma_min)   (van der Sluis ratio, in [1, kappa])
    tan theta = ||r||_2 / ||A x||_2          (theta = angle between b and col(A))

The angle itself is never materialized; tan and sec are stored directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import RankDeficientError, ValidationError, ZeroSolutionError
from .linalg import RANK_TOLERANCE, SvdResult, _qr_solve, as_matrix, as_vector, svd

# Below this, the solution is treated as zero and relative condition
# quantities are undefined.
ZERO_SOLUTION_TOLERANCE = 1e-300


def _read_only(arr: np.ndarray) -> np.ndarray:
    out = arr.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class LlsProblem:
    """An overdetermined full-rank pair (A, b) with its SVD cached."""

    A: np.ndarray
    b: np.ndarray
    svd: SvdResult

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def sigma_min(self) -> float:
        return float(self.svd.singular_values[-1])

    @property
    def sigma_max(self) -> float:
        return float(self.svd.singular_values[0])

    @property
    def spectral_norm(self) -> float:
        return self.sigma_max

    @property
    def min_singular_direction(self) -> np.ndarray:
        """Right singular unit vector belonging to sigma_min."""
        return self.svd.right_vectors[:, self.n - 1]

    def apply_inverse_gram(self, z: np.ndarray) -> np.ndarray:
        """Compute ``(A^T A)^{-1} z`` through the cached SVD.

        The Gram matrix is never formed: its 2-norm condition is kappa^2,
        while V diag(1/s^2) V^T applied to z stays at working accuracy.
        """
        v = self.svd.right_vectors
        s = self.svd.singular_values
        return v @ ((v.T @ z) / (s * s))


@dataclass(frozen=True)
class LlsSolution:
    """Solution x, residual r = b - A x, and projection A x."""

    x: np.ndarray
    residual: np.ndarray
    projection: np.ndarray


@dataclass(frozen=True)
class Geometry:
    """The conditioning quantities of a solved problem."""

    kappa: float
    nu: float
    tan_theta: float
    sec_theta: float
    sigma_min: float

    def __post_init__(self):
        if not (self.kappa >= 1.0 - 1e-10):
            raise ValidationError(f"kappa must be >= 1, got {self.kappa}")
        if not (1.0 - 1e-10 <= self.nu <= self.kappa * (1.0 + 1e-10)):
            raise ValidationError(f"nu must lie in [1, kappa], got nu={self.nu}, kappa={self.kappa}")
        if self.tan_theta < 0.0 or self.sec_theta < 1.0 - 1e-10 or self.sigma_min <= 0.0:
            raise ValidationError("invalid geometry quantities")


def build_problem(matrix, rhs) -> LlsProblem:
    """Validate (A, b) and cache the SVD of A.

    Raises
    ------
    ValidationError
        For non-finite input, m < n, a length mismatch, or a zero b (which
        would force x = 0, excluded because relative measures need x != 0).
    RankDeficientError
        When sigma_min <= RANK_TOLERANCE * sigma_max.
    """
    a = as_matrix(matrix, "A")
    bv = as_vector(rhs, "b")
    m, n = a.shape
    if m < n:
        raise ValidationError(
            f"A is {m}x{n}: an overdetermined least-squares problem needs m >= n"
        )
    if bv.size != m:
        raise ValidationError(f"b has length {bv.size}, expected {m}")
    if float(np.linalg.norm(bv)) == 0.0:
        raise ValidationError("b is the zero vector; the solution would be x = 0")
    fact = svd(a)
    s = fact.singular_values
    if s[-1] <= RANK_TOLERANCE * s[0]:
        raise RankDeficientError(
            f"A is numerically rank deficient (sigma_min={s[-1]:.3e}, sigma_max={s[0]:.3e}); "
            "condition numbers of the least-squares solution with respect to A do not "
            "exist for rank-deficient matrices"
        )
    return LlsProblem(A=_read_only(a), b=_read_only(bv), svd=fact)


def solve(problem: LlsProblem) -> LlsSolution:
    """Solve the problem by Householder QR.

    The cached SVD is used only for sigma-based quantities; the solve itself
    goes through QR.  Zero-residual problems are fully supported.

    Raises
    ------
    ZeroSolutionError
        When ``||x||_2 <= 1e-300`` (b orthogonal to col(A)): the scaled norms
        relative to ||x|| are then undefined.
    """
    x = _qr_solve(problem.A, problem.b)
    if float(np.linalg.norm(x)) <= ZERO_SOLUTION_TOLERANCE:
        raise ZeroSolutionError(
            "the least-squares solution is zero (b is orthogonal to col(A)); "
            "condition numbers relative to ||x|| are undefined"
        )
    projection = problem.A @ x
    residual = problem.b - projection
    return LlsSolution(x=_read_only(x), residual=_read_only(residual), projection=_read_only(projection))


def geometry(problem: LlsProblem, solution: LlsSolution) -> Geometry:
    """Compute kappa, nu, tan(theta), sec(theta), and sigma_min."""
    s = problem.svd.singular_values
    ax_norm = float(np.linalg.norm(solution.projection))
    x_norm = float(np.linalg.norm(solution.x))
    r_norm = float(np.linalg.norm(solution.residual))
    b_norm = float(np.linalg.norm(problem.b))
    return Geometry(
        kappa=float(s[0] / s[-1]),
        nu=ax_norm / (x_norm * float(s[-1])),
        tan_theta=r_norm / ax_norm,
        sec_theta=b_norm / ax_norm,
        sigma_min=float(s[-1]),
    )
