"""Closed-form norms of two-term outer-product sums ``u1 v1^T + u2 v2^T``.

A sum of two outer products has rank at most 2, so its Frobenius and nuclear
norms reduce to the trace and determinant of a 2x2 Gram matrix obtained by
orthonormalizing (u1, u2) and (v1, v2).  Writing theta_u for the angle
between u1 and u2 and theta_v for the angle between v1 and v2 (both taken in
[0, pi]) the results are

    ||G||_F = sqrt(|u1|^2 |v1|^2 + |u2|^2 |v2|^2
              + 2 |u1| |v1| |u2| |v2| cos(theta_u) cos(theta_v))

    ||G||_* = sqrt(|u1|^2 |v1|^2 + |u2|^2 |v2|^2
              + 2 |u1| |v1| |u2| |v2| cos(theta_u - theta_v))

where ``||.||_*`` sums the singular values.  Neither formula requires forming
the m-by-n matrix.  The cosine difference is never evaluated through inverse
trig: it expands to cos*cos + sin*sin with the sines taken from the
Gram-Schmidt rejection norms, which stays accurate even when a pair is within
1e-8 of collinear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateVectorsError, ValidationError
from .linalg import as_vector


@dataclass(frozen=True)
class Rank2Outer:
    """The four vectors of ``u1 v1^T + u2 v2^T``, m-by-n never materialized.

    Zero vectors are allowed; the norm formulas remain valid (the matrix
    simply collapses to rank one or zero).
    """

    u1: np.ndarray
    v1: np.ndarray
    u2: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u1", as_vector(self.u1, "u1"))
        object.__setattr__(self, "v1", as_vector(self.v1, "v1"))
        object.__setattr__(self, "u2", as_vector(self.u2, "u2"))
        object.__setattr__(self, "v2", as_vector(self.v2, "v2"))
        if self.u1.size != self.u2.size:
            raise ValidationError(
                f"u1 and u2 must have equal length, got {self.u1.size} and {self.u2.size}"
            )
        if self.v1.size != self.v2.size:
            raise ValidationError(
                f"v1 and v2 must have equal length, got {self.v1.size} and {self.v2.size}"
            )

    def explicit_matrix(self) -> np.ndarray:
        """Materialize the m-by-n matrix (tests and small problems only)."""
        return np.outer(self.u1, self.v1) + np.outer(self.u2, self.v2)


@dataclass(frozen=True)
class GramRepresentation:
    """Orthonormalized coefficients and the 2x2 Gram matrix of ``G^T G``.

    ``u1 = alpha1 w1`` and ``u2 = alpha2 w1 + beta w2`` for orthonormal
    (w1, w2); likewise ``v1 = gamma1 x1`` and ``v2 = gamma2 x1 + delta x2``.
    Signs are chosen so alpha1, beta, gamma1, delta >= 0.  ``gram``
    represents ``G^T G`` on the (x1, x2) basis and is symmetric positive
    semidefinite with ``tr >= 2 sqrt(det) >= 0``.
    """

    alpha1: float
    alpha2: float
    beta: float
    gamma1: float
    gamma2: float
    delta: float
    gram: np.ndarray

    @property
    def trace(self) -> float:
        return float(self.gram[0, 0] + self.gram[1, 1])

    @property
    def sqrt_det(self) -> float:
        # det(gram) = (alpha1 beta gamma1 delta)^2 exactly; the factored form
        # avoids the cancellation of a literal 2x2 determinant.
        return self.alpha1 * self.beta * self.gamma1 * self.delta


def safe_norm(vector: np.ndarray) -> float:
    """2-norm that survives entries whose squares under- or overflow.

    ``sqrt(sum(x**2))`` collapses for entries below ~1e-154 (the squares hit
    the subnormal floor) and overflows above ~1e154; factoring out the
    largest magnitude first keeps the arithmetic at unit scale.
    """
    scale = float(np.max(np.abs(vector)))
    if scale == 0.0 or not math.isfinite(scale):
        return scale
    return scale * float(np.linalg.norm(vector / scale))


def _split_against(pivot_unit: np.ndarray, other: np.ndarray, other_norm: float):
    """Coefficients (parallel, rejection >= 0) of `other` against a unit pivot.

    Computed on normalized vectors so extreme magnitudes cannot underflow.
    """
    if other_norm == 0.0:
        return 0.0, 0.0
    unit = other / other_norm
    cos = float(pivot_unit @ unit)
    rejection = float(np.linalg.norm(unit - cos * pivot_unit))
    return other_norm * cos, other_norm * rejection


def gram_reduce(pair: Rank2Outer) -> GramRepresentation:
    """Reduce ``u1 v1^T + u2 v2^T`` to its 2x2 Gram representation.

    Orthonormalization pivots on u1 and v1, so both must be nonzero; a zero
    pivot raises :class:`DegenerateVectorsError` and callers should use the
    rank-1 formulas directly.
    """
    u1, v1, u2, v2 = pair.u1, pair.v1, pair.u2, pair.v2
    alpha1 = safe_norm(u1)
    gamma1 = safe_norm(v1)
    if alpha1 == 0.0 or gamma1 == 0.0:
        raise DegenerateVectorsError("u1 and v1 must be nonzero to pivot the Gram reduction")
    alpha2, beta = _split_against(u1 / alpha1, u2, safe_norm(u2))
    gamma2, delta = _split_against(v1 / gamma1, v2, safe_norm(v2))
    head = alpha1 * gamma1 + alpha2 * gamma2
    m11 = beta * beta * gamma2 * gamma2 + head * head
    m12 = beta * beta * delta * gamma2 + delta * alpha2 * head
    m22 = beta * beta * delta * delta + delta * delta * alpha2 * alpha2
    gram = np.array([[m11, m12], [m12, m22]])
    return GramRepresentation(alpha1, alpha2, beta, gamma1, gamma2, delta, gram)


def _collapsed_rank1(pair: Rank2Outer) -> float | None:
    """Product of norms when one outer product vanishes, else None."""
    n_u1 = safe_norm(pair.u1)
    n_v1 = safe_norm(pair.v1)
    n_u2 = safe_norm(pair.u2)
    n_v2 = safe_norm(pair.v2)
    if n_u1 == 0.0 or n_v1 == 0.0:
        return n_u2 * n_v2
    if n_u2 == 0.0 or n_v2 == 0.0:
        return n_u1 * n_v1
    return None


def rank2_nuclear_norm(pair: Rank2Outer) -> float:
    """Nuclear norm of ``u1 v1^T + u2 v2^T``: sqrt(tr(M) + 2 sqrt(det(M)))."""
    collapsed = _collapsed_rank1(pair)
    if collapsed is not None:
        return collapsed
    g = gram_reduce(pair)
    return math.sqrt(g.trace + 2.0 * g.sqrt_det)


def rank2_frobenius_norm(pair: Rank2Outer) -> float:
    """Frobenius norm of ``u1 v1^T + u2 v2^T``: sqrt(tr(M))."""
    collapsed = _collapsed_rank1(pair)
    if collapsed is not None:
        return collapsed
    return math.sqrt(gram_reduce(pair).trace)


def pair_cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between two nonzero vectors, clamped to [-1, 1].

    The clamp guards against dot-product roundoff pushing |cos| above one.
    """
    c = float(a @ b) / (float(np.linalg.norm(a)) * float(np.linalg.norm(b)))
    return min(1.0, max(-1.0, c))
