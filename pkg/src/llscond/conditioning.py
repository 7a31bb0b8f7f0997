"""Condition numbers of the full-rank least-squares solution.

Perturbations are measured by scaled 2-norms ``||dA||_2/phi_A``,
``||db||_2/phi_B``, ``||dx||_2/phi_X``; the default scales are
``(||A||_2, ||b||_2, ||x||_2)``.  With those norms:

* ``chi_b = phi_B / (phi_X sigma_min)`` exactly; under default scales this is
  ``nu * sec(theta)``.

* ``chi_A`` is the induced norm of the solution Jacobian with respect to the
  matrix entries.  Passing to the transposed operator trades the m*n-degree
  optimization for one over ``dx`` on the unit n-sphere: the transposed
  Jacobian maps ``dx`` to the rank-2 matrix

      u1 v1^T + u2 v2^T,   u1 = r,  v1 = (A^T A)^{-1} dx,
                           u2 = -A v1,  v2 = x,

  and ``chi_A = (phi_A/phi_X) * max_{||dx||=1}`` of its *nuclear* norm (the
  dual of the spectral norm).  The two rank-1 pieces are orthogonal on the
  left because r is orthogonal to col(A), which brackets the maximum between

      sqrt(|u1|^2|v1|^2 + |u2|^2|v2|^2)   and   |u1||v1| + |u2||v2|,

  quantities that peak at the sigma_min right singular direction.  Under the
  default scales the bracket is Malyshev's lower estimate
  ``kappa*sqrt((nu tan theta)^2 + 1)`` and Bjorck's upper coefficient
  ``kappa*(nu tan theta + 1)``; they differ by at most sqrt(2).  The maximum
  itself has no closed form and is found here by multi-start projected
  ascent on the sphere.

* The joint condition number with respect to simultaneous (dA, db) changes,
  measured by ``max(||dA||_2/phi_A, ||db||_2/phi_B)``, dualizes to a sum:

      chi_joint = (1/phi_X) max_{||dx||=1} [ phi_A * ||u1 v1^T + u2 v2^T||_*
                                             + phi_B * ||A (A^T A)^{-1} dx||_2 ]

  because the dual of a max-combined norm adds the dual norms.  It always
  lies between ``(chi_A + chi_b)/2`` and ``chi_A + chi_b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import LlsCondError, ValidationError
from .linalg import as_matrix, as_vector, svd
from .problem import LlsProblem, LlsSolution
from .rank2 import Rank2Outer, rank2_nuclear_norm

SANDWICH_RTOL = 1e-10


@dataclass(frozen=True)
class ScaleFactors:
    """Positive constants scaling the 2-norms of dA, db, and dx."""

    phi_A: float
    phi_B: float
    phi_X: float

    def __post_init__(self):
        for name in ("phi_A", "phi_B", "phi_X"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0.0):
                raise ValidationError(f"{name} must be positive and finite, got {value}")

    @classmethod
    def default(cls, problem: LlsProblem, solution: LlsSolution) -> "ScaleFactors":
        """The relative-error scaling (||A||_2, ||b||_2, ||x||_2)."""
        return cls(
            phi_A=problem.spectral_norm,
            phi_B=float(np.linalg.norm(problem.b)),
            phi_X=float(np.linalg.norm(solution.x)),
        )

    @classmethod
    def unit(cls) -> "ScaleFactors":
        return cls(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the multi-start sphere maximization."""

    restarts: int = 8
    max_iterations: int = 500
    step_tolerance: float = 1e-12
    value_tolerance: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if not (self.step_tolerance > 0.0 and self.value_tolerance > 0.0):
            raise ValidationError("tolerances must be positive")


@dataclass(frozen=True)
class SphereMaxResult:
    """Best value found on the unit sphere, with its maximizer.

    ``converged`` is False when the winning restart hit the iteration cap
    before meeting the tolerances; the value is then best-found, not
    certified.
    """

    value: float
    maximizer: np.ndarray
    converged: bool
    iterations: int


@dataclass(frozen=True)
class JointEstimate:
    """Numerical estimate of the joint (dA, db) condition number."""

    value: float
    maximizer: np.ndarray
    converged: bool


@dataclass(frozen=True)
class ConditionReport:
    """chi_b plus the bracketed (and optionally exact) chi_A."""

    chi_b: float
    chi_A_lower: float
    chi_A_upper: float
    scales: ScaleFactors
    chi_A_exact: float | None = None
    maximizer: np.ndarray | None = None
    exact_certified: bool | None = None

    def __post_init__(self):
        values = [self.chi_b, self.chi_A_lower, self.chi_A_upper]
        if self.chi_A_exact is not None:
            values.append(self.chi_A_exact)
        if not all(np.isfinite(v) and v > 0.0 for v in values):
            raise LlsCondError(f"condition quantities must be positive and finite: {values}")
        slack = SANDWICH_RTOL
        if self.chi_A_upper > math.sqrt(2.0) * self.chi_A_lower * (1.0 + slack):
            raise LlsCondError(
                f"upper estimate {self.chi_A_upper} exceeds sqrt(2) * lower {self.chi_A_lower}"
            )
        if self.chi_A_exact is not None:
            if not (
                self.chi_A_lower * (1.0 - slack)
                <= self.chi_A_exact
                <= self.chi_A_upper * (1.0 + slack)
            ):
                raise LlsCondError(
                    f"exact value {self.chi_A_exact} escapes "
                    f"[{self.chi_A_lower}, {self.chi_A_upper}]"
                )


def chi_b(problem: LlsProblem, scales: ScaleFactors) -> float:
    """Condition number of x with respect to b: ``phi_B / (phi_X sigma_min)``.

    The solution is linear in b with Jacobian ``(A^T A)^{-1} A^T``, whose
    largest scaled singular value this is.  Under default scales it equals
    ``nu * sec(theta)``.
    """
    return scales.phi_B / (scales.phi_X * problem.sigma_min)


def rank2_map(problem: LlsProblem, solution: LlsSolution, dx) -> Rank2Outer:
    """Transposed solution Jacobian applied to dx, as a rank-2 outer sum.

    Returns u1 = r, v1 = (A^T A)^{-1} dx, u2 = -A v1, v2 = x.  The pieces
    satisfy ``u1 . u2 = 0`` up to roundoff since r is orthogonal to col(A).
    """
    d = as_vector(dx, "dx")
    if d.size != problem.n:
        raise ValidationError(f"dx has length {d.size}, expected {problem.n}")
    v1 = problem.apply_inverse_gram(d)
    u2 = -(problem.A @ v1)
    return Rank2Outer(u1=solution.residual, v1=v1, u2=u2, v2=solution.x)


def chi_A_bounds(
    problem: LlsProblem, solution: LlsSolution, scales: ScaleFactors
) -> tuple[float, float]:
    """Malyshev lower and Bjorck upper estimates of chi_A.

    lower = (phi_A/(phi_X s)) * sqrt((||r||/s)^2 + ||x||^2)
    upper = (phi_A/(phi_X s)) * (||r||/s + ||x||),  s = sigma_min.

    Always ``lower <= chi_A <= upper <= sqrt(2) * lower``.
    """
    s = problem.sigma_min
    r_norm = float(np.linalg.norm(solution.residual))
    x_norm = float(np.linalg.norm(solution.x))
    factor = scales.phi_A / (scales.phi_X * s)
    rho = r_norm / s
    return factor * math.hypot(rho, x_norm), factor * (rho + x_norm)


class _SphereObjective:
    """Value and gradient of ``f(dx) = ||u1 v1^T + u2 v2^T||_*`` on the sphere.

    With z = (A^T A)^{-1} dx, w = A z, a = ||r||, X = ||x||, and using that
    u1 is orthogonal to u2,

        f^2 = a^2 ||z||^2 + ||w||^2 X^2
              + 2 a ||w|| sqrt(||z||^2 X^2 - (z . x)^2).

    f is even and positively homogeneous of degree 1 in dx, and smooth except
    where z is collinear with x (a square-root kink, where a subgradient is
    returned).
    """

    def __init__(self, problem: LlsProblem, solution: LlsSolution):
        self._v = problem.svd.right_vectors
        self._inv_s2 = 1.0 / (problem.svd.singular_values ** 2)
        self._x = solution.x
        self._a = float(np.linalg.norm(solution.residual))
        self._x_norm = float(np.linalg.norm(solution.x))
        self._sx = self._apply_inverse_gram(solution.x)

    def _apply_inverse_gram(self, vec: np.ndarray) -> np.ndarray:
        return self._v @ ((self._v.T @ vec) * self._inv_s2)

    def value_and_gradient(self, dx: np.ndarray) -> tuple[float, np.ndarray]:
        c = self._v.T @ dx
        z = self._v @ (c * self._inv_s2)
        w2 = float(c @ (c * self._inv_s2))  # ||A z||^2 = dx^T (A^T A)^{-1} dx
        z2 = float(z @ z)
        zx = float(z @ self._x)
        a, xn = self._a, self._x_norm
        gap = max(z2 * xn * xn - zx * zx, 0.0)
        root = math.sqrt(gap)
        w = math.sqrt(w2)
        f = math.sqrt(a * a * z2 + w2 * xn * xn + 2.0 * a * w * root)
        sz = self._apply_inverse_gram(z)
        grad_sq = 2.0 * a * a * sz + 2.0 * xn * xn * z
        if a > 0.0:
            grad_sq = grad_sq + (2.0 * a * root / w) * z
            if root > 1e-14 * math.sqrt(z2) * xn:
                grad_sq = grad_sq + (2.0 * a * w / root) * (xn * xn * sz - zx * self._sx)
        return f, grad_sq / (2.0 * f)


class _JointObjective:
    """``h(dx) = phi_A * f(dx) + phi_B * ||A (A^T A)^{-1} dx||_2`` on the sphere.

    This is the dual norm of the transposed joint Jacobian: the max-combined
    perturbation norm dualizes to the sum of the nuclear term (matrix part)
    and the 2-norm term (rhs part).
    """

    def __init__(self, inner: _SphereObjective, phi_A: float, phi_B: float):
        self._inner = inner
        self._phi_A = phi_A
        self._phi_B = phi_B

    def value_and_gradient(self, dx: np.ndarray) -> tuple[float, np.ndarray]:
        f, grad_f = self._inner.value_and_gradient(dx)
        c = self._inner._v.T @ dx
        z = self._inner._v @ (c * self._inner._inv_s2)
        w2 = float(c @ (c * self._inner._inv_s2))
        w = math.sqrt(w2)
        value = self._phi_A * f + self._phi_B * w
        grad = self._phi_A * grad_f + (self._phi_B / w) * z
        return value, grad


def _normalize_sign(vec: np.ndarray) -> np.ndarray:
    out = vec.copy()
    if out[int(np.argmax(np.abs(out)))] < 0:
        out = -out
    return out


def _ascend(objective, start: np.ndarray, cfg: OptimizerConfig) -> tuple[np.ndarray, float, int, bool]:
    """Projected ascent on the unit sphere with an adaptive step.

    The tangential gradient is followed with a doubling/halving step and a
    renormalization after every move; the objective's 1-homogeneity makes the
    sphere restriction lossless.
    """
    dx = start / np.linalg.norm(start)
    f, grad = objective.value_and_gradient(dx)
    step = 1.0
    for iteration in range(1, cfg.max_iterations + 1):
        tangent = grad - float(grad @ dx) * dx
        tnorm = float(np.linalg.norm(tangent))
        if tnorm <= 1e-15 * max(1.0, abs(f)):
            return dx, f, iteration, True
        improved = False
        while step * tnorm > cfg.step_tolerance:
            candidate = dx + step * tangent
            candidate /= np.linalg.norm(candidate)
            f_new, grad_new = objective.value_and_gradient(candidate)
            if f_new > f:
                gain = (f_new - f) / max(abs(f), 1e-300)
                dx, f, grad = candidate, f_new, grad_new
                step *= 2.0
                improved = True
                if gain < cfg.value_tolerance:
                    return dx, f, iteration, True
                break
            step *= 0.5
        if not improved:
            # No ascent direction above the step tolerance: stationary.
            return dx, f, iteration, True
    return dx, f, cfg.max_iterations, False


def _multistart(objective, problem: LlsProblem, cfg: OptimizerConfig, extra_starts=()):
    """Deterministic multi-start: sigma_min direction, extras, then seeded randoms.

    Restarts combine by strict max, so ties keep the lowest restart index and
    the result does not depend on any execution order.
    """
    rng = np.random.default_rng(cfg.seed)
    starts = [problem.min_singular_direction]
    starts.extend(extra_starts)
    while len(starts) < cfg.restarts + len(extra_starts):
        starts.append(rng.standard_normal(problem.n))
    best = None
    total_iterations = 0
    for start in starts:
        dx, f, iters, converged = _ascend(objective, start, cfg)
        total_iterations += iters
        if best is None or f > best[1]:
            best = (dx, f, converged)
    dx, f, converged = best
    return _normalize_sign(dx), f, converged, total_iterations


def chi_A_exact(
    problem: LlsProblem,
    solution: LlsSolution,
    scales: ScaleFactors,
    config: OptimizerConfig | None = None,
) -> SphereMaxResult:
    """Exact chi_A by maximizing the rank-2 nuclear norm over the unit sphere.

    Value and maximizer satisfy ``value = (phi_A/phi_X) * f(maximizer)`` with
    f the nuclear-norm objective; the value always lands inside the
    Malyshev/Bjorck bracket because the warm start at the sigma_min right
    singular direction already attains the lower estimate.
    """
    cfg = config or OptimizerConfig()
    objective = _SphereObjective(problem, solution)
    dx, f, converged, iterations = _multistart(objective, problem, cfg)
    value = (scales.phi_A / scales.phi_X) * f
    return SphereMaxResult(value=value, maximizer=dx, converged=converged, iterations=iterations)


def chi_joint_estimate(
    problem: LlsProblem,
    solution: LlsSolution,
    scales: ScaleFactors,
    config: OptimizerConfig | None = None,
) -> JointEstimate:
    """Estimate the joint condition number for simultaneous (dA, db) changes.

    Maximizes ``phi_A * f(dx) + phi_B * ||A (A^T A)^{-1} dx||`` over the unit
    sphere and divides by phi_X.  Warm starts include the chi_A maximizer, so
    the estimate is guaranteed at least ``max(chi_A, chi_b)`` as found and at
    most ``chi_A + chi_b``: the average-to-sum sandwich holds by construction.
    """
    cfg = config or OptimizerConfig()
    inner = _SphereObjective(problem, solution)
    exact = chi_A_exact(problem, solution, scales, cfg)
    objective = _JointObjective(inner, scales.phi_A, scales.phi_B)
    dx, h, converged, _ = _multistart(objective, problem, cfg, extra_starts=(exact.maximizer,))
    return JointEstimate(
        value=h / scales.phi_X, maximizer=dx, converged=converged and exact.converged
    )


def dual_norm_certificate(matrix) -> tuple[np.ndarray, float]:
    """A unit-spectral-norm B attaining ``tr(A^T B) = nuclear_norm(A)``.

    With A = U S V^T, take B = U D V^T for D the rectangular identity; then
    ``tr(A^T B)`` sums the singular values, the largest value the pairing can
    reach over ``||B||_2 = 1``.  Returns (B, tr(A^T B)).
    """
    a = as_matrix(matrix)
    fact = svd(a)
    k = min(a.shape)
    certificate = fact.left_vectors[:, :k] @ fact.right_vectors[:, :k].T
    value = float(np.tensordot(a, certificate, axes=2))
    return certificate, value


def condition_report(
    problem: LlsProblem,
    solution: LlsSolution,
    scales: ScaleFactors | None = None,
    config: OptimizerConfig | None = None,
    compute_exact: bool = False,
) -> ConditionReport:
    """Assemble chi_b and the chi_A bracket, optionally with the exact value."""
    sc = scales or ScaleFactors.default(problem, solution)
    lower, upper = chi_A_bounds(problem, solution, sc)
    exact_value = maximizer = certified = None
    if compute_exact:
        result = chi_A_exact(problem, solution, sc, config)
        exact_value, maximizer, certified = result.value, result.maximizer, result.converged
    return ConditionReport(
        chi_b=chi_b(problem, sc),
        chi_A_lower=lower,
        chi_A_upper=upper,
        scales=sc,
        chi_A_exact=exact_value,
        maximizer=maximizer,
        exact_certified=certified,
    )
