"""Empirical validation of the analytic condition numbers.

Everything here re-solves perturbed problems and compares the observed
solution change against the first-order predictions: finite-difference
estimates of chi_b, worst-case matrix perturbations built from the rank-2
structure of the transposed Jacobian, and randomized trial batches that
check the error bound

    ||dx||/phi_X  <=  chi_A * ||dA||/phi_A + chi_b * ||db||/phi_B + o(eps).

The bounds are asymptotic, so trials probe a regime where second-order
effects stay below a configurable slack (1e-3 by default at eps ~ 1e-8
relative); a batch whose max ratio exceeds 1 + slack is flagged as outside
the first-order regime rather than treated as a bound violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .conditioning import ScaleFactors, chi_A_bounds, chi_b, rank2_map
from .exceptions import LlsCondError, ValidationError
from .linalg import _qr_solve, as_matrix, as_vector, qr_least_squares
from .problem import LlsProblem, LlsSolution, solve


@dataclass(frozen=True)
class PerturbationTrial:
    """One perturbed re-solve and its ratio to the first-order bound."""

    dA: np.ndarray
    db: np.ndarray
    eps: float
    dx_observed: np.ndarray
    bound_predicted: float
    ratio: float


@dataclass(frozen=True)
class TrialSummary:
    """Aggregate of a trial batch; deterministic for a fixed seed."""

    trials: int
    max_ratio: float
    mean_ratio: float
    eps_used: float
    violations: int
    slack: float
    failures: int

    @property
    def in_first_order_regime(self) -> bool:
        """False when eps was too large for the asymptotic bound to hold."""
        return self.max_ratio <= 1.0 + self.slack


def perturbed_solve(problem: LlsProblem, dA, db) -> np.ndarray:
    """Solution change ``argmin ||(b+db) - (A+dA) u|| - x``.

    Raises :class:`RankDeficientError` when the perturbed matrix loses full
    column rank.
    """
    d_a = as_matrix(dA, "dA")
    d_b = as_vector(db, "db")
    if d_a.shape != problem.A.shape:
        raise ValidationError(f"dA has shape {d_a.shape}, expected {problem.A.shape}")
    if d_b.size != problem.m:
        raise ValidationError(f"db has length {d_b.size}, expected {problem.m}")
    x = _qr_solve(problem.A, problem.b)
    x_perturbed = qr_least_squares(problem.A + d_a, problem.b + d_b)
    return x_perturbed - x


def finite_difference_chi_b(
    problem: LlsProblem,
    eps: float | None = None,
    directions: int = 120,
    seed: int = 0,
    scales: ScaleFactors | None = None,
) -> float:
    """Empirical chi_b from perturbed re-solves over probe directions of b.

    Probes every left singular direction of A (the response peaks at the one
    belonging to sigma_min) plus ``directions`` random unit vectors, each at
    step ``eps`` (default ``1e-7 * ||b||_2``), and returns the largest scaled
    ratio ``(||dx||/phi_X) / (||db||/phi_B)``.  Since x is linear in b the
    estimate matches the analytic chi_b to rounding when the probe set
    includes the maximizing direction; a finite probe set can never exceed
    the true operator norm beyond discretization noise.
    """
    if eps is None:
        eps = 1e-7 * float(np.linalg.norm(problem.b))
    if not (eps > 0.0 and math.isfinite(eps)):
        raise ValidationError(f"eps must be positive and finite, got {eps}")
    solution = solve(problem)
    sc = scales or ScaleFactors.default(problem, solution)
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(problem.A, mode="reduced")

    probes = [problem.svd.left_vectors[:, i] for i in range(problem.n)]
    for _ in range(directions):
        d = rng.standard_normal(problem.m)
        probes.append(d / np.linalg.norm(d))

    best = 0.0
    for direction in probes:
        db = eps * direction
        x_perturbed = solve_triangular(r, q.T @ (problem.b + db), lower=False)
        observed = float(np.linalg.norm(x_perturbed - solution.x)) / sc.phi_X
        best = max(best, observed / (eps / sc.phi_B))
    return best


def worst_case_perturbation(
    problem: LlsProblem,
    solution: LlsSolution,
    eps: float,
    maximizer: np.ndarray | None = None,
    scales: ScaleFactors | None = None,
) -> tuple[np.ndarray, float]:
    """Matrix perturbation of spectral norm ``eps * phi_A`` attaining chi_A.

    The direction comes from the rank-2 structure of the transposed Jacobian
    at ``maximizer`` (the sphere maximizer when available, else the sigma_min
    right singular direction): dA is ``eps * phi_A`` times the sum of the
    singular vector outer products of that rank-2 matrix, the certificate at
    which the nuclear norm's dual pairing is attained.  Returns the
    perturbation and the achieved ratio ``(||dx||/||x||) / eps``, which for
    small eps lands within the Malyshev/Bjorck bracket up to first-order
    slack.
    """
    if not (eps > 0.0 and math.isfinite(eps)):
        raise ValidationError(f"eps must be positive and finite, got {eps}")
    sc = scales or ScaleFactors.default(problem, solution)
    direction = problem.min_singular_direction if maximizer is None else as_vector(maximizer, "maximizer")
    pair = rank2_map(problem, solution, direction / np.linalg.norm(direction))
    g = pair.explicit_matrix()
    u, s, vt = np.linalg.svd(g, full_matrices=False)
    rank = int(np.sum(s > 1e-14 * s[0])) if s[0] > 0.0 else 0
    if rank == 0:
        raise LlsCondError("rank-2 image vanished; cannot build a worst-case direction")
    certificate = u[:, :rank] @ vt[:rank, :]
    d_a = (eps * sc.phi_A) * certificate
    dx = perturbed_solve(problem, d_a, np.zeros(problem.m))
    achieved = float(np.linalg.norm(dx)) / float(np.linalg.norm(solution.x)) / eps
    return d_a, achieved


def single_trial(
    problem: LlsProblem,
    dA,
    db,
    eps: float,
    chi_matrix: float,
    chi_rhs: float,
    scales: ScaleFactors,
) -> PerturbationTrial:
    """One perturbed re-solve scored against the first-order bound."""
    d_a = as_matrix(dA, "dA")
    d_b = as_vector(db, "db")
    dx = perturbed_solve(problem, d_a, d_b)
    rel_a = float(np.linalg.svd(d_a, compute_uv=False)[0]) / scales.phi_A
    rel_b = float(np.linalg.norm(d_b)) / scales.phi_B
    observed = float(np.linalg.norm(dx)) / scales.phi_X
    predicted = chi_matrix * rel_a + chi_rhs * rel_b
    if predicted == 0.0:
        ratio = 0.0 if observed == 0.0 else math.inf
    else:
        ratio = observed / predicted
    return PerturbationTrial(
        dA=d_a, db=d_b, eps=eps, dx_observed=dx, bound_predicted=predicted, ratio=ratio
    )


def run_trials(
    problem: LlsProblem,
    trials: int,
    eps: float,
    seed: int,
    slack: float = 1e-3,
    scales: ScaleFactors | None = None,
) -> TrialSummary:
    """Randomized perturbation batch checked against the first-order bound.

    Each trial draws dA and db with scaled norms uniformly in (0, eps],
    re-solves, and compares the observed ``||dx||/phi_X`` against
    ``chi_A_upper * ||dA||/phi_A + chi_b * ||db||/phi_B``.  Per-trial
    rank-deficiency failures are counted, not raised.  Identical seeds give
    identical summaries.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if eps < 0.0 or not math.isfinite(eps):
        raise ValidationError(f"eps must be nonnegative and finite, got {eps}")
    solution = solve(problem)
    sc = scales or ScaleFactors.default(problem, solution)
    _, upper = chi_A_bounds(problem, solution, sc)
    chi_rhs = chi_b(problem, sc)
    rng = np.random.default_rng(seed)

    ratios = []
    failures = 0
    for _ in range(trials):
        z = rng.standard_normal(problem.A.shape)
        w = rng.standard_normal(problem.m)
        rel_a = eps * rng.uniform(0.2, 1.0)
        rel_b = eps * rng.uniform(0.2, 1.0)
        z_norm = float(np.linalg.svd(z, compute_uv=False)[0])
        w_norm = float(np.linalg.norm(w))
        d_a = z * (rel_a * sc.phi_A / z_norm) if z_norm > 0 else z
        d_b = w * (rel_b * sc.phi_B / w_norm) if w_norm > 0 else w
        try:
            trial = single_trial(problem, d_a, d_b, eps, upper, chi_rhs, sc)
        except LlsCondError:
            failures += 1
            continue
        ratios.append(trial.ratio)

    completed = np.asarray(ratios) if ratios else np.zeros(0)
    return TrialSummary(
        trials=trials,
        max_ratio=float(completed.max()) if completed.size else 0.0,
        mean_ratio=float(completed.mean()) if completed.size else 0.0,
        eps_used=eps,
        violations=int(np.sum(completed > 1.0 + slack)),
        slack=slack,
        failures=failures,
    )
