"""Scikit-learn estimator facade over the sensitivity analysis.

``ConditionedLeastSquares`` is an ordinary no-intercept linear least-squares
regressor whose ``fit`` additionally runs the full conditioning analysis and
exposes it as fitted attributes, so the diagnosis drops into sklearn
pipelines, ``clone``, and parameter search unchanged.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from .conditioning import (
    ConditionReport,
    OptimizerConfig,
    ScaleFactors,
    condition_report,
)
from .exceptions import ValidationError
from .problem import build_problem, geometry, solve


class ConditionedLeastSquares(RegressorMixin, BaseEstimator):
    """Least-squares fit with condition-number diagnostics.

    Solves ``min ||y - X w||_2`` (no intercept) for a full-column-rank X and
    computes how sensitive the coefficients are to perturbations of X and y,
    measured in scaled 2-norms.

    Parameters
    ----------
    compute_exact : bool, default=False
        Also run the sphere maximization for the exact matrix condition
        number (the bracket between the lower and upper estimates is always
        computed).
    scales : "default" or tuple of 3 floats, default="default"
        Scale factors (phi_A, phi_B, phi_X) for the perturbation norms;
        "default" uses (||X||_2, ||y||_2, ||w||_2).
    restarts : int, default=8
        Sphere-maximization restarts (first start is the sigma_min right
        singular direction).
    max_iterations : int, default=500
    step_tolerance : float, default=1e-12
    value_tolerance : float, default=1e-10
    random_state : int, default=0
        Seed for the pseudo-random restart directions.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
        Least-squares coefficients.
    residual_ : ndarray of shape (n_samples,)
        ``y - X @ coef_``, orthogonal to the column space of X.
    sigma_min_, kappa_, nu_, tan_theta_, sec_theta_ : float
        Smallest singular value and the conditioning geometry of the fit.
    chi_b_ : float
        Condition number of the coefficients with respect to y.
    chi_A_lower_, chi_A_upper_ : float
        Malyshev lower and Bjorck upper estimates of the condition number
        with respect to X (within a factor sqrt(2) of each other).
    chi_A_exact_ : float or None
        Exact condition number with respect to X when ``compute_exact``.
    maximizer_ : ndarray or None
        Unit coefficient direction attaining ``chi_A_exact_``.
    report_ : ConditionReport
        The assembled report object.
    """

    def __init__(
        self,
        compute_exact: bool = False,
        scales="default",
        restarts: int = 8,
        max_iterations: int = 500,
        step_tolerance: float = 1e-12,
        value_tolerance: float = 1e-10,
        random_state: int = 0,
    ):
        self.compute_exact = compute_exact
        self.scales = scales
        self.restarts = restarts
        self.max_iterations = max_iterations
        self.step_tolerance = step_tolerance
        self.value_tolerance = value_tolerance
        self.random_state = random_state

    def _resolve_scales(self, problem, solution) -> ScaleFactors:
        if isinstance(self.scales, str):
            if self.scales != "default":
                raise ValidationError(f"scales must be 'default' or 3 floats, got {self.scales!r}")
            return ScaleFactors.default(problem, solution)
        values = tuple(float(v) for v in self.scales)
        if len(values) != 3:
            raise ValidationError(f"scales must have 3 entries, got {len(values)}")
        return ScaleFactors(*values)

    def fit(self, X, y):
        X = check_array(X, dtype=float)
        y = column_or_1d(y, dtype=float)
        problem = build_problem(X, y)
        solution = solve(problem)
        geom = geometry(problem, solution)
        scales = self._resolve_scales(problem, solution)
        config = OptimizerConfig(
            restarts=self.restarts,
            max_iterations=self.max_iterations,
            step_tolerance=self.step_tolerance,
            value_tolerance=self.value_tolerance,
            seed=self.random_state,
        )
        report: ConditionReport = condition_report(
            problem, solution, scales, config, compute_exact=self.compute_exact
        )

        self.n_features_in_ = X.shape[1]
        self.coef_ = solution.x
        self.residual_ = solution.residual
        self.sigma_min_ = geom.sigma_min
        self.kappa_ = geom.kappa
        self.nu_ = geom.nu
        self.tan_theta_ = geom.tan_theta
        self.sec_theta_ = geom.sec_theta
        self.chi_b_ = report.chi_b
        self.chi_A_lower_ = report.chi_A_lower
        self.chi_A_upper_ = report.chi_A_upper
        self.chi_A_exact_ = report.chi_A_exact
        self.maximizer_ = report.maximizer
        self.report_ = report
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValidationError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.coef_
