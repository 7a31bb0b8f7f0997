"""Built-in 3x2 example family with independently tunable conditioning.

After the example on p. 238 of Golub & Van Loan:

    A = [[1, 0],          b = [beta cos(phi),      dA = [[0, 0],
         [0, alpha],           beta sin(phi),            [0, 0],
         [0, 0]]               1]                        [0, epsilon]]

Closed forms:

    x = (beta cos(phi), (beta/alpha) sin(phi)),   r = (0, 0, 1)
    kappa = 1/alpha
    nu = 1/sqrt((alpha cos(phi))^2 + sin(phi)^2)
    tan(theta) = 1/beta

so kappa, theta, and nu are steered independently by alpha, beta, and phi.
Under dA the second solution entry becomes
``(epsilon + alpha beta sin(phi)) / (alpha^2 + epsilon^2)`` and the relative
solution change is, to first order,

    ||dx||/||x|| = epsilon / (alpha beta sqrt((alpha cos(phi))^2 + sin(phi)^2)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError
from .problem import LlsProblem, build_problem


@dataclass(frozen=True)
class ExampleSpec:
    """Parameters of the example family; expected ranges are advisory.

    The family is intended for ``0 < alpha < 1``, ``beta > 0``, and
    ``0 < epsilon << alpha``; values outside those ranges emit a warning but
    are not rejected.
    """

    alpha: float
    beta: float
    phi: float
    epsilon: float = 1e-8

    def __post_init__(self):
        for name in ("alpha", "beta", "phi", "epsilon"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if not 0.0 < self.alpha < 1.0:
            warnings.warn(f"alpha={self.alpha} outside the intended range (0, 1)", UserWarning)
        if self.beta <= 0.0:
            warnings.warn(f"beta={self.beta} should be positive", UserWarning)
        if not 0.0 < self.epsilon <= 0.1 * self.alpha:
            warnings.warn(
                f"epsilon={self.epsilon} is not small relative to alpha={self.alpha}; "
                "first-order predictions may be inaccurate",
                UserWarning,
            )


@dataclass(frozen=True)
class ClosedForms:
    """The family's analytic quantities, for side-by-side reporting."""

    x: np.ndarray
    residual: np.ndarray
    kappa: float
    nu: float
    tan_theta: float
    perturbed_x: np.ndarray
    predicted_relative_change: float


def example_matrix(spec: ExampleSpec) -> np.ndarray:
    return np.array([[1.0, 0.0], [0.0, spec.alpha], [0.0, 0.0]])


def example_rhs(spec: ExampleSpec) -> np.ndarray:
    return np.array([spec.beta * math.cos(spec.phi), spec.beta * math.sin(spec.phi), 1.0])


def example_perturbation(spec: ExampleSpec) -> np.ndarray:
    """The rank-1 matrix perturbation placing epsilon in entry (3, 2)."""
    d_a = np.zeros((3, 2))
    d_a[2, 1] = spec.epsilon
    return d_a


def closed_forms(spec: ExampleSpec) -> ClosedForms:
    a, b, phi, eps = spec.alpha, spec.beta, spec.phi, spec.epsilon
    radical = math.sqrt((a * math.cos(phi)) ** 2 + math.sin(phi) ** 2)
    x = np.array([b * math.cos(phi), (b / a) * math.sin(phi)])
    perturbed = np.array(
        [b * math.cos(phi), (eps + a * b * math.sin(phi)) / (a * a + eps * eps)]
    )
    return ClosedForms(
        x=x,
        residual=np.array([0.0, 0.0, 1.0]),
        kappa=1.0 / a,
        nu=1.0 / radical,
        tan_theta=1.0 / b,
        perturbed_x=perturbed,
        predicted_relative_change=eps / (a * b * radical),
    )


def example_problem(spec: ExampleSpec) -> tuple[LlsProblem, ClosedForms]:
    """Build the family instance and return it with its closed forms."""
    return build_problem(example_matrix(spec), example_rhs(spec)), closed_forms(spec)
