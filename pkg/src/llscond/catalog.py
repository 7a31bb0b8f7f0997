"""Published condition numbers and bound coefficients for the LLS solution.

Evaluates, on a solved problem, the named quantities from the perturbation
literature so they can be compared on equal footing:

==================  =================  ============  ===========================================
name                norms for dA       status        formula (s = sigma_min)
==================  =================  ============  ===========================================
bjorck_upper        ||dA||_2/||A||_2   approx        (||A||_2/s) (||r||/(s ||x||) + 1)
malyshev_lower      ||dA||_2/||A||_2   approx        (||A||_2/s) sqrt(||r||^2/(s||x||)^2 + 1)
geurts_frobenius    ||dA||_F/||A||_F   exact         (||A||_F/s) sqrt(||r||^2/(s||x||)^2 + 1)
gratton_joint       ||[a dA, b db]||_F exact         (1/s) sqrt(||r||^2/(a s)^2 + ||x||^2/a^2 + 1/b^2)
higham_2002         ||dA||_2/||A||_2   overestimate  kappa (2 + (kappa+1) ||r||/(||A|| ||x||))
gvl_textbook        ||dA||_2/||A||_2   overestimate  2 sec(theta) kappa + tan(theta) kappa^2
attainable_ref.     ||dA||_2/||A||_2   approx        kappa (nu tan(theta) + 1) + nu sec(theta)
==================  =================  ============  ===========================================

Sources: Bjorck (1996, eqn. 1.4.28); Geurts (1982, eqn. 4.3); Gratton (1996,
eqn. 2.1); Malyshev (2003, eqn. 2.4) -- whose Frobenius-data variant shares
the Geurts radical and is reported through ``geurts_frobenius``; Higham
(2002, eqn. 20.1); and the textbook coefficient of Golub & Van Loan (eqn.
5.3.8, restated in the LAPACK users' guide and by Demmel), which replaces nu
by kappa and 1 by sec(theta) and can overestimate by a factor kappa/2.

The "overestimate" entries are coefficients of eps in first-order bounds;
the report stores the coefficients themselves, never eps-multiplied bounds.
``attainable_reference`` is the first-order coefficient that random
perturbations can actually approach: chi_A's upper estimate plus chi_b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .conditioning import ScaleFactors, chi_A_bounds
from .exceptions import ValidationError
from .problem import Geometry, LlsProblem, LlsSolution


class NormRegime(str, Enum):
    SPECTRAL = "spectral"
    FROBENIUS = "frobenius"
    JOINT_FROBENIUS = "joint-frobenius"


class EntryStatus(str, Enum):
    EXACT = "exact"
    APPROX = "approx"
    OVERESTIMATE = "overestimate"


@dataclass(frozen=True)
class GrattonWeights:
    """Weights (alpha_w, beta_w) of the joint data norm ``||[a dA, b db]||_F``."""

    alpha_w: float
    beta_w: float

    def __post_init__(self):
        if not (self.alpha_w > 0.0 and math.isfinite(self.alpha_w)):
            raise ValidationError(f"alpha_w must be positive, got {self.alpha_w}")
        if not (self.beta_w > 0.0 and math.isfinite(self.beta_w)):
            raise ValidationError(f"beta_w must be positive, got {self.beta_w}")


DEFAULT_GRATTON_WEIGHTS = GrattonWeights(1.0, 1.0)


@dataclass(frozen=True)
class BoundCatalogEntry:
    name: str
    value: float
    norm_regime: NormRegime
    status: EntryStatus

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value >= 0.0):
            raise ValidationError(f"catalog entry {self.name} has invalid value {self.value}")


def evaluate_catalog(
    problem: LlsProblem,
    solution: LlsSolution,
    geom: Geometry,
    scales: ScaleFactors,
    weights: GrattonWeights = DEFAULT_GRATTON_WEIGHTS,
    eps: float = 1e-8,
) -> list[BoundCatalogEntry]:
    """Evaluate every catalog entry on a solved problem.

    ``eps`` is validated for the bound-style (overestimate) entries but the
    stored values are coefficients, independent of eps.
    """
    if not (eps > 0.0 and math.isfinite(eps)):
        raise ValidationError(f"eps must be positive and finite, got {eps}")
    s = geom.sigma_min
    r_norm = float(np.linalg.norm(solution.residual))
    x_norm = float(np.linalg.norm(solution.x))
    a_fro = float(np.linalg.norm(problem.A))
    a_spec = problem.spectral_norm
    kappa, nu = geom.kappa, geom.nu
    tan_t, sec_t = geom.tan_theta, geom.sec_theta

    lower, upper = chi_A_bounds(problem, solution, scales)
    shared_radical = math.hypot(r_norm / (s * x_norm), 1.0)
    geurts = (a_fro / s) * shared_radical
    gratton = (1.0 / s) * math.sqrt(
        (r_norm / (weights.alpha_w * s)) ** 2
        + (x_norm / weights.alpha_w) ** 2
        + 1.0 / weights.beta_w**2
    )
    higham = kappa * (2.0 + (kappa + 1.0) * r_norm / (a_spec * x_norm))
    gvl = 2.0 * sec_t * kappa + tan_t * kappa * kappa
    attainable = kappa * (nu * tan_t + 1.0) + nu * sec_t

    return [
        BoundCatalogEntry("bjorck_upper", upper, NormRegime.SPECTRAL, EntryStatus.APPROX),
        BoundCatalogEntry("malyshev_lower", lower, NormRegime.SPECTRAL, EntryStatus.APPROX),
        BoundCatalogEntry("geurts_frobenius", geurts, NormRegime.FROBENIUS, EntryStatus.EXACT),
        BoundCatalogEntry("gratton_joint", gratton, NormRegime.JOINT_FROBENIUS, EntryStatus.EXACT),
        BoundCatalogEntry("higham_2002", higham, NormRegime.SPECTRAL, EntryStatus.OVERESTIMATE),
        BoundCatalogEntry("gvl_textbook", gvl, NormRegime.SPECTRAL, EntryStatus.OVERESTIMATE),
        BoundCatalogEntry("attainable_reference", attainable, NormRegime.SPECTRAL, EntryStatus.APPROX),
    ]


def overestimate_ratio(problem: LlsProblem, solution: LlsSolution, geom: Geometry) -> float:
    """Ratio of the textbook coefficient to the attainable reference.

    For the built-in example family with phi = pi/2 and alpha << 1 this
    approaches kappa/2, quantifying how badly the textbook bound can
    overestimate.
    """
    kappa, nu = geom.kappa, geom.nu
    tan_t, sec_t = geom.tan_theta, geom.sec_theta
    gvl = 2.0 * sec_t * kappa + tan_t * kappa * kappa
    attainable = kappa * (nu * tan_t + 1.0) + nu * sec_t
    return gvl / attainable
