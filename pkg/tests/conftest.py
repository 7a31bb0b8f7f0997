import numpy as np
import pytest

from llscond import ExampleSpec, build_problem, example_problem, geometry, solve


def random_orthogonal(rng, k):
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    return q * np.sign(np.diag(r))


def random_problem(rng, m, n, log_kappa=1.0, residual_scale=0.5, scale=1.0):
    """Full-rank (A, b) with controlled kappa and residual size.

    A = U diag(s) V^T with s log-spaced from `scale` down to
    `scale * 10**-log_kappa`; b combines A x0 with a component outside
    col(A) of norm residual_scale * ||A x0|| (only possible when m > n).
    """
    u = random_orthogonal(rng, m)
    v = random_orthogonal(rng, n)
    s = scale * np.logspace(0.0, -log_kappa, n) if n > 1 else np.array([scale])
    a = u[:, :n] @ (s[:, None] * v.T)
    x0 = rng.standard_normal(n)
    while np.linalg.norm(x0) < 1e-2:
        x0 = rng.standard_normal(n)
    b = a @ x0
    if m > n and residual_scale > 0.0:
        coeffs = rng.standard_normal(m - n)
        out_of_range = u[:, n:] @ (coeffs / np.linalg.norm(coeffs))
        b = b + residual_scale * np.linalg.norm(b) * out_of_range
    return build_problem(a, b)


def solved(problem):
    solution = solve(problem)
    return problem, solution, geometry(problem, solution)


def family(alpha=0.1, beta=1.0, phi=np.pi / 10, epsilon=1e-8):
    problem, forms = example_problem(ExampleSpec(alpha=alpha, beta=beta, phi=phi, epsilon=epsilon))
    return problem, forms


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
