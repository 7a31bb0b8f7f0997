import numpy as np
import pytest

from llscond import (
    RankDeficientError,
    ValidationError,
    ZeroSolutionError,
    build_problem,
    geometry,
    solve,
)
from conftest import family, random_problem


def test_build_accepts_valid_problem():
    problem = build_problem([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [1.0, 1.0, 1.0])
    assert problem.m == 3 and problem.n == 2


def test_build_rejects_zero_column():
    with pytest.raises(RankDeficientError):
        build_problem([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]], [1.0, 1.0, 1.0])


def test_build_example_family_sigma_min():
    problem, _ = family(alpha=0.1, beta=1.0, phi=np.pi / 10)
    assert problem.sigma_min == pytest.approx(0.1, abs=1e-15)


def test_build_rejects_underdetermined():
    with pytest.raises(ValidationError):
        build_problem([[1.0, 2.0, 3.0]], [1.0])


def test_build_rejects_zero_rhs():
    with pytest.raises(ValidationError):
        build_problem(np.eye(3), np.zeros(3))


def test_build_rejects_dimension_mismatch():
    with pytest.raises(ValidationError):
        build_problem(np.eye(3), np.ones(2))


def test_solve_example_family_closed_form():
    problem, forms = family(alpha=0.1, beta=1.0, phi=np.pi / 10)
    solution = solve(problem)
    assert np.allclose(solution.x, forms.x, rtol=1e-13)
    assert np.allclose(solution.residual, [0.0, 0.0, 1.0], atol=1e-14)


def test_solve_zero_residual():
    a = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    problem = build_problem(a, [3.0, 4.0, 0.0])
    solution = solve(problem)
    assert np.allclose(solution.residual, 0.0, atol=1e-14)
    assert geometry(problem, solution).tan_theta == pytest.approx(0.0, abs=1e-14)


def test_solve_rejects_zero_solution():
    a = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ZeroSolutionError):
        solve(build_problem(a, [0.0, 0.0, 1.0]))  # b orthogonal to col(A)


def test_solve_pythagoras(rng):
    for _ in range(30):
        problem = random_problem(rng, 9, 4, log_kappa=rng.uniform(0, 3))
        solution = solve(problem)
        b2 = np.linalg.norm(problem.b) ** 2
        parts = np.linalg.norm(solution.projection) ** 2 + np.linalg.norm(solution.residual) ** 2
        assert parts == pytest.approx(b2, rel=1e-12)


def test_geometry_example_family_closed_forms():
    alpha, beta, phi = 0.1, 1.0, np.pi / 10
    problem, forms = family(alpha, beta, phi)
    solution = solve(problem)
    geom = geometry(problem, solution)
    assert geom.kappa == pytest.approx(1.0 / alpha, rel=1e-14)
    assert geom.tan_theta == pytest.approx(1.0 / beta, rel=1e-13)
    expected_nu = 1.0 / np.sqrt((alpha * np.cos(phi)) ** 2 + np.sin(phi) ** 2)
    assert geom.nu == pytest.approx(expected_nu, rel=1e-13)
    assert geom.nu == pytest.approx(3.0929, abs=2e-4)
    # consistency with the reported upper coefficient 10 * (nu + 1) ~ 40.93
    assert geom.kappa * (geom.nu * geom.tan_theta + 1.0) == pytest.approx(40.929, abs=1e-3)


def test_geometry_orthonormal_matrix():
    a = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    problem = build_problem(a, [1.0, 2.0, 2.0])
    solution = solve(problem)
    geom = geometry(problem, solution)
    assert geom.kappa == pytest.approx(1.0, abs=1e-14)
    assert geom.nu == pytest.approx(1.0, rel=1e-14)


def test_geometry_invariants(rng):
    for _ in range(40):
        m = int(rng.integers(2, 16))
        n = int(rng.integers(1, min(m, 6) + 1))
        problem = random_problem(
            rng,
            m,
            n,
            log_kappa=rng.uniform(0, 6),
            residual_scale=float(rng.uniform(0, 2)),
        )
        geom = geometry(problem, solution := solve(problem))
        assert 1.0 - 1e-10 <= geom.nu <= geom.kappa * (1 + 1e-10)
        assert geom.sec_theta**2 - geom.tan_theta**2 == pytest.approx(1.0, rel=1e-12)


def test_scaling_rhs_scales_solution_not_geometry(rng):
    problem = random_problem(rng, 8, 3, log_kappa=2.0)
    scaled = build_problem(problem.A, 7.5 * problem.b)
    s1, s2 = solve(problem), solve(scaled)
    assert np.allclose(7.5 * s1.x, s2.x, rtol=1e-12)
    assert np.allclose(7.5 * s1.residual, s2.residual, rtol=1e-12, atol=1e-13)
    g1 = geometry(problem, s1)
    g2 = geometry(scaled, s2)
    assert g1.kappa == g2.kappa  # depends only on A: bit-identical
    assert g1.nu == pytest.approx(g2.nu, rel=1e-12)
    assert g1.tan_theta == pytest.approx(g2.tan_theta, rel=1e-12)


def test_kappa_depends_only_on_matrix(rng):
    problem = random_problem(rng, 6, 3, log_kappa=1.5)
    other = build_problem(problem.A, problem.b + problem.A @ rng.standard_normal(3))
    assert geometry(problem, solve(problem)).kappa == geometry(other, solve(other)).kappa


def test_problem_arrays_read_only(rng):
    problem = random_problem(rng, 5, 2)
    with pytest.raises(ValueError):
        problem.A[0, 0] = 99.0
    with pytest.raises(ValueError):
        solve(problem).x[0] = 99.0
