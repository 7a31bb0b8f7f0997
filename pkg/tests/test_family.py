import warnings

import numpy as np
import pytest

from llscond import ExampleSpec, closed_forms, example_problem, geometry, overestimate_ratio, solve


def build(alpha, beta, phi, epsilon=1e-9):
    return example_problem(ExampleSpec(alpha=alpha, beta=beta, phi=phi, epsilon=epsilon))


def test_reference_instance_closed_forms():
    problem, forms = build(0.1, 1.0, np.pi / 10)
    assert forms.kappa == 10.0
    assert forms.tan_theta == 1.0
    geom = geometry(problem, solve(problem))
    assert geom.kappa == pytest.approx(forms.kappa, rel=1e-14)
    assert geom.nu == pytest.approx(forms.nu, rel=1e-13)
    assert geom.tan_theta == pytest.approx(forms.tan_theta, rel=1e-13)


def test_phi_zero_collapses_radical():
    problem, forms = build(0.5, 1.0, 0.0)
    assert forms.nu == pytest.approx(2.0, rel=1e-14)
    solution = solve(problem)
    assert np.allclose(solution.x, [1.0, 0.0], atol=1e-14)


def test_small_alpha_right_angle_ratio():
    problem, _ = build(0.01, 1.0, np.pi / 2)
    solution = solve(problem)
    ratio = overestimate_ratio(problem, solution, geometry(problem, solution))
    assert ratio == pytest.approx(50.0, rel=0.05)


def test_perturbed_solution_closed_form():
    alpha, beta, phi, eps = 0.25, 0.9, 0.8, 1e-5
    _, forms = build(alpha, beta, phi, eps)
    expected_second = (eps + alpha * beta * np.sin(phi)) / (alpha**2 + eps**2)
    assert forms.perturbed_x[1] == pytest.approx(expected_second, rel=1e-15)
    assert forms.predicted_relative_change == pytest.approx(
        eps / (alpha * beta * np.sqrt((alpha * np.cos(phi)) ** 2 + np.sin(phi) ** 2)), rel=1e-15
    )


def test_out_of_range_parameters_warn_but_build():
    with pytest.warns(UserWarning):
        ExampleSpec(alpha=1.5, beta=1.0, phi=0.1, epsilon=1e-9)
    with pytest.warns(UserWarning):
        ExampleSpec(alpha=0.1, beta=-1.0, phi=0.1, epsilon=1e-9)
    with pytest.warns(UserWarning):
        ExampleSpec(alpha=0.1, beta=1.0, phi=0.1, epsilon=0.5)  # epsilon not << alpha


def test_in_range_parameters_do_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        spec = ExampleSpec(alpha=0.1, beta=1.0, phi=np.pi / 10, epsilon=1e-8)
    forms = closed_forms(spec)
    assert forms.residual.tolist() == [0.0, 0.0, 1.0]
