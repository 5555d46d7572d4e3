import numpy as np

from thermoloop.mms import convergence_study, exact_heat_solution, heat_error


def test_exact_solution_is_flux_free_on_boundary():
    fn = exact_heat_solution(D=0.1, t=0.3)
    x = np.linspace(-1, 1, 41)
    # d/dx1 vanishes at x1 = -1 and +1: check by symmetry of the cosine
    eps = 1e-6
    left = (fn(-1 + eps, x) - fn(-1.0, x)) / eps
    right = (fn(1.0, x) - fn(1 - eps, x)) / eps
    assert np.max(np.abs(left)) < 1e-5
    assert np.max(np.abs(right)) < 1e-5


def test_error_decreases_under_refinement():
    e_coarse = heat_error(n_div=8, n_steps=4, D=0.1, T=0.5)
    e_fine = heat_error(n_div=16, n_steps=16, D=0.1, T=0.5)
    assert e_fine < e_coarse


def test_observed_order_at_least_1_8():
    _, orders = convergence_study(base_n=10, levels=3)
    assert len(orders) == 2
    assert all(o >= 1.8 for o in orders)
