#=======================================================================================================================
#
#   HelmDAT - Problem library tests
#   License: MIT
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput, NotFound, Unsupported
from HelmDAT.stages.analysis import annulus_errors
from HelmDAT.stages.dat_core import DatConfig
from HelmDAT.stages.fields import ClosedForm, PiecewiseField
from HelmDAT.stages.helmholtz_fdm import BoundaryCondition, Grid, HelmholtzProblem
from HelmDAT.stages.problem_library import CATALOG, TABLE_PRESETS, AnnulusProblem, annulus_reference, bessel_j, \
    constant_wave, example_catalog, piecewise_constant_reference, solve_annulus_2d, table_preset

''' External '''
import numpy as np
import pytest
from scipy import special

''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def second_derivative(exact, x, eps=1e-6):
    return (exact([x + eps])[1][0] - exact([x - eps])[1][0]) / (2 * eps)


@pytest.mark.parametrize("x", [0.5, 10.0, 100.0, 400.0, 450.0])
def test_bessel_functions_match_scipy(x):
    orders = np.array([0, 1, 2, 5, 50, 99, 300, 641, 700])
    values, derivatives = bessel_j(orders, x)
    assert np.allclose(values, special.jv(orders, x), rtol=1e-9, atol=1e-12)
    assert np.allclose(derivatives, special.jvp(orders, x), rtol=1e-9, atol=1e-12)


def test_bessel_functions_at_the_origin():
    values, derivatives = bessel_j([0, 1, 2], 0.0)
    assert np.allclose(values, [1.0, 0.0, 0.0])
    assert np.allclose(derivatives, [0.0, 0.5, 0.0])


@pytest.mark.parametrize("orders, x", [([-1], 1.0), ([701], 1.0), ([2], 451.0), ([1.5], 1.0), ([2], -1.0)])
def test_bessel_range_is_enforced(orders, x):
    with pytest.raises(Unsupported):
        bessel_j(orders, x)


def test_constant_wave_closed_form_solves_the_problem():
    kappa = 10.0
    _, exact = constant_wave(kappa)
    u0, _ = exact([0.0])
    u1, du1 = exact([1.0])
    assert abs(u0[0]) < 1e-12
    assert abs(du1[0] - 1j * kappa * u1[0]) < 1e-9
    for x in (0.2, 0.7):
        u = exact([x])[0][0]
        assert second_derivative(exact, x) + kappa ** 2 * u == pytest.approx(kappa ** 2 * np.cosh(x), rel=1e-6)


def test_oracle_satisfies_the_interface_conditions(layered):
    problem, exact = layered
    (ul, dl), (ur, dr) = exact([0.25], "left"), exact([0.25], "right")
    assert ul[0] == pytest.approx(ur[0])
    assert dr[0] - dl[0] == pytest.approx(1.0)

    (ul, dl), (ur, dr) = exact([0.5], "left"), exact([0.5], "right")
    assert ul[0] == pytest.approx(ur[0])
    assert 0.5 * dr[0] == pytest.approx(1.0 * dl[0])

    u0, _ = exact([0.0])
    u1, du1 = exact([1.0])
    assert abs(u0[0]) < 1e-12
    assert abs(-20j * u1[0] + 0.5 * du1[0]) < 1e-9


def test_oracle_satisfies_the_equation_on_each_piece(layered):
    problem, exact = layered
    for x, a, kappa2, f in ((0.1, 1.0, 100.0, 10 * np.exp(0.1)), (0.8, 0.5, 400.0, -5 * np.exp(-1.6))):
        u = exact([x])[0][0]
        assert a * second_derivative(exact, x) + kappa2 * u == pytest.approx(f, rel=1e-5, abs=1e-5)


def test_oracle_handles_vanishing_wave_numbers():
    interval = (0.0, 1.0)
    problem = HelmholtzProblem(PiecewiseField.constant(1.0, interval), PiecewiseField.constant(0.0, interval),
                               PiecewiseField(interval, [ClosedForm(polynomial=[2.0])]),
                               BoundaryCondition.dirichlet(), BoundaryCondition.dirichlet())
    x = np.linspace(0.0, 1.0, 7)
    u, du = piecewise_constant_reference(problem)(x)
    assert np.allclose(u, x ** 2 - x)
    assert np.allclose(du, 2 * x - 1)


def test_oracle_rejects_what_it_cannot_solve(smooth_variable):
    with pytest.raises(Unsupported):
        piecewise_constant_reference(smooth_variable)
    interval = (0.0, 1.0)
    resonant = HelmholtzProblem(PiecewiseField.constant(1.0, interval), PiecewiseField.constant(1.0, interval),
                                PiecewiseField(interval, [ClosedForm([(1.0, 1j)])]),
                                BoundaryCondition.dirichlet(), BoundaryCondition.dirichlet())
    with pytest.raises(Unsupported):
        piecewise_constant_reference(resonant)


def test_sampled_reference_copies_the_missing_derivative(layered):
    _, exact = layered
    sample = exact.sample(Grid.uniform((0.0, 1.0), 4), 6)
    assert sample.deriv_right[-1] == sample.deriv_left[-1]
    assert sample.deriv_left[0] == sample.deriv_right[0]
    assert sample.deriv_right[1] - sample.deriv_left[1] == pytest.approx(1.0)


@pytest.mark.parametrize("name", CATALOG)
def test_every_catalog_entry_loads(name):
    entry = example_catalog(name)
    assert entry.name == name
    assert entry.reference in ("closed-form", "oracle", "refinement", "annulus")
    assert (entry.exact is not None) == (entry.reference in ("closed-form", "oracle"))


@pytest.mark.parametrize("name, N, intervals, level", [("ex1.1", 2 ** 21, 2 ** 21, 19), ("ex4.1", 2 ** 15, 2 ** 15, 7),
                                                       ("ex4.2", 2 ** 15, 2 ** 15, 5),
                                                       ("ex4.3", 2 ** 18 + 1, 2 ** 18, 16),
                                                       ("ex4.4", 31, 32, 1), ("ex4.4", 63, 64, 2),
                                                       ("ex2D", 2 ** 8 + 1, 2 ** 8, 5),
                                                       ("ex2D", 2 ** 9 + 1, 2 ** 9, 6)])
def test_catalog_size_rules(name, N, intervals, level):
    entry = example_catalog(name)
    assert entry.grid(N).N == intervals
    assert entry.level(N) == level


def test_catalog_refinement_rules():
    assert example_catalog("ex4.2").refine_rule(2 ** 15) == 2 ** 16
    assert example_catalog("ex4.3").refine_rule(2 ** 18 + 1) == 2 ** 19 + 1
    assert example_catalog("ex4.4").refine_rule(31) == 63


def test_piece_counts_must_fit_the_grid_rule():
    with pytest.raises(InvalidInput):
        example_catalog("ex4.1").grid(100)
    with pytest.raises(InvalidInput):
        example_catalog("ex4.2").grid(2 ** 15 + 2)
    with pytest.raises(InvalidInput):
        example_catalog("ex4.4").grid(30)


def test_unknown_names_are_not_found():
    with pytest.raises(NotFound):
        example_catalog("ex9")
    with pytest.raises(NotFound):
        table_preset(8)
    with pytest.raises(NotFound):
        table_preset("two")


def test_table_presets():
    assert sorted(TABLE_PRESETS) == list(range(1, 8))
    assert table_preset("2").example == "ex4.1"
    assert table_preset(1).orders == (6, 8)
    seven = table_preset(7)
    assert seven.value_only and seven.orders == (6,) and len(seven.trees) == 3
    assert [rule(2 ** 16) for rule, _ in table_preset(2).trees] == [8, 11]


def test_annulus_boundary_data_follows_the_incident_wave():
    annulus = AnnulusProblem(modes=4)
    m = np.arange(4)
    k, R = 100.0, 4.0
    eps = np.where(m == 0, 1.0, 2.0)
    expected = np.sqrt(R) * (1j) ** m * eps * (k * special.jvp(m, k * R) + (0.5 / R - 1j * k) * special.jv(m, k * R))
    assert np.allclose(annulus.boundary_data(m), expected, rtol=1e-9, atol=1e-12)


def test_annulus_grid_and_validation():
    annulus = AnnulusProblem()
    grid = annulus.radial_grid(5)
    assert grid.N == 4
    assert np.allclose(grid.knots, [1.0, 1.5, 2.0, 3.0, 4.0])
    assert annulus.radial_grid(2 ** 8 + 1).N == 2 ** 8
    for N in (1, 4):
        with pytest.raises(InvalidInput):
            annulus.radial_grid(N)
    with pytest.raises(InvalidInput):
        AnnulusProblem(kappa=(50.0,))


def test_annulus_field_sums_the_modes():
    annulus = AnnulusProblem(modes=3, angles=5)
    solution = solve_annulus_2d(annulus, 33, 4)
    field = solution.field()
    assert field.shape == (solution.grid.N + 1, 5)
    r = solution.grid.knots
    assert np.allclose(field[:, 0], solution.coefficients.sum(axis=0) / np.sqrt(r))


def test_annulus_converges_against_its_refined_reference():
    annulus = AnnulusProblem(modes=4, angles=9)
    errors = []
    for N in (1025, 2049):
        solution = solve_annulus_2d(annulus, N, 6)
        errors.append(annulus_errors(solution, annulus_reference(annulus, N, 6)).rel_inf)
    assert errors[1] < 1e-3
    assert errors[0] / errors[1] > 20


def test_annulus_tree_and_global_solves_agree():
    annulus = AnnulusProblem(modes=3, angles=5)
    fdm = solve_annulus_2d(annulus, 1025, 6)
    dat = solve_annulus_2d(annulus, 1025, 6, config=DatConfig(N0=8, L=3, s=1, M=6), condition=True)
    assert np.max(np.abs(dat.field() - fdm.field())) / np.max(np.abs(fdm.field())) < 1e-3
    assert dat.info["cond_link"] >= 1.0 and dat.info["cond_local"] >= 1.0


@pytest.mark.parametrize("N, rel_inf", [(2 ** 8 + 1, 1.0461e-1), (2 ** 9 + 1, 1.2885e-3)])
def test_full_annulus_errors_at_small_sizes(N, rel_inf):
    # 642 modes over 2049 angles, order 6, against the four times refined reference
    annulus = AnnulusProblem()
    solution = solve_annulus_2d(annulus, N, 6)
    errors = annulus_errors(solution, annulus_reference(annulus, N, 6))
    assert errors.rel_inf == pytest.approx(rel_inf, rel=0.1)
