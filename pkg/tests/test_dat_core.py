#=======================================================================================================================
#
#   HelmDAT - Dirac assisted tree tests
#   License: MIT
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput
from HelmDAT.stages.dat_core import DatConfig, assemble_global, build_tree, dat_solve, link_level, solve_leaf_locals
from HelmDAT.stages.helmholtz_fdm import Grid, assemble, solve_fdm, solve_tridiagonal

''' External '''
import numpy as np
import pytest

''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def forced_fdm(problem, tree):
    # the global system with interface rows at every leaf knot, which the tree reproduces exactly
    system = assemble(problem, tree.grid, tree.config.M, forced=tree.knots(tree.L))
    values = solve_tridiagonal(system)
    return values, system.table.derivatives(values)


def relative_gap(u, v):
    return np.max(np.abs(u - v)) / np.max(np.abs(v))


@pytest.mark.parametrize("N0, L, s", [(4, 1, 1), (4, 3, 1), (2, 2, 2), (8, 2, 1), (2, 4, 1)])
def test_tree_reproduces_the_global_system(layered, N0, L, s):
    problem, _ = layered
    config = DatConfig(N0=N0, L=L, s=s, M=6)
    grid = Grid.uniform((0.0, 1.0), 64)
    tree = build_tree(problem, config, grid)
    values, (left, right) = forced_fdm(problem, tree)

    solution = dat_solve(problem, config, grid)
    assert relative_gap(solution.values, values) < 1e-8
    assert relative_gap(solution.deriv_right, right) < 1e-8
    assert relative_gap(solution.deriv_left, left) < 1e-8


@pytest.mark.parametrize("M", [2, 4, 8])
def test_tree_reproduces_the_global_system_for_variable_coefficients(smooth_variable, M):
    config = DatConfig(N0=4, L=3, s=1, M=M)
    grid = Grid.uniform((0.0, 1.0), 128)
    values, _ = forced_fdm(smooth_variable, build_tree(smooth_variable, config, grid))
    assert relative_gap(dat_solve(smooth_variable, config, grid).values, values) < 1e-8


def test_tree_agrees_with_the_plain_global_scheme(layered):
    problem, exact = layered
    grid = Grid.uniform((0.0, 1.0), 256)
    dat = dat_solve(problem, DatConfig(N0=4, L=4, s=1, M=6), grid)
    fdm = solve_fdm(problem, grid, 6)
    reference = exact.sample(grid).values
    assert relative_gap(dat.values, reference) < 1e-4
    assert relative_gap(dat.values, fdm.values) < 1e-4


def test_custom_level_one_knots(layered):
    problem, _ = layered
    config = DatConfig(N0=3, L=2, s=1, M=4)
    grid = Grid.uniform((0.0, 1.0), 64)
    tree = build_tree(problem, config, grid, level1_knots=[0.0, 0.25, 0.5, 1.0])
    assert list(tree.knots(1)) == [0, 16, 32, 64]
    assert list(tree.knots(2)) == [0, 8, 16, 24, 32, 48, 64]
    values, _ = forced_fdm(problem, tree)
    solution = dat_solve(problem, config, grid, level1_knots=[0.0, 0.25, 0.5, 1.0])
    assert relative_gap(solution.values, values) < 1e-8


def test_hats_form_a_partition_of_unity(layered):
    problem, _ = layered
    grid = Grid.piecewise_uniform([0.0, 0.5, 1.0], [16, 48])
    tree = build_tree(problem, DatConfig(N0=4, L=3, s=1, M=4), grid)
    for level in (1, 2, 3):
        assert np.allclose(tree.partition_of_unity(level), 1.0)


def test_link_systems_are_solved_accurately(layered):
    problem, _ = layered
    config = DatConfig(N0=2, L=3, s=2, M=6)
    tree = build_tree(problem, config, Grid.uniform((0.0, 1.0), 128))
    locals_ = solve_leaf_locals(tree, problem)
    parent = link_level(tree, 3, locals_)
    assert parent.n == tree.n(2) and parent.child is locals_
    for record in parent.links:
        scale = max(np.abs(record.gamma).max(), np.abs(record.Q).max() * np.abs(record.mu).max())
        assert record.residual() <= 1e-10 * scale

    parent = link_level(tree, 2, parent)
    solution = assemble_global(tree, parent, problem=problem)
    assert relative_gap(solution.values, forced_fdm(problem, tree)[0]) < 1e-8
    assert solution.info["cond_link"] >= 1.0


def test_local_views_mark_domain_ends(layered):
    problem, _ = layered
    tree = build_tree(problem, DatConfig(N0=4, L=2, s=1, M=4), Grid.uniform((0.0, 1.0), 64))
    leaves = solve_leaf_locals(tree, problem, condition=True)
    first, middle = leaves.local(0), leaves.local(4, "dirac")
    assert first.flux_left is None and first.flux_right is not None
    assert middle.flux_left is not None and middle.flux_right is not None
    assert list(middle.nodes) == list(range(24, 41))
    assert leaves.cond_local >= 1.0


@pytest.mark.filterwarnings("error::numpy.ComplexWarning")
def test_condition_numbers_are_reported(layered):
    problem, _ = layered
    solution = dat_solve(problem, DatConfig(N0=4, L=2, s=1, M=4), Grid.uniform((0.0, 1.0), 64), condition=True)
    assert solution.info["cond_local"] >= 1.0
    assert solution.info["cond_link"] >= 1.0


@pytest.mark.parametrize("kwargs", [{"N0": 1}, {"L": 0}, {"s": 0}, {"M": 5}, {"L": True}, {"N0": 4.0}])
def test_config_validation(kwargs):
    with pytest.raises(InvalidInput):
        DatConfig(**kwargs)


def test_level_sizes():
    config = DatConfig(N0=8, L=3, s=2, M=6)
    assert [config.intervals(level) for level in (1, 2, 3)] == [8, 32, 128]


@pytest.mark.parametrize("N, N0, L, s", [(30, 4, 1, 1), (64, 4, 5, 1), (64, 8, 4, 1), (16, 4, 2, 2)])
def test_trees_that_do_not_fit_the_grid(layered, N, N0, L, s):
    problem, _ = layered
    with pytest.raises(InvalidInput):
        build_tree(problem, DatConfig(N0=N0, L=L, s=s, M=4), Grid.uniform((0.0, 1.0), N))


def test_level_one_knots_must_be_grid_knots(layered):
    problem, _ = layered
    with pytest.raises(InvalidInput):
        build_tree(problem, DatConfig(N0=2, L=1, s=1, M=4), Grid.uniform((0.0, 1.0), 64), level1_knots=[0, 0.3, 1])


def test_root_cannot_be_linked_upwards(layered):
    problem, _ = layered
    tree = build_tree(problem, DatConfig(N0=4, L=1, s=1, M=4), Grid.uniform((0.0, 1.0), 16))
    with pytest.raises(InvalidInput):
        link_level(tree, 1, solve_leaf_locals(tree, problem))
