#=======================================================================================================================
#
#   HelmDAT - Solver tests
#   License: MIT
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.pipeline import DatSolver, FdmSolver
from HelmDAT.stages.dat_core import DatConfig, dat_solve
from HelmDAT.stages.helmholtz_fdm import Grid, solve_fdm
from HelmDAT.stages.problem_library import AnnulusProblem

''' External '''
import numpy as np
from sklearn.base import clone

''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def test_solvers_expose_their_parameters():
    solver = DatSolver(order=8, initial_partition=8, level=3, split=2)
    assert solver.get_params()["level"] == 3
    assert solver.tree_parameters() == (3, 2)
    assert repr(solver.config()) == "DatConfig(N0=8, L=3, s=2, M=8)"
    assert FdmSolver().tree_parameters() == (0, 0)


def test_clones_are_unfitted_copies(wave):
    problem, _ = wave
    solver = DatSolver(order=4, level=2).fit(problem, Grid.uniform((0.0, 1.0), 32))
    assert solver.wall_ms_ >= 0.0
    copy = solver.clone()
    assert not hasattr(copy, "solution_")
    changed = clone(solver).set_params(level=3)
    assert changed.level == 3 and solver.level == 2 and changed.order == 4


def test_solvers_wrap_the_stage_functions(layered):
    problem, _ = layered
    grid = Grid.uniform((0.0, 1.0), 64)
    fdm = FdmSolver(order=6).solve(problem, grid)
    assert np.allclose(fdm.values, solve_fdm(problem, grid, 6).values)
    dat = DatSolver(order=6, initial_partition=4, level=3).solve(problem, grid)
    assert np.allclose(dat.values, dat_solve(problem, DatConfig(N0=4, L=3, s=1, M=6), grid).values)


def test_value_only_jets_approach_the_exact_jets(smooth_variable):
    grid = Grid.uniform((0.0, 1.0), 256)
    exact_jets = FdmSolver(order=6).solve(smooth_variable, grid).values
    sampled = FdmSolver(order=6, value_only=True).solve(smooth_variable, grid).values
    assert np.max(np.abs(sampled - exact_jets)) / np.max(np.abs(exact_jets)) < 1e-5


def test_annulus_solves_use_the_tree_when_asked():
    annulus = AnnulusProblem(modes=2, angles=3)
    solver = DatSolver(order=4, initial_partition=8, level=1)
    solution = solver.solve_annulus(annulus, 17)
    assert solution.coefficients.shape == (2, 17)
    assert "cond_link" in solution.info and solver.wall_ms_ >= 0.0
    assert "cond_link" not in FdmSolver(order=4).solve_annulus(annulus, 17).info
