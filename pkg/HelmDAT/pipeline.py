#=======================================================================================================================
#
#   HelmDAT - Solvers
#   License: MIT
#
#   Note: Inherited from Sklearn BaseEstimator, so solvers can be cloned per table row
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import message
from HelmDAT.stages.dat_core import DatConfig, dat_solve
from HelmDAT.stages.helmholtz_fdm import solve_fdm
from HelmDAT.stages.problem_library import solve_annulus_2d

''' External '''
import time
from sklearn.base import BaseEstimator, clone

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class FdmSolver(BaseEstimator):

	"""
	The global compact finite difference scheme of order M: one tridiagonal system over the whole grid.

	...

	Attributes
	__________
	BaseEstimator : Scikit-Learn BaseEstimator class
		Inherit from this class (get_params, set_params and clone).

	Methods
	-------
	fit(problem, grid)
		Solve the problem on the grid; the solution is kept in solution_ and the wall time in wall_ms_.
	solve_annulus(annulus, N)
		Solve every mode of an annulus on the radial grid of size N.
	"""

	method = "fdm"

	def __init__(self, order=6, value_only=False, condition=False, n_jobs=1, verbose=False):

		"""
		Initialise the class

		Attributes
		__________
		order : int
			Even accuracy order M.
		value_only : bool
			Build the jets of a, kappa^2 and f from point values only.
		condition : bool
			Estimate the condition number of the global matrix.
		n_jobs : int
			Threads for row generation (and for the modes of an annulus).
		verbose : bool
			Report progress.
		"""

		self.order = order
		self.value_only = value_only
		self.condition = condition
		self.n_jobs = n_jobs
		self.verbose = verbose

	def tree_parameters(self):

		""" (level, split) for error reports; zero for the global scheme. """

		return 0, 0

	def _prepare(self, problem):
		return problem.with_value_only() if self.value_only else problem

	def _solve(self, problem, grid):
		return solve_fdm(problem, grid, self.order, condition=self.condition, n_jobs=self.n_jobs)

	def fit(self, problem, grid):

		"""
		Solve a problem on a grid.

		...

		Parameters
		__________
		problem : HelmholtzProblem
		grid : Grid

		Returns
		__________
		self
		"""

		if self.verbose:
			message("Solving " + str(problem.name or "problem") + " with " + repr(self) + " on " + repr(grid))
		start = time.perf_counter()
		self.solution_ = self._solve(self._prepare(problem), grid)
		self.wall_ms_ = 1000.0 * (time.perf_counter() - start)
		return self

	def solve(self, problem, grid):
		return self.fit(problem, grid).solution_

	def _tree(self):
		return None

	def solve_annulus(self, annulus, N):

		"""
		Solve every mode of an annulus; modes run in parallel threads, each mode on one thread.
		"""

		if self.verbose:
			message("Solving " + str(annulus.modes) + " annulus modes at N = " + str(N) + " with " + repr(self))
		start = time.perf_counter()
		self.solution_ = solve_annulus_2d(annulus, N, self.order, config=self._tree(), condition=self.condition,
		                                  n_jobs=self.n_jobs)
		self.wall_ms_ = 1000.0 * (time.perf_counter() - start)
		return self.solution_

	def clone(self):

		""" Create an unfitted copy with the same parameters. """

		return clone(self)


class DatSolver(FdmSolver):

	"""
	The Dirac assisted tree over the same compact rows.

	...

	Attributes
	__________
	initial_partition : int
		N0, intervals of the level-1 partition.
	level : int
		Tree levels L.
	split : int
		Every interval splits into 2^s intervals per level.
	"""

	method = "dat"

	def __init__(self, order=6, initial_partition=4, level=1, split=1, value_only=False, condition=False, n_jobs=1,
	             verbose=False):
		self.order = order
		self.initial_partition = initial_partition
		self.level = level
		self.split = split
		self.value_only = value_only
		self.condition = condition
		self.n_jobs = n_jobs
		self.verbose = verbose

	def tree_parameters(self):
		return self.level, self.split

	def config(self):
		return DatConfig(N0=self.initial_partition, L=self.level, s=self.split, M=self.order)

	def _tree(self):
		return self.config()

	def _solve(self, problem, grid):
		return dat_solve(problem, self.config(), grid, condition=self.condition, n_jobs=self.n_jobs)
