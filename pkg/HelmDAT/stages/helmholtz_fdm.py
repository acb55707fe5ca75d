#=======================================================================================================================
#
#   HelmDAT - Helmholtz FDM
#   License: MIT
#
#   Problem and grid types, assembly of the global compact tridiagonal system, the tridiagonal solvers and the
#   condition estimate.
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput, InvalidBoundaryCondition, SingularSystem
from HelmDAT.stages.discretisation import build_row_table, locate_knots
from HelmDAT.stages.fields import PiecewiseField

''' External '''
import numpy as np
from scipy.linalg import solve_banded, LinAlgError
from scipy.sparse.linalg import LinearOperator, onenormest

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

PIVOT_TOLERANCE = 1e-13

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class BoundaryCondition:

    """
    lambda0 u + lambda1 u' = g at one end of the interval (u' one-sided, taken from inside).
    """

    def __init__(self, lambda0, lambda1, g=0.0):
        if abs(lambda0) + abs(lambda1) == 0:
            raise InvalidBoundaryCondition("boundary operator with lambda0 = lambda1 = 0")
        self.lambda0 = complex(lambda0)
        self.lambda1 = complex(lambda1)
        self.g = complex(g)

    @classmethod
    def dirichlet(cls, g=0.0):
        return cls(1.0, 0.0, g)

    @classmethod
    def neumann(cls, g=0.0):
        return cls(0.0, 1.0, g)

    def homogeneous(self):
        return BoundaryCondition(self.lambda0, self.lambda1, 0.0)

    def __repr__(self):
        return "BoundaryCondition(" + str(self.lambda0) + ", " + str(self.lambda1) + ", " + str(self.g) + ")"


class HelmholtzProblem:

    """
    [a(x) u']' + kappa^2(x) u = f + sum_k w_k delta(x - x_k) on an interval, with a boundary condition at each end.

    ...

    Attributes
    __________
    a, kappa2, f : PiecewiseField
        Coefficient fields on the same interval.
    bc_left, bc_right : BoundaryCondition
        Conditions at the two ends.
    diracs : list of (float, complex)
        Dirac locations and weights.
    name : str
        Label used in reports.
    """

    def __init__(self, a, kappa2, f, bc_left, bc_right, diracs=(), name=None):
        fields = [a, kappa2, f]
        if not all(isinstance(field, PiecewiseField) for field in fields):
            raise InvalidInput("a, kappa2 and f must be piecewise fields")
        lo, hi = a.interval
        if any(abs(field.interval[0] - lo) > 1e-14 or abs(field.interval[1] - hi) > 1e-14 for field in fields):
            raise InvalidInput("a, kappa2 and f must share one interval")
        for x, _ in diracs:
            if not lo < x < hi:
                raise InvalidInput("Dirac location " + repr(x) + " is outside the open interval")

        self.a = a
        self.kappa2 = kappa2
        self.f = f
        self.bc_left = bc_left
        self.bc_right = bc_right
        self.diracs = [(float(x), complex(w)) for x, w in diracs]
        self.name = name

    @property
    def interval(self):
        return self.a.interval

    @property
    def breakpoints(self):

        """
        Sorted union of the interior breakpoints of the three fields.
        """

        joined = np.concatenate([self.a.breakpoints, self.kappa2.breakpoints, self.f.breakpoints])
        return np.unique(joined)

    @property
    def value_only(self):
        return self.a.value_only

    def with_value_only(self, value_only=True):
        return HelmholtzProblem(self.a.with_value_only(value_only), self.kappa2.with_value_only(value_only),
                                self.f.with_value_only(value_only), self.bc_left, self.bc_right, self.diracs,
                                self.name)

    def with_source(self, f, diracs=None, bc_left=None, bc_right=None):
        return HelmholtzProblem(self.a, self.kappa2, f, bc_left or self.bc_left, bc_right or self.bc_right,
                                self.diracs if diracs is None else diracs, self.name)


class Grid:

    """
    Strictly increasing knots x_0 < ... < x_N covering the problem interval.
    """

    def __init__(self, knots):
        knots = np.asarray(knots, dtype=float)
        if knots.ndim != 1 or knots.size < 2:
            raise InvalidInput("a grid needs at least two knots")
        if np.any(np.diff(knots) <= 0):
            raise InvalidInput("grid knots must be strictly increasing")
        self.knots = knots

    @classmethod
    def uniform(cls, interval, N):
        if int(N) < 1:
            raise InvalidInput("a grid needs at least one interval, got N = " + str(N))
        return cls(np.linspace(interval[0], interval[1], int(N) + 1))

    @classmethod
    def piecewise_uniform(cls, edges, counts):

        """
        Uniform spacing on each [edges[k], edges[k+1]] with counts[k] intervals; the edges become knots.
        """

        edges = np.asarray(edges, dtype=float)
        if len(counts) != edges.size - 1:
            raise InvalidInput("one interval count per piece is needed")
        if any(int(n) < 1 for n in counts):
            raise InvalidInput("every piece needs at least one interval")
        pieces = [np.linspace(edges[k], edges[k + 1], int(n) + 1)[:-1] for k, n in enumerate(counts)]
        return cls(np.concatenate(pieces + [edges[-1:]]))

    @property
    def N(self):
        return self.knots.size - 1

    @property
    def interval(self):
        return float(self.knots[0]), float(self.knots[-1])

    @property
    def steps(self):
        return np.diff(self.knots)

    @property
    def h(self):
        return float(self.steps.max())

    def locate(self, points):
        return locate_knots(self.knots, points)

    def __len__(self):
        return self.knots.size

    def __repr__(self):
        return "Grid(N=" + str(self.N) + ", interval=" + str(self.interval) + ")"


class TridiagonalSystem:

    """
    A (possibly batched) tridiagonal system, the system axis first.

    sub[0] and sup[-1] are ignored.
    """

    def __init__(self, sub, diag, sup, rhs, table=None):
        self.sub = np.asarray(sub)
        self.diag = np.asarray(diag)
        self.sup = np.asarray(sup)
        self.rhs = np.asarray(rhs)
        self.table = table
        if not self.sub.shape == self.diag.shape == self.sup.shape:
            raise InvalidInput("tridiagonal bands must have equal shapes")
        if self.rhs.shape[:self.diag.ndim] != self.diag.shape:
            raise InvalidInput("right-hand side does not match the matrix size")

    @property
    def size(self):
        return self.diag.shape[0]

    def matvec(self, u):
        sub, diag, sup = _bands_for(self, u)
        out = diag * u
        out[1:] += sub[1:] * u[:-1]
        out[:-1] += sup[:-1] * u[1:]
        return out

    def dense(self):
        n = self.size
        A = np.diag(self.diag.astype(complex))
        A[np.arange(1, n), np.arange(n - 1)] = self.sub[1:]
        A[np.arange(n - 1), np.arange(1, n)] = self.sup[:-1]
        return A


class NumericalSolution:

    """
    Knot values and one-sided derivative estimates of a discrete solution.

    ...

    Attributes
    __________
    grid : Grid
    values : ndarray
    deriv_left, deriv_right : ndarray
        u'(x_j-) and u'(x_j+); at the ends the missing side repeats the existing one.
    order : int
        Accuracy order M.
    info : dict
        Diagnostics such as "cond_local" and "cond_link".
    """

    def __init__(self, grid, values, deriv_left, deriv_right, order, info=None):
        self.grid = grid
        self.values = values
        self.deriv_left = deriv_left
        self.deriv_right = deriv_right
        self.order = order
        self.info = {} if info is None else info

    @property
    def derivative(self):

        """
        The derivative used by the norms: right-sided at every knot, left-sided at the last one.
        """

        return self.deriv_right

    def restrict(self, coarse):

        """
        Restriction to the knots of a coarser grid (consecutive-refinement references).
        """

        index = self.grid.locate(coarse.knots)
        return NumericalSolution(coarse, self.values[index], self.deriv_left[index], self.deriv_right[index],
                                 self.order, dict(self.info))


''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def _bands_for(system, rhs):
    # broadcast the bands over trailing right-hand-side columns
    extra = rhs.ndim - system.diag.ndim
    shape = system.diag.shape + (1,) * extra
    return system.sub.reshape(shape), system.diag.reshape(shape), system.sup.reshape(shape)

def assemble(problem, grid, M, n_jobs=1, forced=None):

    """
    Assemble the global compact system: one row per knot.

    ...

    Parameters
    __________
    problem : HelmholtzProblem
    grid : Grid
    M : int
        Even accuracy order.
    n_jobs : int
        Threads used while building the rows.
    forced : array-like
        Knot indices that must carry interface rows.

    Returns
    __________
    TridiagonalSystem
        With the row table attached for derivative estimates.
    """

    table = build_row_table(problem, grid, M, forced=forced, n_jobs=n_jobs)
    return TridiagonalSystem(table.sub, table.diag, table.sup, table.rhs(), table)

def _thomas_lists(sub, diag, sup, rhs):
    # forward elimination / back substitution on python lists, raises ZeroDivisionError on a zero pivot
    n = len(diag)
    gamma = [0j] * n
    beta = [0j] * n
    y = [0j] * n
    b = diag[0]
    beta[0] = b
    y[0] = rhs[0] / b
    for i in range(1, n):
        gamma[i - 1] = sup[i - 1] / b
        b = diag[i] - sub[i] * gamma[i - 1]
        beta[i] = b
        y[i] = (rhs[i] - sub[i] * y[i - 1]) / b
    for i in range(n - 2, -1, -1):
        y[i] = y[i] - gamma[i] * y[i + 1]
    return y, beta

def _row_max(sub, diag, sup):
    return np.maximum(np.maximum(np.abs(sub), np.abs(diag)), np.abs(sup))

def _banded(sub, diag, sup, rhs):
    n = diag.shape[0]
    ab = np.zeros((3, n), dtype=np.result_type(sub, diag, sup, complex))
    ab[0, 1:] = sup[:-1]
    ab[1] = diag
    ab[2, :-1] = sub[1:]
    try:
        return solve_banded((1, 1), ab, rhs)
    except (LinAlgError, ValueError) as error:
        raise SingularSystem("tridiagonal system is singular: " + str(error))

def _thomas_batched(sub, diag, sup, rhs):
    n = diag.shape[0]
    extra = rhs.ndim - diag.ndim
    shape = diag.shape + (1,) * extra
    sub, diag, sup = sub.reshape(shape), diag.reshape(shape), sup.reshape(shape)

    dtype = np.result_type(sub, diag, sup, rhs, complex)
    beta = np.empty(diag.shape, dtype=dtype)
    gamma = np.zeros(diag.shape, dtype=dtype)
    y = np.empty(np.broadcast_shapes(diag.shape, rhs.shape), dtype=dtype)
    with np.errstate(divide="ignore", invalid="ignore"):
        beta[0] = diag[0]
        y[0] = rhs[0] / beta[0]
        for i in range(1, n):
            gamma[i - 1] = sup[i - 1] / beta[i - 1]
            beta[i] = diag[i] - sub[i] * gamma[i - 1]
            y[i] = (rhs[i] - sub[i] * y[i - 1]) / beta[i]
        for i in range(n - 2, -1, -1):
            y[i] = y[i] - gamma[i] * y[i + 1]
    return y, beta

def solve_tridiagonal(system):

    """
    Solve a tridiagonal system by forward elimination and back substitution.

    A pivot below 1e-13 times the largest entry of its row switches that system to banded elimination with partial
    pivoting. Single systems run through a scalar loop; batched systems (extra trailing axes) are swept together.

    ...

    Parameters
    __________
    system : TridiagonalSystem
        Bands of shape (n, *batch), right-hand side (n, *batch) or (n, *batch, r).

    Returns
    __________
    ndarray
        Solution shaped like the right-hand side.
    """

    sub, diag, sup, rhs = system.sub, system.diag, system.sup, system.rhs
    n = system.size
    if n == 1:
        if np.any(diag == 0):
            raise SingularSystem("1x1 system with a zero entry")
        return rhs / _bands_for(system, rhs)[1]

    if diag.ndim == 1 and rhs.ndim == 1:
        try:
            y, beta = _thomas_lists(sub.tolist(), diag.tolist(), sup.tolist(), rhs.tolist())
            beta = np.asarray(beta)
            pivots_ok = np.all(np.abs(beta) >= PIVOT_TOLERANCE * _row_max(sub, diag, sup))
        except ZeroDivisionError:
            pivots_ok = False
        result = np.asarray(y) if pivots_ok else _banded(sub, diag, sup, rhs)
        if not np.all(np.isfinite(result)):
            raise SingularSystem("tridiagonal solve produced non-finite values")
        return result

    y, beta = _thomas_batched(sub, diag, sup, rhs)
    beta = beta.reshape(diag.shape)
    bad = np.any(np.abs(beta) < PIVOT_TOLERANCE * _row_max(sub, diag, sup), axis=0)
    if np.any(bad):
        for index in zip(*np.nonzero(bad)):
            where = (slice(None),) + index
            y[where] = _banded(sub[where], diag[where], sup[where], rhs[where])
    if not np.all(np.isfinite(y)):
        raise SingularSystem("tridiagonal solve produced non-finite values")
    return y

def normalised(system):

    """
    The system with every row divided by its diagonal entry.
    """

    if np.any(system.diag == 0):
        raise SingularSystem("zero diagonal entry, cannot normalise")
    return TridiagonalSystem(system.sub / system.diag, np.ones_like(system.diag), system.sup / system.diag,
                             system.rhs / _bands_for(system, system.rhs)[1])

def _one_norm(system):
    n = system.size
    columns = np.abs(system.diag).astype(float)
    columns[:-1] += np.abs(system.sub[1:])
    columns[1:] += np.abs(system.sup[:-1])
    return columns.max() if n else 0.0

def condition_estimate(system):

    """
    1-norm condition estimate of the diagonal-normalised matrix.

    ||A^{-1}||_1 is estimated with the block 1-norm estimator (one column, all-ones start, at most 5 iterations),
    applying A^{-1} and A^{-H} through tridiagonal solves.

    ...

    Returns
    __________
    float
    """

    scaled = normalised(system)
    n = scaled.size
    conj_sup = np.zeros_like(scaled.sup, dtype=complex)
    conj_sub = np.zeros_like(scaled.sub, dtype=complex)
    conj_sup[:-1] = np.conj(scaled.sub[1:])
    conj_sub[1:] = np.conj(scaled.sup[:-1])
    ones = np.ones(n, dtype=complex)

    def solve(x):
        return solve_tridiagonal(TridiagonalSystem(scaled.sub, ones, scaled.sup, np.ravel(x).astype(complex)))

    def solve_adjoint(x):
        return solve_tridiagonal(TridiagonalSystem(conj_sub, ones, conj_sup, np.ravel(x).astype(complex)))

    inverse = LinearOperator((n, n), matvec=solve, rmatvec=solve_adjoint, dtype=complex)
    if n <= 4:
        norm_inverse = np.abs(np.linalg.inv(scaled.dense())).sum(axis=0).max()
    else:
        norm_inverse = onenormest(inverse, t=1, itmax=5)
    return float(_one_norm(scaled) * norm_inverse)

def solve_fdm(problem, grid, M, condition=False, n_jobs=1):

    """
    Solve a problem on a grid with the global compact scheme.

    ...

    Parameters
    __________
    problem : HelmholtzProblem
    grid : Grid
    M : int
        Even accuracy order.
    condition : bool
        Also estimate the condition number of the global matrix ("cond_local" in info).
    n_jobs : int
        Threads used while building the rows.

    Returns
    __________
    NumericalSolution
    """

    system = assemble(problem, grid, M, n_jobs=n_jobs)
    values = solve_tridiagonal(system)
    left, right = system.table.derivatives(values)
    info = {"cond_local": condition_estimate(system)} if condition else {}
    return NumericalSolution(grid, values, left, right, system.table.order, info)
