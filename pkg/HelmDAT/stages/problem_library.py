#=======================================================================================================================
#
#   HelmDAT - Problem library
#   License: MIT
#
#   Reference solutions (closed forms and the piecewise-constant oracle), Bessel functions of integer order, the
#   annulus mode driver and the catalog of benchmark problems with their grid, level and reference rules.
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput, NotFound, SingularSystem, Unsupported
from HelmDAT.stages import jet_engine as je
from HelmDAT.stages.dat_core import DatConfig, dat_solve
from HelmDAT.stages.fields import ClosedForm, PiecewiseField
from HelmDAT.stages.helmholtz_fdm import BoundaryCondition, Grid, HelmholtzProblem, NumericalSolution, solve_fdm

''' External '''
import math
import numbers
import numpy as np
from joblib import Parallel, delayed, parallel_backend

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

BESSEL_MAX_ORDER = 700
BESSEL_MAX_ARGUMENT = 450.0
MILLER_ACCURACY = 160
RESCALE = 1e200

ANNULUS_MODES = 642
ANNULUS_ANGLES = 2049
ANNULUS_REFINEMENT = 4

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class ExactSolution:

    """
    A known solution u with its derivative, evaluated one-sided at breakpoints.

    ...

    Attributes
    __________
    evaluate : callable
        evaluate(points, side) -> (u, du).
    name : str
    """

    def __init__(self, evaluate, name=None):
        self.evaluate = evaluate
        self.name = name

    def __call__(self, points, side="right"):
        return self.evaluate(np.asarray(points, dtype=float), side)

    def sample(self, grid, order=None):

        """
        Knot values and one-sided derivatives on a grid, packed like a numerical solution.
        """

        values, right = self(grid.knots, "right")
        _, left = self(grid.knots, "left")
        right = np.array(right, dtype=complex)
        left = np.array(left, dtype=complex)
        right[-1] = left[-1]
        left[0] = right[0]
        return NumericalSolution(grid, np.asarray(values, dtype=complex), left, right, order, {"exact": True})


class _Piece:

    # one constant-coefficient piece of the oracle: a u'' + kappa^2 u = g on [lo, hi]
    def __init__(self, lo, hi, a, kappa2, source):
        self.lo, self.hi = lo, hi
        self.a = complex(a)
        self.q = complex(kappa2) / self.a
        omega = np.emath.sqrt(self.q) if self.q != 0 else 0.0
        self.omega = -omega if np.imag(omega) < 0 else omega
        self.source = source
        self._particular()

    def _particular(self):
        # u_p'' + q u_p = g / a for g = sum C e^{lambda x} + polynomial
        self.exponentials = []
        for c, lam in self.source.exponentials:
            denominator = self.a * (lam * lam + self.q)
            if abs(denominator) <= 1e-14 * abs(self.a) * max(abs(lam) ** 2, abs(self.q), 1.0):
                raise Unsupported("resonant exponential source e^(" + str(lam) + " x) in the reference oracle")
            self.exponentials.append((c / denominator, lam))

        p = np.polynomial.Polynomial(np.asarray(self.source.polynomial, dtype=complex) / self.a
                                     if self.source.polynomial else [0j])
        if self.q == 0:
            self.polynomial = p.integ(2)
        else:
            total, term, sign = np.polynomial.Polynomial([0j]), p, 1.0
            for j in range(p.degree() // 2 + 1):
                total = total + sign * term / self.q ** (j + 1)
                term, sign = term.deriv(2), -sign
            self.polynomial = total

    def basis(self, x):
        # bounded homogeneous solutions and their derivatives
        if self.omega == 0:
            ones = np.ones_like(x, dtype=complex)
            return (ones, x - self.lo), (0 * ones, ones)
        w = self.omega
        first = np.exp(1j * w * (x - self.lo))
        second = np.exp(-1j * w * (x - self.hi))
        return (first, second), (1j * w * first, -1j * w * second)

    def particular(self, x):
        x = np.asarray(x, dtype=float)
        u = self.polynomial(x).astype(complex)
        du = self.polynomial.deriv()(x).astype(complex)
        for c, lam in self.exponentials:
            e = np.exp(lam * x)
            u = u + c * e
            du = du + c * lam * e
        return u, du


class ModeProblem:

    """
    One angular mode of the annulus: the radial problem for v_m(r) = r^{1/2} u_m(r).

    ...

    Attributes
    __________
    m : int
        Mode index.
    problem : HelmholtzProblem
        v'' + (kappa^2(r) - (m^2 - 1/4) / r^2) v = 0 with the Robin data of the mode.
    """

    def __init__(self, m, problem):
        self.m = m
        self.problem = problem


class AnnulusProblem:

    """
    Helmholtz equation on the annulus 1 <= r <= 4 with kappa = 50 on [1, 2) and 100 on [2, 4], a homogeneous
    Neumann condition at r = 1 and an absorbing condition at r = 4 driven by the incident wave
    sum_m i^m eps_m J_m(100 r) cos(m theta).
    """

    def __init__(self, edges=(1.0, 2.0, 4.0), kappa=(50.0, 100.0), incident=100.0, modes=ANNULUS_MODES,
                 angles=ANNULUS_ANGLES):
        self.edges = tuple(float(e) for e in edges)
        self.kappa = tuple(float(k) for k in kappa)
        self.incident = float(incident)
        self.modes = int(modes)
        self.angles = int(angles)
        if len(self.kappa) != len(self.edges) - 1:
            raise InvalidInput("one wave number per annulus ring is needed")

    @property
    def interval(self):
        return self.edges[0], self.edges[-1]

    def boundary_data(self, orders):

        """
        Right-hand sides g_m of (v' - i k v)(R) = g_m for the modes in orders.
        """

        orders = np.asarray(orders, dtype=int)
        R, k = self.edges[-1], self.incident
        values, derivatives = bessel_j(orders, k * R)
        eps = np.where(orders == 0, 1.0, 2.0)
        phase = (1j) ** (orders % 4)
        return np.sqrt(R) * phase * eps * (k * derivatives + (0.5 / R - 1j * k) * values)

    def mode(self, m, g=None):

        """
        The radial problem of mode m (boundary datum computed unless given).
        """

        shift = m * m - 0.25
        pieces = [_ring(k * k, shift) for k in self.kappa]
        kappa2 = PiecewiseField(self.edges, pieces)
        a = PiecewiseField.constant(1.0, self.interval)
        f = PiecewiseField.constant(0.0, self.interval)
        g = self.boundary_data([m])[0] if g is None else g
        left = BoundaryCondition(-0.5 / self.edges[0], 1.0, 0.0)
        right = BoundaryCondition(-1j * self.incident, 1.0, g)
        return ModeProblem(m, HelmholtzProblem(a, kappa2, f, left, right, name="mode " + str(m)))

    def radial_grid(self, N):

        """
        N - 1 radial intervals split evenly over the rings (increments 2/(N - 1) on [1, 2] and 4/(N - 1) on [2, 4]
        for the default annulus); N - 1 must be a positive multiple of the ring count.
        """

        rings = len(self.edges) - 1
        if int(N) < 2 or (int(N) - 1) % rings:
            raise InvalidInput("the annulus needs N - 1 to be a positive multiple of " + str(rings) + ", got N = " +
                               str(N))
        return Grid.piecewise_uniform(self.edges, [(int(N) - 1) // rings] * rings)


class AnnulusSolution:

    """
    Mode coefficients v_m on a radial grid and the field u(r, theta) = r^{-1/2} sum_m v_m(r) cos(m theta).

    ...

    Attributes
    __________
    grid : Grid
        Radial grid.
    theta : ndarray
        Angles.
    modes : ndarray
        Mode indices, one row of coefficients each.
    coefficients : ndarray
        v_m at the radial knots, shape (modes, knots).
    order : int
        Accuracy order M.
    info : dict
        "cond_local" and "cond_link" maxima over the modes when computed.
    """

    def __init__(self, grid, theta, modes, coefficients, order=None, info=None):
        self.grid = grid
        self.theta = theta
        self.modes = modes
        self.coefficients = coefficients
        self.order = order
        self.info = {} if info is None else info

    def field(self, rows=None):
        rows = slice(None) if rows is None else rows
        r = self.grid.knots[rows]
        cosines = np.cos(np.outer(self.modes, self.theta))
        return (self.coefficients[:, rows].T @ cosines) / np.sqrt(r)[:, None]

    def restrict(self, coarse):
        index = self.grid.locate(coarse.knots)
        return AnnulusSolution(coarse, self.theta, self.modes, self.coefficients[:, index], self.order,
                               dict(self.info))


class CatalogEntry:

    """
    A benchmark problem with the rules that turn a size N into a run.

    ...

    Attributes
    __________
    name : str
    problem : HelmholtzProblem or AnnulusProblem
    grid_rule : callable
        N -> Grid.
    refine_rule : callable or None
        N -> size of the consecutive-refinement reference.
    level_rule : callable
        N -> default tree level L.
    N0, s : int
        Default initial partition and split.
    reference : str
        "closed-form", "oracle", "refinement" or "annulus".
    exact : ExactSolution or None
    """

    def __init__(self, name, problem, grid_rule, level_rule, N0, s, reference, refine_rule=None, exact=None,
                 description=""):
        self.name = name
        self.problem = problem
        self.grid_rule = grid_rule
        self.level_rule = level_rule
        self.N0 = N0
        self.s = s
        self.reference = reference
        self.refine_rule = refine_rule
        self.exact = exact
        self.description = description

    def grid(self, N):
        return self.grid_rule(int(N))

    def level(self, N):
        return max(1, int(self.level_rule(int(N))))

    def config(self, N, M, L=None, s=None, N0=None):
        return DatConfig(N0=N0 or self.N0, L=L or self.level(N), s=s or self.s, M=M)

    def __repr__(self):
        return "CatalogEntry(" + self.name + ", reference=" + self.reference + ")"


class TablePreset:

    """
    The row structure of one benchmark table: example, sizes per order and the (level rule, split) pairs of its DAT
    rows.
    """

    def __init__(self, example, sizes, trees, value_only=False, methods=("fdm", "dat")):
        self.example = example
        self.sizes = sizes
        self.trees = trees
        self.value_only = value_only
        self.methods = methods

    @property
    def orders(self):
        return tuple(sorted(self.sizes))


''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def _ring(kappa2, shift):
    return lambda r: kappa2 - shift / (r * r)

def _closed(piece):
    if isinstance(piece, ClosedForm):
        return piece
    if isinstance(piece, numbers.Number):
        return ClosedForm(polynomial=[piece])
    raise Unsupported("the piecewise-constant oracle needs closed-form sources (exponentials and polynomials)")

def _constant(field, lo, hi, what):
    piece = field.pieces[field.piece_index(np.array([0.5 * (lo + hi)]))[0]]
    if not isinstance(piece, numbers.Number):
        raise Unsupported("the piecewise-constant oracle needs a constant " + what + " on every piece")
    return piece

def piecewise_constant_reference(problem):

    """
    Exact solution of a problem with piecewise constant a and kappa^2 and closed-form sources.

    On each piece u = c_1 e^{i w (x - x_k)} + c_2 e^{-i w (x - x_{k+1})} + u_p with w^2 = kappa^2 / a (1 and x - x_k
    when kappa = 0) and u_p the particular solution of the exponential and polynomial source terms. The 2K amplitudes
    follow from the two boundary conditions, continuity of u and the flux jump a u'(x+) - a u'(x-) = w at every
    breakpoint and Dirac location, in one dense solve.

    ...

    Parameters
    __________
    problem : HelmholtzProblem

    Returns
    __________
    ExactSolution
    """

    lo, hi = problem.interval
    dirac = {x: w for x, w in problem.diracs}
    edges = np.unique(np.concatenate([[lo, hi], problem.breakpoints, list(dirac)]))
    pieces = []
    for left, right in zip(edges[:-1], edges[1:]):
        a = _constant(problem.a, left, right, "a")
        if a == 0:
            raise Unsupported("a vanishes on a piece")
        kappa2 = _constant(problem.kappa2, left, right, "kappa^2")
        f = problem.f.pieces[problem.f.piece_index(np.array([0.5 * (left + right)]))[0]]
        pieces.append(_Piece(left, right, a, kappa2, _closed(f)))

    K = len(pieces)
    A = np.zeros((2 * K, 2 * K), dtype=complex)
    b = np.zeros(2 * K, dtype=complex)

    def row(piece, x, weight_u, weight_du):
        (p1, p2), (d1, d2) = piece.basis(np.array([x]))
        up, dup = piece.particular(np.array([x]))
        return (np.array([weight_u * p1[0] + weight_du * d1[0], weight_u * p2[0] + weight_du * d2[0]]),
                weight_u * up[0] + weight_du * dup[0])

    bc = problem.bc_left
    coeffs, rest = row(pieces[0], lo, bc.lambda0, bc.lambda1)
    A[0, 0:2], b[0] = coeffs, bc.g - rest
    for k in range(K - 1):
        x = pieces[k].hi
        left, left_rest = row(pieces[k], x, 1.0, 0.0)
        right, right_rest = row(pieces[k + 1], x, 1.0, 0.0)
        A[2 * k + 1, 2 * k:2 * k + 2], A[2 * k + 1, 2 * k + 2:2 * k + 4] = left, -right
        b[2 * k + 1] = right_rest - left_rest
        left, left_rest = row(pieces[k], x, 0.0, pieces[k].a)
        right, right_rest = row(pieces[k + 1], x, 0.0, pieces[k + 1].a)
        A[2 * k + 2, 2 * k:2 * k + 2], A[2 * k + 2, 2 * k + 2:2 * k + 4] = -left, right
        b[2 * k + 2] = dirac.get(x, 0.0) + left_rest - right_rest
    bc = problem.bc_right
    coeffs, rest = row(pieces[-1], hi, bc.lambda0, bc.lambda1)
    A[-1, -2:], b[-1] = coeffs, bc.g - rest

    scale = np.abs(A).max(axis=1)
    if np.any(scale == 0):
        raise SingularSystem("the reference oracle produced an empty equation")
    try:
        amplitudes = np.linalg.solve(A / scale[:, None], b / scale).reshape(K, 2)
    except np.linalg.LinAlgError as error:
        raise SingularSystem("the reference oracle system is singular: " + str(error))

    inner = edges[1:-1]

    def evaluate(points, side="right"):
        points = np.asarray(points, dtype=float)
        flat = points.reshape(-1)
        index = np.clip(np.searchsorted(inner, flat, side="right" if side == "right" else "left"), 0, K - 1)
        u = np.zeros(flat.shape, dtype=complex)
        du = np.zeros(flat.shape, dtype=complex)
        for k in np.unique(index):
            mask = index == k
            (p1, p2), (d1, d2) = pieces[k].basis(flat[mask])
            up, dup = pieces[k].particular(flat[mask])
            c1, c2 = amplitudes[k]
            u[mask] = c1 * p1 + c2 * p2 + up
            du[mask] = c1 * d1 + c2 * d2 + dup
        return u.reshape(points.shape), du.reshape(points.shape)

    return ExactSolution(evaluate, problem.name)

def _bessel_table(x, top):
    # J_0..J_top at x by downward recurrence from a start order well above max(top, x), normalised with
    # J_0 + 2 sum_k J_2k = 1
    if x == 0:
        table = np.zeros(top + 1)
        table[0] = 1.0
        return table
    reach = max(top, int(math.ceil(x)))
    start = 2 * ((reach + int(math.sqrt(MILLER_ACCURACY * reach)) + 16) // 2)
    table = np.zeros(start + 2)
    table[start] = 1e-300
    for k in range(start, 0, -1):
        table[k - 1] = (2.0 * k / x) * table[k] - table[k + 1]
        if abs(table[k - 1]) > RESCALE:
            table[k - 1:] = table[k - 1:] / RESCALE
    norm = table[0] + 2.0 * np.sum(table[2::2])
    return table[:top + 1] / norm

def bessel_j(orders, x):

    """
    Bessel functions of the first kind J_m(x) and their derivatives for integer orders 0..700 and 0 <= x <= 450.

    All orders come from one Miller sweep; J'_0 = -J_1 and J'_m = (J_{m-1} - J_{m+1}) / 2.

    ...

    Parameters
    __________
    orders : int or array-like of int
    x : float

    Returns
    __________
    tuple
        (J_m(x), J'_m(x)) shaped like orders.
    """

    orders = np.asarray(orders)
    if orders.size and (np.any(orders < 0) or np.any(orders > BESSEL_MAX_ORDER)):
        raise Unsupported("Bessel orders must lie in 0.." + str(BESSEL_MAX_ORDER))
    if np.any(np.asarray(orders) != np.round(orders)):
        raise Unsupported("only integer Bessel orders are supported")
    x = float(x)
    if not 0 <= x <= BESSEL_MAX_ARGUMENT:
        raise Unsupported("Bessel argument must lie in [0, " + str(BESSEL_MAX_ARGUMENT) + "], got " + repr(x))

    orders = orders.astype(int)
    top = int(orders.max()) + 1 if orders.size else 1
    table = _bessel_table(x, top)
    values = table[orders]
    following = table[orders + 1]
    previous = np.where(orders > 0, table[np.maximum(orders - 1, 0)], -table[1])
    derivatives = np.where(orders > 0, 0.5 * (previous - following), -following)
    return values, derivatives

def _solve_mode(annulus, m, g, grid, M, config, condition):
    mode = annulus.mode(m, g)
    if config is None:
        return solve_fdm(mode.problem, grid, M, condition=condition)
    return dat_solve(mode.problem, config, grid, condition=condition)

def solve_annulus_2d(annulus, N, M, config=None, modes=None, condition=False, n_jobs=1):

    """
    Solve the annulus mode by mode and collect the coefficients.

    ...

    Parameters
    __________
    annulus : AnnulusProblem
    N : int
        Radial size; the grid has N - 1 intervals split evenly over the rings.
    M : int
        Accuracy order.
    config : DatConfig or None
        Tree parameters, or None for the global compact scheme.
    modes : array-like
        Mode indices, default 0..annulus.modes - 1.
    condition : bool
        Record the largest condition numbers over the modes.
    n_jobs : int
        Threads over the modes.

    Returns
    __________
    AnnulusSolution
    """

    modes = np.arange(annulus.modes) if modes is None else np.asarray(modes, dtype=int)
    grid = annulus.radial_grid(N)
    data = annulus.boundary_data(modes)
    with parallel_backend("threading", n_jobs=n_jobs):
        solutions = Parallel(verbose=0)(delayed(_solve_mode)(annulus, int(m), g, grid, M, config, condition)
                                        for m, g in zip(modes, data))

    info = {}
    for key in ("cond_local", "cond_link"):
        found = [s.info[key] for s in solutions if key in s.info]
        if found:
            info[key] = max(found)
    coefficients = np.array([s.values for s in solutions]) if len(solutions) else np.zeros((0, grid.N + 1), complex)
    theta = np.linspace(0.0, 2.0 * np.pi, annulus.angles)
    return AnnulusSolution(grid, theta, modes, coefficients, M, info)

def annulus_reference(annulus, N, M, modes=None, n_jobs=1):

    """
    Reference for size N: the global compact scheme on the grid refined ANNULUS_REFINEMENT times, restricted to the
    knots of size N.
    """

    fine = ANNULUS_REFINEMENT * (int(N) - 1) + 1
    return solve_annulus_2d(annulus, fine, M, modes=modes, n_jobs=n_jobs).restrict(annulus.radial_grid(N))

def _uniform(N):
    return Grid.uniform((0.0, 1.0), N)

def _per_piece(edges, counts):
    def rule(N):
        n = counts(N)
        if n < 1 or n != int(n):
            raise InvalidInput("size " + str(N) + " does not fit the grid rule of this example")
        return Grid.piecewise_uniform(edges, [int(n)] * (len(edges) - 1))
    return rule

def _log2(n):
    return int(round(math.log2(max(int(n), 1))))

def constant_wave(kappa=1e6):

    """
    u'' + kappa^2 u = kappa^2 cosh(x) on [0, 1], u(0) = 0, u'(1) - i kappa u(1) = 0, with its closed-form solution.
    """

    k2 = kappa * kappa
    interval = (0.0, 1.0)
    problem = HelmholtzProblem(PiecewiseField.constant(1.0, interval), PiecewiseField.constant(k2, interval),
                               PiecewiseField(interval, [ClosedForm([(k2 / 2, 1.0), (k2 / 2, -1.0)])]),
                               BoundaryCondition.dirichlet(), BoundaryCondition(-1j * kappa, 1.0), name="ex1.1")
    scale = k2 / (k2 + 1.0)
    amplitude = kappa / (k2 + 1.0) * (np.sinh(1.0) - 1j * np.cosh(1.0) * kappa) * np.exp(1j * kappa)

    def evaluate(points, side="right"):
        x = np.asarray(points, dtype=float)
        wave = np.exp(1j * kappa * x)
        u = -amplitude * np.sin(kappa * x) + scale * (np.cosh(x) - wave)
        du = -amplitude * kappa * np.cos(kappa * x) + scale * (np.sinh(x) - 1j * kappa * wave)
        return u, du

    return problem, ExactSolution(evaluate, "ex1.1")

def eight_pieces():

    """
    Eight pieces of length 1/8 alternating between (a, kappa, f) = (1, 1e4, 1e7 e^x) and (10^-k, 500, -e^{-2x}),
    u(0) = 0 and 1e-2 u'(1) - 500 i u(1) = 0.
    """

    edges = np.arange(9) / 8.0
    a = [1.0, 1e-1, 1.0, 1e-2, 1.0, 1e-3, 1.0, 1e-4]
    kappa2 = [1e8 if k % 2 == 0 else 2.5e5 for k in range(8)]
    f = [ClosedForm([(1e7, 1.0)]) if k % 2 == 0 else ClosedForm([(-1.0, -2.0)]) for k in range(8)]
    return HelmholtzProblem(PiecewiseField(edges, a), PiecewiseField(edges, kappa2), PiecewiseField(edges, f),
                            BoundaryCondition.dirichlet(), BoundaryCondition(-500j, 1e-2), name="ex4.1")

def four_pieces():

    """
    Four smooth pieces with breakpoints 0.31, 0.69, 0.81 and wave numbers up to 1e5.
    """

    edges = [0.0, 0.31, 0.69, 0.81, 1.0]
    a = [lambda x: je.exp(-x), lambda x: je.exp(x) + 1.0, lambda x: je.exp(-x), lambda x: je.exp(x) + 1.0]
    kappa2 = [lambda x: 1e8 * je.exp(4.0 * x), lambda x: 1e10 * x ** 8, lambda x: 1e8 * (1.0 + x ** 4) ** 2,
              lambda x: 1e10 * je.exp(-6.0 * x)]
    f = [1e7, lambda x: 1e7 * x ** 2, lambda x: 1e7 * x ** 3, lambda x: 1e7 * x ** 5]
    right = BoundaryCondition(-1j * 1e5 * np.exp(-3.0), np.sqrt(np.e + 1.0))
    return HelmholtzProblem(PiecewiseField(edges, a), PiecewiseField(edges, kappa2), PiecewiseField(edges, f),
                            BoundaryCondition.dirichlet(1.0), right, name="ex4.2")

def oscillating_diffusion():

    """
    a = 1.1 + sin(40 pi x), kappa = 1e5 (1 - (x - 1/2)^2), f = 1e9 (x^7 + 1) with Sommerfeld-type conditions.
    """

    interval = (0.0, 1.0)
    a = PiecewiseField(interval, [lambda x: 1.1 + je.sin(40.0 * np.pi * x)])
    kappa2 = PiecewiseField(interval, [lambda x: (1e5 * (1.0 - (x - 0.5) ** 2)) ** 2])
    f = PiecewiseField(interval, [lambda x: 1e9 * (x ** 7 + 1.0)])
    root = np.sqrt(1.1)
    return HelmholtzProblem(a, kappa2, f, BoundaryCondition(75000j, root, -1.0), BoundaryCondition(-75000j, root),
                            name="ex4.3")

def elliptic_pieces():

    """
    Purely imaginary kappa (kappa^2 < 0) on four pieces, u(0) = 1 and u(1) = 0.
    """

    edges = [0.0, 0.23, 0.53, 0.83, 1.0]
    a = [lambda x, c=c: c + je.sin(10.0 * np.pi * x) for c in (5.0, 2.0, 9.0, 5.0)]
    kappa2 = [lambda x: -1e4 * x ** 6, -100.0, lambda x: -400.0 * je.exp(2.0 * x), -1600.0]
    f = [lambda x: 256.0 * je.cosh(x), lambda x: 256.0 * je.sinh(x), lambda x: -256.0 * je.cosh(x),
         lambda x: -256.0 * je.sinh(x)]
    return HelmholtzProblem(PiecewiseField(edges, a), PiecewiseField(edges, kappa2), PiecewiseField(edges, f),
                            BoundaryCondition.dirichlet(1.0), BoundaryCondition.dirichlet(0.0), name="ex4.4")

def example_catalog(name):

    """
    Look up a benchmark problem.

    ...

    Parameters
    __________
    name : str
        "ex1.1", "ex4.1", "ex4.2", "ex4.3", "ex4.4" or "ex2D".

    Returns
    __________
    CatalogEntry
    """

    if name == "ex1.1":
        problem, exact = constant_wave()
        return CatalogEntry(name, problem, _uniform, lambda N: _log2(N) - 2, 4, 1, "closed-form", exact=exact,
                            description="constant coefficients, kappa = 1e6")
    if name == "ex4.1":
        problem = eight_pieces()
        return CatalogEntry(name, problem, _per_piece(np.arange(9) / 8.0, lambda N: N / 8), lambda N: _log2(N) - 8,
                            32, 1, "oracle", exact=piecewise_constant_reference(problem),
                            description="eight piecewise constant pieces")
    if name == "ex4.2":
        return CatalogEntry(name, four_pieces(), _per_piece([0.0, 0.31, 0.69, 0.81, 1.0], lambda N: N / 4),
                            lambda N: 5, 32, 1, "refinement", refine_rule=lambda N: 2 * N,
                            description="four smooth pieces, N / 4 intervals each")
    if name == "ex4.3":
        return CatalogEntry(name, oscillating_diffusion(), lambda N: Grid.uniform((0.0, 1.0), N - 1),
                            lambda N: _log2(N - 1) - 2, 4, 1, "refinement", refine_rule=lambda N: 2 * N - 1,
                            description="oscillating a(x), N points")
    if name == "ex4.4":
        return CatalogEntry(name, elliptic_pieces(), _per_piece([0.0, 0.23, 0.53, 0.83, 1.0], lambda N: (N + 1) / 4),
                            lambda N: _log2(N + 1) - 4, 16, 1, "refinement", refine_rule=lambda N: 2 * N + 1,
                            description="elliptic regime, (N + 1) / 4 intervals per piece")
    if name == "ex2D":
        annulus = AnnulusProblem()
        return CatalogEntry(name, annulus, annulus.radial_grid, lambda N: _log2(N - 1) - 3, 8, 1, "annulus",
                            refine_rule=lambda N: ANNULUS_REFINEMENT * (N - 1) + 1,
                            description="annulus, 642 modes, 2049 angles")
    raise NotFound("unknown example " + repr(name) + "; known: " + ", ".join(CATALOG))

def table_preset(table):
    try:
        return TABLE_PRESETS[int(table)]
    except (KeyError, TypeError, ValueError):
        raise NotFound("unknown table preset " + repr(table) + "; known: " +
                       ", ".join(str(k) for k in sorted(TABLE_PRESETS)))

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

CATALOG = ("ex1.1", "ex4.1", "ex4.2", "ex4.3", "ex4.4", "ex2D")

TABLE_PRESETS = {
    1: TablePreset("ex1.1", {6: [2 ** 21, 2 ** 22, 2 ** 23], 8: [2 ** 21, 2 ** 22, 2 ** 23]},
                   [(lambda N: _log2(N) - 2, 1)]),
    2: TablePreset("ex4.1", {6: [2 ** k for k in range(15, 20)], 8: [2 ** k for k in range(15, 19)]},
                   [(lambda N: _log2(N) - 8, 1), (lambda N: _log2(N) - 5, 1)]),
    3: TablePreset("ex4.2", {6: [2 ** k for k in range(15, 19)], 8: [2 ** k for k in range(15, 18)]},
                   [(lambda N: 5, 1), (lambda N: 3, 2)]),
    4: TablePreset("ex4.3", {6: [2 ** k + 1 for k in range(18, 23)], 8: [2 ** k + 1 for k in range(18, 22)]},
                   [(lambda N: _log2(N - 1) - 2, 1)]),
    5: TablePreset("ex4.4", {6: [2 ** k - 1 for k in range(5, 10)], 8: [2 ** k - 1 for k in range(5, 9)]},
                   [(lambda N: _log2(N + 1) - 4, 1)]),
    6: TablePreset("ex2D", {6: [2 ** k + 1 for k in range(8, 13)], 8: [2 ** k + 1 for k in range(8, 12)]},
                   [(lambda N: _log2(N - 1) - 3, 1)]),
    7: TablePreset("ex4.2", {6: [2 ** k for k in range(15, 19)]},
                   [(lambda N: 5, 1), (lambda N: 3, 2), (lambda N: 2, 4)], value_only=True),
}
