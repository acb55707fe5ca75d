#=======================================================================================================================
#
#   HelmDAT - Analysis
#   License: MIT
#
#   Discrete error norms on possibly non-uniform grids, the energy norm, observed convergence orders and the error
#   reports behind the convergence tables.
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput

''' External '''
import math
import numpy as np
import pandas as pd

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

REPORT_COLUMNS = ["N", "level", "s", "M", "rel_inf", "rel_inf_d", "rel_l2", "rel_l2_d", "rel_energy", "cond_local",
                  "cond_link", "wall_ms"]
ROWS_PER_BLOCK = 256

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class ErrorReport:

    """
    Relative errors of one run against its reference, with the run metadata.

    ...

    Attributes
    __________
    rel_inf, rel_inf_deriv, rel_l2, rel_l2_deriv, rel_energy : float
        Relative errors of u and u' in the max and weighted l2 norms and in the energy norm; None when a quantity is
        not available (the annulus has no derivative columns).
    cond_local, cond_link : float or None
        Largest condition numbers of the local (or global) and link matrices.
    N, level, s, M : int
        Run size and tree parameters (level and s are 0 for the global scheme).
    wall_ms : float
        Wall time of the solve.
    series : str
        Label of the table block the row belongs to (method and tree rule); not written out.
    """

    def __init__(self, N, M, rel_inf, rel_inf_deriv=None, rel_l2=None, rel_l2_deriv=None, rel_energy=None,
                 cond_local=None, cond_link=None, level=0, s=0, wall_ms=None, series=None):
        self.N = N
        self.level = level
        self.s = s
        self.M = M
        self.rel_inf = rel_inf
        self.rel_inf_deriv = rel_inf_deriv
        self.rel_l2 = rel_l2
        self.rel_l2_deriv = rel_l2_deriv
        self.rel_energy = rel_energy
        self.cond_local = cond_local
        self.cond_link = cond_link
        self.wall_ms = wall_ms
        self.series = series

    def to_dict(self):
        return {"N": self.N, "level": self.level, "s": self.s, "M": self.M, "rel_inf": self.rel_inf,
                "rel_inf_d": self.rel_inf_deriv, "rel_l2": self.rel_l2, "rel_l2_d": self.rel_l2_deriv,
                "rel_energy": self.rel_energy, "cond_local": self.cond_local, "cond_link": self.cond_link,
                "wall_ms": self.wall_ms}

    def __repr__(self):
        return "ErrorReport(N=%s, level=%s, s=%s, M=%s, rel_inf=%s)" % (self.N, self.level, self.s, self.M,
                                                                        self.rel_inf)


''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def norm_weights(grid):

    """
    Weights h_j = x_{j+1} - x_j of the discrete l2 norm, with x_{N+1} := x_N so the last weight is zero.
    """

    weights = np.zeros(grid.N + 1)
    weights[:-1] = grid.steps
    return weights

def _check(u, ref, grid):
    u, ref = np.asarray(u), np.asarray(ref)
    if u.shape != ref.shape or u.shape[0] != grid.N + 1:
        raise InvalidInput("values on " + str(u.shape[0]) + " and " + str(ref.shape[0]) +
                           " knots cannot be compared on a grid with " + str(grid.N + 1) + " knots")
    return u, ref

def norm_inf(values):
    values = np.asarray(values)
    return float(np.max(np.abs(values))) if values.size else 0.0

def norm_l2(values, grid):
    return float(np.sqrt(np.sum(norm_weights(grid) * np.abs(values) ** 2)))

def discrete_norms(u, ref, grid, relative=False):

    """
    Max and weighted l2 norms of u - ref over the knots of a grid.

    ...

    Parameters
    __________
    u, ref : ndarray
        Knot values.
    grid : Grid
    relative : bool
        Divide by the norms of ref.

    Returns
    __________
    tuple
        (inf, l2)
    """

    u, ref = _check(u, ref, grid)
    error = u - ref
    inf, l2 = norm_inf(error), norm_l2(error, grid)
    if relative:
        return _ratio(inf, norm_inf(ref)), _ratio(l2, norm_l2(ref, grid))
    return inf, l2

def _ratio(num, den):
    if den == 0:
        return 0.0 if num == 0 else math.inf
    return num / den

def energy_norm(u, u_deriv, ref, ref_deriv, a_values, kappa_values, grid):

    """
    |||u - ref|||^2 = ||sqrt(a) (u' - ref')||_2^2 + ||kappa (u - ref)||_2^2 with the discrete l2 weights; moduli of a
    and kappa are used, so imaginary wave numbers are fine.
    """

    u, ref = _check(u, ref, grid)
    u_deriv, ref_deriv = _check(u_deriv, ref_deriv, grid)
    weights = norm_weights(grid)
    a_values = np.abs(np.asarray(a_values))
    kappa_values = np.abs(np.asarray(kappa_values))
    total = np.sum(weights * (a_values * np.abs(u_deriv - ref_deriv) ** 2 + kappa_values ** 2 * np.abs(u - ref) ** 2))
    return float(np.sqrt(total))

def convergence_order(errors):

    """
    Observed orders log2(err_k / err_{k+1}) of errors at successively halved steps; a vanishing error gives +inf.
    """

    errors = [float(e) for e in errors]
    if len(errors) < 2:
        raise InvalidInput("observed orders need at least two errors")
    orders = []
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if fine == 0:
            orders.append(math.inf)
        elif coarse == 0:
            orders.append(-math.inf)
        else:
            orders.append(math.log2(coarse / fine))
    return orders

def coefficient_values(problem, grid):

    """
    a and |kappa| at the knots, right-sided except at the last knot.
    """

    knots = grid.knots
    a = np.asarray(problem.a(knots, "right"), dtype=complex)
    kappa2 = np.asarray(problem.kappa2(knots, "right"), dtype=complex)
    a[-1] = problem.a(knots[-1:], "left")[0]
    kappa2[-1] = problem.kappa2(knots[-1:], "left")[0]
    return a, np.sqrt(np.abs(kappa2))

def compare_solutions(solution, reference, problem, level=0, s=0, wall_ms=None, N=None, series=None):

    """
    Error report of a numerical solution against a reference on the same knots.

    ...

    Parameters
    __________
    solution : NumericalSolution
    reference : NumericalSolution
        An exact solution sampled on the grid or a finer solution restricted to it.
    problem : HelmholtzProblem
        Supplies a and kappa for the energy norm.
    level, s : int
        Tree parameters for the report.
    wall_ms : float
    N : int
        Size label, the number of grid intervals by default.

    Returns
    __________
    ErrorReport
    """

    grid = solution.grid
    rel_inf, rel_l2 = discrete_norms(solution.values, reference.values, grid, relative=True)
    rel_inf_d, rel_l2_d = discrete_norms(solution.derivative, reference.derivative, grid, relative=True)
    a, kappa = coefficient_values(problem, grid)
    zeros = np.zeros_like(reference.values)
    energy = energy_norm(solution.values, solution.derivative, reference.values, reference.derivative, a, kappa, grid)
    scale = energy_norm(reference.values, reference.derivative, zeros, zeros, a, kappa, grid)
    return ErrorReport(grid.N if N is None else N, solution.order, rel_inf, rel_inf_d, rel_l2, rel_l2_d,
                       _ratio(energy, scale), solution.info.get("cond_local"), solution.info.get("cond_link"),
                       level, s, wall_ms, series)

def annulus_errors(solution, reference, level=0, s=0, wall_ms=None, N=None, series=None):

    """
    Relative max and l2 errors of an annulus field over the (r, theta) grid, the l2 weights being the radial
    weights times the angular step. Fields are formed a block of radial rows at a time.
    """

    grid = solution.grid
    if reference.grid.N != grid.N or reference.coefficients.shape != solution.coefficients.shape:
        raise InvalidInput("annulus solutions live on different grids or mode sets")
    weights = norm_weights(grid) * (solution.theta[1] - solution.theta[0] if solution.theta.size > 1 else 1.0)

    err_inf = ref_inf = err_sq = ref_sq = 0.0
    for start in range(0, grid.N + 1, ROWS_PER_BLOCK):
        rows = slice(start, min(start + ROWS_PER_BLOCK, grid.N + 1))
        u, ref = solution.field(rows), reference.field(rows)
        err_inf = max(err_inf, float(np.max(np.abs(u - ref))))
        ref_inf = max(ref_inf, float(np.max(np.abs(ref))))
        err_sq += float(np.sum(weights[rows][:, None] * np.abs(u - ref) ** 2))
        ref_sq += float(np.sum(weights[rows][:, None] * np.abs(ref) ** 2))

    rel_l2 = _ratio(math.sqrt(err_sq), math.sqrt(ref_sq))
    return ErrorReport(grid.N if N is None else N, solution.order, _ratio(err_inf, ref_inf), rel_l2=rel_l2,
                       cond_local=solution.info.get("cond_local"),
                       cond_link=solution.info.get("cond_link"), level=level, s=s, wall_ms=wall_ms,
                       series=series)

def report_frame(reports, orders=False):

    """
    Reports as a DataFrame in the report column order; with orders an order_inf column holds the observed order
    against the previous row of the same block (equal M and series).
    """

    frame = pd.DataFrame([r.to_dict() for r in reports], columns=REPORT_COLUMNS)
    if orders:
        frame["order_inf"] = np.nan
        keys = [(r.M, r.series) for r in reports]
        for key in dict.fromkeys(keys):
            block = frame.index[[k == key for k in keys]]
            if len(block) > 1:
                frame.loc[block[1:], "order_inf"] = convergence_order(frame.loc[block, "rel_inf"].tolist())
    return frame
