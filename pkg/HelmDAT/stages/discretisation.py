#=======================================================================================================================
#
#   HelmDAT - Discretisation
#   License: MIT
#
#   Per-knot row tables: the compact row of every knot of a grid together with the one-sided derivative rows and
#   the source sums needed for hat-weighted right-hand sides. Shared by the global solver and the tree method.
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput
from HelmDAT.stages.jet_engine import compute_taylor_triples, truncated_polys, validate_order
from HelmDAT.stages.stencil_factory import derivative_estimator, interior_stencil

''' External '''
import numpy as np
from joblib import Parallel, delayed, parallel_backend

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

INTERIOR, INTERFACE, BOUNDARY = 0, 1, 2
CHUNK = 2 ** 14
SPACING_TOLERANCE = 1e-9

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class RowTable:

    """
    The assembled rows of one grid, one entry per knot j = 0..N.

    The row of knot j reads sub[j] u_{j-1} + diag[j] u_j + sup[j] u_{j+1} = extra[j] + G_R[j] + G_L[j] for the
    source f itself. For a source f phi with phi affine on each side of x_j the right-hand side becomes
    phi(x_j) (extra + G_R + G_L) + phi'(x_j+) H_R + phi'(x_j-) H_L.

    The derivative rows give u'(x_j+) = dr_self u_j + dr_next u_{j+1} - dr_src (j < N) and
    u'(x_j-) = dl_self u_j + dl_prev u_{j-1} - dl_src (j > 0); dr_slope and dl_slope play the role of H for them.

    ...

    Attributes
    __________
    knots : ndarray
        Grid coordinates.
    order : int
        Accuracy order M.
    kinds : ndarray
        INTERIOR, INTERFACE or BOUNDARY per knot.
    a_right, a_left : ndarray
        a(x_j+) and a(x_j-), zero where the side does not exist.
    """

    def __init__(self, knots, order, kinds, columns):
        self.knots = knots
        self.order = order
        self.kinds = kinds
        for name, values in columns.items():
            setattr(self, name, values)

    @property
    def N(self):
        return self.knots.size - 1

    def rhs(self):
        return self.extra + self.G_R + self.G_L

    def weighted_rhs(self, phi, slope_right, slope_left, nodes=None):

        """
        Right-hand side of the rows for the source phi f (and phi-weighted g, w), phi given by its knot values and
        one-sided slopes, on all knots or on the given knot indices.
        """

        nodes = slice(None) if nodes is None else nodes
        plain = (self.extra + self.G_R + self.G_L)[nodes]
        return phi * plain + slope_right * self.H_R[nodes] + slope_left * self.H_L[nodes]

    def derivatives(self, values):

        """
        One-sided derivative estimates at every knot; the missing side at an end copies the other one.
        """

        right = np.empty(values.shape, dtype=complex)
        left = np.empty(values.shape, dtype=complex)
        right[:-1] = self.dr_self[:-1] * values[:-1] + self.dr_next[:-1] * values[1:] - self.dr_src[:-1]
        left[1:] = self.dl_self[1:] * values[1:] + self.dl_prev[1:] * values[:-1] - self.dl_src[1:]
        right[-1] = left[-1]
        left[0] = right[0]
        return left, right


''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def classify_knots(problem, knots, forced=None):

    """
    Decide the row kind of every knot.

    Interface rows sit at field breakpoints, Dirac locations, spacing changes and the forced knots; the two ends
    carry boundary rows and everything else is interior.

    ...

    Returns
    __________
    tuple
        (kinds, dirac weights per knot)
    """

    N = knots.size - 1
    kinds = np.full(N + 1, INTERIOR, dtype=np.int8)
    weights = np.zeros(N + 1, dtype=complex)

    steps = np.diff(knots)
    changes = np.abs(steps[1:] - steps[:-1]) > SPACING_TOLERANCE * np.maximum(steps[1:], steps[:-1])
    kinds[1:-1][changes] = INTERFACE

    breaks = problem.breakpoints
    if breaks.size:
        kinds[locate_knots(knots, breaks, "breakpoint")] = INTERFACE
    if problem.diracs:
        locations = np.array([x for x, _ in problem.diracs], dtype=float)
        index = locate_knots(knots, locations, "Dirac location")
        if np.any((index == 0) | (index == N)):
            raise InvalidInput("Dirac terms must lie strictly inside the interval")
        kinds[index] = INTERFACE
        np.add.at(weights, index, np.array([w for _, w in problem.diracs], dtype=complex))
    if forced is not None and len(forced):
        kinds[np.asarray(forced, dtype=int)] = INTERFACE

    kinds[0] = kinds[N] = BOUNDARY
    return kinds, weights

def locate_knots(knots, points, what="point"):

    """
    Index of the knot each point sits on; points off the grid are InvalidInput (never snapped).
    """

    points = np.atleast_1d(np.asarray(points, dtype=float))
    index = np.clip(np.searchsorted(knots, points), 0, knots.size - 1)
    below = np.clip(index - 1, 0, knots.size - 1)
    closer = np.abs(knots[below] - points) < np.abs(knots[index] - points)
    index = np.where(closer, below, index)
    h = np.diff(knots).min() if knots.size > 1 else 1.0
    off = np.abs(knots[index] - points) > 1e-9 * h
    if np.any(off):
        raise InvalidInput(what + " " + repr(float(points[off][0])) + " is not a grid knot")
    return index

def _source_sums(weights, f_jet):
    fd = f_jet.derivatives()
    src = np.sum(weights * fd[:weights.shape[0]], axis=0)
    slope = np.zeros_like(src)
    for l in range(1, weights.shape[0]):
        slope = slope + l * weights[l] * fd[l - 1]
    return src, slope

def _side(problem, points, steps, M, side):
    a = problem.a.jets(points, M - 1, side, steps)
    k2 = problem.kappa2.jets(points, M - 2, side, steps)
    f = problem.f.jets(points, M - 2, side, steps)
    polys = truncated_polys(compute_taylor_triples(a, k2, M, side))

    row = derivative_estimator(polys, side, steps)
    sub, diag, sup = row.matrix_row()
    w_left, w_right = row.source_weights()
    src, slope = _source_sums(w_right if side == "right" else w_left, f)
    out = {"self": diag, "nbr": sup if side == "right" else sub, "src": src, "slope": slope, "a": a.value}

    if side == "right":
        interior = interior_stencil(polys, steps)
        out["int_sub"], out["int_diag"], out["int_sup"] = interior.matrix_row()
        out["int_src"], out["int_slope"] = _source_sums(interior.source_weights()[1], f)
    return out

def _chunk(problem, knots, M, start, stop):
    # right-sided data for start <= j < min(stop, N), left-sided data for max(start, 1) <= j < stop
    N = knots.size - 1
    right_idx = np.arange(start, min(stop, N))
    left_idx = np.arange(max(start, 1), stop)
    right = _side(problem, knots[right_idx], knots[right_idx + 1] - knots[right_idx], M, "right") \
        if right_idx.size else None
    left = _side(problem, knots[left_idx], knots[left_idx] - knots[left_idx - 1], M, "left") \
        if left_idx.size else None
    return start, stop, right_idx, right, left_idx, left

def build_row_table(problem, grid, M, forced=None, n_jobs=1, chunk=CHUNK):

    """
    Build the row table of a problem on a grid.

    Jets, triples and rows are computed for a chunk of knots at a time (batch axes), chunks in parallel threads.

    ...

    Parameters
    __________
    problem : HelmholtzProblem
        Fields, boundary conditions and Dirac terms.
    grid : Grid
        Knots covering the problem interval.
    M : int
        Accuracy order.
    forced : array-like
        Extra knot indices that must carry interface rows (tree knots).
    n_jobs : int
        Thread count for the chunks.
    chunk : int
        Knots per chunk.

    Returns
    __________
    RowTable
    """

    M = validate_order(M)
    knots = grid.knots
    lo, hi = problem.interval
    if abs(knots[0] - lo) > 1e-12 * max(1.0, abs(lo)) or abs(knots[-1] - hi) > 1e-12 * max(1.0, abs(hi)):
        raise InvalidInput("grid does not cover the problem interval")

    N = knots.size - 1
    kinds, dirac_weights = classify_knots(problem, knots, forced)

    starts = range(0, N + 1, chunk)
    with parallel_backend("threading", n_jobs=n_jobs):
        parts = Parallel(verbose=0)(delayed(_chunk)(problem, knots, M, s, min(s + chunk, N + 1)) for s in starts)

    names = ("dr_self", "dr_next", "dr_src", "dr_slope", "dl_self", "dl_prev", "dl_src", "dl_slope",
             "a_right", "a_left", "sub", "diag", "sup", "extra", "G_R", "H_R", "G_L", "H_L")
    col = {name: np.zeros(N + 1, dtype=complex) for name in names}
    interior = {name: np.zeros(N + 1, dtype=complex) for name in
                ("int_sub", "int_diag", "int_sup", "int_src", "int_slope")}

    for _, _, right_idx, right, left_idx, left in parts:
        if right is not None:
            col["dr_self"][right_idx], col["dr_next"][right_idx] = right["self"], right["nbr"]
            col["dr_src"][right_idx], col["dr_slope"][right_idx] = right["src"], right["slope"]
            col["a_right"][right_idx] = right["a"]
            for name in interior:
                interior[name][right_idx] = right[name]
        if left is not None:
            col["dl_self"][left_idx], col["dl_prev"][left_idx] = left["self"], left["nbr"]
            col["dl_src"][left_idx], col["dl_slope"][left_idx] = left["src"], left["slope"]
            col["a_left"][left_idx] = left["a"]

    inner = kinds == INTERIOR
    col["sub"][inner], col["diag"][inner], col["sup"][inner] = \
        interior["int_sub"][inner], interior["int_diag"][inner], interior["int_sup"][inner]
    col["G_R"][inner], col["H_R"][inner] = interior["int_src"][inner], interior["int_slope"][inner]

    joint = kinds == INTERFACE
    a_r, a_l = col["a_right"][joint], col["a_left"][joint]
    col["sub"][joint] = -a_l * col["dl_prev"][joint]
    col["diag"][joint] = a_r * col["dr_self"][joint] - a_l * col["dl_self"][joint]
    col["sup"][joint] = a_r * col["dr_next"][joint]
    col["G_R"][joint], col["H_R"][joint] = a_r * col["dr_src"][joint], a_r * col["dr_slope"][joint]
    col["G_L"][joint], col["H_L"][joint] = -a_l * col["dl_src"][joint], -a_l * col["dl_slope"][joint]
    col["extra"][joint] = dirac_weights[joint]

    bc = problem.bc_left
    col["diag"][0] = bc.lambda0 + bc.lambda1 * col["dr_self"][0]
    col["sup"][0] = bc.lambda1 * col["dr_next"][0]
    col["G_R"][0], col["H_R"][0] = bc.lambda1 * col["dr_src"][0], bc.lambda1 * col["dr_slope"][0]
    col["extra"][0] = bc.g

    bc = problem.bc_right
    col["diag"][N] = bc.lambda0 + bc.lambda1 * col["dl_self"][N]
    col["sub"][N] = bc.lambda1 * col["dl_prev"][N]
    col["G_L"][N], col["H_L"][N] = bc.lambda1 * col["dl_src"][N], bc.lambda1 * col["dl_slope"][N]
    col["extra"][N] = bc.g

    return RowTable(knots, M, kinds, col)
