#=======================================================================================================================
#
#   HelmDAT - DAT core
#   License: MIT
#
#   The Dirac assisted tree: hat partitions of unity on a dyadic tree of grid knots, leaf source and Dirac solves with
#   homogeneous Dirichlet cuts, linking systems that cancel the artificial fluxes level by level, and assembly of the
#   global solution.
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput, LinkingSingular
from HelmDAT.stages.discretisation import build_row_table, locate_knots
from HelmDAT.stages.helmholtz_fdm import NumericalSolution, TridiagonalSystem, solve_tridiagonal, \
    condition_estimate
from HelmDAT.stages.jet_engine import validate_order

''' External '''
import numbers
import numpy as np
from joblib import Parallel, delayed, parallel_backend

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

BATCH_NODES = 2 ** 16
LARGE_LEAF = 64
DENSE_CONDITION = 128

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class DatConfig:

    """
    Tree parameters.

    ...

    Attributes
    __________
    N0 : int
        Intervals of the level-1 partition.
    L : int
        Number of tree levels (the leaves live on level L).
    s : int
        Every interval splits into 2^s intervals per level.
    M : int
        Accuracy order of the compact rows.
    """

    def __init__(self, N0=4, L=1, s=1, M=6):
        for name, value, least in (("N0", N0, 2), ("L", L, 1), ("s", s, 1)):
            if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < least:
                raise InvalidInput(name + " must be an integer >= " + str(least) + ", got " + repr(value))
        self.N0 = int(N0)
        self.L = int(L)
        self.s = int(s)
        self.M = validate_order(M)

    def intervals(self, level):
        return 2 ** ((level - 1) * self.s) * self.N0

    def __repr__(self):
        return "DatConfig(N0=%d, L=%d, s=%d, M=%d)" % (self.N0, self.L, self.s, self.M)


class DatTree:

    """
    Nested knot sets of the tree as fine-grid indices, level 1 first.

    Level l has n_l = 2^((l-1)s) N0 intervals; positions[l-1][k] is the fine-grid index of x_{l,k} and
    x_{l-1,k} = x_{l,2^s k}. The hat phi_{l,k} is piecewise linear in x with support [x_{l,k-1}, x_{l,k+1}].
    """

    def __init__(self, grid, config, positions):
        self.grid = grid
        self.config = config
        self.positions = positions

    @property
    def L(self):
        return self.config.L

    def n(self, level):
        return self.positions[level - 1].size - 1

    def knots(self, level):
        return self.positions[level - 1]

    def coordinates(self, level):
        return self.grid.knots[self.positions[level - 1]]

    def support(self, level, centres):

        """
        Fine-grid index range [lo, hi] of the hats centred at the given tree knots.
        """

        P, n = self.positions[level - 1], self.n(level)
        return P[np.maximum(centres - 1, 0)], P[np.minimum(centres + 1, n)]

    def hats(self, level, centres, nodes):

        """
        Hat values and one-sided slopes on fine-grid nodes.

        ...

        Parameters
        __________
        level : int
        centres : ndarray
            Hat indices, shape (B,).
        nodes : ndarray
            Fine-grid indices inside each support, shape (B, S).

        Returns
        __________
        tuple
            (phi, slope_right, slope_left), each (B, S); slopes outside the support are zero.
        """

        P, X, n = self.positions[level - 1], self.coordinates(level), self.n(level)
        centre = P[centres][:, None]
        lo, hi = (p[:, None] for p in self.support(level, centres))
        x_left = X[np.maximum(centres - 1, 0)][:, None]
        x_centre = X[centres][:, None]
        x_right = X[np.minimum(centres + 1, n)][:, None]
        rise = 1.0 / _safe(x_centre - x_left)
        fall = -1.0 / _safe(x_right - x_centre)

        x = self.grid.knots[nodes]
        phi = np.where(nodes < centre, (x - x_left) * rise, np.where(nodes > centre, (x - x_right) * fall, 1.0))
        slope_right = np.where(nodes < centre, rise, fall)
        slope_left = np.where(nodes <= centre, rise, fall)
        slope_right = np.where(nodes == hi, 0.0, slope_right)
        slope_left = np.where(nodes == lo, 0.0, slope_left)
        return phi, slope_right, slope_left

    def partition_of_unity(self, level):

        """
        sum_k phi_{l,k} at every fine-grid knot.
        """

        total = np.zeros(self.grid.N + 1)
        n = self.n(level)
        centres = np.arange(n + 1)
        lo, hi = self.support(level, centres)
        for size in np.unique(hi - lo + 1):
            pick = (hi - lo + 1) == size
            nodes = lo[pick][:, None] + np.arange(size)[None, :]
            phi, _, _ = self.hats(level, centres[pick], nodes)
            np.add.at(total, nodes, phi)
        return total


class LocalSolve:

    """
    One local solution of the tree: the source problem for f phi_{l,j} or the Dirac problem at x_{l,j}.

    ...

    Attributes
    __________
    index : tuple
        (level, j).
    kind : str
        "source" or "dirac".
    nodes : ndarray
        Fine-grid indices of the support.
    values : ndarray or None
        Knot values on the support (kept for leaves only).
    flux_left, flux_right : complex or None
        Artificial fluxes at the support ends, None at a true domain boundary.
    """

    def __init__(self, index, kind, nodes, values, flux_left, flux_right):
        self.index = index
        self.kind = kind
        self.nodes = nodes
        self.values = values
        self.flux_left = flux_left
        self.flux_right = flux_right


class LinkRecord:

    """
    A family of linking systems Q mu = gamma, Q nu = e_centre solved together.

    ...

    Attributes
    __________
    parents : ndarray
        Parent hat indices (B,).
    children : ndarray
        Child hat indices (B, K + 1).
    weights : ndarray
        Hat refinement weights phi_parent(x_child) (B, K + 1).
    Q, gamma, mu, nu : ndarray
        Linking matrices (B, K - 1, K - 1) and vectors (B, K - 1); nu is zero for boundary parents.
    """

    def __init__(self, parents, children, weights, Q, gamma, mu, nu):
        self.parents = parents
        self.children = children
        self.weights = weights
        self.Q = Q
        self.gamma = gamma
        self.mu = mu
        self.nu = nu

    def residual(self):
        return np.max(np.abs(np.einsum("bij,bj->bi", self.Q, self.mu) - self.gamma), initial=0.0)

    def conditions(self):
        return np.abs(np.linalg.cond(self.Q, 1))


class LevelLocals:

    """
    The local solutions of one tree level, kept as flux arrays (and leaf values on the leaf level).

    ...

    Attributes
    __________
    level : int
    uL, uR, vL, vR : ndarray
        Artificial fluxes of the source and Dirac solutions at the left/right support ends, length n_l + 1,
        zero where the end is a domain boundary or no Dirac problem exists.
    leaves : list or None
        Leaf groups (centres, nodes, u, v) on the leaf level.
    links : list of LinkRecord
        Systems that produced this level from its child level.
    child : LevelLocals or None
        The finer level.
    cond_local : float or None
        Largest leaf condition number.
    """

    def __init__(self, level, uL, uR, vL, vR, leaves=None, links=None, child=None, cond_local=None):
        self.level = level
        self.uL = uL
        self.uR = uR
        self.vL = vL
        self.vR = vR
        self.leaves = leaves
        self.links = [] if links is None else links
        self.child = child
        self.cond_local = cond_local

    @property
    def n(self):
        return self.uL.size - 1

    def local(self, j, kind="source"):

        """
        The LocalSolve view of hat j.
        """

        left, right = (self.uL, self.uR) if kind == "source" else (self.vL, self.vR)
        nodes, values = None, None
        for centres, group_nodes, u, v in self.leaves or []:
            hit = np.nonzero(centres == j)[0]
            if hit.size:
                nodes = group_nodes[hit[0]]
                values = (u if kind == "source" else v)[hit[0]]
        flux_left = left[j] if 2 <= j else None
        flux_right = right[j] if j <= self.n - 2 else None
        return LocalSolve((self.level, j), kind, nodes, values, flux_left, flux_right)


''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def _safe(values):
    return np.where(values == 0, 1.0, values)

def build_tree(problem, config, grid, level1_knots=None):

    """
    Materialise the tree levels on a fine grid.

    Level-1 knots are N0 equal index splits of the grid unless given; each further level splits every interval
    into 2^s equal index counts.

    ...

    Parameters
    __________
    problem : HelmholtzProblem
        Provides the interval.
    config : DatConfig
    grid : Grid
        Fine grid the leaves are solved on.
    level1_knots : array-like
        Coordinates of the level-1 knots, domain ends included; they must be grid knots.

    Returns
    __________
    DatTree
    """

    lo, hi = problem.interval
    if abs(grid.knots[0] - lo) > 1e-12 * max(1.0, abs(lo)) or abs(grid.knots[-1] - hi) > 1e-12 * max(1.0, abs(hi)):
        raise InvalidInput("grid does not cover the problem interval")

    if level1_knots is None:
        if grid.N % config.N0:
            raise InvalidInput("N0 = " + str(config.N0) + " does not divide the " + str(grid.N) + " grid intervals")
        positions = np.arange(config.N0 + 1) * (grid.N // config.N0)
    else:
        positions = locate_knots(grid.knots, level1_knots, "level-1 knot")
        if positions.size != config.N0 + 1 or positions[0] != 0 or positions[-1] != grid.N:
            raise InvalidInput("level-1 knots must be N0 + 1 grid knots including both ends")
        if np.any(np.diff(positions) <= 0):
            raise InvalidInput("level-1 knots must be strictly increasing")

    split = 2 ** config.s
    levels = [positions]
    for _ in range(1, config.L):
        counts = np.diff(levels[-1])
        if np.any(counts % split):
            raise InvalidInput("tree level " + str(len(levels) + 1) + " needs interval counts divisible by " +
                               str(split) + "; refine the grid or lower L")
        steps = counts // split
        finer = levels[-1][:-1, None] + steps[:, None] * np.arange(split)[None, :]
        levels.append(np.append(finer.reshape(-1), levels[-1][-1]))

    leaf = levels[-1]
    if leaf[1] - leaf[0] < 2 or leaf[-1] - leaf[-2] < 2:
        raise InvalidInput("boundary leaves need at least 3 fine knots; refine the grid or lower L")
    return DatTree(grid, config, levels)

def _leaf_chunk(table, tree, centres, S, interior, condition):
    level, n = tree.L, tree.n(tree.L)
    lo, hi = tree.support(level, centres)
    nodes = lo[:, None] + np.arange(S)[None, :]
    phi, slope_right, slope_left = tree.hats(level, centres, nodes)
    load = table.weighted_rhs(phi, slope_right, slope_left, nodes)

    sub, diag, sup = table.sub[nodes].copy(), table.diag[nodes].copy(), table.sup[nodes].copy()
    cut_lo, cut_hi = centres >= 2, centres <= n - 2
    for cut, column in ((cut_lo, 0), (cut_hi, S - 1)):
        sub[cut, column], diag[cut, column], sup[cut, column] = 0.0, 1.0, 0.0

    rhs = np.zeros((centres.size, S, 2), dtype=complex)
    rhs[:, :, 0] = load
    rhs[cut_lo, 0, 0] = 0.0
    rhs[cut_hi, S - 1, 0] = 0.0
    centre_column = tree.positions[level - 1][centres] - lo
    rhs[np.nonzero(interior)[0], centre_column[interior], 1] = 1.0

    solution = _solve_leaves(sub, diag, sup, rhs)
    u, v = solution[:, :, 0], solution[:, :, 1]

    lo_sup, hi_sub = table.sup[lo], table.sub[hi]
    uL = np.where(cut_lo, lo_sup * u[:, 1] - load[:, 0], 0.0)
    uR = np.where(cut_hi, hi_sub * u[:, S - 2] - load[:, S - 1], 0.0)
    vL = np.where(cut_lo & interior, lo_sup * v[:, 1], 0.0)
    vR = np.where(cut_hi & interior, hi_sub * v[:, S - 2], 0.0)

    cond = _leaf_conditions(sub, diag, sup) if condition else None
    return centres, nodes, u, v, uL, uR, vL, vR, cond

def _solve_leaves(sub, diag, sup, rhs):
    # leaves along the first axis; systems are swept together unless they are long
    B, S = diag.shape
    if S <= LARGE_LEAF:
        system = TridiagonalSystem(sub.T, diag.T, sup.T, np.moveaxis(rhs, 1, 0))
        return np.moveaxis(solve_tridiagonal(system), 0, 1)
    out = np.empty(rhs.shape, dtype=complex)
    for b in range(B):
        for r in range(rhs.shape[2]):
            out[b, :, r] = solve_tridiagonal(TridiagonalSystem(sub[b], diag[b], sup[b], rhs[b, :, r]))
    return out

def _leaf_conditions(sub, diag, sup):
    B, S = diag.shape
    if S > DENSE_CONDITION:
        return max(condition_estimate(TridiagonalSystem(sub[b], diag[b], sup[b], np.zeros(S, dtype=complex)))
                   for b in range(B))
    dense = np.zeros((B, S, S), dtype=complex)
    rows = np.arange(S)
    dense[:, rows, rows] = 1.0
    dense[:, rows[1:], rows[:-1]] = sub[:, 1:] / diag[:, 1:]
    dense[:, rows[:-1], rows[1:]] = sup[:, :-1] / diag[:, :-1]
    return float(np.max(np.abs(np.linalg.cond(dense, 1))))

def solve_leaf_locals(tree, problem, table=None, condition=False, n_jobs=1):

    """
    Solve the source and Dirac problems of every leaf.

    Leaf j works on the fine knots of [x_{L,j-1}, x_{L,j+1}] with the rows of the global table: cut ends get
    homogeneous Dirichlet rows, true domain ends keep the boundary rows (data weighted by the hat). The source
    problem has right-hand side f phi_{L,j}; the Dirac problem puts a unit flux jump on the interface row at x_{L,j}.
    Fluxes are the residuals of the global rows at the cut ends.

    ...

    Parameters
    __________
    tree : DatTree
    problem : HelmholtzProblem
    table : RowTable
        Rows with interface rows at every leaf knot; built when omitted.
    condition : bool
        Compute the largest leaf condition number.
    n_jobs : int
        Threads for the leaf batches.

    Returns
    __________
    LevelLocals
    """

    if table is None:
        table = build_row_table(problem, tree.grid, tree.config.M, forced=tree.knots(tree.L), n_jobs=n_jobs)

    level, n = tree.L, tree.n(tree.L)
    centres = np.arange(n + 1)
    lo, hi = tree.support(level, centres)
    sizes = hi - lo + 1
    interior = (centres >= 1) & (centres <= n - 1)

    tasks = []
    for S in np.unique(sizes):
        members = centres[sizes == S]
        per_chunk = max(1, BATCH_NODES // int(S))
        for start in range(0, members.size, per_chunk):
            chunk = members[start:start + per_chunk]
            tasks.append((chunk, int(S), interior[chunk]))

    with parallel_backend("threading", n_jobs=n_jobs):
        parts = Parallel(verbose=0)(delayed(_leaf_chunk)(table, tree, chunk, S, inner, condition)
                                    for chunk, S, inner in tasks)

    fluxes = {name: np.zeros(n + 1, dtype=complex) for name in ("uL", "uR", "vL", "vR")}
    leaves, conds = [], []
    for chunk, nodes, u, v, uL, uR, vL, vR, cond in parts:
        for name, values in (("uL", uL), ("uR", uR), ("vL", vL), ("vR", vR)):
            fluxes[name][chunk] = values
        leaves.append((chunk, nodes, u, v))
        if cond is not None:
            conds.append(cond)

    return LevelLocals(level, fluxes["uL"], fluxes["uR"], fluxes["vL"], fluxes["vR"], leaves=leaves,
                       cond_local=max(conds) if conds else None)

def _parent_hat_weights(X_child, children, X_parent, parents, n_parent):
    x = X_child[children]
    x_left = X_parent[np.maximum(parents - 1, 0)][:, None]
    x_centre = X_parent[parents][:, None]
    x_right = X_parent[np.minimum(parents + 1, n_parent)][:, None]
    rising = (x - x_left) / _safe(x_centre - x_left)
    falling = (x_right - x) / _safe(x_right - x_centre)
    return np.where(x < x_centre, rising, np.where(x > x_centre, falling, 1.0))

def _link(locals_, children, weights, centre):

    """
    Solve one family of linking systems.

    Unknowns are the Dirac weights at the inner children m = 1..K-1. Row m reads
    mu_m + vR[c_{m-1}] mu_{m-1} + vL[c_{m+1}] mu_{m+1} = -w_{m-1} uR[c_{m-1}] - w_{m+1} uL[c_{m+1}].
    """

    B, K = children.shape[0], children.shape[1] - 1
    size = K - 1
    Q = np.zeros((B, size, size), dtype=complex)
    rows = np.arange(size)
    Q[:, rows, rows] = 1.0
    if size > 1:
        Q[:, rows[:-1], rows[1:]] = locals_.vL[children[:, 2:K]]
        Q[:, rows[1:], rows[:-1]] = locals_.vR[children[:, 1:K - 1]]

    gamma = -(weights[:, 0:K - 1] * locals_.uR[children[:, 0:K - 1]] +
              weights[:, 2:K + 1] * locals_.uL[children[:, 2:K + 1]])
    rhs = np.zeros((B, size, 2), dtype=complex)
    rhs[:, :, 0] = gamma
    if centre is not None:
        rhs[:, centre, 1] = 1.0

    try:
        solution = np.linalg.solve(Q, rhs)
    except np.linalg.LinAlgError:
        raise LinkingSingular("a linking matrix is singular")
    if not np.all(np.isfinite(solution)):
        raise LinkingSingular("a linking solve produced non-finite values")
    return Q, gamma, solution[:, :, 0], solution[:, :, 1]

def link_level(tree, level, locals_):

    """
    Combine the local solutions of a level into those of its parent level.

    Parent J takes the children c_0 .. c_0 + K under its support with the refinement weights
    w_k = phi_{l-1,J}(x_{l,c_0+k}), so sum_k w_k phi_{l,c_0+k} = phi_{l-1,J}, plus Dirac solutions at the inner
    children weighted by mu (source) or nu (Dirac). Interior parents use K = 2^(s+1), the two boundary parents
    K = 2^s. Parent fluxes are the same combinations of the child fluxes.

    ...

    Parameters
    __________
    tree : DatTree
    level : int
        Level of the children, >= 2.
    locals_ : LevelLocals
        Children.

    Returns
    __________
    LevelLocals
        Level - 1, flux arrays only, with the link records and the children attached.
    """

    if level < 2:
        raise InvalidInput("link_level combines level >= 2 into its parent; use assemble_global for the root")
    split = 2 ** tree.config.s
    n_child, n_parent = tree.n(level), tree.n(level - 1)
    X_child, X_parent = tree.coordinates(level), tree.coordinates(level - 1)

    groups = []
    inner = np.arange(1, n_parent)
    if inner.size:
        groups.append((inner, split * (inner - 1), 2 * split, split - 1))
    groups.append((np.array([0]), np.array([0]), split, None))
    groups.append((np.array([n_parent]), np.array([n_child - split]), split, None))

    fluxes = {name: np.zeros(n_parent + 1, dtype=complex) for name in ("uL", "uR", "vL", "vR")}
    records = []
    for parents, first, K, centre in groups:
        children = first[:, None] + np.arange(K + 1)[None, :]
        weights = _parent_hat_weights(X_child, children, X_parent, parents, n_parent)
        Q, gamma, mu, nu = _link(locals_, children, weights, centre)

        c_first, c_last = children[:, 1], children[:, K - 1]
        fluxes["uL"][parents] = weights[:, 1] * locals_.uL[c_first] + mu[:, 0] * locals_.vL[c_first]
        fluxes["uR"][parents] = weights[:, K - 1] * locals_.uR[c_last] + mu[:, -1] * locals_.vR[c_last]
        if centre is not None:
            fluxes["vL"][parents] = nu[:, 0] * locals_.vL[c_first]
            fluxes["vR"][parents] = nu[:, -1] * locals_.vR[c_last]
        records.append(LinkRecord(parents, children, weights, Q, gamma, mu, nu))

    for end in (0, n_parent):
        fluxes["vL"][end] = fluxes["vR"][end] = 0.0
    fluxes["uL"][:2] = 0.0
    fluxes["uR"][n_parent - 1:] = 0.0
    return LevelLocals(level - 1, fluxes["uL"], fluxes["uR"], fluxes["vL"], fluxes["vR"], links=records,
                       child=locals_)

def root_link(tree, level1):

    """
    The level-1 linking system: all level-1 sources with weight 1 and Dirac solutions at x_{1,1} .. x_{1,N0-1}.
    """

    n = level1.n
    children = np.arange(n + 1)[None, :]
    weights = np.ones((1, n + 1))
    Q, gamma, mu, nu = _link(level1, children, weights, None)
    return LinkRecord(np.array([0]), children, weights, Q, gamma, mu, nu)

def assemble_global(tree, level1, table=None, problem=None, n_jobs=1):

    """
    Assemble the global solution from the level-1 locals and the chain of finer levels under them.

    The root link gives the Dirac weights of level 1; they are pushed down through every link record
    (W_l[c] += mu_J[m] + W_{l-1}[J] nu_J[m]) until the leaves, where u = sum_j (u_{L,j} + W_L[j] v_{L,j}). Every
    leaf source enters with weight 1 because the hats are refined exactly.

    ...

    Parameters
    __________
    tree : DatTree
    level1 : LevelLocals
    table : RowTable
        Rows used for the derivative estimates; built from problem when omitted.
    problem : HelmholtzProblem
        Needed only when table is omitted.

    Returns
    __________
    NumericalSolution
        info carries "cond_link" and, when computed, "cond_local".
    """

    root = root_link(tree, level1)
    weights = np.zeros(level1.n + 1, dtype=complex)
    weights[1:level1.n] = root.mu[0]
    link_conditions = [float(np.max(root.conditions()))] if root.Q.shape[1] else [1.0]

    current = level1
    while current.child is not None:
        finer = np.zeros(current.child.n + 1, dtype=complex)
        for record in current.links:
            K = record.children.shape[1] - 1
            contribution = record.mu + weights[record.parents][:, None] * record.nu
            np.add.at(finer, record.children[:, 1:K], contribution)
            link_conditions.append(float(np.max(record.conditions())))
        weights = finer
        current = current.child

    if current.leaves is None:
        raise InvalidInput("the finest level carries no leaf solutions")

    values = np.zeros(tree.grid.N + 1, dtype=complex)
    for centres, nodes, u, v in current.leaves:
        np.add.at(values, nodes, u + weights[centres][:, None] * v)

    if table is None:
        if problem is None:
            raise InvalidInput("assemble_global needs the row table or the problem")
        table = build_row_table(problem, tree.grid, tree.config.M, forced=tree.knots(tree.L), n_jobs=n_jobs)
    left, right = table.derivatives(values)

    info = {"cond_link": max(link_conditions)}
    if current.cond_local is not None:
        info["cond_local"] = current.cond_local
    return NumericalSolution(tree.grid, values, left, right, tree.config.M, info)

def dat_solve(problem, config, grid, level1_knots=None, condition=False, n_jobs=1):

    """
    Solve a problem with the Dirac assisted tree: leaf solves, linking up to level 1, global assembly.

    ...

    Parameters
    __________
    problem : HelmholtzProblem
    config : DatConfig
    grid : Grid
        Fine grid; its interval counts between level-1 knots must be divisible by 2^((L-1)s).
    level1_knots : array-like
        Optional level-1 knot coordinates.
    condition : bool
        Report the largest leaf condition number.
    n_jobs : int
        Threads for row generation and leaf solves.

    Returns
    __________
    NumericalSolution
    """

    tree = build_tree(problem, config, grid, level1_knots)
    table = build_row_table(problem, grid, config.M, forced=tree.knots(tree.L), n_jobs=n_jobs)
    locals_ = solve_leaf_locals(tree, problem, table=table, condition=condition, n_jobs=n_jobs)
    for level in range(tree.L, 1, -1):
        locals_ = link_level(tree, level, locals_)
    return assemble_global(tree, locals_, table=table)
