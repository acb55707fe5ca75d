#=======================================================================================================================
#
#   HelmDAT - Stencil factory
#   License: MIT
#
#   Compact three-point rows of accuracy order M built from Taylor triples: interior, boundary, interface and
#   one-sided derivative rows, plus the constant-coefficient (pollution free) interior row.
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput, InvalidBoundaryCondition
from HelmDAT.stages.jet_engine import TruncatedPolys, truncated_polys, constant_closed_forms, validate_order

''' External '''
import numpy as np

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class StencilRow:

    """
    One compact discretisation row (batched over base points).

    The row reads

        sub u_{j-1} + diag u_j + sup u_{j+1} = rhs_extra + sum_l w_left[l] f^{(l)}(x_j-) + sum_l w_right[l] f^{(l)}(x_j+)

    where (sub, diag, sup) = c / h^scale and w = d h^l per side (plus f itself for interior rows). Interface rows
    mix two step sizes and store their coefficients already assembled (scale 0). For derivative rows the same
    bookkeeping gives u'(x_j+-) = matrix row . u - sum w f.

    ...

    Attributes
    __________
    kind : str
        "interior", "boundary_right", "boundary_left", "interface" or "derivative".
    c : ndarray
        Shape (3, *batch), coefficients of the offsets -1, 0, +1.
    d_left, d_right : ndarray or None
        Shape (M - 1, *batch), source weights d_l, l = 0..M-2, for the side actually used.
    h_left, h_right : float or ndarray or None
        Step to the left/right neighbour.
    scale : int
        Power of h dividing c.
    side : str or None
        "left" or "right" for one-sided rows.
    rhs_extra : complex
        Boundary datum g or Dirac weight w.
    """

    def __init__(self, kind, c, d_left=None, d_right=None, h_left=None, h_right=None, scale=0, side=None,
                 rhs_extra=0.0):
        self.kind = kind
        self.c = c
        self.d_left = d_left
        self.d_right = d_right
        self.h_left = h_left
        self.h_right = h_right
        self.scale = scale
        self.side = side
        self.rhs_extra = rhs_extra

    @property
    def order(self):
        d = self.d_right if self.d_right is not None else self.d_left
        return d.shape[0] + 1

    def _step(self):
        return self.h_left if self.side == "left" else self.h_right

    def matrix_row(self):

        """
        Return (sub, diag, sup), the assembled matrix coefficients.
        """

        if self.scale == 0:
            return self.c[0], self.c[1], self.c[2]
        step = self._step() if self.kind != "interior" else self.h_right
        scaled = self.c / np.asarray(step) ** self.scale
        return scaled[0], scaled[1], scaled[2]

    def source_weights(self):

        """
        Return (w_left, w_right), the multipliers of f^{(l)}(x_j-) and f^{(l)}(x_j+) on the right-hand side.
        """

        weights = []
        for d, h in ((self.d_left, self.h_left), (self.d_right, self.h_right)):
            if d is None:
                weights.append(None)
                continue
            powers = np.asarray(h)[None, ...] ** _expand_index(d.shape[0], d.ndim)
            w = d * powers
            if self.kind == "interior":
                w = w.copy()
                w[0] = w[0] + 1.0
            weights.append(w)
        return weights[0], weights[1]

    def apply(self, u, f_left=None, f_right=None):

        """
        Residual of the row on knot values u = (u_{j-1}, u_j, u_{j+1}) and one-sided source derivatives.

        For derivative rows the result is the derivative estimate itself.

        ...

        Parameters
        __________
        u : sequence of three arrays
            Values at offsets -1, 0, +1 (an unused offset may hold anything finite).
        f_left, f_right : ndarray
            f^{(l)}(x_j-) and f^{(l)}(x_j+), l = 0..M-2, along the first axis.

        Returns
        __________
        ndarray
        """

        sub, diag, sup = self.matrix_row()
        result = sub * u[0] + diag * u[1] + sup * u[2] - self.rhs_extra
        w_left, w_right = self.source_weights()
        for w, f in ((w_left, f_left), (w_right, f_right)):
            if w is None:
                continue
            if f is None:
                raise InvalidInput(self.kind + " row needs source derivatives on both of its sides")
            result = result - np.sum(w * np.asarray(f)[:w.shape[0]], axis=0)
        return result


''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def _expand_index(n, ndim):
    return np.arange(n).reshape((n,) + (1,) * (ndim - 1))

def _alternating(n, ndim):
    return ((-1.0) ** np.arange(n)).reshape((n,) + (1,) * (ndim - 1))

def _polys(source, M=None):
    polys = source if isinstance(source, TruncatedPolys) else truncated_polys(source)
    if M is not None and validate_order(M) != polys.order:
        raise InvalidInput("triples of order " + str(polys.order) + " cannot build an order " + str(M) + " row")
    return polys

def _stack(*arrays):
    return np.stack(np.broadcast_arrays(*arrays))

def _right_parts(polys, t, lambda0, lambda1):
    # the right-sided boundary formulas evaluated at a signed step t
    e1 = polys.e1neg(t)
    c1 = -lambda1 * e1
    c0 = t * lambda0 + lambda1 * e1 * polys.e0(t)
    d = -t * lambda1 * e1 * polys.source_terms(t)
    return c0, c1, d

def interior_stencil(triples, h, M=None):

    """
    Interior row with c_{-1} = -E1neg(-h), c_1 = -E1neg(h), c_0 = E1neg(h)E0(h) + E1neg(-h)E0(-h) and
    d_l = -delta_{0l} - E1neg(h)F_l(h) - (-1)^l E1neg(-h)F_l(-h).

    ...

    Parameters
    __________
    triples : TaylorTriples or TruncatedPolys
        Expansion at the base point (coefficients smooth on (x_b - h, x_b + h)).
    h : float or ndarray
        Grid step, equal on both sides.
    M : int
        Optional check of the accuracy order.

    Returns
    __________
    StencilRow
        Assembled as c / h^2 with right-hand side f + sum_l d_l h^l f^{(l)}.
    """

    polys = _polys(triples, M)
    e1p, e1m = polys.e1neg(h), polys.e1neg(-h)
    c0 = e1p * polys.e0(h) + e1m * polys.e0(-h)

    f_p, f_m = polys.source_terms(h), polys.source_terms(-h)
    d = -e1p * f_p - _alternating(f_p.shape[0], f_p.ndim) * e1m * f_m
    d = d.copy()
    d[0] = d[0] - 1.0

    return StencilRow("interior", _stack(-e1m, c0, -e1p), d_right=d, h_left=h, h_right=h, scale=2)

def boundary_stencil(triples, side, lambda0, lambda1, h, M=None, g=0.0, kind=None):

    """
    Boundary row for lambda0 u(x_b) + lambda1 u'(x_b+-) = g.

    Right side (left end of an interval): c_1 = -lambda1 E1neg(h), c_0 = h lambda0 + lambda1 E1neg(h)E0(h),
    d_l = -h lambda1 E1neg(h)F_l(h). The left side mirrors it: c_{-1}(h) = -c_1(-h), c_0(h) = -c_0(-h) and
    d_l(h) = (-1)^l d_l(-h), with the triples of the left-sided jets.

    ...

    Parameters
    __________
    triples : TaylorTriples or TruncatedPolys
        One-sided expansion on the side the row looks into.
    side : str
        "right" (the row uses x_b and x_b + h) or "left" (x_b - h and x_b).
    lambda0, lambda1 : complex
        Boundary operator.
    h : float or ndarray
        Step to the neighbour.
    g : complex
        Boundary datum, stored as rhs_extra.

    Returns
    __________
    StencilRow
        Assembled as c / h with right-hand side g + sum_l d_l h^l f^{(l)}.
    """

    if np.any(np.abs(lambda0) + np.abs(lambda1) == 0):
        raise InvalidBoundaryCondition("boundary operator with lambda0 = lambda1 = 0")
    polys = _polys(triples, M)

    if side == "right":
        c0, c1, d = _right_parts(polys, h, lambda0, lambda1)
        return StencilRow(kind or "boundary_right", _stack(np.zeros_like(c0), c0, c1), d_right=d, h_right=h,
                          scale=1, side="right", rhs_extra=g)
    if side == "left":
        c0, c1, d = _right_parts(polys, -np.asarray(h), lambda0, lambda1)
        d = _alternating(d.shape[0], d.ndim) * d
        return StencilRow(kind or "boundary_left", _stack(-c1, -c0, np.zeros_like(c0)), d_left=d, h_left=h,
                          scale=1, side="left", rhs_extra=g)
    raise InvalidInput("side must be 'left' or 'right', got " + repr(side))

def derivative_estimator(triples, side, h, M=None):

    """
    One-sided derivative row: u'(x_b+-) = matrix row . u - sum_l w_l f^{(l)}(x_b+-) + O(h^M).
    """

    return boundary_stencil(triples, side, 0.0, 1.0, h, M=M, kind="derivative")

def interface_row(triples_left, triples_right, a_left, a_right, h_left, h_right, M=None, w=0.0):

    """
    Flux-jump row a(x_b+) u'(x_b+) - a(x_b-) u'(x_b-) = w from the two one-sided derivative rows.

    w = 0 is a transmission row (smooth or discontinuous coefficients), w = 1 a unit Dirac at x_b.

    ...

    Returns
    __________
    StencilRow
        kind "interface", coefficients stored assembled.
    """

    if np.any(np.asarray(h_left) <= 0) or np.any(np.asarray(h_right) <= 0):
        raise InvalidInput("an interface row needs a neighbour on both sides")

    right = derivative_estimator(triples_right, "right", h_right, M)
    left = derivative_estimator(triples_left, "left", h_left, M)
    _, r_diag, r_sup = right.matrix_row()
    l_sub, l_diag, _ = left.matrix_row()

    c = _stack(-a_left * l_sub, a_right * r_diag - a_left * l_diag, a_right * r_sup)
    return StencilRow("interface", c, d_left=-a_left * left.d_left, d_right=a_right * right.d_right,
                      h_left=h_left, h_right=h_right, scale=0, rhs_extra=w)

def pollution_free_interior_stencil(a, kappa2, h, l_max=0):

    """
    Interior row for constant a and kappa^2 from the closed forms: c_{+-1} = 1/E_1(h), c_0 = -2 E_0(h)/E_1(h).

    The row is exact on e^{+-i kappa x / sqrt(a)} for every h. Source weights are returned for l = 0..l_max.
    """

    kappa = np.emath.sqrt(kappa2)
    e0, e1, F = constant_closed_forms(a, kappa, h, l_max)
    side = 1.0 / e1
    d = (1.0 + _alternating(F.shape[0], F.ndim)) * F * side
    d = d.copy()
    d[0] = d[0] - 1.0
    return StencilRow("interior", _stack(side, -2.0 * e0 * side, side), d_right=d, h_left=h, h_right=h, scale=2)

def numerical_wavenumber(row, h):

    """
    Discrete wave number k_h of a symmetric constant-coefficient interior row, cos(k_h h) = -c_0 / (2 c_1).
    """

    return np.emath.arccos(-row.c[1] / (2.0 * row.c[2])) / h

def phase_error(row, h, kappa, a=1.0):

    """
    k_h - kappa / sqrt(a), the dispersion error of an interior row.
    """

    return numerical_wavenumber(row, h) - kappa / np.sqrt(a)
