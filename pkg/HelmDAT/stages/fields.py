#=======================================================================================================================
#
#   HelmDAT - Fields
#   License: MIT
#
#   Piecewise coefficient fields a, kappa^2 and f, the expression grammar of definition files, closed-form sources
#   for the reference oracles and the value-only jet synthesis.
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput
from HelmDAT.stages import jet_engine as je
from HelmDAT.stages.jet_engine import Jet

''' External '''
import ast
import numbers
import numpy as np

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

FUNCTIONS = {"exp": je.exp, "log": je.log, "sqrt": je.sqrt, "sin": je.sin, "cos": je.cos, "tan": je.tan,
             "sinh": je.sinh, "cosh": je.cosh, "tanh": je.tanh}
CONSTANTS = {"pi": np.pi, "e": np.e, "i": 1j}
OPERATORS = {ast.Add: lambda p, q: p + q, ast.Sub: lambda p, q: p - q, ast.Mult: lambda p, q: p * q,
             ast.Div: lambda p, q: p / q, ast.Pow: lambda p, q: p ** q}
KNOT_TOLERANCE = 1e-12

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class Expression:

    """
    A parsed coefficient expression in the variable x, callable on arrays and on jets.
    """

    def __init__(self, source, function):
        self.source = source
        self.function = function

    def __call__(self, x):
        return self.function(x)

    def __repr__(self):
        return "Expression(" + repr(self.source) + ")"


class ClosedForm:

    """
    g(x) = sum_k C_k e^{lambda_k x} + sum_n p_n x^n, the source family the piecewise-constant reference solves
    exactly.

    ...

    Attributes
    __________
    exponentials : list of (complex, complex)
        Pairs (C, lambda).
    polynomial : list of complex
        Coefficients p_0, p_1, ...
    """

    def __init__(self, exponentials=(), polynomial=()):
        self.exponentials = [(complex(c), complex(lam)) for c, lam in exponentials]
        self.polynomial = list(polynomial)

    def __call__(self, x):
        result = x * 0.0
        if self.polynomial:
            result = result + self.polynomial[-1]
            for p in reversed(self.polynomial[:-1]):
                result = result * x + p
        for c, lam in self.exponentials:
            result = result + je.exp(x * _real_if_possible(lam)) * _real_if_possible(c)
        return result

    def scaled(self, factor):
        return ClosedForm([(factor * c, lam) for c, lam in self.exponentials], [factor * p for p in self.polynomial])


class PiecewiseField:

    """
    A coefficient that is smooth on each piece [edges[k], edges[k+1]] and may jump at interior edges.

    Pieces are numbers (constants) or callables accepting arrays and jets: Expression, ClosedForm or any function
    built from the jet_engine elementary functions. One-sided values and jets at an edge come from the piece on the
    requested side.

    ...

    Attributes
    __________
    edges : ndarray
        Strictly increasing, edges[0] and edges[-1] are the interval ends.
    pieces : list
        One provider per piece.
    value_only : bool
        Synthesise jets from point values instead of evaluating the providers on jets.
    """

    def __init__(self, edges, pieces, value_only=False):
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise InvalidInput("field edges must be strictly increasing with at least two entries")
        if len(pieces) != edges.size - 1:
            raise InvalidInput("a field with " + str(edges.size - 1) + " pieces got " + str(len(pieces)) +
                               " providers")
        self.edges = edges
        self.pieces = list(pieces)
        self.value_only = value_only

    @classmethod
    def constant(cls, value, interval=(0.0, 1.0)):
        return cls(interval, [value])

    @property
    def interval(self):
        return float(self.edges[0]), float(self.edges[-1])

    @property
    def breakpoints(self):
        return self.edges[1:-1]

    @property
    def n_pieces(self):
        return len(self.pieces)

    def is_constant(self):
        return all(isinstance(p, numbers.Number) for p in self.pieces)

    def with_value_only(self, value_only=True):
        return PiecewiseField(self.edges, self.pieces, value_only)

    def piece_index(self, points, side="right"):

        """
        Index of the piece each point belongs to, taking the piece on the requested side at interior edges.
        """

        points = np.asarray(points, dtype=float)
        how = "right" if side == "right" else "left"
        index = np.searchsorted(self.breakpoints, points, side=how)
        return np.clip(index, 0, self.n_pieces - 1)

    def __call__(self, points, side="right"):
        points = np.asarray(points, dtype=float)
        flat = points.reshape(-1)
        index = self.piece_index(flat, side)
        results = {}
        for k in np.unique(index):
            mask = index == k
            results[k] = (mask, np.broadcast_to(_evaluate(self.pieces[k], flat[mask]), (int(mask.sum()),)))
        out = np.zeros(flat.shape, dtype=np.result_type(float, *[r[1] for r in results.values()]))
        for mask, values in results.values():
            out[mask] = values
        return out.reshape(points.shape)

    def jets(self, points, order, side="right", steps=None):

        """
        One-sided jets of the field at many base points.

        ...

        Parameters
        __________
        points : ndarray
            Base points, shape (n,).
        order : int
            Jet order.
        side : str
            "right" or "left".
        steps : ndarray
            Grid step on the requested side of each point; required in value-only mode.

        Returns
        __________
        Jet
            coeffs of shape (order + 1, n).
        """

        points = np.asarray(points, dtype=float).reshape(-1)
        index = self.piece_index(points, side)
        if self.value_only:
            if steps is None:
                raise InvalidInput("value-only jets need the grid steps")
            steps = np.broadcast_to(np.asarray(steps, dtype=float), points.shape)

        blocks = {}
        for k in np.unique(index):
            mask = index == k
            if self.value_only and not isinstance(self.pieces[k], numbers.Number):
                bounds = (self.edges[k], self.edges[k + 1])
                sampler = _sampler(self.pieces[k])
                jet = jets_from_values(sampler, points[mask], steps[mask], order, bounds)
                blocks[k] = (mask, jet.coeffs)
            else:
                blocks[k] = (mask, _jet_coeffs(self.pieces[k], points[mask], order))

        coeffs = np.zeros((order + 1, points.size), dtype=np.result_type(float, *[b[1] for b in blocks.values()]))
        for mask, block in blocks.values():
            coeffs[:, mask] = block
        return Jet(coeffs, points)


''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def _real_if_possible(value):
    value = complex(value)
    return value.real if value.imag == 0 else value

def _evaluate(piece, x):
    if isinstance(piece, numbers.Number):
        return np.full(np.shape(x), piece, dtype=np.result_type(float, type(piece)))
    return np.broadcast_to(np.asarray(piece(x)), np.shape(x))

def _sampler(piece):
    return lambda x: _evaluate(piece, x)

def _jet_coeffs(piece, points, order):
    if isinstance(piece, numbers.Number):
        return je.constant_jet(np.full(points.shape, piece), order).coeffs
    result = piece(je.identity_jet(points, order))
    if isinstance(result, Jet):
        return np.broadcast_to(result.coeffs, (order + 1,) + points.shape)
    return je.constant_jet(np.broadcast_to(np.asarray(result), points.shape), order).coeffs

def _compile(node):
    if isinstance(node, ast.Expression):
        return _compile(node.body)

    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float, complex)):
            raise InvalidInput("unsupported literal " + repr(node.value))
        value = node.value
        return lambda x: value

    if isinstance(node, ast.Name):
        if node.id == "x":
            return lambda x: x
        if node.id in CONSTANTS:
            value = CONSTANTS[node.id]
            return lambda x: value
        raise InvalidInput("unknown name " + repr(node.id))

    if isinstance(node, ast.UnaryOp):
        operand = _compile(node.operand)
        if isinstance(node.op, ast.USub):
            return lambda x: -operand(x)
        if isinstance(node.op, ast.UAdd):
            return operand
        raise InvalidInput("unsupported unary operator")

    if isinstance(node, ast.BinOp):
        operator = OPERATORS.get(type(node.op))
        if operator is None:
            raise InvalidInput("unsupported operator " + type(node.op).__name__)
        left, right = _compile(node.left), _compile(node.right)
        return lambda x: operator(left(x), right(x))

    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise InvalidInput("unknown function in expression")
        if len(node.args) != 1 or node.keywords:
            raise InvalidInput(node.func.id + " takes exactly one argument")
        function, argument = FUNCTIONS[node.func.id], _compile(node.args[0])
        return lambda x: function(argument(x))

    raise InvalidInput("unsupported syntax: " + type(node).__name__)

def parse_expression(text):

    """
    Parse a coefficient expression.

    The grammar allows numbers (complex literals such as 2j included), the variable x, the constants pi, e and i,
    the operators + - * / ** and unary minus, and the functions exp, log, sqrt, sin, cos, tan, sinh, cosh, tanh.

    ...

    Parameters
    __________
    text : str
        Expression source.

    Returns
    __________
    Expression
        Callable on arrays and jets, so derivatives come out exactly.
    """

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as error:
        raise InvalidInput("cannot parse expression " + repr(text) + ": " + str(error.msg))
    return Expression(text.strip(), _compile(tree))

def _window(points, steps, M, bounds):
    # first integer offset of the M + 1 samples: centred where the piece allows, pushed inside it otherwise
    delta = steps / 2.0
    lo, hi = bounds
    room_lo = np.minimum(np.floor((points - lo) / delta + 1e-9), M)
    room_hi = np.minimum(np.floor((hi - points) / delta + 1e-9), M)
    first = np.clip(-(M // 2), -room_lo, room_hi - M)
    return delta, np.clip(first, -M, 0).astype(int)

def jets_from_values(sampler, points, steps, M, bounds=None, order=None):

    """
    Jets at base points from function values only.

    The degree-M polynomial through M + 1 samples with spacing h/2 is differentiated at the base point, which is one
    of the samples. The window is centred on the base point where the piece leaves room and slides inside the
    piece near its ends; at a breakpoint the bounds pick the piece, so the window lies entirely inside them.

    ...

    Parameters
    __________
    sampler : callable
        Point values of the smooth piece, vectorised.
    points : ndarray
        Base points.
    steps : ndarray or float
        Grid step h at each base point.
    M : int
        Polynomial degree (the accuracy order).
    bounds : tuple
        The piece (lo, hi) all samples must stay in; defaults to unbounded.
    order : int
        Jet order to return, at most M (default M).

    Returns
    __________
    Jet
    """

    order = M if order is None else order
    if order > M:
        raise InvalidInput("value-only jets of degree " + str(M) + " cannot provide order " + str(order))
    points = np.atleast_1d(np.asarray(points, dtype=float))
    steps = np.broadcast_to(np.asarray(steps, dtype=float), points.shape)
    if np.any(steps <= 0):
        raise InvalidInput("value-only jets need positive steps")
    bounds = (-np.inf, np.inf) if bounds is None else bounds

    delta, first = _window(points, steps, M, bounds)
    offsets = first[:, None] + np.arange(M + 1)[None, :]
    samples_at = points[:, None] + offsets * delta[:, None]
    slack = KNOT_TOLERANCE * max(1.0, np.max(np.abs(points)))
    if np.any(samples_at < bounds[0] - slack) or np.any(samples_at > bounds[1] + slack):
        raise InvalidInput("value-only samples straddle a breakpoint; the piece is too short for order " + str(M))

    values = np.asarray(sampler(np.clip(samples_at, bounds[0], bounds[1])))
    coeffs = np.zeros((M + 1, points.size), dtype=np.result_type(float, values))
    for start in np.unique(first):
        rows = first == start
        vandermonde = np.vander(np.arange(start, start + M + 1, dtype=float), M + 1, increasing=True)
        fit = values[rows] @ np.linalg.inv(vandermonde).T
        coeffs[:, rows] = fit.T / delta[rows][None, :] ** np.arange(M + 1)[:, None]
    return Jet(coeffs[:order + 1], points)
