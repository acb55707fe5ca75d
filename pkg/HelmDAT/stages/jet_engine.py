#=======================================================================================================================
#
#   HelmDAT - Jet engine
#   License: MIT
#
#   Truncated power series (jets) at a base point and the Taylor triples E_{j,0}, E_{j,1}, F_{j,l} that express
#   u^{(j)}(x_b) through u(x_b), u'(x_b) and the derivatives of the source.
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput, SingularCoefficient

''' External '''
import numbers
import numpy as np

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

SERIES_TERMS = 40
SERIES_RADIUS = 4.0

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''


class Jet:

    """
    A truncated Taylor expansion g(x_b + t) = sum_k coeffs[k] t^k, one-sided at discontinuities.

    The coefficient axis comes first and any trailing axes are batch axes, so one Jet can carry the expansions at
    many base points at once. Arithmetic broadcasts over the batch axes and truncates to the smaller order.

    ...

    Attributes
    __________
    coeffs : ndarray
        Shape (order + 1, *batch). coeffs[k] = g^{(k)}(x_b) / k!.
    base : float or ndarray
        Base point(s) of the expansion.
    """

    __array_priority__ = 1000
    __array_ufunc__ = None

    def __init__(self, coeffs, base=0.0):
        coeffs = np.asarray(coeffs)
        if coeffs.ndim == 0:
            coeffs = coeffs.reshape(1)
        if coeffs.shape[0] == 0:
            raise InvalidInput("a jet needs at least one coefficient")
        self.coeffs = coeffs
        self.base = base

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def batch_shape(self):
        return self.coeffs.shape[1:]

    @property
    def value(self):
        return self.coeffs[0]

    def derivatives(self):

        """
        Return g^{(k)}(x_b) for k = 0..order, shaped like coeffs.
        """

        return self.coeffs * _expand(factorials(self.order + 1), self.coeffs.ndim)

    def truncate(self, order):
        if order > self.order:
            raise InvalidInput("cannot extend a jet of order " + str(self.order) + " to order " + str(order))
        return Jet(self.coeffs[:order + 1], self.base)

    def differentiate(self):
        if self.order == 0:
            raise InvalidInput("cannot differentiate a jet of order 0")
        k = _expand(np.arange(1, self.order + 1, dtype=float), self.coeffs.ndim)
        return Jet(self.coeffs[1:] * k, self.base)

    def evaluate(self, t):

        """
        Evaluate the truncated series at offset t from the base point (Horner).
        """

        result = self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            result = result * t + c
        return result

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        other = np.asarray(other)
        if other.dtype == object:
            return NotImplemented
        coeffs = np.zeros((self.order + 1,) + other.shape, dtype=np.result_type(other.dtype, float))
        coeffs[0] = other
        return Jet(coeffs, self.base)

    def __neg__(self):
        return Jet(-self.coeffs, self.base)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p, q, _ = _pair(self, other)
        return Jet(p + q, self.base)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p, q, _ = _pair(self, other)
        return Jet(p - q, self.base)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            if other.dtype == object:
                return NotImplemented
            return Jet(_expand(self.coeffs, max(self.coeffs.ndim, other.ndim + 1)) * other, self.base)
        p, q, n = _pair(self, other)
        return Jet(_cauchy(p, q, n), self.base)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            if other.dtype == object:
                return NotImplemented
            if np.any(other == 0):
                raise SingularCoefficient("division of a jet by zero")
            return Jet(_expand(self.coeffs, max(self.coeffs.ndim, other.ndim + 1)) / other, self.base)
        p, q, n = _pair(self, other)
        return Jet(_divide(p, q, n), self.base)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, exponent):
        return power(self, exponent)

    def __rpow__(self, base):
        return exp(self * np.emath.log(base))

    def __repr__(self):
        return "Jet(order=" + str(self.order) + ", batch=" + str(self.batch_shape) + ")"


class TaylorTriples:

    """
    The coefficients of u^{(j)}(x_b) = E_{j,0} u(x_b) + E_{j,1} u'(x_b) + sum_l F_{j,l} f^{(l)}(x_b), j = 0..M.

    ...

    Attributes
    __________
    order : int
        Even accuracy order M.
    e0, e1 : ndarray
        Shape (M + 1, *batch); rows 0 and 1 hold the trivial values (1, 0) and (0, 1).
    f : ndarray
        Shape (M + 1, M - 1, *batch); f[j, l] = F_{j,l}, zero where j < l + 2.
    side : str
        "left" or "right", the one-sided jets that produced the triples.
    a0 : ndarray
        a(x_b) on that side.
    """

    def __init__(self, order, e0, e1, f, side, a0):
        self.order = order
        self.e0 = e0
        self.e1 = e1
        self.f = f
        self.side = side
        self.a0 = a0

    @property
    def E0(self):
        return self.e0[2:]

    @property
    def E1(self):
        return self.e1[2:]

    @property
    def batch_shape(self):
        return self.e0.shape[1:]


class TruncatedPoly:

    """
    A polynomial in the step h with batched coefficients, coeffs[k] multiplying h^k.
    """

    def __init__(self, coeffs, kind, index=None):
        self.coeffs = coeffs
        self.kind = kind
        self.index = index

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def __call__(self, h):
        result = self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            result = result * h + c
        return result


class TruncatedPolys:

    """
    The generating polynomials of one set of Taylor triples: E0^M, E1neg^{M-1} (truncation of -1/E_1) and
    F_l^{M-l-2} for l = 0..M-2.
    """

    def __init__(self, order, e0, e1neg, f, side, a0):
        self.order = order
        self.e0 = e0
        self.e1neg = e1neg
        self.f = f
        self.side = side
        self.a0 = a0

    def source_terms(self, h):

        """
        Evaluate every F_l at h.

        Returns
        __________
        ndarray
            Shape (M - 1, *broadcast batch).
        """

        return np.stack(np.broadcast_arrays(*[fl(h) for fl in self.f]))


''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def factorials(n):

    """ Return 0!, 1!, ..., (n-1)! as floats. """

    return np.cumprod(np.r_[1.0, np.arange(1, n, dtype=float)])[:n]

def validate_order(M):

    """
    Accept only even accuracy orders M >= 2.
    """

    if isinstance(M, bool) or not isinstance(M, numbers.Integral) or M < 2 or M % 2:
        raise InvalidInput("accuracy order must be an even integer >= 2, got " + repr(M))
    return int(M)

def _expand(coeffs, ndim):
    coeffs = np.asarray(coeffs)
    return coeffs.reshape(coeffs.shape[:1] + (1,) * (ndim - coeffs.ndim) + coeffs.shape[1:])

def _pair(a, b):
    n = min(a.order, b.order)
    p, q = a.coeffs[:n + 1], b.coeffs[:n + 1]
    ndim = max(p.ndim, q.ndim)
    return _expand(p, ndim), _expand(q, ndim), n

def _empty_like_pair(p, q, n):
    shape = np.broadcast_shapes(p.shape[1:], q.shape[1:])
    return np.zeros((n + 1,) + shape, dtype=np.result_type(p, q))

def _cauchy(p, q, n):
    out = _empty_like_pair(p, q, n)
    for k in range(n + 1):
        acc = p[0] * q[k]
        for i in range(1, k + 1):
            acc = acc + p[i] * q[k - i]
        out[k] = acc
    return out

def _divide(p, q, n):
    q0 = q[0]
    if np.any(q0 == 0):
        raise SingularCoefficient("division by a series whose constant term vanishes")
    out = _empty_like_pair(p, q, n)
    for k in range(n + 1):
        acc = p[k]
        for i in range(1, k + 1):
            acc = acc - q[i] * out[k - i]
        out[k] = acc / q0
    return out

def _branch_safe(coeffs):
    # principal branch for log/sqrt/fractional powers of negative reals
    if not np.iscomplexobj(coeffs) and np.any(coeffs[0] < 0):
        return coeffs.astype(complex)
    return coeffs

def _composition(x, first, rule):
    a = x.coeffs
    out = np.zeros(a.shape, dtype=np.result_type(a, first))
    out[0] = first
    for k in range(1, x.order + 1):
        out[k] = rule(a, out, k)
    return Jet(out, x.base)

def jet_from_derivatives(values, base=0.0):

    """
    Build a jet from one-sided derivatives g^{(k)}(x_b), k = 0..K.

    ...

    Parameters
    __________
    values : array-like
        Derivatives along the first axis, batch along the others.
    base : float or ndarray
        Base point.

    Returns
    __________
    Jet
        coeffs[k] = values[k] / k!.
    """

    values = np.asarray(values)
    if values.ndim == 0 or values.shape[0] == 0:
        raise InvalidInput("jet_from_derivatives needs at least one derivative")
    values = values.astype(np.result_type(values.dtype, float))
    return Jet(values / _expand(factorials(values.shape[0]), values.ndim), base)

def identity_jet(points, order):

    """
    The jet of g(x) = x at the given base points.
    """

    points = np.asarray(points, dtype=float)
    coeffs = np.zeros((order + 1,) + points.shape)
    coeffs[0] = points
    if order >= 1:
        coeffs[1] = 1.0
    return Jet(coeffs, points)

def constant_jet(value, order, base=0.0):
    value = np.asarray(value)
    coeffs = np.zeros((order + 1,) + value.shape, dtype=np.result_type(value.dtype, float))
    coeffs[0] = value
    return Jet(coeffs, base)

def jet_ops(a, b=None, kind="add"):

    """
    Apply one truncated-power-series operation.

    ...

    Parameters
    __________
    a, b : Jet
        Operands at the same base point; b is ignored for "differentiate".
    kind : str
        "add", "sub", "mul", "div" or "differentiate".

    Returns
    __________
    Jet
        Result truncated to the smaller order (input order - 1 for "differentiate").
    """

    if kind == "differentiate":
        return a.differentiate()

    if not isinstance(a, Jet) or not isinstance(b, Jet):
        raise InvalidInput("jet_ops expects two jets")
    if not np.all(np.asarray(a.base) == np.asarray(b.base)):
        raise InvalidInput("jets expanded at different base points")

    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise InvalidInput("unknown jet operation: " + str(kind))

def power(x, exponent):

    """
    x ** exponent for a jet x: repeated squaring for integers, the J.C.P. Miller recurrence otherwise.
    """

    if isinstance(exponent, Jet):
        return exp(exponent * log(x))

    if isinstance(exponent, numbers.Integral) or (isinstance(exponent, float) and exponent.is_integer()):
        n = int(exponent)
        if n < 0:
            return 1.0 / power(x, -n)
        result = constant_jet(np.ones(x.batch_shape), x.order, x.base)
        square = x
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    a = _branch_safe(x.coeffs)
    if np.any(a[0] == 0):
        raise SingularCoefficient("non-integer power of a series with vanishing constant term")
    p = complex(exponent) if isinstance(exponent, complex) else float(exponent)

    def rule(c, out, k):
        acc = 0
        for j in range(1, k + 1):
            acc = acc + ((p + 1) * j - k) * c[j] * out[k - j]
        return acc / (k * c[0])

    return _composition(Jet(a, x.base), a[0] ** p, rule)

def exp(x):
    if not isinstance(x, Jet):
        return np.exp(x)

    def rule(c, out, k):
        acc = 0
        for j in range(1, k + 1):
            acc = acc + j * c[j] * out[k - j]
        return acc / k

    return _composition(x, np.exp(x.coeffs[0]), rule)

def log(x):
    if not isinstance(x, Jet):
        return np.emath.log(x)
    a = _branch_safe(x.coeffs)
    if np.any(a[0] == 0):
        raise SingularCoefficient("logarithm of a series with vanishing constant term")

    def rule(c, out, k):
        acc = c[k]
        for j in range(1, k):
            acc = acc - j * out[j] * c[k - j] / k
        return acc / c[0]

    return _composition(Jet(a, x.base), np.log(a[0]), rule)

def sqrt(x):
    if not isinstance(x, Jet):
        return np.emath.sqrt(x)
    return power(x, 0.5)

def _paired(x, first, second, sign):
    # sin/cos (sign -1) and sinh/cosh (sign +1) are generated together
    a = x.coeffs
    s = np.zeros(a.shape, dtype=np.result_type(a, first))
    c = np.zeros(a.shape, dtype=np.result_type(a, second))
    s[0], c[0] = first, second
    for k in range(1, x.order + 1):
        acc_s, acc_c = 0, 0
        for j in range(1, k + 1):
            acc_s = acc_s + j * a[j] * c[k - j]
            acc_c = acc_c + j * a[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = sign * acc_c / k
    return Jet(s, x.base), Jet(c, x.base)

def sincos(x):
    return _paired(x, np.sin(x.coeffs[0]), np.cos(x.coeffs[0]), -1)

def sinhcosh(x):
    return _paired(x, np.sinh(x.coeffs[0]), np.cosh(x.coeffs[0]), 1)

def sin(x):
    return sincos(x)[0] if isinstance(x, Jet) else np.sin(x)

def cos(x):
    return sincos(x)[1] if isinstance(x, Jet) else np.cos(x)

def tan(x):
    if not isinstance(x, Jet):
        return np.tan(x)
    s, c = sincos(x)
    return s / c

def sinh(x):
    return sinhcosh(x)[0] if isinstance(x, Jet) else np.sinh(x)

def cosh(x):
    return sinhcosh(x)[1] if isinstance(x, Jet) else np.cosh(x)

def tanh(x):
    if not isinstance(x, Jet):
        return np.tanh(x)
    s, c = sinhcosh(x)
    return s / c

def compute_taylor_triples(a_jet, kappa2_jet, M, side="right"):

    """
    Run the triple recursion at a base point.

        E_{j+1,0} = E_{j,0}' - (kappa^2 / a) E_{j,1}
        E_{j+1,1} = E_{j,0} + E_{j,1}' - (a' / a) E_{j,1}
        F_{j+1,l} = F_{j,l}' + F_{j,l-1},   F_{j,-1} = E_{j,1} / a

    starting from E_{2,0} = -kappa^2 / a, E_{2,1} = -a' / a and F_{2,0} = 1 / a. Each quantity is carried as a jet
    so the primes are exact; every step consumes one order.

    ...

    Parameters
    __________
    a_jet : Jet
        Jet of a, order >= M - 1.
    kappa2_jet : Jet
        Jet of kappa^2, order >= M - 2.
    M : int
        Even accuracy order.
    side : str
        Which one-sided jets were supplied.

    Returns
    __________
    TaylorTriples
    """

    M = validate_order(M)
    if a_jet.order < M - 1:
        raise InvalidInput("the jet of a must have order >= M - 1 = " + str(M - 1))
    if kappa2_jet.order < M - 2:
        raise InvalidInput("the jet of kappa^2 must have order >= M - 2 = " + str(M - 2))

    a = a_jet.truncate(M - 1)
    k2 = kappa2_jet.truncate(M - 2)
    if np.any(a.coeffs[0] == 0):
        raise SingularCoefficient("a(x_b) = 0")

    inv_a = 1.0 / a
    ratio_k = k2 * inv_a
    ratio_a = a.differentiate() * inv_a

    e0, e1 = -ratio_k, -ratio_a
    fs = [inv_a.truncate(M - 2)]

    batch = np.broadcast_shapes(a.batch_shape, k2.batch_shape)
    dtype = np.result_type(a.coeffs, k2.coeffs)
    E0 = np.zeros((M + 1,) + batch, dtype=dtype)
    E1 = np.zeros((M + 1,) + batch, dtype=dtype)
    F = np.zeros((M + 1, M - 1) + batch, dtype=dtype)
    E0[0] = 1.0
    E1[1] = 1.0

    for j in range(2, M + 1):
        E0[j] = e0.coeffs[0]
        E1[j] = e1.coeffs[0]
        for l, fj in enumerate(fs):
            F[j, l] = fj.coeffs[0]
        if j == M:
            break

        lower = e1 * inv_a
        new_fs = [fs[0].differentiate() + lower]
        for l in range(1, len(fs)):
            new_fs.append(fs[l].differentiate() + fs[l - 1])
        new_fs.append(fs[-1].truncate(M - j - 1))

        e0, e1 = e0.differentiate() - ratio_k * e1, e0 + e1.differentiate() - ratio_a * e1
        fs = new_fs

    return TaylorTriples(M, E0, E1, F, side, np.broadcast_to(a.coeffs[0], batch))

def truncated_polys(triples):

    """
    Build E0^M, E1neg^{M-1} and F_l^{M-l-2} from a set of triples.

    E0^M has coefficient E_{j,0}/j! at degree j; E_1(h) = sum_k E_{k+1,1}/(k+1)! h^k and E1neg^{M-1} is the series
    reciprocal of -E_1 truncated to degree M-1; F_l has coefficient F_{l+2+k,l}/(l+2+k)! at degree k.

    ...

    Returns
    __________
    TruncatedPolys
    """

    M = triples.order
    ndim = triples.e0.ndim
    fact = _expand(factorials(M + 1), ndim)

    e0 = triples.e0 / fact
    e1_series = Jet(triples.e1[1:] / fact[1:])
    e1neg = -(1.0 / e1_series)

    fl = []
    for l in range(M - 1):
        rows = np.arange(l + 2, M + 1)
        fl.append(TruncatedPoly(triples.f[rows, l] / fact[rows], "F", l))

    return TruncatedPolys(M, TruncatedPoly(e0, "E0"), TruncatedPoly(e1neg.coeffs, "E1neg"), fl,
                          triples.side, triples.a0)

def constant_closed_forms(a, kappa, h, l_max=0):

    """
    E_0, E_1 and F_0..F_{l_max} in closed form for constant a and kappa, with h~ = h kappa / sqrt(a):

        E_0 = cos h~,  E_1 = sin h~ / h~,  F_l = (1/a) sum_n (-1)^n h~^{2n} / (2n + l + 2)!

    The series is summed directly for |h~| <= 4, otherwise the cosine/sine remainder forms are used.

    ...

    Returns
    __________
    tuple
        (E_0, E_1, F) with F of shape (l_max + 1, *shape).
    """

    a = np.asarray(a)
    if np.any(a == 0):
        raise SingularCoefficient("a = 0 in constant closed forms")
    t = np.asarray(h * np.asarray(kappa) / np.emath.sqrt(a))
    e0 = np.cos(t)
    e1 = np.sinc(t / np.pi)

    small = np.abs(t) <= SERIES_RADIUS
    t_big = np.where(small, 1.0, t)
    t2 = t * t

    F = []
    for l in range(l_max + 1):
        term = np.full(t.shape, 1.0 / factorials(l + 3)[-1], dtype=np.result_type(t, float))
        series = term.copy()
        for n in range(SERIES_TERMS - 1):
            term = -term * t2 / ((2 * n + l + 3) * (2 * n + l + 4))
            series = series + term

        p = l // 2
        if l % 2 == 0:
            m = np.arange(p + 1)
            head = sum(((-1.0) ** k) * t_big ** (2 * k) / factorials(2 * k + 1)[-1] for k in m)
            remainder = (-1.0) ** (p + 1) * (np.cos(t_big) - head) / t_big ** (2 * p + 2)
        else:
            m = np.arange(p + 1)
            head = sum(((-1.0) ** k) * t_big ** (2 * k + 1) / factorials(2 * k + 2)[-1] for k in m)
            remainder = (-1.0) ** (p + 1) * (np.sin(t_big) - head) / t_big ** (2 * p + 3)

        F.append(np.where(small, series, remainder) / a)

    return e0, e1, np.stack(np.broadcast_arrays(*F))
