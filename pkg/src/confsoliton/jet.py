"""Third-order forward-mode jets in n variables.

A :class:`Jet3` carries a value and all partial derivatives up to order 3
(unnormalized: ``d2[i, j] = d_i d_j f``). Arithmetic is exact truncated
Taylor arithmetic, so derivatives are correct to rounding.
"""

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .expr import Bin, Call, Const, Neg, Num, Var


@lru_cache(maxsize=None)
def _canon2(n):
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return np.minimum(i, j), np.maximum(i, j)


@lru_cache(maxsize=None)
def _canon3(n):
    idx = np.indices((n, n, n)).reshape(3, -1)
    s = np.sort(idx, axis=0)
    return tuple(a.reshape(n, n, n) for a in s)


def _sym3(a, B):
    """``a_i B_jk + a_j B_ik + a_k B_ij``."""
    t = np.einsum("i,jk->ijk", a, B)
    return t + t.transpose(1, 0, 2) + t.transpose(1, 2, 0)


class Jet3:
    """Value with partial derivatives through order 3.

    ``d2`` and ``d3`` are stored densely but canonicalised on construction:
    every entry is copied from its sorted multi-index, so the arrays are
    exactly symmetric.
    """

    __slots__ = ("v", "d1", "d2", "d3")

    def __init__(self, v, d1, d2, d3):
        n = d1.shape[0]
        self.v = float(v)
        self.d1 = d1
        self.d2 = d2[_canon2(n)] if n else d2
        self.d3 = d3[_canon3(n)] if n else d3

    @property
    def n(self):
        return self.d1.shape[0]

    @classmethod
    def constant(cls, value, n):
        return cls(value, np.zeros(n), np.zeros((n, n)), np.zeros((n, n, n)))

    @classmethod
    def variable(cls, value, k, n):
        d1 = np.zeros(n)
        d1[k] = 1.0
        return cls(value, d1, np.zeros((n, n)), np.zeros((n, n, n)))

    def __repr__(self):
        return f"Jet3(v={self.v!r}, d1={self.d1.tolist()!r})"

    def _lift(self, other):
        if isinstance(other, Jet3):
            return other
        return Jet3.constant(other, self.n)

    def __add__(self, other):
        o = self._lift(other)
        return Jet3(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.v, -self.d1, -self.d2, -self.d3)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet3):
            c = float(other)
            return Jet3(c * self.v, c * self.d1, c * self.d2, c * self.d3)
        a, b = self, other
        d2 = a.d2 * b.v + np.outer(a.d1, b.d1) + np.outer(b.d1, a.d1) + a.v * b.d2
        d3 = a.d3 * b.v + _sym3(b.d1, a.d2) + _sym3(a.d1, b.d2) + a.v * b.d3
        return Jet3(a.v * b.v, a.d1 * b.v + a.v * b.d1, d2, d3)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet3):
            if other == 0:
                raise DomainError("division by zero")
            return self * (1.0 / other)
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, other):
        return power(self, other)

    def compose(self, f0, f1, f2, f3):
        """Apply a univariate function given its derivatives at ``self.v``."""
        a1, a2 = self.d1, self.d2
        d2 = f1 * a2 + f2 * np.outer(a1, a1)
        d3 = f1 * self.d3 + f2 * _sym3(a1, a2) + f3 * np.einsum("i,j,k->ijk", a1, a1, a1)
        return Jet3(f0, f1 * a1, d2, d3)


def reciprocal(a):
    x = a.v
    if x == 0.0:
        raise DomainError("division by zero")
    r = 1.0 / x
    return a.compose(r, -r * r, 2 * r ** 3, -6 * r ** 4)


def sqrt(a):
    x = a.v
    if x <= 0.0:
        # derivative is unbounded at 0
        raise DomainError(f"sqrt of {x!r}")
    s = math.sqrt(x)
    return a.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x))


def exp(a):
    try:
        e = math.exp(a.v)
    except OverflowError:
        raise DomainError(f"exp overflow at {a.v!r}") from None
    return a.compose(e, e, e, e)


def log(a):
    x = a.v
    if x <= 0.0:
        raise DomainError(f"log of {x!r}")
    r = 1.0 / x
    return a.compose(math.log(x), r, -r * r, 2 * r ** 3)


def sin(a):
    s, c = math.sin(a.v), math.cos(a.v)
    return a.compose(s, c, -s, -c)


def cos(a):
    s, c = math.sin(a.v), math.cos(a.v)
    return a.compose(c, -s, -c, s)


def tan(a):
    if math.cos(a.v) == 0.0:
        raise DomainError(f"tan pole at {a.v!r}")
    t = math.tan(a.v)
    p = 1.0 + t * t
    return a.compose(t, p, 2 * t * p, 2 * p * (1 + 3 * t * t))


def sinh(a):
    s, c = math.sinh(a.v), math.cosh(a.v)
    return a.compose(s, c, s, c)


def cosh(a):
    s, c = math.sinh(a.v), math.cosh(a.v)
    return a.compose(c, s, c, s)


def tanh(a):
    t = math.tanh(a.v)
    q = 1.0 - t * t
    return a.compose(t, q, -2 * t * q, -2 * q * (1 - 3 * t * t))


def _int_power(a, k):
    if k == 0:
        return Jet3.constant(1.0, a.n)
    if k < 0:
        return reciprocal(_int_power(a, -k))
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return result


def power(a, b):
    """``a ^ b``; integer constant exponents use repeated multiplication."""
    if not isinstance(b, Jet3):
        b = Jet3.constant(b, a.n)
    is_const = not (b.d1.any() or b.d2.any() or b.d3.any())
    if is_const and float(b.v).is_integer():
        if a.v == 0.0 and b.v < 0:
            raise DomainError("0 raised to a negative power")
        return _int_power(a, int(b.v))
    if a.v <= 0.0:
        raise DomainError(f"non-integer power of non-positive base {a.v!r}")
    return exp(b * log(a))


_FUNCS = {
    "sqrt": sqrt, "exp": exp, "log": log, "sin": sin, "cos": cos,
    "tan": tan, "sinh": sinh, "cosh": cosh, "tanh": tanh,
}


def eval_jet3(e, point):
    """Evaluate expression ``e`` at ``point`` as a :class:`Jet3`."""
    point = np.asarray(point, dtype=float).ravel()
    n = point.shape[0]
    cache = {}

    def go(node):
        hit = cache.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, (Num, Const)):
            out = Jet3.constant(node.value, n)
        elif isinstance(node, Var):
            if node.index > n:
                raise DomainError(f"variable u{node.index} used in a {n}-dimensional chart")
            out = Jet3.variable(point[node.index - 1], node.index - 1, n)
        elif isinstance(node, Neg):
            out = -go(node.arg)
        elif isinstance(node, Call):
            out = _FUNCS[node.func](go(node.arg))
        elif isinstance(node, Bin):
            a, b = go(node.left), go(node.right)
            if node.op == "+":
                out = a + b
            elif node.op == "-":
                out = a - b
            elif node.op == "*":
                out = a * b
            elif node.op == "/":
                out = a / b
            else:
                out = power(a, b)
        else:
            raise TypeError(f"not an expression node: {node!r}")
        cache[id(node)] = out
        return out

    return go(e)
