"""Independent oracles shared by the test modules.

Nothing here imports the geometry code: expressions are re-evaluated in
50-digit arithmetic and differentiated by finite differences.
"""

import itertools
import random

import mpmath
import numpy as np

from confsoliton.errors import DomainError
from confsoliton.expr import FUNCTIONS, Bin, Call, Const, Neg, Num, Var
from confsoliton.jet import eval_jet3

mpmath.mp.dps = 50

_MP = {"sqrt": mpmath.sqrt, "exp": mpmath.exp, "log": mpmath.log, "sin": mpmath.sin,
       "cos": mpmath.cos, "tan": mpmath.tan, "sinh": mpmath.sinh, "cosh": mpmath.cosh,
       "tanh": mpmath.tanh}


def mp_eval(e, x):
    if isinstance(e, (Num, Const)):
        return mpmath.mpf(e.value)
    if isinstance(e, Var):
        return x[e.index - 1]
    if isinstance(e, Neg):
        return -mp_eval(e.arg, x)
    if isinstance(e, Call):
        return _MP[e.func](mp_eval(e.arg, x))
    a, b = mp_eval(e.left, x), mp_eval(e.right, x)
    return {"+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b,
            "/": lambda: a / b, "^": lambda: a ** b}[e.op]()


def central(f, x, idx, h):
    if not idx:
        return f(x)
    i, rest = idx[0], idx[1:]
    xp, xm = list(x), list(x)
    xp[i] += h
    xm[i] -= h
    return (central(f, xp, rest, h) - central(f, xm, rest, h)) / (2 * h)


def richardson(f, x, idx, h=mpmath.mpf("1e-8")):
    d1 = central(f, x, idx, h)
    d2 = central(f, x, idx, h / 2)
    return (4 * d2 - d1) / 3


def _random_expr(rng, depth, n):
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.6:
            return Var(rng.randint(1, n))
        return Num(rng.choice([0.5, 1.0, 2.0, 3.0, 1.5]))
    r = rng.random()
    if r < 0.1:
        return Neg(_random_expr(rng, depth - 1, n))
    if r < 0.4:
        return Call(rng.choice(FUNCTIONS), _random_expr(rng, depth - 1, n))
    op = rng.choice("+-*/")
    if rng.random() < 0.15:
        return Bin("^", _random_expr(rng, depth - 1, n), Num(rng.choice([2.0, 3.0, 0.5, 1.5, -1.0])))
    return Bin(op, _random_expr(rng, depth - 1, n), _random_expr(rng, depth - 1, n))


def random_jet_sample(count=50, seed=7):
    """``count`` random (expression, point, jet) triples away from poles."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, 3)
        e = _random_expr(rng, rng.randint(2, 4), n)
        p = [rng.uniform(0.3, 1.3) for _ in range(n)]
        try:
            j = eval_jet3(e, p)
            ref = mp_eval(e, [mpmath.mpf(v) for v in p])
        except (DomainError, ZeroDivisionError, ValueError, OverflowError):
            continue
        coeffs = np.concatenate([[j.v], j.d1, j.d2.ravel(), j.d3.ravel()])
        # stay clear of poles and of complex branches
        if not np.all(np.isfinite(coeffs)) or np.max(np.abs(coeffs)) > 1e6:
            continue
        if isinstance(ref, mpmath.mpc):
            continue
        out.append((e, p, j))
    return out


def jet_errors(e, p, j):
    """Max relative error of the jet per order against the finite-difference oracle."""
    n = len(p)
    x = [mpmath.mpf(v) for v in p]
    f = lambda y: mp_eval(e, y)  # noqa: E731
    errs = {}
    for order, block in ((1, j.d1), (2, j.d2), (3, j.d3)):
        fd = np.zeros_like(block)
        for idx in itertools.product(range(n), repeat=order):
            if list(idx) != sorted(idx):
                continue
            val = float(richardson(f, x, list(idx)))
            for perm in set(itertools.permutations(idx)):
                fd[perm] = val
        scale = max(1.0, float(np.max(np.abs(fd))))
        errs[order] = float(np.max(np.abs(block - fd))) / scale
    return errs


JET_TOLERANCES = {1: 1e-6, 2: 1e-5, 3: 1e-3}


def sympy_half_lie(components, signs, point, variables=None):
    """Half Lie derivative of the induced metric along ``V^T``, symbolically.

    Built straight from the coordinate formula with sympy, then evaluated
    at ``point``. Returns ``(half_lie, g)`` as float arrays.
    """
    import sympy as sp

    n = len(components) - 1
    names = variables or [f"u{k}" for k in range(1, n + 1)]
    u = sp.symbols(names)
    x = sp.Matrix([sp.sympify(c.replace("^", "**"), locals=dict(zip(names, u)))
                   for c in components])
    S = sp.diag(*signs)
    J = x.jacobian(u)  # (n+1) x n
    g = J.T * S * J
    c = J.T * S * x
    t = g.inv() * c
    L = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            L[i, j] = sum(t[k] * sp.diff(g[i, j], u[k]) + g[k, j] * sp.diff(t[k], u[i])
                          + g[i, k] * sp.diff(t[k], u[j]) for k in range(n)) / 2
    at = dict(zip(u, point))
    return (np.array(L.subs(at).evalf(30), dtype=float),
            np.array(g.subs(at).evalf(30), dtype=float))


def conformal_residual(half_lie, g):
    """Metric-trace conformal factor and the normalised residual."""
    n = g.shape[0]
    phi = float(np.trace(np.linalg.solve(g, half_lie))) / n
    return phi, float(np.max(np.abs(half_lie - phi * g)) / np.max(np.abs(g)))
