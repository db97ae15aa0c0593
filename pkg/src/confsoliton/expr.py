"""Expression language for immersion components.

Grammar (lowest to highest precedence)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?          # right-associative
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

Names resolve to chart variables, then to named constants, then (when
followed by a parenthesis) to the built-in functions.
"""

import math
import re
from dataclasses import dataclass

from .errors import DomainError, ExprSyntaxError, UnknownIdentifier

FUNCTIONS = ("sqrt", "exp", "log", "sin", "cos", "tan", "sinh", "cosh", "tanh")
BUILTIN_CONSTANTS = {"pi": math.pi, "e": math.e}


class Expr:
    """Base class of the immutable AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 1-based


@dataclass(frozen=True)
class Const(Expr):
    name: str
    value: float


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


@dataclass(frozen=True)
class Bin(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(src):
    # (kind, text, 1-based offset)
    pos = 0
    out = []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(pos + 1, {"number", "identifier", "operator"}, src)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos + 1))
        pos = m.end()
    out.append(("end", "", len(src) + 1))
    return out


_ATOM_START = {"number", "identifier", "(", "-"}


class _Parser:
    def __init__(self, src, variables, constants):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.variables = {name: k + 1 for k, name in enumerate(variables)}
        self.constants = constants

    def peek(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        raise ExprSyntaxError(self.peek()[2], expected, self.src)

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail({"end of input", "+", "-", "*", "/", "^"})
        return e

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            left = Bin(op, left, self.term())
        return left

    def term(self):
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            left = Bin(op, left, self.unary())
        return left

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            return Bin("^", base, self.unary())
        return base

    def atom(self):
        kind, text, offset = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "name":
            self.advance()
            if self.peek()[:2] == ("op", "("):
                if text not in FUNCTIONS:
                    raise UnknownIdentifier(text, offset)
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text in self.variables:
                return Var(self.variables[text])
            if text in self.constants:
                return Const(text, float(self.constants[text]))
            if text in FUNCTIONS:
                self.fail({"("})
            raise UnknownIdentifier(text, offset)
        if (kind, text) == ("op", "("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        self.fail(_ATOM_START)

    def expect(self, text):
        if self.peek()[:2] != ("op", text):
            self.fail({text, "+", "-", "*", "/", "^"})
        self.advance()


def default_variables(n):
    return tuple(f"u{k}" for k in range(1, n + 1))


def parse(src, variables=None, constants=None):
    """Parse ``src`` into an :class:`Expr`.

    ``variables`` lists the chart variable names in order (default
    ``u1..u9``); ``constants`` maps extra names to values and shadows the
    built-in ``pi`` and ``e``.
    """
    if variables is None:
        variables = default_variables(9)
    consts = dict(BUILTIN_CONSTANTS)
    if constants:
        consts.update(constants)
    return _Parser(src, tuple(variables), consts).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _fmt_num(x):
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def to_string(e, variables=None):
    """Print ``e`` with the minimal parentheses needed to re-parse it."""
    if variables is None:
        variables = default_variables(max(9, _max_var(e)))
    return _print(e, tuple(variables))[0]


def _max_var(e):
    if isinstance(e, Var):
        return e.index
    if isinstance(e, (Neg, Call)):
        return _max_var(e.arg)
    if isinstance(e, Bin):
        return max(_max_var(e.left), _max_var(e.right))
    return 0


def _print(e, names):
    if isinstance(e, Num):
        s = _fmt_num(e.value)
        return (f"({s})" if e.value < 0 else s), _PREC["atom"]
    if isinstance(e, Var):
        return names[e.index - 1], _PREC["atom"]
    if isinstance(e, Const):
        return e.name, _PREC["atom"]
    if isinstance(e, Call):
        return f"{e.func}({_print(e.arg, names)[0]})", _PREC["atom"]
    if isinstance(e, Neg):
        s, p = _print(e.arg, names)
        # -x^2 parses as -(x^2); a Neg operand needs no parentheses either
        return "-" + (s if p >= _PREC["neg"] else f"({s})"), _PREC["neg"]
    if isinstance(e, Bin):
        p = _PREC[e.op]
        ls, lp = _print(e.left, names)
        rs, rp = _print(e.right, names)
        if e.op == "^":
            # left operand must be an atom; right may be a unary chain
            if lp <= p:
                ls = f"({ls})"
            if rp < _PREC["neg"]:
                rs = f"({rs})"
            return f"{ls}^{rs}", p
        if lp < p:
            ls = f"({ls})"
        # left-associative: equal precedence on the right needs parentheses
        if rp <= p:
            rs = f"({rs})"
        return f"{ls} {e.op} {rs}", p
    raise TypeError(f"not an expression node: {e!r}")


def substitute(e, mapping):
    """Replace ``Var(k)`` by ``mapping[k]`` wherever ``k`` is a key."""
    if isinstance(e, Var):
        return mapping.get(e.index, e)
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping))
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, mapping))
    if isinstance(e, Bin):
        return Bin(e.op, substitute(e.left, mapping), substitute(e.right, mapping))
    return e


def evaluate(e, point):
    """Plain float evaluation (no derivatives)."""
    return _eval_float(e, point)


def _eval_float(e, point):
    if isinstance(e, Num) or isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(point[e.index - 1])
    if isinstance(e, Neg):
        return -_eval_float(e.arg, point)
    if isinstance(e, Call):
        x = _eval_float(e.arg, point)
        if e.func == "sqrt" and x < 0 or e.func == "log" and x <= 0:
            raise DomainError(f"{e.func} of {x!r}")
        try:
            return getattr(math, e.func)(x)
        except (ValueError, OverflowError) as exc:
            raise DomainError(f"{e.func}({x!r}): {exc}") from None
    a = _eval_float(e.left, point)
    b = _eval_float(e.right, point)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "/":
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b
    if b.is_integer():
        if a == 0.0 and b < 0:
            raise DomainError("0 raised to a negative power")
        return a ** int(b)
    if a <= 0.0:
        raise DomainError(f"non-integer power of non-positive base {a!r}")
    return a ** b
