"""Closed-form functions of one real variable.

Text is parsed into an immutable expression tree which can be printed,
evaluated (scalar or vectorised over numpy arrays) and differentiated
symbolically to any order.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | 'x' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := sin | cos | exp | log | sqrt | abs

``^`` is right associative and binds tighter than unary minus, so
``-x^2`` is ``-(x^2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Interval",
    "ExprError",
    "ParseError",
    "UnknownIdentifierError",
    "DomainError",
    "DifferentiationError",
    "ExprTooLargeError",
    "MAX_NODES",
    "parse",
    "evaluate",
    "differentiate",
    "simplify",
    "substitute",
    "to_text",
    "const",
    "X",
]

MAX_NODES = 20_000

UNARY_OPS = ("neg", "sin", "cos", "exp", "log", "sqrt", "abs")
BINARY_OPS = ("add", "sub", "mul", "div", "pow")
FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "abs")


class ExprError(Exception):
    """Base class for expression errors."""


class ParseError(ExprError, ValueError):
    """Syntax error; ``offset`` is the byte offset into the source text."""

    def __init__(self, message, offset, text=""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownIdentifierError(ParseError):
    def __init__(self, name, offset, text=""):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset, text)


class DomainError(ExprError, ArithmeticError):
    """Evaluation left the domain of definition of a sub-expression."""

    def __init__(self, message, node=None, x=None):
        self.node = node
        self.x = x
        where = f" in {to_text(node)}" if node is not None else ""
        at = f" at x={x!r}" if x is not None else ""
        super().__init__(f"{message}{where}{at}")


class DifferentiationError(ExprError):
    """The expression contains a node that has no symbolic derivative."""


class ExprTooLargeError(ExprError):
    """Simplified expression exceeds :data:`MAX_NODES`."""


# --------------------------------------------------------------------------
# Nodes
# --------------------------------------------------------------------------


class Expr:
    """Immutable expression node.

    Structural equality and hashing; the hash and the subtree size are
    computed once at construction.
    """

    __slots__ = ("_hash", "size")

    def __setattr__(self, name, value):
        raise AttributeError("Expr nodes are immutable")

    def _init(self, key, size):
        object.__setattr__(self, "_hash", hash(key))
        object.__setattr__(self, "size", size)

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (self.__class__, self._args())

    def __repr__(self):
        return f"{type(self).__name__}({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    def __call__(self, x):
        """Evaluate at ``x`` (a float or a numpy array)."""
        if np.ndim(x) == 0:
            return evaluate(self, float(x))
        return evaluate_array(self, x)

    # arithmetic sugar, always through the simplifying constructors
    def __add__(self, other):
        return add(self, _wrap(other))

    def __radd__(self, other):
        return add(_wrap(other), self)

    def __sub__(self, other):
        return sub(self, _wrap(other))

    def __rsub__(self, other):
        return sub(_wrap(other), self)

    def __mul__(self, other):
        return mul(self, _wrap(other))

    def __rmul__(self, other):
        return mul(_wrap(other), self)

    def __truediv__(self, other):
        return div(self, _wrap(other))

    def __rtruediv__(self, other):
        return div(_wrap(other), self)

    def __pow__(self, other):
        return power(self, _wrap(other))

    def __neg__(self):
        return neg(self)


class Const(Expr):
    __hash__ = Expr.__hash__
    __slots__ = ("value",)

    def __init__(self, value):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite constant {value!r}")
        if value == 0.0:
            value = 0.0  # drop the sign of -0.0
        object.__setattr__(self, "value", value)
        self._init(("const", value), 1)

    def _args(self):
        return (self.value,)

    def __eq__(self, other):
        return isinstance(other, Const) and other.value == self.value


class Var(Expr):
    __hash__ = Expr.__hash__
    __slots__ = ()

    def __init__(self):
        self._init(("var",), 1)

    def _args(self):
        return ()

    def __eq__(self, other):
        return isinstance(other, Var)


class Unary(Expr):
    __hash__ = Expr.__hash__
    __slots__ = ("op", "arg")

    def __init__(self, op, arg):
        if op not in UNARY_OPS:
            raise ValueError(f"unknown unary op {op!r}")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "arg", arg)
        self._init((op, arg._hash), 1 + arg.size)

    def _args(self):
        return (self.op, self.arg)

    def __eq__(self, other):
        return (
            self is other
            or isinstance(other, Unary)
            and self._hash == other._hash
            and self.op == other.op
            and self.arg == other.arg
        )


class Binary(Expr):
    __hash__ = Expr.__hash__
    __slots__ = ("op", "left", "right")

    def __init__(self, op, left, right):
        if op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {op!r}")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._init((op, left._hash, right._hash), 1 + left.size + right.size)

    def _args(self):
        return (self.op, self.left, self.right)

    def __eq__(self, other):
        return (
            self is other
            or isinstance(other, Binary)
            and self._hash == other._hash
            and self.op == other.op
            and self.left == other.left
            and self.right == other.right
        )


X = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


def const(value):
    return Const(value)


def _wrap(value):
    if isinstance(value, Expr):
        return value
    return Const(value)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[a, b]`` with ``a < b``."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("interval endpoints must be finite")
        if not a < b:
            raise ValueError(f"interval needs a < b, got [{a!r}, {b!r}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self):
        return self.b - self.a

    @property
    def midpoint(self):
        return 0.5 * (self.a + self.b)

    def __iter__(self):
        return iter((self.a, self.b))


# --------------------------------------------------------------------------
# Simplifying constructors
# --------------------------------------------------------------------------


def _is_const(e, value=None):
    return isinstance(e, Const) and (value is None or e.value == value)


def _fold(fn, *args):
    """Fold constants, or return None when the result is undefined."""
    try:
        with np.errstate(all="raise"):
            value = fn(*args)
    except (ArithmeticError, ValueError, FloatingPointError):
        return None
    if isinstance(value, complex) or not math.isfinite(value):
        return None
    return Const(value)


def neg(u):
    if isinstance(u, Const):
        return Const(-u.value)
    if isinstance(u, Unary) and u.op == "neg":
        return u.arg
    return Unary("neg", u)


def add(u, v):
    if isinstance(u, Const) and isinstance(v, Const):
        return _fold(lambda p, q: p + q, u.value, v.value) or Binary("add", u, v)
    if _is_const(u, 0.0):
        return v
    if _is_const(v, 0.0):
        return u
    if isinstance(v, Unary) and v.op == "neg":
        return sub(u, v.arg)
    return Binary("add", u, v)


def sub(u, v):
    if isinstance(u, Const) and isinstance(v, Const):
        return _fold(lambda p, q: p - q, u.value, v.value) or Binary("sub", u, v)
    if _is_const(v, 0.0):
        return u
    if _is_const(u, 0.0):
        return neg(v)
    if isinstance(v, Unary) and v.op == "neg":
        return add(u, v.arg)
    return Binary("sub", u, v)


def mul(u, v):
    if isinstance(u, Const) and isinstance(v, Const):
        return _fold(lambda p, q: p * q, u.value, v.value) or Binary("mul", u, v)
    if isinstance(v, Const) and not isinstance(u, Const):
        u, v = v, u
    if isinstance(u, Const):
        if u.value == 0.0:
            return ZERO
        if u.value == 1.0:
            return v
        if u.value == -1.0:
            return neg(v)
        # collect constant factors: c1 * (c2 * w) -> (c1 c2) * w
        if isinstance(v, Binary) and v.op == "mul" and isinstance(v.left, Const):
            folded = _fold(lambda p, q: p * q, u.value, v.left.value)
            if folded is not None:
                return mul(folded, v.right)
        if isinstance(v, Unary) and v.op == "neg":
            return mul(Const(-u.value), v.arg)
    if isinstance(u, Unary) and u.op == "neg":
        return neg(mul(u.arg, v))
    if isinstance(v, Unary) and v.op == "neg":
        return neg(mul(u, v.arg))
    return Binary("mul", u, v)


def div(u, v):
    if isinstance(u, Const) and isinstance(v, Const):
        if v.value != 0.0:
            folded = _fold(lambda p, q: p / q, u.value, v.value)
            if folded is not None:
                return folded
        return Binary("div", u, v)
    if _is_const(v, 1.0):
        return u
    if _is_const(v, -1.0):
        return neg(u)
    if _is_const(u, 0.0):
        return ZERO
    return Binary("div", u, v)


def _pow_value(base, exponent):
    if base < 0.0 and not float(exponent).is_integer():
        raise ValueError("negative base with non-integer exponent")
    if base == 0.0 and exponent < 0.0:
        raise ZeroDivisionError("zero to a negative power")
    return math.pow(base, exponent)


def power(u, v):
    if isinstance(u, Const) and isinstance(v, Const):
        return _fold(_pow_value, u.value, v.value) or Binary("pow", u, v)
    if _is_const(v, 0.0):
        return ONE
    if _is_const(v, 1.0):
        return u
    # (w^p)^q -> w^(p q) only for integer exponents, where it is an identity
    if (
        isinstance(v, Const)
        and v.value.is_integer()
        and isinstance(u, Binary)
        and u.op == "pow"
        and isinstance(u.right, Const)
        and u.right.value.is_integer()
    ):
        return power(u.left, Const(u.right.value * v.value))
    return Binary("pow", u, v)


_UNARY_FOLD = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}


def unary(op, u):
    if op == "neg":
        return neg(u)
    if isinstance(u, Const):
        folded = _fold(_UNARY_FOLD[op], u.value)
        if folded is not None:
            return folded
    return Unary(op, u)


def binary(op, u, v):
    return _BINARY_CTOR[op](u, v)


_BINARY_CTOR = {"add": add, "sub": sub, "mul": mul, "div": div, "pow": power}


def simplify(e):
    """Rebuild ``e`` bottom-up through the simplifying constructors."""
    return _simplify(e)


@lru_cache(maxsize=8192)
def _simplify(e):
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Unary):
        return unary(e.op, _simplify(e.arg))
    return binary(e.op, _simplify(e.left), _simplify(e.right))


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)

_NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos), text)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group(kind)
            if kind == "op" and value == "**":
                value = "^"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, pos):
        return ParseError(message, _byte_offset(self.text, pos), self.text)

    def expect(self, value):
        kind, tok, pos = self.advance()
        if tok != value or kind != "op":
            found = repr(tok) if kind != "end" else "end of input"
            raise self.error(f"expected {value!r}, found {found}", pos)

    def parse(self):
        node = self.expr()
        kind, tok, pos = self.peek()
        if kind != "end":
            raise self.error(f"unexpected token {tok!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            rhs = self.term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            rhs = self.unary()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def unary(self):
        kind, tok, _ = self.peek()
        if kind == "op" and tok in ("-", "+"):
            self.advance()
            operand = self.unary()
            return neg(operand) if tok == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        kind, tok, _ = self.peek()
        if kind == "op" and tok == "^":
            self.advance()
            return power(base, self.unary())
        return base

    def atom(self):
        kind, tok, pos = self.advance()
        if kind == "num":
            return Const(float(tok))
        if kind == "name":
            if tok == "x":
                return X
            if tok in _NAMED_CONSTANTS:
                return Const(_NAMED_CONSTANTS[tok])
            if tok in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return unary(tok, arg)
            raise UnknownIdentifierError(tok, _byte_offset(self.text, pos), self.text)
        if kind == "op" and tok == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise self.error("unexpected end of input", pos)
        raise self.error(f"unexpected token {tok!r}", pos)


def parse(text):
    """Parse function text into an :class:`Expr`.

    Constants are folded during parsing, so ``"x^(1/2)"`` carries the
    exponent ``0.5`` as a single constant node.

    Raises
    ------
    ParseError
        On any syntax error; ``offset`` is the byte offset of the culprit.
    UnknownIdentifierError
        On a name that is neither ``x``, a constant nor a function.
    """
    if not isinstance(text, str):
        raise TypeError("parse expects a string")
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# Printer
# --------------------------------------------------------------------------

_SYMBOLS = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def _format_const(value):
    if value.is_integer() and abs(value) < 2.0**53:
        text = str(int(value))
    else:
        text = repr(value)
    return f"({text})" if value < 0 else text


def to_text(e):
    """Canonical fully parenthesised text; ``parse(to_text(e))`` is exact."""
    if isinstance(e, Const):
        return _format_const(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{to_text(e.arg)})"
        return f"{e.op}({to_text(e.arg)})"
    return f"({to_text(e.left)} {_SYMBOLS[e.op]} {to_text(e.right)})"


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def _eval_checked(e, x):
    """Reference evaluator; raises DomainError naming the bad sub-expression."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Unary):
        u = _eval_checked(e.arg, x)
        op = e.op
        if op == "neg":
            r = -u
        elif op == "log":
            if u <= 0.0:
                raise DomainError("log of non-positive value", e, x)
            r = math.log(u)
        elif op == "sqrt":
            if u < 0.0:
                raise DomainError("sqrt of negative value", e, x)
            r = math.sqrt(u)
        elif op == "exp":
            if u > 709.78:
                raise DomainError("exp overflow", e, x)
            r = math.exp(u)
        else:
            r = _UNARY_FOLD[op](u)
    else:
        u = _eval_checked(e.left, x)
        v = _eval_checked(e.right, x)
        op = e.op
        if op == "add":
            r = u + v
        elif op == "sub":
            r = u - v
        elif op == "mul":
            r = u * v
        elif op == "div":
            if v == 0.0:
                raise DomainError("division by zero", e, x)
            r = u / v
        else:
            try:
                r = _pow_value(u, v)
            except (ValueError, ZeroDivisionError) as exc:
                raise DomainError(str(exc), e, x) from None
            except OverflowError:
                raise DomainError("pow overflow", e, x) from None
    if not math.isfinite(r):
        raise DomainError("non-finite value", e, x)
    return r


def _emit(e, lib):
    """Straight-line Python source for ``e`` with common subexpressions shared."""
    names = {}
    lines = []

    def visit(node):
        if isinstance(node, Const):
            return repr(node.value) if node.value >= 0 else f"({node.value!r})"
        if isinstance(node, Var):
            return "x"
        got = names.get(node)
        if got is not None:
            return got
        if isinstance(node, Unary):
            a = visit(node.arg)
            if node.op == "neg":
                src = f"-{a}"
            elif node.op == "abs":
                src = f"{lib}abs({a})" if lib == "np." else f"abs({a})"
            else:
                src = f"{lib}{node.op}({a})"
        else:
            a = visit(node.left)
            b = visit(node.right)
            if node.op == "pow":
                rv = node.right
                if isinstance(rv, Const) and rv.value.is_integer() and abs(rv.value) <= 64:
                    src = f"{a} ** {int(rv.value)}"
                elif lib == "np.":
                    src = f"np.power({a}, {b})"
                else:
                    src = f"math.pow({a}, {b})"
            else:
                src = f"{a} {_SYMBOLS[node.op]} {b}"
        name = f"t{len(lines)}"
        lines.append(f"    {name} = {src}")
        names[node] = name
        return name

    result = visit(e)
    body = "\n".join(lines)
    return f"def _fn(x):\n{body}\n    return {result}\n" if body else f"def _fn(x):\n    return {result}\n"


@lru_cache(maxsize=4096)
def _compiled(e, vectorised):
    lib = "np." if vectorised else "math."
    namespace = {"np": np, "math": math}
    exec(compile(_emit(e, lib), "<expr>", "exec"), namespace)  # noqa: S102
    return namespace["_fn"]


def evaluate(f, x):
    """Evaluate ``f`` at the real point ``x``.

    Raises
    ------
    DomainError
        If any sub-expression is undefined or non-finite at ``x``; the
        message names the offending sub-expression.
    """
    x = float(x)
    try:
        r = _compiled(f, False)(x)
    except (ValueError, ZeroDivisionError, OverflowError, TypeError):
        r = math.nan
    if isinstance(r, float) and math.isfinite(r):
        return r
    if isinstance(r, int):
        return float(r)
    # slow path gives the precise diagnosis
    return _eval_checked(f, x)


def evaluate_array(f, xs):
    """Vectorised evaluation over a 1-d array; same error contract as :func:`evaluate`."""
    xs = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        ys = _compiled(f, True)(xs)
    ys = np.broadcast_to(np.asarray(ys, dtype=float), xs.shape)
    if not np.all(np.isfinite(ys)):
        bad = np.flatnonzero(~np.isfinite(ys.ravel()))[0]
        x_bad = float(xs.ravel()[bad])
        _eval_checked(f, x_bad)
        raise DomainError("non-finite value", f, x_bad)
    return np.array(ys, dtype=float)


def scalar_function(f):
    """Fast ``float -> float`` callable for ``f`` (no domain diagnosis)."""
    fn = _compiled(f, False)
    return lambda x: float(fn(float(x)))


def vector_function(f):
    """Fast vectorised callable for ``f``; errors as :func:`evaluate_array`."""
    return lambda xs: evaluate_array(f, xs)


# --------------------------------------------------------------------------
# Differentiation
# --------------------------------------------------------------------------


def contains(e, op):
    if isinstance(e, Unary):
        return e.op == op or contains(e.arg, op)
    if isinstance(e, Binary):
        return contains(e.left, op) or contains(e.right, op)
    return False


@lru_cache(maxsize=8192)
def _d(e):
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Unary):
        u = e.arg
        du = _d(u)
        op = e.op
        if op == "neg":
            return neg(du)
        if op == "sin":
            return mul(unary("cos", u), du)
        if op == "cos":
            return neg(mul(unary("sin", u), du))
        if op == "exp":
            return mul(e, du)
        if op == "log":
            return div(du, u)
        if op == "sqrt":
            return div(du, mul(Const(2.0), e))
        raise DifferentiationError("abs has no symbolic derivative; use the sup-norm finder instead")
    u, v = e.left, e.right
    op = e.op
    if op == "add":
        return add(_d(u), _d(v))
    if op == "sub":
        return sub(_d(u), _d(v))
    if op == "mul":
        return add(mul(_d(u), v), mul(u, _d(v)))
    if op == "div":
        return div(sub(mul(_d(u), v), mul(u, _d(v))), power(v, Const(2.0)))
    # pow
    if isinstance(v, Const) and v.value.is_integer():
        n = v.value
        return mul(mul(Const(n), power(u, Const(n - 1.0))), _d(u))
    # u^v = exp(v log u)
    return _d(unary("exp", mul(v, unary("log", u))))


def differentiate(f, order=1):
    """Exact symbolic derivative of the given order, simplified.

    Raises
    ------
    DifferentiationError
        If ``f`` contains ``abs``.
    ExprTooLargeError
        If a simplified derivative exceeds :data:`MAX_NODES` nodes.
    """
    if not isinstance(order, (int, np.integer)) or isinstance(order, bool) or order < 1:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    if contains(f, "abs"):
        raise DifferentiationError("abs has no symbolic derivative; use the sup-norm finder instead")
    g = f
    for _ in range(int(order)):
        g = _derivative_once(g)
    return g


@lru_cache(maxsize=4096)
def _derivative_once(f):
    g = simplify(_d(f))
    if g.size > MAX_NODES:
        raise ExprTooLargeError(f"derivative has {g.size} nodes, cap is {MAX_NODES}")
    return g


def substitute(f, inner):
    """Composition ``f(inner(x))``."""

    @lru_cache(maxsize=None)
    def walk(e):
        if isinstance(e, Const):
            return e
        if isinstance(e, Var):
            return inner
        if isinstance(e, Unary):
            return unary(e.op, walk(e.arg))
        return binary(e.op, walk(e.left), walk(e.right))

    return walk(f)
