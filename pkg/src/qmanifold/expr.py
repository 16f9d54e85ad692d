"""Expression DSL for metric coefficients, with second-order forward jets.

Grammar (see docs/grammar.ebnf for the full EBNF)::

    expr   = term  { ("+" | "-") term }
    term   = unary { ("*" | "/") unary }
    unary  = "-" unary | power
    power  = atom [ "^" unary ]          (right-associative)
    atom   = NUMBER | VARIABLE | FUNCTION "(" expr ")" | "(" expr ")"

Variables are exactly x1, x2, x3; functions are sin, cos, sinh, cosh,
tanh, exp, log, sqrt.  "^" binds tighter than unary minus, so -x1^2
means -(x1^2).

Evaluation propagates (value, gradient, Hessian) triples -- order-2
forward jets -- through the tree, which is exactly the derivative depth
the curvature pipeline needs.  ``fd_oracle`` provides an independent
central-difference check; it evaluates its stencils in extended
precision (mpmath) so that the step-size roundoff of plain doubles does
not pollute comparisons against the jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import mpmath as mp
import numpy as np

from .errors import DomainError, ExprSyntaxError, NonFiniteError, UnknownIdentifierError

VARIABLES = ("x1", "x2", "x3")
FUNCTIONS = ("sin", "cos", "sinh", "cosh", "tanh", "exp", "log", "sqrt")

_ADD_PREC, _MUL_PREC, _NEG_PREC, _POW_PREC, _ATOM_PREC = 1, 2, 3, 4, 5


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    index: int  # 0, 1, 2 for x1, x2, x3

    def __str__(self) -> str:
        return VARIABLES[self.index]


@dataclass(frozen=True)
class Neg:
    arg: "Node"

    def __str__(self) -> str:
        return "-" + _wrap(self.arg, _NEG_PREC)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    lhs: "Node"
    rhs: "Node"

    def __str__(self) -> str:
        prec = _precedence(self)
        if self.op == "^":
            left = _wrap(self.lhs, prec + 1)   # (a^b)^c keeps parens on the left
            right = _wrap(self.rhs, _NEG_PREC)  # exponent may be -n or a^b
        else:
            left = _wrap(self.lhs, prec)
            right = _wrap(self.rhs, prec + 1)   # a - (b - c), a / (b / c), a + (b + c)
        sep = f" {self.op} " if self.op in "+-" else self.op
        return f"{left}{sep}{right}"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Node"

    def __str__(self) -> str:
        return f"{self.fn}({self.arg})"


Node = Union[Num, Var, Neg, BinOp, Call]


def _precedence(node: Node) -> int:
    if isinstance(node, BinOp):
        return {"+": _ADD_PREC, "-": _ADD_PREC, "*": _MUL_PREC,
                "/": _MUL_PREC, "^": _POW_PREC}[node.op]
    if isinstance(node, Neg):
        return _NEG_PREC
    return _ATOM_PREC


def _wrap(node: Node, min_prec: int) -> str:
    text = str(node)
    return f"({text})" if _precedence(node) < min_prec else text


@dataclass(frozen=True)
class ScalarField:
    """A parsed metric-coefficient expression over (x1, x2, x3).

    Immutable after parse; evaluation is pure, so a single instance may
    be shared freely between threads.
    """

    ast: Node
    source: str

    def __str__(self) -> str:
        return str(self.ast)


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            if i < n and source[i] == ".":
                i += 1
                while i < n and source[i].isdigit():
                    i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            tokens.append(_Token("num", source[start:i], start))
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(_Token("ident", source[start:i], start))
            continue
        if c in "+-*/^()":
            tokens.append(_Token("op", c, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character '{c}'", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ExprSyntaxError(f"expected '{op}'", tok.pos)
        self.advance()

    def parse_expr(self) -> Node:
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Node:
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.parse_unary())
        return node

    def parse_unary(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            return BinOp("^", base, self.parse_unary())
        return base

    def parse_atom(self) -> Node:
        tok = self.advance()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "ident":
            if tok.text in VARIABLES:
                return Var(VARIABLES.index(tok.text))
            if tok.text in FUNCTIONS:
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            raise UnknownIdentifierError(tok.text, tok.pos)
        if tok.kind == "op" and tok.text == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if tok.kind == "end":
            raise ExprSyntaxError("expected a value, found end of input", tok.pos)
        raise ExprSyntaxError(f"expected a value, found '{tok.text}'", tok.pos)


def parse(source: str) -> ScalarField:
    """Parse expression text into an immutable :class:`ScalarField`.

    Raises :class:`ExprSyntaxError` on malformed input and
    :class:`UnknownIdentifierError` for any symbol outside the variable
    and function sets.
    """
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    parser = _Parser(_tokenize(source))
    ast = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ExprSyntaxError(f"unexpected trailing input '{tail.text}'", tail.pos)
    return ScalarField(ast=ast, source=source)


# ---------------------------------------------------------------------------
# Order-2 jets
# ---------------------------------------------------------------------------

def _zeros3() -> np.ndarray:
    return np.zeros(3)


def _zeros33() -> np.ndarray:
    return np.zeros((3, 3))


@dataclass(frozen=True)
class Jet2:
    """Second-order Taylor data of a scalar at a point.

    ``hess`` is built symmetrically by every operation (outer products
    are always added in both orders), so no symmetrization pass is ever
    needed.
    """

    value: float
    grad: np.ndarray = field(default_factory=_zeros3)
    hess: np.ndarray = field(default_factory=_zeros33)

    def __post_init__(self):
        # bitwise symmetry: the lower triangle mirrors the upper one, so
        # rounding-order differences between h[i,j] and h[j,i] cannot leak
        sym = np.triu(self.hess) + np.triu(self.hess, 1).T
        object.__setattr__(self, "hess", sym)

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.grad + other.grad,
                    self.hess + other.hess)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value - other.value, self.grad - other.grad,
                    self.hess - other.hess)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.grad, -self.hess)

    def __mul__(self, other: "Jet2") -> "Jet2":
        value = self.value * other.value
        grad = self.value * other.grad + other.value * self.grad
        hess = (self.value * other.hess + other.value * self.hess
                + np.outer(self.grad, other.grad) + np.outer(other.grad, self.grad))
        return Jet2(value, grad, hess)

    def is_constant(self) -> bool:
        return not self.grad.any() and not self.hess.any()


def jet_constant(value: float) -> Jet2:
    return Jet2(float(value))


def jet_variable(index: int, value: float) -> Jet2:
    grad = np.zeros(3)
    grad[index] = 1.0
    return Jet2(float(value), grad)


def jet_divide(num: Jet2, den: Jet2, context: str, point) -> Jet2:
    if den.value == 0.0:
        raise DomainError("division by zero", context, point)
    value = num.value / den.value
    grad = (num.grad - value * den.grad) / den.value
    hess = (num.hess - value * den.hess
            - np.outer(grad, den.grad) - np.outer(den.grad, grad)) / den.value
    return Jet2(value, grad, hess)


def jet_chain(arg: Jet2, f0: float, f1: float, f2: float) -> Jet2:
    """Compose a univariate map with derivatives (f0, f1, f2) onto a jet."""
    return Jet2(f0, f1 * arg.grad,
                f1 * arg.hess + f2 * np.outer(arg.grad, arg.grad))


def _jet_int_power(base: Jet2, n: int, context: str, point) -> Jet2:
    if n == 0:
        return jet_constant(1.0)
    if n < 0:
        if base.value == 0.0:
            raise DomainError("zero base with negative exponent", context, point)
        return jet_divide(jet_constant(1.0), _jet_int_power(base, -n, context, point),
                          context, point)
    b = base.value
    f0 = b ** n
    f1 = n * b ** (n - 1)
    f2 = n * (n - 1) * b ** (n - 2) if n >= 2 else 0.0
    return jet_chain(base, f0, f1, f2)


def jet_power(base: Jet2, exponent: Jet2, context: str, point) -> Jet2:
    if exponent.is_constant():
        e = exponent.value
        if math.isfinite(e) and abs(e) < 1e9 and e == int(e):
            return _jet_int_power(base, int(e), context, point)
    if base.value <= 0.0:
        raise DomainError("power with non-integer exponent needs a positive base",
                          context, point)
    # f^g = exp(g * log f)
    log_base = jet_chain(base, math.log(base.value), 1.0 / base.value,
                         -1.0 / base.value ** 2)
    inner = exponent * log_base
    return jet_chain(inner, math.exp(inner.value), math.exp(inner.value),
                     math.exp(inner.value))


# (f, f', f'') for each function; domain guard where needed.
def _apply_function(fn: str, arg: Jet2, context: str, point) -> Jet2:
    x = arg.value
    if fn == "sin":
        return jet_chain(arg, math.sin(x), math.cos(x), -math.sin(x))
    if fn == "cos":
        return jet_chain(arg, math.cos(x), -math.sin(x), -math.cos(x))
    if fn == "sinh":
        return jet_chain(arg, math.sinh(x), math.cosh(x), math.sinh(x))
    if fn == "cosh":
        return jet_chain(arg, math.cosh(x), math.sinh(x), math.cosh(x))
    if fn == "tanh":
        t = math.tanh(x)
        return jet_chain(arg, t, 1.0 - t * t, -2.0 * t * (1.0 - t * t))
    if fn == "exp":
        e = math.exp(x)
        return jet_chain(arg, e, e, e)
    if fn == "log":
        if x <= 0.0:
            raise DomainError("log of a non-positive value", context, point)
        return jet_chain(arg, math.log(x), 1.0 / x, -1.0 / (x * x))
    if fn == "sqrt":
        if x <= 0.0:
            raise DomainError("sqrt of a non-positive value", context, point)
        s = math.sqrt(x)
        return jet_chain(arg, s, 0.5 / s, -0.25 / (s * x))
    raise ValueError(f"unhandled function {fn!r}")


def _eval_node(node: Node, point: np.ndarray) -> Jet2:
    if isinstance(node, Num):
        return jet_constant(node.value)
    if isinstance(node, Var):
        return jet_variable(node.index, point[node.index])
    if isinstance(node, Neg):
        return -_eval_node(node.arg, point)
    if isinstance(node, Call):
        return _apply_function(node.fn, _eval_node(node.arg, point), str(node), point)
    if isinstance(node, BinOp):
        lhs = _eval_node(node.lhs, point)
        rhs = _eval_node(node.rhs, point)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        if node.op == "/":
            return jet_divide(lhs, rhs, str(node), point)
        return jet_power(lhs, rhs, str(node), point)
    raise TypeError(f"unhandled node {node!r}")


def eval_jet2(field: ScalarField, point) -> Jet2:
    """Value, gradient and Hessian of ``field`` at ``point``.

    Raises :class:`DomainError` on domain violations and
    :class:`NonFiniteError` if any output component is NaN or infinite.
    """
    pt = np.asarray(point, dtype=float)
    try:
        jet = _eval_node(field.ast, pt)
    except OverflowError as exc:
        raise NonFiniteError(
            f"overflow evaluating '{field}' at point {tuple(pt)}") from exc
    if not (math.isfinite(jet.value) and np.isfinite(jet.grad).all()
            and np.isfinite(jet.hess).all()):
        raise NonFiniteError(
            f"non-finite jet for '{field}' at point {tuple(pt)}")
    return jet


# ---------------------------------------------------------------------------
# Finite-difference oracle (tests only)
# ---------------------------------------------------------------------------

_MP_FUNCTIONS = {
    "sin": mp.sin, "cos": mp.cos, "sinh": mp.sinh, "cosh": mp.cosh,
    "tanh": mp.tanh, "exp": mp.exp, "log": mp.log, "sqrt": mp.sqrt,
}


def _eval_mp(node: Node, point) -> mp.mpf:
    if isinstance(node, Num):
        return mp.mpf(node.value)
    if isinstance(node, Var):
        return point[node.index]
    if isinstance(node, Neg):
        return -_eval_mp(node.arg, point)
    if isinstance(node, Call):
        x = _eval_mp(node.arg, point)
        if node.fn in ("log", "sqrt") and x <= 0:
            raise DomainError(f"{node.fn} of a non-positive value", str(node), point)
        return _MP_FUNCTIONS[node.fn](x)
    if isinstance(node, BinOp):
        lhs = _eval_mp(node.lhs, point)
        rhs = _eval_mp(node.rhs, point)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        if node.op == "/":
            if rhs == 0:
                raise DomainError("division by zero", str(node), point)
            return lhs / rhs
        if rhs == int(rhs):
            if lhs == 0 and rhs < 0:
                raise DomainError("zero base with negative exponent", str(node), point)
            return lhs ** int(rhs)
        if lhs <= 0:
            raise DomainError("power with non-integer exponent needs a positive base",
                              str(node), point)
        return lhs ** rhs
    raise TypeError(f"unhandled node {node!r}")


def eval_value(field: ScalarField, point) -> float:
    """Plain value of the field, via the extended-precision evaluator."""
    pt = [mp.mpf(float(c)) for c in point]
    return float(_eval_mp(field.ast, pt))


def fd_oracle(field: ScalarField, point, step: float = 1e-5) -> Jet2:
    """Central-difference gradient/Hessian estimate, O(step^2) accurate.

    Independent of the jet evaluator: the stencil values come from a
    separate tree walk carried out in 50-digit mpmath arithmetic, so the
    returned estimates are limited by truncation only.  Never used in
    the main pipeline; this is the test oracle.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    with mp.workdps(50):
        h = mp.mpf(step)
        pt = [mp.mpf(float(c)) for c in point]

        def f(offsets) -> mp.mpf:
            shifted = [pt[k] + offsets[k] * h for k in range(3)]
            return _eval_mp(field.ast, shifted)

        center = f((0, 0, 0))
        grad = np.zeros(3)
        hess = np.zeros((3, 3))
        for i in range(3):
            ei = [0, 0, 0]
            ei[i] = 1
            plus, minus = f(tuple(ei)), f(tuple(-o for o in ei))
            grad[i] = float((plus - minus) / (2 * h))
            hess[i, i] = float((plus - 2 * center + minus) / h**2)
            for j in range(i + 1, 3):
                off = lambda si, sj: tuple(si * int(k == i) + sj * int(k == j)
                                           for k in range(3))
                mixed = (f(off(1, 1)) - f(off(1, -1)) - f(off(-1, 1)) + f(off(-1, -1)))
                hess[i, j] = hess[j, i] = float(mixed / (4 * h**2))
        return Jet2(float(center), grad, hess)
