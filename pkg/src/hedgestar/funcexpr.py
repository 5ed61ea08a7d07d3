"""Parser, evaluator and presets for complex maps f(z).

Grammar (ASCII, no implicit multiplication):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | atom ('^' factor)?
    atom   := number | 'z' | 'i' | 'pi' | 'e' | 'exp' '(' expr ')' | '(' expr ')'

Numbers are decimals with an optional fractional part (no scientific
notation).  '^' is right-associative and binds tighter than unary minus,
so -z^2 parses as -(z^2).

Evaluation is total: division by exact zero and overflow produce non-finite
("poisoned") values instead of raising, so the per-pixel iteration loop stays
branch-light.  Constant subtrees are folded once at parse time, which is what
keeps multipliers like e^(2*pi*i*theta) bit-identical across every pixel of a
render.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from decimal import Decimal

import numpy as np

from .numerics import ContinuedFraction, cf_fraction

_POISON = complex(math.nan, math.nan)
MAX_SQUARING_EXPONENT = 64


class ExprError(ValueError):
    """Base class for expression-text failures; carries a 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ExprSyntaxError(ExprError):
    pass


class UnknownIdentifierError(ExprError):
    pass


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    """The free variable z."""


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str  # only 'exp'
    arg: "Node"


Node = Const | Var | Neg | BinOp | Call


@dataclass(frozen=True)
class MapExpr:
    """Immutable parsed map; share freely across workers."""

    root: Node
    source: str

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self) -> str:
        return f"MapExpr({self.source!r})"


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_NAMED = {"i": 1j, "pi": complex(math.pi), "e": complex(math.e)}


class _Tokens:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.items: list[tuple[str, str, int]] = []  # (kind, text, pos)
        self._lex()
        self.index = 0

    def _lex(self) -> None:
        s, n = self.source, len(self.source)
        i = 0
        while i < n:
            c = s[i]
            if c.isspace():
                i += 1
                continue
            if c.isdigit():
                j = i
                while j < n and s[j].isdigit():
                    j += 1
                if j < n and s[j] == ".":
                    j += 1
                    if j == n or not s[j].isdigit():
                        raise ExprSyntaxError("digits required after decimal point", j)
                    while j < n and s[j].isdigit():
                        j += 1
                self.items.append(("number", s[i:j], i))
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < n and (s[j].isalnum() or s[j] == "_"):
                    j += 1
                self.items.append(("ident", s[i:j], i))
                i = j
                continue
            if c in "+-*/^()":
                self.items.append((c, c, i))
                i += 1
                continue
            raise ExprSyntaxError(f"unexpected character {c!r}", i)
        self.items.append(("end", "", n))

    def peek(self) -> tuple[str, str, int]:
        return self.items[self.index]

    def take(self) -> tuple[str, str, int]:
        tok = self.items[self.index]
        self.index += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            what = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise ExprSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        return self.take()


def parse(source: str) -> MapExpr:
    """Parse expression text into a MapExpr (constant subtrees pre-folded)."""
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    toks = _Tokens(source)
    root = _parse_expr(toks)
    kind, text, pos = toks.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected trailing input {text!r}", pos)
    return MapExpr(root=_fold(root), source=source)


def _parse_expr(toks: _Tokens) -> Node:
    node = _parse_term(toks)
    while toks.peek()[0] in ("+", "-"):
        op = toks.take()[0]
        node = BinOp(op, node, _parse_term(toks))
    return node


def _parse_term(toks: _Tokens) -> Node:
    node = _parse_factor(toks)
    while toks.peek()[0] in ("*", "/"):
        op = toks.take()[0]
        node = BinOp(op, node, _parse_factor(toks))
    return node


def _parse_factor(toks: _Tokens) -> Node:
    if toks.peek()[0] == "-":
        toks.take()
        return Neg(_parse_factor(toks))
    node = _parse_atom(toks)
    if toks.peek()[0] == "^":
        toks.take()
        node = BinOp("^", node, _parse_factor(toks))
    return node


def _parse_atom(toks: _Tokens) -> Node:
    kind, text, pos = toks.take()
    if kind == "number":
        return Const(complex(float(text)))
    if kind == "ident":
        if text == "z":
            return Var()
        if text in _NAMED:
            return Const(_NAMED[text])
        if text == "exp":
            toks.expect("(")
            arg = _parse_expr(toks)
            toks.expect(")")
            return Call("exp", arg)
        raise UnknownIdentifierError(f"unknown identifier {text!r}", pos)
    if kind == "(":
        node = _parse_expr(toks)
        toks.expect(")")
        return node
    what = repr(text) if kind != "end" else "end of input"
    raise ExprSyntaxError(f"expected a value, found {what}", pos)


def _fold(node: Node) -> Node:
    """Collapse constant subtrees; skip results that would poison the tree."""
    if isinstance(node, (Const, Var)):
        return node
    if isinstance(node, Neg):
        child = _fold(node.operand)
        if isinstance(child, Const):
            return Const(-child.value)
        return Neg(child)
    if isinstance(node, Call):
        arg = _fold(node.arg)
        folded = Call(node.func, arg)
        if isinstance(arg, Const):
            value = _eval_scalar(folded, 0j)
            if _finite(value):
                return Const(value)
        return folded
    left, right = _fold(node.left), _fold(node.right)
    folded = BinOp(node.op, left, right)
    if isinstance(left, Const) and isinstance(right, Const):
        value = _eval_scalar(folded, 0j)
        if _finite(value):
            return Const(value)
    return folded


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _finite(v: complex) -> bool:
    return math.isfinite(v.real) and math.isfinite(v.imag)


def _ipow(base, n: int):
    """base**n for integer n >= 1 by binary squaring; exact multiply chain."""
    result = None
    b = base
    while True:
        if n & 1:
            result = b if result is None else result * b
        n >>= 1
        if not n:
            return result
        b = b * b


def _as_int_exponent(node: Node) -> int | None:
    if isinstance(node, Const):
        v = node.value
        if v.imag == 0.0 and v.real.is_integer() and abs(v.real) <= MAX_SQUARING_EXPONENT:
            return int(v.real)
    return None


def _eval_scalar(node: Node, z: complex) -> complex:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return z
    if isinstance(node, Neg):
        return -_eval_scalar(node.operand, z)
    if isinstance(node, Call):
        try:
            return cmath.exp(_eval_scalar(node.arg, z))
        except (OverflowError, ValueError):
            return _POISON
    left = _eval_scalar(node.left, z)
    op = node.op
    if op == "^":
        n = _as_int_exponent(node.right)
        if n is not None:
            if n == 0:
                return complex(1.0)
            if n > 0:
                return _ipow(left, n)
            try:
                return 1.0 / _ipow(left, -n)
            except ZeroDivisionError:
                return _POISON
        right = _eval_scalar(node.right, z)
        try:
            return cmath.exp(right * cmath.log(left))
        except (OverflowError, ValueError, ZeroDivisionError):
            return _POISON
    right = _eval_scalar(node.right, z)
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    try:
        return left / right
    except ZeroDivisionError:
        return _POISON


def _eval_array(node: Node, z: np.ndarray):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return z
    if isinstance(node, Neg):
        return -_eval_array(node.operand, z)
    if isinstance(node, Call):
        return np.exp(_eval_array(node.arg, z))
    left = _eval_array(node.left, z)
    op = node.op
    if op == "^":
        n = _as_int_exponent(node.right)
        if n is not None:
            if n == 0:
                return np.ones_like(left) if isinstance(left, np.ndarray) else complex(1.0)
            if n > 0:
                return _ipow(left, n)
            return 1.0 / _ipow(left, -n)
        return np.exp(_eval_array(node.right, z) * np.log(left))
    right = _eval_array(node.right, z)
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    return left / right


def evaluate(expr: MapExpr, z):
    """Evaluate the map at z.

    z may be a complex scalar (returns complex) or a complex ndarray
    (returns an ndarray of the same shape; constants broadcast).
    """
    if isinstance(z, np.ndarray):
        with np.errstate(all="ignore"):
            out = _eval_array(expr.root, z)
        if not isinstance(out, np.ndarray) or out.shape != z.shape:
            out = np.broadcast_to(np.asarray(out, dtype=np.complex128), z.shape).copy()
        return out
    return _eval_scalar(expr.root, complex(z))


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_real(x: float) -> str:
    s = repr(x)
    if "e" not in s and "E" not in s:
        return s
    # exact decimal expansion, grammar has no scientific notation
    return format(Decimal(x), "f")


def _fmt_const(v: complex) -> tuple[str, int]:
    re, im = v.real, v.imag
    if im == 0.0:
        if re >= 0.0 and not (re == 0.0 and math.copysign(1.0, re) < 0):
            return _fmt_real(re), _PREC_ATOM
        return f"(-{_fmt_real(-re)})", _PREC_ATOM
    if re == 0.0:
        body = f"{_fmt_real(im)}*i" if im > 0 else f"-{_fmt_real(-im)}*i"
    else:
        re_part = _fmt_real(re) if re >= 0 else f"-{_fmt_real(-re)}"
        im_part = f"+{_fmt_real(im)}*i" if im > 0 else f"-{_fmt_real(-im)}*i"
        body = re_part + im_part
    return f"({body})", _PREC_ATOM


def _print(node: Node) -> tuple[str, int]:
    if isinstance(node, Const):
        return _fmt_const(node.value)
    if isinstance(node, Var):
        return "z", _PREC_ATOM
    if isinstance(node, Neg):
        child = _wrap(node.operand, _PREC_NEG)
        return f"-{child}", _PREC_NEG
    if isinstance(node, Call):
        inner, _ = _print(node.arg)
        return f"{node.func}({inner})", _PREC_ATOM
    op = node.op
    if op in "+-":
        left = _wrap(node.left, _PREC_ADD)
        right = _wrap(node.right, _PREC_MUL)
        return f"{left} {op} {right}", _PREC_ADD
    if op in "*/":
        left = _wrap(node.left, _PREC_MUL)
        right = _wrap(node.right, _PREC_NEG)
        return f"{left}{op}{right}", _PREC_MUL
    base = _wrap(node.left, _PREC_ATOM)
    exponent = _wrap(node.right, _PREC_NEG)
    return f"{base}^{exponent}", _PREC_POW


def _wrap(node: Node, minimum: int) -> str:
    text, prec = _print(node)
    return text if prec >= minimum else f"({text})"


def to_source(expr: MapExpr) -> str:
    """Render the AST back to grammar text; re-parsing evaluates identically."""
    return _print(expr.root)[0]


# ---------------------------------------------------------------------------
# germ presets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GermPreset:
    """A named map with its fixed point and recommended render parameters."""

    name: str
    expr: MapExpr
    fixed_point: complex
    notes: str
    defaults: dict = field(default_factory=dict)

    @property
    def source(self) -> str:
        return self.expr.source


DEFAULT_THETA_TERMS = (3, 10, 20000)


def quadratic_germ_source(theta_terms) -> str:
    """Expression text of e^(2*pi*i*theta)*z + z^2 with theta = p/q exactly
    from the continued-fraction terms."""
    frac = cf_fraction(ContinuedFraction(theta_terms))
    return f"e^(2*pi*i*({frac.numerator}/{frac.denominator}))*z + z^2"


def _quadratic_fixed_point(c: complex) -> complex:
    # non-zero fixed point of z^2 + c (the one with + root)
    return (1 + cmath.sqrt(1 - 4 * c)) / 2


def builtin_presets() -> list[GermPreset]:
    star = "equipotential-star"
    presets = [
        GermPreset(
            name="identity",
            expr=parse("z"),
            fixed_point=0j,
            notes="identity map; renders the bare holed branched star (calibration)",
            defaults=dict(method=star, branches=12, hole_radius=0.5, iters=100,
                          viewport=(-2.0, 2.0, 2.0, -2.0)),
        ),
        GermPreset(
            name="square",
            expr=parse("z^2"),
            fixed_point=0j,
            notes="super-attracting fixed point at 0; unit disc basin",
            defaults=dict(method="escape-time", iters=50, escape_radius=2.0,
                          viewport=(-1.6, 1.6, 1.6, -1.6)),
        ),
        GermPreset(
            name="quadratic-i",
            expr=parse("z^2 - i"),
            fixed_point=_quadratic_fixed_point(-1j),
            notes="quadratic with parameter c = -i (dendrite-like Julia set)",
            defaults=dict(method="escape-time", iters=50, escape_radius=2.0,
                          viewport=(-2.0, 2.0, 2.0, -2.0)),
        ),
        GermPreset(
            name="newton-cubic",
            expr=parse("(2*z^3+1)/(3*z^2)"),
            fixed_point=1 + 0j,
            notes="Newton iteration for the cube roots of unity",
            defaults=dict(method="approximation", iters=50, epsilon=1e-5,
                          viewport=(-2.0, 2.0, 2.0, -2.0)),
        ),
        GermPreset(
            name="flower3",
            expr=parse("z + z^3"),
            fixed_point=0j,
            notes="parabolic flower, 2 petals; branches work best as multiples of 2",
            defaults=dict(method=star, branches=12, hole_radius=0.0, iters=100,
                          viewport=(-1.6, 1.6, 1.6, -1.6)),
        ),
        GermPreset(
            name="flower4",
            expr=parse("z + z^4"),
            fixed_point=0j,
            notes="parabolic flower, 3 petals; branches work best as multiples of 3",
            defaults=dict(method=star, branches=12, hole_radius=0.0, iters=100,
                          viewport=(-1.5, 1.5, 1.5, -1.5)),
        ),
        GermPreset(
            name="flower5",
            expr=parse("z + z^5"),
            fixed_point=0j,
            notes="parabolic flower, 4 petals; branches work best as multiples of 4",
            defaults=dict(method=star, branches=16, hole_radius=0.0, iters=100,
                          viewport=(-1.5, 1.5, 1.5, -1.5)),
        ),
        GermPreset(
            name="germ37",
            expr=parse("e^(2*pi*i*(3/7))*z + z^2"),
            fixed_point=0j,
            notes="rationally indifferent quadratic germ, rotation number 3/7",
            defaults=dict(method=star, branches=14, hole_radius=0.0, iters=150,
                          viewport=(-1.3, 1.3, 1.3, -1.3)),
        ),
        GermPreset(
            name="hedgehog-q",
            expr=parse(quadratic_germ_source(DEFAULT_THETA_TERMS)),
            fixed_point=0j,
            notes="quadratic germ with rotation number from the continued "
                  f"fraction {list(DEFAULT_THETA_TERMS)}; tune the hole radius "
                  "to match the Siegel compactum",
            defaults=dict(method=star, branches=12, hole_radius=0.09, iters=300,
                          viewport=(-1.3, 1.3, 1.3, -1.3),
                          theta_terms=list(DEFAULT_THETA_TERMS)),
        ),
    ]
    return presets


def get_preset(name: str) -> GermPreset:
    for preset in builtin_presets():
        if preset.name == name:
            return preset
    known = ", ".join(p.name for p in builtin_presets())
    raise KeyError(f"unknown preset {name!r} (known: {known})")
