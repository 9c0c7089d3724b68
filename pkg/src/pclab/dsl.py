"""
Expression language for constants and series.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' integer)?
    base   := integer | 'zeta' '(' integer ')' | 'x' integer | 't'
            | name '(' args ')' | '(' expr ')'

``parse`` builds an AST, ``lower`` turns it into a :class:`CycloElement`
(for constant expressions) or a :class:`SeriesExpr`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .cyclotomic import ONE, CycloElement, zeta
from .errors import ArityError, DSLSemanticError, DSLSyntaxError, InvalidDenominatorError
from .series import MultiPoly, SeriesExpr
from .series import nodes as sn

BUILTINS = ("log1p", "expseries", "gapfact", "catalan", "hadamard", "conj", "abs2", "line", "affine")
_SYMBOLS = "+-*/^(),"


# ---------------------------------------------------------------------------
# tokens


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", a symbol, or "end"
    text: str
    line: int
    column: int


def tokenize(src: str) -> List[Token]:
    src = src.replace("−", "-")
    out = []
    i, line, col = 0, 1, 1
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            out.append(Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(Token("name", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _SYMBOLS:
            out.append(Token(ch, ch, line, col))
            i, col = i + 1, col + 1
            continue
        raise DSLSyntaxError(f"unexpected character {ch!r}", line, col)
    out.append(Token("end", "", line, col))
    return out


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Zeta:
    n: int


@dataclass(frozen=True)
class Var:
    index: int
    label: str = "x"


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Node", ...]


Node = Union[Num, Zeta, Var, Neg, BinOp, Pow, Call]


class _Parser:
    def __init__(self, src: str, m: Optional[int]):
        self.toks = tokenize(src)
        self.pos = 0
        self.m = m

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def fail(self, expected, message=None):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise DSLSyntaxError(message or f"unexpected {found}", t.line, t.column, expected)

    def take(self, kind) -> Token:
        if self.tok.kind != kind:
            self.fail([kind])
        t = self.tok
        self.pos += 1
        return t

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail(["+", "-", "*", "/", "^", "end of input"])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind in "+-" and self.tok.kind != "end":
            op = self.take(self.tok.kind).kind
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.take(self.tok.kind).kind
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.tok.kind == "-":
            self.take("-")
            return Neg(self.factor())
        base = self.base()
        if self.tok.kind == "^":
            self.take("^")
            if self.tok.kind != "int":
                self.fail(["non-negative integer"])
            return Pow(base, int(self.take("int").text))
        return base

    def base(self) -> Node:
        t = self.tok
        if t.kind == "int":
            self.pos += 1
            return Num(int(t.text))
        if t.kind == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if t.kind == "name":
            name = t.text
            if name == "zeta":
                self.pos += 1
                self.take("(")
                n = int(self.take("int").text)
                if n < 1:
                    raise DSLSyntaxError("zeta needs a positive order", t.line, t.column)
                self.take(")")
                return Zeta(n)
            if name == "t":
                self.pos += 1
                return self._var(1, "t", t)
            if name[0] == "x" and name[1:].isdigit():
                self.pos += 1
                return self._var(int(name[1:]), "x", t)
            if name in BUILTINS:
                self.pos += 1
                self.take("(")
                args = []
                if self.tok.kind != ")":
                    args.append(self.expr())
                    while self.tok.kind == ",":
                        self.take(",")
                        args.append(self.expr())
                self.take(")")
                return Call(name, tuple(args))
            raise DSLSyntaxError(f"unknown name {name!r}", t.line, t.column, ("zeta", "t", "x<i>") + BUILTINS)
        self.fail(["integer", "zeta", "x<i>", "t", "(", "builtin call"])

    def _var(self, idx, label, t):
        if idx < 1:
            raise DSLSyntaxError("variable indices start at 1", t.line, t.column)
        if self.m is not None and idx > self.m:
            raise ArityError(f"{t.text} at line {t.line}, column {t.column} exceeds the declared {self.m} variables")
        return Var(idx, label)


def parse(expr: str, m: Optional[int] = None) -> Node:
    """Parse ``expr``; variable indices are checked against m when it is given."""
    return _Parser(expr, m).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def render(node: Node) -> str:
    """Text that parses back to the same AST."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Zeta):
        return f"zeta({node.n})"
    if isinstance(node, Var):
        return "t" if node.label == "t" else f"x{node.index}"
    if isinstance(node, Neg):
        inner = render(node.arg)
        return "-" + (f"({inner})" if _prec(node.arg) < 3 else inner)
    if isinstance(node, Pow):
        inner = render(node.base)
        return (f"({inner})" if _prec(node.base) < 5 else inner) + f"^{node.exp}"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = render(node.left)
        right = render(node.right)
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        sep = f" {node.op} " if p == 1 else node.op
        return f"{left}{sep}{right}"
    if isinstance(node, Call):
        return f"{node.name}(" + ", ".join(render(a) for a in node.args) + ")"
    raise TypeError(node)


def max_variable(node: Node) -> int:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, (Neg,)):
        return max_variable(node.arg)
    if isinstance(node, Pow):
        return max_variable(node.base)
    if isinstance(node, BinOp):
        return max(max_variable(node.left), max_variable(node.right))
    if isinstance(node, Call):
        return max((max_variable(a) for a in node.args), default=0)
    return 0


# ---------------------------------------------------------------------------
# lowering


@dataclass(frozen=True)
class _Frac:
    """A rational function A/B during lowering (B(0) may still vanish)."""

    num: MultiPoly
    den: MultiPoly


def _monomial_content(p: MultiPoly):
    if p.is_zero():
        return None
    return tuple(min(n[i] for n in p.terms) for i in range(p.m))


def _shift_down(p: MultiPoly, e):
    return MultiPoly(p.m, {tuple(a - b for a, b in zip(n, e)): c for n, c in p.terms.items()})


def _finish(f: _Frac) -> sn.Rational:
    num, den = f.num, f.den
    if den.constant_term().is_zero():
        # cancel common monomial factors before giving up
        ed = _monomial_content(den)
        en = _monomial_content(num) if not num.is_zero() else ed
        common = tuple(min(a, b) for a, b in zip(ed, en))
        if any(common):
            num = _shift_down(num, common) if not num.is_zero() else num
            den = _shift_down(den, common)
        if den.constant_term().is_zero():
            raise DSLSemanticError("not a power series at 0: the denominator vanishes at the origin")
    return sn.Rational(num, den)


class _Lowerer:
    def __init__(self, m: int):
        self.m = max(m, 1)

    def const(self, c: CycloElement) -> MultiPoly:
        return MultiPoly.constant(self.m, c)

    def value(self, node):
        """CycloElement, _Frac, or SeriesExpr."""
        if isinstance(node, Num):
            return CycloElement.rational(node.value)
        if isinstance(node, Zeta):
            return zeta(node.n)
        if isinstance(node, Var):
            return _Frac(MultiPoly.variable(self.m, node.index), self.const(ONE))
        if isinstance(node, Neg):
            v = self.value(node.arg)
            if isinstance(v, CycloElement):
                return -v
            return _Frac(-self.frac(v).num, self.frac(v).den)
        if isinstance(node, Pow):
            v = self.value(node.base)
            if isinstance(v, CycloElement):
                return v**node.exp
            f = self.frac(v)
            return _Frac(f.num**node.exp, f.den**node.exp)
        if isinstance(node, BinOp):
            return self.binop(node.op, self.value(node.left), self.value(node.right))
        if isinstance(node, Call):
            return self.call(node)
        raise TypeError(node)

    def frac(self, v) -> _Frac:
        if isinstance(v, CycloElement):
            return _Frac(self.const(v), self.const(ONE))
        if isinstance(v, _Frac):
            return v
        if isinstance(v, sn.Rational):
            if v.m != self.m:
                raise ArityError(f"expression in {v.m} variables used where {self.m} are expected")
            return _Frac(v.num, v.den)
        raise DSLSemanticError("arithmetic is only defined on rational functions and constants")

    def binop(self, op, a, b):
        if isinstance(a, CycloElement) and isinstance(b, CycloElement):
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if b.is_zero():
                raise DSLSemanticError("division by zero")
            return a / b
        fa, fb = self.frac(a), self.frac(b)
        if op == "+":
            return _Frac(fa.num * fb.den + fb.num * fa.den, fa.den * fb.den)
        if op == "-":
            return _Frac(fa.num * fb.den - fb.num * fa.den, fa.den * fb.den)
        if op == "*":
            return _Frac(fa.num * fb.num, fa.den * fb.den)
        if fb.num.is_zero():
            raise DSLSemanticError("division by zero")
        return _Frac(fa.num * fb.den, fa.den * fb.num)

    def series(self, v) -> SeriesExpr:
        if isinstance(v, SeriesExpr):
            return v
        return _finish(self.frac(v))

    def constant_arg(self, node, name) -> CycloElement:
        v = self.value(node)
        if not isinstance(v, CycloElement):
            raise DSLSemanticError(f"{name} expects constant coefficients")
        return v

    def call(self, node: Call):
        name, args = node.name, node.args
        if name == "log1p":
            if len(args) > 1:
                raise ArityError("log1p takes at most one argument")
            k = 1
            if args:
                kv = self.constant_arg(args[0], name)
                if not kv.is_rational() or kv.to_fraction().denominator != 1 or kv.to_fraction() < 1:
                    raise DSLSemanticError("log1p needs a positive integer k")
                k = int(kv.to_fraction())
            return sn.oracle("log1p", k)
        if name in ("expseries", "gapfact", "catalan"):
            if args:
                raise ArityError(f"{name} takes no arguments")
            return sn.oracle(name)
        if name == "hadamard":
            if len(args) != 2:
                raise ArityError("hadamard takes two series")
            return sn.hadamard(self.series(self.value(args[0])), self.series(self.value(args[1])))
        if name in ("conj", "abs2"):
            if len(args) != 1:
                raise ArityError(f"{name} takes one series")
            v = self.value(args[0])
            if isinstance(v, CycloElement) and name == "conj":
                return v.conjugate()
            inner = self.series(v)
            return sn.conjugate_series(inner) if name == "conj" else sn.abs_square(inner)
        if name in ("line", "affine"):
            if not args:
                raise ArityError(f"{name} needs a series argument")
            inner = self.series(self.value(args[0]))
            coeffs = [self.constant_arg(a, name) for a in args[1:]]
            if name == "line":
                return sn.line_specialize(inner, coeffs)
            return sn.affine_substitute(inner, coeffs)
        raise DSLSemanticError(f"unknown builtin {name}")  # pragma: no cover


def lower(ast: Node, m: Optional[int] = None):
    """CycloElement for constant expressions, a SeriesExpr otherwise."""
    if m is None:
        m = max_variable(ast)
    v = _Lowerer(m).value(ast)
    if isinstance(v, CycloElement):
        return v
    if isinstance(v, _Frac):
        return _finish(v)
    return v


def parse_constant(text: str) -> CycloElement:
    v = lower(parse(text, 0), 0)
    if not isinstance(v, CycloElement):
        raise DSLSemanticError(f"{text!r} is not a constant")
    return v


def parse_series(text: str, m: Optional[int] = None) -> SeriesExpr:
    """Parse and lower to a series; constants become constant rational series."""
    ast = parse(text, m)
    v = lower(ast, m)
    if isinstance(v, CycloElement):
        return sn.rational(MultiPoly.constant(max(m or 1, 1), v))
    return v
