"""Linear expression grammar, parser and canonical symbolic linear forms.

Expressions are parsed into a small AST and then linearized into a
:class:`LinearExpr`, whose coefficients are exact polynomials over parameter
references (:class:`Coef`). A ``LinearExpr`` is always kept in canonical form:
one term per ``(variable, index tuple)``, terms sorted, zero terms dropped,
summations merged by ``(index, set)``.

Grammar (whitespace-insensitive)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" INT)?
    atom    := NUMBER | ref | "sum(" NAME "in" NAME "," expr ")" | "(" expr ")"
    ref     := NAME ("[" index ("," index)* "]")?
    index   := NAME | INT | 'label'

The LaTeX tokens ``\\cdot``, ``\\times``, ``\\leq``, ``\\le``, ``\\geq`` and
``\\ge`` are accepted as aliases; any other backslash command is an error.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

__all__ = [
    "ExpressionError",
    "ExpressionSyntaxError",
    "NonlinearExpressionError",
    "IndexRef",
    "ParamRef",
    "VarRef",
    "Coef",
    "LinearExpr",
    "parse_ast",
    "parse_linear_expr",
    "parse_relation",
    "canonicalize",
    "format_number",
    "to_fraction",
    "RELATIONS",
]

RELATIONS = ("<=", ">=", "=")
RESERVED = frozenset({"sum", "in"})

_LATEX = {
    "cdot": "*",
    "times": "*",
    "leq": "<=",
    "le": "<=",
    "geq": ">=",
    "ge": ">=",
}


class ExpressionError(ValueError):
    """Base class for expression errors."""


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
            if text is not None:
                message += f" in {text!r}"
        super().__init__(message)


class NonlinearExpressionError(ExpressionError):
    """A product of two variable-bearing factors."""


def to_fraction(value) -> Fraction:
    """Exact rational from an int, float, str or Fraction.

    Floats go through their shortest repr so that ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite number {value!r}")
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def format_number(q: Fraction) -> str:
    """Shortest exact text for a rational: ``3``, ``-0.25`` or ``1/60``."""
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    places = max(twos, fives)
    scaled = abs(q.numerator) * (10**places // q.denominator)
    digits = str(scaled).rjust(places + 1, "0")
    text = f"{digits[:-places]}.{digits[-places:]}".rstrip("0")
    return ("-" if q < 0 else "") + text


# ---------------------------------------------------------------------------
# symbolic references


@dataclass(frozen=True, order=True)
class IndexRef:
    """One index position: a bound index name or a literal set-member label."""

    kind: str  # "bound" | "label"
    value: str

    @classmethod
    def bound(cls, name: str) -> "IndexRef":
        return cls("bound", name)

    @classmethod
    def label(cls, value) -> "IndexRef":
        return cls("label", str(value))

    def render(self) -> str:
        if self.kind == "bound":
            return self.value
        if re.fullmatch(r"\d+", self.value):
            return self.value
        return "'" + self.value.replace("'", "") + "'"


@dataclass(frozen=True, order=True)
class ParamRef:
    name: str
    index: tuple[IndexRef, ...] = ()

    def render(self) -> str:
        return _render_ref(self.name, self.index)


@dataclass(frozen=True, order=True)
class VarRef:
    name: str
    index: tuple[IndexRef, ...] = ()

    def render(self) -> str:
        return _render_ref(self.name, self.index)


def _render_ref(name: str, index: tuple[IndexRef, ...]) -> str:
    if not index:
        return name
    return f"{name}[{','.join(i.render() for i in index)}]"


# ---------------------------------------------------------------------------
# coefficient polynomials

Monomial = tuple  # sorted tuple of ParamRef, repeated for powers


@dataclass(frozen=True)
class Coef:
    """Polynomial over parameter references with rational coefficients."""

    items: tuple[tuple[Monomial, Fraction], ...] = ()

    @classmethod
    def const(cls, q) -> "Coef":
        q = to_fraction(q)
        return cls((((), q),)) if q else cls()

    @classmethod
    def param(cls, ref: ParamRef) -> "Coef":
        return cls((((ref,), Fraction(1)),))

    @classmethod
    def _from_dict(cls, acc: dict) -> "Coef":
        return cls(tuple(sorted(((m, q) for m, q in acc.items() if q), key=_mono_key)))

    def __bool__(self) -> bool:
        return bool(self.items)

    def is_number(self) -> bool:
        return all(not m for m, _ in self.items)

    @property
    def number(self) -> Fraction:
        if not self.is_number():
            raise ExpressionError("coefficient depends on parameters")
        return self.items[0][1] if self.items else Fraction(0)

    def __add__(self, other: "Coef") -> "Coef":
        acc = dict(self.items)
        for m, q in other.items:
            acc[m] = acc.get(m, 0) + q
        return Coef._from_dict(acc)

    def __neg__(self) -> "Coef":
        return Coef(tuple((m, -q) for m, q in self.items))

    def __sub__(self, other: "Coef") -> "Coef":
        return self + (-other)

    def __mul__(self, other: "Coef") -> "Coef":
        acc: dict = {}
        for m1, q1 in self.items:
            for m2, q2 in other.items:
                m = tuple(sorted(m1 + m2))
                acc[m] = acc.get(m, 0) + q1 * q2
        return Coef._from_dict(acc)

    def __pow__(self, k: int) -> "Coef":
        out = Coef.const(1)
        for _ in range(k):
            out = out * self
        return out

    def params(self) -> Iterator[ParamRef]:
        for m, _ in self.items:
            yield from m

    def map_refs(self, fn: Callable[[ParamRef], ParamRef]) -> "Coef":
        acc: dict = {}
        for m, q in self.items:
            key = tuple(sorted(fn(r) for r in m))
            acc[key] = acc.get(key, 0) + q
        return Coef._from_dict(acc)

    def evaluate(self, lookup: Callable[[ParamRef], Fraction]) -> Fraction:
        total = Fraction(0)
        for m, q in self.items:
            v = q
            for r in m:
                v *= lookup(r)
            total += v
        return total

    def render(self) -> str:
        if not self.items:
            return "0"
        parts = [_render_monomial(m, q) for m, q in self.items]
        return _join_signed(parts)


def _mono_key(item):
    m, _ = item
    return (len(m), m)


def _render_monomial(m: Monomial, q: Fraction) -> str:
    if not m:
        return format_number(q)
    refs = "*".join(r.render() for r in m)
    if q == 1:
        return refs
    if q == -1:
        return "-" + refs
    return f"{format_number(q)}*{refs}"


def _join_signed(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------
# canonical linear forms


@dataclass(frozen=True)
class LinearExpr:
    """Canonical symbolic linear expression.

    ``terms`` pairs each variable reference with its coefficient polynomial,
    ``sums`` holds summation nodes ``(index, set, body)`` and ``constant`` is
    the variable-free part outside any summation.
    """

    terms: tuple[tuple[VarRef, Coef], ...] = ()
    constant: Coef = field(default_factory=Coef)
    sums: tuple[tuple[str, str, "LinearExpr"], ...] = ()

    @classmethod
    def build(cls, terms=(), constant: Coef | None = None, sums=()) -> "LinearExpr":
        acc: dict[VarRef, Coef] = {}
        for v, c in terms:
            acc[v] = acc[v] + c if v in acc else c
        sacc: dict[tuple[str, str], LinearExpr] = {}
        for idx, s, body in sums:
            key = (idx, s)
            sacc[key] = sacc[key] + body if key in sacc else body
        return cls(
            terms=tuple(sorted(((v, c) for v, c in acc.items() if c), key=lambda t: t[0])),
            constant=constant if constant is not None else Coef(),
            sums=tuple((i, s, b) for (i, s), b in sorted(sacc.items()) if not b.is_zero()),
        )

    @classmethod
    def var(cls, name: str, index: Iterable[IndexRef] = (), coef=1) -> "LinearExpr":
        c = coef if isinstance(coef, Coef) else Coef.const(coef)
        return cls.build([(VarRef(name, tuple(index)), c)])

    @classmethod
    def const(cls, value) -> "LinearExpr":
        c = value if isinstance(value, Coef) else Coef.const(value)
        return cls(constant=c)

    def is_zero(self) -> bool:
        return not self.terms and not self.constant and not self.sums

    def is_coefficient(self) -> bool:
        """True when the expression is a bare coefficient (no variables, no sums)."""
        return not self.terms and not self.sums

    def has_variables(self) -> bool:
        return bool(self.terms) or any(b.has_variables() for _, _, b in self.sums)

    def __add__(self, other: "LinearExpr") -> "LinearExpr":
        return LinearExpr.build(
            self.terms + other.terms, self.constant + other.constant, self.sums + other.sums
        )

    def __neg__(self) -> "LinearExpr":
        return self.scale(Coef.const(-1))

    def __sub__(self, other: "LinearExpr") -> "LinearExpr":
        return self + (-other)

    def scale(self, c) -> "LinearExpr":
        if not isinstance(c, Coef):
            c = Coef.const(c)
        if not c:
            return LinearExpr()
        return LinearExpr.build(
            [(v, k * c) for v, k in self.terms],
            self.constant * c,
            [(i, s, b.scale(c)) for i, s, b in self.sums],
        )

    def split_constant(self) -> tuple["LinearExpr", "LinearExpr"]:
        """Split into ``(variable part, variable-free part)``."""
        var_sums, const_sums = [], []
        for i, s, b in self.sums:
            bv, bc = b.split_constant()
            if not bv.is_zero():
                var_sums.append((i, s, bv))
            if not bc.is_zero():
                const_sums.append((i, s, bc))
        return (
            LinearExpr.build(self.terms, None, var_sums),
            LinearExpr.build((), self.constant, const_sums),
        )

    # -- traversal -----------------------------------------------------------

    def var_refs(self) -> Iterator[VarRef]:
        for v, _ in self.terms:
            yield v
        for _, _, b in self.sums:
            yield from b.var_refs()

    def param_refs(self) -> Iterator[ParamRef]:
        for _, c in self.terms:
            yield from c.params()
        yield from self.constant.params()
        for _, _, b in self.sums:
            yield from b.param_refs()

    def variable_names(self) -> set[str]:
        return {v.name for v in self.var_refs()}

    def rename(self, names: Mapping[str, str]) -> "LinearExpr":
        """Rename variables, parameters, sets and bound indices by name."""

        def ix(i: IndexRef) -> IndexRef:
            return IndexRef.bound(names.get(i.value, i.value)) if i.kind == "bound" else i

        def pr(r: ParamRef) -> ParamRef:
            return ParamRef(names.get(r.name, r.name), tuple(ix(i) for i in r.index))

        return LinearExpr.build(
            [
                (VarRef(names.get(v.name, v.name), tuple(ix(i) for i in v.index)), c.map_refs(pr))
                for v, c in self.terms
            ],
            self.constant.map_refs(pr),
            [(names.get(i, i), names.get(s, s), b.rename(names)) for i, s, b in self.sums],
        )

    def substitute(self, name: str, fn: Callable[[tuple[IndexRef, ...]], "LinearExpr"]) -> "LinearExpr":
        """Replace every occurrence of variable ``name`` by ``fn(index)``."""
        out = LinearExpr(constant=self.constant)
        kept = []
        for v, c in self.terms:
            if v.name == name:
                out = out + fn(v.index).scale(c)
            else:
                kept.append((v, c))
        sums = [(i, s, b.substitute(name, fn)) for i, s, b in self.sums]
        return out + LinearExpr.build(kept, None, sums)

    # -- text ----------------------------------------------------------------

    def render(self) -> str:
        parts = []
        for v, c in self.terms:
            parts.append(_render_term(v, c))
        for i, s, b in self.sums:
            parts.append(f"sum({i} in {s}, {b.render()})")
        if self.constant:
            parts.append(self.constant.render() if len(self.constant.items) == 1 else f"({self.constant.render()})")
        if not parts:
            return "0"
        return _join_signed(parts)

    def __str__(self) -> str:
        return self.render()


def _render_term(v: VarRef, c: Coef) -> str:
    if len(c.items) == 1:
        m, q = c.items[0]
        if not m and q == 1:
            return v.render()
        if not m and q == -1:
            return "-" + v.render()
        return f"{_render_monomial(m, q)}*{v.render()}"
    return f"({c.render()})*{v.render()}"


def canonicalize(e) -> LinearExpr:
    """Canonical form of a LinearExpr (or AST node); idempotent."""
    if isinstance(e, Node):
        return linearize(e)
    return LinearExpr.build(
        [(v, c) for v, c in e.terms],
        e.constant,
        [(i, s, canonicalize(b)) for i, s, b in e.sums],
    )


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>'[^']*'|"[^"]*")
  | (?P<latex>\\[A-Za-z]+)
  | (?P<rel><=|>=|==|=)
  | (?P<op>[-+*/^()\[\],])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        tok = m.group()
        if kind == "latex":
            repl = _LATEX.get(tok[1:])
            if repl is None:
                raise ExpressionSyntaxError(f"unsupported LaTeX command {tok!r}", pos, text)
            out.append(Token("rel" if repl in RELATIONS else "op", repl, pos))
        elif kind == "rel":
            out.append(Token("rel", "=" if tok == "==" else tok, pos))
        elif kind != "ws":
            out.append(Token(kind, tok, pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Node:
    pos: int


@dataclass(frozen=True)
class Num(Node):
    value: Fraction


@dataclass(frozen=True)
class Ref(Node):
    name: str
    index: tuple[IndexRef, ...]


@dataclass(frozen=True)
class SumNode(Node):
    index: str
    set: str
    body: Node


@dataclass(frozen=True)
class Add(Node):
    items: tuple[tuple[int, Node], ...]  # (sign, node)


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class Group(Node):
    inner: Node


class _Parser:
    def __init__(self, text: str, tokens: list[Token]):
        self.text = text
        self.toks = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.cur
        if t.text != text or t.kind not in ("op", "name"):
            raise ExpressionSyntaxError(f"expected {text!r}, got {t.text or 'end of input'!r}", t.pos, self.text)
        return self.take()

    def error(self, msg: str):
        raise ExpressionSyntaxError(msg, self.cur.pos, self.text)

    def expr(self) -> Node:
        pos = self.cur.pos
        items = [(1, self.term())]
        while self.cur.kind == "op" and self.cur.text in "+-":
            sign = 1 if self.take().text == "+" else -1
            items.append((sign, self.term()))
        return items[0][1] if len(items) == 1 else Add(pos, tuple(items))

    def term(self) -> Node:
        node = self.unary()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.take()
            rhs = self.unary()
            node = Mul(op.pos, node, rhs) if op.text == "*" else Div(op.pos, node, rhs)
        return node

    def unary(self) -> Node:
        if self.cur.kind == "op" and self.cur.text in "+-":
            t = self.take()
            inner = self.unary()
            return Neg(t.pos, inner) if t.text == "-" else inner
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.cur.kind == "op" and self.cur.text == "^":
            t = self.take()
            neg = False
            if self.cur.kind == "op" and self.cur.text == "-":
                self.take()
                neg = True
            if self.cur.kind != "num" or not re.fullmatch(r"\d+", self.cur.text):
                self.error("exponent must be a non-negative integer literal")
            if neg:
                raise ExpressionSyntaxError("negative exponents are not supported", t.pos, self.text)
            return Pow(t.pos, base, int(self.take().text))
        return base

    def atom(self) -> Node:
        t = self.cur
        if t.kind == "num":
            self.take()
            return Num(t.pos, Fraction(t.text))
        if t.kind == "op" and t.text == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return Group(t.pos, inner)
        if t.kind == "name":
            self.take()
            if t.text == "sum" and self.cur.text == "(":
                return self.summation(t)
            if t.text in RESERVED:
                raise ExpressionSyntaxError(f"reserved word {t.text!r}", t.pos, self.text)
            index: tuple[IndexRef, ...] = ()
            if self.cur.kind == "op" and self.cur.text == "[":
                self.take()
                idx = [self.index_atom()]
                while self.cur.kind == "op" and self.cur.text == ",":
                    self.take()
                    idx.append(self.index_atom())
                self.expect("]")
                index = tuple(idx)
            return Ref(t.pos, t.text, index)
        self.error(f"unexpected token {t.text or 'end of input'!r}")

    def index_atom(self) -> IndexRef:
        t = self.take()
        if t.kind == "name" and t.text not in RESERVED:
            return IndexRef.bound(t.text)
        if t.kind == "num" and re.fullmatch(r"\d+", t.text):
            return IndexRef.label(t.text)
        if t.kind == "str":
            return IndexRef.label(t.text[1:-1])
        raise ExpressionSyntaxError(f"bad index {t.text!r}", t.pos, self.text)

    def summation(self, start: Token) -> Node:
        self.expect("(")
        idx = self.take()
        if idx.kind != "name" or idx.text in RESERVED:
            raise ExpressionSyntaxError("expected summation index name", idx.pos, self.text)
        if self.cur.text != "in":
            self.error("expected 'in'")
        self.take()
        s = self.take()
        if s.kind != "name" or s.text in RESERVED:
            raise ExpressionSyntaxError("expected set name", s.pos, self.text)
        self.expect(",")
        body = self.expr()
        self.expect(")")
        return SumNode(start.pos, idx.text, s.text, body)


def parse_ast(text: str) -> Node:
    """Parse one expression (no relation) into an AST."""
    p = _Parser(text, tokenize(text))
    node = p.expr()
    if p.cur.kind != "end":
        p.error(f"unexpected trailing {p.cur.text!r}")
    return node


def parse_relation(text: str) -> tuple[Node, str, Node]:
    """Split ``lhs REL rhs`` and parse both sides."""
    toks = tokenize(text)
    rels = [t for t in toks if t.kind == "rel"]
    if len(rels) != 1:
        pos = rels[1].pos if len(rels) > 1 else None
        raise ExpressionSyntaxError("expected exactly one relation (<=, >=, =)", pos, text)
    r = rels[0]
    k = toks.index(r)
    lhs_p = _Parser(text, toks[:k] + [Token("end", "", r.pos)])
    lhs = lhs_p.expr()
    if lhs_p.cur.kind != "end":
        lhs_p.error(f"unexpected {lhs_p.cur.text!r}")
    rhs_p = _Parser(text, toks[k + 1 :])
    rhs = rhs_p.expr()
    if rhs_p.cur.kind != "end":
        rhs_p.error(f"unexpected {rhs_p.cur.text!r}")
    return lhs, r.text, rhs


# ---------------------------------------------------------------------------
# linearization


def infer_variables(node: Node) -> set[str]:
    """Guess which names are variables when no declarations are available.

    A name is taken as a variable when it stands alone as an additive term or
    is the last plain reference of a product with no parenthesized factor.
    """
    found: set[str] = set()

    def factors(n: Node, out: list):
        if isinstance(n, Mul):
            factors(n.left, out)
            factors(n.right, out)
        elif isinstance(n, Div):
            factors(n.left, out)
        else:
            out.append(n)

    def visit(n: Node):
        if isinstance(n, Ref):
            found.add(n.name)
        elif isinstance(n, (Add,)):
            for _, item in n.items:
                visit(item)
        elif isinstance(n, Neg):
            visit(n.operand)
        elif isinstance(n, Group):
            visit(n.inner)
        elif isinstance(n, SumNode):
            visit(n.body)
        elif isinstance(n, (Mul, Div)):
            fs: list = []
            factors(n, fs)
            compound = [f for f in fs if isinstance(f, (Group, SumNode, Add, Neg))]
            if compound:
                for f in compound:
                    visit(f)
            else:
                refs = [f for f in fs if isinstance(f, Ref)]
                if refs:
                    found.add(refs[-1].name)

    visit(node)
    return found


def linearize(node: Node, is_variable: Callable[[str], bool] | None = None, text: str | None = None) -> LinearExpr:
    """Turn an AST into a canonical :class:`LinearExpr`."""
    if is_variable is None:
        inferred = infer_variables(node)
        is_variable = inferred.__contains__

    def lin(n: Node, scope: frozenset) -> LinearExpr:
        if isinstance(n, Num):
            return LinearExpr.const(n.value)
        if isinstance(n, Ref):
            if n.name in scope:
                if n.index:
                    raise ExpressionSyntaxError(f"index {n.name!r} cannot be subscripted", n.pos, text)
                raise ExpressionSyntaxError(f"index {n.name!r} used as a value", n.pos, text)
            if is_variable(n.name):
                return LinearExpr.var(n.name, n.index)
            return LinearExpr.const(Coef.param(ParamRef(n.name, n.index)))
        if isinstance(n, Group):
            return lin(n.inner, scope)
        if isinstance(n, Neg):
            return -lin(n.operand, scope)
        if isinstance(n, Add):
            out = LinearExpr()
            for sign, item in n.items:
                e = lin(item, scope)
                out = out + (e if sign > 0 else -e)
            return out
        if isinstance(n, Mul):
            a, b = lin(n.left, scope), lin(n.right, scope)
            if a.is_coefficient():
                return b.scale(a.constant)
            if b.is_coefficient():
                return a.scale(b.constant)
            if a.has_variables() and b.has_variables():
                raise NonlinearExpressionError(
                    f"product of variable expressions at position {n.pos}" + (f" in {text!r}" if text else "")
                )
            raise ExpressionSyntaxError("summation used as a multiplier is not supported", n.pos, text)
        if isinstance(n, Div):
            a, b = lin(n.left, scope), lin(n.right, scope)
            if not b.is_coefficient() or not b.constant.is_number():
                raise ExpressionSyntaxError("division only by numeric constants", n.pos, text)
            d = b.constant.number
            if d == 0:
                raise ExpressionSyntaxError("division by zero", n.pos, text)
            return a.scale(Coef.const(1 / d))
        if isinstance(n, Pow):
            base = lin(n.base, scope)
            if not base.is_coefficient():
                if base.has_variables() and n.exponent == 1:
                    return base
                raise NonlinearExpressionError(
                    f"power of a variable expression at position {n.pos}" + (f" in {text!r}" if text else "")
                )
            return LinearExpr.const(base.constant**n.exponent)
        if isinstance(n, SumNode):
            if n.index in scope:
                raise ExpressionSyntaxError(f"index {n.index!r} shadows an outer index", n.pos, text)
            body = lin(n.body, scope | {n.index})
            return LinearExpr.build((), None, [(n.index, n.set, body)])
        raise TypeError(f"unknown node {n!r}")

    return lin(node, frozenset())


def parse_linear_expr(text: str, variables: Iterable[str] | None = None) -> LinearExpr:
    """Parse an expression string into a canonical :class:`LinearExpr`.

    ``variables`` names the decision variables; every other plain name is a
    parameter. Without it, variables are inferred from term positions.
    """
    node = parse_ast(text)
    pred = None if variables is None else set(variables).__contains__
    return linearize(node, pred, text)
