"""Symbolic formulation data model and its JSON form.

A :class:`Formulation` mirrors the NLP4LP-style JSON document: parameters,
index sets, variable declarations, constraints (optionally quantified) and an
objective. Expressions are stored parsed, as canonical
:class:`~formeq.expr.LinearExpr` objects.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Mapping

import jsonschema

from .expr import (
    RELATIONS,
    RESERVED,
    ExpressionError,
    LinearExpr,
    canonicalize,
    format_number,
    linearize,
    parse_ast,
    parse_relation,
    to_fraction,
)

__all__ = [
    "FormulationError",
    "ParameterDecl",
    "SetDecl",
    "VariableDecl",
    "ConstraintDecl",
    "ObjectiveDecl",
    "Formulation",
    "FORMULATION_SCHEMA",
    "load_formulation",
    "serialize_formulation",
    "formulation_from_dict",
    "formulation_to_dict",
    "declaration_key",
]

VAR_TYPES = ("continuous", "integer", "binary")


class FormulationError(ValueError):
    """Schema violation, unresolved identifier or namespace clash."""


@dataclass(frozen=True)
class ParameterDecl:
    description: str = ""
    shape: tuple[str, ...] = ()


@dataclass(frozen=True)
class SetDecl:
    description: str = ""


@dataclass(frozen=True)
class VariableDecl:
    """A (possibly set-indexed) decision variable.

    ``lower``/``upper`` of ``None`` mean unbounded on that side.
    """

    description: str = ""
    var_type: str = "continuous"
    shape: tuple[str, ...] = ()
    lower: Fraction | None = Fraction(0)
    upper: Fraction | None = None

    @property
    def is_integer(self) -> bool:
        return self.var_type in ("integer", "binary")


@dataclass(frozen=True)
class ConstraintDecl:
    description: str
    quantifiers: tuple[tuple[str, str], ...]
    lhs: LinearExpr
    relation: str
    rhs: LinearExpr
    code: Mapping[str, Any] | None = None
    source: str | None = field(default=None, compare=False)

    def render(self) -> str:
        return f"{self.lhs.render()} {self.relation} {self.rhs.render()}"

    def display(self) -> str:
        """Original formulation text while it still means this constraint, else :meth:`render`."""
        if self.source is not None:
            names = self.variable_names()
            try:
                lhs, rel, rhs = parse_relation(self.source)
                same = (
                    rel == self.relation
                    and canonicalize(linearize(lhs, names.__contains__)) == canonicalize(self.lhs)
                    and canonicalize(linearize(rhs, names.__contains__)) == canonicalize(self.rhs)
                )
            except ExpressionError:
                same = False
            if same:
                return self.source
        return self.render()

    def normalized(self) -> tuple[LinearExpr, str, LinearExpr]:
        """Variables left, constants right, ``>=`` flipped to ``<=``."""
        var, const = (self.lhs - self.rhs).split_constant()
        rel = self.relation
        if rel == ">=":
            var, const, rel = -var, -const, "<="
        return var, rel, -const

    def variable_names(self) -> set[str]:
        return self.lhs.variable_names() | self.rhs.variable_names()


@dataclass(frozen=True)
class ObjectiveDecl:
    description: str
    sense: str
    expr: LinearExpr
    code: Mapping[str, Any] | None = None
    source: str | None = field(default=None, compare=False)

    def display(self) -> str:
        """Objective text without its sense prefix; original text when still accurate."""
        if self.source is not None:
            names = self.expr.variable_names()
            try:
                if canonicalize(linearize(parse_ast(self.source), names.__contains__)) == canonicalize(self.expr):
                    return self.source
            except ExpressionError:
                pass
        return self.expr.render()


@dataclass(frozen=True)
class Formulation:
    """Symbolic MILP formulation.

    Dict fields keep declaration order; treat instances as immutable.
    """

    description: str
    parameters: Mapping[str, ParameterDecl]
    sets: Mapping[str, SetDecl]
    variables: Mapping[str, VariableDecl]
    constraints: tuple[ConstraintDecl, ...]
    objective: ObjectiveDecl
    keywords: tuple[str, ...] = ()

    def __post_init__(self):
        validate(self)

    @property
    def is_mip(self) -> bool:
        return any(v.is_integer for v in self.variables.values())

    def constraints_with(self, var: str) -> list[ConstraintDecl]:
        return [c for c in self.constraints if var in c.variable_names()]

    def in_objective(self, var: str) -> bool:
        return var in self.objective.expr.variable_names()

    def with_changes(self, **kw) -> "Formulation":
        return replace(self, **kw)


def declaration_key(d: ConstraintDecl | ObjectiveDecl) -> str:
    """Canonical text of one declaration, used for exact matching."""
    if isinstance(d, ObjectiveDecl):
        return f"{d.sense} {d.expr.render()}"
    var, rel, rhs = d.normalized()
    q = "".join(f"forall({i} in {s}) " for i, s in d.quantifiers)
    return f"{q}{var.render()} {rel} {rhs.render()}"


# ---------------------------------------------------------------------------
# validation


def validate(f: Formulation) -> None:
    names: dict[str, str] = {}
    for kind, table in (("parameter", f.parameters), ("set", f.sets), ("variable", f.variables)):
        for name in table:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in RESERVED:
                raise FormulationError(f"invalid {kind} name {name!r}")
            if name in names:
                raise FormulationError(f"{kind} {name!r} collides with {names[name]} of the same name")
            names[name] = kind
    for pname, p in f.parameters.items():
        for s in p.shape:
            if s not in f.sets:
                raise FormulationError(f"parameter {pname!r} shape names undeclared set {s!r}")
    for vname, v in f.variables.items():
        if v.var_type not in VAR_TYPES:
            raise FormulationError(f"variable {vname!r} has unknown type {v.var_type!r}")
        for s in v.shape:
            if s not in f.sets:
                raise FormulationError(f"variable {vname!r} shape names undeclared set {s!r}")
        if v.var_type == "binary" and (v.lower != 0 or v.upper != 1):
            raise FormulationError(f"binary variable {vname!r} must have bounds [0, 1]")
        if v.lower is not None and v.upper is not None and v.lower > v.upper:
            raise FormulationError(f"variable {vname!r} has lower > upper")
    for k, c in enumerate(f.constraints):
        if c.relation not in RELATIONS:
            raise FormulationError(f"constraint {k} has bad relation {c.relation!r}")
        scope: dict[str, str] = {}
        for idx, s in c.quantifiers:
            if idx in scope:
                raise FormulationError(f"constraint {k} repeats quantifier index {idx!r}")
            if idx in names:
                raise FormulationError(f"constraint {k} index {idx!r} shadows a {names[idx]}")
            if s not in f.sets:
                raise FormulationError(f"constraint {k} quantifies over undeclared set {s!r}")
            scope[idx] = s
        _check_expr(f, c.lhs, scope, f"constraint {k}")
        _check_expr(f, c.rhs, scope, f"constraint {k}")
    if f.objective.sense not in ("min", "max"):
        raise FormulationError(f"objective sense must be min or max, got {f.objective.sense!r}")
    _check_expr(f, f.objective.expr, {}, "objective")


def _check_expr(f: Formulation, e: LinearExpr, scope: Mapping[str, str], where: str) -> None:
    def idx_ok(index, shape, name):
        if len(index) != len(shape):
            raise FormulationError(f"{where}: {name!r} expects {len(shape)} indices, got {len(index)}")
        for i in index:
            if i.kind == "bound" and i.value not in scope:
                raise FormulationError(f"{where}: unresolved index {i.value!r} on {name!r}")

    for v, c in e.terms:
        if v.name not in f.variables:
            kind = "parameter" if v.name in f.parameters else "identifier"
            raise FormulationError(f"{where}: unresolved variable {v.name!r} ({kind})")
        idx_ok(v.index, f.variables[v.name].shape, v.name)
        for r in c.params():
            _check_param(f, r, scope, where, idx_ok)
    for r in e.constant.params():
        _check_param(f, r, scope, where, idx_ok)
    for idx, s, body in e.sums:
        if s not in f.sets:
            raise FormulationError(f"{where}: summation over undeclared set {s!r}")
        if idx in scope or idx in f.parameters or idx in f.variables or idx in f.sets:
            raise FormulationError(f"{where}: summation index {idx!r} shadows another name")
        _check_expr(f, body, {**scope, idx: s}, where)


def _check_param(f, r, scope, where, idx_ok):
    if r.name not in f.parameters:
        if r.name in f.sets:
            raise FormulationError(f"{where}: set {r.name!r} used as a value")
        raise FormulationError(f"{where}: unresolved identifier {r.name!r}")
    idx_ok(r.index, f.parameters[r.name].shape, r.name)


# ---------------------------------------------------------------------------
# JSON

_DECL = {"type": "object", "properties": {"description": {"type": "string"}}}

FORMULATION_SCHEMA: dict = {
    "type": "object",
    "required": ["variables", "objective"],
    "properties": {
        "description": {"type": "string"},
        "parametrized_description": {"type": "string"},
        "keywords": {"type": "array", "items": {"type": "string"}},
        "parameters": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "properties": {
                    "description": {"type": "string"},
                    "shape": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "sets": {"type": "object", "additionalProperties": _DECL},
        "variables": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "properties": {
                    "description": {"type": "string"},
                    "type": {"enum": list(VAR_TYPES)},
                    "shape": {"type": "array", "items": {"type": "string"}},
                    "lower": {"type": ["number", "string", "null"]},
                    "upper": {"type": ["number", "string", "null"]},
                },
            },
        },
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["formulation"],
                "properties": {
                    "description": {"type": "string"},
                    "forall": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "string"},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                    "formulation": {"type": "string"},
                    "code": {"type": "object"},
                },
            },
        },
        "objective": {
            "type": "object",
            "required": ["formulation"],
            "properties": {
                "description": {"type": "string"},
                "sense": {"enum": ["min", "max"]},
                "formulation": {"type": "string"},
                "code": {"type": "object"},
            },
        },
    },
}

_SENSE_PREFIX = re.compile(r"^\s*(minimize|maximize|min|max)\b\s*(?:\\\s|:)?\s*", re.IGNORECASE)


def _bound(spec: Mapping, key: str, default):
    if key not in spec:
        return default
    v = spec[key]
    return None if v is None else to_fraction(v)


def formulation_from_dict(doc: Mapping[str, Any]) -> Formulation:
    """Build a :class:`Formulation` from its JSON document."""
    try:
        jsonschema.validate(doc, FORMULATION_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise FormulationError(f"schema violation at {path or '<root>'}: {exc.message}") from None

    parameters = {
        n: ParameterDecl(p.get("description", ""), tuple(p.get("shape", [])))
        for n, p in doc.get("parameters", {}).items()
    }
    sets = {n: SetDecl(s.get("description", "")) for n, s in doc.get("sets", {}).items()}
    variables = {}
    for n, v in doc["variables"].items():
        vt = v.get("type", "continuous")
        if vt == "binary":
            lo, hi = _bound(v, "lower", Fraction(0)), _bound(v, "upper", Fraction(1))
        else:
            lo, hi = _bound(v, "lower", Fraction(0)), _bound(v, "upper", None)
        variables[n] = VariableDecl(v.get("description", ""), vt, tuple(v.get("shape", [])), lo, hi)
    is_var = variables.__contains__

    constraints = []
    for k, c in enumerate(doc.get("constraints", [])):
        text = c["formulation"]
        try:
            lhs, rel, rhs = parse_relation(text)
            lhs_e, rhs_e = linearize(lhs, is_var, text), linearize(rhs, is_var, text)
        except ExpressionError as exc:
            raise FormulationError(f"constraint {k}: {exc}") from exc
        quants = tuple((q[0], q[1]) for q in c.get("forall", []))
        constraints.append(ConstraintDecl(c.get("description", ""), quants, lhs_e, rel, rhs_e, c.get("code"), text))

    obj = doc["objective"]
    text = obj["formulation"]
    sense = obj.get("sense")
    m = _SENSE_PREFIX.match(text)
    if m:
        prefix_sense = "min" if m.group(1).lower().startswith("min") else "max"
        if sense is not None and sense != prefix_sense:
            raise FormulationError(f"objective sense {sense!r} contradicts formulation prefix {m.group(1)!r}")
        sense = prefix_sense
        text = text[m.end():]
    if sense is None:
        raise FormulationError("objective sense missing")
    try:
        expr = linearize(parse_ast(text), is_var, text)
    except ExpressionError as exc:
        raise FormulationError(f"objective: {exc}") from exc

    description = doc.get("description", doc.get("parametrized_description", ""))
    return Formulation(
        description=description,
        parameters=parameters,
        sets=sets,
        variables=variables,
        constraints=tuple(constraints),
        objective=ObjectiveDecl(obj.get("description", ""), sense, expr, obj.get("code"), text),
        keywords=tuple(doc.get("keywords", ())),
    )


def _num(q: Fraction | None):
    if q is None:
        return None
    if q.denominator == 1:
        return q.numerator
    text = format_number(q)
    return text if "/" in text else float(text)


def formulation_to_dict(f: Formulation) -> dict[str, Any]:
    doc: dict[str, Any] = {"description": f.description}
    if f.keywords:
        doc["keywords"] = list(f.keywords)
    doc["parameters"] = {n: {"description": p.description, "shape": list(p.shape)} for n, p in f.parameters.items()}
    doc["sets"] = {n: {"description": s.description} for n, s in f.sets.items()}
    doc["variables"] = {
        n: {
            "description": v.description,
            "type": v.var_type,
            "shape": list(v.shape),
            "lower": _num(v.lower),
            "upper": _num(v.upper),
        }
        for n, v in f.variables.items()
    }
    cons = []
    for c in f.constraints:
        item: dict[str, Any] = {"description": c.description}
        if c.quantifiers:
            item["forall"] = [list(q) for q in c.quantifiers]
        item["formulation"] = c.render()
        if c.code is not None:
            item["code"] = dict(c.code)
        cons.append(item)
    doc["constraints"] = cons
    obj: dict[str, Any] = {
        "description": f.objective.description,
        "sense": f.objective.sense,
        "formulation": f.objective.expr.render(),
    }
    if f.objective.code is not None:
        obj["code"] = dict(f.objective.code)
    doc["objective"] = obj
    return doc


def load_formulation(text: str) -> Formulation:
    """Parse a formulation JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormulationError(f"invalid JSON: {exc}") from None
    return formulation_from_dict(doc)


def serialize_formulation(f: Formulation, indent: int | None = 2) -> str:
    return json.dumps(formulation_to_dict(f), indent=indent, ensure_ascii=False)


def rename_formulation(f: Formulation, names: Mapping[str, str], descriptions: Mapping[str, str] | None = None) -> Formulation:
    """Rename parameters, sets, variables and indices everywhere.

    Whole-word occurrences of old names inside descriptions are rewritten too.
    """
    if not names:
        return f
    pattern = re.compile(r"\b(" + "|".join(re.escape(n) for n in sorted(names, key=len, reverse=True)) + r")\b")

    def text(s: str) -> str:
        return pattern.sub(lambda m: names[m.group(1)], s)

    def r(n: str) -> str:
        return names.get(n, n)

    return Formulation(
        description=text(f.description),
        parameters={r(n): ParameterDecl(text(p.description), tuple(r(s) for s in p.shape)) for n, p in f.parameters.items()},
        sets={r(n): SetDecl(text(s.description)) for n, s in f.sets.items()},
        variables={
            r(n): replace(v, description=text(v.description), shape=tuple(r(s) for s in v.shape))
            for n, v in f.variables.items()
        },
        constraints=tuple(
            replace(
                c,
                description=text(c.description),
                quantifiers=tuple((r(i), r(s)) for i, s in c.quantifiers),
                lhs=c.lhs.rename(names),
                rhs=c.rhs.rename(names),
                code=None,
                source=None,
            )
            for c in f.constraints
        ),
        objective=replace(f.objective, description=text(f.objective.description), expr=f.objective.expr.rename(names), code=None, source=None),
        keywords=f.keywords,
    )


def canonical_expr(text: str, variables: Iterable[str]) -> LinearExpr:
    return canonicalize(linearize(parse_ast(text), set(variables).__contains__, text))
