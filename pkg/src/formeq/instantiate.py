"""Bind instance data to a formulation and flatten it into matrix form."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from .expr import IndexRef, LinearExpr, ParamRef, format_number, to_fraction
from .model import Formulation

__all__ = [
    "InstanceError",
    "InstanceData",
    "Row",
    "ConcreteModel",
    "Assignment",
    "instantiate",
    "evaluate",
    "expand",
    "load_instance",
    "instance_to_dict",
]


class InstanceError(ValueError):
    """Missing data, shape mismatch or an index outside its set."""


Column = tuple[str, tuple[str, ...]]


@dataclass(frozen=True)
class InstanceData:
    """Set contents (ordered labels) and exact parameter values.

    Parameter values are stored as ``{label tuple: Fraction}``; a scalar
    parameter has the single key ``()``.
    """

    sets: Mapping[str, tuple[str, ...]]
    parameters: Mapping[str, Mapping[tuple[str, ...], Fraction]]

    @classmethod
    def from_dict(
        cls,
        doc: Mapping[str, Any],
        formulation: Formulation | None = None,
        shapes: Mapping[str, Sequence[str]] | None = None,
    ) -> "InstanceData":
        """Nested arrays are aligned with set order when a parameter's shape is known."""
        known = dict(shapes or {})
        if formulation is not None:
            known.update({n: p.shape for n, p in formulation.parameters.items()})
        sets = {n: tuple(str(x) for x in members) for n, members in doc.get("sets", {}).items()}
        params: dict[str, dict] = {}
        for name, value in doc.get("parameters", {}).items():
            shape = known.get(name)
            params[name] = _flatten(name, value, shape, sets)
        return cls(sets, params)

    def merged(self, other: "InstanceData") -> "InstanceData":
        for n in set(self.sets) & set(other.sets):
            if self.sets[n] != other.sets[n]:
                raise InstanceError(f"conflicting contents for set {n!r}")
        for n in set(self.parameters) & set(other.parameters):
            if self.parameters[n] != other.parameters[n]:
                raise InstanceError(f"conflicting values for parameter {n!r}")
        return InstanceData({**self.sets, **other.sets}, {**self.parameters, **other.parameters})

    def renamed(self, names: Mapping[str, str]) -> "InstanceData":
        return InstanceData(
            {names.get(k, k): v for k, v in self.sets.items()},
            {names.get(k, k): v for k, v in self.parameters.items()},
        )

    def restricted(self, f: Formulation) -> "InstanceData":
        return InstanceData(
            {k: v for k, v in self.sets.items() if k in f.sets},
            {k: v for k, v in self.parameters.items() if k in f.parameters},
        )

    def value(self, ref_name: str, labels: tuple[str, ...]) -> Fraction:
        try:
            table = self.parameters[ref_name]
        except KeyError:
            raise InstanceError(f"missing value for parameter {ref_name!r}") from None
        try:
            return table[labels]
        except KeyError:
            raise InstanceError(f"parameter {ref_name!r} has no entry at {list(labels)}") from None


def _flatten(name, value, shape, sets) -> dict[tuple[str, ...], Fraction]:
    out: dict[tuple[str, ...], Fraction] = {}

    def walk(v, prefix: tuple, depth: int):
        if isinstance(v, list):
            if shape is not None:
                if depth >= len(shape):
                    raise InstanceError(f"parameter {name!r} has too many dimensions")
                members = sets.get(shape[depth])
                if members is None:
                    raise InstanceError(f"parameter {name!r} is indexed by unknown set {shape[depth]!r}")
                if len(members) != len(v):
                    raise InstanceError(
                        f"parameter {name!r} dimension {depth} has {len(v)} entries, set {shape[depth]!r} has {len(members)}"
                    )
                labels = members
            else:
                labels = [str(k) for k in range(len(v))]
            for lab, item in zip(labels, v):
                walk(item, prefix + (lab,), depth + 1)
        elif isinstance(v, dict):
            for lab, item in v.items():
                walk(item, prefix + (str(lab),), depth + 1)
        else:
            if shape is not None and depth != len(shape):
                raise InstanceError(f"parameter {name!r} expects {len(shape)} dimensions, got {depth}")
            out[prefix] = to_fraction(v)

    walk(value, (), 0)
    return out


def load_instance(text: str, formulation: Formulation | None = None) -> InstanceData:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from None
    return InstanceData.from_dict(doc, formulation)


def instance_to_dict(d: InstanceData, formulations: Sequence[Formulation] = ()) -> dict:
    """JSON document for instance data; arrays nest in set order when shapes are known."""
    shapes: dict[str, tuple[str, ...]] = {}
    for f in formulations:
        for n, p in f.parameters.items():
            shapes[n] = p.shape
    params: dict[str, Any] = {}
    for name, table in d.parameters.items():
        shape = shapes.get(name)
        if shape is None:
            shape = ()
            if () not in table:
                raise InstanceError(f"cannot serialize indexed parameter {name!r} without its shape")
        params[name] = _nest(table, shape, d.sets, ())
    return {"sets": {k: list(v) for k, v in d.sets.items()}, "parameters": params}


def _nest(table, shape, sets, prefix):
    if not shape:
        q = table[prefix]
        if q.denominator == 1:
            return q.numerator
        text = format_number(q)
        return text if "/" in text else float(text)
    return [_nest(table, shape[1:], sets, prefix + (lab,)) for lab in sets[shape[0]]]


# ---------------------------------------------------------------------------
# concrete model


@dataclass(frozen=True)
class Row:
    coefs: tuple[tuple[int, Fraction], ...]
    relation: str
    rhs: Fraction
    origin: str


@dataclass(frozen=True)
class ConcreteModel:
    """Fully instantiated MILP ``min/max c.x + offset s.t. A x (rel) b, l <= x <= u``.

    All numbers are exact rationals; ``None`` bounds are infinite.
    """

    columns: tuple[Column, ...]
    sense: str
    objective: tuple[Fraction, ...]
    objective_offset: Fraction
    rows: tuple[Row, ...]
    lower: tuple[Fraction | None, ...]
    upper: tuple[Fraction | None, ...]
    integer: tuple[bool, ...]

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_index(self) -> dict[Column, int]:
        return {c: k for k, c in enumerate(self.columns)}

    def dense(self):
        """Float arrays ``(A, rel, b, c, lower, upper, integer)``."""
        A = np.zeros((self.n_rows, self.n_cols))
        for i, r in enumerate(self.rows):
            for j, q in r.coefs:
                A[i, j] = float(q)
        b = np.array([float(r.rhs) for r in self.rows])
        rel = [r.relation for r in self.rows]
        c = np.array([float(q) for q in self.objective])
        lo = np.array([-np.inf if q is None else float(q) for q in self.lower])
        hi = np.array([np.inf if q is None else float(q) for q in self.upper])
        return A, rel, b, c, lo, hi, np.array(self.integer, dtype=bool)

    def objective_value(self, values: Sequence) -> Fraction | float:
        total = self.objective_offset
        for q, v in zip(self.objective, values):
            if q:
                total = total + q * v
        return total

    def permuted(self, col_order: Sequence[int], row_order: Sequence[int]) -> "ConcreteModel":
        """Same model with columns and rows reordered (``new[k] = old[order[k]]``)."""
        inv = {old: new for new, old in enumerate(col_order)}
        rows = []
        for k in row_order:
            r = self.rows[k]
            rows.append(Row(tuple(sorted((inv[j], q) for j, q in r.coefs)), r.relation, r.rhs, r.origin))
        return ConcreteModel(
            columns=tuple(self.columns[j] for j in col_order),
            sense=self.sense,
            objective=tuple(self.objective[j] for j in col_order),
            objective_offset=self.objective_offset,
            rows=tuple(rows),
            lower=tuple(self.lower[j] for j in col_order),
            upper=tuple(self.upper[j] for j in col_order),
            integer=tuple(self.integer[j] for j in col_order),
        )


@dataclass(frozen=True)
class Assignment:
    """Values aligned with a model's column order."""

    columns: tuple[Column, ...]
    values: tuple

    def __post_init__(self):
        if len(self.columns) != len(self.values):
            raise ValueError("assignment length does not match its columns")

    def as_dict(self) -> dict[Column, Any]:
        return dict(zip(self.columns, self.values))

    def __len__(self) -> int:
        return len(self.values)


def _resolve_index(index: tuple[IndexRef, ...], binding: Mapping[str, str]) -> tuple[str, ...]:
    out = []
    for i in index:
        if i.kind == "bound":
            try:
                out.append(binding[i.value])
            except KeyError:
                raise InstanceError(f"unbound index {i.value!r}") from None
        else:
            out.append(i.value)
    return tuple(out)


def expand(
    e: LinearExpr,
    data: InstanceData,
    binding: Mapping[str, str],
    shapes: Mapping[str, tuple[str, ...]] | None = None,
) -> tuple[dict[Column, Fraction], Fraction]:
    """Fully expand ``e`` into ``({column: coefficient}, constant)``.

    ``shapes`` maps variable names to their index sets and enables the
    index-membership check.
    """
    coefs: dict[Column, Fraction] = {}
    const = Fraction(0)

    def pval(r: ParamRef, b) -> Fraction:
        return data.value(r.name, _resolve_index(r.index, b))

    def walk(x: LinearExpr, b: Mapping[str, str]):
        nonlocal const
        for v, c in x.terms:
            labels = _resolve_index(v.index, b)
            if shapes is not None:
                shape = shapes[v.name]
                for lab, s in zip(labels, shape):
                    if lab not in data.sets[s]:
                        raise InstanceError(f"index {lab!r} of {v.name!r} is not in set {s!r}")
            k = c.evaluate(lambda r: pval(r, b))
            if k:
                col = (v.name, labels)
                coefs[col] = coefs.get(col, 0) + k
        const += x.constant.evaluate(lambda r: pval(r, b))
        for idx, s, body in x.sums:
            try:
                members = data.sets[s]
            except KeyError:
                raise InstanceError(f"missing contents for set {s!r}") from None
            for m in members:
                walk(body, {**b, idx: m})

    walk(e, binding)
    return {k: v for k, v in coefs.items() if v}, const


def evaluate(e: LinearExpr, data: InstanceData, binding: Mapping[str, str], x: Assignment):
    """Value of ``e`` at assignment ``x``; exact when ``x`` holds rationals."""
    coefs, const = expand(e, data, binding)
    values = x.as_dict()
    total = const
    for col, q in coefs.items():
        try:
            total = total + q * values[col]
        except KeyError:
            raise InstanceError(f"assignment has no value for {col[0]}{list(col[1])}") from None
    return total


def _check_data(f: Formulation, d: InstanceData) -> None:
    for s in f.sets:
        if s not in d.sets:
            raise InstanceError(f"missing contents for set {s!r}")
    for name, p in f.parameters.items():
        table = d.parameters.get(name)
        if table is None:
            raise InstanceError(f"missing value for parameter {name!r}")
        expected = 1
        for s in p.shape:
            expected *= len(d.sets[s])
        if len(table) != expected or any(len(k) != len(p.shape) for k in table):
            raise InstanceError(f"parameter {name!r} does not match shape {list(p.shape)}")


def instantiate(f: Formulation, d: InstanceData) -> ConcreteModel:
    """Flatten ``f`` on ``d``.

    Columns follow declaration order, then row-major over index tuples; rows
    follow constraint order, then row-major over quantifier bindings.
    """
    _check_data(f, d)
    columns: list[Column] = []
    lower, upper, integer = [], [], []
    for name, v in f.variables.items():
        for labels in itertools.product(*(d.sets[s] for s in v.shape)):
            columns.append((name, tuple(labels)))
            lower.append(v.lower)
            upper.append(v.upper)
            integer.append(v.is_integer)
    index = {c: k for k, c in enumerate(columns)}
    shapes = {n: v.shape for n, v in f.variables.items()}

    rows: list[Row] = []
    for ci, c in enumerate(f.constraints):
        names = [i for i, _ in c.quantifiers]
        for labels in itertools.product(*(d.sets[s] for _, s in c.quantifiers)):
            binding = dict(zip(names, labels))
            coefs, const = expand(c.lhs - c.rhs, d, binding, shapes)
            row = tuple(sorted((index[col], q) for col, q in coefs.items()))
            tag = f"c{ci}" + (f"[{','.join(f'{n}={lab}' for n, lab in binding.items())}]" if binding else "")
            rows.append(Row(row, c.relation, -const, tag))

    coefs, offset = expand(f.objective.expr, d, {}, shapes)
    obj = [Fraction(0)] * len(columns)
    for col, q in coefs.items():
        obj[index[col]] = q
    return ConcreteModel(
        columns=tuple(columns),
        sense=f.objective.sense,
        objective=tuple(obj),
        objective_offset=offset,
        rows=tuple(rows),
        lower=tuple(lower),
        upper=tuple(upper),
        integer=tuple(integer),
    )
