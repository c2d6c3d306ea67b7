"""Linear variable mappings from alpha' to alpha and the offline finders.

A :class:`Mapping` assigns each alpha variable (by declaration name) a list
of ``(constant, alpha' variable)`` terms. Set-indexed variables map index by
index in row-major order; a scalar alpha' variable broadcasts.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping as TMapping, Sequence

from .expr import format_number, to_fraction
from .instantiate import Assignment, ConcreteModel
from .model import Formulation

__all__ = [
    "MappingError",
    "MappingIncompleteError",
    "MappingResolutionError",
    "Mapping",
    "FinderConfig",
    "DEFAULT_POOL",
    "parse_mapping_json",
    "mapping_to_json",
    "apply_mapping",
    "identity_mapping",
    "heuristic_finder",
    "brute_force_finder",
]


class MappingError(ValueError):
    pass


class MappingIncompleteError(MappingError):
    pass


class MappingResolutionError(MappingError):
    pass


Term = tuple[Fraction, str]


@dataclass(frozen=True)
class Mapping:
    """``entries[v]`` is a tuple of terms, or ``None`` for an explicit no-map."""

    entries: TMapping[str, tuple[Term, ...] | None]

    def __post_init__(self):
        for v, terms in self.entries.items():
            if terms is None:
                continue
            names = [w for _, w in terms]
            if len(set(names)) != len(names):
                raise MappingError(f"entry for {v!r} repeats a variable")

    def __eq__(self, other):
        if not isinstance(other, Mapping):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash(tuple(sorted(self.entries.items(), key=lambda kv: kv[0])))

    def merged(self, other: "Mapping") -> "Mapping":
        return Mapping({**self.entries, **other.entries})

    def render(self) -> str:
        parts = []
        for v, terms in self.entries.items():
            if terms is None:
                parts.append(f"{v} = none")
            else:
                rhs = ""
                for k, w in terms:
                    sign = "-" if k < 0 else "+"
                    term = f"{format_number(abs(k))}*{w}"
                    rhs = (f"-{term}" if sign == "-" else term) if not rhs else f"{rhs} {sign} {term}"
                parts.append(f"{v} = {rhs or '0'}")
        return "; ".join(parts)

    def to_dict(self) -> dict:
        out = {}
        for v, terms in self.entries.items():
            if terms is None:
                out[v] = [{"constant": "none", "variable": "none"}]
            else:
                out[v] = [{"constant": _json_number(k), "variable": w} for k, w in terms]
        return out


def _json_number(q: Fraction):
    if q.denominator == 1:
        return q.numerator
    text = format_number(q)
    if "/" in text:
        return text
    return float(text)


def mapping_to_json(m: Mapping, indent: int | None = 2) -> str:
    return json.dumps(m.to_dict(), indent=indent)


def identity_mapping(names: Iterable[str], rename: TMapping[str, str] | None = None) -> Mapping:
    rename = rename or {}
    return Mapping({v: ((Fraction(1), rename.get(v, v)),) for v in names})


_FENCE = re.compile(r"^\s*```(?:json)?\s*(.*?)\s*```\s*$", re.DOTALL)


def parse_mapping_json(text: str) -> Mapping:
    """Parse the JSON object returned for one or more alpha variables.

    Constants may be numbers, numeric strings (``"1/60"``) or the ``"none"``
    sentinel; a sentinel term makes the whole entry a no-map.
    """
    m = _FENCE.match(text)
    if m:
        text = m.group(1)
    try:
        doc = json.loads(text, parse_float=Fraction, parse_int=Fraction)
    except json.JSONDecodeError:
        start, end = text.find("{"), text.rfind("}")
        if start < 0 or end <= start:
            raise MappingError("response is not a JSON object") from None
        try:
            doc = json.loads(text[start : end + 1], parse_float=Fraction, parse_int=Fraction)
        except json.JSONDecodeError as exc:
            raise MappingError(f"malformed mapping JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MappingError("mapping JSON must be an object")
    entries: dict[str, tuple[Term, ...] | None] = {}
    for v, items in doc.items():
        if not isinstance(items, list):
            raise MappingError(f"entry for {v!r} must be a list")
        terms: list[Term] = []
        sentinel = False
        for it in items:
            if not isinstance(it, dict) or "constant" not in it or "variable" not in it:
                raise MappingError(f"entry for {v!r} needs objects with 'constant' and 'variable'")
            k, w = it["constant"], it["variable"]
            if isinstance(k, str) and k.strip().lower() == "none":
                sentinel = True
                continue
            if isinstance(k, bool) or not isinstance(k, (Fraction, str)):
                raise MappingError(f"non-numeric constant {k!r} for {v!r}")
            try:
                k = to_fraction(k)
            except (ValueError, ZeroDivisionError):
                raise MappingError(f"non-numeric constant {k!r} for {v!r}") from None
            if not isinstance(w, str) or not w:
                raise MappingError(f"variable name for {v!r} must be a string")
            terms.append((k, w))
        entries[v] = None if sentinel else tuple(terms)
    return Mapping(entries)


# ---------------------------------------------------------------------------
# application


def _groups(m: ConcreteModel) -> dict[str, list[int]]:
    out: dict[str, list[int]] = {}
    for j, (name, _) in enumerate(m.columns):
        out.setdefault(name, []).append(j)
    return out


def _exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    q = Fraction(v).limit_denominator(10**6)
    if abs(float(q) - v) <= 1e-9 * max(1.0, abs(v)):
        return q
    return Fraction(v)


def apply_mapping(f: Mapping, alpha: ConcreteModel, alpha_prime: ConcreteModel, x_prime: Assignment) -> Assignment:
    """Map an assignment of alpha' to an assignment of alpha (exact rationals)."""
    if len(x_prime) != alpha_prime.n_cols:
        raise MappingError("alpha' assignment does not match its model")
    ga, gp = _groups(alpha), _groups(alpha_prime)
    xp = [_exact(v) for v in x_prime.values]
    values: list[Fraction] = [Fraction(0)] * alpha.n_cols
    for v, cols in ga.items():
        if v not in f.entries:
            raise MappingIncompleteError(f"no mapping for alpha variable {v!r}")
        terms = f.entries[v]
        if terms is None:
            raise MappingIncompleteError(f"alpha variable {v!r} is explicitly unmapped")
        for k, w in terms:
            if w not in gp:
                raise MappingResolutionError(f"unknown alpha' variable {w!r} in mapping for {v!r}")
            wcols = gp[w]
            if len(wcols) == 1 and alpha_prime.columns[wcols[0]][1] == ():
                for j in cols:
                    values[j] += k * xp[wcols[0]]
            elif len(wcols) == len(cols):
                for j, jp in zip(cols, wcols):
                    values[j] += k * xp[jp]
            else:
                raise MappingError(
                    f"{v!r} has {len(cols)} entries but alpha' variable {w!r} has {len(wcols)}"
                )
    return Assignment(alpha.columns, tuple(values))


# ---------------------------------------------------------------------------
# finders


def _default_pool() -> tuple[Fraction, ...]:
    pool = [1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2, Fraction(1, 10), 10, Fraction(1, 60), 60, Fraction(1, 100), 100]
    for i in range(-6, 7):
        pool.append(Fraction(10) ** i)
    out: list[Fraction] = []
    for q in pool:
        q = Fraction(q)
        if q not in out:
            out.append(q)
    return tuple(out)


DEFAULT_POOL = _default_pool()
TEMPLATES = ("identity", "scale", "digit-expansion", "plus-minus-split")


@dataclass(frozen=True)
class FinderConfig:
    coefficient_pool: tuple[Fraction, ...] = DEFAULT_POOL
    max_terms: int = 8
    templates_enabled: frozenset = frozenset(TEMPLATES)
    general_terms: int = 2
    max_assemblies: int = 2000
    per_variable_limit: int = 30
    max_hits: int = 6

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.coefficient_pool:
            raise ValueError("coefficient pool must be nonempty")


def _signature(f: Formulation, v: str) -> tuple:
    d = f.variables[v]
    return (d.var_type == "continuous", len(d.shape))


def _appearance(f: Formulation, v: str) -> tuple:
    return (len(f.constraints_with(v)), f.in_objective(v))


def heuristic_finder(alpha: Formulation, alpha_prime: Formulation, limit: int = 64) -> list[Mapping]:
    """Name- and structure-based candidate mappings (never verified here).

    Order: exact-name identity; unique type/shape matches; then injective
    type/shape-compatible matches ranked by how closely each pair's
    constraint/objective appearance pattern agrees.
    """
    out: list[Mapping] = []
    avars, pvars = list(alpha.variables), list(alpha_prime.variables)

    if all(v in alpha_prime.variables and _signature(alpha, v) == _signature(alpha_prime, v) for v in avars):
        out.append(identity_mapping(avars))

    options: dict[str, list[str]] = {}
    for v in avars:
        sig = _signature(alpha, v)
        options[v] = [w for w in pvars if _signature(alpha_prime, w) == sig]
        if not options[v]:
            return out

    def dist(v, w):
        a, b = _appearance(alpha, v), _appearance(alpha_prime, w)
        return abs(a[0] - b[0]) + (a[1] != b[1])

    ranked = {v: sorted(ws, key=lambda w: (dist(v, w), pvars.index(w))) for v, ws in options.items()}
    combos = []
    for choice in itertools.islice(itertools.product(*(ranked[v] for v in avars)), 20000):
        if len(set(choice)) != len(choice):
            continue
        score = sum(dist(v, w) for v, w in zip(avars, choice))
        combos.append((score, len(combos), choice))
    combos.sort()
    for _, _, choice in combos:
        m = Mapping({v: ((Fraction(1), w),) for v, w in zip(avars, choice)})
        if m not in out:
            out.append(m)
        if len(out) >= limit:
            break
    return out


_STEM = re.compile(r"^(.*)_(\d+)$")


def _digit_groups(names: Sequence[str], max_terms: int) -> list[list[str]]:
    groups: dict[str, dict[int, str]] = {}
    for n in names:
        m = _STEM.match(n)
        if m:
            groups.setdefault(m.group(1), {})[int(m.group(2))] = n
    out = []
    for stem in sorted(groups, key=lambda s: names.index(next(iter(groups[s].values())))):
        digits = groups[stem]
        k = len(digits)
        if k >= 2 and k <= max_terms and set(digits) == set(range(k)):
            out.append([digits[i] for i in range(k)])
    return out


def _candidates(n_v: int, gp: dict, pm: ConcreteModel, cfg: FinderConfig) -> Iterator[tuple[Term, ...]]:
    compat = [w for w, cols in gp.items() if len(cols) == n_v or (len(cols) == 1 and pm.columns[cols[0]][1] == ())]
    pool = cfg.coefficient_pool
    tmpl = cfg.templates_enabled
    if "identity" in tmpl:
        for w in compat:
            yield ((Fraction(1), w),)
    if "digit-expansion" in tmpl:
        for group in _digit_groups(compat, cfg.max_terms):
            yield tuple((Fraction(10) ** i, w) for i, w in enumerate(group))
    if "plus-minus-split" in tmpl and cfg.max_terms >= 2:
        for w1, w2 in itertools.permutations(compat, 2):
            yield ((Fraction(1), w1), (Fraction(-1), w2))
    if "scale" in tmpl:
        for k in pool:
            for w in compat:
                yield ((k, w),)
    if min(cfg.general_terms, cfg.max_terms) >= 2:
        for w1, w2 in itertools.combinations(compat, 2):
            for k1 in pool:
                for k2 in pool:
                    yield ((k1, w1), (k2, w2))


def _value(terms, n_v: int, gp: dict, xp) -> tuple:
    out = [Fraction(0)] * n_v
    for k, w in terms:
        cols = gp[w]
        if len(cols) == 1 and n_v != 1:
            out = [o + k * xp[cols[0]] for o in out]
        else:
            out = [o + k * xp[j] for o, j in zip(out, cols)]
    return tuple(out)


def brute_force_finder(
    alpha: Formulation,
    alpha_prime: Formulation,
    instance=None,
    cfg: FinderConfig | None = None,
    verifier=None,
) -> Mapping | None:
    """Enumerate per-variable linear combinations and return the first verified mapping.

    Candidates for each alpha variable, in order: single variables, base-10
    digit groups (``stem_0, stem_1, ...``), ``w1 - w2`` splits, scaled
    single variables, then two-term pool combinations. Candidates whose
    value at the alpha' optimum reproduces alpha's own optimum are assembled
    first; a capped lexicographic search over distinct-valued candidates
    follows.
    """
    from .verify import PairContext

    cfg = cfg or FinderConfig()
    if verifier is None:
        if instance is None:
            raise ValueError("brute_force_finder needs an instance or a verifier")
        verifier = PairContext(alpha, alpha_prime, instance).verifier
    ctx = verifier.ctx
    if ctx.gate() is not None:
        return None
    am, pm = ctx.alpha_model, ctx.alpha_prime_model
    xp = [_exact(v) for v in ctx.alpha_prime_outcome.assignment.values]
    xs = ctx.alpha_outcome.assignment.values
    ga, gp = _groups(am), _groups(pm)
    avars = [v for v in alpha.variables if v in ga]

    hits: dict[str, list[tuple[Term, ...]]] = {}
    per_var: dict[str, list[tuple[Term, ...]]] = {}
    for v in avars:
        n_v = len(ga[v])
        target = [float(xs[j]) for j in ga[v]]
        seen: set = set()
        found: list[tuple[Term, ...]] = []
        others: list[tuple[Term, ...]] = []
        for terms in _candidates(n_v, gp, pm, cfg):
            val = _value(terms, n_v, gp, xp)
            key = tuple(round(float(q), 9) for q in val)
            if key in seen:
                continue
            seen.add(key)
            if all(abs(float(a) - b) <= 1e-6 for a, b in zip(val, target)):
                if len(found) < cfg.max_hits:
                    found.append(terms)
            elif len(others) < cfg.per_variable_limit:
                others.append(terms)
            if len(found) >= cfg.max_hits and len(others) >= cfg.per_variable_limit:
                break
        hits[v] = found
        per_var[v] = found + others
        if not per_var[v]:
            return None

    def accept(choice) -> Mapping | None:
        m = Mapping(dict(zip(avars, choice)))
        if verifier.verify(m).ok:
            # soundness: never hand back an unverified mapping
            assert verifier.verify(m).ok, "verified mapping failed re-verification"
            return m
        return None

    budget = cfg.max_assemblies
    if all(hits[v] for v in avars):
        for choice in itertools.islice(itertools.product(*(hits[v] for v in avars)), budget):
            budget -= 1
            m = accept(choice)
            if m is not None:
                return m
    for choice in itertools.islice(itertools.product(*(per_var[v] for v in avars)), max(budget, 0)):
        m = accept(choice)
        if m is not None:
            return m
    return None
