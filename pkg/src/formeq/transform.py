"""Labeled formulation pairs: the nine transformations, obfuscation and dataset I/O.

Each record pairs a corpus formulation ``alpha`` with a transformed,
obfuscated ``alpha_prime`` on shared instance data. Equivalent kinds carry
a ground-truth mapping from alpha' variables to alpha variables; every such
mapping is verified before a record is written.
"""
from __future__ import annotations

import enum
import hashlib
import json
import logging
import random
import re
import string
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .expr import RESERVED, IndexRef, LinearExpr, format_number
from .instantiate import InstanceData, instance_to_dict, instantiate, load_instance
from .mapping import FinderConfig, Mapping, brute_force_finder, identity_mapping, parse_mapping_json
from .model import (
    ConstraintDecl,
    Formulation,
    ObjectiveDecl,
    VariableDecl,
    load_formulation,
    rename_formulation,
    serialize_formulation,
)
from .solver import SolveOutcome, objective_tolerance, solve
from .verify import PairContext

__all__ = [
    "TransformKind",
    "TransformSkip",
    "CorpusEntry",
    "DatasetRecord",
    "Obfuscation",
    "obfuscate",
    "obfuscate_detailed",
    "transform",
    "load_corpus",
    "bundled_corpus_path",
    "build_dataset",
    "generate_dataset",
    "load_dataset",
]

log = logging.getLogger(__name__)


class TransformKind(str, enum.Enum):
    SUBSTITUTE_OBJECTIVE = "substitute_objective"
    ADD_SLACK = "add_slack"
    BASE10 = "base10"
    VALID_INEQUALITIES = "valid_inequalities"
    RESCALE = "rescale"
    PLUS_MINUS_SPLIT = "plus_minus_split"
    RANDOM_ORDER = "random_order"
    LOOSE_CONSTRAINTS = "loose_constraints"
    FEASIBILITY = "feasibility"

    @property
    def equivalent(self) -> bool:
        return self in EQUIVALENT_KINDS

    @property
    def title(self) -> str:
        return _TITLES[self]

    @classmethod
    def parse(cls, text: str) -> "TransformKind":
        # "plus_minus_split", "plus-minus-split" and "PlusMinusSplit" all work
        key = re.sub(r"[-_\s]", "", text).lower()
        for k in cls:
            if key == k.value.replace("_", ""):
                return k
        raise ValueError(f"unknown transformation kind {text!r}")


EQUIVALENT_KINDS = (
    TransformKind.SUBSTITUTE_OBJECTIVE,
    TransformKind.ADD_SLACK,
    TransformKind.BASE10,
    TransformKind.VALID_INEQUALITIES,
    TransformKind.RESCALE,
    TransformKind.PLUS_MINUS_SPLIT,
)
NONEQUIVALENT_KINDS = (TransformKind.RANDOM_ORDER, TransformKind.LOOSE_CONSTRAINTS, TransformKind.FEASIBILITY)

_TITLES = {
    TransformKind.SUBSTITUTE_OBJECTIVE: "Substitute Objective Functions",
    TransformKind.ADD_SLACK: "Add Slack Variables",
    TransformKind.BASE10: "Replace by Base-10 Representation",
    TransformKind.VALID_INEQUALITIES: "Add Valid Inequalities",
    TransformKind.RESCALE: "Rescaling",
    TransformKind.PLUS_MINUS_SPLIT: "Replace by Linear Combinations",
    TransformKind.RANDOM_ORDER: "Random Order",
    TransformKind.LOOSE_CONSTRAINTS: "Loose Constraints",
    TransformKind.FEASIBILITY: "Feasibility",
}

RESCALE_FACTORS = (10, 60, 100, 1000)
COMBINATION_WEIGHTS = (Fraction(1, 2), Fraction(1), Fraction(2))


class TransformSkip(Exception):
    """The transformation does not apply to this instance."""


# ---------------------------------------------------------------------------
# corpus


@dataclass
class CorpusEntry:
    name: str
    formulation: Formulation
    instance: InstanceData
    _outcome: SolveOutcome | None = field(default=None, repr=False)

    @property
    def outcome(self) -> SolveOutcome:
        if self._outcome is None:
            self._outcome = solve(instantiate(self.formulation, self.instance))
        return self._outcome


def bundled_corpus_path() -> Path:
    return Path(str(resources.files("formeq").joinpath("data", "corpus")))


def load_corpus(path: str | Path | None = None) -> list[CorpusEntry]:
    """Entries from ``<path>/<name>/{formulation.json, instance.json}``, sorted by name."""
    root = Path(path) if path is not None else bundled_corpus_path()
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory {root} does not exist")
    out = []
    for d in sorted(p for p in root.iterdir() if p.is_dir()):
        fp, ip = d / "formulation.json", d / "instance.json"
        if not fp.exists() or not ip.exists():
            continue
        f = load_formulation(fp.read_text(encoding="utf-8"))
        out.append(CorpusEntry(d.name, f, load_instance(ip.read_text(encoding="utf-8"), f)))
    return out


# ---------------------------------------------------------------------------
# naming helpers


def _index_names(e: LinearExpr) -> set[str]:
    out = set()
    for v in e.var_refs():
        out.update(i.value for i in v.index if i.kind == "bound")
    for r in e.param_refs():
        out.update(i.value for i in r.index if i.kind == "bound")
    stack = list(e.sums)
    while stack:
        i, _, b = stack.pop()
        out.add(i)
        stack.extend(b.sums)
    return out


def identifiers(f: Formulation) -> set[str]:
    """Every name used by ``f``: parameters, sets, variables and index names."""
    names = set(f.parameters) | set(f.sets) | set(f.variables)
    for c in f.constraints:
        names.update(i for i, _ in c.quantifiers)
        names |= _index_names(c.lhs) | _index_names(c.rhs)
    names |= _index_names(f.objective.expr)
    return names


def _fresh(base: str, taken: set[str]) -> str:
    name, k = base, 1
    while name in taken or name in RESERVED:
        k += 1
        name = f"{base}{k}"
    taken.add(name)
    return name


def _shape_index(shape: Sequence[str], taken: set[str]) -> list[tuple[str, str]]:
    return [(_fresh("i", taken), s) for s in shape]


# ---------------------------------------------------------------------------
# obfuscation

_SYNONYMS = {
    "number": ("quantity", "count"),
    "maximum": ("largest", "highest"),
    "minimum": ("smallest", "lowest"),
    "total": ("overall", "combined"),
    "amount": ("quantity", "volume"),
    "cannot exceed": ("may not surpass", "must stay within"),
    "at least": ("no less than", "a minimum of"),
    "at most": ("no more than", "a maximum of"),
    "must": ("has to", "is required to"),
    "each": ("every", "each single"),
    "cost": ("expense", "price"),
    "profit": ("gain", "return"),
    "produce": ("manufacture", "make"),
    "minimize": ("reduce", "bring down"),
    "maximize": ("increase", "raise"),
    "available": ("on hand", "obtainable"),
    "required": ("needed", "demanded"),
}
_SYN_RE = re.compile(r"\b(" + "|".join(sorted(map(re.escape, _SYNONYMS), key=len, reverse=True)) + r")\b", re.IGNORECASE)


def rewrite_description(text: str, rng: random.Random) -> str:
    """Deterministic synonym rewriting; the choice per phrase comes from ``rng``."""

    def sub(m: re.Match) -> str:
        word = m.group(1)
        choice = rng.choice(_SYNONYMS[word.lower()])
        return choice[0].upper() + choice[1:] if word[0].isupper() else choice

    return _SYN_RE.sub(sub, text)


def _name_pool(letters: str, rng: random.Random) -> list[str]:
    singles = list(letters)
    rng.shuffle(singles)
    pairs = [a + b for a in letters for b in letters]
    rng.shuffle(pairs)
    return singles + pairs


_DIGIT_NAME = re.compile(r"^(.*)_(\d+)$")


@dataclass(frozen=True)
class Obfuscation:
    formulation: Formulation
    rename_map: dict[str, str]
    constraint_order: tuple[int, ...]  # new position -> old index


def obfuscate_detailed(
    f: Formulation,
    seed,
    avoid: Iterable[str] = (),
    paraphrase: Callable[[str], str] | None = None,
) -> Obfuscation:
    rng = random.Random(f"obfuscate:{seed}")
    taken = set(avoid) | identifiers(f) | set(RESERVED)
    upper = iter(n for n in _name_pool(string.ascii_uppercase, rng) if n not in taken)
    lower = iter(n for n in _name_pool(string.ascii_lowercase, rng) if n not in taken)

    names: dict[str, str] = {}
    params = list(f.parameters)
    rng.shuffle(params)
    for p in params:
        names[p] = next(upper)
    for s in f.sets:
        names[s] = next(upper)

    variables = list(f.variables)
    rng.shuffle(variables)
    stems: dict[str, list[str]] = {}
    for v in variables:
        m = _DIGIT_NAME.match(v)
        if m and m.group(1) not in f.variables:
            stems.setdefault(m.group(1), []).append(v)
    stem_names: dict[str, str] = {}
    for v in variables:
        m = _DIGIT_NAME.match(v)
        if m and len(stems.get(m.group(1), ())) >= 2:
            stem = m.group(1)
            if stem not in stem_names:
                stem_names[stem] = next(lower)
            names[v] = f"{stem_names[stem]}_{m.group(2)}"
        else:
            names[v] = next(lower)
    # digit-suffixed names could in principle collide with plain fresh names
    if len(set(names.values())) != len(names) or set(names.values()) & (taken - set(names)):
        raise RuntimeError("obfuscation produced a name collision")

    g = rename_formulation(f, names)
    order = list(range(len(g.constraints)))
    rng.shuffle(order)
    rewrite = paraphrase or (lambda t: rewrite_description(t, rng))

    new_params = {names[p]: replace(g.parameters[names[p]], description=rewrite(g.parameters[names[p]].description)) for p in params}
    new_vars = {names[v]: replace(g.variables[names[v]], description=rewrite(g.variables[names[v]].description)) for v in variables}
    new_cons = tuple(replace(g.constraints[k], description=rewrite(g.constraints[k].description)) for k in order)
    out = Formulation(
        description=rewrite(g.description),
        parameters=new_params,
        sets=dict(g.sets),
        variables=new_vars,
        constraints=new_cons,
        objective=replace(g.objective, description=rewrite(g.objective.description)),
        keywords=g.keywords,
    )
    return Obfuscation(out, names, tuple(order))


def obfuscate(f: Formulation, seed, avoid: Iterable[str] = (), paraphrase=None) -> tuple[Formulation, dict[str, str]]:
    """Seeded permutation plus renaming: parameters and sets get uppercase
    names, variables lowercase ones (single letters first, then pairs)."""
    ob = obfuscate_detailed(f, seed, avoid, paraphrase)
    return ob.formulation, ob.rename_map


# ---------------------------------------------------------------------------
# records


@dataclass
class DatasetRecord:
    id: str
    kind: TransformKind
    equivalent: bool
    alpha: Formulation
    alpha_prime: Formulation
    instance: InstanceData
    ground_truth_mapping: Mapping | None
    rename_map: dict[str, str]
    seed: int
    source: str = ""
    partner: str | None = None
    details: dict = field(default_factory=dict)
    constraint_order: tuple[int, ...] = ()

    @property
    def problem_class(self) -> str:
        return "MILP" if self.alpha.is_mip else "LP"

    def meta(self) -> dict:
        out = {
            "id": self.id,
            "kind": self.kind.value,
            "equivalent": self.equivalent,
            "ground_truth_mapping": None if self.ground_truth_mapping is None else self.ground_truth_mapping.to_dict(),
            "rename_map": self.rename_map,
            "seed": self.seed,
            "source": self.source,
            "problem_class": self.problem_class,
            "constraint_order": list(self.constraint_order),
            "details": self.details,
        }
        if self.partner is not None:
            out["partner"] = self.partner
        return out

    def save(self, directory: str | Path) -> Path:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        (d / "alpha.json").write_text(serialize_formulation(self.alpha) + "\n", encoding="utf-8")
        (d / "alpha_prime.json").write_text(serialize_formulation(self.alpha_prime) + "\n", encoding="utf-8")
        inst = instance_to_dict(self.instance, [self.alpha, self.alpha_prime])
        (d / "instance.json").write_text(json.dumps(inst, indent=2) + "\n", encoding="utf-8")
        (d / "meta.json").write_text(json.dumps(self.meta(), indent=2) + "\n", encoding="utf-8")
        return d

    @classmethod
    def load(cls, directory: str | Path) -> "DatasetRecord":
        d = Path(directory)
        alpha = load_formulation((d / "alpha.json").read_text(encoding="utf-8"))
        alpha_prime = load_formulation((d / "alpha_prime.json").read_text(encoding="utf-8"))
        inst_doc = json.loads((d / "instance.json").read_text(encoding="utf-8"))
        shapes = {n: p.shape for f in (alpha, alpha_prime) for n, p in f.parameters.items()}
        instance = InstanceData.from_dict(inst_doc, shapes=shapes)
        meta = json.loads((d / "meta.json").read_text(encoding="utf-8"))
        gt = meta.get("ground_truth_mapping")
        return cls(
            id=meta["id"],
            kind=TransformKind(meta["kind"]),
            equivalent=bool(meta["equivalent"]),
            alpha=alpha,
            alpha_prime=alpha_prime,
            instance=instance,
            ground_truth_mapping=None if gt is None else parse_mapping_json(json.dumps(gt)),
            rename_map=dict(meta.get("rename_map", {})),
            seed=int(meta.get("seed", 0)),
            source=meta.get("source", ""),
            partner=meta.get("partner"),
            details=meta.get("details", {}),
            constraint_order=tuple(meta.get("constraint_order", ())),
        )

    def context(self, **kw) -> PairContext:
        return PairContext(self.alpha, self.alpha_prime, self.instance, pair_id=self.id, **kw)


def record_seed(seed, name: str, kind: TransformKind) -> int:
    h = hashlib.blake2b(f"{seed}:{name}:{kind.value}".encode(), digest_size=4)
    return int.from_bytes(h.digest(), "little")


# ---------------------------------------------------------------------------
# the transformations (before obfuscation)


@dataclass
class _Raw:
    alpha: Formulation
    alpha_prime: Formulation
    instance_prime: InstanceData
    mapping: Mapping | None  # alpha variable -> terms over pre-obfuscation alpha' names
    details: dict = field(default_factory=dict)
    partner: str | None = None


def _with_constraints(f: Formulation, cons, **kw) -> Formulation:
    return replace(f, constraints=tuple(cons), **kw)


def _substitute(f: Formulation, name: str, fn) -> tuple[list[ConstraintDecl], ObjectiveDecl]:
    cons = [replace(c, lhs=c.lhs.substitute(name, fn), rhs=c.rhs.substitute(name, fn), code=None) for c in f.constraints]
    obj = replace(f.objective, expr=f.objective.expr.substitute(name, fn), code=None)
    return cons, obj


def _bound_constraints(target: LinearExpr, v: VariableDecl, q, what: str) -> list[ConstraintDecl]:
    out = []
    if v.lower is not None:
        out.append(ConstraintDecl(f"The {what} is at least {format_number(v.lower)}.", q, target, ">=", LinearExpr.const(v.lower)))
    if v.upper is not None:
        out.append(ConstraintDecl(f"The {what} is at most {format_number(v.upper)}.", q, target, "<=", LinearExpr.const(v.upper)))
    return out


def _substitute_objective(e: CorpusEntry, rng: random.Random) -> _Raw:
    f = e.formulation
    taken = identifiers(f)
    z = _fresh("ObjectiveValue", taken)
    variables = {**f.variables, z: VariableDecl("The value of the objective function", "continuous", (), None, None)}
    cons = list(f.constraints) + [
        ConstraintDecl("The objective variable equals the original objective expression.", (), LinearExpr.var(z), "=", f.objective.expr)
    ]
    g = _with_constraints(
        f, cons, variables=variables, objective=replace(f.objective, expr=LinearExpr.var(z), code=None, source=None)
    )
    return _Raw(f, g, e.instance, identity_mapping(f.variables), {"objective_variable": z})


def _add_slack(e: CorpusEntry, rng: random.Random) -> _Raw:
    f = e.formulation
    taken = identifiers(f)
    variables = dict(f.variables)
    cons = []
    added = []
    for c in f.constraints:
        if c.relation == "=":
            cons.append(c)
            continue
        s = _fresh("Slack", taken)
        shape = tuple(st for _, st in c.quantifiers)
        variables[s] = VariableDecl(f"Slack for: {c.description}", "continuous", shape, Fraction(0), None)
        term = LinearExpr.var(s, [IndexRef.bound(i) for i, _ in c.quantifiers])
        lhs = c.lhs + term if c.relation == "<=" else c.lhs - term
        cons.append(replace(c, lhs=lhs, relation="=", code=None, source=None))
        added.append(s)
    if not added:
        raise TransformSkip("no inequality constraints")
    g = _with_constraints(f, cons, variables=variables)
    return _Raw(f, g, e.instance, identity_mapping(f.variables), {"slack_variables": added})


def _base10(e: CorpusEntry, rng: random.Random) -> _Raw:
    f = e.formulation
    eligible = [
        n for n, v in f.variables.items()
        if v.var_type == "integer" and v.lower == 0 and v.upper is not None and v.upper >= 10
    ]
    if not eligible:
        raise TransformSkip("no integer variable with bounds 0 <= x <= U, U >= 10")
    x = rng.choice(eligible)
    v = f.variables[x]
    n_digits = len(str(int(v.upper)))  # floor(log10 U) + 1
    taken = identifiers(f) - {x}
    digits = []
    for i in range(n_digits):
        name = f"{x}_{i}"
        if name in taken:
            raise TransformSkip(f"digit name {name!r} already in use")
        taken.add(name)
        digits.append(name)
    variables = {}
    for n, d in f.variables.items():
        if n == x:
            for i, dn in enumerate(digits):
                variables[dn] = VariableDecl(f"Digit {i} of the {d.description}", "integer", d.shape, Fraction(0), Fraction(9))
        else:
            variables[n] = d

    def expansion(index):
        return sum((LinearExpr.var(dn, index, 10**i) for i, dn in enumerate(digits)), LinearExpr())

    cons, obj = _substitute(f, x, expansion)
    cons = [replace(c, source=None) for c in cons]
    obj = replace(obj, source=None)
    if v.upper < 10**n_digits - 1:
        q = tuple(_shape_index(v.shape, taken))
        cons.append(
            ConstraintDecl(
                f"The digits of {x} encode a value of at most {format_number(v.upper)}.",
                q,
                expansion([IndexRef.bound(i) for i, _ in q]),
                "<=",
                LinearExpr.const(v.upper),
            )
        )
    g = _with_constraints(f, cons, variables=variables, objective=obj)
    mapping = identity_mapping([n for n in f.variables if n != x]).merged(
        Mapping({x: tuple((Fraction(10) ** i, dn) for i, dn in enumerate(digits))})
    )
    return _Raw(f, g, e.instance, mapping, {"variable": x, "digits": digits})


def _valid_inequalities(e: CorpusEntry, rng: random.Random) -> _Raw:
    f = e.formulation
    ineq = [k for k, c in enumerate(f.constraints) if c.relation != "="]
    if not ineq:
        raise TransformSkip("no inequality constraints")
    pairs = [
        (i, j) for a, i in enumerate(ineq) for j in ineq[a + 1:]
        if [s for _, s in f.constraints[i].quantifiers] == [s for _, s in f.constraints[j].quantifiers]
    ]
    l1, l2 = rng.choice(COMBINATION_WEIGHTS), rng.choice(COMBINATION_WEIGHTS)
    if pairs:
        i, j = rng.choice(pairs)
        ci, cj = f.constraints[i], f.constraints[j]
        vi, _, bi = ci.normalized()
        vj, _, bj = cj.normalized()
        # align cj's quantifier indices with ci's
        ren = {a: b for (a, _), (b, _) in zip(cj.quantifiers, ci.quantifiers) if a != b}
        if ren:
            vj, bj = vj.rename(ren), bj.rename(ren)
        lhs, rhs = vi.scale(l1) + vj.scale(l2), bi.scale(l1) + bj.scale(l2)
        desc = f"A weighted sum ({format_number(l1)} and {format_number(l2)}) of two existing limits: {ci.description} {cj.description}"
        used = [i, j]
    else:
        i = rng.choice(ineq)
        ci = f.constraints[i]
        vi, _, bi = ci.normalized()
        l1 = rng.choice((Fraction(1, 2), Fraction(2)))
        l2 = None
        lhs, rhs = vi.scale(l1), bi.scale(l1)
        desc = f"A scaled copy ({format_number(l1)}) of an existing limit: {ci.description}"
        used = [i]
    new = ConstraintDecl(desc, ci.quantifiers, lhs, "<=", rhs)
    g = _with_constraints(f, list(f.constraints) + [new])
    weights = [format_number(l1)] + ([] if l2 is None else [format_number(l2)])
    return _Raw(f, g, e.instance, identity_mapping(f.variables), {"combined": used, "weights": weights})


def _rescale(e: CorpusEntry, rng: random.Random) -> _Raw:
    f = e.formulation
    if abs(e.outcome.objective) <= objective_tolerance(0.0):
        raise TransformSkip("optimal value is zero; objective scaling would not change it")
    k = Fraction(rng.choice(RESCALE_FACTORS))
    continuous = [n for n, v in f.variables.items() if v.var_type == "continuous"]
    details: dict = {"factor": int(k)}
    mapping = identity_mapping(f.variables)
    g = f
    if continuous:
        x = rng.choice(continuous)
        taken = identifiers(f) - {x}
        xp = _fresh(f"{x}Scaled", taken)
        cons, obj = _substitute(f, x, lambda index: LinearExpr.var(xp, index, 1 / k))
        variables = {}
        for n, d in f.variables.items():
            if n == x:
                variables[xp] = replace(
                    d,
                    description=f"{d.description} (in units of 1/{int(k)})",
                    lower=None if d.lower is None else d.lower * k,
                    upper=None if d.upper is None else d.upper * k,
                )
            else:
                variables[n] = d
        g = _with_constraints(
            f, [replace(c, source=None) for c in cons], variables=variables, objective=replace(obj, source=None)
        )
        mapping = mapping.merged(Mapping({x: ((1 / k, xp),)}))
        details["variable"] = x
    g = replace(
        g,
        objective=replace(
            g.objective,
            expr=g.objective.expr.scale(k),
            description=f"{g.objective.description} (scaled by {int(k)})",
            code=None,
            source=None,
        ),
    )
    return _Raw(f, g, e.instance, mapping, details)


def _plus_minus_split(e: CorpusEntry, rng: random.Random) -> _Raw:
    f = e.formulation
    continuous = [n for n, v in f.variables.items() if v.var_type == "continuous"]
    if not continuous:
        raise TransformSkip("no continuous variable")
    x = rng.choice(continuous)
    v = f.variables[x]
    taken = identifiers(f) - {x}
    pos, neg = _fresh(f"{x}Plus", taken), _fresh(f"{x}Minus", taken)
    variables = {}
    for n, d in f.variables.items():
        if n == x:
            variables[pos] = replace(d, description=f"Positive part of: {d.description}", lower=Fraction(0), upper=None)
            variables[neg] = replace(d, description=f"Negative part of: {d.description}", lower=Fraction(0), upper=None)
        else:
            variables[n] = d

    def split(index):
        return LinearExpr.var(pos, index) - LinearExpr.var(neg, index)

    cons, obj = _substitute(f, x, split)
    cons = [replace(c, source=None) for c in cons]
    # the original bounds of x survive as constraints on the difference
    q = tuple(_shape_index(v.shape, taken))
    cons += _bound_constraints(split([IndexRef.bound(i) for i, _ in q]), v, q, f"value of {x}")
    g = _with_constraints(f, cons, variables=variables, objective=replace(obj, source=None))
    mapping = identity_mapping([n for n in f.variables if n != x]).merged(
        Mapping({x: ((Fraction(1), pos), (Fraction(-1), neg))})
    )
    return _Raw(f, g, e.instance, mapping, {"variable": x})


def _zero_objective(f: Formulation) -> Formulation:
    return replace(
        f,
        objective=ObjectiveDecl("No objective: any feasible solution is acceptable.", "min", LinearExpr()),
    )


def _binding_declarations(e: CorpusEntry) -> list[int]:
    m = instantiate(e.formulation, e.instance)
    x = e.outcome.assignment.values
    out = []
    for row in m.rows:
        act = sum(float(q) * float(x[j]) for j, q in row.coefs)
        if abs(act - float(row.rhs)) <= 1e-6:
            k = int(re.match(r"c(\d+)", row.origin).group(1))
            if k not in out:
                out.append(k)
    return out


def _loose_candidates(e: CorpusEntry, rng: random.Random):
    f = e.formulation
    binding = _binding_declarations(e)
    rng.shuffle(binding)
    if not binding:
        raise TransformSkip("no binding constraint at the optimum")
    for k in binding:
        g = _with_constraints(f, [c for i, c in enumerate(f.constraints) if i != k])
        out = solve(instantiate(g, e.instance))
        if not out.is_optimal:
            continue
        if abs(out.objective - e.outcome.objective) <= objective_tolerance(e.outcome.objective):
            continue
        yield _Raw(f, g, e.instance, None, {"removed_constraint": k})


def _partner_candidates(e: CorpusEntry, corpus: Sequence[CorpusEntry], rng: random.Random, zero: bool):
    others = [o for o in corpus if o.name != e.name]
    rng.shuffle(others)
    alpha = _zero_objective(e.formulation) if zero else e.formulation
    for o in others:
        if not o.outcome.is_optimal:
            continue
        if not zero and abs(o.outcome.objective - e.outcome.objective) <= objective_tolerance(e.outcome.objective):
            continue
        g = _zero_objective(o.formulation) if zero else o.formulation
        yield _Raw(alpha, g, o.instance, None, {}, partner=o.name)


_EQUIVALENT_BUILDERS = {
    TransformKind.SUBSTITUTE_OBJECTIVE: _substitute_objective,
    TransformKind.ADD_SLACK: _add_slack,
    TransformKind.BASE10: _base10,
    TransformKind.VALID_INEQUALITIES: _valid_inequalities,
    TransformKind.RESCALE: _rescale,
    TransformKind.PLUS_MINUS_SPLIT: _plus_minus_split,
}


def _finish(e: CorpusEntry, kind: TransformKind, raw: _Raw, seed: int, paraphrase=None) -> DatasetRecord:
    ob = obfuscate_detailed(raw.alpha_prime, seed, avoid=identifiers(raw.alpha), paraphrase=paraphrase)
    names = ob.rename_map
    mapping = None
    if raw.mapping is not None:
        mapping = Mapping(
            {v: tuple((k, names.get(w, w)) for k, w in terms) for v, terms in raw.mapping.entries.items()}
        )
    instance = e.instance.restricted(raw.alpha).merged(raw.instance_prime.restricted(raw.alpha_prime).renamed(names))
    rid = f"{e.name}-{kind.value}"
    return DatasetRecord(
        id=rid,
        kind=kind,
        equivalent=kind.equivalent,
        alpha=raw.alpha,
        alpha_prime=ob.formulation,
        instance=instance,
        ground_truth_mapping=mapping,
        rename_map=names,
        seed=seed,
        source=e.name,
        partner=raw.partner,
        details=raw.details,
        constraint_order=ob.constraint_order,
    )


def check_record(rec: DatasetRecord, brute_cfg: FinderConfig | None = None) -> str | None:
    """Reason the record is unusable, or None.

    Equivalent records must verify their ground truth and relate optima as
    the transformation dictates. Non-equivalent records must differ in
    optimal value (except feasibility pairs) and admit no mapping that the
    brute-force oracle can verify; such a pair would in fact be equivalent.
    """
    ctx = rec.context()
    gate = ctx.gate()
    if gate is not None:
        return gate
    z, zp = ctx.alpha_outcome.objective, ctx.alpha_prime_outcome.objective
    if rec.equivalent:
        res = ctx.verifier.verify(rec.ground_truth_mapping)
        if not res.ok:
            return f"ground-truth mapping failed verification: {res.reason}"
        factor = rec.details.get("factor", 1) if rec.kind is TransformKind.RESCALE else 1
        if abs(zp - factor * z) > objective_tolerance(factor * z):
            return f"optimal values {z} and {zp} do not differ by the factor {factor}"
        return None
    if rec.kind is not TransformKind.FEASIBILITY and abs(z - zp) <= objective_tolerance(z):
        return "optimal values coincide"
    if brute_force_finder(rec.alpha, rec.alpha_prime, rec.instance, brute_cfg or FinderConfig(), ctx.verifier) is not None:
        return "a verifiable mapping exists"
    return None


def transform(
    entry: CorpusEntry,
    kind: TransformKind,
    seed: int,
    corpus: Sequence[CorpusEntry] = (),
    paraphrase=None,
) -> DatasetRecord:
    """Build one checked record, or raise :class:`TransformSkip`."""
    kind = TransformKind(kind)
    if not entry.outcome.is_optimal:
        raise TransformSkip(f"source instance is {entry.outcome.status}")
    rng = random.Random(seed)
    if kind in _EQUIVALENT_BUILDERS:
        candidates: Iterable[_Raw] = [_EQUIVALENT_BUILDERS[kind](entry, rng)]
    elif kind is TransformKind.LOOSE_CONSTRAINTS:
        candidates = _loose_candidates(entry, rng)
    else:
        candidates = _partner_candidates(entry, corpus, rng, zero=kind is TransformKind.FEASIBILITY)
    last = "no candidate"
    for raw in candidates:
        rec = _finish(entry, kind, raw, seed, paraphrase)
        problem = check_record(rec)
        if problem is None:
            return rec
        last = problem
        if kind.equivalent:
            break
    raise TransformSkip(last)


# ---------------------------------------------------------------------------
# dataset


def _one(args):
    entry, kind, seed, corpus = args
    try:
        return transform(entry, kind, record_seed(seed, entry.name, kind), corpus), None
    except TransformSkip as exc:
        return None, str(exc)


def build_dataset(
    corpus: str | Path | Sequence[CorpusEntry] | None,
    kinds: Iterable[TransformKind | str] = tuple(TransformKind),
    seed: int = 0,
    jobs: int = 1,
) -> tuple[dict, list[DatasetRecord]]:
    """One record per (corpus instance, applicable kind), plus the manifest."""
    entries = corpus if isinstance(corpus, (list, tuple)) else load_corpus(corpus)
    kinds = [TransformKind.parse(k) if isinstance(k, str) else TransformKind(k) for k in kinds]
    for e in entries:
        e.outcome  # solve once before any fan-out
    work = [(e, k, seed, entries) for k in kinds for e in entries]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one, work))
    else:
        results = [_one(w) for w in work]

    manifest: dict = {"seed": seed, "kinds": {}, "records": [], "skipped": []}
    for k in kinds:
        manifest["kinds"][k.value] = {"count": 0, "LP": 0, "MILP": 0, "equivalent": k.equivalent, "ids": []}
    records = []
    for (e, k, _, _), (rec, reason) in zip(work, results):
        if rec is None:
            log.info("skipped %s/%s: %s", e.name, k.value, reason)
            manifest["skipped"].append({"instance": e.name, "kind": k.value, "reason": reason})
            continue
        records.append(rec)
        slot = manifest["kinds"][k.value]
        slot["count"] += 1
        slot[rec.problem_class] += 1
        slot["ids"].append(rec.id)
        manifest["records"].append(
            {"id": rec.id, "kind": k.value, "equivalent": rec.equivalent, "class": rec.problem_class,
             "path": f"{k.value}/{rec.id}"}
        )
    manifest["total"] = len(records)
    return manifest, records


def generate_dataset(
    corpus: str | Path | Sequence[CorpusEntry] | None,
    kinds: Iterable[TransformKind | str] = tuple(TransformKind),
    seed: int = 0,
    out: str | Path | None = None,
    jobs: int = 1,
) -> dict:
    """Build the dataset, write it under ``out`` when given, and return the manifest."""
    manifest, records = build_dataset(corpus, kinds, seed, jobs)
    if out is not None:
        root = Path(out)
        root.mkdir(parents=True, exist_ok=True)
        for rec in records:
            rec.save(root / rec.kind.value / rec.id)
        (root / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest


def load_dataset(root: str | Path) -> tuple[dict, list[DatasetRecord]]:
    root = Path(root)
    manifest = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    records = [DatasetRecord.load(root / r["path"]) for r in manifest["records"]]
    return manifest, records
