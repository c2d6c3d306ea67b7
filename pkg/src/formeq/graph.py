"""Bipartite variable/constraint graph of a concrete model and WL refinement.

Node and edge attributes are quantized to 9 decimal places and hashed with a
fixed 64-bit BLAKE2b digest, so labels are identical across runs and
platforms.
"""
from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .instantiate import ConcreteModel

__all__ = [
    "MilpGraph",
    "WlLabels",
    "quantize",
    "stable_hash",
    "build_bipartite",
    "wl_refine",
    "wl_equivalent",
    "dump_graph",
]


def quantize(value: Fraction | float | None) -> str:
    """Shortest decimal string of ``value`` rounded to 9 places."""
    if value is None:
        return "inf"
    v = round(float(value), 9)
    if v == 0:
        v = 0.0
    return repr(v)


def stable_hash(*parts: str) -> int:
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        data = p.encode("utf-8")
        h.update(len(data).to_bytes(4, "little"))
        h.update(data)
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class MilpGraph:
    """Variable nodes, constraint nodes and weighted edges.

    Objective coefficients are stored for a minimization (max objectives are
    negated). Lower bounds of ``None`` print as ``-inf``.
    """

    variable_nodes: tuple[tuple[str, str, str, str], ...]  # (obj, lower, upper, integer)
    constraint_nodes: tuple[tuple[str, str], ...]  # (relation, rhs)
    edges: tuple[tuple[int, int, str], ...]  # (variable, constraint, coefficient)

    @property
    def n_nodes(self) -> int:
        return len(self.variable_nodes) + len(self.constraint_nodes)


@dataclass
class WlLabels:
    variable_labels: list[list[int]] = field(default_factory=list)
    constraint_labels: list[list[int]] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

    def multiset(self, t: int) -> Counter:
        return Counter(self.variable_labels[t]) + Counter(self.constraint_labels[t])


def build_bipartite(m: ConcreteModel) -> MilpGraph:
    sign = -1 if m.sense == "max" else 1
    var_nodes = []
    for j in range(m.n_cols):
        lo = m.lower[j]
        var_nodes.append(
            (
                quantize(sign * m.objective[j]),
                "-inf" if lo is None else quantize(lo),
                quantize(m.upper[j]),
                "int" if m.integer[j] else "cont",
            )
        )
    con_nodes = []
    edges = []
    for i, row in enumerate(m.rows):
        con_nodes.append((row.relation, quantize(row.rhs)))
        for j, q in row.coefs:
            if q != 0:
                edges.append((j, i, quantize(q)))
    return MilpGraph(tuple(var_nodes), tuple(con_nodes), tuple(edges))


def _initial(g: MilpGraph) -> tuple[list[int], list[int]]:
    v = [stable_hash("var", *attrs) for attrs in g.variable_nodes]
    c = [stable_hash("con", *attrs) for attrs in g.constraint_nodes]
    return v, c


def _step(g: MilpGraph, v: list[int], c: list[int]) -> tuple[list[int], list[int]]:
    v_nb: list[list[str]] = [[] for _ in v]
    c_nb: list[list[str]] = [[] for _ in c]
    for j, i, w in g.edges:
        v_nb[j].append(f"{w}|{c[i]}")
        c_nb[i].append(f"{w}|{v[j]}")
    nv = [stable_hash(str(v[j]), *sorted(v_nb[j])) for j in range(len(v))]
    nc = [stable_hash(str(c[i]), *sorted(c_nb[i])) for i in range(len(c))]
    return nv, nc


def _n_classes(v, c) -> int:
    return len(set(v)) + len(set(c))


def wl_refine(g: MilpGraph, max_iters: int | None = None) -> WlLabels:
    """Refine labels until the partition stops splitting or ``max_iters``."""
    if max_iters is None:
        max_iters = max(1, g.n_nodes)
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    v, c = _initial(g)
    out = WlLabels([v], [c])
    for _ in range(max_iters):
        nv, nc = _step(g, v, c)
        out.variable_labels.append(nv)
        out.constraint_labels.append(nc)
        out.iterations += 1
        if _n_classes(nv, nc) == _n_classes(v, c):
            out.converged = True
            break
        v, c = nv, nc
    return out


def wl_equivalent(g1: MilpGraph, g2: MilpGraph, max_iters: int | None = None) -> bool:
    """True iff label multisets agree at every refinement round."""
    if len(g1.variable_nodes) != len(g2.variable_nodes) or len(g1.constraint_nodes) != len(g2.constraint_nodes):
        return False
    if len(g1.edges) != len(g2.edges):
        return False
    if max_iters is None:
        max_iters = max(1, g1.n_nodes)
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    a, b = _initial(g1), _initial(g2)
    for t in range(max_iters + 1):
        if Counter(a[0]) != Counter(b[0]) or Counter(a[1]) != Counter(b[1]):
            return False
        if t == max_iters:
            break
        na, nb = _step(g1, *a), _step(g2, *b)
        stable = _n_classes(*na) == _n_classes(*a) and _n_classes(*nb) == _n_classes(*b)
        a, b = na, nb
        if stable:
            return Counter(a[0]) == Counter(b[0]) and Counter(a[1]) == Counter(b[1])
    return True


def dump_graph(g: MilpGraph, path: str | Path | None = None) -> str:
    """Line-based text dump: variable nodes, constraint nodes, then edges."""
    lines = []
    for j, (obj, lo, hi, kind) in enumerate(g.variable_nodes):
        lines.append(f"v {j} obj={obj} lower={lo} upper={hi} {kind}")
    for i, (rel, rhs) in enumerate(g.constraint_nodes):
        lines.append(f"c {i} rel={rel} rhs={rhs}")
    for j, i, w in sorted(g.edges):
        lines.append(f"e {j} {i} {w}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
