"""Desk-scale deterministic MILP solver and solution checker.

The LP engine is a dense two-phase tableau simplex using Bland's rule, so it
never cycles and always returns the same vertex for the same input. Integer
columns are handled by best-first branch-and-bound.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .instantiate import Assignment, ConcreteModel

__all__ = [
    "TOL_FEAS",
    "TOL_INT",
    "objective_tolerance",
    "objectives_match",
    "SolveOutcome",
    "FeasibilityReport",
    "solve_lp",
    "solve_milp",
    "solve",
    "check_solution",
]

TOL_FEAS = 1e-6
TOL_INT = 1e-6
_EPS = 1e-9
DEFAULT_NODE_LIMIT = 100_000
DEFAULT_TIME_LIMIT = 30.0


def objective_tolerance(z: float, tol: float = TOL_FEAS) -> float:
    return max(tol, 1e-9 * abs(z))


def objectives_match(a: float, b: float, tol: float = TOL_FEAS) -> bool:
    return abs(float(a) - float(b)) <= objective_tolerance(max(abs(float(a)), abs(float(b))), tol)


@dataclass
class SolveOutcome:
    """Result of a solve. ``objective`` is in the model's native sense."""

    status: str  # optimal | infeasible | unbounded | node_limit | numerical_error
    assignment: Assignment | None = None
    objective: float | None = None
    node_count: int = 0
    wall_time: float = 0.0
    message: str = ""

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "objective": self.objective,
            "node_count": self.node_count,
            "wall_time": self.wall_time,
        }
        if self.assignment is not None:
            out["assignment"] = {
                _col_name(c): v for c, v in zip(self.assignment.columns, self.assignment.values)
            }
        if self.message:
            out["message"] = self.message
        return out


def _col_name(col) -> str:
    name, idx = col
    return f"{name}[{','.join(idx)}]" if idx else name


@dataclass
class FeasibilityReport:
    violations: list[tuple[str, float]] = field(default_factory=list)
    integrality_violations: list[tuple[int, float]] = field(default_factory=list)
    bound_violations: list[tuple[int, float]] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not (self.violations or self.integrality_violations or self.bound_violations)

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "violations": [list(v) for v in self.violations],
            "integrality_violations": [list(v) for v in self.integrality_violations],
            "bound_violations": [list(v) for v in self.bound_violations],
        }


# ---------------------------------------------------------------------------
# tableau simplex


class _Numerical(Exception):
    pass


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    nz = np.nonzero(np.abs(col) > 0)[0]
    if nz.size:
        T[nz] -= np.outer(col[nz], T[r])
    T[np.abs(T) < 1e-12] = 0.0


def _run(T: np.ndarray, basis: list[int], n_allowed: int, max_iter: int) -> str:
    """Bland's-rule simplex on tableau ``T`` (last row = reduced costs)."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        cost = T[-1, :n_allowed]
        cand = np.nonzero(cost < -_EPS)[0]
        if cand.size == 0:
            return "optimal"
        j = int(cand[0])
        col = T[:m, j]
        best_r, best_ratio = -1, math.inf
        for r in range(m):
            if col[r] > _EPS:
                ratio = T[r, -1] / col[r]
                if ratio < best_ratio - 1e-12 or (
                    abs(ratio - best_ratio) <= 1e-12 and basis[r] < basis[best_r]
                ):
                    best_r, best_ratio = r, ratio
        if best_r < 0:
            return "unbounded"
        _pivot(T, best_r, j)
        basis[best_r] = j
    raise _Numerical("simplex iteration limit reached")


def _lp_standard(A, rel, b, c, lo, hi):
    """Solve ``min c.x s.t. A x rel b, lo <= x <= hi`` (floats).

    Returns ``(status, x, value)``.
    """
    n = len(c)
    if np.any(lo > hi + _EPS):
        return "infeasible", None, None
    # x = offset + M y, y >= 0
    offset = np.zeros(n)
    cols: list[tuple[int, float]] = []  # (x column, sign) per y column
    bound_rows: list[tuple[int, float]] = []  # (y column, upper)
    for j in range(n):
        if np.isfinite(lo[j]):
            offset[j] = lo[j]
            cols.append((j, 1.0))
            if np.isfinite(hi[j]):
                bound_rows.append((len(cols) - 1, hi[j] - lo[j]))
        elif np.isfinite(hi[j]):
            offset[j] = hi[j]
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    ny = len(cols)
    M = np.zeros((n, ny))
    for k, (j, s) in enumerate(cols):
        M[j, k] = s

    rows_A = [A @ M] if A.size else []
    rows_b = [b - A @ offset] if A.size else []
    rels = list(rel)
    if bound_rows:
        B = np.zeros((len(bound_rows), ny))
        for r, (k, u) in enumerate(bound_rows):
            B[r, k] = 1.0
        rows_A.append(B)
        rows_b.append(np.array([u for _, u in bound_rows]))
        rels += ["<="] * len(bound_rows)
    m = len(rels)
    Ay = np.vstack(rows_A) if rows_A else np.zeros((0, ny))
    by = np.concatenate(rows_b) if rows_b else np.zeros(0)
    cy = c @ M

    # flip rows to rhs >= 0
    Ay = Ay.copy()
    by = by.copy()
    for i in range(m):
        if by[i] < 0:
            Ay[i] *= -1
            by[i] *= -1
            rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]

    n_slack = sum(1 for r in rels if r != "=")
    n_art = sum(1 for r in rels if r != "<=")
    N = ny + n_slack + n_art
    T = np.zeros((m + 1, N + 1))
    T[:m, :ny] = Ay
    T[:m, -1] = by
    basis = [0] * m
    s_at, a_at = ny, ny + n_slack
    art_cols = []
    for i, r in enumerate(rels):
        if r == "<=":
            T[i, s_at] = 1.0
            basis[i] = s_at
            s_at += 1
        else:
            if r == ">=":
                T[i, s_at] = -1.0
                s_at += 1
            T[i, a_at] = 1.0
            basis[i] = a_at
            art_cols.append(a_at)
            a_at += 1
    max_iter = 50 * (m + N) + 1000

    if art_cols:
        T[-1, :] = 0.0
        for i, bj in enumerate(basis):
            if bj >= ny + n_slack:
                T[-1, :] -= T[i, :]
        for a in art_cols:
            T[-1, a] = 0.0
        _run(T, basis, N, max_iter)
        infeas = -T[-1, -1]
        if infeas > 1e-7 * max(1.0, float(np.max(np.abs(by))) if m else 1.0):
            return "infeasible", None, None
        # drive artificials out of the basis
        keep = []
        for i in range(m):
            if basis[i] >= ny + n_slack:
                row = T[i, : ny + n_slack]
                nz = np.nonzero(np.abs(row) > 1e-9)[0]
                if nz.size:
                    _pivot(T, i, int(nz[0]))
                    basis[i] = int(nz[0])
                    keep.append(i)
                # else: redundant row, dropped
            else:
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        basis = [basis[i] for i in keep]
        T = np.hstack([T[:, : ny + n_slack], T[:, -1:]])
        N = ny + n_slack
        m = len(keep)

    T[-1, :] = 0.0
    T[-1, :ny] = cy
    for i, bj in enumerate(basis):
        if T[-1, bj] != 0.0:
            T[-1, :] -= T[-1, bj] * T[i, :]
    status = _run(T, basis, N, max_iter)
    if status == "unbounded":
        return "unbounded", None, None
    y = np.zeros(N)
    for i, bj in enumerate(basis):
        y[bj] = T[i, -1]
    x = offset + M @ y[:ny]
    return "optimal", x, float(c @ x)


def _arrays(m: ConcreteModel):
    A, rel, b, c, lo, hi, integer = m.dense()
    if m.sense == "max":
        c = -c
    return A, rel, b, c, lo, hi, integer


def _native(m: ConcreteModel, x: Sequence[float]) -> float:
    return float(m.objective_value([float(v) for v in x]))


def solve_lp(m: ConcreteModel) -> SolveOutcome:
    """Solve the LP relaxation of ``m`` (integrality ignored)."""
    t0 = time.perf_counter()
    A, rel, b, c, lo, hi, _ = _arrays(m)
    try:
        status, x, _ = _lp_standard(A, rel, b, c, lo, hi)
    except _Numerical as exc:
        return SolveOutcome("numerical_error", wall_time=time.perf_counter() - t0, message=str(exc))
    if status != "optimal":
        return SolveOutcome(status, node_count=1, wall_time=time.perf_counter() - t0)
    vals = tuple(float(v) for v in x)
    return SolveOutcome(
        "optimal",
        Assignment(m.columns, vals),
        _native(m, vals),
        node_count=1,
        wall_time=time.perf_counter() - t0,
    )


def solve_milp(
    m: ConcreteModel,
    node_limit: int = DEFAULT_NODE_LIMIT,
    time_limit: float = DEFAULT_TIME_LIMIT,
    tol_int: float = TOL_INT,
) -> SolveOutcome:
    """Branch-and-bound over LP relaxations.

    Nodes are explored best-first by relaxation bound, ties broken by node id;
    branching is on the lowest-index fractional integer column, floor child
    created first.
    """
    t0 = time.perf_counter()
    A, rel, b, c, lo0, hi0, integer = _arrays(m)
    lo0, hi0 = lo0.copy(), hi0.copy()
    for j in np.nonzero(integer)[0]:
        if np.isfinite(lo0[j]):
            lo0[j] = math.ceil(lo0[j] - tol_int)
        if np.isfinite(hi0[j]):
            hi0[j] = math.floor(hi0[j] + tol_int)

    def relax(lo, hi):
        return _lp_standard(A, rel, b, c, lo, hi)

    try:
        status, x, val = relax(lo0, hi0)
    except _Numerical as exc:
        return SolveOutcome("numerical_error", wall_time=time.perf_counter() - t0, message=str(exc))
    if status != "optimal":
        return SolveOutcome(status, node_count=1, wall_time=time.perf_counter() - t0)

    next_id = 1
    heap = [(val, 0, lo0, hi0, x)]
    best_val, best_x = math.inf, None
    nodes = 0
    int_idx = np.nonzero(integer)[0]
    while heap:
        bound, _, lo, hi, x = heapq.heappop(heap)
        if best_x is not None and bound >= best_val - objective_tolerance(best_val):
            continue
        nodes += 1
        if nodes > node_limit or time.perf_counter() - t0 > time_limit:
            return _finish(m, "node_limit", best_x, nodes, t0, int_idx, "node or time cap reached")
        frac = [j for j in int_idx if abs(x[j] - round(x[j])) > tol_int]
        if not frac:
            if bound < best_val:
                best_val, best_x = bound, x
            continue
        j = frac[0]
        children = []
        hi_f = hi.copy()
        hi_f[j] = math.floor(x[j])
        children.append((lo, hi_f))
        lo_c = lo.copy()
        lo_c[j] = math.ceil(x[j])
        children.append((lo_c, hi))
        for clo, chi in children:
            try:
                st, cx, cval = relax(clo, chi)
            except _Numerical as exc:
                return _finish(m, "numerical_error", best_x, nodes, t0, int_idx, str(exc))
            if st != "optimal":
                continue
            assert cval >= bound - 1e-6 * max(1.0, abs(bound)), "child relaxation below parent bound"
            if best_x is None or cval < best_val - objective_tolerance(best_val):
                heapq.heappush(heap, (cval, next_id, clo, chi, cx))
            next_id += 1
    if best_x is None:
        return SolveOutcome("infeasible", node_count=nodes, wall_time=time.perf_counter() - t0)
    return _finish(m, "optimal", best_x, nodes, t0, int_idx)


def _finish(m, status, x, nodes, t0, int_idx, message=""):
    if x is None:
        return SolveOutcome(status, node_count=nodes, wall_time=time.perf_counter() - t0, message=message)
    x = np.array(x, dtype=float)
    x[int_idx] = np.round(x[int_idx])
    vals = tuple(float(v) + 0.0 for v in x)
    return SolveOutcome(
        status,
        Assignment(m.columns, vals),
        _native(m, vals),
        node_count=nodes,
        wall_time=time.perf_counter() - t0,
        message=message,
    )


def solve(m: ConcreteModel, **limits) -> SolveOutcome:
    """``solve_milp`` when any column is integer, else ``solve_lp``."""
    if any(m.integer):
        return solve_milp(m, **limits)
    return solve_lp(m)


def check_solution(
    m: ConcreteModel,
    x: Assignment | Sequence,
    tol_feas: float = TOL_FEAS,
    tol_int: float = TOL_INT,
) -> FeasibilityReport:
    """Check rows, bounds and integrality of ``x`` against ``m``."""
    values = x.values if isinstance(x, Assignment) else tuple(x)
    if len(values) != m.n_cols:
        raise ValueError(f"assignment has {len(values)} values, model has {m.n_cols} columns")
    v = [float(a) for a in values]
    rep = FeasibilityReport()
    for row in m.rows:
        act = sum(float(q) * v[j] for j, q in row.coefs)
        rhs = float(row.rhs)
        if row.relation == "<=":
            gap = act - rhs
        elif row.relation == ">=":
            gap = rhs - act
        else:
            gap = abs(act - rhs)
        if gap > tol_feas:
            rep.violations.append((row.origin, gap))
    for j, val in enumerate(v):
        lo, hi = m.lower[j], m.upper[j]
        if lo is not None and val < float(lo) - tol_feas:
            rep.bound_violations.append((j, float(lo) - val))
        elif hi is not None and val > float(hi) + tol_feas:
            rep.bound_violations.append((j, val - float(hi)))
        if m.integer[j]:
            resid = abs(val - round(val))
            if resid > tol_int:
                rep.integrality_violations.append((j, resid))
    return rep
