"""Independent reference computations used only by the tests."""
import itertools
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from formeq.instantiate import ConcreteModel, Row


def random_milp(rng: np.random.Generator, max_grid: int = 4096) -> ConcreteModel:
    """Bounded random MILP with at most 12 integer columns and a small grid."""
    n_int = int(rng.integers(1, 13))
    n_cont = int(rng.integers(0, 3))
    ub = []
    grid = 1
    for _ in range(n_int):
        u = int(rng.integers(1, 4))
        while grid * (u + 1) > max_grid and u > 1:
            u -= 1
        if grid * (u + 1) > max_grid:
            u = 0
        ub.append(u)
        grid *= u + 1
    if n_cont and grid > 64:
        n_cont = 0
    n = n_int + n_cont
    m_rows = int(rng.integers(1, 5))
    rows = []
    for i in range(m_rows):
        coefs = tuple((j, Fraction(int(a))) for j, a in enumerate(rng.integers(-4, 6, size=n)) if a)
        rel = ["<=", ">=", "="][int(rng.choice(3, p=[0.7, 0.2, 0.1]))]
        rhs = Fraction(int(rng.integers(0, 3 * n + 1)))
        rows.append(Row(coefs, rel, rhs, f"r{i}"))
    return ConcreteModel(
        columns=tuple((f"x{j}", ()) for j in range(n)),
        sense=str(rng.choice(["min", "max"])),
        objective=tuple(Fraction(int(c)) for c in rng.integers(-6, 7, size=n)),
        objective_offset=Fraction(0),
        rows=tuple(rows),
        lower=tuple([Fraction(0)] * n),
        upper=tuple([Fraction(u) for u in ub] + [Fraction(int(rng.integers(1, 6))) for _ in range(n_cont)]),
        integer=tuple([True] * n_int + [False] * n_cont),
    )


def _arrays(m: ConcreteModel):
    A = np.zeros((m.n_rows, m.n_cols))
    for i, r in enumerate(m.rows):
        for j, q in r.coefs:
            A[i, j] = float(q)
    b = np.array([float(r.rhs) for r in m.rows])
    rel = np.array([r.relation for r in m.rows])
    c = np.array([float(q) for q in m.objective])
    return A, b, rel, c


def grid_optimum(m: ConcreteModel) -> float | None:
    """Enumerate the integer grid; continuous columns are solved by scipy's LP."""
    A, b, rel, c = _arrays(m)
    sign = 1.0 if m.sense == "min" else -1.0
    ints = [j for j in range(m.n_cols) if m.integer[j]]
    conts = [j for j in range(m.n_cols) if not m.integer[j]]
    ranges = [range(int(m.lower[j]), int(m.upper[j]) + 1) for j in ints]
    pts = np.array(list(itertools.product(*ranges)), dtype=float).reshape(-1, len(ints))
    tol = 1e-9
    if not conts:
        act = pts @ A[:, ints].T
        ok = np.ones(len(pts), dtype=bool)
        for i in range(m.n_rows):
            if rel[i] == "<=":
                ok &= act[:, i] <= b[i] + tol
            elif rel[i] == ">=":
                ok &= act[:, i] >= b[i] - tol
            else:
                ok &= np.abs(act[:, i] - b[i]) <= tol
        if not ok.any():
            return None
        vals = pts[ok] @ c[ints]
        return float(vals.min() if m.sense == "min" else vals.max())
    best = None
    Ac = A[:, conts]
    bounds = [(float(m.lower[j]), float(m.upper[j])) for j in conts]
    for p in pts:
        resid = b - A[:, ints] @ p
        ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
        for i in range(m.n_rows):
            if rel[i] == "<=":
                ub_rows.append(Ac[i])
                ub_rhs.append(resid[i])
            elif rel[i] == ">=":
                ub_rows.append(-Ac[i])
                ub_rhs.append(-resid[i])
            else:
                eq_rows.append(Ac[i])
                eq_rhs.append(resid[i])
        res = linprog(
            sign * c[conts],
            A_ub=np.array(ub_rows) if ub_rows else None, b_ub=ub_rhs or None,
            A_eq=np.array(eq_rows) if eq_rows else None, b_eq=eq_rhs or None,
            bounds=bounds, method="highs",
        )
        if res.status != 0:
            continue
        val = float(c[ints] @ p) + sign * res.fun
        if best is None or (val < best if m.sense == "min" else val > best):
            best = val
    return best


def lp_vertices_optimum(A, b, c):
    """min c.x over {A x <= b} in two dimensions by enumerating line intersections."""
    best = None
    for i, j in itertools.combinations(range(len(A)), 2):
        M = np.array([A[i], A[j]], dtype=float)
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, [b[i], b[j]])
        if np.all(np.asarray(A, float) @ x <= np.asarray(b, float) + 1e-9):
            v = float(np.dot(c, x))
            if best is None or v < best[0]:
                best = (v, tuple(x))
    return best


def knapsack_enumerate(values, weights, cap):
    """(optimal value, every optimal subset as a sorted index tuple)."""
    best, optima = -1, []
    for pick in itertools.product((0, 1), repeat=len(values)):
        if sum(w * p for w, p in zip(weights, pick)) <= cap:
            v = sum(v * p for v, p in zip(values, pick))
            chosen = tuple(i for i, p in enumerate(pick) if p)
            if v > best:
                best, optima = v, [chosen]
            elif v == best:
                optima.append(chosen)
    return best, sorted(optima)
