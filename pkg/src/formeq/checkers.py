"""Equivalence checkers: canonical, execution, WL-test, naive-LLM and mapping-based."""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graph import build_bipartite, wl_equivalent
from .mapping import FinderConfig, Mapping, brute_force_finder, heuristic_finder
from .model import Formulation, declaration_key
from .solver import TOL_FEAS
from .verify import PairContext

__all__ = [
    "EQUIVALENT",
    "NOT_EQUIVALENT",
    "UNDECIDED",
    "Verdict",
    "canonical_score",
    "canonical_check",
    "execution_check",
    "wl_check",
    "equivamap_check",
    "naive_check",
    "ground_truth_finder",
    "heuristic",
    "brute_force",
]

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
UNDECIDED = "undecided"

Finder = Callable[[PairContext], Sequence[Mapping | None]]


@dataclass
class Verdict:
    method: str
    decision: str
    score: float | None = None
    mapping: Mapping | None = None
    violations: list | None = None
    reason: str = ""
    timings: dict = field(default_factory=lambda: {"solve_s": 0.0, "llm_s": 0.0, "wl_s": 0.0, "total_s": 0.0})
    attempts: int | None = None

    @property
    def equivalent(self) -> bool:
        return self.decision == EQUIVALENT

    def to_json(self, timings: bool = True) -> dict:
        out: dict = {"method": self.method, "decision": self.decision}
        if self.score is not None:
            out["score"] = self.score
        if self.mapping is not None:
            out["mapping"] = self.mapping.to_dict()
        if self.violations:
            out["violations"] = self.violations
        if self.reason:
            out["reason"] = self.reason
        if self.attempts is not None:
            out["attempts"] = self.attempts
        if timings:
            out["timings"] = dict(self.timings)
        return out


def _declarations(f: Formulation) -> Counter:
    return Counter([declaration_key(c) for c in f.constraints] + [declaration_key(f.objective)])


def canonical_score(alpha: Formulation, alpha_prime: Formulation) -> float:
    """1 - min(|FP| + |FN|, |D|) / |D| over exact canonical declarations (D = alpha's)."""
    ref, gen = _declarations(alpha), _declarations(alpha_prime)
    fp = sum((gen - ref).values())
    fn = sum((ref - gen).values())
    d = sum(ref.values())
    return 1.0 - min(fp + fn, d) / d


def canonical_check(alpha: Formulation, alpha_prime: Formulation) -> Verdict:
    t0 = time.perf_counter()
    s = canonical_score(alpha, alpha_prime)
    v = Verdict("canonical", EQUIVALENT if s == 1.0 else NOT_EQUIVALENT, score=s)
    v.timings["total_s"] = time.perf_counter() - t0
    return v


def _gate_verdict(method: str, ctx: PairContext, t0: float, solve0: float) -> Verdict | None:
    reason = ctx.gate()
    if reason is None:
        return None
    v = Verdict(method, UNDECIDED, reason=reason)
    v.timings["solve_s"] = ctx.solve_seconds - solve0
    v.timings["total_s"] = time.perf_counter() - t0
    return v


def execution_check(ctx: PairContext, tol: float = TOL_FEAS) -> Verdict:
    """Equal optimal values (native senses, no cross-pair normalization)."""
    t0, s0 = time.perf_counter(), ctx.solve_seconds
    gated = _gate_verdict("execution", ctx, t0, s0)
    if gated is not None:
        return gated
    z, zp = ctx.alpha_outcome.objective, ctx.alpha_prime_outcome.objective
    same = abs(z - zp) <= max(tol, tol * abs(z))
    v = Verdict("execution", EQUIVALENT if same else NOT_EQUIVALENT)
    if not same:
        v.reason = f"z*={z:.10g} vs z'*={zp:.10g}"
    v.timings["solve_s"] = ctx.solve_seconds - s0
    v.timings["total_s"] = time.perf_counter() - t0
    return v


def wl_check(ctx: PairContext, max_iters: int | None = None) -> Verdict:
    t0 = time.perf_counter()
    same = wl_equivalent(build_bipartite(ctx.alpha_model), build_bipartite(ctx.alpha_prime_model), max_iters)
    v = Verdict("wl", EQUIVALENT if same else NOT_EQUIVALENT)
    v.timings["wl_s"] = v.timings["total_s"] = time.perf_counter() - t0
    return v


def equivamap_check(ctx: PairContext, finder: Finder, k: int | None = None) -> Verdict:
    """Mapping-based check in the alpha' -> alpha direction.

    Each finder attempt is applied to the optimum of alpha'; the pair is
    equivalent iff some attempt maps it to a feasible point of alpha with
    the optimal objective value. ``k`` truncates the attempt list.
    """
    t0, s0 = time.perf_counter(), ctx.solve_seconds
    gated = _gate_verdict("equivamap", ctx, t0, s0)
    if gated is not None:
        return gated
    llm0 = getattr(finder, "seconds", 0.0)
    attempts = list(finder(ctx))
    llm_s = getattr(finder, "seconds", 0.0) - llm0
    if k is not None:
        attempts = attempts[:k]
    v = Verdict("equivamap", NOT_EQUIVALENT, attempts=len(attempts))
    reasons = []
    for m in attempts:
        if m is None:
            reasons.append("finder attempt failed")
            continue
        res = ctx.verifier.verify(m)
        if res.ok:
            v.decision, v.mapping, v.violations = EQUIVALENT, m, None
            break
        reasons.append(res.reason)
        if res.report is not None and not res.report.feasible:
            v.violations = res.report.to_dict()["violations"][:10]
    if v.decision != EQUIVALENT:
        v.reason = "; ".join(reasons[-3:]) if reasons else "no candidate mapping"
    v.timings["llm_s"] = llm_s
    v.timings["solve_s"] = ctx.solve_seconds - s0
    v.timings["total_s"] = time.perf_counter() - t0
    return v


def naive_check(alpha: Formulation, alpha_prime: Formulation, cfg, transport=None, pair_id: str = "pair") -> Verdict:
    from .llm import naive_llm_check

    t0 = time.perf_counter()
    decision, seconds = naive_llm_check(alpha, alpha_prime, cfg, transport, pair_id)
    v = Verdict("naive-llm", decision)
    if decision == UNDECIDED:
        v.reason = "transport failure"
    v.timings["llm_s"] = seconds
    v.timings["total_s"] = time.perf_counter() - t0
    return v


# finder adapters


def ground_truth_finder(mapping: Mapping | None) -> Finder:
    def finder(ctx: PairContext):
        return [] if mapping is None else [mapping]

    return finder


def heuristic(ctx: PairContext) -> list[Mapping]:
    return heuristic_finder(ctx.alpha, ctx.alpha_prime)


def brute_force(cfg: FinderConfig | None = None) -> Finder:
    def finder(ctx: PairContext):
        m = brute_force_finder(ctx.alpha, ctx.alpha_prime, ctx.instance, cfg or FinderConfig(), ctx.verifier)
        return [] if m is None else [m]

    return finder
