"""Instantiation/solve cache for a formulation pair and mapped-solution verification."""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cached_property

from .instantiate import ConcreteModel, InstanceData, instantiate
from .model import Formulation
from .solver import TOL_FEAS, TOL_INT, FeasibilityReport, SolveOutcome, check_solution, objective_tolerance, solve

__all__ = ["PairContext", "Verification", "Verifier", "SolveLimits"]


@dataclass(frozen=True)
class SolveLimits:
    node_limit: int = 100_000
    time_limit: float = 30.0


@dataclass
class Verification:
    ok: bool
    reason: str = ""
    report: FeasibilityReport | None = None
    objective: float | None = None
    x_hat: tuple | None = None


class PairContext:
    """Lazily instantiated and solved ``(alpha, alpha_prime)`` pair.

    Solves run at most once per side; ``solve_seconds`` accumulates their
    wall time.
    """

    def __init__(
        self,
        alpha: Formulation,
        alpha_prime: Formulation,
        instance: InstanceData,
        limits: SolveLimits = SolveLimits(),
        pair_id: str = "pair",
        tol: float = TOL_FEAS,
    ):
        self.alpha = alpha
        self.alpha_prime = alpha_prime
        self.instance = instance
        self.limits = limits
        self.pair_id = pair_id
        self.tol = tol
        self.solve_seconds = 0.0

    @cached_property
    def alpha_model(self) -> ConcreteModel:
        return instantiate(self.alpha, self.instance)

    @cached_property
    def alpha_prime_model(self) -> ConcreteModel:
        return instantiate(self.alpha_prime, self.instance)

    def _solve(self, m: ConcreteModel) -> SolveOutcome:
        t0 = time.perf_counter()
        out = solve(m, node_limit=self.limits.node_limit, time_limit=self.limits.time_limit)
        self.solve_seconds += time.perf_counter() - t0
        return out

    @cached_property
    def alpha_outcome(self) -> SolveOutcome:
        return self._solve(self.alpha_model)

    @cached_property
    def alpha_prime_outcome(self) -> SolveOutcome:
        return self._solve(self.alpha_prime_model)

    def gate(self) -> str | None:
        """Reason the pair cannot be checked (not feasible and bounded), or None."""
        for side, out in (("alpha", self.alpha_outcome), ("alpha_prime", self.alpha_prime_outcome)):
            if not out.is_optimal:
                return f"{side} is {out.status}"
        return None

    @cached_property
    def verifier(self) -> "Verifier":
        return Verifier(self, self.tol)


class Verifier:
    """Checks that a mapping sends the optimum of alpha' to an optimum of alpha."""

    def __init__(self, ctx: PairContext, tol: float = TOL_FEAS, tol_int: float = TOL_INT):
        self.ctx = ctx
        self.tol = tol
        self.tol_int = tol_int
        self.calls = 0

    @property
    def z_star(self) -> float:
        return self.ctx.alpha_outcome.objective

    def __call__(self, mapping) -> Verification:
        return self.verify(mapping)

    def verify(self, mapping) -> Verification:
        from .mapping import MappingError, apply_mapping

        self.calls += 1
        ctx = self.ctx
        if ctx.gate() is not None:
            return Verification(False, ctx.gate())
        try:
            x_hat = apply_mapping(mapping, ctx.alpha_model, ctx.alpha_prime_model, ctx.alpha_prime_outcome.assignment)
        except MappingError as exc:
            return Verification(False, str(exc))
        report = check_solution(ctx.alpha_model, x_hat, self.tol, self.tol_int)
        value = float(ctx.alpha_model.objective_value(x_hat.values))
        if not report.feasible:
            return Verification(False, "mapped solution infeasible for alpha", report, value, x_hat.values)
        if abs(value - self.z_star) > objective_tolerance(self.z_star, self.tol):
            return Verification(
                False, f"mapped objective {value:.10g} differs from optimum {self.z_star:.10g}", report, value, x_hat.values
            )
        return Verification(True, "", report, value, x_hat.values)
