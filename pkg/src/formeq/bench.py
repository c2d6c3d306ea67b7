"""Batch benchmarking of the checkers over a generated dataset.

Accuracy goes into ``report.json`` / ``report.txt`` and contains nothing
time-dependent, so repeated runs with a deterministic finder (or a replayed
transcript) give byte-identical reports. Wall-clock timings are written
separately to ``report.timings.json`` and ``report.timings.txt``.
"""
from __future__ import annotations

import hashlib
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .checkers import (
    EQUIVALENT,
    UNDECIDED,
    Verdict,
    brute_force,
    canonical_check,
    equivamap_check,
    execution_check,
    ground_truth_finder,
    heuristic,
    naive_check,
    wl_check,
)
from .solver import TOL_FEAS
from .transform import EQUIVALENT_KINDS, NONEQUIVALENT_KINDS, DatasetRecord, TransformKind, load_dataset

__all__ = ["METHODS", "FINDERS", "RecordResult", "BenchmarkReport", "run_method", "run_benchmark", "manifest_digest"]

log = logging.getLogger(__name__)

METHODS = ("canonical", "execution", "wl", "equivamap", "naive-llm")
FINDERS = ("ground-truth", "brute", "heuristic", "llm")
STAGES = ("solve_s", "llm_s", "wl_s", "total_s")


@dataclass
class RecordResult:
    id: str
    kind: str
    equivalent: bool
    problem_class: str
    method: str
    decision: str
    reason: str = ""
    timings: dict = field(default_factory=dict)

    @property
    def correct(self) -> bool:
        if self.decision == UNDECIDED:
            return False
        return (self.decision == EQUIVALENT) == self.equivalent


def make_finder(name: str, rec: DatasetRecord, llm_cfg=None, transport=None):
    if name == "ground-truth":
        return ground_truth_finder(rec.ground_truth_mapping)
    if name == "brute":
        return brute_force()
    if name == "heuristic":
        return heuristic
    if name == "llm":
        from .llm import LlmConfig, LlmFinder

        return LlmFinder(llm_cfg or LlmConfig.from_env(), transport)
    raise ValueError(f"unknown finder {name!r}; expected one of {', '.join(FINDERS)}")


def run_method(
    rec: DatasetRecord,
    method: str,
    finder: str = "ground-truth",
    k: int = 3,
    tol: float = TOL_FEAS,
    llm_cfg=None,
    transport=None,
    ctx=None,
) -> Verdict:
    ctx = ctx or rec.context(tol=tol)
    if method == "canonical":
        return canonical_check(rec.alpha, rec.alpha_prime)
    if method == "execution":
        return execution_check(ctx, tol)
    if method == "wl":
        return wl_check(ctx)
    if method == "equivamap":
        return equivamap_check(ctx, make_finder(finder, rec, llm_cfg, transport), k)
    if method == "naive-llm":
        from .llm import LlmConfig

        return naive_check(rec.alpha, rec.alpha_prime, llm_cfg or LlmConfig.from_env(), transport, rec.id)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def _run_record(args) -> list[RecordResult]:
    rec, methods, finder, k, tol, llm_cfg, transport = args
    ctx = rec.context(tol=tol)
    out = []
    for method in methods:
        try:
            v = run_method(rec, method, finder, k, tol, llm_cfg, transport, ctx=ctx)
            decision, reason, timings = v.decision, v.reason, v.timings
        except Exception as exc:  # one bad record must not sink the batch
            log.warning("record %s, method %s failed: %s", rec.id, method, exc)
            decision, reason, timings = UNDECIDED, f"error: {exc}", {s: 0.0 for s in STAGES}
        out.append(RecordResult(rec.id, rec.kind.value, rec.equivalent, rec.problem_class, method, decision, reason, dict(timings)))
    return out


def manifest_digest(manifest: dict, raw: bytes | None = None) -> str:
    data = raw if raw is not None else json.dumps(manifest, sort_keys=True).encode()
    return hashlib.sha256(data).hexdigest()


def _pct(c: int, n: int) -> str:
    return "-" if n == 0 else f"{100 * c / n:.1f}%"


@dataclass
class BenchmarkReport:
    results: list[RecordResult]
    methods: tuple[str, ...]
    finder: str
    k: int
    tol: float
    manifest_sha256: str
    version: str = __version__

    def rows(self, method: str, kind: str | None = None, cls: str | None = None) -> list[RecordResult]:
        return [
            r for r in self.results
            if r.method == method and (kind is None or r.kind == kind) and (cls is None or r.problem_class == cls)
        ]

    def accuracy(self, method: str, kind: str | None = None, cls: str | None = None) -> tuple[int, int]:
        rows = self.rows(method, kind, cls)
        return sum(r.correct for r in rows), len(rows)

    def kinds(self, equivalent: bool) -> list[str]:
        pool = EQUIVALENT_KINDS if equivalent else NONEQUIVALENT_KINDS
        present = {r.kind for r in self.results}
        return [k.value for k in pool if k.value in present]

    def worst_case(self, method: str, equivalent: bool, cls: str | None = None) -> float | None:
        accs = []
        for kind in self.kinds(equivalent):
            c, n = self.accuracy(method, kind, cls)
            if n:
                accs.append(c / n)
        return min(accs) if accs else None

    def undecided(self) -> list[RecordResult]:
        return [r for r in self.results if r.decision == UNDECIDED]

    def _view(self, cls: str | None) -> dict:
        view: dict = {}
        for method in self.methods:
            per_kind = {}
            for kind in self.kinds(True) + self.kinds(False):
                c, n = self.accuracy(method, kind, cls)
                if n:
                    per_kind[kind] = {"correct": c, "total": n, "accuracy": c / n}
            view[method] = {
                "kinds": per_kind,
                "worst_case": {
                    "equivalent": self.worst_case(method, True, cls),
                    "not_equivalent": self.worst_case(method, False, cls),
                },
            }
        return view

    def to_dict(self) -> dict:
        """Report JSON; deterministic, carries no wall-clock data."""
        return {
            "tool_version": self.version,
            "manifest_sha256": self.manifest_sha256,
            "finder": self.finder,
            "k": self.k,
            "tol": self.tol,
            "methods": list(self.methods),
            "pooled": self._view(None),
            "LP": self._view("LP"),
            "MILP": self._view("MILP"),
            "undecided": [
                {"id": r.id, "method": r.method, "reason": r.reason}
                for r in sorted(self.undecided(), key=lambda r: (r.id, r.method))
            ],
            "records": [
                {"id": r.id, "kind": r.kind, "class": r.problem_class, "equivalent": r.equivalent,
                 "method": r.method, "decision": r.decision, "correct": r.correct}
                for r in self.results
            ],
        }

    def render_table(self, cls: str | None = None) -> str:
        label = {m: "EquivaMap" if m == "equivamap" else m for m in self.methods}
        head = ["", *(label[m] for m in self.methods)]
        body: list[list[str]] = []
        for equivalent, title in ((True, "Equivalent Transformations"), (False, "Non-Equivalent Transformations")):
            kinds = self.kinds(equivalent)
            if not kinds:
                continue
            body.append([title])
            worst = [self.worst_case(m, equivalent, cls) for m in self.methods]
            body.append(["Worst Case", *("-" if w is None else f"{100 * w:.1f}%" for w in worst)])
            for kind in kinds:
                cells = []
                for m in self.methods:
                    c, n = self.accuracy(m, kind, cls)
                    cells.append(f"{_pct(c, n)} ({c}/{n})" if n else "-")
                body.append([TransformKind(kind).title, *cells])
        widths = [max(len(row[i]) for row in [head, *body] if len(row) > 1) for i in range(len(head))]

        def line(row):
            if len(row) == 1:
                return row[0]
            return "  ".join(cell.ljust(w) if i == 0 else cell.rjust(w) for i, (cell, w) in enumerate(zip(row, widths)))

        rule = "-" * (sum(widths) + 2 * (len(widths) - 1))
        out = [line(head), rule]
        for row in body:
            out.append(line(row))
            if len(row) == 1:
                out.append(rule)
        return "\n".join(out)

    def render_text(self) -> str:
        parts = [
            f"formeq {self.version}  finder={self.finder}  k={self.k}  tol={self.tol:g}",
            f"manifest sha256 {self.manifest_sha256}",
            "",
            "Accuracy (all records)",
            self.render_table(),
        ]
        for cls in ("LP", "MILP"):
            if any(r.problem_class == cls for r in self.results):
                parts += ["", f"Accuracy ({cls} records)", self.render_table(cls)]
        und = self.undecided()
        parts += ["", f"Undecided (counted incorrect): {len(und)}"]
        for r in sorted(und, key=lambda r: (r.id, r.method)):
            parts.append(f"  {r.id} [{r.method}] {r.reason}")
        return "\n".join(parts) + "\n"

    def timings_dict(self) -> dict:
        summary = {}
        for m in self.methods:
            rows = self.rows(m)
            summary[m] = {}
            for s in STAGES:
                xs = [float(r.timings.get(s, 0.0)) for r in rows]
                summary[m][s] = {
                    "mean": statistics.fmean(xs) if xs else 0.0,
                    "sd": statistics.pstdev(xs) if len(xs) > 1 else 0.0,
                }
        return {
            "summary": summary,
            "records": [{"id": r.id, "method": r.method, **{s: r.timings.get(s, 0.0) for s in STAGES}} for r in self.results],
        }

    def render_timings(self) -> str:
        t = self.timings_dict()["summary"]
        cols = ("Solving Time", "LLM Call Time", "WL-Test Time", "Total")
        lines = ["Method".ljust(12) + "".join(c.rjust(20) for c in cols)]
        for m in self.methods:
            cells = [f"{t[m][s]['mean']:.3f} ± {t[m][s]['sd']:.3f}" for s in STAGES]
            lines.append(m.ljust(12) + "".join(c.rjust(20) for c in cells))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> Path:
        """Write ``report.json`` (or the given .json path) plus .txt and timings siblings."""
        p = Path(path)
        if p.suffix != ".json":
            p.mkdir(parents=True, exist_ok=True)
            p = p / "report.json"
        else:
            p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        p.with_suffix(".txt").write_text(self.render_text(), encoding="utf-8")
        p.with_name(p.stem + ".timings.json").write_text(json.dumps(self.timings_dict(), indent=2) + "\n", encoding="utf-8")
        p.with_name(p.stem + ".timings.txt").write_text(self.render_timings(), encoding="utf-8")
        return p


def run_benchmark(
    dataset: str | Path | tuple[dict, Sequence[DatasetRecord]],
    methods: Sequence[str] = ("canonical", "execution", "wl", "equivamap"),
    finder: str = "ground-truth",
    k: int = 3,
    tol: float = TOL_FEAS,
    jobs: int = 1,
    llm_cfg=None,
    transport=None,
) -> BenchmarkReport:
    """Run every method over every record; results are ordered by record id."""
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {', '.join(METHODS)}")
    if finder not in FINDERS:
        raise ValueError(f"unknown finder {finder!r}; expected one of {', '.join(FINDERS)}")
    if isinstance(dataset, (str, Path)):
        manifest, records = load_dataset(dataset)
        digest = manifest_digest(manifest, (Path(dataset) / "manifest.json").read_bytes())
    else:
        manifest, records = dataset
        digest = manifest_digest(manifest)
    records = sorted(records, key=lambda r: r.id)
    work = [(r, tuple(methods), finder, k, tol, llm_cfg, transport) for r in records]
    uses_llm = "naive-llm" in methods or (finder == "llm" and "equivamap" in methods)
    if jobs > 1 and len(work) > 1:
        # transports hold locks and sockets, so LLM runs share a thread pool instead
        pool_cls = ThreadPoolExecutor if uses_llm else ProcessPoolExecutor
        with pool_cls(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_record, work))
    else:
        chunks = [_run_record(w) for w in work]
    results = [r for chunk in chunks for r in chunk]
    return BenchmarkReport(results, tuple(methods), finder, k, tol, digest)
