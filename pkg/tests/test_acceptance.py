"""The eight acceptance criteria; each prints one PASS/FAIL line."""
import json
import random
import time
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from formeq.bench import run_benchmark
from formeq.cli import EXIT_OK, main
from formeq.graph import build_bipartite, wl_equivalent
from formeq.instantiate import Row, instantiate
from formeq.llm import build_mapping_prompt, build_naive_prompt
from formeq.mapping import apply_mapping, mapping_to_json, parse_mapping_json
from formeq.solver import check_solution, objective_tolerance, solve_milp
from formeq.transform import EQUIVALENT_KINDS, NONEQUIVALENT_KINDS, build_dataset, load_corpus, load_dataset

from conftest import STABLE_SET, make, path_graph_data
from oracles import grid_optimum, random_milp
from test_mapping import TARGET, prompt_examples
from transcripts import write_transcript


@pytest.fixture
def verdict(capsys):
    def announce(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return announce


def test_criterion_1_ground_truth_closure(verdict):
    t0 = time.perf_counter()
    corpus = load_corpus()
    _, records = build_dataset(corpus, kinds=EQUIVALENT_KINDS, seed=0)
    failures = []
    for rec in records:
        ctx = rec.context(tol=1e-6)
        x_hat = apply_mapping(rec.ground_truth_mapping, ctx.alpha_model, ctx.alpha_prime_model,
                              ctx.alpha_prime_outcome.assignment)
        feasible = check_solution(ctx.alpha_model, x_hat, 1e-6).feasible
        value = float(ctx.alpha_model.objective_value(x_hat.values))
        z = ctx.alpha_outcome.objective
        if not (feasible and abs(value - z) <= objective_tolerance(z, 1e-6)):
            failures.append(rec.id)
    elapsed = time.perf_counter() - t0
    kinds = {r.kind for r in records}
    sources = {r.source for r in records}
    ok = not failures and len(kinds) == 6 and len(sources) >= 10 and elapsed < 60
    verdict(1, ok, f"{len(records) - len(failures)}/{len(records)} records close, {len(sources)} instances, "
                   f"{len(kinds)} kinds, {elapsed:.1f}s")


def pattern(report, method, kind):
    c, n = report.accuracy(method, kind.value)
    return c / n


def test_criterion_2_equivamap_pattern(dataset, verdict):
    gt = run_benchmark(dataset, ["equivamap"], "ground-truth")
    brute = run_benchmark(dataset, ["equivamap"], "brute")
    bad = []
    for k in EQUIVALENT_KINDS + NONEQUIVALENT_KINDS:
        if pattern(gt, "equivamap", k) != 1.0:
            bad.append(f"ground-truth {k.value}")
        floor = 0.9 if k.equivalent else 1.0
        if pattern(brute, "equivamap", k) < floor:
            bad.append(f"brute {k.value}")
    worst = min(pattern(brute, "equivamap", k) for k in EQUIVALENT_KINDS)
    verdict(2, not bad, "ground-truth 100% on all 9 kinds, brute worst equivalent kind "
                        f"{100 * worst:.1f}%" + (f"; off: {bad}" if bad else ""))


EXPECTED = {
    "execution": {"substitute_objective": 1, "add_slack": 1, "base10": 1, "valid_inequalities": 1,
                  "plus_minus_split": 1, "rescale": 0, "feasibility": 0, "random_order": 1, "loose_constraints": 1},
    "wl": {**{k.value: 0 for k in EQUIVALENT_KINDS}, **{k.value: 1 for k in NONEQUIVALENT_KINDS}},
    "canonical": {**{k.value: 0 for k in EQUIVALENT_KINDS}, **{k.value: 1 for k in NONEQUIVALENT_KINDS}},
}


def test_criterion_3_baseline_pattern(dataset, verdict):
    report = run_benchmark(dataset, ["canonical", "execution", "wl"])
    off = []
    for method, expected in EXPECTED.items():
        for kind, want in expected.items():
            c, n = report.accuracy(method, kind)
            if c != want * n:
                off.append(f"{method}/{kind} {c}/{n}")
    verdict(3, not off, "exact match on 27 cells" if not off else f"mismatches: {off}")


def test_criterion_4_solver_oracle(verdict):
    t0 = time.perf_counter()
    mismatches = []
    for seed in range(200):
        m = random_milp(np.random.default_rng(seed))
        ref = grid_optimum(m)
        out = solve_milp(m)
        if ref is None:
            good = out.status == "infeasible"
        else:
            good = out.status == "optimal" and abs(out.objective - ref) <= 1e-6
        if not good:
            mismatches.append(seed)
    elapsed = time.perf_counter() - t0
    verdict(4, not mismatches and elapsed < 120, f"{200 - len(mismatches)}/200 agree with grid enumeration, {elapsed:.1f}s")


def perturbed(m, rng, delta):
    """Copy of ``m`` with one existing objective, matrix or rhs entry moved by ``delta``."""
    where = rng.choice(["objective", "matrix", "rhs"])
    if where == "objective" or not m.rows:
        j = rng.randrange(m.n_cols)
        c = list(m.objective)
        c[j] += delta
        return replace(m, objective=tuple(c))
    i = rng.choice([i for i, r in enumerate(m.rows) if r.coefs] or [0])
    rows = list(m.rows)
    r = rows[i]
    if where == "matrix" and r.coefs:
        p = rng.randrange(len(r.coefs))
        coefs = list(r.coefs)
        coefs[p] = (coefs[p][0], coefs[p][1] + delta)
        rows[i] = Row(tuple(coefs), r.relation, r.rhs, r.origin)
    else:
        rows[i] = Row(r.coefs, r.relation, r.rhs + delta, r.origin)
    return replace(m, rows=tuple(rows))


def test_criterion_5_wl_invariance(verdict):
    models = [instantiate(e.formulation, e.instance) for e in load_corpus()[:10]]
    rng = random.Random(5)
    same = total = 0
    for m in models:
        g = build_bipartite(m)
        for _ in range(100):
            cols, rows = list(range(m.n_cols)), list(range(m.n_rows))
            rng.shuffle(cols)
            rng.shuffle(rows)
            total += 1
            same += wl_equivalent(g, build_bipartite(m.permuted(cols, rows)))
    deltas = [Fraction(101, 10**11), Fraction(1, 10**6), Fraction(1, 1000), Fraction(1)]
    distinguished = tries = 0
    for m in models:
        g = build_bipartite(m)
        for d in deltas:
            for sign in (1, -1):
                tries += 1
                distinguished += not wl_equivalent(g, build_bipartite(perturbed(m, rng, sign * d)))
    ok = same == total == 1000 and distinguished == tries
    verdict(5, ok, f"{same}/{total} permutations equivalent, {distinguished}/{tries} perturbations "
                   "(|delta| from 1.01e-9 to 1) distinguished")


SKELETON = """{
  "%s": [
    {
      "constant": constant_value_1,
      "variable": "variable_name_1"
    },
    {
      "constant": constant_value_2,
      "variable": "variable_name_2"
    },
    ...
  ]
}""" % TARGET


def test_criterion_6_wire_format(prompt_pairs, verdict):
    examples = prompt_examples()
    parsed = [parse_mapping_json(t) for t in examples]
    round_trips = all(
        json.loads(mapping_to_json(m)) == json.loads(t) and parse_mapping_json(mapping_to_json(m)) == m
        for m, t in zip(parsed, examples)
    )
    alpha, alpha_prime, _ = prompt_pairs["cleaning"]
    prompt = build_mapping_prompt(alpha, alpha_prime, TARGET).text
    ok = (len(parsed) == 4 and round_trips and "Provide only the mapping" in prompt and SKELETON in prompt
          and prompt == prompt_pairs["equivamap_prompt"])
    verdict(6, ok, "4 examples parse and round-trip; instruction sentence and JSON skeleton present verbatim")


def test_criterion_7_prompt_scaling(verdict):
    sizes, cols = [], []
    for n in (3, 30, 300):
        f, m = make(STABLE_SET, path_graph_data(n))
        cols.append(m.n_cols)
        sizes.append((len(build_mapping_prompt(f, f, "x").text.encode()),
                      len(build_naive_prompt(f, f).text.encode())))
    ok = len(set(sizes)) == 1 and cols == [3, 30, 300]
    verdict(7, ok, f"prompt bytes {sizes[0]} for |V| = 3, 30, 300")


def test_criterion_8_replay_determinism(tmp_path, verdict):
    ds = tmp_path / "ds"
    assert main(["gen", "--out", str(ds), "--seed", "0"]) == EXIT_OK
    _, records = load_dataset(ds)
    t = write_transcript(records, tmp_path / "transcript.jsonl")
    base = ["bench", str(ds), "--methods", "equivamap", "--finder", "llm", "--transcript", str(t)]
    assert main(base + ["--report", str(tmp_path / "r1")]) == EXIT_OK
    assert main(base + ["--report", str(tmp_path / "r2"), "--jobs", "4"]) == EXIT_OK
    r1, r2 = (tmp_path / "r1" / "report.json").read_bytes(), (tmp_path / "r2" / "report.json").read_bytes()
    timings = json.loads((tmp_path / "r1" / "report.timings.json").read_text())["records"]
    populated = all(
        set(r) >= {"solve_s", "llm_s", "wl_s", "total_s"} and r["total_s"] > 0 and r["llm_s"] > 0 and r["solve_s"] > 0
        for r in timings
    )
    header = (tmp_path / "r1" / "report.timings.txt").read_text().splitlines()[0].split()
    columns = all(c in " ".join(header) for c in ("Solving Time", "LLM Call Time", "WL-Test Time", "Total"))
    accuracy = json.loads(r1)["pooled"]
    ok = r1 == r2 and populated and columns and len(timings) == len(records)
    verdict(8, ok, f"report byte-identical across runs ({len(records)} records), timing columns populated"
                   f"{'' if ok else '; pooled ' + json.dumps(accuracy)[:200]}")
