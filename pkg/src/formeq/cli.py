"""``formeq`` command line: gen, check, bench, solve.

Exit codes: 0 equivalent / success, 1 not equivalent, 2 I/O or schema
error, 3 undecided.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .bench import FINDERS, METHODS, run_benchmark, run_method
from .checkers import EQUIVALENT, NOT_EQUIVALENT, Verdict
from .instantiate import InstanceData, InstanceError, instantiate
from .llm import TransportError
from .mapping import MappingError, parse_mapping_json
from .model import FormulationError, load_formulation
from .solver import TOL_FEAS, solve
from .transform import DatasetRecord, TransformKind, generate_dataset, load_corpus

log = logging.getLogger("formeq")

EXIT_OK, EXIT_NOT_EQUIVALENT, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2, 3
_EXIT = {EQUIVALENT: EXIT_OK, NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT}

INPUT_ERRORS = (OSError, FormulationError, InstanceError, MappingError, json.JSONDecodeError, KeyError)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_pair(alpha_path, alpha_prime_path, instance_path):
    alpha = load_formulation(_read(alpha_path))
    alpha_prime = load_formulation(_read(alpha_prime_path))
    doc = json.loads(_read(instance_path))
    shapes = {n: p.shape for f in (alpha, alpha_prime) for n, p in f.parameters.items()}
    instance = InstanceData.from_dict(doc, shapes=shapes)
    # surface missing or mis-shaped data now rather than as an undecided verdict
    instantiate(alpha, instance)
    instantiate(alpha_prime, instance)
    return alpha, alpha_prime, instance


def _transport(args):
    from .llm import HttpTransport, LlmConfig, RecordingTransport, ReplayTransport

    cfg = LlmConfig.from_env(k=args.k)
    if args.transcript:
        return cfg, ReplayTransport(args.transcript)
    if args.finder == "llm" or getattr(args, "method", None) == "naive-llm" or "naive-llm" in (getattr(args, "methods", None) or ()):
        inner = HttpTransport(cfg)
        return cfg, RecordingTransport(inner, args.record) if args.record else inner
    return cfg, None


def _ground_truth(args, alpha_path: str):
    """Mapping from --mapping (bare mapping or meta.json), else a meta.json beside alpha."""
    path = args.mapping or str(Path(alpha_path).with_name("meta.json"))
    if not Path(path).exists():
        if args.mapping:
            raise InputError(f"cannot read {path}")
        return None
    doc = json.loads(_read(path))
    if isinstance(doc, dict) and "ground_truth_mapping" in doc:
        doc = doc["ground_truth_mapping"]
    return None if doc is None else parse_mapping_json(json.dumps(doc))


def cmd_gen(args) -> int:
    try:
        corpus = load_corpus(args.corpus)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not corpus:
        print(f"error: no instances found in corpus {args.corpus}", file=sys.stderr)
        return EXIT_INPUT
    kinds = [TransformKind.parse(k) for k in args.kinds] if args.kinds else list(TransformKind)
    manifest = generate_dataset(corpus, kinds, args.seed, args.out, args.jobs)
    for kind, slot in manifest["kinds"].items():
        print(f"{kind:22s} {slot['count']:3d}  (LP {slot['LP']}, MILP {slot['MILP']})")
    print(f"{manifest['total']} records, {len(manifest['skipped'])} skipped -> {args.out}")
    return EXIT_OK


def _check_once(alpha, alpha_prime, instance, args, pair_id: str, mapping) -> Verdict:
    rec = DatasetRecord(pair_id, TransformKind.SUBSTITUTE_OBJECTIVE, True, alpha, alpha_prime, instance, mapping, {}, args.seed)
    cfg, transport = _transport(args) if args.method in ("equivamap", "naive-llm") else (None, None)
    return run_method(rec, args.method, args.finder, args.k, args.tol, cfg, transport)


def cmd_check(args) -> int:
    alpha, alpha_prime, instance = _load_pair(args.alpha, args.alpha_prime, args.instance)
    mapping = _ground_truth(args, args.alpha) if args.method == "equivamap" and args.finder == "ground-truth" else None
    pair_id = args.pair_id or Path(args.alpha).resolve().parent.name
    forward = _check_once(alpha, alpha_prime, instance, args, pair_id, mapping)
    out = forward.to_json()
    if args.both_directions:
        reverse = _check_once(alpha_prime, alpha, instance, args, pair_id + ":reverse", None)
        out = {"alpha_prime_to_alpha": out, "alpha_to_alpha_prime": reverse.to_json()}
    print(json.dumps(out, indent=2))
    return _EXIT.get(forward.decision, EXIT_UNDECIDED)


def cmd_bench(args) -> int:
    if not (Path(args.dataset) / "manifest.json").exists():
        raise InputError(f"{args.dataset} has no manifest.json")
    methods = args.methods or ["canonical", "execution", "wl", "equivamap"]
    cfg, transport = _transport(args)
    report = run_benchmark(args.dataset, methods, args.finder, args.k, args.tol, args.jobs, cfg, transport)
    path = report.write(args.report)
    sys.stdout.write(report.render_text())
    print(f"report written to {path}")
    return EXIT_OK


def cmd_solve(args) -> int:
    f = load_formulation(_read(args.formulation))
    data = InstanceData.from_dict(json.loads(_read(args.instance)), f)
    out = solve(instantiate(f, data), node_limit=args.node_limit, time_limit=args.time_limit)
    print(json.dumps(out.to_dict(), indent=2))
    return EXIT_OK if out.is_optimal else EXIT_UNDECIDED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=TOL_FEAS, help="feasibility/objective tolerance (default 1e-6)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--k", type=int, default=3, help="mapping-finder attempts (default 3)")
    common.add_argument("-v", "--verbose", action="store_true")

    llm = argparse.ArgumentParser(add_help=False)
    llm.add_argument("--finder", choices=FINDERS, default="ground-truth")
    llm.add_argument("--transcript", help="replay LLM responses from a JSONL transcript")
    llm.add_argument("--record", help="append live LLM exchanges to a JSONL transcript")

    p = argparse.ArgumentParser(prog="formeq", description="Check equivalence of optimization formulations.")
    p.add_argument("--version", action="version", version=f"formeq {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a transformation dataset")
    g.add_argument("--corpus", default=None, help="corpus directory (default: bundled seed corpus)")
    g.add_argument("--out", required=True)
    g.add_argument("--kinds", nargs="+", metavar="KIND", help=", ".join(k.value for k in TransformKind))
    g.set_defaults(fn=cmd_gen)

    c = sub.add_parser("check", parents=[common, llm], help="check one formulation pair")
    c.add_argument("alpha")
    c.add_argument("alpha_prime")
    c.add_argument("instance")
    c.add_argument("--method", choices=METHODS, default="equivamap")
    c.add_argument("--mapping", help="ground-truth mapping JSON or meta.json (default: meta.json beside alpha)")
    c.add_argument("--both-directions", action="store_true", help="also check alpha -> alpha_prime")
    c.add_argument("--pair-id", help="transcript key for LLM exchanges (default: alpha's directory name)")
    c.set_defaults(fn=cmd_check)

    b = sub.add_parser("bench", parents=[common, llm], help="benchmark methods over a dataset")
    b.add_argument("dataset")
    b.add_argument("--methods", nargs="+", choices=METHODS)
    b.add_argument("--report", default="report.json", help="report path (.json) or directory")
    b.set_defaults(fn=cmd_bench)

    s = sub.add_parser("solve", parents=[common], help="solve one instance and print the outcome")
    s.add_argument("formulation")
    s.add_argument("instance")
    s.add_argument("--node-limit", type=int, default=100_000)
    s.add_argument("--time-limit", type=float, default=30.0)
    s.set_defaults(fn=cmd_solve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except (InputError, TransportError, *INPUT_ERRORS, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
