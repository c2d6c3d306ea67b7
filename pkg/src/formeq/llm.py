"""Chat-completion client, mapping prompts, transcript replay and the naive-LLM check.

Prompts enumerate variable *declarations*, never expanded indices, so their
size does not depend on instance data. Every live exchange can be recorded
to a JSON-lines transcript and replayed offline.
"""
from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from string import Template
from typing import Protocol

import httpx

from .mapping import Mapping, MappingError, parse_mapping_json
from .model import Formulation, VariableDecl, _num

__all__ = [
    "LlmConfig",
    "TransportError",
    "Transport",
    "HttpTransport",
    "ReplayTransport",
    "RecordingTransport",
    "PromptBundle",
    "prompt_document",
    "build_mapping_prompt",
    "build_naive_prompt",
    "LlmAttempt",
    "LlmFinder",
    "llm_finder",
    "parse_naive_verdict",
    "naive_llm_check",
]


@dataclass(frozen=True)
class LlmConfig:
    endpoint: str = ""
    model: str = ""
    api_key_env: str = "LLM_API_KEY"
    temperature: float = 0.7
    timeout: float = 60.0
    max_retries: int = 2
    k: int = 3
    max_in_flight: int = 4

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("K must be >= 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0 or self.max_in_flight < 1:
            raise ValueError("max_retries must be >= 0 and max_in_flight >= 1")

    @classmethod
    def from_env(cls, **overrides) -> "LlmConfig":
        base = dict(endpoint=os.environ.get("LLM_API_BASE", ""), model=os.environ.get("LLM_MODEL", ""))
        base.update(overrides)
        return cls(**base)


class TransportError(RuntimeError):
    pass


class Transport(Protocol):
    def complete(self, prompt: str, *, pair_id: str, attempt: int) -> str: ...


class HttpTransport:
    """Minimal chat-completions POST: ``{model, messages, temperature}``."""

    def __init__(self, cfg: LlmConfig, client: httpx.Client | None = None):
        if not cfg.endpoint:
            raise TransportError("no endpoint configured (set LLM_API_BASE)")
        self.cfg = cfg
        url = cfg.endpoint.rstrip("/")
        self.url = url if url.endswith("/chat/completions") else url + "/chat/completions"
        self.client = client or httpx.Client(timeout=cfg.timeout)

    def complete(self, prompt: str, *, pair_id: str, attempt: int) -> str:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.cfg.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        body = {
            "model": self.cfg.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.cfg.temperature,
        }
        try:
            r = self.client.post(self.url, json=body, headers=headers)
            r.raise_for_status()
            return r.json()["choices"][0]["message"]["content"]
        except (httpx.HTTPError, KeyError, IndexError, TypeError, ValueError) as exc:
            raise TransportError(f"chat completion failed: {exc}") from exc


class ReplayTransport:
    """Serves responses from a transcript keyed by (pair id, attempt, prompt).

    Repeated requests under one key (retries) get successive entries.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[tuple, list[str]] = {}
        self._served: dict[tuple, int] = {}
        self._lock = threading.Lock()
        with self.path.open(encoding="utf-8") as fh:
            for n, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    key = (str(rec["pair_id"]), int(rec["attempt"]), rec["prompt"])
                    self._entries.setdefault(key, []).append(rec["response"])
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise TransportError(f"{self.path}:{n}: bad transcript line: {exc}") from None

    def complete(self, prompt: str, *, pair_id: str, attempt: int) -> str:
        key = (pair_id, attempt, prompt)
        with self._lock:
            responses = self._entries.get(key)
            i = self._served.get(key, 0)
            if not responses or i >= len(responses):
                raise TransportError(f"no recorded response for pair {pair_id!r} attempt {attempt}")
            self._served[key] = i + 1
            return responses[i]


class RecordingTransport:
    def __init__(self, inner: Transport, path: str | Path):
        self.inner = inner
        self.path = Path(path)
        self._lock = threading.Lock()

    def complete(self, prompt: str, *, pair_id: str, attempt: int) -> str:
        response = self.inner.complete(prompt, pair_id=pair_id, attempt=attempt)
        rec = {
            "pair_id": pair_id,
            "attempt": attempt,
            "prompt": prompt,
            "response": response,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        with self._lock, self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        return response


# ---------------------------------------------------------------------------
# prompts


def _template(name: str) -> Template:
    return Template(resources.files("formeq").joinpath("data", "prompts", name).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class PromptBundle:
    prompts: dict[str, str]
    token_estimate: int = 0

    @classmethod
    def of(cls, prompts: dict[str, str]) -> "PromptBundle":
        # rough 4-bytes-per-token estimate
        return cls(prompts, sum(len(p.encode("utf-8")) for p in prompts.values()) // 4)

    @property
    def text(self) -> str:
        return "\n".join(self.prompts.values())


def _constraint_text(c) -> str:
    text = c.display()
    if c.quantifiers:
        text += ", " + ", ".join(f"for all {i} in {s}" for i, s in c.quantifiers)
    return text


def _alpha_block(f: Formulation, v: str) -> str:
    d = f.variables[v]
    lines = [f"- **Name:** {v}", f"- **Description:** {d.description}", f"- **Constraints involving {v}:**"]
    for c in f.constraints_with(v):
        lines.append(f"  - Description: {c.description}")
        lines.append(f"    Formulation: {_constraint_text(c)}")
    lines.append(f"- **In Objective Function:** {'Yes' if f.in_objective(v) else 'No'}")
    return "\n".join(lines)


def _alpha_prime_block(f: Formulation, v: str) -> str:
    d = f.variables[v]
    lines = [f"- **Name:** {v}", f"  **Description:** {d.description}", f"  **Constraints involving {v}:**"]
    for c in f.constraints_with(v):
        lines.append(f"    - Description: {c.description}")
        lines.append(f"      Formulation: {_constraint_text(c)}")
    lines.append(f"  **In Objective Function:** {'Yes' if f.in_objective(v) else 'No'}")
    return "\n".join(lines)


def build_mapping_prompt(alpha: Formulation, alpha_prime: Formulation, target: str) -> PromptBundle:
    if target not in alpha.variables:
        raise KeyError(f"{target!r} is not a variable of alpha")
    text = _template("equivamap.txt").substitute(
        alpha_block=_alpha_block(alpha, target),
        alpha_prime_blocks="\n\n".join(_alpha_prime_block(alpha_prime, w) for w in alpha_prime.variables),
        target=target,
    )
    return PromptBundle.of({target: text})


def _default_bounds(d: VariableDecl) -> bool:
    if d.var_type == "binary":
        return d.lower == 0 and d.upper == 1
    return d.lower == 0 and d.upper is None


def prompt_document(f: Formulation) -> dict:
    """The formulation in the JSON shape used inside the naive prompt."""
    doc: dict = {"parametrized_description": f.description}
    if f.keywords:
        doc["keywords"] = list(f.keywords)
    doc["parameters"] = {n: {"description": p.description, "shape": list(p.shape)} for n, p in f.parameters.items()}
    if f.sets:
        doc["sets"] = {n: {"description": s.description} for n, s in f.sets.items()}
    variables = {}
    for n, d in f.variables.items():
        item = {"description": d.description, "type": d.var_type, "shape": list(d.shape)}
        if not _default_bounds(d):
            item["lower"], item["upper"] = _num(d.lower), _num(d.upper)
        variables[n] = item
    doc["variables"] = variables
    cons = []
    for c in f.constraints:
        item = {"description": c.description}
        if c.quantifiers:
            item["forall"] = [list(q) for q in c.quantifiers]
        item["formulation"] = c.display()
        if c.code is not None:
            item["code"] = dict(c.code)
        cons.append(item)
    doc["constraints"] = cons
    prefix = "Min" if f.objective.sense == "min" else "Max"
    obj = {"description": f.objective.description, "formulation": f"{prefix} \\ {f.objective.display()}"}
    if f.objective.code is not None:
        obj["code"] = dict(f.objective.code)
    doc["objective"] = obj
    return doc


def build_naive_prompt(alpha: Formulation, alpha_prime: Formulation) -> PromptBundle:
    text = _template("naive.txt").substitute(
        problem_a=json.dumps(prompt_document(alpha), indent=2, ensure_ascii=False),
        problem_b=json.dumps(prompt_document(alpha_prime), indent=2, ensure_ascii=False),
    )
    return PromptBundle.of({"naive": text})


# ---------------------------------------------------------------------------
# finder


@dataclass
class LlmAttempt:
    attempt: int
    mapping: Mapping | None
    error: str = ""
    requests: int = 0
    seconds: float = 0.0


def _query_variable(transport, prompt: str, target: str, pair_id: str, attempt: int, retries: int, stats: LlmAttempt):
    last = ""
    for _ in range(retries + 1):
        t0 = time.perf_counter()
        try:
            stats.requests += 1
            response = transport.complete(prompt, pair_id=pair_id, attempt=attempt)
        finally:
            stats.seconds += time.perf_counter() - t0
        try:
            parsed = parse_mapping_json(response)
        except MappingError as exc:
            last = str(exc)
            continue
        if target not in parsed.entries:
            last = f"response has no entry for {target!r}"
            continue
        return parsed.entries[target]
    raise MappingError(f"unparseable response for {target!r} after {retries + 1} tries: {last}")


def _run_attempt(alpha, alpha_prime, prompts, cfg, transport, pair_id, attempt) -> LlmAttempt:
    stats = LlmAttempt(attempt, None)
    entries = {}
    try:
        for v in alpha.variables:
            entries[v] = _query_variable(transport, prompts[v], v, pair_id, attempt, cfg.max_retries, stats)
    except (TransportError, MappingError) as exc:
        stats.error = str(exc)
        return stats
    try:
        stats.mapping = Mapping(entries)
    except MappingError as exc:
        stats.error = str(exc)
    return stats


def llm_finder(
    alpha: Formulation,
    alpha_prime: Formulation,
    cfg: LlmConfig,
    transport: Transport | None = None,
    pair_id: str = "pair",
) -> list[LlmAttempt]:
    """K independent attempts, each querying once per alpha variable declaration."""
    transport = transport or HttpTransport(cfg)
    prompts = {v: build_mapping_prompt(alpha, alpha_prime, v).prompts[v] for v in alpha.variables}
    with ThreadPoolExecutor(max_workers=min(cfg.max_in_flight, cfg.k)) as pool:
        futures = [
            pool.submit(_run_attempt, alpha, alpha_prime, prompts, cfg, transport, pair_id, a) for a in range(cfg.k)
        ]
        return [fu.result() for fu in futures]


@dataclass
class LlmFinder:
    """Finder adapter: ``finder(ctx) -> list of Mapping | None``; keeps LLM wall time."""

    cfg: LlmConfig
    transport: Transport | None = None
    seconds: float = 0.0
    attempts: list = field(default_factory=list)

    def __call__(self, ctx) -> list[Mapping | None]:
        t0 = time.perf_counter()
        self.attempts = llm_finder(ctx.alpha, ctx.alpha_prime, self.cfg, self.transport, ctx.pair_id)
        self.seconds += time.perf_counter() - t0
        return [a.mapping for a in self.attempts]


def parse_naive_verdict(response: str) -> bool:
    """True for a final "Equivalent" line; anything else counts as not equivalent."""
    lines = [ln.strip() for ln in response.strip().splitlines() if ln.strip()]
    if not lines:
        return False
    last = lines[-1].strip("*_`\"'.:! ").lower()
    return last == "equivalent"


def naive_llm_check(
    alpha: Formulation,
    alpha_prime: Formulation,
    cfg: LlmConfig,
    transport: Transport | None = None,
    pair_id: str = "pair",
) -> tuple[str, float]:
    """Return (decision, seconds); transport failure gives "undecided"."""
    transport = transport or HttpTransport(cfg)
    prompt = build_naive_prompt(alpha, alpha_prime).prompts["naive"]
    t0 = time.perf_counter()
    try:
        response = transport.complete(prompt, pair_id=pair_id, attempt=0)
    except TransportError:
        return "undecided", time.perf_counter() - t0
    decision = "equivalent" if parse_naive_verdict(response) else "not_equivalent"
    return decision, time.perf_counter() - t0
