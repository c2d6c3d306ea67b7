import json
from pathlib import Path

import pytest

from formeq.instantiate import InstanceData, instantiate
from formeq.model import formulation_from_dict, load_formulation
from formeq.transform import build_dataset, load_corpus

FIXTURES = Path(__file__).parent / "fixtures"


def load_pair(directory: Path, a="alpha.json", b="alpha_prime.json", inst="instance.json"):
    alpha = load_formulation((directory / a).read_text())
    alpha_prime = load_formulation((directory / b).read_text())
    shapes = {n: p.shape for f in (alpha, alpha_prime) for n, p in f.parameters.items()}
    data = InstanceData.from_dict(json.loads((directory / inst).read_text()), shapes=shapes)
    return alpha, alpha_prime, data


def make(doc: dict, data: dict | None = None):
    """Formulation (and model when ``data`` is given) from plain dicts."""
    base = {"description": "", "parameters": {}, "sets": {}, "variables": {}, "constraints": [],
            "objective": {"description": "", "sense": "min", "formulation": "0"}}
    base.update(doc)
    f = formulation_from_dict(base)
    if data is None:
        return f
    return f, instantiate(f, InstanceData.from_dict(data, f))


def path_graph_data(n: int) -> dict:
    nodes = [str(i) for i in range(1, n + 1)]
    edges = [f"{i}-{i + 1}" for i in range(1, n)]
    inc = [[int(k in (i, i + 1)) for k in range(1, n + 1)] for i in range(1, n)]
    return {"sets": {"V": nodes, "E": edges}, "parameters": {"Inc": inc}}


STABLE_SET = {
    "description": "Largest stable set of a graph.",
    "parameters": {"Inc": {"description": "Edge-node incidence", "shape": ["E", "V"]}},
    "sets": {"V": {"description": "Nodes"}, "E": {"description": "Edges"}},
    "variables": {"x": {"description": "Whether node i is chosen", "type": "binary", "shape": ["V"]}},
    "constraints": [{"description": "Edge constraint", "forall": [["e", "E"]], "formulation": "sum(i in V, Inc[e,i]*x[i]) <= 1"}],
    "objective": {"description": "Chosen nodes", "sense": "max", "formulation": "sum(i in V, x[i])"},
}


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def dataset(corpus):
    return build_dataset(corpus, seed=0)


@pytest.fixture(scope="session")
def stable_pair():
    return load_pair(FIXTURES / "stable_pair")


@pytest.fixture(scope="session")
def prompt_pairs():
    d = FIXTURES / "prompt_pairs"
    return {
        "cleaning": load_pair(d, "cleaning_alpha.json", "cleaning_alpha_prime.json", "cleaning_instance.json"),
        "laundromat": load_pair(d, "laundromat_a.json", "laundromat_b.json", "laundromat_instance.json"),
        "equivamap_prompt": (d / "equivamap_prompt.txt").read_text(),
        "naive_prompt": (d / "naive_prompt.txt").read_text(),
    }
