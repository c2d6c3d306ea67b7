import functools
import hashlib
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formeq.graph import build_bipartite, dump_graph, stable_hash, wl_equivalent, wl_refine
from formeq.instantiate import ConcreteModel, Row, instantiate
from formeq.transform import TransformKind, load_corpus, transform

from conftest import STABLE_SET, make, path_graph_data


def three_path():
    return make(STABLE_SET, path_graph_data(3))[1]


def test_three_path_graph():
    g = build_bipartite(three_path())
    assert len(g.variable_nodes) == 3
    assert len(g.constraint_nodes) == 2
    assert len(g.edges) == 4


def test_zero_row_and_bound_only_model():
    m = ConcreteModel((("x", ()),), "min", (Fraction(1),), Fraction(0), (Row((), "<=", Fraction(1), "c0"),),
                      (Fraction(1),), (None,), (False,))
    g = build_bipartite(m)
    assert len(g.constraint_nodes) == 1 and not g.edges
    m2 = ConcreteModel((("x", ()),), "min", (Fraction(1),), Fraction(0), (), (Fraction(1),), (None,), (False,))
    assert build_bipartite(m2).n_nodes == 1


def test_symmetric_isolated_nodes():
    m = ConcreteModel((("a", ()), ("b", ())), "min", (Fraction(1), Fraction(1)), Fraction(0), (),
                      (Fraction(0),) * 2, (None,) * 2, (False,) * 2)
    lab = wl_refine(build_bipartite(m))
    for t in range(lab.iterations + 1):
        assert lab.variable_labels[t][0] == lab.variable_labels[t][1]


def test_three_path_refinement():
    lab = wl_refine(build_bipartite(three_path()))
    first, middle, last = lab.variable_labels[1]
    assert first == last != middle
    assert len(set(lab.variable_labels[0])) == 1


def test_max_iters_zero_rejected():
    g = build_bipartite(three_path())
    with pytest.raises(ValueError):
        wl_refine(g, 0)
    with pytest.raises(ValueError):
        wl_equivalent(g, g, 0)


def test_label_multiset_size_constant(corpus):
    for e in corpus:
        g = build_bipartite(instantiate(e.formulation, e.instance))
        lab = wl_refine(g)
        for t in range(lab.iterations + 1):
            assert sum(lab.multiset(t).values()) == g.n_nodes


def test_stable_pair_wl(stable_pair):
    alpha, alpha_prime, data = stable_pair
    assert not wl_equivalent(build_bipartite(instantiate(alpha, data)), build_bipartite(instantiate(alpha_prime, data)))


def test_slack_pair_differs(corpus):
    rec = transform(corpus[0], TransformKind.ADD_SLACK, 1)
    ctx = rec.context()
    assert not wl_equivalent(build_bipartite(ctx.alpha_model), build_bipartite(ctx.alpha_prime_model))


def test_stable_hash_fixed():
    # pinned value: labels must not depend on the process or platform
    assert stable_hash("var", "1.0", "0.0", "inf", "int") == 0xDBD86754083F3F36
    blob = b"".join(len(p).to_bytes(4, "little") + p for p in (b"var", b"1.0", b"0.0", b"inf", b"int"))
    assert stable_hash("var", "1.0", "0.0", "inf", "int") == int.from_bytes(
        hashlib.blake2b(blob, digest_size=8).digest(), "little"
    )
    assert stable_hash("ab", "c") != stable_hash("a", "bc")


def test_dump_format():
    text = dump_graph(build_bipartite(three_path()))
    lines = text.splitlines()
    assert lines[0].startswith("v 0 obj=-1.0")
    assert sum(ln.startswith("c ") for ln in lines) == 2
    assert lines[-1] == "e 2 1 1.0"


@functools.cache
def corpus_models():
    return [instantiate(e.formulation, e.instance) for e in load_corpus()]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_permutation_invariance(pick, seed):
    models = corpus_models()
    m = models[pick % len(models)]
    rng = random.Random(seed)
    cols, rows = list(range(m.n_cols)), list(range(m.n_rows))
    rng.shuffle(cols)
    rng.shuffle(rows)
    assert wl_equivalent(build_bipartite(m), build_bipartite(m.permuted(cols, rows)))

