import itertools
import json
import random
from fractions import Fraction

import pytest

from formeq.expr import parse_linear_expr
from formeq.instantiate import Assignment, InstanceData, InstanceError, evaluate, instance_to_dict, instantiate

from conftest import STABLE_SET, make, path_graph_data


def test_three_path_stable_set():
    f, m = make(STABLE_SET, path_graph_data(3))
    assert m.columns == (("x", ("1",)), ("x", ("2",)), ("x", ("3",)))
    assert m.integer == (True, True, True)
    assert [(r.coefs, r.relation, r.rhs) for r in m.rows] == [
        (((0, 1), (1, 1)), "<=", 1),
        (((1, 1), (2, 1)), "<=", 1),
    ]
    assert [r.origin for r in m.rows] == ["c0[e=1-2]", "c0[e=2-3]"]


def test_scalar_model():
    doc = {
        "parameters": {"P": {"description": "", "shape": []}},
        "variables": {"a": {"description": "", "type": "continuous"}, "b": {"description": "", "type": "integer"}},
        "constraints": [{"description": "", "formulation": "a + b <= P"}, {"description": "", "formulation": "a >= 1"}],
        "objective": {"description": "", "sense": "min", "formulation": "a + P*b"},
    }
    f, m = make(doc, {"parameters": {"P": 4}})
    assert (m.n_cols, m.n_rows) == (2, 2)
    assert m.objective == (1, 4)


def test_knapsack_expansion():
    doc = {
        "parameters": {"W": {"description": "", "shape": ["I"]}, "V": {"description": "", "shape": ["I"]},
                       "C": {"description": "", "shape": []}},
        "sets": {"I": {"description": ""}},
        "variables": {"x": {"description": "", "type": "binary", "shape": ["I"]}},
        "constraints": [{"description": "", "formulation": "sum(i in I, W[i]*x[i]) <= C"}],
        "objective": {"description": "", "sense": "max", "formulation": "sum(i in I, V[i]*x[i])"},
    }
    data = {"sets": {"I": ["a", "b", "c", "d"]}, "parameters": {"W": [2, 3, 4, 5], "V": [4, 5, 6, 7], "C": 7}}
    f, m = make(doc, data)
    assert m.n_cols == 4 and m.n_rows == 1
    (row,) = m.rows
    assert [q for _, q in row.coefs] == [2, 3, 4, 5] and row.rhs == 7
    assert m.objective == (4, 5, 6, 7)


def test_evaluate():
    f, m = make(STABLE_SET, path_graph_data(3))
    data = InstanceData.from_dict(path_graph_data(3), f)
    x = Assignment(m.columns, (1, 0, 1))
    assert evaluate(f.objective.expr, data, {}, x) == 2
    e = parse_linear_expr("x + 2*y", ["x", "y"])
    assert evaluate(e, data, {}, Assignment((("x", ()), ("y", ())), (1, 2))) == 5
    empty = InstanceData({"V": ()}, {})
    assert evaluate(f.objective.expr, empty, {}, Assignment((), ())) == 0


def test_errors():
    with pytest.raises(InstanceError):
        make(STABLE_SET, {"sets": {"V": ["1"]}, "parameters": {}})
    bad = path_graph_data(3)
    bad["parameters"]["Inc"] = [[1, 1, 0]]
    with pytest.raises(InstanceError):
        make(STABLE_SET, bad)
    doc = dict(STABLE_SET, constraints=[{"description": "", "formulation": "x['9'] <= 1"}])
    with pytest.raises(InstanceError):
        make(doc, path_graph_data(3))


def test_empty_set_gives_no_rows():
    f, m = make(STABLE_SET, {"sets": {"V": ["1", "2"], "E": []}, "parameters": {"Inc": []}})
    assert m.n_rows == 0 and m.n_cols == 2


def test_deterministic(corpus):
    for e in corpus:
        assert instantiate(e.formulation, e.instance) == instantiate(e.formulation, e.instance)


def test_constraint_permutation_consistency(corpus):
    rng = random.Random(3)
    for e in corpus:
        f = e.formulation
        order = list(range(len(f.constraints)))
        rng.shuffle(order)
        g = f.with_changes(constraints=tuple(f.constraints[k] for k in order))
        a, b = instantiate(f, e.instance), instantiate(g, e.instance)
        rows_a = {r.origin: r for r in a.rows}
        # origin tags name the declaration position, so remap them through the permutation
        for r in b.rows:
            k = int(r.origin[1:].split("[")[0])
            tag = f"c{order[k]}" + r.origin[len(f"c{k}"):]
            assert (r.coefs, r.relation, r.rhs) == (rows_a[tag].coefs, rows_a[tag].relation, rows_a[tag].rhs)


def test_evaluate_matches_flattened_rows(corpus):
    rng = random.Random(7)
    for e in corpus:
        f, m = e.formulation, instantiate(e.formulation, e.instance)
        x = Assignment(m.columns, tuple(Fraction(rng.randint(-5, 5)) for _ in m.columns))
        rows = iter(m.rows)
        for c in f.constraints:
            names = [i for i, _ in c.quantifiers]
            for labels in itertools.product(*(e.instance.sets[s] for _, s in c.quantifiers)):
                binding = dict(zip(names, labels))
                r = next(rows)
                lhs_minus_rhs = evaluate(c.lhs - c.rhs, e.instance, binding, x)
                dot = sum(q * x.values[j] for j, q in r.coefs)
                assert dot - r.rhs == lhs_minus_rhs


def test_instance_round_trip(corpus):
    for e in corpus:
        doc = instance_to_dict(e.instance, [e.formulation])
        again = InstanceData.from_dict(json.loads(json.dumps(doc)), e.formulation)
        assert again == e.instance
