import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formeq.expr import (
    Coef,
    ExpressionSyntaxError,
    LinearExpr,
    NonlinearExpressionError,
    ParamRef,
    VarRef,
    canonicalize,
    parse_linear_expr,
)
from formeq.model import (
    FormulationError,
    declaration_key,
    load_formulation,
    rename_formulation,
    serialize_formulation,
)

from conftest import FIXTURES, STABLE_SET, make


def coef_of(e: LinearExpr, name: str) -> Coef:
    return dict(e.terms)[VarRef(name, ())]


def test_plain_terms():
    e = parse_linear_expr("x + 2*y", ["x", "y"])
    assert coef_of(e, "x").number == 1
    assert coef_of(e, "y").number == 2
    assert len(e.terms) == 2


def test_latex_digit_expression():
    e = parse_linear_expr(r"H \cdot (f_0*10^0 + f_1*10^1)", ["f_0", "f_1"])
    h = Coef.param(ParamRef("H", ()))
    assert coef_of(e, "f_0") == h
    assert coef_of(e, "f_1") == h * Coef.const(10)


def test_sum_node():
    e = parse_linear_expr("sum(i in V, x[i])", ["x"])
    assert not e.terms
    ((idx, s, body),) = e.sums
    assert (idx, s) == ("i", "V")
    assert [v.name for v, _ in body.terms] == ["x"]


def test_merge_and_cancel():
    assert parse_linear_expr("x + x", ["x"]) == parse_linear_expr("2*x", ["x"])
    assert parse_linear_expr("2*y + x - 2*y", ["x", "y"]) == parse_linear_expr("x", ["x"])


def test_latex_aliases_and_rejections():
    assert parse_linear_expr(r"3 \times x", ["x"]) == parse_linear_expr("3*x", ["x"])
    with pytest.raises(ExpressionSyntaxError):
        parse_linear_expr(r"x + \alpha", ["x"])
    with pytest.raises(NonlinearExpressionError):
        parse_linear_expr("x*y", ["x", "y"])
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_linear_expr("x + * 2", ["x"])
    assert info.value.pos is not None


NAMES = ["a", "b", "c", "d"]
PARAMS = ["P", "Q"]


@st.composite
def expressions(draw):
    """Random linear expression text with its term list (for permutation checks)."""
    parts = []
    for _ in range(draw(st.integers(1, 8))):
        kind = draw(st.sampled_from(["var", "pvar", "const", "param"]))
        k = draw(st.integers(-9, 9))
        if kind == "var":
            parts.append(f"{k}*{draw(st.sampled_from(NAMES))}")
        elif kind == "pvar":
            parts.append(f"{k}*{draw(st.sampled_from(PARAMS))}*{draw(st.sampled_from(NAMES))}")
        elif kind == "const":
            parts.append(str(k))
        else:
            parts.append(f"{k}*{draw(st.sampled_from(PARAMS))}")
    return parts


@settings(max_examples=1000, deadline=None)
@given(expressions())
def test_canonicalize_idempotent(parts):
    e = parse_linear_expr(" + ".join(parts), NAMES)
    assert canonicalize(e) == e
    assert canonicalize(canonicalize(e)) == canonicalize(e)


@settings(max_examples=200, deadline=None)
@given(expressions(), st.randoms(use_true_random=False))
def test_term_order_irrelevant(parts, rnd):
    shuffled = list(parts)
    rnd.shuffle(shuffled)
    assert parse_linear_expr(" + ".join(parts), NAMES) == parse_linear_expr(" + ".join(shuffled), NAMES)


@settings(max_examples=300, deadline=None)
@given(expressions())
def test_render_parse_round_trip(parts):
    e = parse_linear_expr(" + ".join(parts), NAMES)
    assert parse_linear_expr(e.render(), NAMES) == e


def test_laundromat_document():
    f = load_formulation((FIXTURES / "prompt_pairs" / "laundromat_a.json").read_text())
    assert len(f.parameters) == 8
    assert len(f.variables) == 2
    assert len(f.constraints) == 4
    assert f.objective.sense == "min"


def test_empty_constraints_document():
    f = make({"variables": {"x": {"description": "", "type": "continuous"}}})
    assert f.constraints == ()


def test_namespace_collision():
    with pytest.raises(FormulationError):
        make({
            "parameters": {"x": {"description": "", "shape": []}},
            "variables": {"x": {"description": "", "type": "continuous"}},
        })


def test_schema_violation():
    with pytest.raises(FormulationError):
        load_formulation(json.dumps({"variables": {}}))
    with pytest.raises(FormulationError):
        make({"variables": {"x": {"description": "", "type": "integer", "lower": 3, "upper": 1}}})


def test_default_bounds():
    f = make({"variables": {
        "x": {"description": "", "type": "continuous"},
        "b": {"description": "", "type": "binary"},
        "z": {"description": "", "type": "integer", "lower": None, "upper": 5},
    }})
    assert (f.variables["x"].lower, f.variables["x"].upper) == (0, None)
    assert (f.variables["b"].lower, f.variables["b"].upper) == (0, 1)
    assert (f.variables["z"].lower, f.variables["z"].upper) == (None, 5)


FORMULATION_FILES = sorted(p for p in FIXTURES.rglob("*.json") if "instance" not in p.name)


@pytest.mark.parametrize("path", FORMULATION_FILES, ids=lambda p: f"{p.parent.name}/{p.stem}")
def test_round_trip_fixtures(path):
    f = load_formulation(path.read_text())
    again = load_formulation(serialize_formulation(f))
    assert again == f
    assert serialize_formulation(again) == serialize_formulation(f)


def test_round_trip_corpus(corpus):
    for e in corpus:
        f = e.formulation
        assert load_formulation(serialize_formulation(f)) == f


def test_rename_changes_declaration_keys():
    f = make(STABLE_SET)
    g = rename_formulation(f, {"x": "pick", "Inc": "A"})
    assert [declaration_key(c) for c in g.constraints] != [declaration_key(c) for c in f.constraints]
    assert rename_formulation(g, {"pick": "x", "A": "Inc"}) == f


def test_display_keeps_source_text():
    f = make(STABLE_SET)
    assert f.constraints[0].display() == "sum(i in V, Inc[e,i]*x[i]) <= 1"
    g = rename_formulation(f, {"x": "y"})
    assert "y[i]" in g.constraints[0].display()


def test_exact_coefficients():
    e = parse_linear_expr("0.1*x + 1/3*y", ["x", "y"])
    assert coef_of(e, "x").number == Fraction(1, 10)
    assert coef_of(e, "y").number == Fraction(1, 3)
