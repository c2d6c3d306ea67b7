import json
import re
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formeq.instantiate import Assignment, instantiate
from formeq.mapping import (
    FinderConfig,
    Mapping,
    MappingError,
    MappingIncompleteError,
    MappingResolutionError,
    apply_mapping,
    brute_force_finder,
    heuristic_finder,
    identity_mapping,
    mapping_to_json,
    parse_mapping_json,
)
from formeq.transform import TransformKind

from conftest import FIXTURES, make


def prompt_examples() -> list[str]:
    text = (FIXTURES / "prompt_pairs" / "equivamap_prompt.txt").read_text()
    tail = text.split("**Examples:**", 1)[1]
    return re.findall(r"^\{\n.*?^\}$", tail, re.MULTILINE | re.DOTALL)


TARGET = "OdorRemovingChemicalUnits"


def test_four_examples_present():
    assert len(prompt_examples()) == 4


def test_examples_parse():
    one, two, unit, sentinel = (parse_mapping_json(t) for t in prompt_examples())
    assert one.entries[TARGET] == ((Fraction(1, 10), "a"),)
    assert two.entries[TARGET] == ((Fraction(1, 10), "a"), (Fraction(1, 100), "b"))
    assert unit.entries[TARGET] == ((Fraction(1), "a"),)
    assert sentinel.entries[TARGET] is None


def test_examples_round_trip():
    for text in prompt_examples():
        m = parse_mapping_json(text)
        assert json.loads(mapping_to_json(m)) == json.loads(text)
        assert parse_mapping_json(mapping_to_json(m)) == m


def test_parse_tolerates_fences_and_chatter():
    body = '{"x": [{"constant": "1/60", "variable": "y"}]}'
    assert parse_mapping_json(f"```json\n{body}\n```").entries["x"] == ((Fraction(1, 60), "y"),)
    assert parse_mapping_json(f"Sure, here it is: {body} Hope that helps.").entries["x"][0][0] == Fraction(1, 60)


@pytest.mark.parametrize(
    "text",
    [
        "no json here",
        "[1, 2]",
        '{"x": {"constant": 1, "variable": "y"}}',
        '{"x": [{"constant": 1}]}',
        '{"x": [{"constant": true, "variable": "y"}]}',
        '{"x": [{"constant": "lots", "variable": "y"}]}',
        '{"x": [{"constant": 1, "variable": ""}]}',
        '{"x": [{"constant": 1, "variable": "y"}, {"constant": 2, "variable": "y"}]}',
    ],
)
def test_parse_rejects(text):
    with pytest.raises(MappingError):
        parse_mapping_json(text)


def scalar_pair():
    data = {"sets": {}, "parameters": {}}
    cont = {"description": "", "type": "continuous"}
    am = make({"variables": {"x": cont}}, data)[1]
    pm = make({"variables": {n: cont for n in ("y", "d_0", "d_1", "d_2")}}, data)[1]
    return am, pm


def test_apply_scale_and_digits():
    am, pm = scalar_pair()
    x = Assignment(pm.columns, (120, 3, 2, 1))
    scaled = parse_mapping_json('{"x": [{"constant": "1/60", "variable": "y"}]}')
    assert apply_mapping(scaled, am, pm, x).values == (2,)
    digits = Mapping({"x": ((Fraction(1), "d_0"), (Fraction(10), "d_1"), (Fraction(100), "d_2"))})
    assert apply_mapping(digits, am, pm, x).values == (123,)


def test_apply_identity_stable_pair(stable_pair):
    alpha, alpha_prime, data = stable_pair
    am, pm = instantiate(alpha, data), instantiate(alpha_prime, data)
    x = Assignment(pm.columns, (1, 0, 0, 1, 0))
    f = identity_mapping(alpha.variables, {v: w for v, w in zip(alpha.variables, alpha_prime.variables)})
    assert apply_mapping(f, am, pm, x).values == (1, 0, 0, 1, 0)


def test_apply_set_indexed_and_broadcast():
    doc = {"sets": {"V": {"description": ""}},
           "variables": {"x": {"description": "", "type": "continuous", "shape": ["V"]}}}
    data = {"sets": {"V": ["a", "b", "c"]}, "parameters": {}}
    _, am = make(doc, data)
    doc2 = {"sets": {"V": {"description": ""}},
            "variables": {"y": {"description": "", "type": "continuous", "shape": ["V"]},
                          "s": {"description": "", "type": "continuous"}}}
    _, pm = make(doc2, data)
    x = Assignment(pm.columns, (1, 2, 3, 10))
    f = Mapping({"x": ((Fraction(2), "y"), (Fraction(-1), "s"))})
    assert apply_mapping(f, am, pm, x).values == (-8, -6, -4)


def test_apply_errors():
    am, pm = scalar_pair()
    x = Assignment(pm.columns, (1, 2, 3, 4))
    with pytest.raises(MappingIncompleteError):
        apply_mapping(Mapping({}), am, pm, x)
    with pytest.raises(MappingIncompleteError):
        apply_mapping(Mapping({"x": None}), am, pm, x)
    with pytest.raises(MappingResolutionError):
        apply_mapping(Mapping({"x": ((Fraction(1), "nope"),)}), am, pm, x)
    with pytest.raises(MappingError):
        apply_mapping(Mapping({"x": ((Fraction(1), "y"),)}), am, pm, Assignment(pm.columns[:2], (1, 2)))

    doc = {"sets": {"V": {"description": ""}},
           "variables": {"x": {"description": "", "type": "continuous", "shape": ["V"]}}}
    _, vm = make(doc, {"sets": {"V": ["a", "b"]}, "parameters": {}})
    _, wm = make(dict(doc, variables={"y": doc["variables"]["x"]}), {"sets": {"V": ["a", "b", "c"]}, "parameters": {}})
    with pytest.raises(MappingError):
        apply_mapping(Mapping({"x": ((Fraction(1), "y"),)}), vm, wm, Assignment(wm.columns, (1, 2, 3)))


fracs = st.fractions(min_value=-100, max_value=100, max_denominator=50)


@settings(max_examples=200, deadline=None)
@given(st.lists(fracs, min_size=4, max_size=4), st.lists(fracs, min_size=4, max_size=4),
       st.lists(fracs, min_size=4, max_size=4), fracs)
def test_apply_is_linear(coefs, u, v, lam):
    am, pm = scalar_pair()
    f = Mapping({"x": tuple((k, w) for k, w in zip(coefs, ("y", "d_0", "d_1", "d_2")) if k)})

    def ap(vals):
        return apply_mapping(f, am, pm, Assignment(pm.columns, tuple(vals))).values[0]

    assert ap([a + b for a, b in zip(u, v)]) == ap(u) + ap(v)
    assert ap([lam * a for a in u]) == lam * ap(u)


def test_heuristic_exact_names_first():
    f = make({"variables": {"x": {"description": "", "type": "integer"}, "y": {"description": "", "type": "continuous"}}})
    ms = heuristic_finder(f, f)
    assert ms[0] == identity_mapping(["x", "y"])


def test_heuristic_matches_type_and_shape():
    a = make({"variables": {"x": {"description": "", "type": "integer"}, "y": {"description": "", "type": "continuous"}}})
    b = make({"variables": {"q": {"description": "", "type": "continuous"}, "p": {"description": "", "type": "integer"}}})
    ms = heuristic_finder(a, b)
    assert ms == [Mapping({"x": ((Fraction(1), "p"),), "y": ((Fraction(1), "q"),)})]
    c = make({"variables": {"q": {"description": "", "type": "continuous"}}})
    assert heuristic_finder(a, c) == []


def record(dataset, kind, source=None):
    _, records = dataset
    return next(r for r in records if r.kind is kind and (source is None or r.source == source))


@pytest.mark.parametrize("kind", [TransformKind.RESCALE, TransformKind.PLUS_MINUS_SPLIT, TransformKind.BASE10,
                                  TransformKind.ADD_SLACK])
def test_brute_recovers(dataset, kind):
    rec = record(dataset, kind)
    m = brute_force_finder(rec.alpha, rec.alpha_prime, rec.instance)
    assert m is not None
    assert rec.context().verifier.verify(m).ok


def test_brute_finds_rescale_factor(dataset):
    _, records = dataset
    rec = next(r for r in records if r.kind is TransformKind.RESCALE and r.details.get("factor") == 60
               and any(abs(k) != 1 for terms in r.ground_truth_mapping.entries.values() for k, _ in terms))
    m = brute_force_finder(rec.alpha, rec.alpha_prime, rec.instance)
    assert m is not None and rec.context().verifier.verify(m).ok


def test_brute_digits_on_cleaning_pair(prompt_pairs):
    alpha, alpha_prime, data = prompt_pairs["cleaning"]
    m = brute_force_finder(alpha, alpha_prime, data)
    assert m.entries["CleansingChemicalUnits"] == ((1, "v_0"), (10, "v_1"), (100, "v_2"))
    assert m.entries["OdorRemovingChemicalUnits"] == ((1, "f_0"), (10, "f_1"))


def test_brute_none_for_random_order(dataset):
    rec = record(dataset, TransformKind.RANDOM_ORDER)
    assert brute_force_finder(rec.alpha, rec.alpha_prime, rec.instance) is None


def test_brute_respects_disabled_templates(prompt_pairs):
    alpha, alpha_prime, data = prompt_pairs["cleaning"]
    cfg = FinderConfig(templates_enabled=frozenset({"identity", "scale"}), general_terms=0)
    assert brute_force_finder(alpha, alpha_prime, data, cfg) is None


def test_finder_config_validation():
    with pytest.raises(ValueError):
        FinderConfig(max_terms=0)
    with pytest.raises(ValueError):
        FinderConfig(coefficient_pool=())
    f = make({"variables": {"x": {"description": "", "type": "integer"}}})
    with pytest.raises(ValueError):
        brute_force_finder(f, f)


def test_render():
    m = Mapping({"x": ((Fraction(1, 60), "y"),), "z": None})
    assert m.render() == "x = 1/60*y; z = none"
    assert Mapping({"x": ((Fraction(1), "p"), (Fraction(-1), "n"))}).render() == "x = 1*p - 1*n"
    with pytest.raises(MappingError):
        Mapping({"x": ((Fraction(1), "y"), (Fraction(2), "y"))})
