import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverext.complexes import (BudgetExceeded, DepthInsufficient, Frame, InfiniteFieldUnsupported, ProjComplex,
                                 complexes_isomorphic, extend_scalars_complex, finiteness_sampler, good_truncate,
                                 lemma_bound, lemma_iso_roundtrip, minimal_proj_resolution,
                                 module_from_representation, modules_isomorphic, projective_module, random_complex,
                                 simple_module)
from quiverext.extensions import base_change, identity_extension, skew_group_algebra, trivial_action

from conftest import alg, fixture_path


def frame(name):
    return Frame.of(alg(name))


def load_complex(fr, name):
    return ProjComplex.from_json(json.loads(fixture_path(name).read_text()), fr)


def stalk(fr, label, degree=0):
    return ProjComplex(fr, {degree: [fr.index(label)]})


def test_projective_dimensions():
    fr = frame("diamond_ba.quiver")
    assert [fr.proj_dim(v) for v in range(4)] == [4, 2, 2, 1]


def test_cohomology_vectors():
    fr = frame("diamond_ba.quiver")
    assert ProjComplex(fr, {}).cohomology_dims() == {}
    assert stalk(fr, "1").cohomology_dims() == {0: 4}
    fr2 = frame("diamond_ba_dc.quiver")
    res = minimal_proj_resolution(simple_module(fr2, fr2.index("1")), 2)
    assert res.cohomology_dims()[0] == 1
    assert res.to_module_complex().cohomology_dims() == res.cohomology_dims()


def test_component_vectors():
    fr = frame("diamond_ba.quiver")
    c = ProjComplex(fr, {0: [fr.index("1")], 1: [fr.index("4")]})
    assert c.component_dims() == {0: 4, 1: 1}
    d = c.direct_sum(c)
    assert d.component_dims() == {0: 8, 1: 2}


def test_entries_are_checked():
    fr = frame("diamond_ba.quiver")
    bad = {"terms": {"0": ["1"], "1": ["2"]}, "differentials": {"0": [[{"a": "1"}]]}}
    with pytest.raises(ValueError):
        ProjComplex.from_json(bad, fr)


def test_minimality():
    fr = frame("diamond_ba.quiver")
    assert stalk(fr, "3").is_minimal()
    cone = load_complex(fr, "cone_p1.json")
    assert not cone.is_minimal()
    m = cone.minimize()
    assert m.is_zero() and m.is_minimal()


def test_minimize_examples():
    fr = frame("diamond_ba.quiver")
    c = load_complex(fr, "three_term.json")
    assert c.is_minimal()
    assert c.minimize().terms == c.terms
    u = load_complex(fr, "unit_plus_radical.json")
    m = u.minimize()
    assert m.cohomology_dims() == u.cohomology_dims() == {0: 2}
    assert m.component_dims() == {0: 2}


def test_brutal_truncation():
    fr = frame("diamond_ba.quiver")
    c = load_complex(fr, "three_term.json")
    assert c.brutal_truncate(-5).terms == c.terms
    assert c.brutal_truncate(1).is_zero()
    mid = c.brutal_truncate(-1)
    assert sorted(mid.terms) == [-1, 0] and mid.d_squared_zero()


def test_good_truncation():
    fr = frame("diamond_ba.quiver")
    s = stalk(fr, "1").to_module_complex()
    assert good_truncate(s, 0).cohomology_dims() == {0: 4}
    assert good_truncate(s, 1).cohomology_dims() == {}
    res = minimal_proj_resolution(simple_module(fr, fr.index("2")), 3).to_module_complex()
    top = good_truncate(res, 0)
    assert top.terms[0].dim == 1 and top.cohomology_dims() == {0: 1}
    c = load_complex(fr, "unit_plus_radical.json").to_module_complex()
    for t in (0, 1):
        kept = {i: h for i, h in c.cohomology_dims().items() if i >= t}
        assert good_truncate(c, t).cohomology_dims() == kept


def test_resolutions():
    fr = frame("diamond_ba.quiver")
    p1 = minimal_proj_resolution(projective_module(fr, [fr.index("1")]), 4)
    assert p1.terms == {0: [fr.index("1")]}
    s2 = minimal_proj_resolution(simple_module(fr, fr.index("2")), 4)
    assert s2.terms == {-1: [fr.index("4")], 0: [fr.index("2")]}
    assert s2.to_json()["differentials"]["-1"] == [[{"b": "1"}]]
    dual = frame("dual_numbers.quiver")
    per = minimal_proj_resolution(simple_module(dual, 0), 5)
    assert per.terms == {i: [0] for i in range(-5, 1)}
    assert per.is_minimal() and per.cohomology_dims() == {-5: 1, 0: 1}


def test_lemma_bound_examples():
    q = frame("empty.quiver")
    assert lemma_bound(q, {0: 1}, -2) == {-2: 1, -1: 1, 0: 1}
    assert all(v == 0 for v in lemma_bound(q, {}, -2).values())
    fr = frame("diamond_ba.quiver")
    assert fr.max_proj_dim() == 4
    assert lemma_bound(fr, {0: 1}, -1) == {-1: 16, 0: 4}


@pytest.mark.parametrize("name", ["diamond_ba.quiver", "diamond_ba_dc.quiver", "dual_numbers.quiver"])
def test_bound_holds_for_simples(name):
    fr = frame(name)
    for v in range(len(fr)):
        for depth in range(7):
            r = minimal_proj_resolution(simple_module(fr, v), depth)
            b = lemma_bound(fr, {0: 1}, -depth)
            assert all(d <= b[i] for i, d in r.component_dims().items())


def test_extension_of_scalars():
    a = alg("diamond_ba.quiver")
    fr = Frame.of(a)
    res = minimal_proj_resolution(simple_module(fr, 0), 3)
    same = extend_scalars_complex(res, identity_extension(a))
    assert same.component_dims() == res.component_dims()
    bc = extend_scalars_complex(res, base_change(a, "Q[x]/(x^2-2)"))
    assert bc.component_dims() == {i: 2 * d for i, d in res.component_dims().items()}
    assert bc.is_minimal() and bc.d_squared_zero()
    sk = extend_scalars_complex(res, skew_group_algebra(a, trivial_action(a)))
    assert sk.component_dims() == {i: 2 * d for i, d in res.component_dims().items()}
    # B = A x A: every degree carries one summand per block
    assert all(len(sk.term(i)) == 2 * len(res.term(i)) for i in res.degrees)


def test_sampler_examples():
    with pytest.raises(InfiniteFieldUnsupported):
        finiteness_sampler(frame("diamond_ba.quiver"), {0: 1})
    assert finiteness_sampler(frame("empty_f2.quiver"), {0: 1, 1: 1}).class_count == 2
    fr = frame("diamond_ba_f2.quiver")
    a = finiteness_sampler(fr, {-1: 1, 0: 2}, radical_only=True)
    b = finiteness_sampler(fr, {-1: 1, 0: 2}, radical_only=True)
    assert a.class_count == b.class_count == 5
    assert [r.to_json() for r in a.representatives] == [r.to_json() for r in b.representatives]
    assert "infinite field" in a.caveat
    with pytest.raises(BudgetExceeded):
        finiteness_sampler(fr, {-1: 4, 0: 4}, budget=10)


def test_roundtrip_examples():
    fr = frame("diamond_ba.quiver")
    s1, s2 = simple_module(fr, 0), simple_module(fr, 1)
    same = lemma_iso_roundtrip(s1, s1, -1)
    assert same.truncations_equivalent and same.modules_isomorphic and same.consistent
    diff = lemma_iso_roundtrip(s1, s2, -1)
    assert diff.truncations_equivalent is False and diff.modules_isomorphic is False
    with pytest.raises(DepthInsufficient):
        lemma_iso_roundtrip(s1, s2, 0)


def test_isomorphism_over_f3_is_exact():
    a = alg("diamond_ba_f3.quiver")
    f = a.field
    x = module_from_representation(a, {"1": 1, "2": 1}, {"a": [[1]]})
    y = module_from_representation(a, {"1": 1, "2": 1}, {"a": [[2]]})
    z = module_from_representation(a, {"1": 1, "2": 1}, {"a": [[0]]})
    assert modules_isomorphic(x, y)[0] is True
    assert modules_isomorphic(x, z)[0] is False
    px = minimal_proj_resolution(x, 3)
    pz = minimal_proj_resolution(z, 3)
    assert complexes_isomorphic(px, pz)[0] is False
    assert f.characteristic == 3


def test_json_roundtrip():
    fr = frame("diamond_ba.quiver")
    c = load_complex(fr, "three_term.json")
    again = ProjComplex.from_json(json.dumps(c.to_json()), fr)
    assert again.to_json() == c.to_json()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["diamond_ba.quiver", "diamond_ba_dc.quiver", "dual_numbers.quiver"]),
       st.integers(0, 10 ** 9))
def test_minimize_properties(name, seed):
    fr = frame(name)
    c = random_complex(fr, random.Random(seed))
    assert c.d_squared_zero()
    m = c.minimize()
    assert m.d_squared_zero() and m.is_minimal()
    assert m.cohomology_dims() == c.cohomology_dims()
    cd, md = c.component_dims(), m.component_dims()
    assert all(md.get(i, 0) <= cd.get(i, 0) for i in set(cd) | set(md))
