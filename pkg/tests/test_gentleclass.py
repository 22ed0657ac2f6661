import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverext.gentleclass import (NotApplicable, classify_derived_discrete, clock_condition, cycle_structure,
                                   dynkin_hereditary_type, is_gentle, recheck_verdict)
from quiverext.quiver import parse_presentation

from conftest import pres

ALL_FIXTURES = ["diamond_ba.quiver", "diamond_ba_dc.quiver", "diamond.quiver", "diamond_commutative.quiver",
                "a3.quiver", "d4.quiver", "dual_numbers.quiver", "empty.quiver", "two_points.quiver",
                "diamond_plus_vertex.quiver", "diamond_extra_arrow.quiver", "diamond_tail.quiver"]


def test_gentle():
    assert is_gentle(pres("diamond_ba.quiver"))[0]
    assert is_gentle(pres("diamond_ba_dc.quiver"))[0]
    ok, why = is_gentle(pres("diamond_commutative.quiver"))
    assert not ok and any("monomial" in w for w in why)


def test_cycle_structure():
    rep = cycle_structure(pres("diamond.quiver"))
    comp = rep.components[0]
    assert comp.betti == 1
    orient = dict(comp.cycle)
    assert orient["a"] == orient["b"] and orient["c"] == orient["d"] and orient["a"] != orient["c"]
    assert rep.betti_numbers == [1]
    assert cycle_structure(pres("a3.quiver")).betti_numbers == [0]
    assert cycle_structure(pres("diamond_extra_arrow.quiver")).betti_numbers == [2]


def test_clock():
    c = clock_condition(pres("diamond_ba.quiver"))
    assert (c.clockwise, c.counterclockwise, c.holds) == (1, 0, True)
    c = clock_condition(pres("diamond_ba_dc.quiver"))
    assert (c.clockwise, c.counterclockwise, c.holds) == (1, 1, False)
    with pytest.raises(NotApplicable):
        clock_condition(pres("a3.quiver"))


def test_dynkin():
    assert dynkin_hereditary_type(pres("a3.quiver")) == "A3"
    assert dynkin_hereditary_type(pres("d4.quiver")) == "D4"
    assert dynkin_hereditary_type(pres("diamond.quiver")) is None
    e6 = parse_presentation("field Q\nvertices 1 2 3 4 5 6\narrow a : 1 -> 2\narrow b : 2 -> 3\n"
                            "arrow c : 3 -> 4\narrow d : 4 -> 5\narrow e : 6 -> 3\n")
    assert dynkin_hereditary_type(e6) == "E6"


@pytest.mark.parametrize("name, label", [
    ("diamond_ba.quiver", "DerivedDiscrete(GentleOneCycleClock)"),
    ("diamond_ba_dc.quiver", "NotDerivedDiscrete(GentleOneCycleNoClock)"),
    ("empty.quiver", "DerivedDiscrete(HereditaryDynkin(A1))"),
    ("a3.quiver", "DerivedDiscrete(HereditaryDynkin(A3))"),
    ("d4.quiver", "DerivedDiscrete(HereditaryDynkin(D4))"),
    ("diamond.quiver", "NotDerivedDiscrete(GentleOneCycleNoClock)"),
    ("dual_numbers.quiver", "DerivedDiscrete(GentleOneCycleClock)"),
])
def test_classification(name, label):
    assert classify_derived_discrete(pres(name)).label == label


@pytest.mark.parametrize("name", ["diamond_commutative.quiver", "diamond_extra_arrow.quiver", "diamond_tail.quiver"])
def test_unknown_cases(name):
    assert classify_derived_discrete(pres(name)).status == "Unknown"


def test_off_cycle_relation_is_flagged():
    c = clock_condition(pres("diamond_tail.quiver"))
    assert c.off_cycle
    assert "off" in classify_derived_discrete(pres("diamond_tail.quiver")).reason


def test_disconnected():
    v = classify_derived_discrete(pres("diamond_plus_vertex.quiver"))
    assert v.status == "DerivedDiscrete"
    assert len(v.evidence["components"]) == 2


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_evidence_replays(name):
    p = pres(name)
    assert recheck_verdict(p, classify_derived_discrete(p))


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_reversal_invariance(name):
    p = pres(name)
    assert classify_derived_discrete(p).label == classify_derived_discrete(p, reverse=True).label
    try:
        fwd, bwd = clock_condition(p), clock_condition(p, reverse=True)
    except NotApplicable:
        return
    assert (fwd.clockwise, fwd.counterclockwise) == (bwd.counterclockwise, bwd.clockwise)
    assert fwd.holds == bwd.holds


def relabelled(p, seed):
    rng = random.Random(seed)
    vs = list(p.quiver.vertices)
    arrs = [a.label for a in p.quiver.arrows]
    new_v = [f"v{i}" for i in range(len(vs))]
    new_a = [f"x{i}" for i in range(len(arrs))]
    rng.shuffle(new_v)
    rng.shuffle(new_a)
    vorder, aorder = vs[:], arrs[:]
    rng.shuffle(vorder)
    rng.shuffle(aorder)
    return p.relabel(dict(zip(vs, new_v)), dict(zip(arrs, new_a)), vorder, aorder)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ALL_FIXTURES), st.integers(0, 10 ** 6))
def test_relabel_invariance(name, seed):
    p = pres(name)
    q = relabelled(p, seed)
    assert classify_derived_discrete(p).label == classify_derived_discrete(q).label
    try:
        c1 = clock_condition(p)
    except NotApplicable:
        with pytest.raises(NotApplicable):
            clock_condition(q)
        return
    c2 = clock_condition(q)
    assert c1.holds == c2.holds
    assert sorted((c1.clockwise, c1.counterclockwise)) == sorted((c2.clockwise, c2.counterclockwise))
