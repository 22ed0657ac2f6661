import pytest

from quiverext.algebra import (Module, NonSplitSemisimpleQuotient, PositiveCharacteristic, basic_reduction,
                               block_algebras, block_decomposition, direct_product, gabriel_quiver,
                               is_projective_right, lift_idempotents, load_algebra_json, radical_via_trace,
                               regular_module, span_basis)
from quiverext.exactfield import Matrix
from quiverext.extensions import load_group_action, skew_group_algebra
from quiverext.gentleclass import classify_derived_discrete
from quiverext.quiver import path_basis_algebra

from conftest import alg, fixture_path, pres


def manual(dim, product, unit, field="Q", radical=None):
    sc = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for k, c in product(i, j).items():
                sc[i][j][k] = c
    data = {"field": field, "dimension": dim, "unit": unit, "structureConstants": sc}
    if radical is not None:
        data["radicalBasis"] = radical
    return load_algebra_json(data)


def matrix_algebra_2():
    # E11, E12, E21, E22
    def prod(i, j):
        r1, c1 = divmod(i, 2)
        r2, c2 = divmod(j, 2)
        return {2 * r1 + c2: 1} if c1 == r2 else {}
    return manual(4, prod, [1, 0, 0, 1])


def group_algebra_z2(field="Q"):
    return manual(2, lambda i, j: {(i + j) % 2: 1}, [1, 0], field)


def dual_numbers_manual():
    return manual(2, lambda i, j: {i + j: 1} if i + j < 2 else {}, [1, 0])


def span_equal(u, w, field, n):
    return span_basis(u, field, n) == span_basis(list(u) + list(w), field, n) == span_basis(w, field, n)


def test_radical_via_trace_matches_designated():
    a = alg("diamond_ba.quiver")
    rad = radical_via_trace(a)
    assert len(rad) == 5
    assert span_equal(rad, a.get_radical(), a.field, a.dim)
    assert radical_via_trace(alg("two_points.quiver")) == []
    assert len(radical_via_trace(dual_numbers_manual())) == 1


def test_trace_radical_needs_char_zero():
    with pytest.raises(PositiveCharacteristic):
        radical_via_trace(alg("diamond_ba_f2.quiver"))


def test_lift_idempotents():
    a = alg("diamond_ba.quiver")
    dec = lift_idempotents(a)
    assert len(dec.idempotents) == 4 and len(dec.iso_classes) == 4
    total = a.zero()
    for i, e in enumerate(dec.idempotents):
        assert a.mul(e, e) == e
        total = a.add(total, e)
        for j, f in enumerate(dec.idempotents):
            if i != j:
                assert not any(a.mul(e, f))
    assert total == a.unit

    g = group_algebra_z2()
    dec = lift_idempotents(g)
    half = g.field("1/2")
    assert sorted(map(tuple, dec.idempotents)) == sorted([(half, half), (half, -half)])
    assert len(dec.iso_classes) == 2

    m2 = matrix_algebra_2()
    dec = lift_idempotents(m2)
    assert len(dec.idempotents) == 2 and len(dec.iso_classes) == 1


def test_non_split_quotient_reported():
    # Q[x]/(x^2+1) is a field over Q that does not split
    k = manual(2, lambda i, j: {0: -1} if i + j == 2 else {i + j: 1}, [1, 0])
    with pytest.raises(NonSplitSemisimpleQuotient):
        lift_idempotents(k)


def test_blocks():
    assert len(block_decomposition(alg("diamond_ba.quiver"))) == 1
    blocks = block_algebras(group_algebra_z2())
    assert [b.dim for b in blocks] == [1, 1]
    prod = direct_product(alg("diamond_ba.quiver"), path_basis_algebra(pres("empty.quiver")))
    assert sorted(b.dim for b in block_algebras(prod)) == [1, 9]


def test_basic_reduction():
    a = alg("diamond_ba.quiver")
    basic, mults = basic_reduction(a)
    assert basic.dim == 9 and mults == [1, 1, 1, 1]
    basic, mults = basic_reduction(matrix_algebra_2())
    assert basic.dim == 1 and mults == [2]
    two = alg("two_points.quiver")
    act = load_group_action(fixture_path("swap_two_points.json").read_text(), two)
    phi = skew_group_algebra(two, act)
    basic, mults = basic_reduction(phi.target)
    assert basic.dim == 1 and mults == [2]
    again, m2 = basic_reduction(basic)
    assert again.dim == 1 and m2 == [1]


def _shape(p):
    vs = list(p.quiver.vertices)
    counts = {}
    for a in p.quiver.arrows:
        key = (vs.index(a.source), vs.index(a.target))
        counts[key] = counts.get(key, 0) + 1
    return len(vs), sorted(counts.values()), sorted(counts)


@pytest.mark.parametrize("name", ["diamond_ba.quiver", "diamond_ba_dc.quiver", "diamond.quiver", "a3.quiver",
                                  "d4.quiver", "dual_numbers.quiver", "empty.quiver", "two_points.quiver",
                                  "diamond_commutative.quiver"])
def test_gabriel_roundtrip(name):
    p = pres(name)
    g = gabriel_quiver(path_basis_algebra(p))
    assert _shape(g) == _shape(p)
    assert path_basis_algebra(g).dim == path_basis_algebra(p).dim


def test_gabriel_recovers_relations():
    g = gabriel_quiver(alg("diamond_ba.quiver"))
    assert len(g.relations) == 1
    assert classify_derived_discrete(g).label == "DerivedDiscrete(GentleOneCycleClock)"
    g = gabriel_quiver(dual_numbers_manual())
    assert len(g.quiver.arrows) == 1 and len(g.relations) == 1


@pytest.mark.parametrize("name", ["diamond_ba.quiver", "diamond_ba_dc.quiver", "dual_numbers.quiver", "a3.quiver"])
def test_regular_module_is_projective(name):
    a = alg(name)
    ok, mults = is_projective_right(regular_module(a, "right"))
    assert ok and all(m == 1 for m in mults)


def test_direct_sum_of_projectives():
    a = alg("diamond_ba.quiver")
    e1 = a.basis_vector(a.vertex_idempotents[0])
    basis = [x for x in (a.mul(e1, a.basis_vector(k)) for k in range(a.dim)) if any(x)]
    basis = span_basis(basis, a.field, a.dim)
    piv = [next(i for i, c in enumerate(b) if c) for b in basis]
    n = len(basis)
    mats = []
    for k in range(a.dim):
        cols = [[a.mul(b, a.basis_vector(k))[p] for p in piv] for b in basis]
        block = [[cols[j][i] for j in range(n)] for i in range(n)]
        full = [row + [a.field.zero] * n for row in block] + [[a.field.zero] * n + row for row in block]
        mats.append(Matrix(a.field, full, 2 * n))
    m = Module(a, 2 * n, mats, "right")
    m.check()
    ok, mults = is_projective_right(m)
    assert ok and sorted(mults) == [0, 0, 0, 2]
