import pytest

from quiverext.algebra import block_algebras, is_projective_right, lift_idempotents
from quiverext.extensions import (InseparablePolynomial, InvalidGroupAction, TensorOverA, base_change,
                                  classify_algebra, identity_extension, load_group_action, quotient_extension,
                                  restriction_modules,
                                  run_consistency_experiment, separability_idempotent, skew_group_algebra,
                                  split_witness, trivial_action, verify_separability, verify_split, witness_report)

from conftest import alg, fixture_path, pres


def test_base_change_dimensions():
    phi = base_change(alg("diamond_ba.quiver"), "Q[x]/(x^2-2)")
    assert phi.target.dim == 18
    assert len(classify_algebra(phi.target)) == 1
    k = base_change(alg("empty.quiver"), "Q[x]/(x^2-2)")
    assert k.target.dim == 2
    e = base_change(alg("empty.quiver"), "Q[x]/(x^2-1)")
    assert e.flags["etale"] and len(block_algebras(e.target)) == 2


def test_inseparable_polynomial_rejected():
    with pytest.raises(InseparablePolynomial):
        base_change(alg("empty.quiver"), "Q[x]/(x^2)")


def test_skew_group_constructions():
    g = skew_group_algebra(alg("empty.quiver"), trivial_action(alg("empty.quiver")))
    assert g.target.dim == 2 and len(block_algebras(g.target)) == 2
    two = alg("two_points.quiver")
    swap = load_group_action(fixture_path("swap_two_points.json").read_text(), two)
    m2 = skew_group_algebra(two, swap)
    dec = lift_idempotents(m2.target)
    assert len(dec.iso_classes) == 1 and len(dec.idempotents) == 2
    a = alg("diamond_ba.quiver")
    t = skew_group_algebra(a, trivial_action(a))
    verdicts = classify_algebra(t.target)
    assert len(verdicts) == 2
    assert all(v.verdict.label == "DerivedDiscrete(GentleOneCycleClock)" for v in verdicts)


def test_swap_not_preserving_relations_rejected():
    a = alg("diamond_ba.quiver")
    with pytest.raises(InvalidGroupAction):
        load_group_action(fixture_path("swap_diamond.json").read_text(), a)


def test_quotients():
    phi = quotient_extension(pres("diamond_ba.quiver"), ["d*c"])
    assert (phi.source.dim, phi.target.dim) == (9, 8) and phi.is_surjective
    same = quotient_extension(pres("diamond_ba.quiver"), [])
    assert same.source.dim == same.target.dim == 9
    assert quotient_extension(pres("diamond.quiver"), ["b*a"]).target.dim == 9


def test_split_witnesses():
    for phi in [base_change(alg("diamond_ba.quiver"), "Q[x]/(x^2-2)"),
                skew_group_algebra(alg("empty.quiver"), trivial_action(alg("empty.quiver"))),
                identity_extension(alg("diamond_ba.quiver"))]:
        pi = split_witness(phi)
        assert pi is not None and verify_split(phi, pi)


def test_separability_witnesses():
    q = quotient_extension(pres("diamond_ba.quiver"), ["d*c"])
    cert = separability_idempotent(q)
    assert cert is not None and verify_separability(TensorOverA(q), cert.coords)
    assert TensorOverA(q).dim == q.target.dim
    g = skew_group_algebra(alg("empty.quiver"), trivial_action(alg("empty.quiver")))
    cert = separability_idempotent(g)
    assert cert is not None
    assert sorted(str(c) for _, _, c in cert.terms) == ["1/2", "1/2"]
    f2 = alg("empty_f2.quiver")
    g2 = skew_group_algebra(f2, trivial_action(f2))
    assert not g2.flags["groupOrderInvertible"]
    assert separability_idempotent(g2) is None


def test_restriction_modules():
    q = quotient_extension(pres("diamond_ba.quiver"), ["d*c"])
    right, _ = restriction_modules(q)
    assert is_projective_right(right)[0] is False
    bc = base_change(alg("diamond_ba.quiver"), "Q[x]/(x^2-2)")
    w = witness_report(bc)
    assert w.right_projective[0] and w.left_projective[0]
    assert list(w.right_projective[1]) == [2, 2, 2, 2]
    ident = witness_report(identity_extension(alg("diamond_ba.quiver")))
    assert ident.right_projective[0] and ident.left_projective[0]


@pytest.mark.parametrize("mode", ["theorem41", "prop51", "prop53"])
def test_experiments(mode):
    a = alg("diamond_ba.quiver")
    for phi in [base_change(a, "Q[x]/(x^2-2)"), skew_group_algebra(a, trivial_action(a)), identity_extension(a),
                quotient_extension(pres("diamond_ba.quiver"), ["d*c"])]:
        rep = run_consistency_experiment(phi, mode)
        assert rep["outcome"] == "CONSISTENT", (phi.kind, rep["checks"])


def test_quotient_experiment_is_hypothesis_failure():
    q = quotient_extension(pres("diamond_ba.quiver"), ["d*c"])
    rep = run_consistency_experiment(q, "theorem41")
    second = rep["checks"][1]
    assert second["hypotheses"]["rightProjective"] is False
    assert second["status"] == "hypothesis fails"
