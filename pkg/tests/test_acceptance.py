"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (lines are printed even
under output capture) or ``python tests/test_acceptance.py``.
"""
import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import FIXTURES, alg, fixture_path, pres  # noqa: E402

from quiverext.algebra import basic_reduction, gabriel_quiver, is_projective_right  # noqa: E402
from quiverext.complexes import (ComplexError, Frame, FINITE_FIELD_CAVEAT, finiteness_sampler,  # noqa: E402
                                 lemma_bound, lemma_iso_roundtrip, minimal_proj_resolution,
                                 module_from_representation, random_complex, simple_module)
from quiverext.extensions import (TensorOverA, base_change, load_group_action, quotient_extension,  # noqa: E402
                                  restriction_modules, run_consistency_experiment, separability_idempotent,
                                  skew_group_algebra, split_witness, trivial_action, verify_separability,
                                  verify_split)
from quiverext.gentleclass import NotApplicable, classify_derived_discrete, clock_condition  # noqa: E402
from quiverext.quiver import NotAdmissible, PresentationError, admissible_check, path_basis_algebra  # noqa: E402

RESULTS: dict[int, bool] = {}


def report(n: int, ok: bool, detail: str, capsys=None):
    RESULTS[n] = ok
    line = f"ACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


def shipped_presentations():
    """Every fixture presentation that parses and is admissible."""
    out = []
    for path in sorted(FIXTURES.glob("*.quiver")):
        try:
            p = pres(path.name)
            admissible_check(p)
        except (PresentationError, NotAdmissible):
            continue
        out.append(path.name)
    return out


# 1 -----------------------------------------------------------------------

def criterion_1():
    details, ok = [], True
    for name, want, counts in [("diamond_ba.quiver", "DerivedDiscrete", (1, 0)),
                               ("diamond_ba_dc.quiver", "NotDerivedDiscrete", (1, 1))]:
        start = time.perf_counter()
        v = classify_derived_discrete(pres(name))
        c = clock_condition(pres(name))
        elapsed = time.perf_counter() - start
        good = v.status == want and (c.clockwise, c.counterclockwise) == counts and elapsed < 1.0
        ok &= good
        details.append(f"{name}: {v.label} {c.clockwise, c.counterclockwise} in {elapsed:.3f}s")
    return ok, "; ".join(details)


# 2 -----------------------------------------------------------------------

def criterion_2():
    phi = quotient_extension(pres("diamond_ba.quiver"), ["d*c"])
    cert = separability_idempotent(phi)
    sep_ok = cert is not None and verify_separability(TensorOverA(phi), cert.coords)
    right, _ = restriction_modules(phi)
    proj, _ = is_projective_right(right)
    return sep_ok and proj is False, f"separability idempotent verified={sep_ok}, B_A projective={proj}"


# 3 -----------------------------------------------------------------------

def _both_witnesses(phi):
    pi = split_witness(phi)
    cert = separability_idempotent(phi)
    return (pi is not None and verify_split(phi, pi),
            cert is not None and verify_separability(TensorOverA(phi), cert.coords))


def criterion_3():
    rows = []
    a = alg("diamond_ba.quiver")
    q = alg("empty.quiver")
    cases = [("baseChange diamond/<ba> by x^2-2", base_change(a, "Q[x]/(x^2-2)")),
             ("baseChange Q by x^2-2", base_change(q, "Q[x]/(x^2-2)")),
             ("skew Q by Z/2", skew_group_algebra(q, trivial_action(q))),
             ("skew diamond/<ba> by Z/2", skew_group_algebra(a, trivial_action(a)))]
    ok = True
    for label, phi in cases:
        s, e = _both_witnesses(phi)
        ok &= s and e
        rows.append(f"{label}: split={s} separable={e}")
    f2 = alg("empty_f2.quiver")
    absent = separability_idempotent(skew_group_algebra(f2, trivial_action(f2))) is None
    ok &= absent
    rows.append(f"F_2 skew by Z/2: separable absent={absent}")
    return ok, "; ".join(rows)


# 4 -----------------------------------------------------------------------

def criterion_4():
    a = alg("diamond_ba.quiver")
    a_label = classify_derived_discrete(gabriel_quiver(basic_reduction(a)[0])).label
    ok, rows = True, []
    for label, phi in [("baseChange", base_change(a, "Q[x]/(x^2-2)")),
                       ("skewTrivial", skew_group_algebra(a, trivial_action(a)))]:
        for mode in ("theorem41", "prop53"):
            rep = run_consistency_experiment(phi, mode)
            blocks = [b["verdict"]["label"] for b in rep["blocksB"]]
            good = rep["outcome"] == "CONSISTENT" and blocks and all(b == a_label for b in blocks)
            ok &= bool(good)
            rows.append(f"{label}/{mode}: {rep['outcome']} blocks={blocks}")
    return ok, f"A: {a_label}; " + "; ".join(rows)


# 5 -----------------------------------------------------------------------

def criterion_5():
    total = held = 0
    for name in ("diamond_ba.quiver", "diamond_ba_dc.quiver", "dual_numbers.quiver"):
        fr = Frame.of(alg(name))
        for v in range(len(fr)):
            for depth in range(7):
                res = minimal_proj_resolution(simple_module(fr, v), depth, fr)
                bound = lemma_bound(fr, {0: 1}, -depth)
                total += 1
                held += all(d <= bound[i] for i, d in res.component_dims().items())
    return held == total, f"{held}/{total} resolutions within the bound"


# 6 -----------------------------------------------------------------------

def criterion_6(per_fixture: int = 500):
    rows, ok = [], True
    for name in ("diamond_ba.quiver", "diamond_ba_dc.quiver", "dual_numbers.quiver"):
        fr = Frame.of(alg(name))
        rng = random.Random(f"minimize:{name}")
        good = nonminimal = 0
        for _ in range(per_fixture):
            c = random_complex(fr, rng, max_len=4, max_summands=3)
            nonminimal += not c.is_minimal()
            m = c.minimize(check=True)
            good += (c.d_squared_zero() and m.d_squared_zero() and m.is_minimal()
                     and m.cohomology_dims() == c.cohomology_dims())
        ok &= good == per_fixture
        rows.append(f"{name}: {good}/{per_fixture} ({nonminimal} non-minimal inputs)")
    return ok, "; ".join(rows)


# 7 -----------------------------------------------------------------------

def representations(a, max_dim: int) -> list:
    """All representations over F_p with total dimension in [1, max_dim]."""
    q = a.presentation.quiver
    f = a.field
    vs = list(q.vertices)
    out = []
    for dv in itertools.product(range(max_dim + 1), repeat=len(vs)):
        if not 0 < sum(dv) <= max_dim:
            continue
        dims = dict(zip(vs, dv))
        shapes = [(ar.label, dims[ar.target], dims[ar.source]) for ar in q.arrows]
        for vals in itertools.product(f.elements(), repeat=sum(r * c for _, r, c in shapes)):
            it = iter(vals)
            maps = {lab: [[next(it) for _ in range(c)] for _ in range(r)] for lab, r, c in shapes}
            try:
                out.append(module_from_representation(a, dims, maps))
            except ComplexError:
                continue
    return out


def criterion_7():
    rows, ok = [], True
    for name in ("diamond_ba_f3.quiver", "dual_numbers_f3.quiver"):
        a = alg(name)
        fr = Frame.of(a)
        mods = representations(a, 3)
        pairs = equivalent = bad = 0
        for i, j in itertools.combinations_with_replacement(range(len(mods)), 2):
            if mods[i].dim != mods[j].dim:
                continue
            for t in (-1, -2):
                r = lemma_iso_roundtrip(mods[i], mods[j], t, fr)
                pairs += 1
                equivalent += bool(r.truncations_equivalent)
                bad += not r.consistent
        ok &= bad == 0 and pairs > 0
        rows.append(f"{name}: {len(mods)} modules, {pairs} checks, {equivalent} equivalent, {bad} counterexamples")
    return ok, "; ".join(rows)


# 8 -----------------------------------------------------------------------

def criterion_8():
    rows, ok = [], True
    for name in ("diamond_ba_f2.quiver", "diamond_ba_f3.quiver"):
        fr = Frame.of(alg(name))
        for cdim in ({-1: 1, 0: 2}, {-1: 2, 0: 4}):
            first = finiteness_sampler(fr, cdim, radical_only=True)
            again = finiteness_sampler(fr, cdim, radical_only=True)
            stable = (first.class_count == again.class_count
                      and [r.to_json() for r in first.representatives] == [r.to_json() for r in again.representatives])
            good = stable and first.class_count > 0 and first.caveat == FINITE_FIELD_CAVEAT
            ok &= good
            rows.append(f"{name} {cdim}: {first.class_count} classes, stable={stable}")
    return ok, "; ".join(rows)


# 9 -----------------------------------------------------------------------

def _shape(p):
    vs = list(p.quiver.vertices)
    counts = [[0] * len(vs) for _ in vs]
    for ar in p.quiver.arrows:
        counts[vs.index(ar.source)][vs.index(ar.target)] += 1
    return len(vs), counts


def criterion_9():
    names = shipped_presentations()
    matched = 0
    for name in names:
        p = pres(name)
        g = gabriel_quiver(path_basis_algebra(p))
        matched += _shape(g) == _shape(p)
    two = alg("two_points.quiver")
    swap = load_group_action(fixture_path("swap_two_points.json").read_text(), two)
    basic, mults = basic_reduction(skew_group_algebra(two, swap).target)
    ok = matched == len(names) and basic.dim == 1
    return ok, f"{matched}/{len(names)} Gabriel roundtrips match; basic reduction of swap skew algebra has dim {basic.dim}"


# 10 ----------------------------------------------------------------------

def _relabel(p, rng):
    vs = list(p.quiver.vertices)
    arrs = [a.label for a in p.quiver.arrows]
    new_v = [f"w{i}" for i in range(len(vs))]
    new_a = [f"y{i}" for i in range(len(arrs))]
    rng.shuffle(new_v)
    rng.shuffle(new_a)
    vorder, aorder = vs[:], arrs[:]
    rng.shuffle(vorder)
    rng.shuffle(aorder)
    return p.relabel(dict(zip(vs, new_v)), dict(zip(arrs, new_a)), vorder, aorder)


def _clock_signature(p, reverse=False):
    try:
        c = clock_condition(p, reverse)
    except NotApplicable:
        return None
    return c.holds, tuple(sorted((c.clockwise, c.counterclockwise)))


def criterion_10(perms: int = 8):
    names = shipped_presentations()
    total = good = 0
    rng = random.Random("relabel")
    for name in names:
        p = pres(name)
        label = classify_derived_discrete(p).label
        sig = _clock_signature(p)
        variants = [(p, True)] + [(_relabel(p, rng), rev) for _ in range(perms) for rev in (False, True)]
        for q, rev in variants:
            total += 1
            good += (classify_derived_discrete(q, reverse=rev).label == label and _clock_signature(q, rev) == sig)
    return good == total, f"{good}/{total} reversed/relabelled variants agree across {len(names)} fixtures"


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n]()
    report(n, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not report(n, ok, detail)
    sys.exit(1 if failed else 0)
