import pytest

from quiverext.quiver import (NonComposablePath, NonParallelRelation, NotAdmissible, PresentationSyntaxError,
                              UnknownVertex, admissible_check, connected_components, load_presentation,
                              parse_presentation, path_basis_algebra)

from conftest import alg, fixture_path, pres

DIAMOND = """field Q
vertices 1 2 3 4
arrow a : 1 -> 2
arrow b : 2 -> 4
arrow c : 1 -> 3
arrow d : 3 -> 4
"""


def test_parse_diamond():
    p = pres("diamond_ba.quiver")
    assert len(p.quiver.vertices) == 4 and len(p.quiver.arrows) == 4 and len(p.relations) == 1
    assert str(p.relations[0].terms[0][0]) == "b*a"


def test_single_vertex():
    p = pres("empty.quiver")
    assert list(p.quiver.vertices) == ["1"]
    assert path_basis_algebra(p).dim == 1


def test_parse_errors():
    with pytest.raises(NonComposablePath):
        load_presentation(fixture_path("diamond_bc.quiver"))
    with pytest.raises(UnknownVertex):
        parse_presentation("field Q\nvertices 1\narrow a : 1 -> 2\n")
    with pytest.raises(NonParallelRelation):
        parse_presentation(DIAMOND + "relations\n  b*a - c\nend\n")
    with pytest.raises(PresentationSyntaxError) as err:
        parse_presentation("field Q\nvertices 1\nfrobnicate\n")
    assert "3" in str(err.value)


def test_linear_combination_relation():
    p = parse_presentation(DIAMOND + "relations\n  b*a - 2 d*c\nend\n")
    coeffs = sorted(str(c) for _, c in p.relations[0].terms)
    assert coeffs == ["-2", "1"]
    assert path_basis_algebra(p).dim == 9


@pytest.mark.parametrize("name, dim", [("diamond_ba.quiver", 9), ("diamond_ba_dc.quiver", 8), ("diamond.quiver", 10),
                                       ("dual_numbers.quiver", 2), ("a3.quiver", 6)])
def test_path_basis_dimensions(name, dim):
    assert admissible_check(pres(name)).admissible
    a = alg(name)
    assert a.dim == dim
    a.check_associative()
    a.check_unit()


def test_diamond_basis_paths():
    assert sorted(alg("diamond_ba.quiver").labels) == sorted(["e_1", "e_2", "e_3", "e_4", "a", "b", "c", "d", "d*c"])


def test_not_admissible():
    with pytest.raises(NotAdmissible) as err:
        admissible_check(pres("free_loop.quiver"))
    assert "capExceeded" in str(err.value)
    kronecker = "field Q\nvertices 1 2\narrow a : 1 -> 2\narrow b : 1 -> 2\nrelations\n  a - b\nend\n"
    with pytest.raises(NotAdmissible) as err:
        admissible_check(parse_presentation(kronecker))
    assert "lengthOneTerm" in str(err.value)


def test_cap_override():
    p = parse_presentation(DIAMOND.replace("vertices", "cap 2\nvertices") + "relations\n  b*a\nend\n")
    assert p.cap == 2
    with pytest.raises(NotAdmissible):
        admissible_check(p)


def test_radical_and_semisimple_quotient():
    a = alg("diamond_ba.quiver")
    rad = a.get_radical()
    assert len(rad) == 5
    a.check_radical()


def test_connected_components():
    assert len(connected_components(pres("diamond.quiver").quiver)) == 1
    assert len(connected_components(pres("two_points.quiver").quiver)) == 2
    assert len(connected_components(pres("diamond_plus_vertex.quiver").quiver)) == 2


def test_text_roundtrip():
    p = pres("diamond_ba_dc.quiver")
    q = parse_presentation(p.to_text())
    assert path_basis_algebra(q).dim == 8
