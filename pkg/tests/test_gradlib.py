import json

import pytest
from hypothesis import given, strategies as st

from exforge.algcore import KMat
from exforge.composition import build_hurwitz, composition_gradings
from exforge.gradlib import (
    AbGroup, Grading, GradingError, automorphism_defect, combine, coordinate_grading, derivation_defect,
    grading_from_json, is_refinement, refine_by_automorphisms, trivial_grading, type_of, universal_group,
)


@pytest.fixture(scope="module")
def C():
    return build_hurwitz("C").algebra


def test_group_labels_and_equality():
    assert AbGroup.parse("Z^2xZ_2^3") == AbGroup(2, (2, 2, 2))
    assert AbGroup.parse("Z4^3") == AbGroup(0, (4, 4, 4))
    assert AbGroup.parse("Z x Z_4^3").label() == "ZxZ_4^3"
    # Z_2 x Z_3 = Z_6, but Z_2 x Z_2 != Z_4
    assert AbGroup(0, (2, 3)) == AbGroup(0, (6,))
    assert AbGroup(0, (2, 2)) != AbGroup(0, (4,))
    assert AbGroup(1, (3,)).add((2, 2), (-5, 2)) == (-3, 1)
    with pytest.raises(ValueError):
        AbGroup(0, (1,))


def test_trivial_grading(C):
    g = trivial_grading(C)
    assert g.check() == (True, None)
    assert type_of(g) == (0,) * 7 + (1,)
    G, _ = universal_group(g)
    assert G == AbGroup(0, ())


def test_cartan_grading_of_C(C):
    g = composition_gradings("C", "cartan")
    assert g.check()[0]
    assert g.type() == (6, 1)
    G, images = universal_group(g)
    assert G == AbGroup(2)
    assert sum(i * h for i, h in enumerate(g.type(), 1)) == 8


def test_corrupted_degree_gives_witness(C):
    g = composition_gradings("C", "cartan")
    degs = list(g.degrees)
    k = C.labels.index("u1")
    degs[k] = (2, 0)
    bad = Grading(g.algebra, g.group, degs, g.basis)
    ok, wit = bad.check()
    assert not ok
    assert k in (wit["x"], wit["y"], wit["product_hits"])


def test_universal_groups_of_composition_gradings():
    assert universal_group(composition_gradings("pK", "Z3"))[0] == AbGroup(0, (3,))
    assert universal_group(composition_gradings("C", "Z2^3"))[0] == AbGroup(0, (2, 2, 2))
    # forgetting the second coordinate of the Cartan grading gives a coarsening
    fine = composition_gradings("C", "cartan")
    coarse = _first_coordinate(fine)
    assert coarse.check()[0]
    assert is_refinement(fine, coarse)
    assert not is_refinement(coarse, fine)


def _first_coordinate(g):
    return Grading(g.algebra, AbGroup(1), [d[:1] for d in g.degrees], g.basis)


def test_combine_with_itself_and_trivial(C):
    g = composition_gradings("C", "cartan")
    h = combine(g, trivial_grading(C))
    assert h.type() == g.type()
    assert h.check()[0]
    two = combine(g, g)
    assert two.type() == g.type()


def test_combine_incompatible():
    A = build_hurwitz("K").algebra
    g1 = coordinate_grading(A, AbGroup(0, (2,)), [(0,), (1,)])
    # a grading with homogeneous basis e1 + e2, e1 - e2 cuts across both components of g1
    B = KMat.from_rows([[1, 1], [1, -1]])
    g2 = Grading(A, AbGroup(0, (2,)), [(0,), (1,)], basis=B)
    with pytest.raises(GradingError):
        combine(g1, g2)


def test_refine_by_identity(C):
    g = _first_coordinate(composition_gradings("C", "cartan"))
    h = refine_by_automorphisms(g, [KMat.identity(8)], [2])
    assert h.type() == g.type()
    assert h.group == AbGroup(1, (2,))


def test_refine_rejects_non_automorphism(C):
    g = trivial_grading(C)
    op = KMat.identity(8).scale(-1)
    with pytest.raises(GradingError):
        refine_by_automorphisms(g, [op], [2])


def test_defects(C):
    assert automorphism_defect(C, KMat.identity(8)) is None
    assert derivation_defect(C, KMat.zeros((8, 8))) is None
    assert derivation_defect(C, KMat.identity(8)) is not None


def test_json_round_trip():
    g = composition_gradings("Ok", "Z3^2")
    data = json.loads(json.dumps(g.to_json()))
    h = grading_from_json(data, g.algebra)
    assert h.type() == g.type()
    assert h.group == g.group
    assert h.check()[0]
    assert sorted(h.components()) == sorted(g.components())


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=2), st.lists(st.integers(-6, 6), min_size=2, max_size=2))
def test_group_addition_is_abelian(a, b):
    G = AbGroup(1, (4,))
    assert G.add(a, b) == G.add(b, a)
    assert G.add(G.add(a, b), G.neg(b)) == G.reduce(a)
