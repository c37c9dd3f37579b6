import random

import pytest
from hypothesis import given, strategies as st

from exforge.algcore import AlgebraSC, KMat
from exforge.composition import build_hurwitz
from exforge.jordan import ground_field, hermitian_jordan
from exforge.liebuild import g_construction, kantor, steinberg, tits
from exforge.lieanalysis import (
    cartan_and_roots, center, is_semisimple_element, killing_invariance_defect, killing_simplicity,
    subspace_is_cartan, verify_lie,
)
from exforge.scalars import root_of_unity
from exforge.structurable import structurable_by_id


def _sl2():
    # e, h, f with [h, e] = 2e, [h, f] = -2f, [e, f] = h
    p = {(1, 0): {0: 2}, (0, 1): {0: -2}, (1, 2): {2: -2}, (2, 1): {2: 2}, (0, 2): {1: 1}, (2, 0): {1: -1}}
    return AlgebraSC.from_products("sl2", ["e", "h", "f"], p, 1, anticommutative=True)


def _perturbed(A, k, i, j, delta):
    ent = dict(A.T.entries())
    d = A.dim
    for (a, b), s in (((i, j), 1), ((j, i), -1)):
        key = (k, a * d + b)
        ent[key] = ent.get(key, 0) + s * delta
    return AlgebraSC(A.name + "'", A.labels, KMat.from_entries(A.T.shape, ent, A.N), anticommutative=True)


@pytest.fixture(scope="module")
def g2():
    return tits(build_hurwitz("C"), ground_field())


def test_jacobi_holds_and_perturbation_is_caught(g2):
    assert verify_lie(g2, "full")
    bad = _perturbed(g2.algebra, 3, 0, 5, 1)
    rep = verify_lie(bad, "full")
    assert not rep and "triple" in rep.violation


def test_anticommutativity_violation_reported():
    A = _sl2()
    ent = dict(A.T.entries())
    ent[(0, 0)] = 1  # e e = e
    B = AlgebraSC("bad", A.labels, KMat.from_entries(A.T.shape, ent), anticommutative=False)
    rep = verify_lie(B, "full")
    assert not rep and not rep.anticommutative


def test_abelian_is_lie_but_not_semisimple():
    A = AlgebraSC("ab", ["x"], KMat.zeros((1, 1)), anticommutative=True)
    assert verify_lie(A, "full")
    _, ss, simple = killing_simplicity(A)
    assert not ss and not simple
    assert center(A).dim == 1


def test_sl2_simple():
    _, ss, simple = killing_simplicity(_sl2())
    assert ss and simple
    assert center(_sl2()).dim == 0


@pytest.mark.parametrize("make,simple", [
    (lambda: g_construction("pK", "pK"), False),
    (lambda: tits(build_hurwitz("K"), hermitian_jordan("K", 3)), False),
    (lambda: g_construction("pQ", "pQ"), True),
    (lambda: kantor(structurable_by_id("CDH4F")), True),
    (lambda: g_construction("pC", "pC"), True),
])
def test_simplicity(make, simple):
    _, ss, s = killing_simplicity(make())
    assert ss and s == simple


@pytest.mark.parametrize("make,label,nroots", [
    (lambda: tits(build_hurwitz("C"), ground_field()), "G2", 12),
    (lambda: kantor(structurable_by_id("C")), "F4", 48),
    (lambda: g_construction("pK", "pK"), "A2+A2", 12),
    (lambda: tits(build_hurwitz("K"), hermitian_jordan("K", 3)), "A2+A2", 12),
    (lambda: g_construction("pQ", "pQ"), "D6", 60),
    (lambda: g_construction("pK", "pC"), "E6", 72),
])
def test_root_systems(make, label, nroots):
    rd = cartan_and_roots(make())
    assert rd.type_label == label
    assert len(rd.roots) == nroots
    assert all(W.dim == 1 for W in rd.root_spaces)


def test_cartan_grading_is_a_grading(g2):
    rd = cartan_and_roots(g2)
    g = rd.grading(g2)
    assert g.check()[0]
    assert g.type() == (12, 1)


def test_cartan_subalgebra_checks(g2):
    rd = cartan_and_roots(g2)
    assert subspace_is_cartan(g2, rd.cartan_basis)
    # a proper part of the Cartan is abelian but not self-normalizing
    assert not subspace_is_cartan(g2, rd.cartan_basis.rows([0]))
    # a Cartan element plus a root vector is not abelian
    mixed = rd.cartan_basis.rows([0]).vstack(rd.root_spaces[0].basis)
    assert not subspace_is_cartan(g2, mixed)


def test_cartan_with_cyclotomic_basis():
    # e + (zeta_5 - 1) f spans a split Cartan of the rational sl2; sending zeta to 1 gives span(e)
    c = root_of_unity(1, 5) - 1
    assert subspace_is_cartan(_sl2(), KMat.from_rows([[1, 0, c]]))
    assert not subspace_is_cartan(_sl2(), KMat.from_rows([[1, 0, 0]]))


def test_semisimple_elements(g2):
    rd = cartan_and_roots(g2)
    h = rd.cartan_basis.rows([0]).T
    e = rd.root_spaces[0].basis.T
    assert is_semisimple_element(g2, h)
    assert not is_semisimple_element(g2, e)
    assert is_semisimple_element(g2, KMat.zeros((g2.dim, 1)))


def test_graded_and_generic_semisimplicity_agree():
    L = steinberg(structurable_by_id("KxC"))
    g = L.gradings["Z2^2"]
    rng = random.Random(1)
    seen = set()
    for deg, idx in sorted(g.components().items()):
        for _ in range(4):
            a, b = rng.sample(idx, 2)
            x = KMat.from_entries((L.dim, 1), {(a, 0): 1, (b, 0): rng.choice([1, -1, 2])})
            got = is_semisimple_element(L, x, grading=g)
            assert got == is_semisimple_element(L, x)
            seen.add(got)
    assert seen == {True, False}


def test_graded_semisimplicity_rejects_bad_input():
    L = kantor(structurable_by_id("CDH4F"))
    g = L.gradings["Z"]
    one = KMat.from_entries((L.dim, 1), {(L.components["A"][0], 0): 1})
    with pytest.raises(ValueError):
        is_semisimple_element(L, one, grading=g)  # degree of infinite order
    two = one + KMat.from_entries((L.dim, 1), {(L.components["S"][0], 0): 1})
    with pytest.raises(ValueError):
        is_semisimple_element(L, two, grading=g)  # not homogeneous


_F4 = None


def _f4():
    global _F4
    if _F4 is None:
        _F4 = g_construction("pF", "pC")
    return _F4


@given(st.lists(st.tuples(*[st.integers(0, 51)] * 3), min_size=1, max_size=20))
def test_killing_form_invariance(triples):
    assert all(v == 0 for v in killing_invariance_defect(_f4(), triples))
