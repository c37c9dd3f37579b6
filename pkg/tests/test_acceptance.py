"""Acceptance suite: one group of tests per criterion, exact equality throughout.

A summary line per criterion is printed at the end of the run.  Run it
alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
Set EXFORGE_FULL_JACOBI=1 to check Jacobi on every basis triple for the
algebras above dimension 150 as well.
"""
import os
from functools import lru_cache

import pytest

from exforge.catalog import catalog, catalog_ids, entry, verify_entry
from exforge.composition import build_hurwitz
from exforge.gradlib import AbGroup, universal_group
from exforge.jordan import (
    albert, albert_cubic, der_and_inner_structure, e6_norm_annihilator, ground_field, hermitian_jordan,
    jordan_identity_defect,
)
from exforge.liebuild import der_algebra, g_construction, kantor, magic_square, steinberg, tits, tkk_e7_models
from exforge.lieanalysis import cartan_and_roots, is_semisimple_element, subspace_is_cartan, verify_lie
from exforge.structurable import (
    instr_and_epsilon, is_structurable, structurable_by_id, tensor_composition, z43_grading_on_cd_h4q,
)
from exforge.z5model import component_sum, z4_model_gradings, z4_model_type, z5cubed_grading

FULL_JACOBI = os.environ.get("EXFORGE_FULL_JACOBI") == "1"

# entries whose computed type differs from the declared one (see the decisions ledger)
TYPE_CONFLICTS = {"7g10", "8g10", "8g11"}

LABELLED = [i for i in catalog_ids(include_aux=False) if not i.startswith("cartan-")]
ALL_ENTRIES = catalog_ids(include_aux=False)


def criterion(n):
    return pytest.mark.criterion(n)


@lru_cache(maxsize=None)
def report(id):
    return verify_entry(id)


# ----------------------------------------------------------------------
# 1


@criterion(1)
def test_magic_square_dimensions():
    ms = magic_square()
    kinds = ("pF", "pK", "pQ", "pC")
    assert [ms[(a, b)] for a in kinds for b in kinds] == \
        [3, 8, 21, 52, 8, 16, 35, 78, 21, 35, 66, 133, 52, 78, 133, 248]


# ----------------------------------------------------------------------
# 2


def _structurable_kinds():
    return ["C", "KxC", "QxC", "CxC", "CDH4F", "CDH4K", "CDH4Q", "Brown"]


CONSTRUCTIONS = (
    [(f"g({a},{b})", lambda a=a, b=b: g_construction(a, b))
     for a in ("pF", "pK", "pQ", "pC", "Ok") for b in ("pF", "pK", "pQ", "pC", "Ok")]
    + [(f"T(C,{j})", lambda j=j: tits(build_hurwitz("C"), ground_field() if j == "F" else
                                      albert() if j == "H3C" else hermitian_jordan(j[2], 3)))
       for j in ("F", "H3F", "H3K", "H3Q", "H3C")]
    + [(f"Kan({k})", lambda k=k: kantor(structurable_by_id(k))) for k in _structurable_kinds()]
    + [(f"U({k})", lambda k=k: steinberg(structurable_by_id(k))) for k in _structurable_kinds()]
    + [("Der(C)", lambda: der_algebra(build_hurwitz("C").algebra)),
       ("Der(Albert)", lambda: der_algebra(albert().algebra)),
       ("Der(CDH4Q,-)", lambda: der_algebra(structurable_by_id("CDH4Q"), involution=True)),
       ("[Instr,Instr](CDH4Q)", lambda: instr_and_epsilon(structurable_by_id("CDH4Q")).derived()[0]),
       ("TKK-Tits", lambda: tkk_e7_models()[0]),
       ("TKK-Koecher", lambda: tkk_e7_models()[1]),
       ("Z5-model", lambda: z5cubed_grading()[0])]
)


@lru_cache(maxsize=None)
def construction(name):
    """(dim, Lie report) of a construction; the algebra itself is not kept."""
    L = dict(CONSTRUCTIONS)[name]()
    dim = L.dim
    mode = "full" if dim <= 150 or FULL_JACOBI else "sampled"
    return dim, verify_lie(L, mode)


@criterion(2)
@pytest.mark.parametrize("name", [n for n, _ in CONSTRUCTIONS])
def test_lie_axioms(name):
    dim, rep = construction(name)
    assert rep.anticommutative
    assert rep.ok, rep.violation
    if dim <= 150 or FULL_JACOBI:
        assert rep.mode == "full" and rep.checked == dim ** 3
    else:
        assert rep.mode == "sampled" and rep.checked >= 10 ** 6


# ----------------------------------------------------------------------
# 3 and 4


DIMS = {"e6": 78, "e7": 133, "e8": 248}


@criterion(3)
@pytest.mark.parametrize("id", [
    pytest.param(i, marks=pytest.mark.xfail(strict=True, reason="computed type differs from the declared one"))
    if i in TYPE_CONFLICTS else i for i in LABELLED])
def test_grading_catalog(id):
    r = report(id)
    e = entry(id)
    assert r.checks["compatible"] is True
    assert sum(k * h for k, h in enumerate(r.type, 1)) == DIMS[e.lie_type]
    assert r.checks["dimension"] is True
    assert r.type == e.type


@criterion(4)
@pytest.mark.parametrize("id", ALL_ENTRIES)
def test_universal_group(id):
    r = report(id)
    assert r.group == entry(id).group


@criterion(4)
def test_universal_group_separates_equal_types():
    a, b = report("6g1"), report("6g8")
    assert a.type == b.type
    assert a.group == AbGroup(0, (2,) * 6) and b.group == AbGroup(2, (2, 2, 2))
    assert a.group != b.group


# ----------------------------------------------------------------------
# 5


@criterion(5)
@pytest.mark.parametrize("key", ["FxC", "KxC", "QxC", "CxC", "CDH4F", "CDH4K", "CDH4Q", "Brown"])
def test_structurable(key):
    A = tensor_composition("F", "C") if key == "FxC" else structurable_by_id(key)
    assert is_structurable(A) == (True, None)
    if key.startswith("CD") or key == "Brown":
        assert A.skew.dim == 1


# ----------------------------------------------------------------------
# 6


@criterion(6)
@pytest.mark.parametrize("key,dim", [("C", 52), ("KxC", 78), ("QxC", 133), ("CxC", 248),
                                     ("CDH4F", 78), ("CDH4K", 133), ("CDH4Q", 248)])
def test_kantor_and_steinberg_dims(key, dim):
    assert construction(f"Kan({key})")[0] == dim
    assert construction(f"U({key})")[0] == dim


@criterion(6)
def test_der_and_instr_dims():
    assert construction("Der(CDH4Q,-)")[0] == 78
    assert construction("[Instr,Instr](CDH4Q)")[0] == 133


# ----------------------------------------------------------------------
# 7


@criterion(7)
def test_e6_characterizations():
    J = albert()
    _, inner = der_and_inner_structure(J)
    ann = e6_norm_annihilator(albert_cubic(J))
    assert ann.dim == inner.dim == 78
    assert ann == inner
    assert ann.basis == inner.basis  # canonical echelon forms


# ----------------------------------------------------------------------
# 8


ROOTS = [
    ("g(pK,pC)", lambda: g_construction("pK", "pC"), "E6"),
    ("g(pQ,pC)", lambda: g_construction("pQ", "pC"), "E7"),
    ("g(pC,pC)", lambda: g_construction("pC", "pC"), "E8"),
    ("T(C,H3(C))", lambda: tits(build_hurwitz("C"), albert()), "E8"),
    ("Kan(C)", lambda: kantor(structurable_by_id("C")), "F4"),
    ("T(C,F)", lambda: tits(build_hurwitz("C"), ground_field()), "G2"),
    ("g(pK,pK)", lambda: g_construction("pK", "pK"), "A2+A2"),
]


@criterion(8)
@pytest.mark.parametrize("name,make,label", ROOTS, ids=[r[0] for r in ROOTS])
def test_root_system(name, make, label):
    assert cartan_and_roots(make()).type_label == label


# ----------------------------------------------------------------------
# 9


@pytest.fixture(scope="module")
def z5():
    return z5cubed_grading()


@criterion(9)
def test_z5_jacobi(z5):
    L, _ = z5
    rep = verify_lie(L, "full")
    assert rep.ok and rep.checked == 248 ** 3


@criterion(9)
def test_z5_type(z5):
    _, g = z5
    assert g.check()[0]
    assert g.group == AbGroup(0, (5, 5, 5))
    assert g.type() == (0, 124)
    assert g.zero_component_dim() == 0


@criterion(9)
def test_z5_basis_elements_semisimple(z5):
    L, g = z5
    B = g.basis_matrix()
    bad = [i for i in range(L.dim) if not is_semisimple_element(L, B.cols([i]), grading=g)]
    assert bad == []


@criterion(9)
@pytest.mark.parametrize("deg", [(1, 0, 0), (0, 1, 2), (3, 4, 1)])
def test_z5_cartan_subalgebras(z5, deg):
    L, g = z5
    H = component_sum(g, deg)
    assert H.dim == 8
    assert subspace_is_cartan(L, H.basis)


# ----------------------------------------------------------------------
# 10


@criterion(10)
def test_z43_grading():
    g = z43_grading_on_cd_h4q()
    assert g.check()[0]
    assert sorted(len(v) for v in g.components().values()) == [1] * 56
    assert universal_group(g)[0] == AbGroup(0, (4, 4, 4))


@criterion(10)
@pytest.mark.parametrize("id", [
    pytest.param(i, marks=pytest.mark.xfail(strict=True, reason="computed type differs from the declared one"))
    if i in TYPE_CONFLICTS else i for i in ("6g13", "7g11", "8g11", "8g12", "7g12", "7g13")])
def test_z43_induced(id):
    r = report(id)
    assert r.checks["compatible"] is True and r.checks["dimension"] is True
    assert r.group == entry(id).group
    assert r.type == entry(id).type


@criterion(10)
@pytest.mark.parametrize("id,model", [("8g11", "ZxZ4^3"), ("8g12", "Z4^3xZ2^2")])
def test_z43_types_against_linear_model(id, model):
    # a second route: the same group acting on a Z_4-graded linear model of e8
    assert z4_model_type(*z4_model_gradings()[model]) == report(id).type


# ----------------------------------------------------------------------
# 11


@criterion(11)
def test_property_field_axioms():
    import test_scalars
    test_scalars.test_field_axioms()
    test_scalars.test_lift_commutes_with_arithmetic()


@criterion(11)
def test_property_symmetric_compositions():
    import test_composition
    test_composition.test_random_composition_and_associativity()


@criterion(11)
@pytest.mark.parametrize("kind,n", [("F", 3), ("K", 3), ("Q", 3), ("C", 3), ("F", 4), ("K", 4), ("Q", 4)])
def test_property_jordan_identity(kind, n):
    J = albert() if kind == "C" else hermitian_jordan(kind, n)
    assert jordan_identity_defect(J) is None


@criterion(11)
def test_property_killing_invariance():
    import test_lieanalysis
    test_lieanalysis.test_killing_form_invariance()


@criterion(11)
def test_property_snf_permutation_invariance():
    import test_algcore
    test_algcore.test_snf_permutation_invariance()


# ----------------------------------------------------------------------
# 12


@criterion(12)
def test_z4_remark_grading():
    L, g = catalog("z4-remark")
    assert g.check()[0]
    assert L.dim == 248
    assert "not-fine" in g.flags
    assert g.group == AbGroup(0, (4,))
    assert verify_entry("z4-remark").status() == "PASS-WITH-FLAG"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-rN"]))
