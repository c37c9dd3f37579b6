import pytest
from hypothesis import given, strategies as st

from exforge.algcore import KMat, Subspace
from exforge.composition import (DIMS, SYMCOMP_KINDS, associativity_defect, build_hurwitz,
                                 build_symmetric_composition, cayley_dickson, composition_defect,
                                 composition_gradings, derivation_dab, derivations_span, paraunit_defect,
                                 quadratic_equation_defect)
from exforge.gradlib import AbGroup, derivation_defect, universal_group
from exforge.scalars import OMEGA, Cyclo

SYM = {k: build_symmetric_composition(k) for k in SYMCOMP_KINDS}


def vec(A, label):
    return A.basis_vector(A.labels.index(label))


@pytest.mark.parametrize("kind", "FKQC")
def test_hurwitz_invariants(kind):
    H = build_hurwitz(kind)
    assert H.dim == DIMS[kind]
    assert composition_defect(H.algebra, H.polar) is None
    assert quadratic_equation_defect(H) is None
    assert H.algebra.check_unit() and H.algebra.check_involution()


def test_cayley_table():
    C = build_hurwitz("C").algebra
    assert C.multiply(vec(C, "v1"), vec(C, "v2")) == -vec(C, "u3")
    assert C.multiply(vec(C, "v2"), vec(C, "v1")) == vec(C, "u3")
    assert C.multiply(vec(C, "e1"), vec(C, "e1")) == vec(C, "e1")
    assert C.unit == vec(C, "e1") + vec(C, "e2")


def test_cayley_polar_form():
    H = build_hurwitz("C")
    C = H.algebra
    assert H.q(vec(C, "e1"), vec(C, "e2")) == 1
    # the multiplication table forces q(u_i, v_i) = -1: x = u1 + v1 has x^2 = 1 and trace 0
    x = vec(C, "u1") + vec(C, "v1")
    assert C.multiply(x, x) == C.unit
    assert H.trace(x) == 0
    assert H.q(x) == -1
    assert H.q(vec(C, "u2"), vec(C, "u3")) == 0


def test_k_componentwise():
    K = build_hurwitz("K").algebra
    assert K.multiply(K.basis_vector(0), K.basis_vector(1)).is_zero()


def test_cayley_dickson():
    F = build_hurwitz("F")
    K, g, ok = cayley_dickson(F, 1)
    x = K.algebra.basis_vector(1)
    assert K.algebra.multiply(x, x) == K.algebra.basis_vector(0)
    assert ok and g.check()[0]
    Q = build_hurwitz("Q")
    C8, g8, ok = cayley_dickson(Q, 1)
    assert C8.dim == 8 and ok
    assert quadratic_equation_defect(C8) is None
    C = build_hurwitz("C")
    big, _, ok = cayley_dickson(C, 1)
    assert big.dim == 16 and not ok
    with pytest.raises(ValueError):
        cayley_dickson(F, 0)


@pytest.mark.parametrize("kind", SYMCOMP_KINDS)
def test_symmetric_composition(kind):
    S = SYM[kind]
    A = S.algebra
    assert composition_defect(A, S.polar) is None
    assert associativity_defect(A, S.polar) is None
    if S.paraunit is not None:
        assert paraunit_defect(S) is None


def test_para_k():
    A = SYM["pK"].algebra
    e1, e2 = A.basis_vector(0), A.basis_vector(1)
    assert A.multiply(e1, e1) == e2
    assert A.multiply(e2, e2) == e1


def test_paraunit_on_pc():
    S = SYM["pC"]
    A = S.algebra
    e = S.paraunit
    for i in range(8):
        x = A.basis_vector(i)
        assert A.multiply(e, x) + x == e.scale(S.q(e, x))


def test_okubo_basis_pairs():
    S = SYM["Ok"]
    A = S.algebra
    for i in range(8):
        for j in range(8):
            x, y = A.basis_vector(i), A.basis_vector(j)
            assert S.q(S.mul(x, y)) - S.q(x) * S.q(y) == 0


def _random_vector(draw, n, order):
    if order == 1:
        return KMat.column(draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n)))
    a = draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    b = draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    return KMat.column([Cyclo(x) + OMEGA * y for x, y in zip(a, b)], 3)


@st.composite
def sym_triples(draw):
    kind = draw(st.sampled_from(SYMCOMP_KINDS))
    S = SYM[kind]
    return (S,) + tuple(_random_vector(draw, S.dim, S.algebra.N) for _ in range(3))


@given(sym_triples())
def test_random_composition_and_associativity(data):
    S, x, y, z = data
    assert S.q(S.mul(x, y)) == S.q(x) * S.q(y)
    assert S.q(S.mul(x, y), z) == S.q(x, S.mul(y, z))


@st.composite
def hurwitz_pairs(draw):
    H = build_hurwitz(draw(st.sampled_from("FKQC")))
    return H, _random_vector(draw, H.dim, 1), _random_vector(draw, H.dim, 1)


@given(hurwitz_pairs())
def test_random_hurwitz(data):
    H, x, y = data
    A = H.algebra
    assert H.q(H.mul(x, y)) == H.q(x) * H.q(y)
    assert A.multiply(x, x) - x.scale(H.trace(x)) + A.unit.scale(H.q(x)) == KMat.zeros((H.dim, 1))


def test_derivations():
    H = build_hurwitz("C")
    A = H.algebra
    one = H.one()
    b = A.basis_vector(3)
    assert derivation_dab(H, one, b).mat.is_zero()
    assert derivation_dab(H, b, b).mat.is_zero()
    for i, j in [(2, 5), (3, 4), (0, 6), (2, 7)]:
        d = derivation_dab(H, A.basis_vector(i), A.basis_vector(j))
        assert derivation_defect(A, d.mat) is None
    W, _ = derivations_span(H)
    assert W.dim == 14


def test_cartan_grading_on_c():
    g = composition_gradings("C", "cartan")
    A = g.algebra
    deg = dict(zip(A.labels, g.degrees))
    assert deg["u1"] == (1, 0) and deg["v3"] == (1, 1)
    assert universal_group(g)[0] == AbGroup(2)


def test_cayley_z2_cubed():
    g = composition_gradings("C", "Z2^3")
    assert g.type() == (8,)
    assert universal_group(g)[0] == AbGroup(0, [2, 2, 2])


def test_okubo_z3_squared():
    g = composition_gradings("Ok", "Z3^2")
    assert g.type() == (8,)
    W = g.component((1, 0))
    # diag(1, w, w^2) = (h1) + (1 + w)(h2) in the basis h1 = E11 - E22, h2 = E22 - E33
    target = KMat.from_rows([[1, 1 + OMEGA, 0, 0, 0, 0, 0, 0]], 3)
    assert W.dim == 1 and W == Subspace(target)


def test_para_k_z3():
    g = composition_gradings("pK", "Z3")
    assert universal_group(g)[0] == AbGroup(0, [3])


def test_unknown_grading():
    with pytest.raises(ValueError):
        composition_gradings("Q", "Z3")
