from fractions import Fraction

import pytest

from exforge.algcore import KMat
from exforge.composition import build_hurwitz, build_symmetric_composition
from exforge.jordan import albert, ground_field, hermitian_jordan
from exforge.liebuild import (
    LieError, der_algebra, g_construction, kantor, magic_square, related_triple_defect, steinberg,
    theta_automorphism, tits, tkk_e7_models, triality, trip_closure, z22_skeleton,
)
from exforge.lieanalysis import verify_lie
from exforge.structurable import brown_algebra, structurable_by_id

# dim g(S, S') = dim tri(S) + dim tri(S') + 3 dim S dim S'
TRI = {"pF": 0, "pK": 2, "pQ": 9, "pC": 28}
DIM = {"pF": 1, "pK": 2, "pQ": 4, "pC": 8}


def test_magic_square():
    ms = magic_square()
    assert len(ms) == 16
    for (a, b), d in ms.items():
        assert d == TRI[a] + TRI[b] + 3 * DIM[a] * DIM[b]
    assert [ms[(a, b)] for a in TRI for b in TRI] == [3, 8, 21, 52, 8, 16, 35, 78, 21, 35, 66, 133, 52, 78, 133, 248]


@pytest.mark.parametrize("kind", ["pF", "pK", "pQ", "pC", "Ok"])
def test_triality_dims_and_theta(kind):
    S = build_symmetric_composition(kind)
    tri = triality(S)
    assert tri.dim == {"pF": 0, "pK": 2, "pQ": 9, "pC": 28, "Ok": 28}[kind]
    if tri.dim:
        th = tri.theta_power(1).to_kmat()
        assert th @ th @ th == KMat.identity(tri.dim, th.N)


def test_theta_is_an_automorphism_of_order_three():
    from exforge.gradlib import automorphism_defect
    L = g_construction("pK", "pQ")
    th = theta_automorphism(L)
    assert th @ th @ th == KMat.identity(L.dim, th.N)
    assert automorphism_defect(L.algebra, th) is None


def test_skeleton_is_a_grading():
    L = g_construction("pQ", "pQ")
    g = z22_skeleton(L)
    assert g.check()[0]
    # tri(S) + tri(S') at 0 and one copy of S (x) S' in each nonzero degree
    assert sorted(len(v) for v in g.components().values()) == [16, 16, 16, 18]


@pytest.mark.parametrize("kind,J,dim", [
    ("C", "F", 14), ("C", "H3F", 52), ("C", "H3K", 78), ("C", "H3Q", 133), ("K", "H3K", 16), ("Q", "H3F", 21),
])
def test_tits_dims(kind, J, dim):
    Jalg = ground_field() if J == "F" else hermitian_jordan(J[2], 3)
    L = tits(build_hurwitz(kind), Jalg)
    assert L.dim == dim
    assert verify_lie(L, "full")


def test_tits_albert_is_248():
    L = tits(build_hurwitz("C"), albert())
    assert L.dim == 248
    assert verify_lie(L, "sampled", samples=5 * 10 ** 5)


def test_tits_rejects_degree_four():
    with pytest.raises(LieError):
        tits(build_hurwitz("C"), hermitian_jordan("F", 4))


@pytest.mark.parametrize("key,dim", [("C", 52), ("KxC", 78), ("CDH4F", 78), ("CDH4K", 133), ("QxC", 133)])
def test_kantor_equals_steinberg(key, dim):
    A = structurable_by_id(key)
    K, U = kantor(A), steinberg(A)
    assert K.dim == U.dim == dim
    assert verify_lie(K, "full") and verify_lie(U, "full")
    assert K.gradings["Z"].check()[0]
    assert U.gradings["Z2^2"].check()[0]


def test_kantor_five_grading_shape():
    L = kantor(structurable_by_id("CDH4Q"))
    sizes = {p: b - a for p, (a, b) in L.components.items()}
    assert sizes == {"S~": 1, "A~": 56, "K0": 134, "A": 56, "S": 1}
    assert L.dim == 248


def test_kantor_rejects_non_structurable():
    with pytest.raises(LieError):
        kantor(brown_algebra(cross_scale=Fraction(1, 3)))


def test_related_triples():
    A = structurable_by_id("KxC")
    T = trip_closure(A)
    assert T.shape[0] == 78 - 3 * A.dim
    for k in range(0, T.shape[0], 7):
        assert related_triple_defect(A, T[k]).is_zero()


def test_steinberg_u_relations():
    # [u12(a), u23(b)] = -u31(conj(ab))
    A = structurable_by_id("KxC")
    L = steinberg(A)
    alg = L.algebra
    a12, a23, a31 = (L.components[u][0] for u in ("u12", "u23", "u31"))
    for i, j in [(0, 0), (1, 3), (5, 2)]:
        prod = alg.multiply(alg.basis_vector(a12 + i), alg.basis_vector(a23 + j))
        ab = A.conj(A.mul(A.algebra.basis_vector(i), A.algebra.basis_vector(j)))
        want = {(a31 + k, 0): -v for (k, _), v in ab.entries().items()}
        assert prod.entries() == want


def test_derivation_algebras():
    assert der_algebra(build_hurwitz("C").algebra).dim == 14
    assert der_algebra(build_hurwitz("F").algebra).dim == 0
    assert der_algebra(build_hurwitz("Q").algebra).dim == 3
    assert der_algebra(structurable_by_id("CDH4Q"), involution=True).dim == 78


def test_tkk_models():
    T, K = tkk_e7_models()
    assert T.dim == K.dim == 133
    assert verify_lie(T, "full") and verify_lie(K, "full")
    # [xbar, ybar] = 0 in the Koecher model
    a, _ = K.components["Abar"]
    alg = K.algebra
    for i, j in [(0, 1), (3, 20), (26, 5)]:
        assert alg.multiply(alg.basis_vector(a + i), alg.basis_vector(a + j)).is_zero()
