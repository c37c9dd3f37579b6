import random

import pytest
from functools import lru_cache

from hypothesis import given, settings, strategies as st

from exforge.algcore import KMat, flat_ops
from exforge.gradlib import universal_group
from exforge.jordan import (albert, albert_cubic, closed_under_bracket, der_and_inner_structure,
                            e6_norm_annihilator, graded_division_grading_h4q, hermitian_jordan,
                            jordan4_gradings, jordan_identity_defect, kron_vec, mat2q_hermitian_grading,
                            r_commutator_defect, trace_associativity_defect)

CASES = [("F", 3), ("K", 3), ("Q", 3), ("C", 3), ("F", 4), ("K", 4), ("Q", 4)]


@lru_cache(maxsize=None)
def _cubic():
    return albert_cubic()


@pytest.fixture(scope="module")
def cubic():
    return _cubic()


@pytest.mark.parametrize("kind,n", CASES)
def test_hermitian_dimensions_and_identities(kind, n):
    J = hermitian_jordan(kind, n)
    c = {"F": 1, "K": 2, "Q": 4, "C": 8}[kind]
    assert J.dim == n + n * (n - 1) // 2 * c
    assert jordan_identity_defect(J) is None
    assert trace_associativity_defect(J) is None


def test_cayley_four_rejected():
    with pytest.raises(ValueError):
        hermitian_jordan("C", 4)


def test_albert_der_and_inner():
    J = albert()
    der, inner = der_and_inner_structure(J)
    assert der.dim == 52 and inner.dim == 78
    assert closed_under_bracket(der, 27, sample=300)
    assert closed_under_bracket(inner, 27, sample=300)
    # [R_J, R_J] lies in Der(J)
    Rs = [J.R_basis(i) for i in range(27)]
    comms = [Rs[i].bracket(Rs[j]) for i, j in [(0, 5), (3, 17), (9, 26), (1, 2)]]
    assert der.contains(flat_ops(comms))


def test_r_commutator_identity():
    J = hermitian_jordan("F", 3)
    triples = [(a, b, c) for a in range(6) for b in range(6) for c in range(6)]
    assert r_commutator_defect(J, triples) is None
    A = albert()
    rnd = random.Random(1)
    sample = [tuple(rnd.randrange(27) for _ in range(3)) for _ in range(40)]
    assert r_commutator_defect(A, sample) is None


def test_cubic_on_unit(cubic):
    one = cubic.J.unit
    assert cubic.T(one) == 3 and cubic.Q(one) == 3 and cubic.N(one) == 1
    assert cubic.cubic_equation_defect(one).is_zero()


def test_cubic_on_idempotent(cubic):
    e = [0] * 27
    e[0] = 1
    assert cubic.N(e) == 0
    assert cubic.T(e) == 1


def test_cubic_equation_on_basis(cubic):
    for i in range(27):
        x = [0] * 27
        x[i] = 1
        assert cubic.cubic_equation_defect(x).is_zero()


vectors27 = st.lists(st.integers(-3, 3), min_size=27, max_size=27)


@settings(max_examples=15)
@given(vectors27, vectors27, vectors27)
def test_cubic_polarization(x, y, z):
    cd = _cubic()
    v = cd.N(x, y, z)
    assert v == cd.N(y, x, z) == cd.N(z, y, x) == cd.N(x, z, y)
    assert cd.T(cd.cross_product(x, y), z) == v
    assert cd.N(x, x, x) == 6 * cd.N(x)
    assert cd.cubic_equation_defect(x).is_zero()


def test_e6_characterizations(cubic):
    W = e6_norm_annihilator(cubic)
    _, inner = der_and_inner_structure(cubic.J)
    assert W.dim == 78
    assert W == inner
    J = cubic.J
    R = [J.R_basis(i) for i in range(27)]
    assert W.contains(flat_ops([R[0].bracket(R[10]), R[4].bracket(R[20])]))
    trace_zero = KMat.column([1, -1] + [0] * 25)
    assert W.contains(flat_ops([J.R(trace_zero)]))
    assert not W.contains(flat_ops([J.R(J.unit)]))


def test_h4f_finite_grading():
    J, g = jordan4_gradings("F", "finite")
    assert g.check()[0]
    assert g.type() == (10,)
    # q_1 (x) q_2 has degree (1, 0, 0, 1)
    v = KMat.column(kron_vec([0, 1, 1, 0], [1, 0, 0, -1]))
    x = J.from_ambient(v)
    W = g.component((1, 0, 0, 1))
    assert W.dim == 1 and W.contains(x.T)


def test_h4k_finite_grading():
    J, g = jordan4_gradings("K", "finite")
    assert g.check()[0]
    q3 = [0, -1, 1, 0]
    # q_3 (x) q_3 (x) 1 with 1 = e1 + e2 in K: its hermitian part is itself
    m = KMat.column(kron_vec(q3, q3)).kron(KMat.column([1, 1]))
    assert J.ambient.involution @ m == m
    x = J.from_ambient(m)
    assert any(g.component(d).contains(x.T) for d in g.support())


@pytest.mark.parametrize("kind,grading_id,group", [
    ("F", "finite", "Z_2^4"), ("F", "mixed", "ZxZ_2^2"),
    ("K", "finite", "Z_2^5"), ("K", "mixed", "ZxZ_2^3"),
    ("Q", "finite", "Z_2^6"), ("Q", "mixed", "ZxZ_2^4"),
])
def test_jordan4_groups(kind, grading_id, group):
    from exforge.gradlib import AbGroup
    J, g = jordan4_gradings(kind, grading_id)
    assert g.check()[0]
    assert universal_group(g)[0] == AbGroup.parse(group)


def test_division_grading():
    J, gJ, K, gK = graded_division_grading_h4q()
    assert J.dim == 28 and K.dim == 36
    assert gJ.check()[0] and gK.check()[0]
    assert gJ.type() == (24, 2)
    assert gK.type() == (24, 6)


def test_mat2q_hermitian_zero_component():
    H, K = mat2q_hermitian_grading()
    assert H[(0, 0)] == 2
    assert sum(H.values()) + sum(K.values()) == 16
