from fractions import Fraction

import pytest

from exforge.algcore import KMat
from exforge.gradlib import AbGroup
from exforge.jordan import albert
from exforge.structurable import (
    associative_with_involution, brown_algebra, cd_jordan4, epsilon_eigenspaces,
    first_violation, instr_and_epsilon, is_structurable, jordan_as_structurable, structurable_by_id,
    tensor_composition, z43_grading_on_cd_h4q, z43_restriction_cd_h4k,
)


@pytest.fixture(scope="module")
def cdq():
    return cd_jordan4("Q")


@pytest.fixture(scope="module")
def brown():
    return brown_algebra()


@pytest.mark.parametrize("key,dim,skew", [
    ("QxC", 32, 10), ("KxC", 16, 8), ("CxC", 64, 14), ("FxC", 8, 7),
    ("CDH4F", 20, 1), ("CDH4K", 32, 1), ("Brown", 56, 1),
])
def test_structurable_and_skew_dims(key, dim, skew):
    A = structurable_by_id(key) if key != "FxC" else tensor_composition("F", "C")
    assert A.dim == dim
    assert A.skew.dim == skew
    assert A.herm.dim + A.skew.dim == dim
    assert is_structurable(A) == (True, None)


def test_cd_h4q_structurable(cdq):
    assert cdq.dim == 56 and cdq.skew.dim == 1
    assert is_structurable(cdq)[0]


def test_associative_with_involution():
    A = associative_with_involution("Q", 2)
    assert A.dim == 16
    assert is_structurable(A)[0]


def test_jordan_with_identity_is_structurable():
    A = jordan_as_structurable(albert())
    assert A.skew.dim == 0
    assert is_structurable(A)[0]


def test_wrong_cross_scale_is_caught_by_both_checks():
    A = brown_algebra(cross_scale=Fraction(1, 3))
    ok, wit = is_structurable(A)
    assert not ok and len(wit) == 4
    assert first_violation(A) is not None


def test_first_violation_agrees_on_small_cases():
    for A in (tensor_composition("K", "C"), cd_jordan4("F")):
        assert first_violation(A) is None


def test_brown_unit_and_involution(brown):
    alg = brown.algebra
    assert alg.check_unit()
    assert alg.check_involution()
    # alpha - beta spans the skew part
    s = KMat.column([1] + [0] * 54 + [-1])
    assert brown.skew.contains(s.T)


def test_cd_unit_fixed_and_skew_square(cdq):
    one = cdq.unit
    assert cdq.conj(one) == one
    v = cdq.skew.basis.T.cols([0])
    assert cdq.conj(v) == v.scale(-1)
    # v v is a nonzero hermitian element (a multiple of 1 for these algebras)
    vv = cdq.mul(v, v)
    assert not vv.is_zero()
    assert cdq.herm.contains(vv.T)


def test_v11_is_identity(cdq):
    V = cdq.V(cdq.unit, cdq.unit).mat
    assert V == KMat.identity(56, V.N)


@pytest.mark.parametrize("key,dim", [("CDH4F", 36), ("CDH4K", 67), ("CDH4Q", 134), ("Brown", 134)])
def test_instr_dims(key, dim):
    ins = instr_and_epsilon(structurable_by_id(key))
    assert ins.dim == dim
    e = ins.epsilon
    assert e @ e == KMat.identity(dim)


def test_instr_derived_and_epsilon(cdq):
    ins = instr_and_epsilon(cdq)
    L, U = ins.derived()
    assert L.dim == 133
    even, odd = epsilon_eigenspaces(ins)
    assert even.dim + odd.dim == 134
    # eps(V_{1,1}) = -V_{1,1}, so the centre is odd and the even part is e6 + T_1 inside e7
    assert even.dim == 79 and odd.dim == 55


def test_jordan_epsilon_eigenspaces():
    ins = instr_and_epsilon(jordan_as_structurable(albert()))
    even, odd = epsilon_eigenspaces(ins)
    # for a Jordan algebra: eps fixes Der J, negates R_J
    assert (even.dim, odd.dim) == (52, 27)


def test_z43_grading(cdq):
    g = z43_grading_on_cd_h4q()
    assert g.group == AbGroup(0, (4, 4, 4))
    assert g.check()[0]
    assert sorted(len(v) for v in g.components().values()) == [1] * 56


def test_z43_restriction():
    sub, g, ch = z43_restriction_cd_h4k()
    assert sub.dim == 32 and sub.skew.dim == 1
    assert g.check()[0]
    from exforge.gradlib import universal_group
    G, _ = universal_group(g)
    assert G == AbGroup(0, (2, 4, 4))


def test_unknown_key():
    with pytest.raises(KeyError):
        structurable_by_id("nope")
