import pytest
from hypothesis import given, strategies as st

from exforge.algcore import (AlgebraSC, KMat, LinAlgError, LinOp, Subspace, flat_ops, invariant_factors, kernel,
                             multiply, rank, rref, simultaneous_eigenspaces, smith_normal_form, span_rank_kernel,
                             tensor)
from exforge.composition import build_hurwitz
from exforge.jordan import albert, matrix_algebra
from exforge.scalars import OMEGA, root_of_unity


def e(A, label):
    return A.basis_vector(A.labels.index(label))


def test_matrix_units():
    M = matrix_algebra(2)
    assert multiply(M, e(M, "E11"), e(M, "E12")) == e(M, "E12")
    assert multiply(M, e(M, "E12"), e(M, "E11")).is_zero()


def test_cayley_products():
    C = build_hurwitz("C").algebra
    assert multiply(C, e(C, "u1"), e(C, "v1")) == e(C, "e1")
    assert multiply(C, e(C, "u1"), e(C, "u2")) == e(C, "v3")
    assert multiply(C, e(C, "u2"), e(C, "u1")) == -e(C, "v3")


def test_multiply_dimension_mismatch():
    C = build_hurwitz("C").algebra
    with pytest.raises(ValueError):
        multiply(C, KMat.unit_vector(4, 0), C.basis_vector(0))


def test_tensor_products():
    F = build_hurwitz("F").algebra
    C = build_hurwitz("C").algebra
    Q = build_hurwitz("Q").algebra
    FC = tensor(F, C)
    assert FC.dim == 8 and FC.T == C.T
    assert tensor(Q, C).dim == 32
    M = matrix_algebra(2)
    MM = tensor(M, M)
    assert MM.dim == 16 and MM.check_unit()
    assert MM.unit == M.unit.kron(M.unit)
    assert MM.check_involution()


def test_involution_checks():
    for kind in "FKQC":
        A = build_hurwitz(kind).algebra
        assert A.check_involution()
        assert A.check_unit()


def test_kernel_and_rank():
    assert kernel(KMat.zeros((5, 5))).shape[0] == 5
    assert rank(KMat.identity(248)) == 248
    r, K = span_rank_kernel(LinOp(KMat.from_rows([[1, 2, 3], [2, 4, 6]])))
    assert r == 1 and K.dim == 2


def test_albert_v_span():
    """Span of V_{x,y} on the Albert algebra (identity involution) is R_J + [R_J, R_J]."""
    from exforge.structurable import jordan_as_structurable
    J = albert()
    A = jordan_as_structurable(J)
    ops = [LinOp(A.v_matrix(i, j)) for i in range(27) for j in range(27)]
    assert Subspace(flat_ops(ops)).dim == 79
    # oracle: 27 multiplication operators plus the 52 derivations [R_x, R_y]
    from exforge.jordan import der_and_inner_structure
    _, inner = der_and_inner_structure(J)
    assert inner.dim + 1 == 79


def test_eigenspaces_trivial():
    I = KMat.identity(4)
    comps = simultaneous_eigenspaces([I], [[1]])
    assert len(comps) == 1 and comps[0][1].dim == 4
    D = KMat.from_rows([[1, 0], [0, -1]])
    comps = simultaneous_eigenspaces([D], [[1, -1]])
    assert sorted(W.dim for _, W in comps) == [1, 1]


def test_eigenspaces_errors():
    A = KMat.from_rows([[0, 1], [0, 0]])
    with pytest.raises(LinAlgError):
        simultaneous_eigenspaces([A], [[0]])
    B = KMat.from_rows([[1, 0], [0, -1]])
    C = KMat.from_rows([[0, 1], [1, 0]])
    with pytest.raises(LinAlgError):
        simultaneous_eigenspaces([B, C], [[1, -1], [1, -1]])


def test_theta_eigenspaces():
    from exforge.liebuild import g_construction, theta_automorphism
    L = g_construction("pK", "Ok")
    th = theta_automorphism(L)
    comps = simultaneous_eigenspaces([th], [[1, OMEGA, OMEGA * OMEGA]])
    assert sum(W.dim for _, W in comps) == 78
    # oracle: dimensions of the kernels of theta - lambda
    for lam, W in comps:
        M = th - KMat.identity(78, th.N).scale(lam[0])
        assert 78 - rank(M) == W.dim


def test_snf_examples():
    d, P, Q = smith_normal_form([[2, 0], [0, 3]])
    assert d == [1, 6]
    assert smith_normal_form([[0, 0], [0, 0]])[0] == [0, 0]
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])[0] == [1, 1, 1]


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(r, c)) for c in zip(*B)] for r in A]


int_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


@given(int_matrices, st.randoms(use_true_random=False))
def test_snf_permutation_invariance(M, rnd):
    d, P, Q = smith_normal_form(M)
    D = _matmul(_matmul(P, M), Q)
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            assert v == (d[i] if i == j else 0)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    rows = list(M)
    rnd.shuffle(rows)
    perm = list(range(len(M[0])))
    rnd.shuffle(perm)
    M2 = [[r[p] for p in perm] for r in rows]
    assert smith_normal_form(M2)[0] == d


def test_invariant_factors():
    assert tuple(invariant_factors([2, 3])) == (6,)
    assert tuple(invariant_factors([4, 2, 2])) == (2, 2, 4)


rational_rows = st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=6)


@given(rational_rows, st.randoms(use_true_random=False))
def test_echelon_canonical(rows, rnd):
    M = KMat.from_rows(rows)
    R, piv = rref(M)
    R2, piv2 = rref(R)
    assert R2 == R and tuple(piv2) == tuple(piv)
    perm = list(rows)
    rnd.shuffle(perm)
    S = Subspace(KMat.from_rows(perm))
    assert S == Subspace(M)
    for r in rows:
        assert S.contains(KMat.from_rows([r]))


def test_subspace_over_cyclotomic():
    z = root_of_unity(1, 5)
    M = KMat.from_rows([[1, z], [z, z * z]], 5)
    S = Subspace(M)
    assert S.dim == 1
    assert S.contains(KMat.from_rows([[z ** 3, z ** 4]], 5))


def test_algebra_json_roundtrip():
    A = build_hurwitz("C").algebra
    B = AlgebraSC.from_json(A.to_json())
    assert B.T == A.T and B.labels == A.labels
