"""Jordan algebras of hermitian matrices, the Albert algebra and its
cubic norm, derivation and inner structure algebras, and gradings on
H_4(C) coming from Kronecker products and from a graded division algebra.

Every Jordan algebra here is carved out of an ambient algebra with
involution: J is the subspace of hermitian elements and x o y is the
symmetrized ambient product.
"""

from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .algcore import (AlgebraSC, KMat, LinOp, Subspace, commutator_algebra, coords_in_columns, flat_ops,
                      kernel_certified,
                      left_inverse, stack_cols, stack_rows, tensor, unflat)
from .composition import build_hurwitz, composition_grading_data
from .gradlib import AbGroup, GradingError, from_spanning_set


class JordanAlg:
    """Hermitian part of an ambient algebra with involution, with x o y = (xy + yx)/2."""

    def __init__(self, algebra, coeff, n, ambient=None, embed=None):
        self.algebra = algebra
        self.coeff = coeff
        self.n = n
        self.ambient = ambient
        self.embed = embed  # columns: basis of J in ambient coordinates
        self.dim = algebra.dim
        self._L = None
        self._t = None

    @property
    def name(self):
        return self.algebra.name

    @property
    def unit(self):
        return self.algebra.unit

    def mul(self, x, y):
        return self.algebra.multiply(x, y)

    def R(self, x):
        return self.algebra.right(x)

    def R_basis(self, i):
        return LinOp(self.algebra.right_matrix(i))

    def trace_form(self):
        """Row vector t with t @ x = t_J(x); t_J(x) = Tr(R_x) / dim J."""
        if self._t is None:
            n = self.dim
            ent = {}
            for i in range(n):
                tr = sum((self.algebra.right_matrix(i).entry(k, k) for k in range(n)), Fraction(0))
                if tr != 0:
                    ent[(0, i)] = tr / n
            self._t = KMat.from_entries((1, n), ent, self.algebra.N)
        return self._t

    def t(self, x):
        return (self.trace_form() @ x).entry(0, 0)

    def J0(self):
        """Subspace of trace-zero elements (rows)."""
        from .algcore import kernel
        return Subspace(kernel(self.trace_form()), self.dim)

    def star(self, x, y):
        """x * y = xy - t_J(xy) 1 on J_0."""
        p = self.mul(x, y)
        return p - self.unit.scale(self.t(p))

    def to_ambient(self, x):
        return self.embed @ x

    def from_ambient(self, v):
        if self._L is None:
            self._L = left_inverse(self.embed)
        return coords_in_columns(self.embed, v, self._L)

    def __repr__(self):
        return f"JordanAlg({self.name}, dim={self.dim})"


# ----------------------------------------------------------------------
# ambient matrix algebras


def matrix_algebra(n, form=None, name=None):
    """Mat_n(F) in the basis E_ij (index i*n + j), with involution x -> P^-1 x^t P."""
    prods = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                prods[(i * n + j, j * n + k)] = {i * n + k: 1}
    unit = KMat.column([1 if i == j else 0 for i in range(n) for j in range(n)])
    if form is None:
        inv = KMat.from_entries((n * n, n * n), {(j * n + i, i * n + j): 1 for i in range(n) for j in range(n)})
    else:
        P = form if isinstance(form, KMat) else KMat.from_rows(form)
        from .algcore import inverse
        Pinv = inverse(P)
        cols = []
        for i in range(n):
            for j in range(n):
                Et = KMat.from_entries((n, n), {(j, i): 1})
                M = Pinv @ Et @ P
                cols.append(_vec(M))
        inv = stack_cols(cols)
    return AlgebraSC(name or f"Mat{n}", [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)],
                     KMat.from_entries((n * n, n ** 4), {(k, a * n * n + b): v for (a, b), out in prods.items()
                                                        for k, v in out.items()}),
                     involution=inv, unit=unit)


def _vec(M):
    """Row-major flattening of a square KMat into a column."""
    n = M.shape[0]
    return KMat([l.reshape((n * n, 1)).tocsr() for l in M.layers], M.den, M.N, normalize=False)


def matrix_over(kind, n, form=None):
    """Mat_n(C) = Mat_n(F) (x) C with involution x -> P^-1 xbar^t P."""
    M = matrix_algebra(n, form)
    C = build_hurwitz(kind).algebra
    return tensor(M, C, name=f"Mat{n}({kind})")


def hermitian_part(ambient):
    """Columns spanning the fixed points of the involution."""
    s = ambient.involution
    n = ambient.dim
    sym = (KMat.identity(n, ambient.N) + s).scale(Fraction(1, 2))
    W = Subspace(sym.T, n)
    return W.basis.T


def jordan_from_ambient(ambient, basis, name, coeff=None, n=None):
    """Jordan algebra on the columns of ``basis`` (hermitian elements of ``ambient``)."""
    d = basis.shape[1]
    L = left_inverse(basis)
    P = ambient.products(basis, basis)  # column i*d + j = b_i b_j
    perm = np.arange(d * d).reshape(d, d).T.reshape(-1)
    sym = (P + P.cols(perm)).scale(Fraction(1, 2))
    T = coords_in_columns(basis, sym, L)
    unit = coords_in_columns(basis, ambient.unit.lift(basis.N), L) if ambient.unit is not None else None
    labels = [f"h{i}" for i in range(d)]
    A = AlgebraSC(name, labels, T, unit=unit, involution=KMat.identity(d, T.N), meta={"jordan": True})
    return JordanAlg(A, coeff, n, ambient, basis)


def hermitian_jordan(kind, n, form=None):
    """H_n(C, *) in the basis: diagonal E_ii, then E_ij c + E_ji cbar for i < j and c in C."""
    if kind not in ("F", "K", "Q", "C"):
        raise ValueError(f"unknown coefficient algebra {kind!r}")
    if kind == "C" and n != 3:
        raise ValueError("hermitian matrices over the Cayley algebra form a Jordan algebra only for n = 3")
    if n < 3:
        raise ValueError("n must be at least 3")
    amb = matrix_over(kind, n, form)
    if form is not None:
        basis = hermitian_part(amb)
        return jordan_from_ambient(amb, basis, f"H{n}({kind};form)", kind, n)
    C = build_hurwitz(kind).algebra
    dc = C.dim
    bar = C.involution
    cols, labels = [], []

    def idx(i, j, c):
        return (i * n + j) * dc + c

    for i in range(n):
        v = {}
        for c in range(dc):
            u = C.unit.entry(c, 0)
            if u != 0:
                v[idx(i, i, c)] = u
        cols.append(KMat.from_entries((amb.dim, 1), {(k, 0): x for k, x in v.items()}))
        labels.append(f"E{i + 1}{i + 1}")
    for i in range(n):
        for j in range(i + 1, n):
            for c in range(dc):
                ent = {(idx(i, j, c), 0): 1}
                cb = bar.col(c)
                for (k, _), x in cb.entries().items():
                    ent[(idx(j, i, k), 0)] = ent.get((idx(j, i, k), 0), 0) + x
                cols.append(KMat.from_entries((amb.dim, 1), ent))
                labels.append(f"[{i + 1}{j + 1}]{C.labels[c]}")
    basis = stack_cols(cols)
    name = "Albert" if kind == "C" else f"H{n}({kind})"
    J = jordan_from_ambient(amb, basis, name, kind, n)
    J.algebra.labels = labels
    return J


def albert():
    return hermitian_jordan("C", 3)


def ground_field():
    """F as a one-dimensional Jordan algebra."""
    A = AlgebraSC.from_products("F", ["1"], {(0, 0): {0: 1}}, unit=KMat.column([1]))
    return JordanAlg(A, "F", 1)


# ----------------------------------------------------------------------
# identities


def _dense_structure(A):
    """c[k, i, j] as an int64 array together with the common denominator (rational algebras)."""
    if A.N != 1:
        raise ValueError("dense identity checks are implemented over the rationals")
    T, den = A.T.to_int_dense()
    n = A.dim
    return T[0].reshape(n, n, n), den


def jordan_identity_defect(J):
    """None if J is commutative and satisfies the Jordan identity, else a witness.

    Uses the full linearization [R_x, R_{yz}] + [R_y, R_{zx}] + [R_z, R_{xy}] = 0
    of [R_x, R_{x^2}] = 0 on all basis triples.
    """
    A = J.algebra
    c, den = _dense_structure(A)
    if not np.array_equal(c, c.transpose(0, 2, 1)):
        return ("commutativity",)
    R = c.transpose(2, 0, 1)  # R[i][k, j] = c[k, j, i]
    Rw = np.tensordot(c, c, axes=([0], [2]))  # Rw[j, k, a, b] = sum_m c[m, j, k] c[a, b, m]
    left = np.tensordot(R, Rw, axes=([2], [2]))  # [i, a, j, k, b] = sum_c R_i[a, c] Rw[j, k, c, b]
    right = np.tensordot(Rw, R, axes=([3], [1]))  # [j, k, a, i, b] = sum_c Rw[j, k, a, c] R_i[c, b]
    comm = left.transpose(0, 2, 3, 1, 4) - right.transpose(3, 0, 1, 2, 4)  # [i, j, k, a, b]
    total = comm + comm.transpose(1, 2, 0, 3, 4) + comm.transpose(2, 0, 1, 3, 4)
    bad = np.argwhere(total != 0)
    if len(bad):
        return ("jordan", tuple(int(t) for t in bad[0][:3]))
    return None


def trace_associativity_defect(J):
    """None if t_J(1) = 1 and t_J((xy)z) = t_J(x(yz)) on basis triples."""
    A = J.algebra
    n = A.dim
    if J.t(J.unit) != 1:
        return ("unit",)
    tT = J.trace_form() @ A.T
    B = KMat([l.reshape((n, n)).tocsr() for l in tT.layers], tT.den, tT.N, normalize=False)  # t(x_a x_b)
    for z in range(n):
        left = A.T.T @ B.cols([z])  # t((x_i x_j) x_z) at i*n + j
        left = KMat([l.reshape((n, n)).tocsr() for l in left.layers], left.den, left.N, normalize=False)
        if not (left == B @ A.right_matrix(z)):
            return ("assoc", z)
    return None


def r_commutator_defect(J, triples):
    """[[R_x, R_y], R_z] = R_{(yz)x - y(zx)} on the given index triples."""
    A = J.algebra
    for (a, b, c) in triples:
        x, y, z = A.basis_vector(a), A.basis_vector(b), A.basis_vector(c)
        lhs = J.R(x).bracket(J.R(y)).bracket(J.R(z))
        w = J.mul(J.mul(y, z), x) - J.mul(y, J.mul(z, x))
        if not (lhs == J.R(w)):
            return (a, b, c)
    return None


# ----------------------------------------------------------------------
# derivations and the inner structure algebra


def derivation_constraints(A, involution=None):
    """Sparse matrix M with M vec(D) = 0 iff D is a derivation (row-major vec).

    With ``involution`` the constraint D s = s D is appended.
    """
    n = A.dim
    mats = []
    for L in A.T.layers:
        coo = L.tocoo()
        r, c, v = [], [], []
        # term D T: equation (m, i*n+j) gets D[m, k] * T[k, ij]
        k, ij, val = coo.row, coo.col, coo.data
        for m in range(n):
            r.append(m * n * n + ij)
            c.append(m * n + k)
            v.append(val)
        # -D(x_i) x_j = -sum_k D[k, i] c_kj^m : T[m, k*n + l], l = j
        m_, kl, val2 = coo.row, coo.col, coo.data
        kk, ll = kl // n, kl % n
        for i in range(n):
            r.append(m_ * n * n + i * n + ll)
            c.append(kk * n + i)
            v.append(-val2)
            # -x_i D(x_j): T[m, i'*n + k] with i' = first index
            r.append(m_ * n * n + kk * n + i)
            c.append(ll * n + i)
            v.append(-val2)
        r = np.concatenate(r)
        c = np.concatenate(c)
        v = np.concatenate(v)
        mats.append(sp.coo_array((v, (r, c)), shape=(n ** 3, n * n)).tocsr())
    M = KMat(mats, A.T.den, A.T.N)
    if involution is not None:
        S = involution.lift(M.N)
        I = KMat.identity(n, M.N)
        # vec(D S - S D) = (I (x) S^T - S (x) I) vec(D)
        C = I.kron(S.T) - S.kron(I)
        M = M.vstack(C)
    return M


def derivation_algebra(A, involution=None, seed=0):
    """Der(A) (or Der(A, -)) as a Subspace of flattened n x n matrices."""
    M = derivation_constraints(A, involution)
    K = kernel_certified(M, seed=seed)
    return Subspace(K, A.dim * A.dim)


def der_and_inner_structure(J, seed=0):
    """(Der(J), R_{J0} + [R_J, R_J]) as subspaces of flattened operators."""
    A = J.algebra
    n = A.dim
    der = derivation_algebra(A, seed=seed)
    Rs = [J.R_basis(i) for i in range(n)]
    comms = [Rs[i].bracket(Rs[j]) for i in range(n) for j in range(i + 1, n)]
    J0 = J.J0().basis
    R0 = [J.R(J0.rows([k]).T) for k in range(J0.shape[0])]
    inner = Subspace(flat_ops(R0 + comms), n * n)
    return der, inner


def closed_under_bracket(W, n, sample=None):
    """Whether the span of flattened n x n operators is closed under commutators."""
    ops = [unflat(W.basis.rows([i]), n) for i in range(W.dim)]
    pairs = [(i, j) for i in range(len(ops)) for j in range(i + 1, len(ops))]
    if sample is not None:
        rng = np.random.default_rng(0)
        pairs = [pairs[k] for k in rng.choice(len(pairs), size=min(sample, len(pairs)), replace=False)]
    brs = [ops[i].bracket(ops[j]) for i, j in pairs]
    if not brs:
        return True
    return W.contains(flat_ops(brs))


# ----------------------------------------------------------------------
# the cubic norm of the Albert algebra


class CubicData:
    """T, the trace bilinear form T(x, y) = T(xy), Q, N and the full polarization of N.

    ``N3[a, b, c]`` is the coefficient of s t u in N(s x_a + t x_b + u x_c),
    so N3(x, x, x) = 6 N(x); ``cross`` solves T(x x y, z) = N(x, y, z).
    """

    def __init__(self, J):
        A = J.algebra
        if A.N != 1:
            raise ValueError("cubic data is implemented over the rationals")
        n = A.dim
        T, den = A.T.to_int_dense()
        ci = T[0].reshape(n, n, n)  # den * c[k, i, j]
        deg = J.n
        tJ = [x * deg for x in J.trace_form().to_fraction_rows()[0]]
        dt = 1
        for x in tJ:
            dt = dt * x.denominator // np.gcd(dt, x.denominator)
        ti = np.array([int(x * dt) for x in tJ], dtype=np.int64)
        si = np.einsum("kij,k->ij", ci, ti)  # den * dt * T(x o y)
        ui = np.einsum("kij,mkl,m->ijl", ci, ci, ti)  # den^2 * dt * T((x o y) o z)
        L = dt ** 3 * den ** 2
        N3i = (np.einsum("a,b,c->abc", ti, ti, ti) * (den ** 2)
               - (np.einsum("a,bc->abc", ti, si) + np.einsum("b,ac->abc", ti, si)
                  + np.einsum("c,ab->abc", ti, si)) * (dt * den)
               + 2 * ui * dt ** 2)
        frac = np.vectorize(lambda v, d: Fraction(int(v), int(d)), otypes=[object])
        self.J = J
        self.dim = n
        self.t = frac(ti, dt)
        s = frac(si, den * dt)
        self.s = s
        self.N3 = frac(N3i, L)
        sinv = _fraction_inverse(s)
        self.sinv = sinv
        self.cross = np.einsum("mz,xyz->mxy", sinv, self.N3)  # (x_a x x_b) = sum_m cross[m, a, b] x_m

    def _vec(self, x):
        if isinstance(x, KMat):
            return np.array(x.to_fraction_rows(), dtype=object)[:, 0]
        return np.array(x, dtype=object)

    def T(self, x, y=None):
        x = self._vec(x)
        if y is None:
            return x.dot(self.t)
        return x.dot(self.s).dot(self._vec(y))

    def Q(self, x):
        x = self._vec(x)
        return (self.T(x) ** 2 - x.dot(self.s).dot(x)) / 2

    def N(self, x, y=None, z=None):
        x = self._vec(x)
        if y is None:
            return np.einsum("abc,a,b,c->", self.N3, x, x, x) / 6
        return np.einsum("abc,a,b,c->", self.N3, x, self._vec(y), self._vec(z))

    def cross_product(self, x, y):
        return np.einsum("mab,a,b->m", self.cross, self._vec(x), self._vec(y))

    def cubic_equation_defect(self, x):
        """x^3 - T(x) x^2 + Q(x) x - N(x) 1 for a vector x (numpy array of Fractions)."""
        J = self.J
        xv = KMat.column(list(self._vec(x)))
        x2 = J.mul(xv, xv)
        x3 = J.mul(x2, xv)
        res = x3 - x2.scale(self.T(x)) + xv.scale(self.Q(x)) - J.unit.scale(self.N(x))
        return res


def _fraction_inverse(m):
    import flint
    n = m.shape[0]
    M = flint.fmpq_mat(n, n, [flint.fmpq(v.numerator, v.denominator) for v in m.reshape(-1)])
    Mi = M.inv()
    return np.array([[Fraction(int(Mi[i, j].p), int(Mi[i, j].q)) for j in range(n)] for i in range(n)],
                    dtype=object)


def albert_cubic(J=None):
    return CubicData(J if J is not None else albert())


def e6_norm_annihilator(cubic=None, seed=0):
    """{f in End(A) | N(fa, b, c) + N(a, fb, c) + N(a, b, fc) = 0} as a Subspace of flattened matrices."""
    cd = cubic if cubic is not None else albert_cubic()
    n = cd.dim
    N3 = cd.N3
    den = 1
    for v in N3.reshape(-1):
        den = den * v.denominator // np.gcd(den, v.denominator)
    Ni = np.vectorize(lambda v: int(v * den), otypes=[np.int64])(N3)
    rows, cols, vals = [], [], []
    nz = np.argwhere(Ni != 0)
    # equation (a, b, c), a <= b <= c; unknown f[k, l] at k*n + l
    idx = {}
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                idx[(a, b, c)] = len(idx)
    for (k, p, q) in nz.tolist():
        v = int(Ni[k, p, q])
        # N(f a, b, c) with a = l: N[k, b, c] f[k, a]  -> for every a, with (b, c) = (p, q)
        for a in range(n):
            key = tuple(sorted((a, p, q)))
            rows.append(idx[key])
            cols.append(k * n + a)
            vals.append(v)
    # every (a, b, c) with sorted key receives the three slot contributions exactly once each
    # after symmetrization; duplicates are summed by the sparse constructor. Since N3 is symmetric,
    # the sum over the three slots equals sum over positions of a in the sorted triple.
    M = sp.coo_array((np.array(vals, dtype=np.int64), (np.array(rows), np.array(cols))),
                     shape=(len(idx), n * n)).tocsr()
    K = kernel_certified(KMat([M], 1, 1), seed=seed)
    return Subspace(K, n * n)


# ----------------------------------------------------------------------
# gradings on H_4(C) through Kronecker products


def _qmats():
    """q_0 = I, q_1, q_2, q_3 = q_1 q_2 as Mat_2 coordinate lists, with their Z_2^2 degrees."""
    return [([1, 0, 0, 1], (0, 0)), ([0, 1, 1, 0], (1, 0)), ([1, 0, 0, -1], (0, 1)), ([0, -1, 1, 0], (1, 1))]


def _ematrices():
    """E11, E22, E12, E21 with their Z-degrees (0, 0, 1, -1)."""
    return [([1, 0, 0, 0], (0,)), ([0, 0, 0, 1], (0,)), ([0, 1, 0, 0], (1,)), ([0, 0, 1, 0], (-1,))]


def kron_vec(a, b):
    """Kronecker product of two 2x2 coordinate lists as a Mat_4 coordinate list (row-major)."""
    out = [0] * 16
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[(2 * i + k) * 4 + (2 * j + l)] = a[2 * i + j] * b[2 * k + l]
    return out


MIXED_FORM = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]  # q_1 (x) q_0


def jordan4_gradings(kind, grading_id):
    """Z_2^2 x Z_2^2 x (grading of C) ("finite") or Z x Z_2^2 x (grading of C) ("mixed") on H_4(C).

    The mixed grading uses the hermitian form q_1 (x) q_0, for which the
    Z-grading on the first Kronecker factor is compatible with the involution.
    Returns (JordanAlg, Grading).
    """
    if kind not in ("F", "K", "Q"):
        raise ValueError("H_4(C) needs an associative C")
    if grading_id not in ("finite", "mixed"):
        raise ValueError(f"unknown grading {grading_id!r} on H_4({kind})")
    if grading_id == "finite":
        J = hermitian_jordan(kind, 4)
        first = _qmats()
        g1 = AbGroup(0, [2, 2])
    else:
        J = hermitian_jordan(kind, 4, form=MIXED_FORM)
        first = _ematrices()
        g1 = AbGroup(1, ())
    if kind == "F":
        cgroup, cdegs, cB = AbGroup(0, ()), [()], KMat.column([1])
    else:
        cgroup, cdegs, cB = composition_grading_data(kind, "Z2" if kind == "K" else "Z2^2")
    group = g1.product(AbGroup(0, [2, 2])).product(cgroup)
    amb = J.ambient
    s = amb.involution
    half = Fraction(1, 2)
    items = []
    for a, da in first:
        for b, db in _qmats():
            m = KMat.column(kron_vec(a, b))
            for c in range(cB.shape[1]):
                h = m.kron(cB.col(c))
                v = (h + s @ h).scale(half)
                if v.is_zero():
                    continue
                items.append((da + db + tuple(cdegs[c]), J.from_ambient(v)))
    g = from_spanning_set(J.algebra, group, items, name=f"{grading_id} grading on H4({kind})")
    return J, g


# ----------------------------------------------------------------------
# the graded-division construction on H_4(Q)


def _quaternion_as_matrix_coords():
    """q-matrices of Mat_2 as coordinates in the Q basis (e1, e2, u1, v1)."""
    # E11 = e1, E22 = e2, E12 = u1, E21 = v1: coordinates coincide with row-major Mat_2
    return {0: [1, 0, 0, 1], 1: [0, 1, 1, 0], 2: [1, 0, 0, -1], 3: [0, -1, 1, 0]}


def _mat2_to_q(v):
    """Row-major Mat_2 coordinates -> Q coordinates (e1, e2, u1, v1)."""
    return [v[0], v[3], v[1], v[2]]


def division_ambient():
    """Q (x) Mat_2(Q) with the involution tau^s (x) *, where x* = A^-1 tau^o(x)^t A, A = diag(1, q_1).

    Basis order: (first Q factor as Mat_2, index a) x (Mat_2 entry (i, j)) x (Q coefficient c).
    Returns (ambient AlgebraSC, list of (column vector, degree in Z4 x Z2 x Z2 x Z2)).
    """
    M2 = matrix_algebra(2)
    Q = build_hurwitz("Q").algebra
    R = tensor(M2, Q, name="Mat2(Q)")
    # first factor: Mat_2(F) with the symplectic involution (adjugate); as Q this is the conjugation
    first = AlgebraSC("Q", ["E11", "E12", "E21", "E22"], M2.T, involution=_adjugate(), unit=M2.unit)
    R.involution = _star_on_mat2q()
    amb = tensor(first, R, name="Q(x)Mat2(Q)")
    qm = _quaternion_as_matrix_coords()
    qdeg_first = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}
    qdeg_coeff = {0: (0, 0), 1: (2, 0), 2: (0, 1), 3: (2, 1)}  # regraded by Z_4 x Z_2
    vdeg = {0: (0, 0), 1: (1, 0)}
    items = []
    for a in range(4):
        fa = KMat.column(qm[a])
        for i in range(2):
            for j in range(2):
                e = KMat.unit_vector(4, i * 2 + j)
                for c in range(4):
                    qc = KMat.column(_mat2_to_q(qm[c]))
                    vec = fa.kron(e.kron(qc))
                    d4 = ((vdeg[i][0] - vdeg[j][0] + qdeg_coeff[c][0]) % 4, (qdeg_coeff[c][1]) % 2)
                    items.append((vec, d4 + qdeg_first[a]))
    return amb, items


def _adjugate():
    """x -> adj(x) on row-major Mat_2: [[a, b], [c, d]] -> [[d, -b], [-c, a]]."""
    return KMat.from_entries((4, 4), {(3, 0): 1, (1, 1): -1, (2, 2): -1, (0, 3): 1})


def _tau_o():
    """Transpose on Q = Mat_2 in the basis (e1, e2, u1, v1)."""
    return KMat.from_entries((4, 4), {(0, 0): 1, (1, 1): 1, (3, 2): 1, (2, 3): 1})


def _star_on_mat2q():
    """(x*)_{ij} = a_i^-1 tau^o(x_{ji}) a_j with a_0 = 1, a_1 = q_1 (= a_1^-1)."""
    Q = build_hurwitz("Q").algebra
    tau = _tau_o()
    q1 = KMat.column([0, 0, 1, 1])
    L = Q.left(q1).mat
    Rm = Q.right(q1).mat
    cols = []
    for i in range(2):
        for j in range(2):
            for c in range(4):
                # basis element E_ij (x) x_c maps to E_ji (x) a_j^-1 tau(x_c) a_i
                v = tau.col(c)
                if j == 1:
                    v = L @ v
                if i == 1:
                    v = Rm @ v
                col = KMat.unit_vector(4, j * 2 + i).kron(v)
                cols.append(col)
    return stack_cols(cols)


def graded_division_grading_h4q():
    """The Z_4 x Z_2^3 grading on H_4(Q) (as hermitian part of Q (x) Mat_2(Q)) and on the
    skew part K (a Lie algebra of type c_4 under the commutator).

    Returns (JordanAlg, Grading on it, Lie AlgebraSC K, Grading on K).
    """
    amb, items = division_ambient()
    s = amb.involution
    n = amb.dim
    I = KMat.identity(n, amb.N)
    if not (s @ s == I):
        raise GradingError("the ambient map is not an involution")
    Hb = hermitian_part(amb)
    J = jordan_from_ambient(amb, Hb, "H4(Q);division", "Q", 4)
    group = AbGroup(0, [4, 2, 2, 2])
    half = Fraction(1, 2)
    hitems, kitems = [], []
    Kb = Subspace(((I - s).scale(half)).T, n).basis.T
    Klie = commutator_algebra(amb, Kb, "K(Q(x)Mat2(Q))")
    LK = left_inverse(Kb)
    for vec, d in items:
        hv = (vec + s @ vec).scale(half)
        kv = (vec - s @ vec).scale(half)
        if not hv.is_zero():
            hitems.append((d, J.from_ambient(hv)))
        if not kv.is_zero():
            kitems.append((d, coords_in_columns(Kb, kv, LK)))
    gJ = from_spanning_set(J.algebra, group, hitems, name="Z4xZ2^3 on H4(Q)")
    gK = from_spanning_set(Klie, group, kitems, name="Z4xZ2^3 on c4")
    return J, gJ, Klie, gK


def mat2q_hermitian_grading():
    """The Z_4 x Z_2 grading on H(Mat_2(Q), *) and K(Mat_2(Q), *) (each a list of (degree, dim))."""
    s = _star_on_mat2q()
    qm = _quaternion_as_matrix_coords()
    qdeg = {0: (0, 0), 1: (2, 0), 2: (0, 1), 3: (2, 1)}
    vdeg = {0: 0, 1: 1}
    from collections import defaultdict
    H, K = defaultdict(list), defaultdict(list)
    half = Fraction(1, 2)
    for i in range(2):
        for j in range(2):
            for c in range(4):
                vec = KMat.unit_vector(4, i * 2 + j).kron(KMat.column(_mat2_to_q(qm[c])))
                d = ((vdeg[i] - vdeg[j] + qdeg[c][0]) % 4, qdeg[c][1])
                h = (vec + s @ vec).scale(half)
                k = (vec - s @ vec).scale(half)
                if not h.is_zero():
                    H[d].append(h.T)
                if not k.is_zero():
                    K[d].append(k.T)
    Hd = {d: Subspace(stack_rows(v), 16).dim for d, v in H.items()}
    Kd = {d: Subspace(stack_rows(v), 16).dim for d, v in K.items()}
    return {d: x for d, x in Hd.items() if x}, {d: x for d, x in Kd.items() if x}
