"""Algebras with involution and the V-operator calculus.

V_{x,y}(z) = (x ybar) z + (z ybar) x - (z xbar) y.  An algebra is
structurable when

    [V_{x,y}, V_{z,w}] = V_{V_{x,y} z, w} - V_{z, V_{y,x} w}

for all x, y, z, w.  Given D = V_{x,y} and E = V_{y,x} the identity is
linear in the pair (D, E), so it is enough to check it on a basis of the
span of all such pairs; that span is computed exactly and every generator
is certified to lie in it.

Also here: Instr(A) with its involutive automorphism eps, the
Cayley-Dickson doubling of a degree four Jordan algebra, the Brown
algebra on F + Albert + Albert + F, and tensor products of Hurwitz
algebras.
"""

from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .algcore import (AlgebraSC, KMat, LinOp, Subspace, dense_row_basis, derived_basis,
                      exact_tensordot, subalgebra_dense,
                      kernel, modular_prime, rank, stack_cols, tensor, _independent_rows)
from .composition import build_hurwitz
from .jordan import CubicData, albert, hermitian_jordan


class StructurableError(ValueError):
    pass


class InvAlgebra:
    """A unital algebra with involution, with its hermitian and skew parts."""

    def __init__(self, algebra, name=None):
        if algebra.involution is None:
            raise StructurableError("algebra has no involution")
        self.algebra = algebra
        self.name = name or algebra.name
        self.dim = algebra.dim
        self.N = algebra.N
        n = self.dim
        s = algebra.involution
        I = KMat.identity(n, s.N)
        self.herm = Subspace((I + s).scale(Fraction(1, 2)).T, n)
        self.skew = Subspace((I - s).scale(Fraction(1, 2)).T, n)
        self._vt = None
        self._pairs = None
        self._instr = None

    @property
    def unit(self):
        return self.algebra.unit

    @property
    def involution(self):
        return self.algebra.involution

    def conj(self, x):
        return self.algebra.involution @ x

    def mul(self, x, y):
        return self.algebra.multiply(x, y)

    def V(self, x, y):
        """V_{x,y} as a LinOp, from the defining formula."""
        A = self.algebra
        xyb = A.multiply(x, self.conj(y))
        n = self.dim
        cols = []
        for k in range(n):
            z = A.basis_vector(k)
            col = (A.multiply(xyb, z) + A.multiply(A.multiply(z, self.conj(y)), x)
                   - A.multiply(A.multiply(z, self.conj(x)), y))
            cols.append(col)
        return LinOp(stack_cols(cols))

    def structure(self):
        """(c, den_c, sigma, den_s): integer arrays with x_i x_j = sum_k c[k,i,j]/den_c x_k."""
        A = self.algebra
        if not A.T.is_rational() or not A.involution.is_rational():
            raise StructurableError("dense V-operator calculus is implemented over the rationals")
        n = self.dim
        T, dc = A.T.to_int_dense()
        S, ds = A.involution.to_int_dense()
        return T[0].reshape(n, n, n), dc, S[0], ds

    def vtensor(self):
        """(Vt, den) with V_{x_i,x_j}(x_l) = sum_m Vt[i,j,m,l]/den x_m."""
        if self._vt is None:
            c, dc, s, ds = self.structure()
            # P1[k,i,j]: coefficient of x_k in x_i sigma(x_j)
            P1 = exact_tensordot(c, s, (2, 0))
            t1 = exact_tensordot(P1, c, (0, 1))  # [i,j,m,l]
            t2 = exact_tensordot(P1, c, (0, 1)).transpose(3, 1, 2, 0)  # P1[k,l,j] c[m,k,i]
            t3 = exact_tensordot(P1, c, (0, 1)).transpose(1, 3, 2, 0)  # P1[k,l,i] c[m,k,j]
            self._vt = (np.ascontiguousarray(t1 + t2 - t3), dc * dc * ds)
        return self._vt

    def vsparse(self):
        """V tensor as a sparse (n^2, n^2) matrix with rows (i, j), and its largest entry."""
        if getattr(self, "_vsp", None) is None:
            Vt, _ = self.vtensor()
            n = self.dim
            self._vsp = (sp.csr_array(Vt.reshape(n * n, n * n)), int(np.abs(Vt).max()))
        return self._vsp

    def v_matrix(self, i, j):
        Vt, den = self.vtensor()
        return KMat.from_int_dense(Vt[i, j], den)

    def pair_span(self):
        """Basis pairs (i, j) for the span of (V_{x_i,x_j}, V_{x_j,x_i}) with exact coordinates."""
        if self._pairs is None:
            Vt, _ = self.vtensor()
            n = self.dim
            P = np.concatenate([Vt.reshape(n * n, n * n), Vt.transpose(1, 0, 2, 3).reshape(n * n, n * n)],
                               axis=1)
            rows, G, g = dense_row_basis(P)
            self._pairs = ([divmod(r, n) for r in rows], G, g)
        return self._pairs

    def __repr__(self):
        return f"InvAlgebra({self.name!r}, dim={self.dim})"


# ----------------------------------------------------------------------
# the structurable identity


def _kron_int(a, b):
    return sp.kron(sp.csr_array(a), sp.csr_array(b), format="csr")


def identity_defect(A, D, E):
    """D{z,w,v} - {Dz,w,v} + {z,Ew,v} - {z,w,Dv} for all basis z, w, v.

    D and E are integer n x n arrays (a common scale is irrelevant).
    Returns a sparse matrix with rows (z, w) and columns (m, v).
    """
    Vm, vmax = A.vsparse()
    n = A.dim
    I = sp.identity(n, dtype=np.int64, format="csr")
    bound = vmax * max(int(np.abs(D).max()), int(np.abs(E).max()), 1) * n * 4
    if bound >= 2 ** 62:
        raise OverflowError("identity check exceeds the int64 range")
    Dk = _kron_int(D.T, I)
    F = (Vm @ Dk - Vm @ _kron_int(I, D) - Dk @ Vm + _kron_int(I, E.T) @ Vm)
    F.eliminate_zeros()
    return F


def is_structurable(A):
    """(True, None) or (False, (x, y, z, w)) for a violating basis quadruple."""
    if A.unit is None or not A.algebra.check_unit():
        raise StructurableError("structurable algebras are unital")
    Vt, _ = A.vtensor()
    n = A.dim
    # cheap rejection on a few generators before the span is computed
    rng = np.random.default_rng(0)
    for i, j in rng.integers(0, n, size=(6, 2)).tolist():
        F = identity_defect(A, Vt[i, j], Vt[j, i])
        if F.nnz:
            return False, _witness(A, F, i, j)
    pairs, _, _ = A.pair_span()
    for i, j in pairs:
        F = identity_defect(A, Vt[i, j], Vt[j, i])
        if F.nnz:
            return False, _witness(A, F, i, j)
    return True, None


def _witness(A, F, i, j):
    n = A.dim
    # a basis pair (i, j) fails; report the first (z, w) where it does
    r = int(F.tocoo().row.min())
    return (i, j) + divmod(r, n)


def first_violation(A):
    """Scan every basis quadruple directly; slow, used to cross-check is_structurable."""
    Vt, _ = A.vtensor()
    n = A.dim
    for i in range(n):
        for j in range(n):
            F = identity_defect(A, Vt[i, j], Vt[j, i])
            if F.nnz:
                return _witness(A, F, i, j)
    return None


# ----------------------------------------------------------------------
# Instr(A) and eps


class Instr:
    """Span of the V_{x,y} with basis V_{x_i,x_j} for the chosen index pairs.

    ``lie`` holds the bracket in that basis, ``epsilon`` the matrix of
    eps(V_{x,y}) = -V_{y,x}, and ``vcoords[a, b]`` the coordinates of
    V_{x_a,x_b}.
    """

    def __init__(self, A, pairs, ops, den, vcoords, epsilon, lie):
        self.A = A
        self.pairs = pairs
        self.ops = ops  # int array (d, n, n), scale 1/den
        self.den = den
        self.vcoords = vcoords  # Fraction-free: int array (n, n, d), scale 1/vden
        self.epsilon = epsilon
        self.lie = lie
        self.dim = len(pairs)

    def op(self, k):
        return LinOp(KMat.from_int_dense(self.ops[k], self.den))

    def subspace(self):
        n = self.A.dim
        return Subspace(KMat.from_int_dense(self.ops.reshape(self.dim, n * n), self.den), n * n)

    def derived(self):
        """[Instr, Instr] as a Lie algebra, with its basis in Instr coordinates.

        For the 56-dimensional algebras Instr is e7 plus the scalars (V_{1,1} = id)
        and this is the e7 part.
        """
        if getattr(self, "_derived", None) is None:
            U, _ = derived_basis(self.lie)
            L = subalgebra_dense(self.lie, U, name=f"[{self.lie.name},{self.lie.name}]")
            self._derived = (L, U)
        return self._derived

    def coords_of_V(self, x, y):
        """Coordinates (column KMat) of V_{x,y} for rational column vectors x, y."""
        C, g = self.vcoords
        xs = np.array(x.to_fraction_rows(), dtype=object)[:, 0]
        ys = np.array(y.to_fraction_rows(), dtype=object)[:, 0]
        out = np.einsum("a,b,abk->k", xs, ys, C.astype(object)) / g
        return KMat.column(list(out))


def instr_and_epsilon(A, verify=True):
    """Instr(A) and eps; raises if eps is not well defined on the span."""
    if A._instr is not None:
        return A._instr
    Vt, vden = A.vtensor()
    n = A.dim
    pairs, G, g = A.pair_span()
    d = len(pairs)
    B = np.stack([Vt[i, j] for i, j in pairs]) if d else np.zeros((0, n, n), dtype=np.int64)
    # the first components of the chosen pairs must stay independent, otherwise
    # some V_{x,y} = 0 while V_{y,x} != 0 and eps is not well defined
    p, _ = modular_prime(1)
    if len(_independent_rows(B.reshape(d, n * n) % p, p)) != d:
        if rank(KMat.from_int_dense(B.reshape(d, n * n))) != d:
            raise StructurableError("eps(V_{x,y}) = -V_{y,x} is not well defined")
    C = G.reshape(n, n, d)  # V_{x_a,x_b} = sum_k C[a,b,k]/g B_k
    # eps(B_k) = -V_{x_j,x_i}
    eps_cols = -np.stack([C[j, i] for i, j in pairs], axis=1)
    epsilon = KMat.from_int_dense(eps_cols, g)
    # bracket: [B_k, V_{a,b}] = V_{B_k a, b} - V_{a, E_k b} with E_k = V_{x_j,x_i}
    IK = [i for i, _ in pairs]
    JK = [j for _, j in pairs]
    cmax = int(np.abs(C).max()) if C.size else 0
    if int(np.abs(Vt).max()) * cmax * n * 2 >= 2 ** 62:
        raise OverflowError("Instr structure constants exceed the int64 range")
    Dall = Vt[IK, JK][:, :, IK]  # [k, a, l] = D_k[a, i_l]
    Eall = Vt[JK, IK][:, :, JK]  # [k, b, l] = E_k[b, j_l]
    sc = (np.einsum("kal,alm->mkl", Dall, C[:, JK, :], optimize=True)
          - np.einsum("kbl,lbm->mkl", Eall, C[IK, :, :], optimize=True))
    scale = vden * g
    ent = {}
    for m, k, l in zip(*np.nonzero(sc)):
        ent[(int(m), int(k) * d + int(l))] = Fraction(int(sc[m, k, l]), scale)
    lie = AlgebraSC(f"Instr({A.name})", [f"V{i}_{j}" for i, j in pairs],
                    KMat.from_entries((d, d * d), ent, 1), anticommutative=True)
    out = Instr(A, pairs, B, vden, (C, g), epsilon, lie)
    if verify:
        _verify_instr(out)
    A._instr = out
    return out


def _verify_instr(ins):
    """Brackets computed from the rewriting rule agree with operator commutators; eps^2 = 1."""
    d = ins.dim
    B = ins.ops
    den = ins.den
    T, tden = ins.lie.T.to_int_dense()
    T = T[0].reshape(d, d, d)
    Bf = B.astype(np.float64)
    vmax = int(np.abs(B).max()) if B.size else 0
    tmax = int(np.abs(T).max()) if T.size else 0
    n = B.shape[1]
    if vmax * vmax * n * 2 * tden >= 2 ** 53 or tmax * vmax * d * den >= 2 ** 53:
        raise OverflowError("Instr verification exceeds the exact float range")
    flatB = Bf.reshape(d, -1)
    for k in range(d):
        # tden [B_k, B_l] = den sum_m T[m,k,l] B_m, everything scaled to integers
        comm = np.matmul(Bf[k][None], Bf) - np.matmul(Bf, Bf[k][None])
        rhs = (T[:, k, :].T.astype(np.float64) @ flatB).reshape(comm.shape)
        if not np.array_equal(comm * tden, rhs * den):
            raise StructurableError(f"Instr bracket rewriting fails at basis element {k}")
    e = ins.epsilon
    if not (e @ e == KMat.identity(d)):
        raise StructurableError("eps does not square to the identity")


def epsilon_eigenspaces(ins):
    """(even, odd) subspaces of Instr in its own coordinates."""
    d = ins.dim
    I = KMat.identity(d)
    return Subspace(kernel(ins.epsilon - I), d), Subspace(kernel(ins.epsilon + I), d)


# ----------------------------------------------------------------------
# constructions


def _placement(d, big, oi, oj):
    """Selection matrix sending block column (i, j) to column (i + oi, j + oj) of a big x big product."""
    return KMat.from_entries((d * d, big * big), {(i * d + j, (i + oi) * big + (j + oj)): 1
                                                  for i in range(d) for j in range(d)})


def _rows_into(d, big, off):
    return KMat.from_entries((big, d), {(off + i, i): 1 for i in range(d)})


def cd_jordan4(kind="Q", mu=1, J=None):
    """J + vJ with the doubled product and involution x1 + v x2 -> x1 - v x2^theta.

    ``J`` defaults to H_4(kind); theta(x) = -x + 2 t_J(x) 1.
    """
    if mu == 0:
        raise StructurableError("mu must be nonzero")
    if J is None:
        J = hermitian_jordan(kind, 4)
    A = J.algebra
    d = A.dim
    N = A.N
    I = KMat.identity(d, N)
    theta = (I.scale(-1) + (A.unit @ J.trace_form()).scale(2))
    TJ = A.T
    b = 2 * d
    blocks = [
        (0, 0, 0, TJ),
        (d, 0, d, TJ @ theta.kron(I)),
        (d, d, 0, theta @ TJ @ theta.kron(theta)),
        (0, d, d, (theta @ TJ @ I.kron(theta)).scale(mu)),
    ]
    T = KMat.zeros((b, b * b), N)
    for out, oi, oj, blk in blocks:
        T = T + _rows_into(d, b, out) @ blk @ _placement(d, b, oi, oj)
    zero = KMat.zeros((d, d), N)
    inv = I.hstack(zero).vstack(zero.hstack(theta.scale(-1)))
    unit = A.unit.vstack(KMat.zeros((d, 1), N))
    labels = list(A.labels) + ["v" + l for l in A.labels]
    name = f"CD({J.name})"
    alg = AlgebraSC(name, labels, T, involution=inv, unit=unit, meta={"jordan_dim": d})
    out = InvAlgebra(alg, name)
    out.jordan = J
    out.theta = theta
    return out


CROSS_SCALE = Fraction(1)


def brown_algebra(cross_scale=None):
    """F + A + A + F with the Brown product; the cross product is scaled by ``cross_scale``.

    Basis: alpha, x_0..x_26, x'_0..x'_26, beta.  The default scale is the one
    for which the algebra is structurable (see tests).
    """
    s = CROSS_SCALE if cross_scale is None else Fraction(cross_scale)
    J = albert()
    cd = CubicData(J)
    n = J.dim
    a, x0, y0, bt = 0, 1, 1 + n, 1 + 2 * n
    prods = {}

    def add(i, j, k, v):
        if v:
            prods.setdefault((i, j), {})
            prods[(i, j)][k] = prods[(i, j)].get(k, 0) + v

    add(a, a, a, 1)
    add(bt, bt, bt, 1)
    for i in range(n):
        add(a, x0 + i, x0 + i, 1)  # alpha1 x2
        add(x0 + i, bt, x0 + i, 1)  # beta2 x1
        add(y0 + i, a, y0 + i, 1)  # alpha2 x1'
        add(bt, y0 + i, y0 + i, 1)  # beta1 x2'
        for j in range(n):
            tij = cd.s[i, j]
            add(x0 + i, y0 + j, a, tij)  # T(x1, x2')
            add(y0 + j, x0 + i, bt, tij)  # T(x2, x1')
    nz = np.argwhere(cd.cross != 0)
    for m, i, j in nz.tolist():
        v = cd.cross[m, i, j] * s
        add(y0 + i, y0 + j, x0 + m, v)  # x1' x x2'
        add(x0 + i, x0 + j, y0 + m, v)  # x1 x x2
    labels = ["alpha"] + [f"x_{l}" for l in J.algebra.labels] + [f"x'_{l}" for l in J.algebra.labels] + ["beta"]
    dim = 2 * n + 2
    inv = {(i, i): 1 for i in range(1, 2 * n + 1)}
    inv[(a, bt)] = 1
    inv[(bt, a)] = 1
    unit = KMat.column([1] + [0] * (2 * n) + [1])
    alg = AlgebraSC.from_products("Brown", labels, prods, N=1,
                                  involution=KMat.from_entries((dim, dim), inv), unit=unit)
    out = InvAlgebra(alg, "Brown")
    out.cubic = cd
    return out


TENSOR_IDS = {"QxC": ("Q", "C"), "KxC": ("K", "C"), "CxC": ("C", "C"), "FxC": ("F", "C")}


def tensor_composition(k1, k2):
    """(C_1 (x) C_2, bar (x) bar)."""
    A = build_hurwitz(k1).algebra
    B = build_hurwitz(k2).algebra
    name = f"{k1}x{k2}"
    return InvAlgebra(tensor(A, B, name=name), name)


def associative_with_involution(kind="Q", n=2):
    """Mat_n(C) with the conjugate-transpose involution (a structurable sanity case)."""
    from .jordan import matrix_over
    return InvAlgebra(matrix_over(kind, n), f"Mat{n}({kind})")


def jordan_as_structurable(J):
    """(J, id)."""
    return InvAlgebra(J.algebra, J.name)


def structurable_by_id(key):
    if key in ("CDH4F", "CDH4K", "CDH4Q"):
        return cd_jordan4(key[-1])
    if key == "Brown":
        return brown_algebra()
    if key in TENSOR_IDS:
        return tensor_composition(*TENSOR_IDS[key])
    if key in ("F", "K", "Q", "C"):
        return InvAlgebra(build_hurwitz(key).algebra, key)
    raise KeyError(f"unknown structurable algebra {key!r}")


STRUCTURABLE_IDS = ("C", "CDH4F", "CDH4K", "CDH4Q", "Brown", "QxC", "KxC", "CxC")


# ----------------------------------------------------------------------
# the matrix model of H_4(Q) inside Mat_8 and a grading with 1-dim pieces

SKEW_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
# Pfaffian adjoint on the coordinates of SKEW_PAIRS: hat(e_p) = sign * e_q
PFAFF_HAT = {0: (5, -1), 1: (4, 1), 2: (3, -1), 3: (2, -1), 4: (1, 1), 5: (0, -1)}


def pauli(n, N=None):
    """(P_n, Q_n) as KMat: diag(1, xi, ..., xi^(n-1)) with xi = zeta_n, and the cyclic shift."""
    from .scalars import root_of_unity
    N = N or n
    P = KMat.from_entries((n, n), {(i, i): root_of_unity(i * (N // n), N) for i in range(n)}, N)
    Q = KMat.from_entries((n, n), {(i, (i + 1) % n): 1 for i in range(n)}, N)
    return P, Q


def pfaffian_adjoint(x):
    """x-hat for a skew 4 x 4 matrix given as a nested list."""
    h = [[0] * 4 for _ in range(4)]
    for p, (q, sgn) in PFAFF_HAT.items():
        a, b = SKEW_PAIRS[p]
        c, d = SKEW_PAIRS[q]
        h[c][d] += sgn * x[a][b]
        h[d][c] -= sgn * x[a][b]
    return h


def matrix_model_h4q():
    """{(z, x; y, z^t) : x, y skew} in Mat_8, the hermitian part for P = (0, -I; I, 0)."""
    from .jordan import jordan_from_ambient, matrix_algebra
    I4 = [[int(i == j) for j in range(4)] for i in range(4)]
    P = [[0] * 4 + [-v for v in I4[i]] for i in range(4)] + [I4[i] + [0] * 4 for i in range(4)]
    amb = matrix_algebra(8, form=P, name="Mat8")
    cols, labels = [], []

    def E(i, j):
        return i * 8 + j

    for a in range(4):
        for b in range(4):
            cols.append({E(a, b): 1, E(4 + b, 4 + a): 1})
            labels.append(f"z{a + 1}{b + 1}")
    for a, b in SKEW_PAIRS:
        cols.append({E(a, 4 + b): 1, E(b, 4 + a): -1})
        labels.append(f"x{a + 1}{b + 1}")
    for a, b in SKEW_PAIRS:
        cols.append({E(4 + a, b): 1, E(4 + b, a): -1})
        labels.append(f"y{a + 1}{b + 1}")
    basis = stack_cols([KMat.from_entries((64, 1), {(k, 0): v for k, v in c.items()}) for c in cols])
    if not (amb.involution @ basis == basis):
        raise StructurableError("matrix model basis is not hermitian")
    J = jordan_from_ambient(amb, basis, "H4(Q)[Mat8]", "Q", 4)
    J.algebra.labels = labels
    return J


def cd_matrix_model():
    """CD of the Mat_8 model of H_4(Q): the 56-dim algebra carrying the Z_4^3 grading."""
    return cd_jordan4(J=matrix_model_h4q())


Z4_SLOTS = {"z": 0, "x": 1, "y": 3}


def z4_degrees():
    """Degrees in Z_4: z -> 0, x -> 1, y -> 3, and v shifts z by 2, x to 3, y to 1."""
    out = []
    for v in (0, 1):
        for k in range(28):
            s = "z" if k < 16 else ("x" if k < 22 else "y")
            d = Z4_SLOTS[s]
            if v:
                d = {"z": 2, "x": 3, "y": 1}[s]
            out.append((d,))
    return out


def psi(u):
    """Psi(u) on J + vJ: z -> u z u^-1, x -> u x u^t, y -> u^-t y u^-1 on both copies."""
    from .algcore import inverse
    N = u.N
    ui = inverse(u)
    U = [[u.entry(i, j) for j in range(4)] for i in range(4)]
    Ui = [[ui.entry(i, j) for j in range(4)] for i in range(4)]
    W = [[Ui[j][i] for j in range(4)] for i in range(4)]  # u^-t
    ent = {}
    for a in range(4):
        for b in range(4):
            for i in range(4):
                for j in range(4):
                    v = U[i][a] * Ui[b][j]
                    if v != 0:
                        ent[(4 * i + j, 4 * a + b)] = v
    for off, M in ((16, U), (22, W)):
        for p, (a, b) in enumerate(SKEW_PAIRS):
            for q, (i, j) in enumerate(SKEW_PAIRS):
                v = M[i][a] * M[j][b] - M[i][b] * M[j][a]
                if v != 0:
                    ent[(off + q, off + p)] = v
    full = {}
    for (r, c), v in ent.items():
        full[(r, c)] = v
        full[(28 + r, 28 + c)] = v
    return KMat.from_entries((56, 56), full, N)


def pi_automorphism():
    """Identity on z and vz; (0, x; y, 0) -> v(0, -yhat; xhat, 0) and v(0, x; y, 0) -> (0, -yhat; xhat, 0)."""
    ent = {}
    for k in range(16):
        ent[(k, k)] = 1
        ent[(28 + k, 28 + k)] = 1
    X, Y = 16, 22
    for p, (q, s) in PFAFF_HAT.items():
        ent[(28 + Y + q, X + p)] = s  # J x -> v y (hat)
        ent[(28 + X + q, Y + p)] = -s  # J y -> v x (-hat)
        ent[(Y + q, 28 + X + p)] = s  # v x -> J y (hat)
        ent[(X + q, 28 + Y + p)] = -s  # v y -> J x (-hat)
    return KMat.from_entries((56, 56), ent)


def z43_operators():
    """(pi Psi(xi X), Psi(Y)) with X = P_4, Y = Q_4 and xi^2 = i, over Q(zeta_8)."""
    from .scalars import root_of_unity
    X, Y = pauli(4, 8)
    xi = root_of_unity(1, 8)
    return pi_automorphism().lift(8) @ psi(X.scale(xi)), psi(Y)


def z43_grading_on_cd_h4q(A=None):
    """The Z_4^3 grading of the 56-dim algebra: Z_4 grading refined by two commuting automorphisms."""
    from .gradlib import AbGroup, Grading, GradingError, automorphism_defect, refine_by_automorphisms
    if A is None:
        A = cd_matrix_model()
    base = Grading(A.algebra, AbGroup(0, (4,)), z4_degrees(), name="Z4 on CD(H4(Q))")
    if not base.check()[0]:
        raise GradingError("the Z_4 grading is not compatible with the product")
    op1, op2 = z43_operators()
    sigma = A.involution.lift(8)
    for t, op in enumerate((op1, op2)):
        if not (op @ sigma == sigma @ op):
            raise GradingError(f"operator {t} does not commute with the involution")
    if automorphism_defect(A.algebra.lift(8), pi_automorphism().lift(8)) is not None:
        raise GradingError("pi is not an automorphism")
    g = refine_by_automorphisms(base, [op1, op2], [4, 4], name="Z4^3 on CD(H4(Q))")
    g.model = A
    return g


def z43_restriction_cd_h4k(g=None):
    """Restrict the Z_4^3 grading to a 32-dim subalgebra fixed by an order-2 character.

    Among the characters a with a_i in {0, 2}, the first whose fixed part is a 32-dim
    subalgebra with one-dimensional skew part and Instr of dimension 67 is used;
    that is the shape of CD(H_4(K)).
    Returns (InvAlgebra, Grading, character).
    """
    from itertools import product
    from .algcore import kernel
    from .gradlib import AbGroup, Grading
    if g is None:
        g = z43_grading_on_cd_h4q()
    A = g.model
    op1, op2 = z43_operators()
    cube = [op1 @ op1, op2 @ op2]
    for ch in product((0, 2), repeat=3):
        if not any(ch):
            continue
        # the automorphism for the character: z4-grading part acts by (-1)^deg
        keep = [i for i, d in enumerate(g.degrees) if sum(a * x for a, x in zip(ch, d)) % 4 == 0]
        if len(keep) != 32:
            continue
        ops = []
        if ch[0]:
            ops.append(KMat.from_entries((56, 56), {(i, i): (-1) ** z4_degrees()[i][0] for i in range(56)}))
        if ch[1]:
            ops.append(cube[0])
        if ch[2]:
            ops.append(cube[1])
        op = ops[0]
        for o in ops[1:]:
            op = op @ o
        op = op.lift(8)
        if not all(v.is_rational() for v in op.entries().values()):
            continue
        rat = KMat([op.layers[0]], op.den, 1)
        K = kernel(rat - KMat.identity(56))
        if K.shape[0] != 32:
            continue
        sub = _fixed_subalgebra(A, K.T)
        if sub.skew.dim != 1:
            continue
        if not is_structurable(sub)[0] or instr_and_epsilon(sub).dim != 67:
            continue
        # homogeneous basis of the piece, in subalgebra coordinates
        Bh = g.basis_matrix().cols(keep)
        L = _left_inv(K.T)
        coords = L.lift(Bh.N) @ Bh
        grading = Grading(sub.algebra.lift(Bh.N), AbGroup(0, (4, 4, 4)), [g.degrees[i] for i in keep],
                          basis=coords, name="Z4^3 restricted to CD(H4(K))")
        return sub, grading, ch
    raise StructurableError("no order-2 character cuts out a CD(H_4(K)) subalgebra")


def _left_inv(B):
    from .algcore import left_inverse
    return left_inverse(B)


def _fixed_subalgebra(A, basis):
    from .algcore import coords_in_columns
    L = _left_inv(basis)
    alg = A.algebra
    d = basis.shape[1]
    T = coords_in_columns(basis, alg.products(basis, basis), L)
    inv = coords_in_columns(basis, alg.involution @ basis, L)
    unit = coords_in_columns(basis, alg.unit, L)
    sub = AlgebraSC(f"fixed({alg.name})", [f"f{i}" for i in range(d)], T, involution=inv, unit=unit)
    return InvAlgebra(sub)
