"""Lie algebras built from composition, Jordan and structurable algebras.

Every construction assembles its structure constants block by block:
the basis is a concatenation of named pieces (tri(S), iota_0(S x S'),
K_{-2}, ..., u_12(A), ...) and each bracket rule fills one block of the
tensor as an exact dense array over Q(zeta_N).  Blocks for (X, Y) with
X != Y are antisymmetrized automatically.
"""

from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .algcore import (AlgebraSC, CArr, KMat, LinAlgError, Subspace, ceinsum, cconcat, ckernel, crow_basis,
                      csolve, cstack, kernel_certified, kernel_modular)
from .composition import build_symmetric_composition
from .gradlib import AbGroup, coordinate_grading
from .jordan import albert, derivation_constraints
from .scalars import euler_phi, lcm


class LieError(ValueError):
    pass


class LieAlg:
    """An anticommutative algebra together with the pieces it was built from.

    ``components`` maps a piece name to its (start, stop) range in the basis;
    ``gradings`` holds gradings attached by the construction.
    """

    def __init__(self, algebra, provenance, components, meta=None):
        self.algebra = algebra
        self.provenance = dict(provenance)
        self.components = dict(components)
        self.meta = dict(meta or {})
        self.gradings = {}

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def name(self):
        return self.algebra.name

    @property
    def N(self):
        return self.algebra.N

    def component(self, name):
        a, b = self.components[name]
        return Subspace.coordinate(self.dim, list(range(a, b)), self.N)

    def piece(self, name):
        a, b = self.components[name]
        return list(range(a, b))

    def __repr__(self):
        return f"LieAlg({self.name!r}, dim={self.dim})"


# ----------------------------------------------------------------------
# block assembly


class _Builder:
    def __init__(self, pieces):
        self.names = [p for p, _ in pieces]
        self.sizes = dict(pieces)
        self.off = {}
        o = 0
        for p, k in pieces:
            self.off[p] = o
            o += k
        self.dim = o
        self.parts = []
        self.seen = set()

    def put(self, X, Y, Z, c):
        """[X_x, Y_y] = sum_z c[z, x, y] Z_z for the whole block."""
        if c.shape != (self.sizes[Z], self.sizes[X], self.sizes[Y]):
            raise ValueError(f"block {X},{Y}->{Z} has shape {c.shape}")
        key = (X, Y, Z)
        if key in self.seen or (Y, X, Z) in self.seen:
            raise ValueError(f"block {key} given twice")
        self.seen.add(key)
        self.parts.append((X, Y, Z, c))

    def build(self, name, labels=None):
        d = self.dim
        N = 1
        den = 1
        for *_, c in self.parts:
            N = lcm(N, c.N)
        parts = []
        for X, Y, Z, c in self.parts:
            c = c.lift(N)
            den = lcm(den, c.den)
            parts.append((X, Y, Z, c))
        phi = euler_phi(N)
        rows, cols, vals = [[] for _ in range(phi)], [[] for _ in range(phi)], [[] for _ in range(phi)]
        for X, Y, Z, c in parts:
            f = den // c.den
            if c.maxabs() * f >= 2 ** 62:
                raise OverflowError("structure constants exceed the int64 range")
            nz = np.nonzero(np.any(c.a != 0, axis=0))
            z, x, y = nz
            gx, gy, gz = x + self.off[X], y + self.off[Y], z + self.off[Z]
            for l in range(phi):
                v = c.a[l][nz] * f
                keep = v != 0
                rows[l].append(gz[keep])
                cols[l].append((gx * d + gy)[keep])
                vals[l].append(v[keep])
                if X != Y:
                    rows[l].append(gz[keep])
                    cols[l].append((gy * d + gx)[keep])
                    vals[l].append(-v[keep])
        layers = []
        for l in range(phi):
            r = np.concatenate(rows[l]) if rows[l] else np.zeros(0, dtype=np.int64)
            cc = np.concatenate(cols[l]) if cols[l] else np.zeros(0, dtype=np.int64)
            v = np.concatenate(vals[l]) if vals[l] else np.zeros(0, dtype=np.int64)
            M = sp.coo_array((v, (r, cc)), shape=(d, d * d)).tocsr()
            M.sum_duplicates()
            layers.append(M)
        T = KMat(layers, den, N)
        if labels is None:
            labels = [f"{p}[{i}]" for p in self.names for i in range(self.sizes[p])]
        return AlgebraSC(name, labels, T, anticommutative=True)


def _comps(builder):
    return {p: (builder.off[p], builder.off[p] + builder.sizes[p]) for p in builder.names}


# ----------------------------------------------------------------------
# dense helpers


def structure(A):
    """CArr c with x_i x_j = sum_k c[k, i, j] x_k."""
    n = A.dim
    return CArr.from_kmat(A.T).reshape(n, n, n)


def left_ops(c):
    """L[i] = matrix of x -> x_i x, from the structure tensor."""
    return c.transpose(1, 0, 2)


def right_ops(c):
    return c.transpose(2, 0, 1)


def commutators(X, Y=None):
    """[X_i, Y_j] for stacks of square matrices, shape (p, q, n, n)."""
    Y = X if Y is None else Y
    return ceinsum("iab,jbc->ijac", X, Y) - ceinsum("jab,ibc->ijac", Y, X)


def coords(basis, vecs):
    """Coordinates of the columns of ``vecs`` (m, ...) in the columns of ``basis`` (m, r)."""
    shp = vecs.shape
    flat = vecs.reshape(shp[0], int(np.prod(shp[1:])) if len(shp) > 1 else 1)
    X = csolve(basis, flat)
    return X.reshape(basis.shape[1], *shp[1:])


def op_basis(ops):
    """Indices of a basis among a stack of operators (k, n, n)."""
    k = ops.shape[0]
    if k == 0:
        return []
    return crow_basis(ops.reshape(k, -1))


def _eye(n, N=1):
    return CArr.rational(np.identity(n, dtype=np.int64)).lift(N)


def operator_bracket(ops):
    """Structure constants (r, r, r) of the span of linearly independent operators under commutators."""
    r, n, _ = ops.shape
    if r == 0:
        return CArr.zeros((0, 0, 0), ops.N)
    C = commutators(ops)  # (r, r, n, n)
    U = ops.reshape(r, n * n).transpose(1, 0)
    V = C.transpose(2, 3, 0, 1).reshape(n * n, r * r)
    try:
        X = csolve(U, V)
    except LinAlgError:
        raise LieError("operators are not closed under commutators") from None
    return X.reshape(r, r, r)


def _ops_algebra(ops, name, labels=None):
    b = _Builder([("ops", ops.shape[0])])
    b.put("ops", "ops", "ops", operator_bracket(ops))
    return b.build(name, labels)


# ----------------------------------------------------------------------
# derivations


def der_algebra(A, involution=False, seed=0):
    """Der(A), or Der(A, -) with ``involution``, as a LieAlg with operator basis in meta['ops']."""
    A = getattr(A, "algebra", A)
    n = A.dim
    M = derivation_constraints(A, A.involution if involution else None)
    if M.N == 1 and n > 12:
        K = kernel_modular(M, seed=seed)
    else:
        K = kernel_certified(M, seed=seed)
    r = K.shape[0]
    if r == 0:
        ops = CArr.zeros((0, n, n), A.N)
    else:
        ops = CArr.from_kmat(K.lift(A.N)).reshape(r, n, n)
    name = f"Der({A.name},-)" if involution else f"Der({A.name})"
    b = _Builder([("der", r)])
    if r:
        b.put("der", "der", "der", operator_bracket(ops))
    L = LieAlg(b.build(name), {"construction": "der", "ingredients": [A.name], "involution": involution},
               _comps(b), {"ops": ops})
    return L


# ----------------------------------------------------------------------
# Tits construction T(C, J)


def _trace_zero_basis(trace_row):
    """Basis (columns) of the kernel of a 1 x n functional, as a CArr (n, n-1)."""
    K = ckernel(trace_row)
    return K.transpose(1, 0)


def _hurwitz_data(C):
    A = C.algebra
    c = structure(A)
    n = A.dim
    unit = CArr.from_kmat(A.unit)[:, 0]
    polar = CArr.from_kmat(A.polar)
    tr = ceinsum("ab,b->a", polar, unit)  # t_C(x) = q(x, 1)
    L, R = left_ops(c), right_ops(c)
    # d_{a,b} on basis pairs
    LL, LR, RR = commutators(L), commutators(L, R), commutators(R)
    D = LL + LR + RR  # (n, n, n, n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if pairs:
        Dp = cstack([D[i, j] for i, j in pairs])
        idx = op_basis(Dp)
    else:
        idx = []
    dbasis = cstack([Dp[k] for k in idx]) if idx else CArr.zeros((0, n, n), A.N)
    B0 = _trace_zero_basis(tr.reshape(1, n))
    return dict(c=c, n=n, unit=unit, polar=polar, tr=tr, D=D, der=dbasis, der_pairs=[pairs[k] for k in idx],
                B0=B0)


def _jordan_data(J):
    A = J.algebra
    c = structure(A)
    n = A.dim
    tr = CArr.from_kmat(J.trace_form())[0]
    unit = CArr.from_kmat(A.unit)[:, 0]
    R = right_ops(c)
    RR = commutators(R)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if pairs:
        Rp = cstack([RR[i, j] for i, j in pairs])
        idx = op_basis(Rp)
    else:
        idx = []
    dbasis = cstack([Rp[k] for k in idx]) if idx else CArr.zeros((0, n, n), A.N)
    B0 = _trace_zero_basis(tr.reshape(1, n)) if n > 1 else CArr.zeros((1, 0), A.N)
    return dict(c=c, n=n, tr=tr, unit=unit, R=R, der=dbasis, B0=B0)


def tits(C, J, name=None):
    """T(C, J) = Der(C) + C_0 (x) J_0 + Der(J) with the Tits bracket."""
    if J.dim != 1 and getattr(J, "n", None) != 3:
        raise LieError("the Tits construction needs a Jordan algebra of degree 3 (or F)")
    hc = _hurwitz_data(C)
    hj = _jordan_data(J) if J.dim > 1 else None
    Dc = hc["der"]
    r1 = Dc.shape[0]
    B0 = hc["B0"]
    n0 = B0.shape[1]
    if hj is not None:
        Dj = hj["der"]
        BJ = hj["B0"]
    else:
        Dj = CArr.zeros((0, 1, 1))
        BJ = CArr.zeros((1, 0))
    r2 = Dj.shape[0]
    m0 = BJ.shape[1]
    mix = n0 * m0
    b = _Builder([("derC", r1), ("CJ", mix), ("derJ", r2)])
    if r1:
        b.put("derC", "derC", "derC", operator_bracket(Dc))
    if r2:
        b.put("derJ", "derJ", "derJ", operator_bracket(Dj))
    if mix:
        nC = hc["n"]
        cC = hc["c"]
        # Der(C) and Der(J) on C_0 and J_0
        if r1:
            actC = coords(B0, ceinsum("kab,bp->akp", Dc, B0))  # (n0, r1, n0)
            blk = ceinsum("Pkp,Qq->PQkpq", actC, _eye(m0)).reshape(mix, r1, mix)
            b.put("derC", "CJ", "CJ", blk)
        if r2:
            actJ = coords(BJ, ceinsum("kab,bq->akq", Dj, BJ))  # (m0, r2, m0)
            blk = ceinsum("Pp,Qkq->PQkpq", _eye(n0), actJ).reshape(mix, r2, mix)
            b.put("derJ", "CJ", "CJ", blk)
        # [a (x) x, b (x) y] = t_J(xy) d_{a,b} + [a,b] (x) x*y + 2 t_C(ab) [R_x, R_y]
        cJ = hj["c"]
        prodC = ceinsum("kab,ap,bs->kps", cC, B0, B0)  # (nC, n0, n0)
        prodJ = ceinsum("kab,aq,bt->kqt", cJ, BJ, BJ)  # (nJ, m0, m0)
        tC = ceinsum("k,kps->ps", hc["tr"], prodC)
        tJ = ceinsum("k,kqt->qt", hj["tr"], prodJ)
        out = []
        if r1:
            Dab = ceinsum("ijab,ip,js->abps", hc["D"], B0, B0).reshape(nC * nC, n0 * n0)
            dab = csolve(Dc.reshape(r1, nC * nC).transpose(1, 0), Dab).reshape(r1, n0, n0)
            b.put("CJ", "CJ", "derC", ceinsum("qt,kps->kpqst", tJ, dab).reshape(r1, mix, mix))
        comC = coords(B0, prodC - prodC.transpose(0, 2, 1))  # (n0, n0, n0)
        star = prodJ - ceinsum("k,qt->kqt", hj["unit"], tJ)
        starc = coords(BJ, star)  # (m0, m0, m0)
        out = ceinsum("cps,zqt->czpqst", comC, starc).reshape(mix, mix, mix)
        b.put("CJ", "CJ", "CJ", out)
        if r2:
            R0 = ceinsum("xab,xq->qab", hj["R"], BJ)
            RR0 = commutators(R0)  # (m0, m0, n, n)
            nJ = hj["n"]
            rr = csolve(Dj.reshape(r2, nJ * nJ).transpose(1, 0),
                        RR0.transpose(2, 3, 0, 1).reshape(nJ * nJ, m0 * m0)).reshape(r2, m0, m0)
            blk = ceinsum("ps,kqt->kpqst", tC, rr).scale(2).reshape(r2, mix, mix)
            b.put("CJ", "CJ", "derJ", blk)
    label = name or f"T({C.kind},{J.name})"
    # a split torus is the diagonal part plus a (x) x with L_a, R_a, R_x diagonal
    extra = []
    if mix:
        da = _diagonal_combinations(cstack([ceinsum("mab,ap->pmb", hc["c"], B0),
                                            ceinsum("mab,bp->pma", hc["c"], B0)], axis=1))
        dx = _diagonal_combinations(ceinsum("xab,xq->qab", hj["R"], BJ)[:, None])
        off = b.off["CJ"]
        for u in da:
            for w in dx:
                v = np.zeros(b.dim, dtype=object)
                v[off:off + mix] = np.multiply.outer(u, w).reshape(-1)
                extra.append(v)
    L = LieAlg(b.build(label), {"construction": "tits", "ingredients": [C.kind, J.name]}, _comps(b),
               {"C0": B0, "J0": BJ, "derC": Dc, "derJ": Dj, "torus_extra": extra})
    return L


def _diagonal_combinations(ops):
    """Rational basis of {c : sum_i c_i ops[i, s] is diagonal for every s}; ops has shape (k, s, n, n)."""
    k, s, n, _ = ops.shape
    off = ~np.eye(n, dtype=bool)
    M = ops.a[:, :, :, off].reshape(ops.phi, k, -1).transpose(0, 2, 1)
    K = ckernel(CArr(M, ops.den, ops.N, reduce=False))
    if K.N != 1:
        raise LieError("diagonal combinations are only computed over Q")
    out = []
    for row in range(K.shape[0]):
        out.append([Fraction(int(v), K.den) for v in K.a[0, row]])
    return out


# ----------------------------------------------------------------------
# triality and g(S, S')


class Triality:
    """tri(S) with its basis of triples, theta and the elements t_{x,y}."""

    def __init__(self, S, basis, theta, tcoords):
        self.S = S
        self.basis = basis  # CArr (r, 3, n, n)
        self.theta = theta  # CArr (r, r): theta(b_k) = sum_j theta[j, k] b_j
        self.tcoords = tcoords  # CArr (r, n, n): t_{x_i, x_j} = sum_k tcoords[k, i, j] b_k
        self.dim = basis.shape[0]

    def triple(self, k):
        """The k-th basis triple as three KMats."""
        return tuple(self.basis[k, i].to_kmat() for i in range(3))

    def theta_power(self, i):
        r = self.dim
        M = _eye(r, self.theta.N)
        for _ in range(i % 3):
            M = ceinsum("ab,bc->ac", self.theta, M)
        return M


def triality_constraints(S):
    """Matrix (CArr) whose kernel is tri(S) inside End(S)^3 (row-major triples)."""
    n = S.dim
    c = structure(S.algebra)
    Q = CArr.from_kmat(S.polar)
    N = c.N
    I = _eye(n, N)
    Q = Q.lift(N)
    nv = 3 * n * n
    # orthogonality d^T Q + Q d = 0 for each component: equation (i, a, b)
    orth = []
    for i in range(3):
        # coefficient of d_i[x, y] in (d^T Q + Q d)[a, b] = Q[x, b] I[y, a] + Q[a, x] I[y, b]
        blk = ceinsum("xb,ya->abxy", Q, I) + ceinsum("ax,yb->abxy", Q, I)
        full = CArr.zeros((n, n, 3, n, n), N)
        parts = [blk if k == i else CArr.zeros((n, n, n, n), N) for k in range(3)]
        full = cstack(parts, axis=2)
        orth.append(full.reshape(n * n, nv))
    # d0(x_i x_j) - d1(x_i) x_j - x_i d2(x_j) = 0: equation (m, i, j)
    t0 = ceinsum("kij,mx,ky->mijxy", c, I, I)  # d0[x,y] with y = k, x = m
    t1 = ceinsum("mkj,yi,xk->mijxy", c, I, I)  # d1[k,i] c[m,k,j]
    t2 = ceinsum("mik,yj,xk->mijxy", c, I, I)  # d2[k,j] c[m,i,k]
    tri = cstack([t0, -t1, -t2], axis=3).reshape(n ** 3, nv)
    return cconcat(orth + [tri], axis=0)


def triality(S):
    """tri(S), computed as a kernel inside o(S, q)^3."""
    n = S.dim
    K = ckernel(triality_constraints(S))
    r = K.shape[0]
    basis = K.reshape(r, 3, n, n)
    c = structure(S.algebra)
    N = c.N
    Q = CArr.from_kmat(S.polar).lift(N)
    I = _eye(n, N)
    flatB = basis.reshape(r, 3 * n * n).transpose(1, 0)
    if r:
        rolled = cstack([basis[:, 2], basis[:, 0], basis[:, 1]], axis=1).reshape(r, 3 * n * n)
        theta = csolve(flatB, rolled.transpose(1, 0))
    else:
        theta = CArr.zeros((0, 0), N)
    # t_{x_i,x_j}
    L, R = left_ops(c), right_ops(c)
    sig = ceinsum("il,mj->ijml", Q, I) - ceinsum("jl,mi->ijml", Q, I)
    half = ceinsum("ij,ml->ijml", Q, I).scale(Fraction(1, 2))
    t1 = half - ceinsum("iab,jbc->ijac", R, L)
    t2 = half - ceinsum("iab,jbc->ijac", L, R)
    T = cstack([sig, t1, t2], axis=2).reshape(n * n, 3 * n * n)
    if r:
        try:
            tco = csolve(flatB, T.transpose(1, 0)).reshape(r, n, n)
        except LinAlgError:
            raise LieError("some t_{x,y} is not in tri(S)") from None
    else:
        if not T.is_zero():
            raise LieError("some t_{x,y} is not in tri(S)")
        tco = CArr.zeros((0, n, n), N)
    return Triality(S, basis, theta, tco)


def tri_bracket(tri):
    """Structure constants of tri(S): componentwise commutators."""
    B = tri.basis
    r = tri.dim
    if r == 0:
        return CArr.zeros((0, 0, 0), B.N)
    n = B.shape[2]
    # block diagonal operators on S + S + S
    a = np.zeros((B.phi, r, 3 * n, 3 * n), dtype=np.int64)
    for i in range(3):
        a[:, :, i * n:(i + 1) * n, i * n:(i + 1) * n] = B.a[:, :, i]
    big = CArr(a, B.den, B.N, reduce=False)
    return operator_bracket(big)


def _sym(kind):
    return build_symmetric_composition(kind) if isinstance(kind, str) else kind


def g_construction(S, S2, name=None):
    """g(S, S') = tri(S) + tri(S') + iota_0 + iota_1 + iota_2 (S x S')."""
    S, S2 = _sym(S), _sym(S2)
    tr1, tr2 = triality(S), triality(S2)
    n, m = S.dim, S2.dim
    r1, r2 = tr1.dim, tr2.dim
    nm = n * m
    b = _Builder([("tri", r1), ("tri'", r2), ("i0", nm), ("i1", nm), ("i2", nm)])
    if r1:
        b.put("tri", "tri", "tri", tri_bracket(tr1))
    if r2:
        b.put("tri'", "tri'", "tri'", tri_bracket(tr2))
    c1, c2 = structure(S.algebra), structure(S2.algebra)
    Q1, Q2 = CArr.from_kmat(S.polar), CArr.from_kmat(S2.polar)
    I1, I2 = _eye(n), _eye(m)
    for i in range(3):
        ii = f"i{i}"
        if r1:
            act = tr1.basis[:, i]  # (r1, n, n)
            blk = ceinsum("kAa,Bb->ABkab", act, I2).reshape(nm, r1, nm)
            b.put("tri", ii, ii, blk)
        if r2:
            act = tr2.basis[:, i]
            blk = ceinsum("Aa,kBb->ABkab", I1, act).reshape(nm, r2, nm)
            b.put("tri'", ii, ii, blk)
        # [iota_i(x (x) x'), iota_{i+1}(y (x) y')] = iota_{i+2}(x*y (x) x'*y')
        blk = ceinsum("eac,fbd->efabcd", c1, c2).reshape(nm, nm, nm)
        b.put(ii, f"i{(i + 1) % 3}", f"i{(i + 2) % 3}", blk)
        # [iota_i(x (x) x'), iota_i(y (x) y')] = q'(x',y') theta^i t_{x,y} + q(x,y) theta'^i t'_{x',y'}
        if r1:
            th = ceinsum("kj,jac->kac", tr1.theta_power(i), tr1.tcoords)
            b.put(ii, ii, "tri", ceinsum("bd,kac->kabcd", Q2, th).reshape(r1, nm, nm))
        if r2:
            th = ceinsum("kj,jbd->kbd", tr2.theta_power(i), tr2.tcoords)
            b.put(ii, ii, "tri'", ceinsum("ac,kbd->kabcd", Q1, th).reshape(r2, nm, nm))
    label = name or f"g({S.kind},{S2.kind})"
    L = LieAlg(b.build(label), {"construction": "g", "ingredients": [S.kind, S2.kind]}, _comps(b),
               {"tri": tr1, "tri'": tr2, "S": S, "S'": S2})
    return L


def theta_automorphism(L):
    """The order three automorphism of g(S, S') (matrix, columns = images of basis vectors)."""
    tr1, tr2 = L.meta["tri"], L.meta["tri'"]
    d = L.dim
    N = L.N
    ent = {}
    for name, tr in (("tri", tr1), ("tri'", tr2)):
        a, _ = L.components[name]
        for k in range(tr.dim):
            for j in range(tr.dim):
                v = tr.theta.lift(N).entry(j, k)
                if v != 0:
                    ent[(a + j, a + k)] = v
    for i in range(3):
        a, e = L.components[f"i{i}"]
        a2, _ = L.components[f"i{(i + 1) % 3}"]
        for k in range(e - a):
            ent[(a2 + k, a + k)] = 1
    return KMat.from_entries((d, d), ent, N)


def z22_skeleton(L):
    """The Z_2^2 grading: tri parts at 0, iota_0 at (1,1), iota_1 at (1,0), iota_2 at (0,1)."""
    deg = {"tri": (0, 0), "tri'": (0, 0), "i0": (1, 1), "i1": (1, 0), "i2": (0, 1)}
    degrees = []
    for p in ("tri", "tri'", "i0", "i1", "i2"):
        a, e = L.components[p]
        degrees += [deg[p]] * (e - a)
    return coordinate_grading(L.algebra, AbGroup(0, (2, 2)), degrees, name="Z2^2 skeleton")


MAGIC_KINDS = ("pF", "pK", "pQ", "pC")


def magic_square(kinds=MAGIC_KINDS):
    """{(S, S'): dim g(S, S')} over all pairs."""
    return {(a, b): g_construction(a, b).dim for a in kinds for b in kinds}


# ----------------------------------------------------------------------
# Kantor construction


# [a, a'] = KANTOR_PSI (a abar' - a' abar) in K_2 (read with a, a' in place of s, s';
# any other scale fails the Jacobi identity)
KANTOR_PSI = Fraction(2)


def _skew_basis(A):
    """Integer basis (columns, CArr (n, s)) of the skew elements of an algebra with involution."""
    n = A.dim
    sig = CArr.from_kmat(A.involution)
    K = ckernel(sig + _eye(n, sig.N))
    return K.transpose(1, 0)


def kantor(A, psi=None, name=None):
    """Kan(A) = S~ + A~ + Instr(A) + A + S, 5-graded by -2..2."""
    from .structurable import instr_and_epsilon, is_structurable
    ok, wit = is_structurable(A)
    if not ok:
        raise LieError(f"not structurable, witness {wit}")
    psi = KANTOR_PSI if psi is None else Fraction(psi)
    ins = instr_and_epsilon(A)
    n = A.dim
    d = ins.dim
    c = structure(A.algebra)
    sig = CArr.from_kmat(A.involution)
    unit = CArr.from_kmat(A.unit)[:, 0]
    Sb = _skew_basis(A.algebra)
    s = Sb.shape[1]
    B = CArr.rational(ins.ops, ins.den)  # (d, n, n)
    eps = CArr.from_kmat(ins.epsilon)  # column k = eps(B_k)
    Beps = ceinsum("jk,jml->kml", eps, B)  # T^eps for T = B_k
    Cv = CArr.rational(ins.vcoords[0], ins.vcoords[1])  # V_{x_a,x_b} = sum_k C[a,b,k] B_k
    b = _Builder([("S~", s), ("A~", n), ("K0", d), ("A", n), ("S", s)])
    lie = CArr.from_kmat(ins.lie.T).reshape(d, d, d)
    b.put("K0", "K0", "K0", lie)
    # [T, a] = T(a), [T, a~] = (T^eps a)~
    b.put("K0", "A", "A", B.transpose(1, 0, 2))
    b.put("K0", "A~", "A~", Beps.transpose(1, 0, 2))

    def on_skew(ops):
        # T(s) + s * conj(T(1)) for every T in the stack, in skew coordinates
        Ts = ceinsum("kml,ls->mks", ops, Sb)
        T1 = ceinsum("kml,l->km", ops, unit)
        cT1 = ceinsum("pm,km->kp", sig, T1)
        prod = ceinsum("uab,as,kb->uks", c, Sb, cT1)
        return coords(Sb, Ts + prod)  # (s, d, s)

    if s:
        b.put("K0", "S", "S", on_skew(B))
        b.put("K0", "S~", "S~", on_skew(Beps))
        # psi(a, a') = a abar' - a' abar
        P = ceinsum("mab,bj->maj", c, sig)  # x_a conj(x_j)
        psiA = coords(Sb, (P - P.transpose(0, 2, 1)).scale(psi))
        b.put("A", "A", "S", psiA)
        b.put("A~", "A~", "S~", psiA)
        # [s, a'~] = s a' in A;  [a, s'~] = (-s' a)~ in A~
        sa = ceinsum("mab,as->msb", c, Sb)  # (n, s, n)
        b.put("S", "A~", "A", sa)
        b.put("A", "S~", "A~", -sa.transpose(0, 2, 1))
        # [s, s'~] = L_s L_s'
        Ls = ceinsum("mab,as->smb", c, Sb)  # (s, n, n)
        LL = ceinsum("smb,tbl->stml", Ls, Ls)
        X = csolve(B.reshape(d, n * n).transpose(1, 0), LL.transpose(2, 3, 0, 1).reshape(n * n, s * s))
        b.put("S", "S~", "K0", X.reshape(d, s, s))
    # [a, a'~] = 2 V_{a,a'}
    b.put("A", "A~", "K0", Cv.transpose(2, 0, 1).scale(2))
    label = name or f"Kan({A.name})"
    L = LieAlg(b.build(label), {"construction": "kantor", "ingredients": [A.name]}, _comps(b),
               {"A": A, "instr": ins, "skew": Sb, "psi": psi})
    L.gradings["Z"] = kantor_grading(L)
    return L


def kantor_grading(L):
    deg = {"S~": -2, "A~": -1, "K0": 0, "A": 1, "S": 2}
    degrees = []
    for p in ("S~", "A~", "K0", "A", "S"):
        a, e = L.components[p]
        degrees += [(deg[p],)] * (e - a)
    return coordinate_grading(L.algebra, AbGroup(1), degrees, name="5-grading")


# ----------------------------------------------------------------------
# related triples and the Steinberg construction


class _TripleData:
    def __init__(self, A):
        c = structure(A.algebra)
        sig = CArr.from_kmat(A.involution)
        self.n = A.dim
        self.c = c
        self.sig = sig
        self.L, self.R = left_ops(c), right_ops(c)
        self.Lb = ceinsum("rq,rab->qab", sig, self.L)  # L_{conj(x_q)}
        self.Rb = ceinsum("rq,rab->qab", sig, self.R)
        self.P = ceinsum("mrb,rp->mpb", c, sig)  # conj(x_p) x_b

    def triples(self, ps, qs):
        """(X, Y, Z) for the pairs (x_p, x_q), stacked as (k, 3, n, n)."""
        L, R, Lb, Rb = self.L, self.R, self.Lb, self.Rb
        X = ceinsum("kab,kbc->kac", Lb[qs], L[ps]) - ceinsum("kab,kbc->kac", Lb[ps], L[qs])
        Y = ceinsum("kab,kbc->kac", Rb[qs], R[ps]) - ceinsum("kab,kbc->kac", Rb[ps], R[qs])
        W = self.P[:, ps, qs] - self.P[:, qs, ps]
        Z = (ceinsum("mk,mab->kab", W, R) + ceinsum("kab,kbc->kac", L[qs], Lb[ps])
             - ceinsum("kab,kbc->kac", L[ps], Lb[qs]))
        return cstack([X, Y, Z], axis=1)


def standard_triples(A, pairs=None):
    """Standard related triples: row k is (T_i, T_{i+1}, T_{i+2}) for the k-th pair (x_p, x_q), with

        T_i = L_{bbar} L_a - L_{abar} L_b,  T_{i+1} = R_{bbar} R_a - R_{abar} R_b,
        T_{i+2} = R_{abar b - bbar a} + L_b L_{abar} - L_a L_{bbar}.
    """
    n = A.dim
    if pairs is None:
        pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]
    ps = [p for p, _ in pairs]
    qs = [q for _, q in pairs]
    return _TripleData(A).triples(ps, qs)


def _roll_triples(T, i):
    """Place (X, Y, Z) as (T_i, T_{i+1}, T_{i+2}) with i in {0, 1, 2}."""
    X, Y, Z = T[:, 0], T[:, 1], T[:, 2]
    slots = [None] * 3
    slots[i % 3], slots[(i + 1) % 3], slots[(i + 2) % 3] = X, Y, Z
    return cstack(slots, axis=1)


def related_triple_defect(A, T):
    """conj T_i conj (xy) - T_{i+1}(x) y - x T_{i+2}(y) on basis pairs, for a triple (3, n, n)."""
    c = structure(A.algebra)
    sig = CArr.from_kmat(A.involution)
    out = []
    for i in range(3):
        Ti, T1, T2 = T[i], T[(i + 1) % 3], T[(i + 2) % 3]
        bar = ceinsum("ab,bc,cd->ad", sig, Ti, sig)
        lhs = ceinsum("mk,kxy->mxy", bar, c)
        rhs = ceinsum("mkj,ki->mij", c, T1) + ceinsum("mik,kj->mij", c, T2)
        out.append(lhs - rhs)
    return cstack(out)


def _grow(basis, rows):
    """Row basis of basis + rows, keeping the old basis rows first."""
    allv = rows if basis is None else cconcat([basis, rows])
    idx = crow_basis(allv)
    if basis is not None:
        t = basis.shape[0]
        assert all(i in idx for i in range(t)), "old basis rows must stay independent"
    return allv[sorted(idx)]


def _triple_commutators(basis, k):
    """[b_k, b_j] for all j, componentwise, shape (t, 3, n, n)."""
    bk = basis[k]
    return ceinsum("iab,jibc->jiac", bk, basis) - ceinsum("jiab,ibc->jiac", basis, bk)


def trip_closure(A, max_rounds=10, chunk=512):
    """Basis (t, 3, n, n) of trip(A), the Lie closure of the standard triples in all three positions."""
    n = A.dim
    td = _TripleData(A)
    pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]
    m = 3 * n * n
    basis = None
    for s0 in range(0, len(pairs), chunk):
        part = pairs[s0:s0 + chunk]
        T = td.triples([p for p, _ in part], [q for _, q in part])
        basis = _grow(basis, T.reshape(len(part), m))
    base = basis.reshape(basis.shape[0], 3, n, n)
    flat = cconcat([_roll_triples(base, i) for i in range(3)]).reshape(-1, m)
    basis = _grow(None, flat)
    for _ in range(max_rounds):
        t = basis.shape[0]
        B = basis.reshape(t, 3, n, n)
        for k in range(t):
            basis = _grow(basis, _triple_commutators(B, k).reshape(t, m))
        if basis.shape[0] == t:
            return basis.reshape(t, 3, n, n)
    raise LieError("related triple closure did not stabilize")


class _Coords:
    """Coordinates in a fixed row basis through an invertible block of pivot columns."""

    def __init__(self, basis):
        self.basis = basis
        self.cols = crow_basis(basis.transpose(1, 0))
        self.U = basis[:, self.cols].transpose(1, 0)

    def __call__(self, rows):
        """X (t, k) with rows[j] = sum_i X[i, j] basis[i], exact."""
        X = csolve(self.U, rows[:, self.cols].transpose(1, 0))
        if not (ceinsum("ij,im->jm", X, self.basis) == rows):
            raise LieError("vector outside the span")
        return X


def steinberg(A, name=None):
    """U(A) = trip(A) + u_12(A) + u_23(A) + u_31(A)."""
    from .structurable import is_structurable
    ok, wit = is_structurable(A)
    if not ok:
        raise LieError(f"not structurable, witness {wit}")
    n = A.dim
    basis = trip_closure(A)
    t = basis.shape[0]
    m = 3 * n * n
    co = _Coords(basis.reshape(t, m))
    td = _TripleData(A)
    U = ["u12", "u23", "u31"]
    b = _Builder([("trip", t)] + [(u, n) for u in U])
    lie = cstack([co(_triple_commutators(basis, k).reshape(t, m)) for k in range(t)], axis=1)  # (t, k, j)
    b.put("trip", "trip", "trip", lie)
    # standard triples of all ordered pairs in the three positions: coordinates (t, n, n)
    std = []
    for i in range(3):
        blocks = []
        for p in range(n):
            T = td.triples([p] * n, list(range(n)))
            blocks.append(co(_roll_triples(T, i).reshape(n, m)))
        std.append(cstack(blocks, axis=1))
    for i in range(3):
        # [T, u_{i,i+1}(a)] = u_{i,i+1}(T_{i+2}(a))
        b.put("trip", U[i], U[i], basis[:, (i + 2) % 3].transpose(1, 0, 2))
        # [u_{i,i+1}(a), u_{i+1,i+2}(b)] = -u_{i+2,i}(conj(ab))
        b.put(U[i], U[(i + 1) % 3], U[(i + 2) % 3], -ceinsum("rm,mab->rab", td.sig, td.c))
        # [u_{i,i+1}(a), u_{i,i+1}(b)] = standard triple of (a, b) at position i
        b.put(U[i], U[i], "trip", std[i])
    label = name or f"U({A.name})"
    L = LieAlg(b.build(label), {"construction": "steinberg", "ingredients": [A.name]}, _comps(b),
               {"A": A, "trip": basis})
    L.gradings["Z2^2"] = steinberg_grading(L)
    return L


def steinberg_grading(L):
    deg = {"trip": (0, 0), "u12": (1, 0), "u23": (0, 1), "u31": (1, 1)}
    degrees = []
    for p in ("trip", "u12", "u23", "u31"):
        a, e = L.components[p]
        degrees += [deg[p]] * (e - a)
    return coordinate_grading(L.algebra, AbGroup(0, (2, 2)), degrees, name="Z2^2 Steinberg")


# ----------------------------------------------------------------------
# e7 from the Albert algebra


def _sl2():
    # basis e, h, f; ad matrices and Killing form
    c = np.zeros((3, 3, 3), dtype=np.int64)
    e, h, f = 0, 1, 2
    c[e, h, e], c[e, e, h] = 2, -2
    c[f, h, f], c[f, f, h] = -2, 2
    c[h, e, f], c[h, f, e] = 1, -1
    kill = np.array([[0, 0, 4], [0, 8, 0], [4, 0, 0]], dtype=np.int64)
    return CArr.rational(c), CArr.rational(kill)


def tkk_tits(J=None):
    """A (x) sl_2 + Der(A) with the bracket

        [x(x)a + d1, y(x)b + d2] = xy(x)[a,b] + d2(x)(x)a - d1(y)(x)b - 1/2 tr(ad a ad b)[R_x,R_y] + [d1,d2].

    With [R_x, R_y] = R_x R_y - R_y R_x this is a Lie algebra exactly when the
    bracket on Der(A) is read as [d1, d2] = d2 d1 - d1 d2 (the map d -> -d turns
    it into the usual commutator, the action d(y) (x) b and +1/2 in the last term).
    """
    J = J or albert()
    hj = _jordan_data(J)
    n = hj["n"]
    D = hj["der"]
    r = D.shape[0]
    csl, kill = _sl2()
    b = _Builder([("Jsl2", 3 * n), ("der", r)])
    b.put("Jsl2", "Jsl2", "Jsl2", ceinsum("kxy,cab->kcxayb", hj["c"], csl).reshape(3 * n, 3 * n, 3 * n))
    RR = commutators(hj["R"])
    rr = csolve(D.reshape(r, n * n).transpose(1, 0), RR.transpose(2, 3, 0, 1).reshape(n * n, n * n))
    rr = rr.reshape(r, n, n)
    b.put("Jsl2", "Jsl2", "der", ceinsum("ab,kxy->kxayb", kill, rr).scale(Fraction(-1, 2)).reshape(r, 3 * n, 3 * n))
    # [d1, y (x) b] = -d1(y) (x) b
    act = ceinsum("kmy,cb->mckyb", D, _eye(3)).reshape(3 * n, r, 3 * n)
    b.put("der", "Jsl2", "Jsl2", -act)
    b.put("der", "der", "der", -operator_bracket(D))
    extra = []
    for w in _diagonal_combinations(hj["R"][:, None]):
        v = np.zeros(b.dim, dtype=object)
        v[1:3 * n:3] = w  # x (x) h
        extra.append(v)
    return LieAlg(b.build("TKK-Tits(Albert)"), {"construction": "tkk-tits", "ingredients": [J.name]},
                  _comps(b), {"J": J, "torus_extra": extra})


def tkk_koecher(J=None):
    """A + Abar + Str(A), Str(A) = R_A + [R_A, R_A], with

        [x, ybar] = 2 R_{xy} + 2 [R_x, R_y],  [L, x] = L(x),  [L, xbar] = (Lbar x)bar,
        Lbar = -R_x + sum [R, R] for L = R_x + sum [R, R].

    With 2 [R_y, R_x] in the first rule the Jacobi identity fails.
    """
    J = J or albert()
    hj = _jordan_data(J)
    n = hj["n"]
    D = hj["der"]
    r = D.shape[0]
    R = hj["R"]
    strops = cconcat([R, D])  # (n + r, n, n)
    m = n + r
    b = _Builder([("A", n), ("Abar", n), ("Str", m)])
    b.put("Str", "Str", "Str", operator_bracket(strops))
    b.put("Str", "A", "A", strops.transpose(1, 0, 2))
    sgn = np.array([-1] * n + [1] * r, dtype=np.int64)
    barops = CArr(strops.a * sgn[None, :, None, None], strops.den, strops.N)
    b.put("Str", "Abar", "Abar", barops.transpose(1, 0, 2))
    c = hj["c"]
    Rxy = ceinsum("kxy,kab->xyab", c, R)
    val = (Rxy + commutators(R)).scale(2)
    X = csolve(strops.reshape(m, n * n).transpose(1, 0), val.transpose(2, 3, 0, 1).reshape(n * n, n * n))
    b.put("A", "Abar", "Str", X.reshape(m, n, n))
    extra = []
    for w in _diagonal_combinations(R[:, None]):
        v = np.zeros(b.dim, dtype=object)
        v[2 * n:3 * n] = w  # R_x
        extra.append(v)
    return LieAlg(b.build("TKK-Koecher(Albert)"), {"construction": "tkk-koecher", "ingredients": [J.name]},
                  _comps(b), {"J": J, "torus_extra": extra})


def tkk_e7_models(J=None):
    return tkk_tits(J), tkk_koecher(J)
