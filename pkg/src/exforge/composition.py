"""Hurwitz algebras, Cayley-Dickson doubling, symmetric composition
algebras (para-Hurwitz and Okubo), the derivations d_{a,b}, and the
gradings these algebras carry.
"""

from fractions import Fraction

import numpy as np

from .algcore import AlgebraSC, KMat, Subspace, flat_ops, stack_cols
from .gradlib import AbGroup, Grading, GradingError
from .scalars import OMEGA, Cyclo

CAYLEY_LABELS = ["e1", "e2", "u1", "u2", "u3", "v1", "v2", "v3"]
HURWITZ_KINDS = ("F", "K", "Q", "C")
SYMCOMP_KINDS = ("pF", "pK", "pQ", "pC", "Ok")
DIMS = {"F": 1, "K": 2, "Q": 4, "C": 8}


class Hurwitz:
    """A unital composition algebra with its norm, trace and conjugation."""

    def __init__(self, algebra, kind):
        self.algebra = algebra
        self.kind = kind
        self.dim = algebra.dim

    @property
    def polar(self):
        return self.algebra.polar

    def q(self, x, y=None):
        """Polar form q(x, y); with one argument the norm q(x) = q(x, x)/2."""
        if y is None:
            return (x.T @ self.polar @ x).entry(0, 0) * Fraction(1, 2)
        return (x.T @ self.polar @ y).entry(0, 0)

    def trace(self, x):
        return self.q(x, self.algebra.unit)

    def conj(self, x):
        return self.algebra.involution @ x

    def one(self):
        return self.algebra.unit

    def mul(self, x, y):
        return self.algebra.multiply(x, y)

    def __repr__(self):
        return f"Hurwitz({self.kind}, dim={self.dim})"


class SymComp:
    """A symmetric composition algebra (S, *, q)."""

    def __init__(self, algebra, kind, paraunit=None):
        self.algebra = algebra
        self.kind = kind
        self.dim = algebra.dim
        self.paraunit = paraunit

    @property
    def polar(self):
        return self.algebra.polar

    def q(self, x, y=None):
        if y is None:
            return (x.T @ self.polar @ x).entry(0, 0) * Fraction(1, 2)
        return (x.T @ self.polar @ y).entry(0, 0)

    def mul(self, x, y):
        return self.algebra.multiply(x, y)

    def __repr__(self):
        return f"SymComp({self.kind}, dim={self.dim})"


def _cayley_products():
    """The split Cayley table in the standard basis."""
    e1, e2 = 0, 1
    u = {1: 2, 2: 3, 3: 4}
    v = {1: 5, 2: 6, 3: 7}
    P = {}

    def put(a, b, c, s=1):
        P[(a, b)] = {c: s}

    put(e1, e1, e1)
    put(e2, e2, e2)
    for j in (1, 2, 3):
        put(e1, u[j], u[j])
        put(u[j], e2, u[j])
        put(e2, v[j], v[j])
        put(v[j], e1, v[j])
        put(u[j], v[j], e1)
        put(v[j], u[j], e2)
    for i in (1, 2, 3):
        i1 = i % 3 + 1
        i2 = i1 % 3 + 1
        put(u[i], u[i1], v[i2])
        put(u[i1], u[i], v[i2], -1)
        put(v[i], v[i1], u[i2], -1)
        put(v[i1], v[i], u[i2])
    return P


def _restrict_products(P, keep):
    pos = {k: i for i, k in enumerate(keep)}
    out = {}
    for (a, b), res in P.items():
        if a in pos and b in pos:
            r = {pos[c]: s for c, s in res.items()}
            if any(c not in pos for c in res):
                raise ValueError("subset is not a subalgebra")
            out[(pos[a], pos[b])] = r
    return out


def _cayley_polar():
    # u_i v_i = e_1 forces q(u_i, v_i) = -1 (on Q this is the determinant)
    ent = {(0, 1): 1, (1, 0): 1}
    for j in range(3):
        ent[(2 + j, 5 + j)] = -1
        ent[(5 + j, 2 + j)] = -1
    return ent


def build_hurwitz(kind):
    """F, K, Q or the split Cayley algebra C in the standard basis."""
    if kind not in HURWITZ_KINDS:
        raise ValueError(f"unknown Hurwitz kind {kind!r}")
    P = _cayley_products()
    full_polar = _cayley_polar()
    if kind == "F":
        A = AlgebraSC.from_products("F", ["1"], {(0, 0): {0: 1}},
                                    unit=KMat.column([1]), involution=KMat.identity(1),
                                    polar=KMat.from_rows([[2]]))
        return Hurwitz(A, "F")
    keep = {"K": [0, 1], "Q": [0, 1, 2, 5], "C": list(range(8))}[kind]
    labels = [CAYLEY_LABELS[k] for k in keep]
    prods = _restrict_products(P, keep)
    n = len(keep)
    pos = {k: i for i, k in enumerate(keep)}
    polar = KMat.from_entries((n, n), {(pos[a], pos[b]): v for (a, b), v in full_polar.items()
                                       if a in pos and b in pos})
    unit = KMat.column([1, 1] + [0] * (n - 2))
    # conjugation: e1 <-> e2, u, v -> -u, -v
    inv = {(0, 1): 1, (1, 0): 1}
    for i in range(2, n):
        inv[(i, i)] = -1
    A = AlgebraSC.from_products(kind, labels, prods, unit=unit,
                                involution=KMat.from_entries((n, n), inv), polar=polar)
    return Hurwitz(A, kind)


def cayley_dickson(C, alpha=1):
    """CD(C, alpha) on C x C: (a,b)(c,d) = (ac + alpha dbar b, da + b cbar).

    Returns (Hurwitz-like wrapper, Z_2 grading, is_hurwitz flag).
    """
    alpha = Cyclo(alpha) if not isinstance(alpha, Cyclo) else alpha
    if alpha.is_zero():
        raise ValueError("Cayley-Dickson parameter must be nonzero")
    A = C.algebra
    n = A.dim
    labels = [f"({l},0)" for l in A.labels] + [f"(0,{l})" for l in A.labels]
    T = A.T
    Cbar = A.involution
    I = KMat.identity(n, T.N)
    # block pieces as maps (x (x) y) -> z on the small algebra
    ac = T
    dbar_b = T @ _swap(n, T.N) @ (I.kron(Cbar))  # (b, d) -> dbar b, arguments ordered (b, d)
    da = T @ _swap(n, T.N)  # (a, d) -> d a
    b_cbar = T @ (I.kron(Cbar))  # (b, c) -> b cbar
    ent = {}

    def place(block, xoff, yoff, zoff, scale=1, swap_args=False):
        for (k, col), v in block.entries().items():
            i, j = col // n, col % n
            if swap_args:
                i, j = j, i
            ent[(zoff + k, (xoff + i) * 2 * n + (yoff + j))] = ent.get(
                (zoff + k, (xoff + i) * 2 * n + (yoff + j)), 0) + v * scale

    # x = (a, b) -> indices a: 0..n-1, b: n..2n-1; y = (c, d)
    place(ac, 0, 0, 0)  # a c
    # alpha dbar b: x-slot b, y-slot d; dbar_b expects args (b, d)
    place(dbar_b, n, n, 0, alpha)
    # d a: x-slot a, y-slot d; da expects args (a, d)
    place(da, 0, n, n)
    # b cbar: x-slot b, y-slot c
    place(b_cbar, n, 0, n)
    TT = KMat.from_entries((2 * n, 4 * n * n), {k: v for k, v in ent.items() if v != 0})
    unit = A.unit.vstack(KMat.zeros((n, 1), A.N))
    inv = _block_diag(Cbar, -KMat.identity(n, A.N))
    polar = _block_diag(A.polar, A.polar.scale(-alpha))
    B = AlgebraSC(f"CD({A.name})", labels, TT, involution=inv, unit=unit, polar=polar)
    kind = {"F": "K", "K": "Q", "Q": "C"}.get(C.kind, "CD")
    H = Hurwitz(B, kind)
    grading = Grading(B, AbGroup(0, [2]), [(0,)] * n + [(1,)] * n, name=f"Z2 on CD({A.name})")
    return H, grading, composition_defect(B, polar) is None


def _swap(n, N):
    """Permutation on n^2 coordinates exchanging the two tensor factors."""
    idx = np.arange(n * n).reshape(n, n).T.reshape(-1)
    return KMat.from_entries((n * n, n * n), {(int(idx[c]), c): 1 for c in range(n * n)}, N)


def _block_diag(a, b):
    a, b = KMat.common(a, b)
    za = KMat.zeros((a.shape[0], b.shape[1]), a.N)
    zb = KMat.zeros((b.shape[0], a.shape[1]), a.N)
    return a.hstack(za).vstack(zb.hstack(b))


def composition_defect(A, polar):
    """None if q(xy) = q(x) q(y) (checked through its full linearization
    q(xy, zw) + q(xw, zy) = q(x, z) q(y, w) on basis quadruples)."""
    n = A.dim
    P = A.T  # column (x, y) = xy
    G = (P.T @ polar.lift(P.N) @ P) if polar.N != P.N else (P.T @ polar @ P)
    Gd, gden = G.to_int_dense()
    Qd, qden = polar.to_int_dense()
    if Gd.shape[0] > 1 or Qd.shape[0] > 1:
        return _composition_defect_generic(A, polar)
    G4 = Gd[0].reshape(n, n, n, n)  # [x, y, z, w] = q(xy, zw) * gden
    lhs = (G4 + G4.transpose(0, 3, 2, 1)) * qden * qden
    rhs = np.einsum("xz,yw->xyzw", Qd[0], Qd[0]) * gden
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        return tuple(int(t) for t in bad[0])
    return None


def _composition_defect_generic(A, polar):
    n = A.dim
    P = A.T
    pol = polar.lift(lcm_(P.N, polar.N))
    P = P.lift(pol.N)
    G = P.T @ pol @ P
    ent = G.entries()
    q = pol.entries()
    zero = Cyclo(0)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                for w in range(n):
                    l = ent.get((x * n + y, z * n + w), zero) + ent.get((x * n + w, z * n + y), zero)
                    r = q.get((x, z), zero) * q.get((y, w), zero)
                    if l != r:
                        return (x, y, z, w)
    return None


def lcm_(a, b):
    from math import gcd
    return a // gcd(a, b) * b


def associativity_defect(A, polar):
    """None if q(x*y, z) = q(x, y*z) on basis triples."""
    n = A.dim
    P = A.T
    pol = polar.lift(lcm_(P.N, polar.N))
    P = P.lift(pol.N)
    L = P.T @ pol  # [(x,y), z] = q(xy, z)
    Ld, _ = L.to_int_dense()
    # q(x, y*z): pol^T applied: [x, (y,z)] = q(x, yz)
    R = pol @ P
    Rd, _ = R.to_int_dense()
    if L.den != R.den:
        Ld = Ld * (R.den // np.gcd(L.den, R.den))
        Rd = Rd * (L.den // np.gcd(L.den, R.den))
    A3 = Ld.reshape(Ld.shape[0], n, n, n)
    B3 = Rd.reshape(Rd.shape[0], n, n, n)
    bad = np.argwhere(A3 != B3)
    if len(bad):
        return tuple(int(t) for t in bad[0][1:])
    return None


def quadratic_equation_defect(H):
    """x^2 - t(x) x + q(x) 1 = 0 for basis elements and sums of two of them."""
    A = H.algebra
    vecs = [A.basis_vector(i) for i in range(A.dim)]
    vecs += [vecs[i] + vecs[j] for i in range(A.dim) for j in range(i + 1, A.dim)]
    for i, x in enumerate(vecs):
        lhs = A.multiply(x, x) - x.scale(H.trace(x)) + A.unit.scale(H.q(x))
        if not lhs.is_zero():
            return i
    return None


def _okubo():
    """Okubo algebra on trace-zero 3x3 matrices over Q(omega)."""
    def E(i, j):
        m = [[0] * 3 for _ in range(3)]
        m[i][j] = 1
        return np.array(m, dtype=object)
    basis = [E(0, 0) - E(1, 1), E(1, 1) - E(2, 2), E(0, 1), E(1, 0), E(0, 2), E(2, 0), E(1, 2), E(2, 1)]
    labels = ["h1", "h2", "E12", "E21", "E13", "E31", "E23", "E32"]
    w = OMEGA
    c = (w - w * w) * Fraction(1, 3)

    def coords(m):
        # m traceless: h1 coefficient a, h2 coefficient b with m11 = a, m22 = b - a, m33 = -b
        a = m[0][0]
        b = -m[2][2]
        out = [a, b, m[0][1], m[1][0], m[0][2], m[2][0], m[1][2], m[2][1]]
        return out

    prods = {}
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            xy = x.dot(y)
            yx = y.dot(x)
            tr = sum(xy[k][k] for k in range(3))
            ident = np.identity(3, dtype=object)
            m = np.empty((3, 3), dtype=object)
            for r in range(3):
                for s in range(3):
                    m[r][s] = w * xy[r][s] - w * w * yx[r][s] - c * tr * ident[r][s]
            cs = coords(m)
            prods[(i, j)] = {k: v for k, v in enumerate(cs) if v != 0}
    # with this product the multiplicative norm is q(x) = -tr(x^2)/2, so q(x, y) = -tr(xy)
    pol = {}
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            t = sum(x.dot(y)[k][k] for k in range(3))
            if t:
                pol[(i, j)] = -t
    A = AlgebraSC.from_products("Ok", labels, prods, N=3, polar=KMat.from_entries((8, 8), pol, 3))
    return SymComp(A, "Ok")


def okubo_matrix_coords(m):
    """Coordinates of a traceless 3x3 matrix (entries Cyclo/int) in the Okubo basis."""
    return [m[0][0], -m[2][2], m[0][1], m[1][0], m[0][2], m[2][0], m[1][2], m[2][1]]


def build_symmetric_composition(kind):
    if kind not in SYMCOMP_KINDS:
        raise ValueError(f"unknown symmetric composition kind {kind!r}")
    if kind == "Ok":
        return _okubo()
    H = build_hurwitz(kind[1:])
    A = H.algebra
    bar = A.involution
    T = A.T @ bar.kron(bar)  # x * y = xbar ybar
    S = AlgebraSC(f"p{A.name}", A.labels, T, polar=A.polar, meta={"hurwitz": kind[1:]})
    return SymComp(S, kind, paraunit=A.unit)


def paraunit_defect(S):
    e = S.paraunit
    A = S.algebra
    for i in range(A.dim):
        x = A.basis_vector(i)
        target = e.scale(S.q(e, x)) - x
        if not (A.multiply(e, x) == target and A.multiply(x, e) == target):
            return i
    return None


def derivation_dab(C, a, b):
    """d_{a,b} = [l_a, l_b] + [l_a, r_b] + [r_a, r_b]."""
    A = C.algebra
    la, lb, ra, rb = A.left(a), A.left(b), A.right(a), A.right(b)
    return la.bracket(lb) + la.bracket(rb) + ra.bracket(rb)


def derivations_span(C):
    """Span of all d_{a,b} over basis pairs."""
    A = C.algebra
    ops = []
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            ops.append(derivation_dab(C, A.basis_vector(i), A.basis_vector(j)))
    if not ops:
        return Subspace.zero(A.dim * A.dim, A.N), []
    return Subspace(flat_ops(ops)), ops


# ----------------------------------------------------------------------
# gradings on composition algebras


def _pauli_q_basis():
    """1, q1, q2, q3 inside Q (standard basis e1, e2, u1, v1)."""
    return [
        [1, 1, 0, 0],  # identity
        [0, 0, 1, 1],  # q1 = [[0,1],[1,0]] = u1 + v1
        [1, -1, 0, 0],  # q2 = diag(1, -1)
        [0, 0, -1, 1],  # q3 = q1 q2 = [[0,-1],[1,0]] = v1 - u1
    ]


def _cayley_z2cubed_basis():
    """Columns x, x*l for x in {1, q1, q2, q3}, l = u2 + v2, in the Cayley standard basis."""
    C = build_hurwitz("C").algebra
    emb = [0, 1, 2, 5]  # Q inside C
    qs = []
    for row in _pauli_q_basis():
        v = [0] * 8
        for k, c in zip(emb, row):
            v[k] = c
        qs.append(KMat.column(v))
    l = KMat.column([0, 0, 0, 1, 0, 0, 1, 0])
    cols = qs + [C.multiply(x, l) for x in qs]
    degs = [(a, b, 0) for a, b in [(0, 0), (1, 0), (0, 1), (1, 1)]]
    degs += [(a, b, 1) for a, b in [(0, 0), (1, 0), (0, 1), (1, 1)]]
    return stack_cols(cols), degs


GRADING_IDS = {
    "K": ("Z2",),
    "Q": ("Z2^2", "Z"),
    "C": ("Z2^3", "Z^2", "cartan"),
    "pK": ("Z2", "Z3"),
    "pQ": ("Z2^2", "Z"),
    "pC": ("Z2^3", "Z^2", "cartan"),
    "Ok": ("Z3^2",),
    "F": ("trivial",),
    "pF": ("trivial",),
}


def composition_grading_data(kind, grading_id):
    """(group, degrees, basis KMat or None) in the standard basis of the algebra."""
    base = kind[1:] if kind.startswith("p") else kind
    if grading_id not in GRADING_IDS.get(kind, ()):
        raise ValueError(f"unknown grading {grading_id!r} for {kind}")
    if grading_id == "trivial":
        return AbGroup(0, ()), [()], None
    if kind == "Ok":
        return okubo_z3sq_data()
    if grading_id == "Z3":
        return AbGroup(0, [3]), [(1,), (2,)], None
    if grading_id in ("Z^2", "cartan"):
        degs = [(0, 0), (0, 0), (1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)]
        return AbGroup(2, ()), degs, None
    if grading_id == "Z":
        return AbGroup(1, ()), [(0,), (0,), (1,), (-1,)], None
    if base == "K":
        B = KMat.from_rows([[1, 1], [1, -1]])
        return AbGroup(0, [2]), [(0,), (1,)], B
    if base == "Q":
        B = KMat.from_rows(_pauli_q_basis()).T
        return AbGroup(0, [2, 2]), [(0, 0), (1, 0), (0, 1), (1, 1)], B
    B, degs = _cayley_z2cubed_basis()
    return AbGroup(0, [2, 2, 2]), degs, B


def okubo_z3sq_data():
    """Homogeneous basis x^a y^b of sl_3 with x = diag(1, w, w^2) and y the cyclic shift."""
    w = OMEGA
    X = np.array([[1, 0, 0], [0, w, 0], [0, 0, w * w]], dtype=object)
    Y = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=object)
    cols, degs = [], []
    for a in range(3):
        for b in range(3):
            if (a, b) == (0, 0):
                continue
            M = np.identity(3, dtype=object)
            for _ in range(a):
                M = M.dot(X)
            for _ in range(b):
                M = M.dot(Y)
            M = [[Cyclo(0) + M[r][s] for s in range(3)] for r in range(3)]
            cols.append(KMat.column(okubo_matrix_coords(M), 3))
            degs.append((a, b))
    return AbGroup(0, [3, 3]), degs, stack_cols(cols)


def composition_gradings(kind, grading_id):
    if kind in HURWITZ_KINDS:
        A = build_hurwitz(kind).algebra
    else:
        A = build_symmetric_composition(kind).algebra
    group, degs, B = composition_grading_data(kind, grading_id)
    if B is not None and B.N != A.N:
        A = A.lift(B.N)
    g = Grading(A, group, degs, B, name=f"{grading_id} on {kind}")
    ok, wit = g.check()
    if not ok:
        raise GradingError(f"{grading_id} on {kind} fails compatibility: {wit}")
    return g
