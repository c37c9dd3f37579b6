"""A Z_5-graded linear model of e8 and its fine Z_5^3 grading.

    L_0 = sl(V1) + sl(V2),  L_i = Lambda^i V1 (x) Lambda^(2i mod 5) V2  (i = 1..4)

with dim V1 = dim V2 = 5.  Each bracket L_i x L_j -> L_{i+j} is a scalar
multiple of the invariant map built from wedges and contractions against the
volume forms; the brackets into L_0 have two slots, one per simple factor.
The scalars are not known in advance: four are fixed by rescaling L_1..L_4
and the rest are read off the Jacobi identity, which becomes linear once the
equations are taken in the right order.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
import random

import flint

from .algcore import AlgebraSC, KMat, Subspace
from .gradlib import AbGroup, coordinate_grading, refine_by_automorphisms
from .liebuild import LieAlg
from .scalars import root_of_unity

DIM = 5
FULL = tuple(range(DIM))


class Z5Error(ArithmeticError):
    pass


# ----------------------------------------------------------------------
# exterior algebra on a 5-dim space


def subsets(k):
    return [tuple(c) for c in combinations(range(DIM), k)]


def _perm_sign(seq):
    s, seq = 1, list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def _merge_sign(A, B):
    """Sign of sorting the concatenation A + B (A, B disjoint sorted)."""
    return _perm_sign(A + B)


def _complement(A):
    return tuple(i for i in FULL if i not in A)


def ext_product(A, B):
    """Invariant map Lambda^a x Lambda^b -> Lambda^(a+b mod 5) on basis subsets.

    Wedge when a + b <= 5 (Lambda^5 = F through the volume form), otherwise
    e_A is turned into a functional on Lambda^(5-a) by the volume form and
    contracted into e_B.  Returns (sign, subset) or None.
    """
    a, b = len(A), len(B)
    if a + b <= DIM:
        if set(A) & set(B):
            return None
        return _merge_sign(A, B), (() if a + b == DIM else tuple(sorted(A + B)))
    C = _complement(A)
    if not set(C) <= set(B):
        return None
    D = tuple(i for i in B if i not in C)
    return _merge_sign(A, C) * _merge_sign(C, D), D


def ext_act(p, q, A):
    """E_pq acting on e_A as a derivation: list of (coef, subset)."""
    if q not in A:
        return []
    if p == q:
        return [(1, A)]
    if p in A:
        return []
    seq = [p if i == q else i for i in A]
    return [(_perm_sign(seq), tuple(sorted(seq)))]


# ----------------------------------------------------------------------
# basis


class Z5Skeleton:
    """Basis bookkeeping and the slot maps of the Z_5-graded model.

    ``slots`` lists the unknown scalars; ``maps[slot]`` is the bilinear map
    that the scalar multiplies, as {(a, b): {c: coef}} on basis indices with
    a < b or a == b never used (brackets are antisymmetrized).
    """

    def __init__(self):
        self.labels = []
        self.degree = []
        self.index = {}
        # L_0: off-diagonal E_pq and H_k = E_kk - E_{k+1,k+1}, for each factor
        for f in (1, 2):
            for p in range(DIM):
                for q in range(DIM):
                    if p != q:
                        self._add(("E", f, p, q), 0, f"E{f}_{p}{q}")
            for k in range(DIM - 1):
                self._add(("H", f, k), 0, f"H{f}_{k}")
        self.parts = {0: list(range(len(self.labels)))}
        for i in range(1, 5):
            start = len(self.labels)
            for A in subsets(i):
                for B in subsets(2 * i % 5):
                    self._add(("W", i, A, B), i,
                              "w" + str(i) + "_" + "".join(map(str, A)) + "|" + "".join(map(str, B)))
            self.parts[i] = list(range(start, len(self.labels)))
        self.dim = len(self.labels)
        self.slots = []
        for i in range(1, 5):
            for j in range(i, 5):
                if (i + j) % 5:
                    self.slots.append(f"l{i}{j}")
                else:
                    self.slots += [f"m{i}{j}", f"n{i}{j}"]
        self.fixed = self._fixed_maps()
        self.cache = {}
        self.maps = {s: {} for s in self.slots}
        for i in range(1, 5):
            for j in range(i, 5):
                self._slot_maps(i, j)

    def _add(self, key, deg, label):
        self.index[key] = len(self.labels)
        self.labels.append(label)
        self.degree.append(deg)

    def dims(self):
        return tuple(len(self.parts[i]) for i in range(5))

    # matrices <-> L_0 coordinates

    def sl_coords(self, f, M):
        """Coordinates of a traceless 5x5 matrix (dict (p, q) -> coef) in factor f."""
        out = {}
        diag = [M.get((k, k), 0) for k in range(DIM)]
        if sum(diag) != 0:
            raise Z5Error("matrix is not traceless")
        for (p, q), c in M.items():
            if p != q and c:
                out[self.index[("E", f, p, q)]] = c
        h = 0
        for k in range(DIM - 1):
            h += diag[k]
            if h:
                out[self.index[("H", f, k)]] = h
        return out

    def sl_matrix(self, a):
        """(factor, dict matrix) of an L_0 basis element."""
        key = self._key(a)
        if key[0] == "E":
            return key[1], {(key[2], key[3]): 1}
        k = key[2]
        return key[1], {(k, k): 1, (k + 1, k + 1): -1}

    @lru_cache(maxsize=None)
    def _key(self, a):
        for k, v in self.index.items():
            if v == a:
                return k
        raise KeyError(a)

    # the fixed part: sl + sl bracket and its action

    def act(self, f, M, b):
        """Matrix M in factor f acting on basis element b: {c: coef}."""
        key = self._key(b)
        out = {}
        if key[0] in ("E", "H"):
            g, X = self.sl_matrix(b)
            if g != f:
                return out
            C = _mat_mul(M, X)
            for k, v in _mat_mul(X, M).items():
                C[k] = C.get(k, 0) - v
            return self.sl_coords(f, {k: v for k, v in C.items() if v})
        _, i, A, B = key
        S = A if f == 1 else B
        for (p, q), c in M.items():
            for s, T in ext_act(p, q, S):
                img = ("W", i, T, B) if f == 1 else ("W", i, A, T)
                idx = self.index[img]
                out[idx] = out.get(idx, 0) + c * s
        return {k: v for k, v in out.items() if v}

    def _fixed_maps(self):
        prods = {}
        for a in self.parts[0]:
            f, M = self.sl_matrix(a)
            for b in range(self.dim):
                r = self.act(f, M, b)
                if r:
                    prods[(a, b)] = r
        return prods

    # slot maps

    def _pair_L0(self, i, j):
        """[x (x) m, y (x) n] for i + j = 5: (sl(V1) part, sl(V2) part) dicts."""
        mu, nu = {}, {}
        for a in self.parts[i]:
            _, _, A, B = self._key(a)
            for b in self.parts[j]:
                _, _, C, D = self._key(b)
                pv = ext_product(A, C)
                pw = ext_product(B, D)
                if pw is not None and pw[1] == ():
                    t = _tau(A, C)
                    if t:
                        mu[(a, b)] = self.sl_coords(1, {k: pw[0] * v for k, v in t.items()})
                if pv is not None and pv[1] == ():
                    t = _tau(B, D)
                    if t:
                        nu[(a, b)] = self.sl_coords(2, {k: pv[0] * v for k, v in t.items()})
        return mu, nu

    def _slot_maps(self, i, j):
        k = (i + j) % 5
        if k == 0:
            mu, nu = self._pair_L0(i, j)
            self.maps[f"m{i}{j}"] = mu
            self.maps[f"n{i}{j}"] = nu
            return
        out = {}
        for a in self.parts[i]:
            _, _, A, B = self._key(a)
            for b in self.parts[j]:
                if i == j and b <= a:
                    continue
                _, _, C, D = self._key(b)
                pv = ext_product(A, C)
                pw = ext_product(B, D)
                if pv is None or pw is None:
                    continue
                c = self.index[("W", k, pv[1], pw[1])]
                out[(a, b)] = {c: pv[0] * pw[0]}
        if i == j:
            # antisymmetry of the invariant map on L_i x L_i
            for (a, b), r in out.items():
                _, _, A, B = self._key(a)
                _, _, C, D = self._key(b)
                pv, pw = ext_product(C, A), ext_product(D, B)
                if {self.index[("W", k, pv[1], pw[1])]: pv[0] * pw[0]} != {c: -v for c, v in r.items()}:
                    raise Z5Error(f"invariant map on L_{i} x L_{i} is not alternating")
        self.maps[f"l{i}{j}"] = out


def _mat_mul(X, Y):
    out = {}
    for (p, q), a in X.items():
        for (r, s), b in Y.items():
            if q == r:
                out[(p, s)] = out.get((p, s), 0) + a * b
    return {k: v for k, v in out.items() if v}


def _tau(A, C):
    """Traceless T with tr(T M) = <M.e_A, e_C> for all M (<,> = volume pairing)."""
    T = {}
    for p in range(DIM):
        for q in range(DIM):
            s = 0
            for c, S in ext_act(q, p, A):
                r = ext_product(S, C)
                if r is not None:
                    s += c * r[0]
            if s:
                T[(p, q)] = Fraction(s)
    tr = sum(T.get((k, k), 0) for k in range(DIM))
    for k in range(DIM):
        v = T.get((k, k), 0) - Fraction(tr, DIM)
        if v:
            T[(k, k)] = v
        else:
            T.pop((k, k), None)
    return T


# ----------------------------------------------------------------------
# products with symbolic scalars


def _bracket(sk, u, v, values=None):
    """[u, v] for sparse vectors u, v as {monomial: {c: coef}} (monomial = tuple of slots).

    With ``values`` all slots are substituted and a plain vector is returned.
    """
    out = {}
    for a, x in u.items():
        for b, y in v.items():
            for mono, r in _basis_bracket(sk, a, b):
                for c, z in r.items():
                    slot = out.setdefault(mono, {})
                    slot[c] = slot.get(c, 0) + x * y * z
    if values is None:
        return out
    vec = {}
    for mono, r in out.items():
        s = _eval(mono, values)
        for c, z in r.items():
            vec[c] = vec.get(c, 0) + s * z
    return {c: z for c, z in vec.items() if z}


def _basis_bracket(sk, a, b):
    """[x_a, x_b] as a tuple of (monomial, {c: coef}), cached on the skeleton."""
    key = (a, b)
    hit = sk.cache.get(key)
    if hit is None:
        hit = sk.cache[key] = _basis_bracket_raw(sk, a, b)
    return hit


def _basis_bracket_raw(sk, a, b):
    if a == b:
        return ()
    r = sk.fixed.get((a, b))
    if r is not None:
        return (((), r),)
    r = sk.fixed.get((b, a))
    if r is not None:
        return (((), {c: -v for c, v in r.items()}),)
    i, j = sk.degree[a], sk.degree[b]
    if i == 0 or j == 0:
        return ()
    sign = 1
    if i > j or (i == j and a > b):
        a, b, i, j, sign = b, a, j, i, -1
    names = [f"l{i}{j}"] if (i + j) % 5 else [f"m{i}{j}", f"n{i}{j}"]
    out = []
    for s in names:
        r = sk.maps[s].get((a, b))
        if r:
            out.append(((s,), {c: sign * v for c, v in r.items()}))
    return tuple(out)


def _eval(mono, values):
    s = Fraction(1)
    for m in mono:
        s *= values[m]
    return s


def build_invariant_brackets():
    """The skeleton with one unknown scalar per slot, equivariance verified."""
    sk = Z5Skeleton()
    w = equivariance_defect(sk)
    if w is not None:
        raise Z5Error(f"slot map is not L_0-equivariant: {w}")
    return sk


def equivariance_defect(sk, generators=None):
    """None if every slot map commutes with the L_0 action, else (slot, X, a, b)."""
    gens = generators
    if gens is None:
        gens = []
        for f in (1, 2):
            for p in range(DIM - 1):
                gens += [(f, {(p, p + 1): 1}), (f, {(p + 1, p): 1})]
    for s, mp in sk.maps.items():
        i, j = int(s[1]), int(s[2])
        pairs = [(a, b) for a in sk.parts[i] for b in sk.parts[j] if not (i == j and b <= a)]
        for f, M in gens:
            act = {}
            for a in set(x for p in pairs for x in p):
                act[a] = sk.act(f, M, a)
            for a, b in pairs:
                lhs = {}
                for c, v in mp.get((a, b), {}).items():
                    for d, w in sk.act(f, M, c).items():
                        lhs[d] = lhs.get(d, 0) + v * w
                rhs = {}
                for c, v in act[a].items():
                    for d, w in _slot_value(sk, mp, i, j, c, b).items():
                        rhs[d] = rhs.get(d, 0) + v * w
                for c, v in act[b].items():
                    for d, w in _slot_value(sk, mp, i, j, a, c).items():
                        rhs[d] = rhs.get(d, 0) + v * w
                diff = {k: lhs.get(k, 0) - rhs.get(k, 0) for k in set(lhs) | set(rhs)}
                if any(diff.values()):
                    return s, (f, M), sk.labels[a], sk.labels[b]
    return None


def _slot_value(sk, mp, i, j, a, b):
    if i == j and b < a:
        return {c: -v for c, v in mp.get((b, a), {}).items()}
    if a == b and i == j:
        return {}
    return mp.get((a, b), {})


# ----------------------------------------------------------------------
# solving for the scalars


GAUGE = {"l11": Fraction(1), "l12": Fraction(1), "l13": Fraction(1), "m14": Fraction(1)}


def _jacobi_polys(sk, triple):
    """Cyclic Jacobi sum of a basis triple as {sorted monomial: {c: coef}}."""
    x, y, z = triple
    out = {}
    for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
        inner = _bracket(sk, {u: 1}, {v: 1})
        for m1, vec in inner.items():
            outer = _bracket(sk, vec, {w: 1})
            for m2, r in outer.items():
                mono = tuple(sorted(m1 + m2))
                slot = out.setdefault(mono, {})
                for c, val in r.items():
                    slot[c] = slot.get(c, 0) + val
    return out


def _sample_triples(sk, per_type, seed):
    rng = random.Random(seed)
    trip = []
    for i in range(1, 5):
        for j in range(i, 5):
            for k in range(j, 5):
                for _ in range(per_type):
                    trip.append((rng.choice(sk.parts[i]), rng.choice(sk.parts[j]), rng.choice(sk.parts[k])))
    return trip


def solve_scalars(sk=None, per_type=40, seed=0, gauge=None):
    """Slot values making the skeleton a Lie algebra, gauge fixed by ``gauge``.

    Repeatedly substitutes the known values into sampled Jacobi equations,
    keeps those that are linear in the unknowns and solves them exactly.
    """
    sk = sk or build_invariant_brackets()
    values = dict(GAUGE if gauge is None else gauge)
    eqs = []
    for t in _sample_triples(sk, per_type, seed):
        polys = _jacobi_polys(sk, t)
        coords = set(c for r in polys.values() for c in r)
        for c in coords:
            eq = {m: r[c] for m, r in polys.items() if r.get(c)}
            if eq:
                eqs.append(eq)
    unknown = [s for s in sk.slots if s not in values]
    while unknown:
        rows, rhs = [], []
        for eq in eqs:
            lin, const, ok = {}, Fraction(0), True
            for mono, c in eq.items():
                rest = [m for m in mono if m not in values]
                k = c * _eval([m for m in mono if m in values], values)
                if not rest:
                    const += k
                elif len(rest) == 1:
                    lin[rest[0]] = lin.get(rest[0], 0) + k
                else:
                    ok = False
                    break
            if ok and any(lin.values()):
                rows.append([lin.get(u, 0) for u in unknown])
                rhs.append(-const)
            elif ok and const != 0:
                raise Z5Error(f"inconsistent Jacobi equation with the gauge: {eq}")
        if not rows:
            raise Z5Error(f"no linear equations left for {unknown}")
        found = _solve_determined(rows, rhs, unknown)
        if not found:
            raise Z5Error(f"Jacobi equations do not determine {unknown}")
        values.update(found)
        unknown = [s for s in unknown if s not in values]
    for eq in eqs:
        if sum(c * _eval(m, values) for m, c in eq.items()) != 0:
            raise Z5Error(f"solution violates a Jacobi equation: {eq}")
    return values


def _solve_determined(rows, rhs, names):
    """Values of the unknowns fixed by the linear system (others stay free)."""
    n = len(names)
    M = flint.fmpq_mat(len(rows), n + 1, [flint.fmpq(v.numerator, v.denominator) if isinstance(v, Fraction)
                                          else flint.fmpq(v) for r, b in zip(rows, rhs) for v in r + [b]])
    R, rk = M.rref()
    out = {}
    for r in range(rk):
        piv = next(c for c in range(n + 1) if R[r, c] != 0)
        if piv == n:
            raise Z5Error("inconsistent linear system for the scalars")
        if all(R[r, c] == 0 for c in range(piv + 1, n)):
            v = R[r, n]
            out[names[piv]] = Fraction(int(v.p), int(v.q))
    return out


# ----------------------------------------------------------------------
# the concrete algebra and its grading


@lru_cache(maxsize=None)
def z5_model(seed=0):
    """The solved model as a LieAlg (components "L0".."L4")."""
    sk = build_invariant_brackets()
    values = solve_scalars(sk, seed=seed)
    products = {}
    for a in range(sk.dim):
        for b in range(sk.dim):
            if a == b:
                continue
            r = _bracket(sk, {a: 1}, {b: 1}, values)
            if r:
                products[(a, b)] = r
    alg = AlgebraSC.from_products("e8 (Z_5 model)", sk.labels, products, 1, anticommutative=True)
    comps = {f"L{i}": (sk.parts[i][0], sk.parts[i][-1] + 1) for i in range(5)}
    L = LieAlg(alg, {"construction": "z5-linear-model", "ingredients": ["V1", "V2"]}, comps,
               {"skeleton": sk, "scalars": values})
    return L


def _lambda_matrix(g, A_list):
    """Lambda^k of a monomial matrix g = (perm, diag) on basis subsets: dict A -> (coef, B)."""
    perm, diag = g
    out = {}
    for A in A_list:
        img = [perm[a] for a in A]
        c = _perm_sign(img)
        for a in A:
            c = c * diag[a]
        out[A] = (c, tuple(sorted(img)))
    return out


def _sl_action_operator(sk, g1, g2, N):
    """Matrix of the automorphism induced by (g1, g2) in SL(V1) x SL(V2), monomial matrices."""
    ent = {}
    gs = {1: g1, 2: g2}
    for b in range(sk.dim):
        key = sk._key(b)
        if key[0] == "W":
            _, i, A, B = key
            c1, A2 = _lambda_matrix(g1, [A])[A]
            c2, B2 = _lambda_matrix(g2, [B])[B]
            ent[(sk.index[("W", i, A2, B2)], b)] = c1 * c2
        else:
            f, X = sk.sl_matrix(b)
            perm, diag = gs[f]
            # g X g^-1 with g e_i = diag_i e_perm(i)
            Y = {}
            for (p, q), v in X.items():
                Y[(perm[p], perm[q])] = v * diag[p] / diag[q]
            for c, v in sk.sl_coords(f, Y).items():
                ent[(c, b)] = v
    return KMat.from_entries((sk.dim, sk.dim), ent, N)


def pauli_monomial(kind, power=1):
    """P_xi^power or Q_5 as (perm, diag) with g e_i = diag_i e_perm(i), over Q(zeta_5)."""
    if kind == "P":
        return tuple(range(DIM)), tuple(root_of_unity(power * i, 5) for i in range(DIM))
    # Q_5 has ones at (i, i+1): Q e_{i+1} = e_i
    return tuple((i - 1) % DIM for i in range(DIM)), tuple(root_of_unity(0, 5) for _ in range(DIM))


def psi_operators(L):
    """Psi (b1 = P_xi, b2 = P_xi^2) and Psi' (c1 = c2 = Q_5) on the whole model."""
    sk = L.meta["skeleton"]
    psi = _sl_action_operator(sk, pauli_monomial("P", 1), pauli_monomial("P", 2), 5)
    psi2 = _sl_action_operator(sk, pauli_monomial("Q"), pauli_monomial("Q"), 5)
    return psi, psi2


def z5_grading(L):
    sk = L.meta["skeleton"]
    return coordinate_grading(L.algebra, AbGroup(0, [5]), [(d,) for d in sk.degree], name="Z_5 model grading")


def z5cubed_grading(seed=0):
    """(LieAlg, Grading) for the fine Z_5^3 grading of the model."""
    L = z5_model(seed)
    base = z5_grading(L)
    psi, psi2 = psi_operators(L)
    g = refine_by_automorphisms(base, [psi, psi2], [5, 5], name="Z_5^3 grading")
    return L, g


def component_sum(grading, g):
    """Subspace sum of the components of degrees g, 2g, 3g, 4g."""
    G = grading.group
    comps = grading.components()
    B = grading.basis_matrix()
    idx = []
    for k in range(1, 5):
        d = G.reduce(tuple(k * x for x in g))
        idx += comps.get(d, [])
    return Subspace(B.cols(idx).T, grading.algebra.dim)


# ----------------------------------------------------------------------
# a Z_4-graded linear model of e8, used as a second route to gradings
#
#     L_0 = sl(W) + sl(V),  L_1 = Lambda^2 W (x) V,  L_2 = Lambda^4 W,  L_3 = Lambda^6 W (x) V
#
# with dim W = 8, dim V = 2.  A family of commuting automorphisms acting
# through monomial matrices on W and V refines the Z_4 grading; since the
# pieces L_i are already separated, the joint eigenspaces inside each L_i
# do not depend on the scalars normalizing the action on L_i, so the type
# is computed without any structure constants.

Z4_PIECES = ((2, True), (4, False), (6, True))


def monomial_kron(g, h):
    """(perm, diag) of the Kronecker product of two monomial matrices."""
    (pg, dg), (ph, dh) = g, h
    m = len(ph)
    n = len(pg) * m
    perm = tuple(pg[i // m] * m + ph[i % m] for i in range(n))
    diag = tuple(dg[i // m] * dh[i % m] for i in range(n))
    return perm, diag


def monomial_pauli(n, N=8):
    """P_n and Q_n as (perm, diag) over Q(zeta_N)."""
    one = root_of_unity(0, N)
    P = tuple(range(n)), tuple(root_of_unity(i * (N // n), N) for i in range(n))
    Q = tuple((i - 1) % n for i in range(n)), (one,) * n
    return P, Q


def monomial_identity(n, N=8):
    return tuple(range(n)), (root_of_unity(0, N),) * n


def _monomial_conj(g):
    """g X g^-1 on gl_n in the basis E_pq (index p*n + q)."""
    perm, diag = g
    n = len(perm)
    return {p * n + q: (diag[p] / diag[q], perm[p] * n + perm[q]) for p in range(n) for q in range(n)}


def _as_kmat(action, index, N):
    n = len(index)
    return KMat.from_entries((n, n), {(index[dst], index[src]): c for src, (c, dst) in action.items()}, N)


def _z4_piece_operators(gW, gV, N):
    """KMat of (gW, gV) on gl(W) + gl(V) and on L_1, L_2, L_3."""
    nW, nV = len(gW[0]), len(gV[0])
    act = {("W", k): v for k, v in _monomial_conj(gW).items()}
    act.update({("V", k): v for k, v in _monomial_conj(gV).items()})
    keys = [("W", k) for k in range(nW * nW)] + [("V", k) for k in range(nV * nV)]
    index = {k: i for i, k in enumerate(keys)}
    ops = [_as_kmat({k: (c, (k[0], d)) for k, (c, d) in act.items()}, index, N)]
    for k, with_v in Z4_PIECES:
        wedge = _lambda_matrix(gW, list(combinations(range(nW), k)))
        if with_v:
            pv, dv = gV
            action = {(A, b): (c * dv[b], (B, pv[b])) for A, (c, B) in wedge.items() for b in range(nV)}
        else:
            action = wedge
        ops.append(_as_kmat(action, {key: i for i, key in enumerate(action)}, N))
    return ops


def _z4_weights(weights_w, nV=2):
    """Torus weights on the bases used by _z4_piece_operators (V has weight 0)."""
    n = len(weights_w)
    out = [[weights_w[p] - weights_w[q] for p in range(n) for q in range(n)] + [0] * (nV * nV)]
    for k, with_v in Z4_PIECES:
        ws = [sum(weights_w[a] for a in A) for A in combinations(range(n), k)]
        out.append([w for w in ws for _ in range(nV)] if with_v else ws)
    return out


def _traceless(nW, nV, N):
    rows = []
    for n, off in ((nW, 0), (nV, nW * nW)):
        for p in range(n):
            for q in range(n):
                if p != q:
                    rows.append({off + p * n + q: 1})
        for p in range(n - 1):
            rows.append({off + p * n + p: 1, off + (p + 1) * n + p + 1: -1})
    d = nW * nW + nV * nV
    M = KMat.from_entries((len(rows), d), {(r, c): v for r, row in enumerate(rows) for c, v in row.items()}, N)
    return Subspace(M, d)


def z4_model_components(gens, torus=None, N=8):
    """Dimensions of the joint eigenspaces of the monomial pairs ``gens`` = [(gW, gV), ...]
    on the Z_4 model, optionally split further by torus weights on W.

    Returns a list of (piece, weight, eigenvalues, dim).
    """
    from .algcore import simultaneous_eigenspaces
    roots = [root_of_unity(k, N) for k in range(N)]
    nW, nV = len(gens[0][0][0]), len(gens[0][1][0])
    per_gen = [_z4_piece_operators(gW, gV, N) for gW, gV in gens]
    weights = _z4_weights(torus, nV) if torus is not None else None
    out = []
    for p in range(4):
        ops = [g[p] for g in per_gen]
        n = ops[0].shape[0]
        base = _traceless(nW, nV, N) if p == 0 else Subspace.full(n, N)
        spaces = [(None, base)]
        if weights is not None:
            spaces = []
            for w in sorted(set(weights[p])):
                S = Subspace.coordinate(n, [i for i, x in enumerate(weights[p]) if x == w], N)
                S = S.intersect(base) if p == 0 else S
                if S.dim:
                    spaces.append((w, S))
        for w, S in spaces:
            for vals, W in simultaneous_eigenspaces(ops, [roots] * len(ops), space=S):
                out.append((p, w, vals, W.dim))
    return out


def z4_model_type(gens, torus=None, N=8):
    from collections import Counter
    hist = Counter(d for *_, d in z4_model_components(gens, torus, N))
    return tuple(hist.get(i, 0) for i in range(1, max(hist) + 1))


def z4_model_gradings():
    """The two refinements of the Z_4 model built from Pauli matrices:

    Z_4^3 x Z_2^2 from (I_2 (x) P_4, P_2), (P_2 (x) I_4, I_2), (I_2 (x) Q_4, Q_2), (Q_2 (x) I_4, I_2);
    Z x Z_4^3 from (I_2 (x) P_4, P_2), (I_2 (x) Q_4, Q_2) and the torus diag(a, 1/a) (x) I_4.
    Returns {name: (gens, torus)}.
    """
    P4, Q4 = monomial_pauli(4)
    P2, Q2 = monomial_pauli(2)
    I2, I4 = monomial_identity(2), monomial_identity(4)
    k = monomial_kron
    finite = [(k(I2, P4), P2), (k(P2, I4), I2), (k(I2, Q4), Q2), (k(Q2, I4), I2)]
    torus = [(k(I2, P4), P2), (k(I2, Q4), Q2)]
    return {"Z4^3xZ2^2": (finite, None), "ZxZ4^3": (torus, [1] * 4 + [-1] * 4)}
