"""Lie axioms, Killing form, simplicity, Cartan subalgebras and root systems.

Checks that only need a lower bound on a rank (nondegeneracy, "this ideal is
everything", "the normalizer is no bigger than H") run modulo a prime
p = 1 mod N: reduction is a ring map, so a rank mod p never exceeds the exact
rank, and a full rank mod p certifies the exact statement.
"""

from math import gcd
from fractions import Fraction

import flint
import numpy as np
import scipy.sparse as sp

from .algcore import KMat, LinAlgError, Subspace, _zeta_power, kernel, kernel_modular
from .gradlib import AbGroup, Grading
from .scalars import Cyclo, euler_phi, lcm


def _alg(L):
    return getattr(L, "algebra", L)


# ----------------------------------------------------------------------
# layered sparse products over Q(zeta_N)


def _lmul(As, Bs, N):
    """Product of layered sparse matrices, reduced with powers of zeta."""
    phi = euler_phi(N)
    out = [None] * phi
    for p, A in enumerate(As):
        if A.nnz == 0:
            continue
        for q, B in enumerate(Bs):
            if B.nnz == 0:
                continue
            P = A @ B
            if P.nnz == 0:
                continue
            z = _zeta_power(N, p + q) if phi > 1 else [1]
            for l in range(phi):
                if z[l]:
                    t = P * int(z[l])
                    out[l] = t if out[l] is None else out[l] + t
    shape = (As[0].shape[0], Bs[0].shape[1])
    return [o if o is not None else sp.csr_array(shape, dtype=np.int64) for o in out]


def _ad_layers(T, i, d):
    return [sp.csr_array(l[:, i * d:(i + 1) * d]) for l in T]


# ----------------------------------------------------------------------
# Lie axioms


class LieReport:
    def __init__(self, ok, mode, checked, anticommutative, violation=None):
        self.ok = ok
        self.mode = mode
        self.checked = checked
        self.anticommutative = anticommutative
        self.violation = violation

    def __bool__(self):
        return self.ok

    def __repr__(self):
        s = f"LieReport(ok={self.ok}, mode={self.mode}, triples={self.checked}"
        if self.violation:
            s += f", violation={self.violation}"
        return s + ")"


def default_mode(L):
    return "full" if _alg(L).dim <= 150 else "sampled"


def verify_lie(L, mode=None, samples=10 ** 6, seed=0):
    """Anticommutativity on all pairs and the Jacobi identity on basis triples.

    Jacobi is checked as ad_i [x_j, x_l] = [ad_i x_j, x_l] + [x_j, ad_i x_l] for
    all (j, l) at once per index i; ``full`` runs every i, ``sampled`` a seeded
    set of i covering at least ``samples`` triples.
    """
    A = _alg(L)
    d = A.dim
    mode = mode or default_mode(L)
    anti = A.is_anticommutative()
    if not anti:
        T0 = A.T
        perm = np.arange(d * d).reshape(d, d).T.reshape(-1)
        bad = (T0 + T0.cols(perm))
        for l in bad.layers:
            coo = l.tocoo()
            if coo.nnz:
                c = int(coo.col[0])
                return LieReport(False, mode, 0, False, {"pair": (c // d, c % d), "component": int(coo.row[0])})
    N = A.N
    cs = [l.tocsc() for l in A.T.layers]
    Tr = [sp.csr_array(l.reshape((d * d, d))) for l in A.T.layers]
    T = [sp.csr_array(l) for l in A.T.layers]
    if mode == "full":
        idx = list(range(d))
    else:
        k = min(d, -(-samples // (d * d)))
        idx = sorted(np.random.default_rng(seed).choice(d, size=k, replace=False).tolist())
    checked = 0
    for i in idx:
        ad = _ad_layers(cs, i, d)
        E1 = _lmul(ad, T, N)
        P = _lmul(Tr, ad, N)
        for l in range(len(P)):
            e = sp.csr_array(E1[l].reshape((d * d, d)))
            pc = P[l].tocoo()
            k_, a_ = pc.row // d, pc.row % d
            sw = sp.csr_array((pc.data, (k_ * d + pc.col, a_)), shape=(d * d, d))
            D = e - P[l] + sw
            D.eliminate_zeros()
            if D.nnz:
                Dc = D.tocoo()
                r, c = int(Dc.row[0]), int(Dc.col[0])
                return LieReport(False, mode, checked, anti, {"triple": (i, r % d, c), "component": r // d})
        checked += d * d
    return LieReport(True, mode, checked, anti)


# ----------------------------------------------------------------------
# arithmetic modulo a prime


def small_prime(N=1, bits=25):
    """(p, r): p = 1 mod N below 2^bits, r of order N mod p."""
    k = (2 ** bits - 1) // N
    while True:
        p = k * N + 1
        if flint.fmpz(p).is_prime():
            for g in range(2, 500):
                r = pow(g, (p - 1) // N, p)
                if all(pow(r, N // q, p) != 1 for q in _pf(N)):
                    return p, r
        k -= 1


def _pf(n):
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def modp_sparse(M, p, r):
    """Image of a KMat in F_p (zeta -> r) as an int64 csr array."""
    out = None
    for l, layer in enumerate(M.layers):
        if layer.nnz == 0:
            continue
        t = layer.copy()
        t.data = (t.data % p) * pow(r, l, p) % p
        out = t if out is None else out + t
    if out is None:
        return sp.csr_array(M.shape, dtype=np.int64)
    out = sp.csr_array(out)
    out.data = out.data % p * pow(M.den, -1, p) % p
    out.eliminate_zeros()
    return out


def modp_scalar(v, p, r):
    if isinstance(v, Cyclo):
        num = 0
        for l, c in enumerate(v.coeffs):
            c = Fraction(c)
            if c:
                num += c.numerator * pow(c.denominator, -1, p) * pow(r, l, p)
        return num % p
    v = Fraction(v)
    return v.numerator * pow(v.denominator, -1, p) % p


class ModSpan:
    """Row echelon basis of a subspace of F_p^n, grown incrementally."""

    def __init__(self, n, p):
        self.n, self.p = n, p
        self.E = np.zeros((0, n), dtype=np.int64)
        self.piv = []

    @property
    def dim(self):
        return len(self.piv)

    def reduce(self, V):
        p = self.p
        V = np.asarray(V, dtype=np.int64) % p
        for row, c in zip(self.E, self.piv):
            f = V[:, c]
            nz = np.nonzero(f)[0]
            if len(nz):
                V[nz] = (V[nz] - np.outer(f[nz], row) % p) % p
        return V

    def add(self, V):
        """Add rows; returns the reduced new independent rows."""
        p = self.p
        V = self.reduce(V)
        V = V[np.any(V != 0, axis=1)]
        new = []
        while len(V):
            nzc = np.nonzero(np.any(V != 0, axis=0))[0]
            c = int(nzc[0])
            r = int(np.nonzero(V[:, c])[0][0])
            row = V[r] * pow(int(V[r, c]), -1, p) % p
            V = np.delete(V, r, axis=0)
            f = V[:, c]
            nz = np.nonzero(f)[0]
            if len(nz):
                V[nz] = (V[nz] - np.outer(f[nz], row) % p) % p
            if len(self.E):
                g = self.E[:, c]
                nzE = np.nonzero(g)[0]
                if len(nzE):
                    self.E[nzE] = (self.E[nzE] - np.outer(g[nzE], row) % p) % p
            self.E = np.vstack([self.E, row[None]])
            self.piv.append(c)
            new.append(row)
            V = V[np.any(V != 0, axis=1)] if len(V) else V
        return np.array(new, dtype=np.int64).reshape(len(new), self.n)


def rank_modp(D, p):
    S = ModSpan(D.shape[1], p)
    S.add(D)
    return S.dim


# ----------------------------------------------------------------------
# Killing form, center, ideals, simplicity


def killing_matrix(L):
    """kappa(x_i, x_j) = tr(ad x_i ad x_j) as a KMat."""
    A = _alg(L)
    d = A.dim
    X, Y = [], []
    for l in A.T.layers:
        coo = l.tocoo()
        k, i, pp = coo.row, coo.col // d, coo.col % d
        # X[i, k*d + p] = c[k, i, p];  Y[k*d + p, j] = c[p, j, k]
        X.append(sp.csr_array((coo.data, (i, k * d + pp)), shape=(d, d * d)))
        Y.append(sp.csr_array((coo.data, (pp * d + k, i)), shape=(d * d, d)))
    K = _lmul(X, Y, A.N)
    return KMat(K, A.T.den ** 2, A.N)


def is_nondegenerate(M):
    """Exact nondegeneracy of a square KMat, decided mod p when possible."""
    p, r = small_prime(M.N)
    D = modp_sparse(M, p, r).toarray()
    if rank_modp(D, p) == M.shape[0]:
        return True
    from .algcore import rank
    return rank(M) == M.shape[0]


def center(L):
    """Subspace {x : [x, L] = 0}."""
    A = _alg(L)
    d = A.dim
    Tr = KMat([sp.csr_array(l.reshape((d * d, d))) for l in A.T.layers], A.T.den, A.N, normalize=False)
    K = kernel_modular(Tr) if A.N == 1 else kernel(Tr)
    return Subspace(K, d)


def _tr_modp(A, p, r):
    d = A.dim
    Tp = modp_sparse(A.T, p, r)
    return sp.csr_array(Tp.reshape((d * d, d)))


def ideal_dimension(L, vectors, p=None):
    """Dimension mod p of the ideal generated by the given vectors (rows, F_p or exact)."""
    A = _alg(L)
    d = A.dim
    if p is None:
        p, r = small_prime(A.N)
    else:
        p, r = p
    Tr = _tr_modp(A, p, r)
    S = ModSpan(d, p)
    front = S.add(np.asarray(vectors, dtype=np.int64) % p)
    while len(front) and S.dim < d:
        img = Tr @ front.T  # ((k, j), m) = [x_j, f_m]_k
        img = img % p
        V = img.reshape(d, d, -1).transpose(1, 2, 0).reshape(-1, d)
        front = S.add(V)
    return S.dim


def killing_simplicity(L, roots=None, seed=0, tries=40):
    """(killing matrix, is_semisimple, is_simple).

    Semisimple iff the Killing form is nondegenerate.  Simplicity is then the
    irreducibility of the adjoint module, decided by Norton's criterion over
    F_p: for a in the associative algebra generated by ad L with an eigenvalue
    of geometric multiplicity one, L is irreducible iff the eigenvector of a
    generates L and the eigenvector of a^T generates L under the transposes.
    A proper ideal over F survives reduction mod p, so a positive answer is a
    proof; a negative one is a proper submodule mod p.  When no such a turns
    up, the ideal generated by a root vector decides (needs ``roots``).
    """
    A = _alg(L)
    d = A.dim
    K = killing_matrix(L)
    ss = is_nondegenerate(K)
    if not ss:
        return K, False, False
    simple = _norton_irreducible(A, seed, tries)
    if simple is None:
        if roots is None:
            roots = cartan_and_roots(L)
        p, r = small_prime(A.N)
        v = roots.root_spaces[0].basis.rows([0])
        simple = ideal_dimension(L, modp_sparse(v, p, r).toarray(), (p, r)) == d
    return K, True, simple


def _dual_span_dim(A, w, p, r):
    """Dimension of the span of w under the transposes of ad x_j (mod p)."""
    d = A.dim
    TpT = sp.csr_array(modp_sparse(A.T, p, r).T)  # (j*d + l, k)
    S = ModSpan(d, p)
    front = S.add(np.asarray(w, dtype=np.int64) % p)
    while len(front) and S.dim < d:
        img = (TpT @ front.T) % p  # ((j, l), m) = (ad_j^T w_m)_l
        front = S.add(img.reshape(d, d, -1).transpose(0, 2, 1).reshape(-1, d))
    return S.dim


def _norton_irreducible(A, seed, tries):
    d = A.dim
    if d == 1:
        return False
    p, r = small_prime(A.N)
    rng = np.random.default_rng(seed)
    I = np.eye(d, dtype=np.int64)
    for _ in range(tries):
        x, y, z = (rng.integers(0, p, size=d) for _ in range(3))
        a = (_ad_modp(A, x, p, r) + _ad_modp(A, y, p, r) @ _ad_modp(A, z, p, r) % p) % p
        M = flint.nmod_mat(a.tolist(), p)
        for lam, _ in M.charpoly().roots():
            lam = int(lam)
            B = flint.nmod_mat(((a - lam * I) % p).tolist(), p)
            if B.rank() != d - 1:
                continue
            v = _null_vector(B, d)
            w = _null_vector(B.transpose(), d)
            # two random ad's usually generate everything; the full closure only
            # runs to confirm a proper submodule
            gens = [_ad_modp(A, rng.integers(0, p, size=d), p, r) for _ in range(2)]
            if _krylov_dim(gens, v, p) < d and ideal_dimension(A, v[None], (p, r)) < d:
                return False
            if _krylov_dim([g.T for g in gens], w, p) == d:
                return True
            return _dual_span_dim(A, w[None], p, r) == d
    return None


def _krylov_dim(mats, v, p):
    """Dimension of the closure of v under the given F_p matrices."""
    d = len(v)
    B = np.asarray(v, dtype=np.int64)[None] % p
    dim = 1
    while True:
        img = np.vstack([B] + [(B @ M.T) % p for M in mats])
        R, k = flint.nmod_mat(img.tolist(), p).rref()
        if k == dim or k == d:
            return k
        dim = k
        B = np.array([[int(R[i, j]) for j in range(d)] for i in range(k)], dtype=np.int64)


def _null_vector(B, d):
    X, k = B.nullspace()
    return np.array([int(X[i, 0]) for i in range(d)], dtype=np.int64)


def killing_invariance_defect(L, triples):
    """kappa([x,y],z) - kappa(x,[y,z]) on the given basis index triples."""
    A = _alg(L)
    K = killing_matrix(L)
    out = []
    for i, j, k in triples:
        xy = A.T.cols([i * A.dim + j])
        yz = A.T.cols([j * A.dim + k])
        a = (xy.T @ K.cols([k])).entry(0, 0)
        b = (K.rows([i]) @ yz).entry(0, 0)
        out.append(a - b)
    return out


# ----------------------------------------------------------------------
# ad of an element, toral subalgebras


def diagonal_torus(L):
    """Rows spanning {h : ad h is diagonal in the basis}."""
    A = _alg(L)
    d = A.dim
    layers = []
    for l in A.T.layers:
        coo = l.tocoo()
        k, i, j = coo.row, coo.col // d, coo.col % d
        off = k != j
        layers.append(sp.csr_array((coo.data[off], (k[off] * d + j[off], i[off])), shape=(d * d, d)))
    M = KMat(layers, A.T.den, A.N)
    nzr = np.unique(np.concatenate([l.tocoo().row for l in M.layers])) if any(l.nnz for l in M.layers) else []
    if len(nzr) == 0:
        return KMat.identity(d, A.N)
    M = M.rows(list(nzr))
    return kernel_modular(M) if A.N == 1 else kernel(M)


def _dense_rational(M):
    D, den = M.to_int_dense()
    if D.shape[0] != 1 and np.any(D[1:]):
        raise LinAlgError("matrix is not rational")
    return D[0], den


def _ad_dense(A, x):
    """Integer ad(x) and its denominator, for a rational integer vector x."""
    d = A.dim
    T, den = _dense_rational(A.T)
    c = T.reshape(d, d, d)
    return np.einsum("kil,i->kl", c.astype(object), np.asarray(x, dtype=object)), den


# ----------------------------------------------------------------------
# Dynkin diagrams


def _std_cartan(kind, n):
    A = 2 * np.identity(n, dtype=np.int64)
    if kind in "ABCD" or kind == "E":
        for i in range(n - 1):
            A[i, i + 1] = A[i + 1, i] = -1
    if kind == "B":
        A[n - 1, n - 2] = -2
    elif kind == "C":
        A[n - 2, n - 1] = -2
    elif kind == "D":
        A[n - 2, n - 1] = A[n - 1, n - 2] = 0
        A[n - 3, n - 1] = A[n - 1, n - 3] = -1
    elif kind == "E":
        # Bourbaki numbering 1-3-4-5-...-n with 2 attached to 4
        A = 2 * np.identity(n, dtype=np.int64)
        chain = [0, 2, 3] + list(range(4, n))
        for a, b in zip(chain, chain[1:]):
            A[a, b] = A[b, a] = -1
        A[1, 3] = A[3, 1] = -1
    elif kind == "F":
        A = np.array([[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]], dtype=np.int64)
    elif kind == "G":
        A = np.array([[2, -3], [-1, 2]], dtype=np.int64)
    return A


def _candidates(n):
    out = [("A", n)]
    if n >= 2:
        out.append(("B", n))
    if n >= 3:
        out.append(("C", n))
    if n >= 4:
        out.append(("D", n))
    if n in (6, 7, 8):
        out.append(("E", n))
    if n == 4:
        out.append(("F", 4))
    if n == 2:
        out.append(("G", 2))
    return out


def _match(A, S):
    n = len(A)
    perm = [None] * n
    used = [False] * n

    def go(i):
        if i == n:
            return True
        for c in range(n):
            if used[c] or A[i][i] != S[c][c]:
                continue
            if all(A[i][j] == S[c][perm[j]] and A[j][i] == S[perm[j]][c] for j in range(i)):
                perm[i] = c
                used[c] = True
                if go(i + 1):
                    return True
                used[c] = False
        return False

    return go(0)


def dynkin_label(C):
    """Type label of a Cartan matrix (Bourbaki convention a_ij = <alpha_i^vee, alpha_j>), e.g. 'A2+A2'."""
    C = np.asarray(C, dtype=np.int64)
    n = len(C)
    seen = [False] * n
    labels = []
    for s in range(n):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in range(n):
                if not seen[v] and (C[u, v] != 0 or C[v, u] != 0):
                    seen[v] = True
                    stack.append(v)
        sub = C[np.ix_(sorted(comp), sorted(comp))].tolist()
        m = len(sub)
        for kind, k in _candidates(m):
            if _match(sub, _std_cartan(kind, k).tolist()):
                labels.append(f"{kind}{k}")
                break
        else:
            raise LinAlgError(f"Cartan matrix component of rank {m} is not of finite type")
    order = "ABCDEFG"
    labels.sort(key=lambda s: (order.index(s[0]), int(s[1:])))
    return "+".join(labels)


def root_count(label):
    tot = 0
    for part in label.split("+"):
        k, n = part[0], int(part[1:])
        tot += {"A": n * (n + 1), "B": 2 * n * n, "C": 2 * n * n, "D": 2 * n * (n - 1),
                "E": {6: 72, 7: 126, 8: 240}.get(n, 0), "F": 48, "G": 12}[k]
    return tot


# ----------------------------------------------------------------------
# Cartan subalgebras and roots


class RootDatum:
    """Split Cartan subalgebra, roots (values on the Cartan basis) and root spaces."""

    def __init__(self, cartan, cartan_basis, roots, root_spaces, simple, coords, cartan_matrix, type_label):
        self.cartan = cartan
        self.cartan_basis = cartan_basis  # KMat rows
        self.roots = roots  # list of tuples of Fractions
        self.root_spaces = root_spaces  # list of Subspace, aligned with roots
        self.simple = simple  # indices into roots
        self.coords = coords  # integer coordinates of each root on the simple roots
        self.cartan_matrix = cartan_matrix
        self.type_label = type_label

    @property
    def rank(self):
        return self.cartan.dim

    def grading(self, L, name=None):
        """Root space decomposition as a Z^rank grading."""
        A = _alg(L)
        rows = [self.cartan_basis]
        degrees = [(0,) * self.rank] * self.cartan.dim
        for W, c in zip(self.root_spaces, self.coords):
            rows.append(W.basis)
            degrees += [tuple(c)] * W.dim
        B = rows[0]
        for R in rows[1:]:
            B = B.vstack(R)
        B = B.T
        return Grading(A, AbGroup(self.rank), degrees, basis=B, name=name or "Cartan grading")

    def __repr__(self):
        return f"RootDatum({self.type_label}, rank={self.rank}, roots={len(self.roots)})"


def _torus_rows(L, torus):
    if torus is not None:
        return torus
    meta = getattr(L, "meta", {})
    if meta.get("torus") is not None:
        return meta["torus"]
    H = diagonal_torus(L)
    extra = meta.get("torus_extra") or []
    if extra:
        H = H.vstack(KMat.from_rows([list(v) for v in extra], H.N))
    return H


def cartan_and_roots(L, seed_element=None, torus=None, seed=0, retries=20):
    """Root datum of a split semisimple Lie algebra.

    The Cartan subalgebra is the nilspace of ad(x) for x regular in a split
    torus: the torus is given, attached to the construction (meta['torus']),
    or the span of the basis combinations acting diagonally.  Eigenvalues of
    ad(x) are found only as rational roots of its characteristic polynomial.
    """
    A = _alg(L)
    d = A.dim
    Hrows = _torus_rows(L, torus)
    if isinstance(Hrows, KMat):
        H = Subspace(Hrows, d)
    else:
        H = Subspace(KMat.from_rows([list(r) for r in Hrows]), d)
    Hb = H.basis
    HD, Hden = _dense_rational(Hb)
    T, Tden = _dense_rational(A.T)
    c = T.reshape(d, d, d)
    # ad of the torus basis, integer with denominator Hden * Tden
    adH = np.einsum("kil,hi->hkl", c.astype(object), HD.astype(object))
    diag = all(not np.any(adH[h] - np.diag(np.diag(adH[h]))) for h in range(len(adH)))
    rng = np.random.default_rng(seed)
    best = None
    for attempt in range(retries):
        if seed_element is not None:
            coeffs = None
            x = np.asarray(seed_element, dtype=object)
            adx = np.einsum("kil,i->kl", c.astype(object), x)
        else:
            coeffs = rng.integers(-10 ** 6, 10 ** 6 + 1, size=len(adH)).astype(object)
            adx = np.einsum("h,hkl->kl", coeffs, adH)
        if diag and seed_element is None:
            ev = np.diag(adx)
            groups = {}
            for b in range(d):
                groups.setdefault(ev[b], []).append(b)
            spaces = {}
            for lam, idx in groups.items():
                spaces[lam] = Subspace.coordinate(d, idx, A.N)
        else:
            spaces = _rational_eigenspaces(adx, d, A.N)
        zero = spaces.get(0)
        zdim = zero.dim if zero is not None else 0
        ok = all(W.dim == 1 for lam, W in spaces.items() if lam != 0)
        if best is None or zdim < best[0]:
            best = (zdim, spaces, ok)
        if ok and zdim == H.dim:
            break
        if seed_element is not None:
            break
    zdim, spaces, ok = best
    if not ok:
        raise LinAlgError("no regular element found in the torus")
    cartan = spaces[0]
    # values of roots on the torus basis
    if zdim != H.dim:
        raise LinAlgError(f"nilspace has dim {zdim} but the torus has dim {H.dim}: torus is not maximal")
    roots, rspaces = [], []
    for lam, W in spaces.items():
        if lam == 0:
            continue
        v = W.basis
        vd, vden = _dense_rational(v)
        vec = vd[0].astype(object)
        piv = int(np.nonzero(vec)[0][0])
        vals = []
        for h in range(len(adH)):
            img = adH[h].dot(vec)
            a = Fraction(int(img[piv]), int(vec[piv]) * Hden * Tden)
            if any(Fraction(int(img[m]), Hden * Tden) != a * Fraction(int(vec[m])) for m in range(d)):
                raise LinAlgError("root space is not a joint eigenspace of the torus")
            vals.append(a)
        roots.append(tuple(vals))
        rspaces.append(W)
    # abelian Cartan
    for i in range(len(adH)):
        for j in range(len(adH)):
            if np.any(adH[i].dot(HD[j].astype(object))):
                raise LinAlgError("the torus is not abelian")
    rset = set(roots)
    if any(tuple(-a for a in r) not in rset for r in roots):
        raise LinAlgError("roots do not come in +- pairs")
    simple, coords, C = _simple_roots(roots, H.dim, seed)
    label = dynkin_label(C) if len(C) else ""
    return RootDatum(cartan, Hb, roots, rspaces, simple, coords, C, label)


def _rational_eigenspaces(adx, d, N):
    M = flint.fmpz_mat([[int(v) for v in row] for row in adx])
    cp = M.charpoly()
    _, facs = cp.factor()
    evs = []
    for f, m in facs:
        if f.degree() != 1:
            raise LinAlgError("ad(x) has an eigenvalue outside Q")
        evs.append(Fraction(-int(f[0]), int(f[1])))
    spaces = {}
    for lam in evs:
        B = flint.fmpq_mat(d, d, [flint.fmpq(int(v)) for v in adx.ravel()])
        for i in range(d):
            B[i, i] = B[i, i] - flint.fmpq(lam.numerator, lam.denominator)
        X, nul = B.nullspace() if hasattr(B, "nullspace") else _fmpq_nullspace(B)
        # the reduced echelon basis does not depend on the size of x
        Y = flint.fmpq_mat(nul, d, [X[i, j] for j in range(nul) for i in range(d)]).rref()[0] if nul else X
        rows = [_primitive([Fraction(int(Y[j, i].p), int(Y[j, i].q)) for i in range(d)]) for j in range(nul)]
        spaces[lam if lam != 0 else 0] = Subspace(KMat.from_rows(rows, N), d)
    return spaces


def _primitive(row):
    den = 1
    for v in row:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints


def _fmpq_nullspace(B):
    d = B.nrows()
    num = flint.fmpz_mat(B.nrows(), B.ncols(), [0] * (B.nrows() * B.ncols()))
    den = 1
    for i in range(d):
        for j in range(B.ncols()):
            den = den * int(B[i, j].q) // np.gcd(den, int(B[i, j].q))
    for i in range(d):
        for j in range(B.ncols()):
            num[i, j] = int(B[i, j] * den)
    X, nul = num.nullspace()
    return flint.fmpq_mat(X), nul


def _simple_roots(roots, r, seed):
    rng = np.random.default_rng(seed + 7)
    while True:
        f = [Fraction(int(v)) for v in rng.integers(1, 10 ** 6, size=r)]
        vals = [sum(a * b for a, b in zip(f, rt)) for rt in roots]
        if all(v != 0 for v in vals):
            break
    pos = [i for i, v in enumerate(vals) if v > 0]
    pset = {roots[i] for i in pos}
    simple = []
    for i in pos:
        a = roots[i]
        dec = any(tuple(x - y for x, y in zip(a, roots[j])) in pset for j in pos if j != i)
        if not dec:
            simple.append(i)
    simple.sort(key=lambda i: vals[i])
    S = [roots[i] for i in simple]
    # coordinates on the simple roots
    M = flint.fmpq_mat(len(S), r, [flint.fmpq(x.numerator, x.denominator) for s in S for x in s])
    coords = []
    if len(S):
        MM = M * M.transpose()
        inv = MM.inv()
        for rt in roots:
            v = flint.fmpq_mat(1, r, [flint.fmpq(x.numerator, x.denominator) for x in rt])
            c = v * M.transpose() * inv
            cs = [Fraction(int(c[0, j].p), int(c[0, j].q)) for j in range(len(S))]
            back = [sum(cs[j] * S[j][k] for j in range(len(S))) for k in range(r)]
            if back != list(rt) or any(x.denominator != 1 for x in cs):
                raise LinAlgError("root is not an integer combination of the simple roots")
            coords.append(tuple(int(x) for x in cs))
    rset = set(roots)
    n = len(S)
    C = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i == j:
                C[i, j] = 2
                continue
            k = 0
            while tuple(a + (k + 1) * b for a, b in zip(S[j], S[i])) in rset:
                k += 1
            C[i, j] = -k
    if n != r:
        raise LinAlgError(f"found {n} simple roots for a torus of rank {r}")
    return simple, coords, C


# ----------------------------------------------------------------------
# Cartan subalgebra test and semisimple elements


def _rows_kmat(H, d):
    if isinstance(H, Subspace):
        return H.basis
    if isinstance(H, KMat):
        return H
    return KMat.from_rows([list(r) for r in H])


def subspace_is_cartan(L, H):
    """True iff H is abelian and equals its normalizer.

    Abelian is checked exactly.  The normalizer is the x-projection of the
    kernel of (x, y) -> ([h_k, x] - sum_j y_kj h_j)_k; it contains H, so a
    kernel of dimension dim H modulo p certifies equality.
    """
    A = _alg(L)
    d = A.dim
    B = Subspace(_rows_kmat(H, d), d).basis
    r = B.shape[0]
    if r == 0:
        return d == 0
    for i in range(r):
        for j in range(i + 1, r):
            if not A.multiply(B.rows([i]).T, B.rows([j]).T).is_zero():
                return False
    # H may need more roots of unity than the structure constants
    N = lcm(A.N, B.N)
    p, rr = small_prime(N)
    Hp = modp_sparse(B, p, pow(rr, N // B.N, p)).toarray()
    rA = pow(rr, N // A.N, p)
    blocks = []
    for k in range(r):
        row = np.zeros((d, d + r * r), dtype=np.int64)
        row[:, :d] = _ad_modp(A, Hp[k], p, rA)
        row[:, d + k * r:d + (k + 1) * r] = (-Hp.T) % p
        blocks.append(row)
    M = np.vstack(blocks) % p
    return d + r * r - rank_modp(M, p) == r


def _ad_modp(A, h, p, r):
    d = A.dim
    coo = modp_sparse(A.T, p, r).tocoo()
    k, i, l = coo.row, coo.col // d, coo.col % d
    vals = coo.data * h[i] % p
    return sp.csr_array((vals, (k, l)), shape=(d, d)).toarray() % p


def _rational_semisimple(M):
    """Squarefree minimal polynomial for an integer matrix: rank f(M) = rank f(M)^2 for repeated factors f."""
    d = M.shape[0]
    Z = flint.fmpz_mat([[int(v) for v in row] for row in M])
    _, facs = Z.charpoly().factor()
    Q = flint.fmpq_mat(Z)
    for f, m in facs:
        if m == 1:
            continue
        F = _poly_at(f, Q, d)
        if F.rank() != (F * F).rank():
            return False
    return True


def _poly_at(f, M, d):
    R = flint.fmpq_mat(d, d)
    for k in range(f.degree(), -1, -1):
        R = R * M
        a = int(f[k])
        for i in range(d):
            R[i, i] = R[i, i] + a
    return R


def _restricted(M):
    """Integer matrix of a KMat over Q(zeta_N) viewed as a Q-linear map (restriction of scalars).

    A K-linear map is semisimple iff its restriction of scalars is, since over
    the algebraic closure the latter is the sum of the Galois conjugates.
    """
    from .algcore import CArr, _blowup_matrix
    return _blowup_matrix(CArr.from_kmat(M))


def is_semisimple_element(L, x, grading=None):
    """True iff ad(x) has a squarefree minimal polynomial.

    ``x`` is a column KMat (or a list of scalars).  With a grading in which x
    is homogeneous of a degree g of finite order n, ad(x)^n preserves every
    component and ad(x) maps each component into one other; then ad x is
    semisimple iff every block of ad(x)^n is and rank ad x = rank ad(x)^n
    (the generalized kernel of a semisimple power is killed by ad x itself).
    The graded test works in the homogeneous basis.
    """
    A = _alg(L)
    X = x if isinstance(x, KMat) else KMat.column(list(x))
    if grading is not None:
        return _graded_semisimple(grading, X)
    N = lcm(A.N, X.N)
    A, X = A.lift(N), X.lift(N)
    ad = A.T @ X.kron(KMat.identity(A.dim, N))
    return _rational_semisimple(_restricted(ad))


def _graded_semisimple(grading, X):
    G = grading.group
    H = grading.homogeneous_algebra()
    y = grading.homogeneous_coords(X)
    N = lcm(H.N, y.N)
    H, y = H.lift(N), y.lift(N)
    rows = sorted({r for r, _ in y.entries()})
    degs = {grading.degrees[r] for r in rows}
    if len(degs) != 1:
        raise ValueError("element is not homogeneous")
    deg = degs.pop()
    if any(deg[: G.free_rank]):
        raise ValueError("degree of infinite order")
    n = 1
    for a, m in zip(deg[G.free_rank:], G.torsion):
        o = m // gcd(m, a)
        n = n * o // gcd(n, o)
    ad = H.T @ y.kron(KMat.identity(H.dim, N))
    adn = ad
    for _ in range(n - 1):
        adn = adn @ ad
    comps = grading.components()
    if max(len(v) for v in comps.values()) > 2:
        return _graded_semisimple_blocks(G, comps, deg, ad, adn)
    E, En = ad.entries(), adn.entries()
    z = Cyclo(0)

    def block(ent, rows, cols):
        return [[ent.get((r, c), z) for c in cols] for r in rows]

    r1 = rn = 0
    for d, idx in comps.items():
        # ad x maps this component into the one of degree d + deg
        tgt = comps.get(G.add(d, deg), [])
        if tgt:
            r1 += _rank_le2(block(E, tgt, idx))
        R = block(En, idx, idx)
        rn += _rank_le2(R)
        if not _semisimple_le2(R):
            return False
    return r1 == rn


def _rank_le2(M):
    if all(v.is_zero() for row in M for v in row):
        return 0
    if len(M) == 2 and len(M[0]) == 2 and not (M[0][0] * M[1][1] - M[0][1] * M[1][0]).is_zero():
        return 2
    return 1


def _semisimple_le2(R):
    if len(R) < 2:
        return True
    # a 2 x 2 matrix is semisimple iff it is scalar or has two distinct eigenvalues
    (a, b), (c, d) = R
    if b.is_zero() and c.is_zero() and a == d:
        return True
    return not ((a - d) * (a - d) + 4 * b * c).is_zero()


def _graded_semisimple_blocks(G, comps, deg, ad, adn):
    from .algcore import rank
    r1 = rn = 0
    for d, idx in comps.items():
        tgt = comps.get(G.add(d, deg), [])
        if tgt:
            img = ad.rows(tgt).cols(idx)
            r1 += rank(img) if not img.is_zero() else 0
        R = adn.rows(idx).cols(idx)
        if R.is_zero():
            continue
        rn += rank(R)
        if not _rational_semisimple(_restricted(R)):
            return False
    return r1 == rn
