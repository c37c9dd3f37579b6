"""Structure-constant algebras and exact linear algebra over Q(zeta_N).

The workhorse is ``KMat``: a sparse matrix over Q(zeta_N) stored as
phi(N) integer layers plus one common denominator,

    M = (L_0 + L_1 z + ... + L_{phi-1} z^{phi-1}) / den.

Products are layer-by-layer integer sparse products followed by the
reduction z^k -> power basis.  Every integer product is bounded before
it is formed, since numpy int64 arithmetic wraps silently.

Row reduction goes through python-flint: a matrix over Q(zeta_N) is
blown up to a rational matrix (each scalar becomes its phi x phi
multiplication matrix), reduced exactly there, and the reduced echelon
form over Q(zeta_N) is read back from the rational one.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd

import flint
import numpy as np
import scipy.sparse as sp

from .scalars import Cyclo, CycloError, check_order, euler_phi, lcm, power_table

INT_LIMIT = 2 ** 62


class LinAlgError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def _table(n):
    return np.array(power_table(n), dtype=np.int64)


@lru_cache(maxsize=None)
def _table_max(n):
    return int(np.abs(_table(n)).max())


def _csr(shape, rows=(), cols=(), vals=()):
    return sp.csr_array((np.asarray(vals, dtype=np.int64),
                         (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
                        shape=shape)


def _div_data(m, g):
    m = m.copy()
    m.data //= g
    return m


def _maxabs(m):
    return int(np.abs(m.data).max()) if m.nnz else 0


def _row_nnz_max(m):
    if not m.nnz:
        return 0
    return int(np.diff(m.indptr).max())


def _as_cyclo(x):
    if isinstance(x, Cyclo):
        return x
    return Cyclo(x)


class KMat:
    """Immutable sparse matrix over Q(zeta_N)."""

    __slots__ = ("N", "phi", "shape", "layers", "den")

    def __init__(self, layers, den=1, N=1, normalize=True):
        self.N = N
        self.phi = euler_phi(N)
        if len(layers) != self.phi:
            raise ValueError("layer count must equal phi(N)")
        self.layers = [sp.csr_array(l, dtype=np.int64) for l in layers]
        self.shape = self.layers[0].shape
        self.den = int(den)
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if normalize:
            self._normalize()

    # construction

    @classmethod
    def zeros(cls, shape, N=1):
        return cls([_csr(shape) for _ in range(euler_phi(N))], 1, N, normalize=False)

    @classmethod
    def identity(cls, n, N=1):
        phi = euler_phi(N)
        ls = [sp.identity(n, dtype=np.int64, format="csr")] + [_csr((n, n)) for _ in range(phi - 1)]
        return cls(ls, 1, N, normalize=False)

    @classmethod
    def from_entries(cls, shape, entries, N=None):
        """entries: dict (r, c) -> int | Fraction | Cyclo, or iterable of triples."""
        items = entries.items() if isinstance(entries, dict) else ((
            (r, c), v) for r, c, v in entries)
        vals = []
        order = 1 if N is None else N
        for (r, c), v in items:
            v = _as_cyclo(v)
            if v.is_zero():
                continue
            vals.append((r, c, v))
            if N is None:
                order = lcm(order, v.order)
        if N is not None:
            for _, _, v in vals:
                if N % v.order:
                    raise CycloError(f"entry of order {v.order} does not live in Q(zeta_{N})")
        check_order(order)
        phi = euler_phi(order)
        den = 1
        lifted = []
        for r, c, v in vals:
            cs = v.lift(order).coeffs
            lifted.append((r, c, cs))
            for f in cs:
                den = lcm(den, f.denominator)
        rows = [[] for _ in range(phi)]
        cols = [[] for _ in range(phi)]
        data = [[] for _ in range(phi)]
        for r, c, cs in lifted:
            for l, f in enumerate(cs):
                if f:
                    rows[l].append(r)
                    cols[l].append(c)
                    data[l].append(int(f * den))
        for l in range(phi):
            if any(abs(x) >= INT_LIMIT for x in data[l]):
                raise OverflowError("entry too large for the int64 layer representation")
        layers = [_csr(shape, rows[l], cols[l], data[l]) for l in range(phi)]
        return cls(layers, den, order)

    @classmethod
    def from_rows(cls, rows, N=None):
        """Dense list of rows (scalars) -> KMat."""
        m = len(rows)
        n = len(rows[0]) if m else 0
        ent = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v != 0:
                    ent[(i, j)] = v
        return cls.from_entries((m, n), ent, N)

    @classmethod
    def from_int_dense(cls, arr, den=1, N=1):
        """arr: integer array of shape (phi, m, n) or (m, n) when N = 1."""
        arr = np.asarray(arr)
        if arr.ndim == 2:
            arr = arr[None]
        return cls([sp.csr_array(a.astype(np.int64)) for a in arr], den, N)

    @classmethod
    def column(cls, values, N=None):
        return cls.from_entries((len(values), 1), {(i, 0): v for i, v in enumerate(values) if v != 0}, N)

    @classmethod
    def unit_vector(cls, n, i, N=1):
        return cls([_csr((n, 1), [i], [0], [1])] + [_csr((n, 1)) for _ in range(euler_phi(N) - 1)], 1, N,
                   normalize=False)

    # bookkeeping

    def _normalize(self):
        for l in self.layers:
            l.eliminate_zeros()
        if self.den == 1:
            return
        g = self.den
        for l in self.layers:
            if l.nnz:
                g = gcd(g, int(np.gcd.reduce(np.abs(l.data))))
                if g == 1:
                    return
        if g > 1:
            self.layers = [_div_data(l, g) for l in self.layers]
            self.den //= g

    def lift(self, N):
        if N == self.N:
            return self
        if N % self.N:
            raise CycloError(f"cannot lift order {self.N} to {N}")
        check_order(N)
        step = N // self.N
        phi = euler_phi(N)
        tab = _table(N)
        out = [_csr(self.shape) for _ in range(phi)]
        for a, layer in enumerate(self.layers):
            if not layer.nnz:
                continue
            row = tab[a * step]
            for b in range(phi):
                if row[b]:
                    out[b] = out[b] + layer * int(row[b])
        return KMat(out, self.den, N)

    @staticmethod
    def common(a, b):
        if a.N == b.N:
            return a, b
        n = lcm(a.N, b.N)
        return a.lift(n), b.lift(n)

    @property
    def nnz(self):
        if self.phi == 1:
            return self.layers[0].nnz
        pattern = abs(self.layers[0])
        for l in self.layers[1:]:
            pattern = pattern + abs(l)
        return pattern.nnz

    def maxabs(self):
        return max(_maxabs(l) for l in self.layers)

    def is_zero(self):
        return all(l.nnz == 0 for l in self.layers)

    def support(self):
        """Boolean csr pattern of nonzero entries."""
        pattern = abs(self.layers[0])
        for l in self.layers[1:]:
            pattern = pattern + abs(l)
        pattern.eliminate_zeros()
        return pattern

    # arithmetic

    def __add__(self, other):
        a, b = KMat.common(self, other)
        if a.shape != b.shape:
            raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
        d = lcm(a.den, b.den)
        fa, fb = d // a.den, d // b.den
        if (a.maxabs() * fa + b.maxabs() * fb) >= INT_LIMIT:
            raise OverflowError("KMat addition exceeds int64 range")
        return KMat([la * fa + lb * fb for la, lb in zip(a.layers, b.layers)], d, a.N)

    def __neg__(self):
        return KMat([-l for l in self.layers], self.den, self.N, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _as_cyclo(c)
        if c.is_zero():
            return KMat.zeros(self.shape, self.N)
        if c.is_rational():
            f = c.to_fraction()
            if abs(self.maxabs() * f.numerator) >= INT_LIMIT:
                raise OverflowError("KMat scaling exceeds int64 range")
            return KMat([l * f.numerator for l in self.layers], self.den * f.denominator, self.N)
        s = KMat.from_entries((1, 1), {(0, 0): c})
        return _layer_product(self, s, lambda x, y: x * int(y.toarray()[0, 0]))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"matmul shape mismatch {self.shape} @ {other.shape}")
        return _layer_product(self, other, lambda x, y: x @ y,
                              inner=min(self.shape[1], max(1, _row_nnz_max_all(self))))

    def kron(self, other):
        return _layer_product(self, other, lambda x, y: sp.kron(x, y, format="csr"), inner=1)

    @property
    def T(self):
        return KMat([l.T.tocsr() for l in self.layers], self.den, self.N, normalize=False)

    def __eq__(self, other):
        if not isinstance(other, KMat):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def conj(self):
        """Entrywise complex conjugation z -> z^-1."""
        tab = _table(self.N)
        out = [_csr(self.shape) for _ in range(self.phi)]
        for a, layer in enumerate(self.layers):
            if not layer.nnz:
                continue
            row = tab[(-a) % self.N]
            for b in range(self.phi):
                if row[b]:
                    out[b] = out[b] + layer * int(row[b])
        return KMat(out, self.den, self.N)

    # slicing

    def rows(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return KMat([l[idx] for l in self.layers], self.den, self.N)

    def cols(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return KMat([l.tocsc()[:, idx].tocsr() for l in self.layers], self.den, self.N)

    def col(self, j):
        return self.cols([j])

    def entry(self, r, c):
        cs = [Fraction(int(l[r, c]), self.den) for l in self.layers]
        return Cyclo(cs, self.N)

    def entries(self):
        """dict (r, c) -> Cyclo over the nonzero pattern."""
        pat = self.support().tocoo()
        dense = [l.tocsr() for l in self.layers]
        out = {}
        for r, c in zip(pat.row.tolist(), pat.col.tolist()):
            out[(r, c)] = Cyclo([Fraction(int(l[r, c]), self.den) for l in dense], self.N)
        return out

    def to_int_dense(self):
        """(phi, m, n) int64 array together with the denominator."""
        return np.stack([l.toarray() for l in self.layers]), self.den

    def is_rational(self):
        return all(l.nnz == 0 for l in self.layers[1:])

    def to_fraction_rows(self):
        if not self.is_rational():
            raise CycloError("matrix has irrational entries")
        d = self.layers[0].toarray()
        return [[Fraction(int(x), self.den) for x in row] for row in d]

    def hstack(self, other):
        a, b = _common_den(*KMat.common(self, other))
        return KMat([sp.hstack([x, y], format="csr") for x, y in zip(a.layers, b.layers)], a.den, a.N)

    def vstack(self, other):
        a, b = _common_den(*KMat.common(self, other))
        return KMat([sp.vstack([x, y], format="csr") for x, y in zip(a.layers, b.layers)], a.den, a.N)

    def __repr__(self):
        return f"KMat(shape={self.shape}, N={self.N}, nnz={self.nnz}, den={self.den})"


def _row_nnz_max_all(m):
    return max(_row_nnz_max(l) for l in m.layers)


def _common_den(a, b):
    d = lcm(a.den, b.den)
    fa, fb = d // a.den, d // b.den
    if fa != 1:
        a = KMat([l * fa for l in a.layers], d, a.N, normalize=False)
    if fb != 1:
        b = KMat([l * fb for l in b.layers], d, b.N, normalize=False)
    return a, b


def stack_rows(mats):
    mats = list(mats)
    N = 1
    for m in mats:
        N = lcm(N, m.N)
    mats = [m.lift(N) for m in mats]
    d = 1
    for m in mats:
        d = lcm(d, m.den)
    phi = euler_phi(N)
    layers = []
    for l in range(phi):
        layers.append(sp.vstack([m.layers[l] * (d // m.den) for m in mats], format="csr"))
    return KMat(layers, d, N)


def stack_cols(mats):
    return stack_rows([m.T for m in mats]).T


def _layer_product(a, b, op, inner=1):
    a, b = KMat.common(a, b)
    phi = a.phi
    bound = a.maxabs() * b.maxabs() * inner * phi * _table_max(a.N)
    if bound >= INT_LIMIT:
        raise OverflowError("exact product would exceed the int64 layer range")
    if phi == 1:
        return KMat([op(a.layers[0], b.layers[0])], a.den * b.den, a.N)
    partial = {}
    for i, la in enumerate(a.layers):
        if not la.nnz:
            continue
        for j, lb in enumerate(b.layers):
            if not lb.nnz:
                continue
            p = op(la, lb)
            partial[i + j] = partial[i + j] + p if (i + j) in partial else p
    tab = _table(a.N)
    shape = op(a.layers[0], b.layers[0]).shape
    out = [_csr(shape) for _ in range(phi)]
    for k, p in partial.items():
        row = tab[k]
        for l in range(phi):
            if row[l]:
                out[l] = out[l] + p * int(row[l])
    return KMat(out, a.den * b.den, a.N)


# ----------------------------------------------------------------------
# exact row reduction through the rational blow-up


@lru_cache(maxsize=None)
def _shift_tensor(n):
    """S[l, a, b]: coefficient b of z^(a + l)."""
    phi = euler_phi(n)
    tab = _table(n)
    S = np.zeros((phi, phi, phi), dtype=np.int64)
    for l in range(phi):
        for a in range(phi):
            S[l, a] = tab[a + l]
    return S


def _blowup_rows(M):
    """Rational rows spanning the Q-span of {z^l * row}: shape (m*phi, n*phi)."""
    D, den = M.to_int_dense()
    phi = M.phi
    m, n = M.shape
    if phi == 1:
        return D[0]
    S = _shift_tensor(M.N)
    out = np.einsum("lab,arc->rlcb", S, D)
    return out.reshape(m * phi, n * phi)


def _flint_rref(arr):
    """Exact rref of an integer array; returns (rows as lists of Fraction, pivots)."""
    if arr.size == 0 or not arr.any():
        return [], []
    mat = flint.fmpz_mat(arr.tolist())
    R, den, rank = mat.rref()
    den = int(den)
    piv = []
    table = R.tolist()
    rows = []
    for r in range(rank):
        vals = [int(x) for x in table[r]]
        p = next(i for i, v in enumerate(vals) if v)
        piv.append(p)
        rows.append((vals, den))
    return rows, piv


def rank(M):
    """Rank over Q(zeta_N)."""
    if M.shape[0] == 0 or M.is_zero():
        return 0
    B = _blowup_rows(M)
    r = flint.fmpz_mat(B.tolist()).rank()
    return r // M.phi


def rref(M):
    """Reduced row echelon form over Q(zeta_N) of the row space of M.

    Returns (R, pivots) with R a KMat whose rows are the nonzero rref rows.
    """
    m, n = M.shape
    phi, N = M.phi, M.N
    if m == 0 or M.is_zero():
        return KMat.zeros((0, n), N), ()
    B = _blowup_rows(M)
    rows, piv = _flint_rref(B)
    keep = [(r, p) for r, p in zip(rows, piv) if p % phi == 0]
    if len(keep) * phi != len(rows):
        raise LinAlgError("blown-up echelon form is not closed under the cyclotomic generator")
    kpiv = []
    ents = {}
    for i, ((vals, d), p) in enumerate(keep):
        kpiv.append(p // phi)
        for c in range(n):
            seg = vals[c * phi:(c + 1) * phi]
            if any(seg):
                ents[(i, c)] = Cyclo([Fraction(v, d) for v in seg], N)
    R = KMat.from_entries((len(keep), n), ents, N)
    return R, tuple(kpiv)


def kernel(M):
    """Right kernel {x : M x = 0} as a KMat whose rows form a basis (rref)."""
    m, n = M.shape
    R, piv = rref(M)
    free = [c for c in range(n) if c not in set(piv)]
    if not free:
        return KMat.zeros((0, n), M.N)
    # x_f = 1, x_p = -R[i, f]
    Rf = R.cols(free)  # rank x len(free)
    # basis vector for free f: e_f - sum_i R[i,f] e_{piv_i}
    E = KMat.from_entries((len(free), n), {(k, f): 1 for k, f in enumerate(free)}, M.N)
    P = KMat.from_entries((len(piv), n), {(i, p): 1 for i, p in enumerate(piv)}, M.N)
    K = E - Rf.T @ P
    Kr, _ = rref(K)
    return Kr


def inverse(M):
    n = M.shape[0]
    if M.shape[1] != n:
        raise LinAlgError("inverse of a non-square matrix")
    aug = M.hstack(KMat.identity(n, M.N))
    R, piv = rref(aug)
    if len(piv) != n or piv[-1] != n - 1:
        raise LinAlgError("matrix is singular")
    return R.cols(list(range(n, 2 * n)))


def solve_in_span(basis_rows, vecs_rows):
    """Coordinates X with X @ basis_rows = vecs_rows; raises if some vector is outside."""
    sub = Subspace(basis_rows)
    return sub.coords(vecs_rows)


# ----------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of K^n stored by its reduced row echelon basis."""

    __slots__ = ("ambient", "basis", "pivots", "N")

    def __init__(self, rows, ambient=None, echelon=False, pivots=None):
        if ambient is None:
            ambient = rows.shape[1]
        self.ambient = ambient
        self.N = rows.N
        if echelon:
            self.basis, self.pivots = rows, tuple(pivots)
        else:
            self.basis, self.pivots = rref(rows)

    @classmethod
    def zero(cls, n, N=1):
        return cls(KMat.zeros((0, n), N), n, echelon=True, pivots=())

    @classmethod
    def full(cls, n, N=1):
        return cls(KMat.identity(n, N), n, echelon=True, pivots=range(n))

    @classmethod
    def coordinate(cls, n, idx, N=1):
        idx = sorted(idx)
        rows = KMat.from_entries((len(idx), n), {(k, i): 1 for k, i in enumerate(idx)}, N)
        return cls(rows, n, echelon=True, pivots=idx)

    @property
    def dim(self):
        return len(self.pivots)

    def __len__(self):
        return self.dim

    def residual(self, vec_rows):
        """vec - projection along the echelon pivots; zero rows mean membership."""
        if self.dim == 0:
            return vec_rows
        a, b = KMat.common(vec_rows, self.basis)
        return a - a.cols(list(self.pivots)) @ b

    def contains(self, vec_rows):
        return self.residual(vec_rows).is_zero()

    def coords(self, vec_rows):
        if not self.contains(vec_rows):
            raise LinAlgError("vector is not in the subspace")
        return vec_rows.cols(list(self.pivots))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient != other.ambient or self.pivots != other.pivots:
            return False
        return self.basis == other.basis

    __hash__ = None

    def __le__(self, other):
        return other.contains(self.basis)

    def __add__(self, other):
        return Subspace(stack_rows([self.basis, other.basis]), self.ambient)

    def intersect(self, other):
        # x = a B1 = b B2  <=>  (a, -b) in left kernel of [B1; B2]
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient, lcm(self.N, other.N))
        S = stack_rows([self.basis, -other.basis])
        K = kernel(S.T)
        if K.shape[0] == 0:
            return Subspace.zero(self.ambient, S.N)
        return Subspace(K.cols(list(range(self.dim))) @ self.basis.lift(S.N), self.ambient)

    def lift(self, N):
        return Subspace(self.basis.lift(N), self.ambient, echelon=True, pivots=self.pivots)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, N={self.N})"


def span(vectors_rows):
    return Subspace(vectors_rows)


def span_rank_kernel(obj):
    """Span of row vectors (KMat) or, for an operator, (rank, kernel Subspace)."""
    if isinstance(obj, LinOp):
        K = kernel(obj.mat)
        return rank(obj.mat), Subspace(K, obj.mat.shape[1], echelon=True, pivots=_pivots_of(K))
    return Subspace(obj)


def _pivots_of(R):
    piv = []
    sup = R.support().tocsr()
    for i in range(R.shape[0]):
        cols = sup.indices[sup.indptr[i]:sup.indptr[i + 1]]
        piv.append(int(cols.min()))
    return piv


# ----------------------------------------------------------------------
# linear operators


class LinOp:
    """Exact linear operator, acting on column vectors."""

    __slots__ = ("mat",)

    def __init__(self, mat):
        self.mat = mat

    @property
    def shape(self):
        return self.mat.shape

    @classmethod
    def identity(cls, n, N=1):
        return cls(KMat.identity(n, N))

    def __call__(self, v):
        return self.mat @ v

    def __matmul__(self, other):
        if isinstance(other, LinOp):
            return LinOp(self.mat @ other.mat)
        return self.mat @ other

    def __add__(self, other):
        return LinOp(self.mat + other.mat)

    def __sub__(self, other):
        return LinOp(self.mat - other.mat)

    def __neg__(self):
        return LinOp(-self.mat)

    def scale(self, c):
        return LinOp(self.mat.scale(c))

    def bracket(self, other):
        return LinOp(self.mat @ other.mat - other.mat @ self.mat)

    def power(self, k):
        out = LinOp.identity(self.shape[0], self.mat.N)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other):
        return isinstance(other, LinOp) and self.mat == other.mat

    __hash__ = None

    def flat(self):
        """Row vector of the matrix entries, row-major (for span computations)."""
        m, n = self.shape
        return KMat([l.reshape((1, m * n)).tocsr() for l in self.mat.layers], self.mat.den, self.mat.N,
                    normalize=False)

    def __repr__(self):
        return f"LinOp{self.shape}"


def flat_ops(ops):
    return stack_rows([o.flat() for o in ops])


def unflat(row, n):
    return LinOp(KMat([l.reshape((n, n)).tocsr() for l in row.layers], row.den, row.N, normalize=False))


# ----------------------------------------------------------------------
# structure-constant algebras


class AlgebraSC:
    """Finite-dimensional algebra given by sparse structure constants.

    ``T`` has shape (dim, dim*dim) with T[k, i*dim + j] = c_ij^k, i.e.
    x_i x_j = sum_k c_ij^k x_k.
    """

    def __init__(self, name, labels, T, involution=None, unit=None, polar=None,
                 anticommutative=False, meta=None):
        self.name = name
        self.labels = list(labels)
        self.dim = len(self.labels)
        if T.shape != (self.dim, self.dim * self.dim):
            raise ValueError("structure tensor has the wrong shape")
        self.T = T
        self.N = T.N
        self.involution = involution
        self.unit = unit
        self.polar = polar
        self.anticommutative = anticommutative
        self.meta = dict(meta or {})
        self._ad_stack = None

    @classmethod
    def from_products(cls, name, labels, products, N=None, **kw):
        """products: dict (i, j) -> dict k -> coefficient."""
        n = len(labels)
        ent = {}
        for (i, j), out in products.items():
            for k, c in out.items():
                if c != 0:
                    ent[(k, i * n + j)] = c
        T = KMat.from_entries((n, n * n), ent, N)
        return cls(name, labels, T, **kw)

    @property
    def field_order(self):
        return self.N

    def lift(self, N):
        if N == self.N:
            return self
        return AlgebraSC(self.name, self.labels, self.T.lift(N),
                         None if self.involution is None else self.involution.lift(N),
                         None if self.unit is None else self.unit.lift(N),
                         None if self.polar is None else self.polar.lift(N),
                         self.anticommutative, self.meta)

    def basis_vector(self, i):
        return KMat.unit_vector(self.dim, i, self.N)

    def vector(self, coeffs):
        return KMat.column(coeffs, self.N)

    def multiply(self, x, y):
        if x.shape != (self.dim, 1) or y.shape != (self.dim, 1):
            raise ValueError("dimension mismatch in multiply")
        return self.T @ x.kron(y)

    def products(self, X, Y):
        """All products of columns: result column (p*len(Y)+q) = X_p Y_q."""
        return self.T @ X.kron(Y)

    def left(self, x):
        """L_x as a LinOp."""
        return LinOp(self.T @ x.kron(KMat.identity(self.dim, x.N)))

    def right(self, y):
        return LinOp(self.T @ KMat.identity(self.dim, y.N).kron(y))

    ad = left

    def basis_products_nonzero(self):
        """(i, j) pairs with x_i x_j != 0."""
        sup = self.T.support().tocoo()
        n = self.dim
        return set(zip((sup.col // n).tolist(), (sup.col % n).tolist()))

    def ad_stack(self):
        """A with A[m*dim + l, k] = c_kl^m: column k is the flattened L_{x_k}."""
        if self._ad_stack is None:
            n = self.dim
            layers = []
            for L in self.T.layers:
                coo = L.tocoo()
                k, l = coo.col // n, coo.col % n
                m = coo.row
                layers.append(_csr((n * n, n), m * n + l, k, coo.data))
            self._ad_stack = KMat(layers, self.T.den, self.N, normalize=False)
        return self._ad_stack

    def ad_matrix(self, i):
        """Matrix of L_{x_i}: columns j -> x_i x_j."""
        n = self.dim
        return self.T.cols(list(range(i * n, (i + 1) * n)))

    def right_matrix(self, j):
        n = self.dim
        return self.T.cols(list(range(j, n * n, n)))

    def change_basis(self, B, Binv=None, name=None, labels=None):
        """Structure constants in the basis given by the columns of B."""
        if Binv is None:
            Binv = inverse(B)
        B, Binv = KMat.common(B, Binv)
        T = self.T.lift(B.N) if B.N % self.N == 0 else self.T
        T, B = KMat.common(T, B)
        Binv = Binv.lift(B.N)
        newT = Binv @ (T @ B.kron(B))
        inv = None
        if self.involution is not None:
            inv = Binv @ (self.involution.lift(B.N) @ B)
        unit = None
        if self.unit is not None:
            unit = Binv @ self.unit.lift(B.N)
        polar = None
        if self.polar is not None:
            polar = B.T @ (self.polar.lift(B.N) @ B)
        return AlgebraSC(name or self.name, labels or [f"b{i}" for i in range(self.dim)], newT, inv,
                         unit, polar, self.anticommutative, self.meta)

    def is_anticommutative(self):
        n = self.dim
        perm = np.arange(n * n).reshape(n, n).T.reshape(-1)
        swapped = self.T.cols(perm)
        return (self.T + swapped).is_zero()

    def check_involution(self):
        """sigma^2 = id and sigma(xy) = sigma(y) sigma(x) on basis pairs."""
        s = self.involution
        if s is None:
            return True
        n = self.dim
        if not (s @ s == KMat.identity(n, s.N)):
            return False
        lhs = s.lift(self.N) @ self.T if s.N == self.N else (s @ self.T)
        perm = np.arange(n * n).reshape(n, n).T.reshape(-1)
        rhs = (self.T @ s.kron(s)).cols(perm)
        return lhs == rhs

    def check_unit(self):
        if self.unit is None:
            return False
        I = KMat.identity(self.dim, self.N)
        return self.left(self.unit).mat == I and self.right(self.unit).mat == I

    def to_json(self):
        n = self.dim
        ent = self.T.entries()
        mul = sorted((c // n, c % n, k, _scalar_str(v)) for (k, c), v in ent.items())
        out = {"name": self.name, "dim": n, "field_order": self.N, "basis": self.labels,
               "mul": [list(t) for t in mul]}
        if self.involution is not None:
            out["involution"] = [[r, c, _scalar_str(v)] for (r, c), v in sorted(self.involution.entries().items())]
        else:
            out["involution"] = None
        if self.unit is not None:
            out["unit"] = [[r, _scalar_str(v)] for (r, _), v in sorted(self.unit.entries().items())]
        else:
            out["unit"] = None
        return out

    @classmethod
    def from_json(cls, data):
        n, N = data["dim"], data["field_order"]
        ent = {(k, i * n + j): _scalar_parse(v) for i, j, k, v in data["mul"]}
        T = KMat.from_entries((n, n * n), ent, N)
        inv = unit = None
        if data.get("involution") is not None:
            inv = KMat.from_entries((n, n), {(r, c): _scalar_parse(v) for r, c, v in data["involution"]}, N)
        if data.get("unit") is not None:
            unit = KMat.from_entries((n, 1), {(r, 0): _scalar_parse(v) for r, v in data["unit"]}, N)
        return cls(data["name"], data["basis"], T, inv, unit)

    def __repr__(self):
        return f"AlgebraSC({self.name!r}, dim={self.dim}, N={self.N})"


def _scalar_str(v):
    if v.is_rational():
        return str(v.to_fraction())
    return v.to_json()


def _scalar_parse(v):
    if isinstance(v, dict):
        return Cyclo.from_json(v)
    return Fraction(v)


def multiply(A, x, y):
    return A.multiply(x, y)


def tensor(A, B, name=None):
    """(a (x) b)(c (x) d) = ac (x) bd; involution and unit tensor when present."""
    TA, TB = KMat.common(A.T, B.T)
    n, m = A.dim, B.dim
    # index (a, b) -> a*m + b; T[(k,l), (i,j),(p,q)] = A[k,i,p] B[l,j,q]
    AT = _split_tensor(TA, n)
    BT = _split_tensor(TB, m)
    ent = {}
    for (k, i, p), c in AT.items():
        for (l, j, q), d in BT.items():
            ent[(k * m + l, (i * m + j) * (n * m) + (p * m + q))] = c * d
    T = KMat.from_entries((n * m, (n * m) ** 2), ent, TA.N)
    labels = [f"{a}*{b}" for a in A.labels for b in B.labels]
    inv = None
    if A.involution is not None and B.involution is not None:
        inv = A.involution.kron(B.involution)
    unit = None
    if A.unit is not None and B.unit is not None:
        unit = A.unit.kron(B.unit)
    return AlgebraSC(name or f"{A.name}(x){B.name}", labels, T, inv, unit)


def _split_tensor(T, n):
    out = {}
    for (k, c), v in T.entries().items():
        out[(k, c // n, c % n)] = v
    return out


# ----------------------------------------------------------------------
# simultaneous eigenspaces


def simultaneous_eigenspaces(ops, eigenvalue_lists, space=None):
    """Joint eigenspace decomposition of commuting diagonalizable operators.

    Returns a list of (eigenvalue tuple, Subspace) with nonzero components.
    """
    ops = [o.mat if isinstance(o, LinOp) else o for o in ops]
    if not ops:
        raise ValueError("no operators given")
    n = ops[0].shape[0]
    N = 1
    for o in ops:
        N = lcm(N, o.N)
    for vals in eigenvalue_lists:
        for v in vals:
            N = lcm(N, _as_cyclo(v).order)
    ops = [o.lift(N) for o in ops]
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            if not (ops[a] @ ops[b] == ops[b] @ ops[a]):
                raise LinAlgError(f"operators {a} and {b} do not commute")
    for o, vals in zip(ops, eigenvalue_lists):
        P = KMat.identity(n, N)
        for v in vals:
            P = P @ (o - KMat.identity(n, N).scale(v))
        if not P.is_zero():
            raise LinAlgError("operator is not annihilated by the product of (t - lambda)")
    comps = [((), space if space is not None else Subspace.full(n, N))]
    for o, vals in zip(ops, eigenvalue_lists):
        nxt = []
        for key, W in comps:
            B = W.basis.lift(N)
            # restriction of o to W in the echelon coordinates
            img = (o @ B.T).T
            R = img.cols(list(W.pivots))  # rows: coords of o(w_i)
            for v in vals:
                M = (R - KMat.identity(W.dim, N).scale(v)).T
                K = kernel(M)
                if K.shape[0]:
                    nxt.append((key + (_as_cyclo(v),), Subspace(K @ B, n)))
        comps = nxt
    total = sum(W.dim for _, W in comps)
    if total != (space.dim if space is not None else n):
        raise LinAlgError("eigenspaces do not exhaust the space")
    return comps


# ----------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M):
    """Smith normal form of an integer matrix (list of lists).

    Returns (diag, P, Q) with P M Q = D, P and Q unimodular, and the
    nonzero invariant factors positive with d_1 | d_2 | ...; ``diag``
    has length min(rows, cols) and lists D's diagonal.
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    P = [[int(i == j) for j in range(m)] for i in range(m)]
    Q = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        if c:
            A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
            P[dst] = [x + c * y for x, y in zip(P[dst], P[src])]

    def add_col(src, dst, c):
        if c:
            for row in A:
                row[dst] += c * row[src]
            for row in Q:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
                    if abs(A[i][j]) == 1:
                        break
            if best is not None and abs(A[best[0]][best[1]]) == 1:
                break
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if done:
                # divisibility condition on the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % A[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest entry of row/col t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            P[t] = [-x for x in P[t]]
        t += 1
    diag = [A[i][i] for i in range(min(m, n))]
    return diag, P, Q


def invariant_factors(moduli):
    """Invariant factors (d_1 | d_2 | ...) of a diagonal group, units dropped."""
    k = len(moduli)
    if not k:
        return []
    D = [[moduli[i] if i == j else 0 for j in range(k)] for i in range(k)]
    diag, _, _ = smith_normal_form(D)
    return [d for d in diag if d != 1]


def kernel_certified(M, seed=0, extra=8, tries=3):
    """Right kernel of a tall matrix through a random row compression.

    ker(R M) contains ker(M) for any R; the candidate basis is then
    checked against M itself, so a returned basis is always exact.
    """
    m, n = M.shape
    if m <= 2 * n + extra:
        return kernel(M)
    rng = np.random.default_rng(seed)
    for t in range(tries):
        k = n + extra * (t + 1)
        # sparse sketch: every equation lands in three random buckets
        cols = np.repeat(np.arange(m), 3)
        rows = rng.integers(0, k, size=3 * m)
        vals = rng.choice(np.array([-2, -1, 1, 2]), size=3 * m)
        R = KMat([sp.coo_array((vals, (rows, cols)), shape=(k, m)).tocsr()] +
                 [_csr((k, m)) for _ in range(euler_phi(M.N) - 1)], 1, M.N)
        K = kernel(R @ M)
        if K.shape[0] == 0 or (M.lift(K.N) @ K.T).is_zero():
            return K
    return kernel(M)


def left_inverse(B):
    """L with L @ B = I for a matrix B of full column rank."""
    R, piv = rref(B.T)
    if len(piv) != B.shape[1]:
        raise LinAlgError("columns are linearly dependent")
    rows = list(piv)
    Binv = inverse(B.rows(rows))
    S = KMat.from_entries((len(rows), B.shape[0]), {(k, r): 1 for k, r in enumerate(rows)}, B.N)
    return Binv @ S


def coords_in_columns(B, V, L=None):
    """X with B X = V; raises if some column of V is outside the column span of B."""
    if L is None:
        L = left_inverse(B)
    X = L @ V
    if not (B @ X == V):
        raise LinAlgError("vector is not in the column span")
    return X


def commutator_algebra(ambient, basis, name, labels=None):
    """The subspace spanned by the columns of ``basis`` under [x, y] = xy - yx."""
    d = basis.shape[1]
    P = ambient.products(basis, basis)
    perm = np.arange(d * d).reshape(d, d).T.reshape(-1)
    T = coords_in_columns(basis, P - P.cols(perm))
    return AlgebraSC(name, labels or [f"k{i}" for i in range(d)], T, anticommutative=True)


# ----------------------------------------------------------------------
# modular screening (results are always re-verified exactly by callers)


@lru_cache(maxsize=None)
def modular_prime(N):
    """(p, r): a prime p < 2^31 with p = 1 mod N and r of multiplicative order N mod p."""
    k = (2 ** 31 - 1) // N
    while True:
        p = k * N + 1
        if p < 2 ** 31 and flint.fmpz(p).is_prime():
            for g in range(2, 200):
                r = pow(g, (p - 1) // N, p)
                if all(pow(r, N // q, p) != 1 for q in _prime_factors(N)):
                    return p, r
        k -= 1


def _prime_factors(n):
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


def to_modp(M, p=None):
    """Dense int64 image of M under z -> r in F_p; returns (array, p)."""
    q, r = modular_prime(M.N)
    if p is None:
        p = q
    elif p != q:
        raise ValueError("screening prime does not match the field")
    out = np.zeros(M.shape, dtype=np.int64)
    rl = 1
    for l, L in enumerate(M.layers):
        if L.nnz:
            out = (out + (L.toarray() % p) * rl) % p
        rl = rl * r % p
    if M.den % p == 0:
        raise LinAlgError("denominator divisible by the screening prime")
    return out * pow(M.den, -1, p) % p, p


def independent_rows_modp(M, seed=0, sketch=256):
    """Indices of rows of M that are independent mod p and span the row space mod p.

    Columns are first compressed by a random sketch when M is wide.
    """
    A, p = to_modp(M)
    return _independent_rows(A, p, seed, sketch)


def _independent_rows(A, p, seed=0, sketch=256):
    while True:
        rows = _independent_rows_once(A, p, seed, sketch)
        # a full sketch may have hidden further independent rows
        if len(rows) < sketch or sketch >= A.shape[1]:
            return rows
        sketch *= 2


def _independent_rows_once(A, p, seed, sketch):
    m, n = A.shape
    if n > sketch:
        rng = np.random.default_rng(seed)
        S = rng.integers(-1, 2, size=(n, sketch)).astype(np.float64)
        # entries below 2^31 times a +-1 sketch: sums stay far below 2^53, so float64 is exact
        if n * p >= 2 ** 53:
            raise LinAlgError("matrix too wide for the exact float sketch")
        A = np.rint(A.astype(np.float64) @ S).astype(np.int64) % p
    A = A.copy()
    rows = []
    alive = np.ones(m, dtype=bool)
    for c in range(A.shape[1]):
        cand = np.nonzero(alive & (A[:, c] != 0))[0]
        if not len(cand):
            continue
        r = int(cand[0])
        rows.append(r)
        alive[r] = False
        inv = pow(int(A[r, c]), -1, p)
        piv = A[r] * inv % p
        others = np.nonzero(alive & (A[:, c] != 0))[0]
        if len(others):
            A[others] = (A[others] - np.outer(A[others, c], piv) % p) % p
    return sorted(rows)


def _matmul_modp(A, B, p):
    """A @ B mod p for int64 arrays with entries in [0, p), p < 2^31."""
    # split B into 16-bit halves so that partial sums stay below 2^63
    lo = B & 0xFFFF
    hi = B >> 16
    k = A.shape[1]
    out_lo = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    out_hi = np.zeros_like(out_lo)
    step = max(1, min(k, (2 ** 63 - 1) // (p * 0xFFFF) - 1))
    for s in range(0, k, step):
        out_lo = (out_lo + A[:, s:s + step] @ lo[s:s + step]) % p
        out_hi = (out_hi + A[:, s:s + step] @ hi[s:s + step]) % p
    return (out_lo + out_hi * 65536) % p


def fast_span(M, seed=0):
    """Exact row space of M, with the spanning rows chosen by modular screening.

    Returns (Subspace, chosen row indices); falls back to full reduction if
    the screened rows do not span.
    """
    if M.shape[0] == 0:
        return Subspace.zero(M.shape[1], M.N), []
    rows = independent_rows_modp(M, seed)
    W = Subspace(M.rows(rows), M.shape[1])
    if W.dim == len(rows) and W.contains(M):
        return W, rows
    return Subspace(M, M.shape[1]), None


# ----------------------------------------------------------------------
# exact dense integer contractions


def dense_rational(M):
    """(int64 array, den) for a rational KMat."""
    if not M.is_rational():
        raise CycloError("dense integer view needs a rational matrix")
    return M.layers[0].toarray(), M.den


def exact_tensordot(a, b, axes):
    """tensordot of int64 arrays, through float64 BLAS when every partial sum stays below 2^53."""
    a_ax, b_ax = axes
    a_ax = [a_ax] if isinstance(a_ax, int) else list(a_ax)
    b_ax = [b_ax] if isinstance(b_ax, int) else list(b_ax)
    k = 1
    for ax in a_ax:
        k *= a.shape[ax]
    ma = int(np.abs(a).max()) if a.size else 0
    mb = int(np.abs(b).max()) if b.size else 0
    bound = ma * mb * k
    if bound < 2 ** 53:
        out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=(a_ax, b_ax))
        return np.rint(out).astype(np.int64)
    if bound < 2 ** 62:
        return np.tensordot(a, b, axes=(a_ax, b_ax))
    raise OverflowError("dense contraction exceeds the int64 range")


def dense_row_basis(A, seed=0, sketch=256):
    """Row basis of an integer array with exact coordinates of every row.

    Returns (rows, G, g): A[rows] is a basis of the row space and
    A = (G / g) @ A[rows], checked exactly.
    """
    A = np.asarray(A, dtype=np.int64)
    p, _ = modular_prime(1)
    rows = _independent_rows(A % p, p, seed, max(sketch, 1))
    d = len(rows)
    if d == 0:
        return [], np.zeros((A.shape[0], 0), dtype=np.int64), 1
    B = A[rows]
    cols = _independent_rows((B.T % p), p, seed + 1, max(sketch, 1))
    if len(cols) != d:
        raise LinAlgError("screened rows are dependent")
    M0 = flint.fmpq_mat(flint.fmpz_mat(B[:, cols].tolist())).inv()
    g = 1
    for i in range(d):
        for j in range(d):
            g = lcm(g, int(M0[i, j].q))
    Xi = flint.fmpz_mat(d, d, [int(M0[i, j] * g) for i in range(d) for j in range(d)])
    Gf = flint.fmpz_mat(A[:, cols].tolist()) * Xi
    G = _fmpz_to_array(Gf)
    if abs(g) >= 2 ** 62 or not np.array_equal(exact_tensordot(G, B, (1, 0)), A * g):
        raise LinAlgError("screened rows do not span the row space")
    return rows, G, g


def _fmpz_to_array(M):
    vals = [int(v) for v in M.entries()]
    if vals and max(abs(v) for v in vals) >= 2 ** 62:
        raise OverflowError("coordinates exceed the int64 range")
    return np.array(vals, dtype=np.int64).reshape(M.nrows(), M.ncols())


def dense_solve(U, V):
    """(X, g) with U @ X = g * V exactly, for an integer U of full column rank.

    Raises LinAlgError when some column of V is outside the column span of U.
    """
    U = np.asarray(U, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    r = U.shape[1]
    if r == 0:
        if np.any(V):
            raise LinAlgError("vector is not in the column span")
        return np.zeros((0, V.shape[1]), dtype=np.int64), 1
    p, _ = modular_prime(1)
    rows = _independent_rows(U % p, p)
    if len(rows) != r:
        raise LinAlgError("columns are dependent modulo the screening prime")
    M0 = flint.fmpq_mat(flint.fmpz_mat(U[rows].tolist())).inv()
    g = 1
    for i in range(r):
        for j in range(r):
            g = lcm(g, int(M0[i, j].q))
    Xi = flint.fmpz_mat(r, r, [int(M0[i, j] * g) for i in range(r) for j in range(r)])
    X = _fmpz_to_array(Xi * flint.fmpz_mat(V[rows].tolist()))
    if abs(g) >= 2 ** 62 or not np.array_equal(exact_tensordot(U, X, (1, 0)), V * g):
        raise LinAlgError("vector is not in the column span")
    return X, g


def dense_structure(A):
    """(c, den): int64 array with x_i x_j = sum_k c[k, i, j] / den x_k (rational algebras)."""
    if not A.T.is_rational():
        raise CycloError("dense structure constants need a rational algebra")
    T, den = A.T.to_int_dense()
    n = A.dim
    return T[0].reshape(n, n, n), den


def dense_products(c, U, W=None):
    """P[:, p, q] = sum c[:, k, l] U[k, p] W[l, q] for integer arrays (exact)."""
    W = U if W is None else W
    M = exact_tensordot(c, U, (1, 0))  # [m, l, p]
    return exact_tensordot(M, W, (1, 0))  # [m, p, q]


def subalgebra_dense(A, U, name=None, labels=None):
    """Structure constants of A restricted to the span of the integer columns of U."""
    c, den = dense_structure(A)
    r = U.shape[1]
    P = dense_products(c, U).reshape(A.dim, r * r)
    X, g = dense_solve(U, P)
    T = KMat.from_int_dense(X, g * den)
    return AlgebraSC(name or f"sub({A.name})", labels or [f"s{i}" for i in range(r)], T,
                     anticommutative=A.anticommutative)


def derived_basis(A):
    """Integer columns spanning A^2 = span{x_i x_j}, chosen among the products themselves."""
    c, _ = dense_structure(A)
    n = A.dim
    Tm = c.reshape(n, n * n)
    p, _ = modular_prime(1)
    idx = _independent_rows(Tm.T % p, p)
    return Tm[:, idx], [divmod(i, n) for i in idx]


# ----------------------------------------------------------------------
# kernels through modular reduction and rational reconstruction


def _primes_below(bound, count):
    out, p = [], bound
    while len(out) < count:
        p = _prev_prime(p)
        out.append(p)
    return out


def _prev_prime(p):
    q = p - 1
    while not flint.fmpz(q).is_prime():
        q -= 1
    return q


def rational_reconstruction(a, m):
    """r/s = a mod m with |r|, |s| <= sqrt(m/2), or None."""
    a %= m
    bound = int((m // 2) ** 0.5)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return Fraction(r1, s1)


def _kernel_mod(Mp, p, n):
    """Kernel mod p in canonical form: the rows of the reduced echelon kernel basis."""
    X, nul = flint.nmod_mat(Mp.tolist(), p).nullspace()
    if nul == 0:
        return (), np.zeros((0, n), dtype=object)
    K = flint.nmod_mat(nul, n, [int(X[j, i]) for i in range(nul) for j in range(n)], p)
    R, rk = K.rref()
    out = np.array([[int(R[i, j]) for j in range(n)] for i in range(rk)], dtype=object)
    piv = tuple(int(np.nonzero(out[i] != 0)[0][0]) for i in range(rk))
    return piv, out


def kernel_modular(M, seed=0, max_primes=6):
    """Exact right kernel of a rational KMat through modular RREF.

    The kernel dimension modulo p bounds the rational one from above; the
    reconstructed vectors are checked exactly, so a returned basis is the
    whole kernel.
    """
    if M.N != 1:
        raise CycloError("modular kernels are implemented over the rationals")
    m, n = M.shape
    if m == 0:
        return KMat.identity(n)
    rng = np.random.default_rng(seed)
    L = M.layers[0].tocsr()
    k = min(m, n + 32)
    if m > k:
        cols = np.repeat(np.arange(m), 3)
        rows = rng.integers(0, k, size=3 * m)
        vals = rng.choice(np.array([-2, -1, 1, 2]), size=3 * m)
        Rs = sp.coo_array((vals, (rows, cols)), shape=(k, m)).tocsr()
    else:
        Rs = None
    primes = _primes_below(2 ** 31, max_primes)
    acc, modulus, shape = None, 1, None
    for p in primes:
        if M.den % p == 0:
            continue
        Lp = L.copy()
        Lp.data = Lp.data % p
        Mp = (Rs @ Lp) if Rs is not None else Lp
        Mp = Mp.toarray() % p
        piv, K = _kernel_mod(Mp, p, n)
        if shape is not None and piv != shape:
            if len(piv) > len(shape):
                continue  # unlucky prime: kernel too big
            acc, modulus = None, 1
        shape = piv
        if acc is None:
            acc, modulus = K, p
        else:
            # CRT entrywise
            inv = pow(modulus, -1, p)
            acc = acc + ((K - acc) * inv % p) * modulus
            modulus *= p
            acc = acc % modulus
        rec = np.vectorize(lambda a: rational_reconstruction(int(a), modulus), otypes=[object])(acc)
        if any(v is None for v in rec.reshape(-1)):
            continue
        if not len(piv):
            return KMat.zeros((0, n))
        cand = KMat.from_entries((len(piv), n), {(i, j): v for (i, j), v in np.ndenumerate(rec) if v != 0})
        if (M @ cand.T).is_zero():
            return cand
    raise LinAlgError("modular kernel did not stabilize")


# ----------------------------------------------------------------------
# dense arrays over Q(zeta_N)


@lru_cache(maxsize=None)
def _zeta_power(N, e):
    """Integer coordinates of zeta_N^e in the power basis."""
    phi = euler_phi(N)
    r = flint.fmpz_poly([0] * (e % N) + [1]) % flint.fmpz_poly.cyclotomic(N)
    c = [int(x) for x in r.coeffs()]
    return np.array(c + [0] * (phi - len(c)), dtype=np.int64)


def _einsum_bound(spec, arrays):
    ins, out = spec.split("->")
    ins = ins.split(",")
    sizes = {}
    for s, a in zip(ins, arrays):
        for ch, k in zip(s, a.shape):
            sizes[ch] = k
    inner = 1
    for ch, k in sizes.items():
        if ch not in out:
            inner *= k
    b = inner
    for a in arrays:
        b *= int(np.abs(a).max()) if a.size else 0
    return b


def int_einsum(spec, *arrays):
    """np.einsum on int64 arrays with an exactness guarantee."""
    bound = _einsum_bound(spec, arrays)
    if bound < 2 ** 53:
        out = np.einsum(spec, *[a.astype(np.float64) for a in arrays], optimize=True)
        return np.rint(out).astype(np.int64)
    if bound < INT_LIMIT:
        return np.einsum(spec, *arrays, optimize=True)
    raise OverflowError("dense contraction exceeds the int64 range")


class CArr:
    """Dense array over Q(zeta_N): a[l] is the coefficient array of zeta^l, all over ``den``."""

    __slots__ = ("a", "den", "N")

    def __init__(self, a, den=1, N=1, reduce=True):
        a = np.asarray(a, dtype=np.int64)
        if a.shape[0] != euler_phi(N):
            raise ValueError("layer axis does not match phi(N)")
        if den < 0:
            a, den = -a, -den
        self.a, self.den, self.N = a, int(den), N
        if reduce and self.den != 1:
            g = gcd(self.den, int(np.gcd.reduce(np.abs(a).ravel()))) if a.size else self.den
            if g > 1:
                self.a = a // g
                self.den //= g

    @classmethod
    def rational(cls, arr, den=1):
        return cls(np.asarray(arr, dtype=np.int64)[None], den, 1)

    @classmethod
    def zeros(cls, shape, N=1):
        return cls(np.zeros((euler_phi(N),) + tuple(shape), dtype=np.int64), 1, N)

    @classmethod
    def from_kmat(cls, M):
        D, den = M.to_int_dense()
        return cls(D, den, M.N)

    @classmethod
    def from_scalars(cls, values, N=None):
        """Nested list / object array of Fraction, int or Cyclo entries."""
        obj = np.asarray(values, dtype=object)
        flat = [_as_cyclo(v) for v in obj.ravel()]
        if N is None:
            N = 1
            for v in flat:
                N = lcm(N, v.order)
        flat = [v.lift(N) for v in flat]
        phi = euler_phi(N)
        den = 1
        for v in flat:
            for c in v.coeffs:
                den = lcm(den, Fraction(c).denominator)
        a = np.zeros((phi, len(flat)), dtype=object)
        for k, v in enumerate(flat):
            for l, c in enumerate(v.coeffs):
                a[l, k] = int(Fraction(c) * den)
        return cls(a.astype(np.int64).reshape((phi,) + obj.shape), den, N)

    @property
    def shape(self):
        return self.a.shape[1:]

    @property
    def phi(self):
        return self.a.shape[0]

    def lift(self, N):
        if N == self.N:
            return self
        if N % self.N:
            raise CycloError(f"cannot lift order {self.N} to {N}")
        step = N // self.N
        out = np.zeros((euler_phi(N),) + self.shape, dtype=np.int64)
        for l in range(self.phi):
            if np.any(self.a[l]):
                out += np.multiply.outer(_zeta_power(N, l * step), self.a[l])
        return CArr(out, self.den, N, reduce=False)

    @staticmethod
    def common(*xs):
        N = 1
        for x in xs:
            N = lcm(N, x.N)
        return [x.lift(N) for x in xs]

    def __add__(self, other):
        x, y = CArr.common(self, other)
        d = lcm(x.den, y.den)
        fx, fy = d // x.den, d // y.den
        if (x.maxabs() * fx + y.maxabs() * fy) >= INT_LIMIT:
            raise OverflowError("sum exceeds the int64 range")
        return CArr(x.a * fx + y.a * fy, d, x.N)

    def __neg__(self):
        return CArr(-self.a, self.den, self.N, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _as_cyclo(c)
        if c.order == 1:
            f = Fraction(c.coeffs[0]) if c.coeffs else Fraction(0)
            if self.maxabs() * abs(f.numerator) >= INT_LIMIT:
                raise OverflowError("scaling exceeds the int64 range")
            return CArr(self.a * f.numerator, self.den * f.denominator, self.N)
        return ceinsum("...,->...", self, CArr.from_scalars(c))

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return CArr(self.a[(slice(None),) + idx], self.den, self.N, reduce=False)

    def transpose(self, *axes):
        return CArr(self.a.transpose(0, *[x + 1 for x in axes]), self.den, self.N, reduce=False)

    def reshape(self, *shape):
        return CArr(self.a.reshape((self.phi,) + tuple(shape)), self.den, self.N, reduce=False)

    def maxabs(self):
        return int(np.abs(self.a).max()) if self.a.size else 0

    def is_zero(self):
        return not np.any(self.a)

    def __eq__(self, other):
        return (self - other).is_zero()

    def to_kmat(self):
        if len(self.shape) != 2:
            raise ValueError("only matrices convert to KMat")
        return KMat.from_int_dense(self.a, self.den, self.N)

    def entry(self, *idx):
        coeffs = [Fraction(int(self.a[(l,) + idx]), self.den) for l in range(self.phi)]
        return Cyclo._raw(flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in coeffs]), self.N) \
            if self.N > 1 else coeffs[0]

    def __repr__(self):
        return f"CArr(shape={self.shape}, N={self.N}, den={self.den})"


def cstack(arrs, axis=0):
    arrs = CArr.common(*arrs)
    d = 1
    for x in arrs:
        d = lcm(d, x.den)
    parts = [x.a * (d // x.den) for x in arrs]
    return CArr(np.stack(parts, axis=axis + 1), d, arrs[0].N)


def cconcat(arrs, axis=0):
    arrs = CArr.common(*arrs)
    d = 1
    for x in arrs:
        d = lcm(d, x.den)
    parts = [x.a * (d // x.den) for x in arrs]
    return CArr(np.concatenate(parts, axis=axis + 1), d, arrs[0].N)


def ceinsum(spec, *xs):
    """Exact einsum over Q(zeta_N); layer products are reduced with powers of zeta."""
    xs = CArr.common(*xs)
    N = xs[0].N
    phi = xs[0].phi
    den = 1
    for x in xs:
        den *= x.den
    if phi == 1:
        return CArr(int_einsum(spec, *[x.a[0] for x in xs])[None], den, 1)
    partial = {}
    layers = [[l for l in range(phi) if np.any(x.a[l])] for x in xs]
    import itertools
    for combo in itertools.product(*layers):
        p = int_einsum(spec, *[x.a[l] for x, l in zip(xs, combo)])
        e = sum(combo)
        partial[e] = partial[e] + p if e in partial else p
    out = None
    for e, p in partial.items():
        z = _zeta_power(N, e)
        if int(np.abs(z).max()) * (int(np.abs(p).max()) if p.size else 0) * len(partial) >= INT_LIMIT:
            raise OverflowError("cyclotomic reduction exceeds the int64 range")
        t = np.multiply.outer(z, p)
        out = t if out is None else out + t
    if out is None:
        shape = int_einsum(spec, *[x.a[0] for x in xs]).shape
        out = np.zeros((phi,) + shape, dtype=np.int64)
    return CArr(out, den, N)


def _blowup_matrix(U):
    """Rational matrix of X -> U X on the layer coordinates of X (U over Q(zeta_N))."""
    phi, m, r = U.a.shape
    M = np.zeros((phi, m, phi, r), dtype=np.int64)
    for p in range(phi):
        for q in range(phi):
            if np.any(U.a[q]):
                z = _zeta_power(U.N, p + q)
                M[:, :, p, :] += np.multiply.outer(z, U.a[q])
    return M.reshape(phi * m, phi * r)


def csolve(U, V):
    """X with U @ X = V exactly (U of full column rank); raises LinAlgError otherwise."""
    U, V = CArr.common(U, V)
    phi = U.phi
    m, r = U.shape
    c = V.shape[1]
    if phi == 1:
        X, g = dense_solve(U.a[0], V.a[0])
        return CArr(X[None] * U.den, g * V.den, 1)
    M = _blowup_matrix(U)
    rhs = V.a.reshape(phi * m, c)
    X, g = dense_solve(M, rhs)
    return CArr(X.reshape(phi, r, c) * U.den, g * V.den, U.N)


def crow_basis(A):
    """Indices of rows of a CArr matrix forming a basis of its row space over Q(zeta_N)."""
    if A.phi == 1:
        rows, _, _ = dense_row_basis(A.a[0])
        return list(rows)
    K = A.to_kmat()
    _, piv = rref(K.T)
    return list(piv)


def ckernel(M):
    """Rows spanning the right kernel of a CArr matrix, as a CArr."""
    K = M.to_kmat()
    if K.N == 1 and K.shape[1] > 60:
        ker = kernel_modular(K)
    else:
        ker = kernel(K)
    if ker.shape[0] == 0:
        return CArr.zeros((0, M.shape[1]), M.N)
    return CArr.from_kmat(ker.lift(M.N))
