"""Abelian groups, gradings, types, refinements and universal groups.

A grading is stored as a homogeneous basis of the target algebra (the
columns of a KMat, or the natural basis when none is given) together
with one degree per basis vector.  Checking compatibility then reduces
to reading off the support of the structure constants in that basis.
"""

from collections import Counter, defaultdict

import numpy as np

from .algcore import KMat, LinAlgError, Subspace, inverse, kernel, smith_normal_form, stack_cols, \
    stack_rows, invariant_factors
from .scalars import lcm, root_of_unity


class GradingError(ValueError):
    pass


class AbGroup:
    """Z^r x Z_{m_1} x ... x Z_{m_k}; elements are integer tuples."""

    def __init__(self, free_rank=0, torsion=()):
        self.free_rank = int(free_rank)
        self.torsion = tuple(int(m) for m in torsion)
        if any(m < 2 for m in self.torsion):
            raise ValueError("torsion moduli must be at least 2")

    @classmethod
    def parse(cls, text):
        """Parse labels such as 'Z^2xZ_2^3', 'Z4^3', 'Z_6^3', 'Z x Z_4^3'."""
        free, tors = 0, []
        s = text.replace(" ", "").replace("×", "x")
        for part in s.split("x"):
            if not part:
                continue
            base, _, exp = part.partition("^")
            k = int(exp) if exp else 1
            base = base.replace("_", "")
            if base == "Z":
                free += k
            else:
                tors += [int(base[1:])] * k
        return cls(free, tors)

    @property
    def rank(self):
        return self.free_rank + len(self.torsion)

    @property
    def moduli(self):
        return (0,) * self.free_rank + self.torsion

    def invariant_factors(self):
        return tuple(invariant_factors(list(self.torsion)))

    def __eq__(self, other):
        if not isinstance(other, AbGroup):
            return NotImplemented
        return self.free_rank == other.free_rank and self.invariant_factors() == other.invariant_factors()

    def __hash__(self):
        return hash((self.free_rank, self.invariant_factors()))

    def zero(self):
        return (0,) * self.rank

    def reduce(self, x):
        return tuple(v % m if m else v for v, m in zip(x, self.moduli))

    def add(self, a, b):
        return self.reduce(tuple(x + y for x, y in zip(a, b)))

    def neg(self, a):
        return self.reduce(tuple(-x for x in a))

    def product(self, other):
        return AbGroup(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def label(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for m, k in sorted(Counter(self.torsion).items()):
            parts.append(f"Z_{m}" if k == 1 else f"Z_{m}^{k}")
        return "x".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __repr__(self):
        return f"AbGroup({self.label()})"


def join_degree(group_a, a, group_b, b):
    """Degree in the product group, free parts first then torsion."""
    fa, fb = group_a.free_rank, group_b.free_rank
    return tuple(a[:fa]) + tuple(b[:fb]) + tuple(a[fa:]) + tuple(b[fb:])


def product_group(a, b):
    return AbGroup(a.free_rank + b.free_rank, a.torsion + b.torsion)


class Grading:
    """A grading of ``algebra`` by ``group``.

    ``basis`` holds homogeneous vectors as columns (natural coordinates);
    ``degrees[c]`` is the degree of column c.
    """

    def __init__(self, algebra, group, degrees, basis=None, name=None, declared=None, flags=(), Binv=None):
        self.algebra = algebra
        self.group = group
        self.degrees = [group.reduce(tuple(d)) for d in degrees]
        if len(self.degrees) != algebra.dim:
            raise GradingError("one degree per basis vector is required")
        self.basis = basis
        self.name = name or algebra.name
        self.declared = dict(declared or {})
        self.flags = set(flags)
        self._Binv = Binv
        self._homog = None

    # components

    def components(self):
        comps = defaultdict(list)
        for i, d in enumerate(self.degrees):
            comps[d].append(i)
        return dict(comps)

    def support(self):
        return sorted(self.components())

    def component(self, degree):
        """Subspace (natural coordinates) of the given degree."""
        idx = self.components().get(self.group.reduce(degree), [])
        n = self.algebra.dim
        if not idx:
            return Subspace.zero(n, self.algebra.N)
        if self.basis is None:
            return Subspace.coordinate(n, idx, self.algebra.N)
        return Subspace(self.basis.cols(idx).T, n)

    def basis_matrix(self):
        if self.basis is None:
            return KMat.identity(self.algebra.dim, self.algebra.N)
        return self.basis

    def type(self):
        hist = Counter(len(v) for v in self.components().values())
        top = max(hist)
        return tuple(hist.get(i, 0) for i in range(1, top + 1))

    # the algebra in the homogeneous basis

    def homogeneous_algebra(self):
        if self._homog is None:
            if self.basis is None:
                self._homog = self.algebra
            else:
                if self._Binv is None:
                    self._Binv = inverse(self.basis)
                self._homog = self.algebra.change_basis(self.basis, self._Binv)
        return self._homog

    def homogeneous_coords(self, x):
        """Coordinates of the column x in the homogeneous basis."""
        if self.basis is None:
            return x
        self.homogeneous_algebra()
        Binv = self._Binv
        N = lcm(Binv.N, x.N)
        return Binv.lift(N) @ x.lift(N)

    def _degree_array(self):
        return np.array(self.degrees, dtype=np.int64).reshape(len(self.degrees), self.group.rank)

    def check(self):
        """Compatibility A_g A_h in A_{g+h}; returns (ok, witness or None)."""
        try:
            H = self.homogeneous_algebra()
        except LinAlgError as exc:
            return False, f"homogeneous vectors do not form a basis: {exc}"
        n = H.dim
        sup = H.T.support().tocoo()
        k = sup.row
        i, j = sup.col // n, sup.col % n
        D = self._degree_array()
        mod = np.array(self.group.moduli, dtype=np.int64)
        s = D[i] + D[j]
        tors = mod > 0
        s[:, tors] %= mod[tors]
        bad = np.nonzero((s != D[k]).any(axis=1))[0]
        if len(bad):
            b = bad[0]
            return False, {"x": int(i[b]), "y": int(j[b]), "product_hits": int(k[b]),
                           "deg_x": self.degrees[i[b]], "deg_y": self.degrees[j[b]],
                           "deg_hit": self.degrees[k[b]]}
        return True, None

    def product_relations(self):
        """Distinct (g, h, g+h) with A_g A_h != 0."""
        H = self.homogeneous_algebra()
        n = H.dim
        sup = H.T.support().tocoo()
        rel = set()
        deg = self.degrees
        for k, c in zip(sup.row.tolist(), sup.col.tolist()):
            rel.add((deg[c // n], deg[c % n], deg[k]))
        return rel

    def universal_group(self):
        return universal_group(self)

    def zero_component_dim(self):
        return len(self.components().get(self.group.zero(), []))

    def to_json(self):
        comps = []
        B = self.basis_matrix()
        for d, idx in sorted(self.components().items()):
            rows = []
            for c in idx:
                col = B.col(c)
                rows.append({str(r): _scal(v) for (r, _), v in sorted(col.entries().items())})
            comps.append({"degree": list(d), "basis_rows": rows})
        out = {"name": self.name, "group": self.group.to_json(), "components": comps,
               "type": list(self.type())}
        if self.declared:
            dec = dict(self.declared)
            if isinstance(dec.get("group"), AbGroup):
                dec["group"] = dec["group"].to_json()
            if "type" in dec:
                dec["type"] = list(dec["type"])
            out["declared"] = dec
        out["flags"] = sorted(self.flags)
        return out

    def __repr__(self):
        return f"Grading({self.name!r}, group={self.group.label()}, type={self.type()})"


def _scal(v):
    return str(v.to_fraction()) if v.is_rational() else v.to_json()


def check_grading(grading):
    return grading.check()


def type_of(grading):
    return grading.type()


# ----------------------------------------------------------------------
# universal group


def universal_group(grading):
    """Universal group of the grading and the induced degree map.

    Generators are the support, relations s1 + s2 = s3 for every nonzero
    product of components.  The lattice of relations is reduced by
    sparse integer elimination on unit pivots; what remains goes through
    a Smith normal form.
    Returns (AbGroup, dict support degree -> element of that group).
    """
    support = grading.support()
    index = {d: i for i, d in enumerate(support)}
    rels = [(index[a], index[b], index[c]) for a, b, c in grading.product_relations()]
    group, images = presented_group(len(support), rels, support)
    if len(set(images.values())) != len(support):
        raise GradingError("distinct components collapse in the universal group")
    return group, images


def presented_group(ngens, relations, labels=None):
    """Abelian group on ngens generators with relations g_a + g_b = g_c."""
    pivots = {}  # column -> row dict with coefficient 1 at the column
    occurs = defaultdict(set)  # column -> pivot columns whose row mentions it
    hard = []

    def reduce(row):
        changed = True
        while changed:
            changed = False
            for c in [c for c in row if c in pivots]:
                coef = row.pop(c, 0)
                if not coef:
                    continue
                for cc, v in pivots[c].items():
                    if cc == c:
                        continue
                    nv = row.get(cc, 0) - coef * v
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
                changed = True
        return row

    def add_pivot(p, row):
        coef = row[p]
        if coef == -1:
            row = {c: -v for c, v in row.items()}
        # eliminate p from existing pivot rows
        for q in list(occurs.get(p, ())):
            r = pivots[q]
            a = r.pop(p, 0)
            if a:
                for cc, v in row.items():
                    if cc == p:
                        continue
                    nv = r.get(cc, 0) - a * v
                    if nv:
                        r[cc] = nv
                    else:
                        r.pop(cc, None)
                    if nv:
                        occurs[cc].add(q)
        occurs.pop(p, None)
        pivots[p] = row
        for cc in row:
            if cc != p:
                occurs[cc].add(p)

    for a, b, c in relations:
        row = defaultdict(int)
        row[a] += 1
        row[b] += 1
        row[c] -= 1
        row = {k: v for k, v in row.items() if v}
        row = reduce(row)
        if not row:
            continue
        unit = [k for k, v in row.items() if abs(v) == 1]
        if unit:
            add_pivot(min(unit), row)
        else:
            hard.append(row)
    # clean the hard rows and see whether some gained unit entries
    while True:
        progress = False
        remaining = []
        for row in hard:
            row = reduce(dict(row))
            if not row:
                continue
            unit = [k for k, v in row.items() if abs(v) == 1]
            if unit:
                add_pivot(min(unit), row)
                progress = True
            else:
                remaining.append(row)
        hard = remaining
        if not progress:
            break
    free_gens = [g for g in range(ngens) if g not in pivots]
    pos = {g: i for i, g in enumerate(free_gens)}
    k = len(free_gens)
    M = []
    for row in hard:
        row = reduce(dict(row))
        if row:
            v = [0] * k
            for c, val in row.items():
                v[pos[c]] += val
            M.append(v)
    M = _lattice_basis(M, k)
    if not M:
        M = [[0] * k]
    if k == 0:
        group = AbGroup(0, ())
        images = {g: () for g in range(ngens)}
    else:
        diag, P, Q = smith_normal_form(M)
        diag = diag + [0] * (k - len(diag))
        keep = [i for i, d in enumerate(diag) if d != 1]
        free_idx = [i for i in keep if diag[i] == 0]
        tors_idx = [i for i in keep if diag[i] != 0]
        order = free_idx + tors_idx
        group = AbGroup(len(free_idx), [abs(diag[i]) for i in tors_idx])

        def image_of_free(vec):
            # P M Q = D, so x -> x Q identifies Z^k / rows(M) with Z^k / rows(D)
            y = [sum(vec[c] * Q[c][r] for c in range(k)) for r in range(k)]
            return group.reduce(tuple(y[i] for i in order))

        images = {}
        for g in range(ngens):
            vec = [0] * k
            if g in pos:
                vec[pos[g]] = 1
            else:
                for c, val in pivots[g].items():
                    if c != g:
                        vec[pos[c]] -= val
            images[g] = image_of_free(vec)
    for a, b, c in relations:
        if group.add(images[a], images[b]) != images[c]:
            raise GradingError("degree map does not respect a relation")
    if labels is not None:
        images = {labels[g]: v for g, v in images.items()}
    return group, images


def _lattice_basis(rows, k, chunk=256):
    """Rows of the Hermite normal form of the lattice spanned by integer rows of length k.

    Only the relation lattice matters for the quotient, so the (many,
    repeated) relation rows are replaced by at most k generators before
    the Smith normal form.
    """
    import flint
    uniq = sorted({tuple(r) for r in rows if any(r)})
    if not uniq or k == 0:
        return []
    basis = []
    for s in range(0, len(uniq), chunk):
        block = basis + [list(r) for r in uniq[s:s + chunk]]
        H = flint.fmpz_mat(block).hnf()
        basis = [[int(H[i, j]) for j in range(k)] for i in range(H.nrows())]
        basis = [r for r in basis if any(r)]
    return basis


def remap_to_universal(grading):
    """The same decomposition regraded by its universal group (verified)."""
    group, images = universal_group(grading)
    degs = [images[d] for d in grading.degrees]
    g = Grading(grading.algebra, group, degs, grading.basis, grading.name, grading.declared, grading.flags,
                Binv=grading._Binv)
    g._homog = grading._homog
    ok, wit = g.check()
    if not ok:
        raise GradingError(f"remapped grading fails compatibility: {wit}")
    return g


# ----------------------------------------------------------------------
# building gradings


def coordinate_grading(algebra, group, degrees, **kw):
    return Grading(algebra, group, degrees, None, **kw)


def from_components(algebra, group, comps, **kw):
    """comps: list of (degree, Subspace or KMat rows)."""
    cols, degs = [], []
    for d, W in comps:
        rows = W.basis if isinstance(W, Subspace) else W
        if rows.shape[0] == 0:
            continue
        cols.append(rows.T)
        degs += [d] * rows.shape[0]
    B = stack_cols(cols)
    if B.shape[1] != algebra.dim:
        raise GradingError("components do not add up to the whole algebra")
    return Grading(algebra, group, degs, B, **kw)


def trivial_grading(algebra):
    return Grading(algebra, AbGroup(0, ()), [()] * algebra.dim, None, name=f"trivial({algebra.name})")


def combine(g1, g2, name=None):
    """Common refinement of two gradings of the same algebra, by G1 x G2.

    Every component of g1 has to split as the sum of its intersections
    with the components of g2; otherwise the pair is incompatible.
    """
    A = g1.algebra
    n = A.dim
    group = product_group(g1.group, g2.group)
    B2 = g2.basis_matrix()
    N = lcm(lcm(A.N, B2.N), g1.basis_matrix().N)
    B2 = B2.lift(N)
    B2inv = (g2._Binv if g2._Binv is not None else inverse(g2.basis_matrix())).lift(N)
    comps2 = g2.components()
    out = []
    for d1, idx1 in g1.components().items():
        U = g1.basis_matrix().lift(N).cols(idx1)  # n x k
        C = B2inv @ U  # coordinates in the g2 basis
        total = 0
        for d2, idx2 in comps2.items():
            P = B2.cols(idx2) @ C.rows(idx2)  # projection of U onto the d2 component
            if P.is_zero():
                continue
            W = Subspace(P.T, n)
            Usub = Subspace(U.T, n)
            if not (W <= Usub):
                raise GradingError(f"incompatible gradings: component {d1} is not a sum of intersections "
                                   f"(projection to {d2} leaves it)")
            total += W.dim
            out.append((join_degree(g1.group, d1, g2.group, d2), W))
        if total != len(idx1):
            raise GradingError(f"incompatible gradings at component {d1}")
    return from_components(A, group, out, name=name or f"{g1.name}*{g2.name}")


def refine_by_automorphisms(grading, ops, orders, name=None, check_auto=True):
    """Refine by commuting finite-order automorphisms preserving each component.

    The new degree of a joint eigenvector is (old degree, k_1, ..., k_r)
    where op_i acts by zeta_{o_i}^{k_i}.
    """
    A = grading.algebra
    n = A.dim
    N = A.N
    for o in orders:
        N = lcm(N, o)
    for op in ops:
        N = lcm(N, op.N)
    ops = [op.lift(N) for op in ops]
    AN = A.lift(N)
    if check_auto:
        for t, op in enumerate(ops):
            w = automorphism_defect(AN, op)
            if w is not None:
                raise GradingError(f"operator {t} is not an automorphism: {w}")
            P = op
            for _ in range(orders[t] - 1):
                P = P @ op
            if not (P == KMat.identity(n, N)):
                raise GradingError(f"operator {t} does not have order dividing {orders[t]}")
        for a in range(len(ops)):
            for b in range(a + 1, len(ops)):
                if not (ops[a] @ ops[b] == ops[b] @ ops[a]):
                    raise GradingError(f"operators {a} and {b} do not commute")
    B = grading.basis_matrix().lift(N)
    group = product_group(grading.group, AbGroup(0, orders))
    out = []
    for d, idx in grading.components().items():
        comps = [((), B.cols(idx))]  # columns spanning the current piece
        for op, o in zip(ops, orders):
            nxt = []
            for key, U in comps:
                sub = Subspace(U.T, n)
                Ub = sub.basis.T
                img = op @ Ub
                if not sub.contains(img.T):
                    raise GradingError(f"automorphism does not preserve the component of degree {d}")
                R = sub.coords(img.T).T  # matrix of op on the piece, in the echelon basis
                for k in range(o):
                    lam = root_of_unity(k, o)
                    K = kernel(R - KMat.identity(sub.dim, N).scale(lam))
                    if K.shape[0]:
                        nxt.append((key + (k,), Ub @ K.T))
            comps = nxt
        total = sum(U.shape[1] for _, U in comps)
        if total != len(idx):
            raise GradingError(f"operators are not diagonalizable on the component of degree {d}")
        for key, U in comps:
            out.append((tuple(d) + key, U.T))
    g = from_components(A if A.N == N else AN, group, out, name=name or f"{grading.name}+auts")
    return g


def automorphism_defect(A, op):
    """None if op(xy) = op(x) op(y) on basis pairs, else a witness pair."""
    lhs = op @ A.T
    rhs = A.T @ op.kron(op)
    D = lhs - rhs
    if D.is_zero():
        return None
    sup = D.support().tocoo()
    c = int(sup.col[0])
    return {"x": c // A.dim, "y": c % A.dim}


def derivation_defect(A, d):
    lhs = d @ A.T
    I = KMat.identity(A.dim, d.N)
    rhs = A.T @ (d.kron(I) + I.kron(d))
    D = lhs - rhs
    return None if D.is_zero() else D


def eigen_grading(algebra, ops, orders, base=None, name=None):
    base = base or trivial_grading(algebra)
    return refine_by_automorphisms(base, ops, orders, name=name)


def is_refinement(fine, coarse):
    """Every component of ``fine`` lies inside a component of ``coarse``."""
    Bc = coarse.basis_matrix()
    Bcinv = coarse._Binv if coarse._Binv is not None else inverse(Bc)
    comps_c = coarse.components()
    where = {}
    for d, idx in comps_c.items():
        for i in idx:
            where[i] = d
    Bf = fine.basis_matrix()
    C = Bcinv.lift(lcm(Bcinv.N, Bf.N)) @ Bf.lift(lcm(Bcinv.N, Bf.N))
    sup = C.support().tocsc()
    for d, idx in fine.components().items():
        targets = set()
        for c in idx:
            rows = sup.indices[sup.indptr[c]:sup.indptr[c + 1]]
            targets |= {where[int(r)] for r in rows}
        if len(targets) > 1:
            return False
    return True


def degree_table(grading):
    comps = grading.components()
    return {d: len(v) for d, v in comps.items()}


def from_spanning_set(algebra, group, items, **kw):
    """Grading from homogeneous vectors (degree, column) that together span the algebra.

    Vectors of equal degree are reduced to a basis of their span; the sum
    of the spans must be direct and exhaust the algebra.
    """
    groups = defaultdict(list)
    for d, v in items:
        groups[group.reduce(tuple(d))].append(v.T)
    comps = []
    for d in sorted(groups):
        W = Subspace(stack_rows(groups[d]), algebra.dim)
        if W.dim:
            comps.append((d, W))
    if sum(W.dim for _, W in comps) != algebra.dim:
        raise GradingError("homogeneous spans are not independent or do not exhaust the algebra")
    return from_components(algebra, group, comps, **kw)


# ----------------------------------------------------------------------
# induced gradings


def _screen_by_degree(M, degrees, group):
    """Group the columns of M by degree and keep, per degree, columns independent mod p.

    Independence mod p implies independence over Q(zeta), so the kept
    columns are a basis of their span as soon as they add up to the
    ambient dimension; compatibility is then checked exactly.
    """
    from .algcore import _independent_rows, to_modp
    A, p = to_modp(M)
    by = defaultdict(list)
    for c, d in enumerate(degrees):
        by[group.reduce(tuple(d))].append(c)
    out = []
    for d in sorted(by):
        cols = by[d]
        sub = A[:, cols].T
        keep = [cols[i] for i in _independent_rows(sub, p)] if sub.any() else []
        if keep:
            out.append((d, M.cols(keep).T))
    return out


def grading_from_generators(algebra, group, gens, degrees, name=None, rounds=1, **kw):
    """Grading of an algebra spanned by homogeneous generators and their products.

    ``gens`` holds the generators as columns, ``degrees`` their degrees.
    The product of generators of degrees g and h is taken to have degree
    g + h; ``rounds`` controls how many times the products are fed back
    (one round covers algebras equal to M + MM).  The decomposition is
    rejected unless the kept vectors exhaust the algebra.
    """
    degs = [group.reduce(tuple(d)) for d in degrees]
    N = lcm(algebra.N, gens.N)
    A = algebra.lift(N)
    G = gens.lift(N)
    vecs, vdeg = G, list(degs)
    gens, gdeg = G, list(degs)
    for _ in range(rounds):
        P = A.products(gens, G)
        pdeg = [group.add(a, b) for a in gdeg for b in degs]
        comps = _screen_by_degree(vecs.hstack(P), vdeg + pdeg, group)
        gens = stack_cols([W.T for _, W in comps])
        gdeg = [d for d, W in comps for _ in range(W.shape[0])]
        vecs, vdeg = gens, gdeg
    total = sum(W.shape[0] for _, W in comps)
    if total != algebra.dim:
        raise GradingError(f"generators and their products span {total} of {algebra.dim} dimensions")
    return from_components(A, group, comps, name=name, **kw)


def operator_grading(algebra, ops, module_basis, module_degrees, group, name=None, **kw):
    """Grading of a Lie algebra of operators induced by a grading of the module.

    ``ops`` is a list of n x n KMat (the operator of each basis element of
    ``algebra``), ``module_basis`` a homogeneous basis (columns) of the
    module with degrees ``module_degrees``.  The component of degree g is
    the projection onto the maps raising degrees by g; the projections are
    expressed in the algebra through a pivot block of the operator matrix.
    """
    from .algcore import _independent_rows, to_modp
    n = module_basis.shape[0]
    N = lcm(algebra.N, module_basis.N)
    for op in ops:
        N = lcm(N, op.N)
    B = module_basis.lift(N)
    Binv = inverse(B)
    flat = []
    for op in ops:
        D = Binv @ (op.lift(N) @ B)
        flat.append(KMat([l.reshape((1, n * n)).tocsr() for l in D.layers], D.den, N, normalize=False))
    M = stack_rows(flat)  # r x n^2, row k = operator k in the homogeneous basis
    r = M.shape[0]
    mdeg = [group.reduce(tuple(d)) for d in module_degrees]
    posdeg = [group.add(mdeg[i], group.neg(mdeg[j])) for i in range(n) for j in range(n)]
    Ap, p = to_modp(M)
    piv = _independent_rows(Ap.T.copy(), p)
    if len(piv) != r:
        raise GradingError("operators are not independent")
    Minv = inverse(M.cols(piv))  # r x r: coordinates from pivot entries
    pivpos = {c: t for t, c in enumerate(piv)}
    by = defaultdict(list)
    for c, d in enumerate(posdeg):
        by[d].append(c)
    comps = []
    for d in sorted(by):
        cols = by[d]
        sub = Ap[:, cols]
        if not sub.any():
            continue
        keep = _independent_rows(sub, p)
        pc = [c for c in cols if c in pivpos]
        if not pc:
            raise GradingError(f"no pivot entry of degree {d}; the operator span is not graded")
        # coordinates of the projections: entries at the pivot positions of degree d
        X = M.rows(keep).cols(pc) @ Minv.rows([pivpos[c] for c in pc])
        comps.append((d, X))
    total = sum(W.shape[0] for _, W in comps)
    if total != algebra.dim:
        raise GradingError(f"projections span {total} of {algebra.dim} dimensions")
    A = algebra.lift(N)
    g = from_components(A, group, comps, name=name, **kw)
    return g


def catalog(id):
    """(LieAlg, Grading) for a catalog id; see ``exforge.catalog``."""
    from .catalog import catalog as _catalog
    return _catalog(id)


def grading_from_json(data, algebra):
    """Inverse of ``Grading.to_json`` on the given algebra."""
    from .algcore import _scalar_parse
    grp = data["group"]
    group = AbGroup(grp["free_rank"], grp["torsion"])
    n = algebra.dim
    comps = []
    for c in data["components"]:
        ent = {}
        for r, row in enumerate(c["basis_rows"]):
            for k, v in row.items():
                ent[(r, int(k))] = _scalar_parse(v)
        comps.append((tuple(c["degree"]), KMat.from_entries((len(c["basis_rows"]), n), ent, algebra.N)))
    g = from_components(algebra, group, comps, name=data.get("name"))
    dec = data.get("declared")
    if dec:
        dec = dict(dec)
        if isinstance(dec.get("group"), dict):
            dec["group"] = AbGroup(dec["group"]["free_rank"], dec["group"]["torsion"])
        if dec.get("type") is not None:
            dec["type"] = tuple(dec["type"])
        g.declared = dec
    g.flags.update(data.get("flags", ()))
    return g
