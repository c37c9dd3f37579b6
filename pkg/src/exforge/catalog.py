"""The named gradings on e6, e7 and e8 and the auxiliary gradings they come from.

Every entry is rebuilt from its recipe: the algebra is constructed, the
grading is obtained from homogeneous generators, automorphisms or
operator projections, and the declared universal group and type are
attached for comparison.  Nothing here is trusted: ``verify_entry``
checks compatibility exactly and recomputes type and universal group.
"""

from functools import lru_cache

from .algcore import KMat, stack_cols
from .composition import composition_grading_data
from .gradlib import (AbGroup, GradingError, check_grading, combine, from_components,
                      grading_from_generators, operator_grading, refine_by_automorphisms, type_of,
                      universal_group)
from .scalars import lcm, root_of_unity


class CatalogError(KeyError):
    pass


class Entry:
    def __init__(self, id, algebra, group, type, build, label=None, aux=False, fine=True, note=""):
        self.id = id
        self.algebra = algebra
        self.group = AbGroup.parse(group) if isinstance(group, str) else group
        self.type = tuple(type) if type is not None else None
        self.build = build
        self.label = label or id
        self.aux = aux
        self.fine = fine
        self.note = note

    @property
    def lie_type(self):
        if self.id.startswith("cartan-"):
            return self.id[len("cartan-"):]
        return {"6": "e6", "7": "e7", "8": "e8"}.get(self.id[0]) if self.id[1:2] == "g" else None

    def declared(self):
        return {"group": self.group, "type": self.type, "label": self.label, "fine": self.fine}


def _arrange(mods, deg):
    """Degree in factor order -> free coordinates first, then torsion (both in order)."""
    free = [d for m, d in zip(mods, deg) if m == 0]
    tors = [d for m, d in zip(mods, deg) if m != 0]
    return tuple(free + tors)


def _group(mods):
    return AbGroup(sum(1 for m in mods if m == 0), [m for m in mods if m])


def _embed(L, piece):
    a, e = L.components[piece]
    return KMat.from_entries((L.dim, e - a), {(a + k, k): 1 for k in range(e - a)}, L.N)


def _ingredient(kind, gid):
    """(moduli, degrees, basis) of a grading of a composition algebra; basis columns, standard coordinates."""
    group, degs, B = composition_grading_data(kind, gid)
    n = len(degs)
    if B is None:
        B = KMat.identity(n)
    mods = [0] * group.free_rank + list(group.torsion)
    return mods, [tuple(d) for d in degs], B


_TRIVIAL = ([], None, None)


# ----------------------------------------------------------------------
# algebras (cached: several entries share one algebra)


@lru_cache(maxsize=None)
def g_algebra(s1, s2):
    from .liebuild import g_construction
    return g_construction(s1, s2)


@lru_cache(maxsize=None)
def cd_algebra(kind):
    from .structurable import cd_jordan4
    return cd_jordan4(kind)


@lru_cache(maxsize=None)
def kantor_algebra(key):
    from .liebuild import kantor
    return kantor(_structurable(key))


@lru_cache(maxsize=None)
def steinberg_algebra(key):
    from .liebuild import steinberg
    return steinberg(_structurable(key))


@lru_cache(maxsize=None)
def _structurable(key):
    """Structurable algebras used by the catalog, keyed by name."""
    from .structurable import cd_jordan4, cd_matrix_model
    if key.startswith("CDH4") and key[4:] in ("F", "K", "Q"):
        return cd_jordan4(key[4:])
    if key.startswith("CDH4") and key.endswith(":finite"):
        return _jordan_graded(key[4], "finite")[0]
    if key.startswith("CDH4") and key.endswith(":mixed"):
        return _jordan_graded(key[4], "mixed")[0]
    if key == "CDH4Q:division":
        return _division_graded()[0]
    if key == "CDH4Q:z43":
        return cd_matrix_model()
    if key == "CDH4K:z43":
        return _z43_k()[0]
    raise CatalogError(f"unknown structurable algebra {key!r}")


# ----------------------------------------------------------------------
# gradings on the structurable algebras CD(J) = J + vJ


def _cd_grading(J, gJ, A):
    """(moduli, degrees, basis) on J + vJ from a grading of J and the doubling parity."""
    d = J.dim
    BJ = gJ.basis_matrix()
    mods = [0] * gJ.group.free_rank + list(gJ.group.torsion) + [2]
    Z = KMat.zeros((d, d), BJ.N)
    B = BJ.hstack(Z).vstack(Z.hstack(BJ))
    degs = [tuple(x) + (0,) for x in gJ.degrees] + [tuple(x) + (1,) for x in gJ.degrees]
    return mods, degs, B


@lru_cache(maxsize=None)
def _jordan_graded(kind, which):
    from .jordan import jordan4_gradings
    from .structurable import cd_jordan4
    J, gJ = jordan4_gradings(kind, which)
    A = cd_jordan4(J=J)
    return A, _cd_grading(J, gJ, A)


@lru_cache(maxsize=None)
def _division_graded():
    from .jordan import graded_division_grading_h4q
    from .structurable import cd_jordan4
    J, gJ, _, _ = graded_division_grading_h4q()
    A = cd_jordan4(J=J)
    return A, _cd_grading(J, gJ, A)


@lru_cache(maxsize=None)
def _z43_q():
    from .structurable import z43_grading_on_cd_h4q
    g = z43_grading_on_cd_h4q(_structurable("CDH4Q:z43"))
    return g.model, ([4, 4, 4], [tuple(x) for x in g.degrees], g.basis_matrix())


@lru_cache(maxsize=None)
def _z43_k():
    from .structurable import z43_restriction_cd_h4k
    from .structurable import z43_grading_on_cd_h4q
    g = z43_grading_on_cd_h4q(_structurable("CDH4Q:z43"))
    sub, gk, _ = z43_restriction_cd_h4k(g)
    return sub, ([4, 4, 4], [tuple(x) for x in gk.degrees], gk.basis_matrix())


def structurable_grading(key):
    """(InvAlgebra, (moduli, degrees, basis)) for the graded structurable algebras of the catalog."""
    if key in ("CDH4F:finite", "CDH4K:finite", "CDH4Q:finite"):
        return _jordan_graded(key[4], "finite")
    if key in ("CDH4F:mixed", "CDH4K:mixed", "CDH4Q:mixed"):
        return _jordan_graded(key[4], "mixed")
    if key == "CDH4Q:division":
        return _division_graded()
    if key == "CDH4Q:z43":
        return _z43_q()
    if key == "CDH4K:z43":
        return _z43_k()
    raise CatalogError(f"no grading attached to {key!r}")


# ----------------------------------------------------------------------
# g(S, S') recipes


_SKELETON = {0: (1, 1), 1: (1, 0), 2: (0, 1)}


def _iota_generators(L, ing1, ing2, deg_fn, extra_mods):
    """Generators iota_i(x (x) x') for homogeneous x, x' with degree deg_fn(i, a, b, da, db)."""
    m1, d1, B1 = ing1
    m2, d2, B2 = ing2
    n, m = len(d1), len(d2)
    N = lcm(B1.N, B2.N)
    BB = B1.lift(N).kron(B2.lift(N))
    cols, degs = [], []
    for i in range(3):
        cols.append(_embed(L, f"i{i}").lift(N) @ BB)
        for a in range(n):
            for b in range(m):
                degs.append(deg_fn(i, a, b, d1[a], d2[b]))
    mods = list(extra_mods) + list(m1) + list(m2)
    return mods, stack_cols(cols), degs


def _from_iota(L, ing1, ing2, deg_fn, extra_mods, name):
    mods, G, degs = _iota_generators(L, ing1, ing2, deg_fn, extra_mods)
    group = _group(mods)
    degs = [_arrange(mods, d) for d in degs]
    return grading_from_generators(L.algebra, group, G, degs, name=name)


def skeleton_combined(s1, g1, s2, g2, name=None):
    """Z_2^2 skeleton combined with gradings of S and S'."""
    L = g_algebra(s1, s2)
    ing1, ing2 = _ingredient(s1, g1), _ingredient(s2, g2)
    fn = lambda i, a, b, da, db: _SKELETON[i] + tuple(da) + tuple(db)
    return L, _from_iota(L, ing1, ing2, fn, [2, 2], name)


def ingredient_grading(s1, g1, s2, g2, name=None):
    """The G x G' grading of g(S, S') alone (iota_i(S_g (x) S'_h) in degree (g, h))."""
    L = g_algebra(s1, s2)
    ing1, ing2 = _ingredient(s1, g1), _ingredient(s2, g2)
    fn = lambda i, a, b, da, db: tuple(da) + tuple(db)
    return L, _from_iota(L, ing1, ing2, fn, [], name)


def theta_combined(s1, g1, s2, g2, name=None):
    """The Z_3 grading of Theta refining the G x G' grading."""
    from .liebuild import theta_automorphism
    L, base = ingredient_grading(s1, g1, s2, g2)
    th = theta_automorphism(L)
    return L, refine_by_automorphisms(base, [th], [3], name=name)


def five_grading(L):
    """Eigenspaces of ad(iota_0(1 (x) 1')) on g(pC, pC'): a grading by Z.

    The eigenvalues are read off as integers, or as integer multiples of i
    when the paraunits give a derivation with imaginary spectrum.
    """
    from .algcore import kernel
    S, S2 = L.meta["S"], L.meta["S'"]
    e1, e2 = _paraunit(S), _paraunit(S2)
    h = _embed(L, "i0") @ e1.kron(e2)
    A = L.algebra
    ad = A.left(h).mat
    n = L.dim
    comps, total = [], 0
    for N, unit in ((1, 1), (4, root_of_unity(1, 4))):
        adN = ad.lift(N)
        comps, total = [], 0
        for k in range(-4, 5):
            K = kernel(adN - KMat.identity(n, N).scale(unit * k if k else 0))
            if K.shape[0]:
                comps.append(((k,), K))
                total += K.shape[0]
        if total == n:
            break
    if total != n:
        raise GradingError("ad of the paraunit tensor is not diagonalizable with integer eigenvalues")
    return from_components(A.lift(comps[0][1].N), AbGroup(1), comps, name="5-grading")


def _paraunit(S):
    """The unit of the Hurwitz algebra behind a para-Hurwitz algebra, as a column."""
    C = S.algebra
    u = getattr(S, "paraunit", None)
    if u is not None:
        return u
    # e1 + e2 for K, Q, C in their standard bases; 1 for F
    if C.dim == 1:
        return KMat.column([1])
    v = [0] * C.dim
    v[0] = v[1] = 1
    return KMat.column(v)


def five_combined(s1, g1, s2, g2, name=None):
    L, base = ingredient_grading(s1, g1, s2, g2)
    five = five_grading(L)
    return L, combine(five, base, name=name)


# the Z^4 table on g(pC, S'): a_i, g_i with a_0 = -a_1 - a_2, g_0 = -g_1 - g_2

def _z4_vectors():
    a = {1: (1, 0, 0, 0), 2: (0, 1, 0, 0)}
    g = {1: (0, 0, 1, 0), 2: (0, 0, 0, 1)}
    a[0] = tuple(-x - y for x, y in zip(a[1], a[2]))
    g[0] = tuple(-x - y for x, y in zip(g[1], g[2]))
    return a, g


def _vadd(*vs):
    return tuple(sum(x) for x in zip(*vs))


def _vneg(v):
    return tuple(-x for x in v)


def z4_table():
    """deg iota_i(x (x) s) for x in the Cayley basis e1, e2, u1, u2, u3, v1, v2, v3 (u_0 = u3)."""
    a, g = _z4_vectors()
    pos = {1: 2, 2: 3, 0: 4}  # u_j -> index; v_j = index + 3
    table = {}
    for i in range(3):
        row = [None] * 8
        row[0], row[1] = a[i], _vneg(a[i])
        du = {i % 3: g[i % 3],
              (i + 1) % 3: _vadd(a[(i + 2) % 3], g[(i + 1) % 3]),
              (i + 2) % 3: _vadd(_vneg(a[(i + 1) % 3]), g[(i + 2) % 3])}
        for j, d in du.items():
            row[pos[j]] = d
            row[pos[j] + 3] = _vneg(d)
        table[i] = row
    return table


def z3_table_swapped():
    """The Z^3 assignment on iota_i(x (x) s), x in e1, e2, u1, v1, with the entries of iota_0(u1)
    and iota_2(u1) exchanged; not compatible with the bracket (see t_degree_report)."""
    a = {1: (1, 0, 0), 2: (0, 1, 0), 0: (-1, -1, 0)}
    u = {1: (0, 0, 1), 2: (0, 1, 1), 0: (1, 1, 1)}
    return {i: [a[i], _vneg(a[i]), u[i], _vneg(u[i])] for i in range(3)}


def z3_table():
    """deg iota_i(x (x) s) for x in e1, e2, u1, v1 (basis of pQ), inherited from the Z^4 table.

    pQ sits in C as e1, e2, u1, v1 and only a_1, a_2, g_1 occur, so the
    Z^4 degrees restrict to Z^3.  The expected degrees of the t_{x,y}
    agree with this version and not with ``z3_table_swapped``.
    """
    full = z4_table()
    keep = [0, 1, 2, 5]  # e1, e2, u1, v1 inside the Cayley basis
    return {i: [full[i][k][:3] for k in keep] for i in range(3)}


def z3_table_t_degrees():
    """Expected degrees of t_{x,y} for the Z^3 grading (x, y among e1, e2, u1, v1)."""
    return {("e1", "e2"): (0, 0, 0), ("u1", "v1"): (0, 0, 0),
            ("e1", "u1"): (-1, 0, 1), ("e2", "v1"): (1, 0, -1),
            ("e1", "v1"): (-1, -2, -1), ("e2", "u1"): (1, 2, 1)}


def t_element(L, x, y):
    """t_{x,y} of tri(S) as a column of L (x, y labels of the basis of S)."""
    S = L.meta["S"]
    tri = L.meta["tri"]
    i, j = S.algebra.labels.index(x), S.algebra.labels.index(y)
    a, _ = L.components["tri"]
    col = tri.tcoords[:, i, j].reshape(tri.dim, 1).to_kmat()
    ent = {(a + k, 0): v for (k, _), v in col.entries().items()}
    return KMat.from_entries((L.dim, 1), ent, L.N)


def t_degree_report(L=None, g=None, table=None):
    """{(x, y): (expected, found)} for the degrees of the t_{x,y}.

    ``found`` is the degree of the component containing t_{x,y}, or None if
    it is not homogeneous.
    """
    if L is None:
        L, g = table_only("pQ", z3_table(), 3, "pC", "Z^3 table")
    table = table or z3_table_t_degrees()
    out = {}
    for (x, y), deg in table.items():
        v = t_element(L, x, y)
        found = None
        for d in g.components():
            if g.component(d).contains(v.T):
                found = tuple(d)
                break
        out[(x, y)] = (tuple(deg), found)
    return out


def z2_table():
    a = {1: (1, 0), 2: (0, 1), 0: (-1, -1)}
    return {i: [a[i], _vneg(a[i])] for i in range(3)}


def table_combined(s1, table, rank, s2, g2, name=None):
    """A Z^rank degree table on the iota parts of g(s1, S'), combined with a grading of S'."""
    L = g_algebra(s1, s2)
    n = L.meta["S"].dim
    ing1 = ([], [()] * n, KMat.identity(n))
    ing2 = _ingredient(s2, g2)
    fn = lambda i, a, b, da, db: tuple(table[i][a]) + tuple(db)
    return L, _from_iota(L, ing1, ing2, fn, [0] * rank, name)


def table_only(s1, table, rank, s2, name=None):
    L = g_algebra(s1, s2)
    n, m = L.meta["S"].dim, L.meta["S'"].dim
    ing1 = ([], [()] * n, KMat.identity(n))
    ing2 = ([], [()] * m, KMat.identity(m))
    fn = lambda i, a, b, da, db: tuple(table[i][a])
    return L, _from_iota(L, ing1, ing2, fn, [0] * rank, name)


# ----------------------------------------------------------------------
# Kantor, Steinberg, Der and Instr recipes


def kantor_combined(key, name=None, z4=False):
    """Z (Kantor) x G on Kan(A) from a G-grading of A; with ``z4`` the Z_4 coarsening k + 2 parity."""
    A, (mods, degs, B) = structurable_grading(key)
    L = kantor_algebra(key)
    N = B.N
    G = stack_cols([_embed(L, "A").lift(N) @ B, _embed(L, "A~").lift(N) @ B])
    if z4:
        # k + 2 * (doubling parity) modulo 4; the parity is the last coordinate
        gmods = [4]
        gdegs = [((1 + 2 * d[-1]) % 4,) for d in degs] + [((-1 + 2 * d[-1]) % 4,) for d in degs]
    else:
        gmods = [0] + list(mods)
        gdegs = [(1,) + tuple(d) for d in degs] + [(-1,) + tuple(d) for d in degs]
    group = _group(gmods)
    gdegs = [_arrange(gmods, d) for d in gdegs]
    return L, grading_from_generators(L.algebra, group, G, gdegs, name=name)


def steinberg_combined(key, name=None):
    """Z_2^2 (Steinberg) x G on U(A) from a G-grading of A."""
    A, (mods, degs, B) = structurable_grading(key)
    L = steinberg_algebra(key)
    N = B.N
    sk = {"u12": (1, 0), "u23": (0, 1), "u31": (1, 1)}
    cols, gdegs = [], []
    for u, s in sk.items():
        cols.append(_embed(L, u).lift(N) @ B)
        gdegs += [s + tuple(d) for d in degs]
    gmods = [2, 2] + list(mods)
    group = _group(gmods)
    gdegs = [_arrange(gmods, d) for d in gdegs]
    return L, grading_from_generators(L.algebra, group, stack_cols(cols), gdegs, name=name)


@lru_cache(maxsize=None)
def der_algebra_of(key):
    from .liebuild import der_algebra
    return der_algebra(_structurable(key), involution=True)


def der_combined(key, name=None):
    """G-grading on Der(A, -) by projecting derivations onto degree-shifting maps."""
    A, (mods, degs, B) = structurable_grading(key)
    L = der_algebra_of(key)
    ops = L.meta["ops"]
    opl = [ops[k].to_kmat() for k in range(ops.shape[0])]
    group = _group(mods)
    degs = [_arrange(mods, d) for d in degs]
    return L, operator_grading(L.algebra, opl, B, degs, group, name=name)


class _Instr7:
    """[Instr(A), Instr(A)] as a Lie algebra with its operators and eps."""

    def __init__(self, A):
        from .algcore import CArr, ceinsum
        from .liebuild import LieAlg
        from .structurable import instr_and_epsilon
        ins = instr_and_epsilon(A)
        alg, U = ins.derived()
        self.ins, self.U = ins, U
        ops = CArr.rational(ins.ops, ins.den)
        Uc = CArr.rational(U.T)  # rows: basis of the derived algebra in Instr coordinates
        self.ops = ceinsum("kj,jml->kml", Uc, ops)
        self.lie = LieAlg(alg, {"construction": "instr-derived", "ingredients": [A.name]},
                          {"instr'": (0, alg.dim)}, {"ops": self.ops})
        # eps on the derived algebra, in its own coordinates
        eps = ins.epsilon  # columns: eps(B_k) in Instr coordinates
        self.eps = _restrict_operator(eps, Uc)


def _restrict_operator(op, Uc):
    """Matrix of op (Instr coordinates, columns = images) on the row span of Uc."""
    from .algcore import CArr, ceinsum, csolve
    Ut = Uc.transpose(1, 0)  # columns = basis of the subspace
    img = ceinsum("ij,jk->ik", CArr.from_kmat(op.lift(Uc.N)), Ut)
    return csolve(Ut, img).to_kmat()


@lru_cache(maxsize=None)
def instr7_of(key):
    return _Instr7(_structurable(key))


def instr_combined(key, name=None):
    """G x Z_2 on [Instr(A), Instr(A)]: operator projection refined by eps."""
    A, (mods, degs, B) = structurable_grading(key)
    I7 = instr7_of(key)
    ops = I7.ops
    opl = [ops[k].to_kmat() for k in range(ops.shape[0])]
    group = _group(mods)
    degs = [_arrange(mods, d) for d in degs]
    base = operator_grading(I7.lie.algebra, opl, B, degs, group)
    return I7.lie, refine_by_automorphisms(base, [I7.eps], [2], name=name)


# ----------------------------------------------------------------------
# the table of entries


def _e(id, algebra, group, type, build, **kw):
    return Entry(id, algebra, group, type, build, **kw)


def _cartan(kinds):
    def build():
        from .lieanalysis import cartan_and_roots
        L = g_algebra(*kinds)
        rd = cartan_and_roots(L)
        return L, rd.grading(L, name="Cartan grading")
    return build


def _z5():
    from .z5model import z5cubed_grading
    return z5cubed_grading()


ENTRIES = {}


def _register(*entries):
    for e in entries:
        ENTRIES[e.id] = e


_register(
    # Z_2^2 skeleton combined with Z_2^r gradings
    _e("6g1", "g(pK,pC)", "Z_2^6", (48, 1, 0, 7), lambda: skeleton_combined("pK", "Z2", "pC", "Z2^3", "6g1")),
    _e("7g1", "g(pQ,pC)", "Z_2^7", (96, 0, 3, 7), lambda: skeleton_combined("pQ", "Z2^2", "pC", "Z2^3", "7g1")),
    _e("8g1", "g(pC,pC)", "Z_2^8", (192, 0, 0, 14), lambda: skeleton_combined("pC", "Z2^3", "pC", "Z2^3", "8g1")),
    # Theta with Z_3 gradings
    _e("6g2", "g(pK,Ok)", "Z_3^4", (72, 0, 2), lambda: theta_combined("pK", "Z3", "Ok", "Z3^2", "6g2")),
    _e("8g2", "g(Ok,Ok)", "Z_3^5", (240, 0, 0, 2), lambda: theta_combined("Ok", "Z3^2", "Ok", "Z3^2", "8g2")),
    # Theta with gradings for the primes 2 and 3
    _e("6g3", "g(pK,pC)", "Z_2^3xZ_3^2", (64, 7), lambda: theta_combined("pK", "Z3", "pC", "Z2^3", "6g3")),
    _e("6g4", "g(pK,Ok)", "Z_2xZ_3^3", (26, 26), lambda: theta_combined("pK", "Z2", "Ok", "Z3^2", "6g4")),
    _e("7g2", "g(pQ,Ok)", "Z_2^2xZ_3^3", (81, 26), lambda: theta_combined("pQ", "Z2^2", "Ok", "Z3^2", "7g2")),
    _e("8g3", "g(pC,Ok)", "Z_6^3", (182, 33), lambda: theta_combined("pC", "Z2^3", "Ok", "Z3^2", "8g3")),
    # Theta with Cartan gradings
    _e("6g5", "g(pK,pC)", "Z^2xZ_3^2", (60, 9), lambda: theta_combined("pK", "Z3", "pC", "Z^2", "6g5")),
    _e("7g3", "g(pQ,Ok)", "ZxZ_3^3", (55, 0, 26), lambda: theta_combined("pQ", "Z", "Ok", "Z3^2", "7g3")),
    _e("8g4", "g(pC,Ok)", "Z^2xZ_3^3", (168, 1, 26), lambda: theta_combined("pC", "Z^2", "Ok", "Z3^2", "8g4")),
    # the 5-grading refined by Z_2^r gradings
    _e("6g6", "g(pK,pC)", "ZxZ_2^4", (57, 0, 7), lambda: five_combined("pK", "Z2", "pC", "Z2^3", "6g6")),
    _e("7g4", "g(pQ,pC)", "ZxZ_2^5", (106, 3, 7), lambda: five_combined("pQ", "Z2^2", "pC", "Z2^3", "7g4")),
    _e("8g5", "g(pC,pC)", "ZxZ_2^6", (206, 0, 14), lambda: five_combined("pC", "Z2^3", "pC", "Z2^3", "8g5")),
    # degree tables
    _e("6g7", "g(pC,pK)", "Z^4xZ_2", (72, 1, 0, 1), lambda: table_combined("pC", z4_table(), 4, "pK", "Z2", "6g7")),
    _e("7g5", "g(pC,pQ)", "Z^4xZ_2^2", (120, 0, 3, 1),
       lambda: table_combined("pC", z4_table(), 4, "pQ", "Z2^2", "7g5")),
    _e("8g6", "g(pC,pC)", "Z^4xZ_2^3", (216, 0, 0, 8),
       lambda: table_combined("pC", z4_table(), 4, "pC", "Z2^3", "8g6")),
    _e("6g8", "g(pK,pC)", "Z^2xZ_2^3", (48, 1, 0, 7), lambda: table_combined("pK", z2_table(), 2, "pC", "Z2^3", "6g8")),
    _e("7g6", "g(pQ,pC)", "Z^3xZ_2^3", (102, 0, 1, 7),
       lambda: table_combined("pQ", z3_table(), 3, "pC", "Z2^3", "7g6")),
    # Kantor and Steinberg constructions on CD(H_4(C))
    _e("6g9", "Kan(CD(H4(F)))", "ZxZ_2^5", (73, 0, 0, 0, 1), lambda: kantor_combined("CDH4F:finite", "6g9")),
    _e("7g7", "Kan(CD(H4(K)))", "ZxZ_2^6", (127, 0, 0, 0, 0, 1), lambda: kantor_combined("CDH4K:finite", "7g7")),
    _e("8g7", "Kan(CD(H4(Q)))", "ZxZ_2^7", (241, 0, 0, 0, 0, 0, 1), lambda: kantor_combined("CDH4Q:finite", "8g7")),
    _e("6g10", "Kan(CD(H4(F)))", "Z^2xZ_2^3", (60, 7, 0, 1), lambda: kantor_combined("CDH4F:mixed", "6g10")),
    _e("7g8", "Kan(CD(H4(K)))", "Z^2xZ_2^4", (102, 13, 0, 0, 1), lambda: kantor_combined("CDH4K:mixed", "7g8")),
    _e("8g8", "Kan(CD(H4(Q)))", "Z^2xZ_2^5", (180, 31, 0, 0, 0, 1), lambda: kantor_combined("CDH4Q:mixed", "8g8")),
    _e("6g11", "U(CD(H4(F)))", "Z_2^7", (72, 0, 0, 0, 0, 1), lambda: steinberg_combined("CDH4F:finite", "6g11")),
    _e("7g9", "U(CD(H4(K)))", "Z_2^8", (126, 0, 0, 0, 0, 0, 1), lambda: steinberg_combined("CDH4K:finite", "7g9")),
    _e("8g9", "U(CD(H4(Q)))", "Z_2^9", (240, 0, 0, 0, 0, 0, 0, 1),
       lambda: steinberg_combined("CDH4Q:finite", "8g9")),
    # the graded-division grading of H_4(Q)
    _e("6g12", "Der(CD(H4(Q)),-)", "Z_4xZ_2^4", (48, 13, 0, 1), lambda: der_combined("CDH4Q:division", "6g12")),
    _e("7g10", "Instr(CD(H4(Q)))", "Z_4xZ_2^5", (98, 15, 0, 0, 1),
       lambda: instr_combined("CDH4Q:division", "7g10")),
    _e("8g10", "U(CD(H4(Q)))", "Z_4xZ_2^6", (192, 25, 0, 0, 0, 1),
       lambda: steinberg_combined("CDH4Q:division", "8g10")),
    # the Z_4^3 grading of the 56-dimensional structurable algebra
    _e("8g11", "Kan(CD(H4(Q)))", "ZxZ_4^3", (123, 40, 15), lambda: kantor_combined("CDH4Q:z43", "8g11")),
    _e("8g12", "U(CD(H4(Q)))", "Z_2^2xZ_4^3", (216, 14, 0, 1), lambda: steinberg_combined("CDH4Q:z43", "8g12")),
    _e("6g13", "Der(CD(H4(Q)),-)", "Z_4^3", (48, 15), lambda: der_combined("CDH4Q:z43", "6g13")),
    _e("7g11", "Instr(CD(H4(Q)))", "Z_4^3xZ_2", (102, 14, 1), lambda: instr_combined("CDH4Q:z43", "7g11")),
    _e("7g12", "Kan(CD(H4(K)))", "ZxZ_4^2xZ_2", (67, 27, 4), lambda: kantor_combined("CDH4K:z43", "7g12")),
    _e("7g13", "U(CD(H4(K)))", "Z_2^3xZ_4^2", (123, 3, 0, 1), lambda: steinberg_combined("CDH4K:z43", "7g13")),
    # the Z_5^3 grading
    _e("8g13-z5", "Z5-model of e8", "Z_5^3", (0, 124), _z5, label="Z_5^3"),
    # root space decompositions
    _e("cartan-e6", "g(pK,pC)", "Z^6", (72, 0, 0, 0, 0, 1), _cartan(("pK", "pC")), label="Cartan"),
    _e("cartan-e7", "g(pQ,pC)", "Z^7", (126, 0, 0, 0, 0, 0, 1), _cartan(("pQ", "pC")), label="Cartan"),
    _e("cartan-e8", "g(pC,pC)", "Z^8", (240, 0, 0, 0, 0, 0, 0, 1), _cartan(("pC", "pC")), label="Cartan"),
)

# auxiliary gradings: the ingredients of the recipes above


def _skeleton(kinds):
    def build():
        from .liebuild import z22_skeleton
        L = g_algebra(*kinds)
        return L, z22_skeleton(L)
    return build


def _theta_only(kinds):
    def build():
        from .gradlib import eigen_grading
        from .liebuild import theta_automorphism
        L = g_algebra(*kinds)
        return L, eigen_grading(L.algebra, [theta_automorphism(L)], [3], name="Theta")
    return build


def _five_only(kinds):
    def build():
        L = g_algebra(*kinds)
        return L, five_grading(L)
    return build


def _kantor_only(key):
    def build():
        L = kantor_algebra(key)
        return L, L.gradings["Z"]
    return build


def _steinberg_only(key):
    def build():
        L = steinberg_algebra(key)
        return L, L.gradings["Z2^2"]
    return build


_register(
    _e("skeleton-e6", "g(pK,pC)", "Z_2^2", None, _skeleton(("pK", "pC")), aux=True, fine=False,
       note="tri(S)+tri(S') in degree 0, iota_0, iota_1, iota_2 in the nonzero degrees"),
    _e("skeleton-e7", "g(pQ,pC)", "Z_2^2", None, _skeleton(("pQ", "pC")), aux=True, fine=False),
    _e("skeleton-e8", "g(pC,pC)", "Z_2^2", None, _skeleton(("pC", "pC")), aux=True, fine=False),
    _e("theta-e8", "g(Ok,Ok)", "Z_3", None, _theta_only(("Ok", "Ok")), aux=True, fine=False),
    _e("five-e8", "g(pC,pC)", "Z", None, _five_only(("pC", "pC")), aux=True, fine=False),
    _e("z4table-e8", "g(pC,pC)", "Z^4", None, lambda: table_only("pC", z4_table(), 4, "pC", "Z^4 table"),
       aux=True, fine=False),
    _e("z3table-e7", "g(pQ,pC)", "Z^3", None, lambda: table_only("pQ", z3_table(), 3, "pC", "Z^3 table"),
       aux=True, fine=False),
    _e("z2table-e6", "g(pK,pC)", "Z^2", None, lambda: table_only("pK", z2_table(), 2, "pC", "Z^2 table"),
       aux=True, fine=False),
    _e("kantor-e8", "Kan(CD(H4(Q)))", "Z", None, _kantor_only("CDH4Q"), aux=True, fine=False),
    _e("steinberg-e8", "U(CD(H4(Q)))", "Z_2^2", None, _steinberg_only("CDH4Q"), aux=True, fine=False),
    _e("z4-remark", "Kan(CD(H4(Q)))", "Z_4", None, lambda: kantor_combined("CDH4Q:finite", "z4-remark", z4=True),
       aux=True, fine=False, note="valid Z_4 grading, not fine"),
)


def catalog_ids(include_aux=True):
    return [k for k, e in ENTRIES.items() if include_aux or not e.aux]


def entry(id):
    try:
        return ENTRIES[id]
    except KeyError:
        raise CatalogError(f"unknown catalog id {id!r}") from None


def catalog(id):
    """(LieAlg, Grading) for a catalog id, with the declared data attached to the grading."""
    e = entry(id)
    L, g = e.build()
    g.declared = e.declared()
    if not e.fine:
        g.flags.add("not-fine")
    if e.aux:
        g.flags.add("auxiliary")
    return L, g


class EntryReport:
    def __init__(self, id, ok, checks, group=None, type=None, flags=()):
        self.id = id
        self.ok = ok
        self.checks = checks
        self.group = group
        self.type = type
        self.flags = set(flags)

    def status(self):
        if not self.ok:
            return "FAIL"
        return "PASS-WITH-FLAG" if "not-fine" in self.flags else "PASS"

    def to_json(self):
        return {"id": self.id, "status": self.status(), "checks": self.checks,
                "group": self.group.label() if self.group is not None else None,
                "type": list(self.type) if self.type is not None else None, "flags": sorted(self.flags)}


def verify_grading(g, declared_group=None, declared_type=None, universal=True, dim=None):
    """Checks of one grading against declared data; returns (ok, checks dict, group)."""
    checks = {}
    ok, wit = check_grading(g)
    checks["compatible"] = ok if ok else f"violation {wit}"
    t = type_of(g)
    checks["dimension"] = sum((i + 1) * h for i, h in enumerate(t)) == (dim or g.algebra.dim)
    if declared_type is not None:
        checks["type"] = t == tuple(declared_type) or f"got {t}, declared {tuple(declared_type)}"
    group = None
    if universal and ok is not True:
        checks["universal_group"] = "not computed, the grading check failed"
    elif universal:
        group, _ = universal_group(g)
        if declared_group is not None:
            checks["universal_group"] = group == declared_group or \
                f"got {group.label()}, declared {declared_group.label()}"
    good = all(v is True for v in checks.values())
    return good, checks, group


def verify_entry(id, universal=True):
    e = entry(id)
    L, g = catalog(id)
    ok, checks, group = verify_grading(g, e.group, e.type, universal)
    return EntryReport(id, ok, checks, group, type_of(g), g.flags)
