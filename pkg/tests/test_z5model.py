import pytest

from exforge.algcore import AlgebraSC
from exforge.gradlib import AbGroup
from exforge.lieanalysis import verify_lie
from exforge.z5model import (
    GAUGE, _bracket, build_invariant_brackets, component_sum, equivariance_defect, solve_scalars,
    z4_model_gradings, z4_model_type, z5cubed_grading,
)


@pytest.fixture(scope="module")
def sk():
    return build_invariant_brackets()


def test_skeleton_dims(sk):
    assert sk.dim == 248
    assert [len(sk.parts[i]) for i in range(5)] == [48, 50, 50, 50, 50]
    # one slot per pair i <= j with i + j != 0 mod 5, two when i + j = 0
    assert len(sk.slots) == 12


def test_slot_maps_are_equivariant(sk):
    assert equivariance_defect(sk) is None


def test_scalars(sk):
    v = solve_scalars(sk)
    assert set(v) == set(sk.slots)
    assert all(v[k] == GAUGE[k] for k in GAUGE)
    assert all(x == 1 for x in v.values())
    # the solution does not depend on the sampled equations
    assert solve_scalars(sk, seed=3) == v


def test_wrong_scalar_breaks_jacobi(sk):
    v = dict(solve_scalars(sk))
    v["l22"] = 2
    prods = {}
    for a in range(sk.dim):
        for b in range(a + 1, sk.dim):
            r = _bracket(sk, {a: 1}, {b: 1}, v)
            if r:
                prods[(a, b)] = r
                prods[(b, a)] = {c: -x for c, x in r.items()}
    A = AlgebraSC.from_products("bad", sk.labels, prods, 1, anticommutative=True)
    assert not verify_lie(A, "sampled", samples=2 * 10 ** 5)


def test_z5_cubed():
    L, g = z5cubed_grading()
    assert g.group == AbGroup(0, (5, 5, 5))
    assert g.check()[0]
    assert g.type() == (0, 124)
    assert g.zero_component_dim() == 0
    assert component_sum(g, (1, 0, 0)).dim == 8


def test_z4_linear_model_types():
    m = z4_model_gradings()
    assert z4_model_type(*m["Z4^3xZ2^2"]) == (216, 14, 0, 1)
    assert z4_model_type(*m["ZxZ4^3"]) == (115, 56, 7)
