import random
from itertools import combinations, permutations, product
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerlab.exact import GF, MultiPoly
from kummerlab.heisenberg import wedge_eigenbasis
from kummerlab.nieto import (
    DegenerateFiber,
    NODE,
    dline_points_mod_p,
    hyperplane_poly,
    jacobian_rank_on_N,
    m_equations,
    n_membership,
    plane_families,
    quintic_poly,
    s6_orbit,
    sign_group_order,
    singular_census_N,
    squaring_fiber,
)
from kummerlab.projgeom import ProjPoint, enumerate_proj_points


def test_membership_examples():
    assert n_membership(NODE).on_N
    assert n_membership((1, -1, 2, -2, 3, -3)).on_N
    m = n_membership((1, 0, 0, 0, 0, 0))
    assert not m.on_N and m.values[0] == 1


def test_node_hand_expansion():
    # three products equal -1 and three equal +1
    terms = [prod(NODE[j] for j in range(6) if j != i) for i in range(6)]
    assert sorted(terms) == [-1, -1, -1, 1, 1, 1]


def test_jacobian_at_node():
    assert jacobian_rank_on_N(NODE) == 1


def test_jacobian_on_dline_symbolic():
    a, b = MultiPoly.gens(2)
    zero = MultiPoly.zero(2)
    param = [zero, a, b, -a - b, zero, zero]
    assert all(g.substitute(param).is_zero() for g in quintic_poly().gradient())


def test_smooth_point_found_by_search():
    F = GF(11)
    for pt in enumerate_proj_points(4, 11):
        u = list(pt.coords) + [-sum(pt.coords, F.zero)]
        if all(x != 0 for x in u) and n_membership(u).on_N:
            assert jacobian_rank_on_N(u) == 2
            return
    pytest.fail("no smooth point with nonzero coordinates")


def test_not_on_N_rejected():
    with pytest.raises(ValueError):
        jacobian_rank_on_N((1, 0, 0, 0, 0, 0))


def test_family_counts():
    assert plane_families().counts() == (15, 15, 20, 10)


def test_families_contained_symbolically():
    fams = plane_families()
    assert all(f.contained_in_N() for f in fams.s_planes + fams.v_planes + fams.d_lines)


def test_identity_s_plane():
    a, b, c = MultiPoly.gens(3)
    assert quintic_poly().substitute([a, -a, b, -b, c, -c]).is_zero()


def test_v_plane_45():
    a, b, c = MultiPoly.gens(3)
    zero = MultiPoly.zero(3)
    assert quintic_poly().substitute([a, b, c, -a - b - c, zero, zero]).is_zero()


def test_orbits():
    assert len(s6_orbit(NODE)) == 10
    assert len(s6_orbit((1, 0, 0, 0, 0, 0))) == 6
    planes = {frozenset(p[4:]) for p in permutations(range(6))}
    assert len(planes) == 15


def test_fiber_generic():
    from kummerlab.dictionary import n_points_mod_p

    F = GF(13)
    admissible = [
        u for u in n_points_mod_p(13)
        if any(all(F.is_square(lam * c) for c in u) for lam in (F(1), F.nonsquare()))
    ]
    assert len(admissible) >= 10
    for u in admissible[:10]:
        assert n_membership(u).on_N
        assert squaring_fiber(u) == 32


def test_fiber_empty_off_square_class():
    from kummerlab.dictionary import n_points_mod_p

    F = GF(13)
    other = [
        u for u in n_points_mod_p(13)
        if not any(all(F.is_square(lam * c) for c in u) for lam in (F(1), F.nonsquare()))
    ]
    assert other and all(squaring_fiber(u) == 0 for u in other[:5])


def test_fiber_degenerate():
    F = GF(13)
    with pytest.raises(DegenerateFiber, match="degenerate"):
        squaring_fiber([F(1), F(-1), F(2), F(-2), F(0), F(0)])


def test_sign_group_with_epsilon():
    even = list(set(wedge_eigenbasis().signs.values()))
    assert sign_group_order(even) == 16
    eps = (-1, 1, 1, 1, 1, 1)
    assert sign_group_order(even + [eps]) == 32


def brute_census(p):
    """Pure-Python scan: points of N(F_p) where grad F_N is parallel to (1, ..., 1)."""
    F = GF(p)
    sing = set()
    for pt in enumerate_proj_points(4, p):
        u = list(pt.coords) + [-sum(pt.coords, F.zero)]
        if sum((prod(u[j] for j in range(6) if j != i) for i in range(6)), F.zero) != 0:
            continue
        grad = [sum((prod(c) for c in combinations([u[j] for j in range(6) if j != i], 4)), F.zero)
                for i in range(6)]
        if all(g == grad[0] for g in grad):
            sing.add(ProjPoint(u, F))
    return sing


@pytest.mark.parametrize("p", [7])
def test_census_matches_pure_python_scan(p):
    c = singular_census_N(p)
    assert set(c.singular) == brute_census(p)


def test_census_p11():
    c = singular_census_N(11)
    F = GF(11)
    nodes = {ProjPoint([F(x) for x in n.coords], F) for n in plane_families().nodes}
    assert set(c.nodes) == nodes
    assert set(c.dline_points) == dline_points_mod_p(11)
    assert c.anomalies == []


def test_census_thread_independent():
    a, b = singular_census_N(11, workers=1), singular_census_N(11, workers=3)
    assert a.singular == b.singular and a.points_on_N == b.points_on_N


# -- properties ---------------------------------------------------------------


def test_s6_invariance_all_720():
    h, f = hyperplane_poly(), quintic_poly()
    u = MultiPoly.gens(6)
    for perm in permutations(range(6)):
        img = [u[perm[i]] for i in range(6)]
        assert h.substitute(img) == h and f.substitute(img) == f


def test_squared_coordinates_land_on_N():
    x = MultiPoly.gens(6)
    sq = [v * v for v in x]
    h, f = m_equations()
    assert h == hyperplane_poly().substitute(sq)
    # F_N(x^2) is prod(x_i^2) * sum x_i^-2: each term omits exactly one square
    expect = sum((prod((sq[j] for j in range(6) if j != i), start=MultiPoly.const(1, 6))
                  for i in range(6)), MultiPoly.zero(6))
    assert f == expect


@st.composite
def n_points(draw):
    a, b, c = (draw(st.integers(-6, 6)) for _ in range(3))
    kind = draw(st.sampled_from(["S", "V", "D", "node"]))
    if kind == "S":
        return (a, -a, b, -b, c, -c)
    if kind == "V":
        return (a, b, c, -a - b - c, 0, 0)
    if kind == "D":
        return (a, b, -a - b, 0, 0, 0)
    return NODE


@settings(max_examples=60)
@given(n_points(), st.permutations(range(6)), st.integers(1, 9))
def test_jacobian_rank_invariant(u, perm, scale):
    if all(x == 0 for x in u):
        return
    r = jacobian_rank_on_N(u)
    moved = tuple(scale * u[perm[i]] for i in range(6))
    assert jacobian_rank_on_N(moved) == r
