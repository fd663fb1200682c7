import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerlab.exact import GF, MultiPoly, det, finite_field, rank
from kummerlab.projgeom import (
    MINOR_ORDER,
    PluckerLine,
    ProjPoint,
    count_lines_p3,
    count_proj_points,
    enumerate_lines_p3,
    enumerate_proj_points,
    line_in_hypersurface,
    plucker_of_line,
    plucker_relation,
    random_line,
)
from kummerlab.quartics import DesmicParams, desmic_quartic


def test_axis_line():
    assert plucker_of_line((1, 0, 0, 0), (0, 1, 0, 0)).plucker == (1, 0, 0, 0, 0, 0)


def test_minors_example():
    line = plucker_of_line((1, 1, 1, 1), (1, 1, 1, -1))
    assert line.plucker == ProjPoint((0, 0, -2, -2, 2, 0)).coords


@pytest.mark.parametrize("n,q,count", [(1, 5, 6), (3, 7, 400), (4, 11, 16105)])
def test_point_counts(n, q, count):
    assert count_proj_points(n, q) == count
    assert sum(1 for _ in enumerate_proj_points(n, q)) == count


@pytest.mark.parametrize("q,count", [(5, 806), (7, 2850)])
def test_line_counts(q, count):
    lines = list(enumerate_lines_p3(q))
    assert len(lines) == count == count_lines_p3(q)
    assert len(set(lines)) == count
    assert all(plucker_relation(line.plucker) == 0 for line in lines)


def test_line_count_by_span_dedup():
    """Independent count at q = 5: every pair of distinct points, deduplicated by point set."""
    pts = list(enumerate_proj_points(3, 5))
    F = finite_field(5)
    seen = set()
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            line = PluckerLine(a.coords, b.coords, F)
            seen.add(frozenset(line.points()))
    assert len(seen) == 806


@pytest.mark.parametrize("q", [5, 7, 9, 11])
def test_counts_match_formula(q):
    assert sum(1 for _ in enumerate_proj_points(3, q)) == (q**4 - 1) // (q - 1)
    if q <= 9:
        assert sum(1 for _ in enumerate_lines_p3(q)) == (q * q + 1) * (q * q + q + 1)


def test_desmic_line_inside():
    _, f = desmic_quartic(DesmicParams(1, 2))
    assert line_in_hypersurface(plucker_of_line((1, 1, 1, 1), (0, 0, 0, 1)), f)


def test_axis_not_on_surface():
    z = MultiPoly.gens(4)
    f = z[0] ** 2 * z[1] ** 2 + z[2] ** 2 * z[3] ** 2
    assert not line_in_hypersurface(plucker_of_line((1, 0, 0, 0), (0, 1, 0, 0)), f)


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        line_in_hypersurface(plucker_of_line((1, 0, 0, 0), (0, 1, 0, 0)), MultiPoly.zero(4))


def test_degenerate_span_rejected():
    with pytest.raises(ValueError):
        plucker_of_line((1, 2, 3, 4), (2, 4, 6, 8))


def test_zero_point_rejected():
    with pytest.raises(ValueError):
        ProjPoint((0, 0, 0))


def compound(g, F):
    """Second compound matrix of g in the fixed minor order, written out directly."""
    return [
        [g[i][k] * g[j][l] - g[i][l] * g[j][k] for (k, l) in MINOR_ORDER]
        for (i, j) in MINOR_ORDER
    ]


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.sampled_from([7, 11, 13]))
def test_plucker_equivariance(seed, p):
    F = GF(p)
    rng = random.Random(seed)
    while True:
        g = [[F(rng.randrange(p)) for _ in range(4)] for _ in range(4)]
        if rank(g, F) == 4:
            break
    line = random_line(F, rng)
    v, w = line.rows
    gv = [sum((g[i][k] * v[k] for k in range(4)), F.zero) for i in range(4)]
    gw = [sum((g[i][k] * w[k] for k in range(4)), F.zero) for i in range(4)]
    moved = PluckerLine(gv, gw, F).plucker
    c = compound(g, F)
    img = [sum((c[r][s] * line.plucker[s] for s in range(6)), F.zero) for r in range(6)]
    assert ProjPoint(img, F).coords == moved


def vanishing_form(line, e, F):
    """det[z; v; w; e]: a linear form vanishing on the span of the line."""
    z = MultiPoly.gens(4, F)
    v, w = line.rows
    out = MultiPoly.zero(4, F)
    for i in range(4):
        minor = [[row[j] for j in range(4) if j != i] for row in (v, w, e)]
        out = out + z[i] * (F(-1) ** i * det(minor, F))
    return out


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.sampled_from([7, 11]), st.booleans())
def test_incidence_matches_brute_force(seed, q, through):
    F = finite_field(q)
    rng = random.Random(seed)
    z = MultiPoly.gens(4, F)
    line = random_line(F, rng)
    if through:  # a quartic known to contain the line
        l = vanishing_form(line, [F(rng.randrange(q)) for _ in range(4)], F)
        f = l * (z[0] ** 3 + z[1] * z[2] * z[3] * F(rng.randrange(1, q)))
    else:
        f = MultiPoly.zero(4, F)
        for _ in range(4):
            m = MultiPoly.const(F(rng.randrange(1, q)), 4, F)
            for _ in range(4):
                m = m * z[rng.randrange(4)]
            f = f + m
    if f.is_zero():
        return
    brute = all(f(list(pt.coords)) == 0 for pt in line.points())
    assert line_in_hypersurface(line, f) == brute
    if through:
        assert brute
