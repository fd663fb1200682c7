import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerlab.exact import GF, MultiPoly, finite_field
from kummerlab.heisenberg import act_on_poly, group_elements, schrodinger_matrix
from kummerlab.projgeom import ProjPoint, plucker_of_line, random_line
from kummerlab.quartics import (
    POLES,
    DesmicParams,
    QuarticCoeffs,
    coeffs_of,
    cube_vertices,
    desmic_lines,
    desmic_lines_symbolic,
    desmic_quartic,
    fae_poles_symbolic,
    is_fundamental_square,
    lines_census,
    lines_census_bruteforce,
    normalizer_matrices,
    quartic_through_line,
    reye_incidence,
    singular_points,
)

z = MultiPoly.gens(4)


def test_desmic_one_zero():
    coeffs, f = desmic_quartic(DesmicParams(1, 0))
    assert coeffs.coeffs == (0, 1, -1, 0, 0)
    assert f == (z[0] ** 2 - z[3] ** 2) * (z[1] ** 2 - z[2] ** 2)


def test_desmic_one_one():
    coeffs, f = desmic_quartic(DesmicParams(1, 1))
    assert coeffs.coeffs == (0, 0, -1, 1, 0)
    assert QuarticCoeffs(coeffs.coeffs).to_poly() == f


def test_desmic_coefficients_match_expansion():
    for c, d in [(1, 2), (3, -5), (Fraction(1, 2), 7)]:
        coeffs, f = desmic_quartic(DesmicParams(c, d))
        assert coeffs.to_poly() == f and coeffs_of(f) == coeffs


def test_fae_singular_points():
    f = QuarticCoeffs([0, 1, 2, 4, 0]).to_poly()
    F = GF(11)
    assert set(singular_points(f, 11)) == {ProjPoint([F(x) for x in p], F) for p in POLES}


def test_desmic_twelve_points():
    _, f = desmic_quartic(DesmicParams(1, 2))
    F = GF(11)
    want = {ProjPoint([F(x) for x in v], F) for v in POLES + cube_vertices()}
    assert set(singular_points(f, 11)) == want


def test_fermat_smooth_mod_7():
    assert singular_points(QuarticCoeffs([1, 0, 0, 0, 0]).to_poly(), 7) == []


def test_singular_points_brute_force_oracle():
    """Direct evaluation of f and its gradient at every point of P^3(F_11)."""
    from kummerlab.projgeom import enumerate_proj_points

    f = QuarticCoeffs([1, 3, -2, 5, 1]).to_poly()
    F = GF(11)
    g = f.map_coeffs(F)
    grads = g.gradient()
    brute = [p for p in enumerate_proj_points(3, 11)
             if g(list(p.coords)) == 0 and all(h(list(p.coords)) == 0 for h in grads)]
    assert sorted(brute) == singular_points(f, 11)


def test_line_census_matches_brute_force():
    _, f = desmic_quartic(DesmicParams(1, 2))
    assert lines_census(f, 7).lines == lines_census_bruteforce(f, 7).lines


def test_fae_line_census_recorded():
    # no a-priori count; the census must agree with the brute-force oracle
    f = QuarticCoeffs([0, 1, 2, 4, 0]).to_poly()
    fast = lines_census(f, 11)
    assert fast.count >= 0
    assert fast.lines == lines_census_bruteforce(f, 11).lines


def test_common_lines_found_over_fp2():
    _, f = desmic_quartic(DesmicParams(1, 2))
    F = finite_field(49)
    found = set(lines_census(f, 49).lines)
    for line in desmic_lines():
        v, w = line.rows
        assert plucker_of_line([F(x) for x in v], [F(x) for x in w]) in found


def test_pencil_line_is_non_unique():
    fit = quartic_through_line(plucker_of_line((1, 1, 1, 0), (0, 0, 0, 1)))
    assert fit.status == "non-unique" and fit.kernel_dim >= 2


def test_unique_quartic_on_sampled_line():
    from kummerlab.dictionary import line_samples

    for s in line_samples(13, 3, seed=1):
        fit = quartic_through_line(s.line)
        assert fit.kernel_dim == 1 and fit.quartic == s.quartic


def test_line_on_no_quartic():
    from kummerlab.exact import rank
    from kummerlab.quartics import line_conditions

    rng = random.Random(3)
    F = GF(13)
    fits = [(line, quartic_through_line(line)) for line in (random_line(F, rng) for _ in range(20))]
    none = [line for line, fit in fits if fit.status == "none"]
    assert none
    assert all(rank(line_conditions(line), F) == 5 for line in none)


def test_reye_examples():
    rows = reye_incidence(DesmicParams(1, 2))
    assert len(rows) == 16 and all(r.shape_ok for r in rows)
    line = plucker_of_line((1, 1, 1, 0), (0, 0, 0, 1))
    row = next(r for r in rows if r.line == line)
    assert row.poles == ((0, 0, 0, 1),)
    assert row.even == ((1, 1, 1, 1),) and row.odd == ((1, 1, 1, -1),)
    diag = plucker_of_line((1, 1, 1, 1), (1, -1, -1, -1))
    assert diag.contains((1, 0, 0, 0))  # at s = 1: (1+s : 1-s : 1-s : 1-s)


def test_reye_needs_cd_nonzero():
    with pytest.raises(ValueError):
        reye_incidence(DesmicParams(1, 0))


def test_fundamental_squares():
    s = z[0] ** 2 + z[1] ** 2 + z[2] ** 2 + z[3] ** 2
    assert is_fundamental_square(QuarticCoeffs([1, 2, 2, 2, 0])).scale_to_monic() == s.scale_to_monic()
    b = z[0] * z[1] + z[2] * z[3]
    assert is_fundamental_square(QuarticCoeffs([0, 1, 0, 0, 2])).scale_to_monic() == b.scale_to_monic()
    assert is_fundamental_square(QuarticCoeffs([1, 1, 1, 1, 0])) is None


def test_symbolic_identities():
    assert fae_poles_symbolic()
    assert desmic_lines_symbolic()


def test_normalizer_image_has_order_720():
    assert len(normalizer_matrices()) == 720


# -- properties ---------------------------------------------------------------

coef = st.integers(-5, 5)


@settings(max_examples=40)
@given(st.tuples(coef, coef, coef, coef, coef).filter(any))
def test_invariance_is_structural(c):
    f = QuarticCoeffs(c).to_poly()
    assert all(act_on_poly(g, f) == f for g in group_elements()[::2])


@settings(max_examples=15)
@given(st.tuples(coef, coef, coef, coef, coef).filter(any))
def test_singular_set_stable_under_group(c):
    f = QuarticCoeffs(c).to_poly()
    F = GF(11)
    sing = set(singular_points(f, 11))
    for g in group_elements()[:16]:
        u = schrodinger_matrix(g)
        moved = {ProjPoint([sum((F(u[i][j]) * p[j] for j in range(4)), F.zero) for i in range(4)], F)
                 for p in sing}
        assert moved == sing


@settings(max_examples=30)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 15))
def test_through_line_contains_known_quartic(c, d, k):
    if c == d:
        return
    coeffs, _ = desmic_quartic(DesmicParams(c, d))
    F = GF(13)
    line = desmic_lines()[k]
    v, w = line.rows
    fit = quartic_through_line(plucker_of_line([F(x) for x in v], [F(x) for x in w]))
    from kummerlab.exact import solve_linear, transpose

    target = [F(x) for x in coeffs.coeffs]
    basis = [list(b) for b in fit.kernel]
    assert solve_linear(transpose(basis), target, F).consistent
