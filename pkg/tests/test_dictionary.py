from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerlab.dictionary import (
    ANCHOR_B,
    DictMap,
    Incidence,
    apply_dictionary,
    eigen_squares,
    fit_dictionary,
    flip_witness,
    incidence_residuals,
    intertwining_check,
    labeling_obstruction,
    line_samples,
    node_matching,
    rational_reconstruction,
    related_by_symmetry,
    squaring_route,
    validate_dictionary,
)
from kummerlab.exact import GF, QQ, normalize_vector
from kummerlab.nieto import n_membership, plane_families
from kummerlab.projgeom import ProjPoint
from kummerlab.quartics import DesmicParams, desmic_lines, desmic_quartic, is_fundamental_square

EXPECTED = """\
# rows A..E acting on u0..u5, modulo the all-ones row
A 0 0 0 0 -1/4 -1/4
B -1/2 -1/2 1/2 1/2 0 0
C -1/2 1/2 -1/2 1/2 0 0
D -1/2 1/2 1/2 -1/2 0 0
E 0 0 0 0 -2 2
labeling none
"""


@lru_cache(maxsize=None)
def fitted():
    return fit_dictionary()


def test_fit_default():
    res = fitted()
    assert res.dictionary.to_text() == EXPECTED
    assert res.candidates == 4 and len(res.survivors) == 4
    assert res.symmetric_survivors
    assert set(res.per_field) == {7, 11, 13}


def test_b_row_anchor():
    b = fitted().dictionary.matrix[1]
    assert normalize_vector(b) == normalize_vector([Fraction(x) for x in (-1, -1, 1, 1, 0, 0)])
    assert b == ANCHOR_B


def test_node_example_is_a_square():
    d = fitted().dictionary
    a = apply_dictionary(d, (-1, 1, 1, 1, -1, -1))
    assert is_fundamental_square(a) is not None


def test_all_nodes_squares_of_distinct_quadrics():
    d = fitted().dictionary
    quads = [is_fundamental_square(apply_dictionary(d, n.coords)) for n in plane_families().nodes]
    assert all(q is not None for q in quads)
    assert len({q.scale_to_monic() for q in quads}) == 10


def test_dline_to_pencil():
    d = fitted().dictionary
    for a, b in [(1, 2), (3, -7), (5, 1)]:
        u = (0, a, b, -a - b, 0, 0)
        A, B, C, D, E = d.image(u)
        assert A == E == 0 and B + C + D == 0


def test_vplane_to_fae():
    d = fitted().dictionary
    A, _, _, _, E = d.image((1, 2, 3, -6, 0, 0))
    assert A == E == 0


def test_rational_desmic_lines_in_the_fit():
    """The 16 common lines with a pencil member as their quartic leave the fit unchanged."""
    coeffs, _ = desmic_quartic(DesmicParams(1, 2))
    extra = [Incidence(line, coeffs, eigen_squares(line)) for line in desmic_lines()]
    base = [s for p in (7, 11) for s in line_samples(p, 40, 42, distinct=False)]
    res = fit_dictionary(samples=base + extra)
    assert res.dictionary.same_map(fitted().dictionary)
    assert res.per_field[0] == [0, 1, 2, 3]
    assert all(r == 0 for r in incidence_residuals(res.dictionary, extra))


def test_fit_needs_two_primes():
    with pytest.raises(ValueError):
        fit_dictionary(primes=(11,))
    with pytest.raises(ValueError):
        fit_dictionary(samples=line_samples(11, 40, 42, distinct=False))


def test_stable_across_primes():
    a = fit_dictionary(primes=(7, 11))
    b = fit_dictionary(primes=(11, 13))
    assert a.dictionary.same_map(b.dictionary)


def test_validation():
    rep = validate_dictionary(fitted().dictionary)
    assert rep.ok, [c for c in rep.checks if not c.ok]
    assert rep.by_name("nodes.squares").detail.startswith("10/10")
    assert rep.by_name("holdout.incidence.p11").ok and rep.by_name("holdout.incidence.p13").ok


def test_intertwining():
    images, orbit = intertwining_check(fitted().dictionary)
    assert len(images) == 15 and images == orbit


def test_survivors_related_by_symmetry():
    res = fitted()
    for d in res.survivors:
        assert related_by_symmetry(res.dictionary, d) is not None


def test_node_search_determined():
    m = node_matching()
    assert m.ambiguous == 0 and m.unreconstructed == 0 and len(m.candidates) == 4


def test_no_labeling():
    obs = labeling_obstruction(fitted().dictionary)
    assert obs and all(t != p for _, t, p in obs)
    assert fitted().dictionary.labeling is None


def test_squaring_route_infeasible_with_witness():
    samples = line_samples(11, 40, 42, distinct=False)
    rep = squaring_route(samples, 11)
    assert not rep.feasible and rep.nontrivial_kernel == 0
    line, other, a, b = rep.witness
    F = GF(11)
    assert ProjPoint(eigen_squares(line), F) == ProjPoint(eigen_squares(other), F)
    assert a != b


def test_flip_witness_deterministic():
    assert flip_witness(13, 42) == flip_witness(13, 42)


def test_text_round_trip():
    d = fitted().dictionary
    assert DictMap.from_text(d.to_text()) == d
    lab = DictMap(d.matrix, (1, 0, 2, 3, 4, 5))
    assert DictMap.from_text(lab.to_text()).labeling == (1, 0, 2, 3, 4, 5)


@pytest.mark.parametrize("text", [
    "A 1 2 3\n",
    "A 0 0 0 0 0 1\nB 0 0 0 0 1 0\n",
    "Q 1 1 1 1 1 1\n",
])
def test_text_errors(text):
    with pytest.raises(ValueError):
        DictMap.from_text(text)


def test_rational_reconstruction():
    m = 1000003
    for x in (Fraction(-1, 4), Fraction(3, 7), Fraction(0), Fraction(-2)):
        a = x.numerator * pow(x.denominator, -1, m) % m
        assert rational_reconstruction(a, m) == x


def test_image_requires_hyperplane():
    with pytest.raises(ValueError):
        fitted().dictionary.image((1, 0, 0, 0, 0, 0))


def test_samples_deterministic():
    a = line_samples(13, 10, 42)
    b = line_samples(13, 10, 42)
    assert [s.line for s in a] == [s.line for s in b]
    assert len({s.quartic for s in a}) == 10


# -- properties ---------------------------------------------------------------

small = st.integers(-9, 9)


@settings(max_examples=50)
@given(small, small, small, st.sampled_from(range(15)))
def test_vplane_images_in_fae_translates(a, b, c, k):
    if a == b == c == 0:
        return
    d = fitted().dictionary
    fam = plane_families().v_planes[k]
    u = fam.point(Fraction(a), Fraction(b), Fraction(c))
    if all(x == 0 for x in u):
        return
    from kummerlab.dictionary import vplane_image

    img = d.image(u)
    plane = vplane_image(d, fam)
    from kummerlab.exact import solve_linear, transpose

    assert solve_linear(transpose([list(r) for r in plane]), list(img), QQ).consistent


@settings(max_examples=30)
@given(small, small, small)
def test_image_preimage_round_trip(a, b, c):
    u = (a, -a, b, -b, c, -c)
    if not any(u):
        return
    d = fitted().dictionary
    assert n_membership(u).on_N
    back = d.preimage(d.image(u), QQ)
    assert ProjPoint(back) == ProjPoint(u)
