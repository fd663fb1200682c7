from itertools import product

import pytest
import sympy

from kummerlab.exact import MultiPoly, mat_mul
from kummerlab.heisenberg import (
    CENTRAL,
    IDENTITY,
    HeisElement,
    act_on_poly,
    center,
    character_eigenlines,
    fundamental_quadrics,
    group_elements,
    in_span,
    invariant_subspace,
    representation_defects,
    schrodinger_matrix,
    wedge_eigenbasis,
)
from kummerlab.quartics import q_basis

z = MultiPoly.gens(4)


def test_order_and_center():
    assert len(group_elements()) == 32
    assert sorted(center()) == sorted([IDENTITY, CENTRAL])


def test_representation_property():
    assert representation_defects() == []


def test_center_acts_trivially_on_quartics():
    f = z[0] ** 3 * z[1] + z[2] ** 2 * z[3] ** 2 * 5
    assert act_on_poly(CENTRAL, f) == f


def test_translation_swaps_basis():
    assert act_on_poly(HeisElement((0, 1), (0, 0)), z[0]) == z[1]


def test_character_sign():
    f = z[0] * z[1] + z[2] * z[3]
    assert act_on_poly(HeisElement((0, 0), (0, 1)), f) == -f


def test_action_is_a_group_action():
    f = z[0] ** 2 * z[1] + z[2] * z[3] ** 2 * 3 - z[1] ** 3
    for g, h in product(group_elements()[::3], group_elements()[::5]):
        assert act_on_poly(g * h, f) == act_on_poly(g, act_on_poly(h, f))


def test_degree_four_invariants():
    basis = invariant_subspace(4)
    assert len(basis) == 5
    assert all(in_span(q, basis) for q in q_basis())
    for q in basis:
        assert all(act_on_poly(g, q) == q for g in group_elements())


def test_degree_two_invariants():
    basis = invariant_subspace(2)
    assert len(basis) == 1
    assert in_span(sum((v * v for v in z), MultiPoly.zero(4)), basis)


def test_no_linear_invariants():
    assert invariant_subspace(1) == ()


def molien_dimension(d):
    """Coefficient of t^d in (1/|G|) sum 1/det(I - t U(g)), with sympy."""
    t = sympy.symbols("t")
    total = 0
    for g in group_elements():
        m = sympy.Matrix(schrodinger_matrix(g))
        total += 1 / (sympy.eye(4) - t * m).det()
    series = sympy.series(total / 32, t, 0, d + 1).removeO()
    return series.coeff(t, d)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_invariant_dimension_matches_molien(d):
    assert len(invariant_subspace(d)) == molien_dimension(d)


def test_ten_eigenlines():
    lines = character_eigenlines(2)
    assert len(lines) == 10
    assert len({alpha for alpha, _ in lines}) == 10


def test_named_quadrics_present():
    quads = {q.scale_to_monic() for _, q in character_eigenlines(2)}
    a = z[0] ** 2 + z[1] ** 2 - z[2] ** 2 - z[3] ** 2
    b = z[0] * z[1] + z[2] * z[3]
    assert a.scale_to_monic() in quads and b.scale_to_monic() in quads
    assert b * b == q_basis()[1] + q_basis()[4] * 2
    alpha = next(al for al, q in character_eigenlines(2) if q.scale_to_monic() == a.scale_to_monic())
    assert act_on_poly(HeisElement((1, 0), (0, 0)), a) == -a
    assert alpha[:2] != (0, 0)  # nontrivial on translations


def test_quadric_squares_are_invariant():
    basis = invariant_subspace(4)
    assert all(in_span(q * q, basis) for q in fundamental_quadrics())


def test_wedge_signs():
    wb = wedge_eigenbasis()
    signs = wb.signs
    assert all(sum(1 for s in v if s == -1) % 2 == 0 for v in signs.values())
    assert signs[CENTRAL] == (1,) * 6
    distinct = set(signs.values())
    assert len(distinct) == 16
    # closed under coordinatewise product: a subgroup of the even sign changes
    assert all(tuple(a * b for a, b in zip(u, v)) in distinct for u in distinct for v in distinct)


def test_wedge_weights_diagonalise_pluecker():
    wb = wedge_eigenbasis()
    p = [sympy.Rational(x) for x in (3, -1, 4, 1, -5, 9)]
    y = wb.coordinates(p)
    assert sum(c * v * v for c, v in zip(wb.weights, y)) == p[0] * p[3] + p[1] * p[4] + p[2] * p[5]


def test_schrodinger_homomorphism_spot():
    g, h = HeisElement((1, 0), (0, 1)), HeisElement((0, 1), (1, 1), -1)
    lhs = mat_mul([list(r) for r in schrodinger_matrix(g)], [list(r) for r in schrodinger_matrix(h)])
    assert lhs == [list(r) for r in schrodinger_matrix(g * h)]
