import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import SymmetricGroup

from kummerlab.exact import mat_mul
from kummerlab.modgroups import (
    SiegelPoint,
    act_siegel,
    class_sizes_from_table,
    component_counts,
    embedding_checks,
    gamma2_samples,
    gamma_member,
    generate_group,
    index_towers,
    is_symplectic,
    lemma_trials,
    orbit_count_lemma,
    reduce_mod2,
    s1_matrix,
    siegel_samples,
    sl2_mod,
    sp4_f2_class_sizes,
    sp4_f2_closed,
    sp4_f2_enumerate,
    stabilizer_embeddings,
    symmetric_group_class_sizes,
    v3_checks,
    v3_matrix,
    _random_sl2,
)
from kummerlab.nieto import plane_families

I2 = [[1, 0], [0, 1]]
I4 = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]


def test_sp4_order():
    assert sp4_f2_enumerate().order == 720


def test_sp4_closed():
    assert sp4_f2_closed()


def test_class_equation_matches_s6():
    sizes = sorted(sp4_f2_class_sizes())
    assert sizes == sorted(symmetric_group_class_sizes(6))
    oracle = sorted(len(c) for c in SymmetricGroup(6).conjugacy_classes())
    assert sizes == oracle


def test_gamma_identity():
    assert gamma_member(I4, "1,3") and gamma_member(I4, "1,3;2")


def test_s1_image_level_two():
    m = [[1, 2], [0, 1]]
    mp = [[1, 0], [2, 1]]
    assert gamma_member(s1_matrix(m, mp), "1,3;2")
    assert not gamma_member(s1_matrix([[0, -1], [1, 0]], I2), "1,3;2")


def test_v3_not_in_gamma():
    assert not gamma_member(v3_matrix(), "1,3")


def test_unknown_level():
    with pytest.raises(ValueError):
        gamma_member(I4, "2")


def test_v3_report():
    r = v3_checks(50, 42)
    assert r.square_is_identity and r.symplectic
    assert r.conjugates_ok == r.samples == 50


def test_embedding_identity():
    for which in ("S1", "S2"):
        assert stabilizer_embeddings((I2, I2), which) == I4


def test_s2_parity_violation():
    with pytest.raises(ValueError):
        stabilizer_embeddings(([[1, 1], [0, 1]], I2), "S2")


def test_embeddings_stabilize():
    for which in ("S1", "S2"):
        r = embedding_checks(which, pairs=50, points=10, seed=42)
        assert r.symplectic == r.homomorphism == r.samples == 50
        assert r.stabilizes == r.siegel_samples == 10


def test_sl2_orders():
    assert len(sl2_mod(2)) == 6
    assert len(sl2_mod(4)) == 48 == 4**3 * 3 // 4  # n^3 prod (1 - p^-2)


def test_towers():
    t = index_towers()
    assert t.s1_index == 36
    assert t.s2_tower == (6, 8) and t.s2_index == 48
    assert (t.g2, t.g2pp, t.g2p) == (384, 64, 8)


def test_kernel_mod_4():
    k = index_towers().kernel_mod4
    assert len(k) == 8
    for a, b, c, d in k:
        assert (a, d) in ((1, 1), (3, 3))
        assert b in (0, 2) and c in (0, 2)


def test_component_counts():
    c = component_counts()
    assert (c.products, c.bielliptic) == (20, 15)
    assert c.bielliptic == len(plane_families().v_planes)


def sym_group(n):
    return generate_group([tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])], n)


def test_lemma_s4_a4_v4():
    G = sym_group(4)
    assert len(G) == 24

    def sign(p):
        return (-1) ** sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])

    A4 = frozenset(g for g in G if sign(g) == 1)
    V4 = frozenset([(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)])
    for H in (A4, V4):
        r = orbit_count_lemma(G, H, range(4), 0)
        assert r.lhs == r.rhs == 1


def test_lemma_rejects_non_normal():
    G = sym_group(4)
    H = frozenset([(0, 1, 2, 3), (1, 0, 2, 3)])
    with pytest.raises(ValueError, match="normal"):
        orbit_count_lemma(G, H, range(4), 0)


def test_lemma_rejects_intransitive():
    G = frozenset([(0, 1, 2, 3), (1, 0, 2, 3)])
    with pytest.raises(ValueError, match="transitive"):
        orbit_count_lemma(G, G, range(4), 0)


def test_lemma_random_instances():
    trials = lemma_trials(100, 42)
    assert len(trials) == 100 and all(t.lhs == t.rhs for t in trials)


# -- properties ---------------------------------------------------------------


def test_siegel_action_preserves_half_space():
    mats = gamma2_samples(20, 7)
    for m in mats:
        assert is_symplectic(m)
        for z in siegel_samples("H1", 3, 11):
            w = act_siegel(m, z)  # construction re-checks positivity
            assert w.matrix[0][1] == w.matrix[1][0]


@settings(max_examples=50)
@given(st.integers(0, 10**6), st.sampled_from(["S1", "S2"]))
def test_embedding_homomorphism(seed, which):
    rng = random.Random(seed)

    def pair():
        m = _random_sl2(rng)
        if which == "S1":
            return m, _random_sl2(rng)
        k = _random_sl2(rng, 1)
        return m, [[sum(m[i][t] * k[t][j] for t in range(2)) for j in range(2)] for i in range(2)]

    (m1, n1), (m2, n2) = pair(), pair()
    mul = lambda a, b: [[sum(a[i][t] * b[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    lhs = stabilizer_embeddings((mul(m1, m2), mul(n1, n2)), which)
    rhs = mat_mul(stabilizer_embeddings((m1, n1), which), stabilizer_embeddings((m2, n2), which))
    assert lhs == rhs


def test_pattern_matrices_reduce_into_sp4_f2():
    group = sp4_f2_enumerate()
    codes = set(group.codes)
    for m in gamma2_samples(30, 3):
        r = reduce_mod2(m)
        assert group.index(r) is not None
    rng = random.Random(1)
    for _ in range(30):
        r = reduce_mod2(s1_matrix(_random_sl2(rng), _random_sl2(rng)))
        assert group.index(r) in range(group.order)
    assert len(codes) == 720


def test_class_sizes_from_table_on_s4():
    """The class-size routine reproduces S4's class equation 1 + 3 + 6 + 6 + 8."""
    G = sorted(sym_group(4))
    idx = {g: i for i, g in enumerate(G)}
    table = np.array([[idx[tuple(a[b[k]] for k in range(4))] for b in G] for a in G])
    assert sorted(class_sizes_from_table(table)) == [1, 3, 6, 6, 8]
    assert Counter(sorted(symmetric_group_class_sizes(4))) == Counter([1, 3, 6, 6, 8])
