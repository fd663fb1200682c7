"""Finite and arithmetic symplectic groups.

Sp(4, F_2) by exhaustive scan, the paramodular patterns for Gamma_{1,3} and
its level-2 subgroup, the involution V_3, the stabiliser embeddings of
SL(2,Z) x SL(2,Z), the index towers behind the component counts 20 and 15,
and the orbit-counting lemma [G:G']/[S:S'].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

import numpy as np

from .exact.fields import QQ, QuadExt, common_field
from .exact.linalg import mat_inv, mat_mul, transpose

J4 = ((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 0, 0), (0, -1, 0, 0))


def is_symplectic(m, field=None) -> bool:
    field = field or common_field(x for row in m for x in row)
    lhs = mat_mul(mat_mul(transpose(m), [list(r) for r in J4]), m)
    return all(field(lhs[i][j]) == J4[i][j] for i in range(4) for j in range(4))


# ---------------------------------------------------------------------------
# Sp(4, F_2)


@dataclass(frozen=True)
class Sp4F2:
    elements: np.ndarray  # (720, 4, 4) uint8
    codes: tuple  # 16-bit codes, row-major

    @property
    def order(self) -> int:
        return len(self.codes)

    def index(self, m) -> int:
        return self._lookup[_code(np.asarray(m, dtype=np.uint8) & 1)]

    @property
    def _lookup(self):
        return {c: i for i, c in enumerate(self.codes)}

    def product_table(self) -> np.ndarray:
        """Index of g_i g_j for all pairs (or -1 if not in the set)."""
        e = self.elements.astype(np.int64)
        prods = np.einsum("aij,bjk->abik", e, e) & 1
        weights = (1 << np.arange(15, -1, -1)).reshape(4, 4)
        codes = (prods * weights).sum(axis=(2, 3))
        lut = np.full(1 << 16, -1, dtype=np.int64)
        lut[np.array(self.codes)] = np.arange(self.order)
        return lut[codes]


def _code(m) -> int:
    bits = np.asarray(m).reshape(-1)
    return int(sum(int(b) << (15 - i) for i, b in enumerate(bits)))


@lru_cache(maxsize=None)
def sp4_f2_enumerate() -> Sp4F2:
    """All M over F_2 with M^T J M = J, from a scan of all 2^16 matrices."""
    codes = np.arange(1 << 16, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(15, -1, -1)) & 1).astype(np.int64)
    mats = bits.reshape(-1, 4, 4)
    j = np.array(J4, dtype=np.int64) % 2
    lhs = np.einsum("nji,jk,nkl->nil", mats, j, mats) % 2
    ok = np.all(lhs == j, axis=(1, 2))
    return Sp4F2(mats[ok].astype(np.uint8), tuple(int(c) for c in codes[ok]))


def class_sizes_from_table(table: np.ndarray) -> list:
    """Conjugacy class sizes from a full product table (index 0 need not be 1)."""
    n = table.shape[0]
    ident = next(i for i in range(n) if np.all(table[i] == np.arange(n)))
    inv = np.array([int(np.nonzero(table[i] == ident)[0][0]) for i in range(n)])
    seen = np.zeros(n, dtype=bool)
    sizes = []
    for g in range(n):
        if seen[g]:
            continue
        cls = {int(table[table[h, g], inv[h]]) for h in range(n)}
        for c in cls:
            seen[c] = True
        sizes.append(len(cls))
    return sorted(sizes)


def sp4_f2_class_sizes() -> list:
    return class_sizes_from_table(sp4_f2_enumerate().product_table())


def symmetric_group_class_sizes(n: int = 6) -> list:
    """Class sizes of S_n by brute-force conjugation (independent of cycle types)."""
    elems = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}

    def mul(p, q):  # (p q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(n))

    table = np.array([[index[mul(p, q)] for q in elems] for p in elems])
    return class_sizes_from_table(table)


def sp4_f2_closed(group: Sp4F2 | None = None) -> bool:
    group = group or sp4_f2_enumerate()
    table = group.product_table()
    if np.any(table < 0):
        return False
    ident = group.index(np.eye(4, dtype=np.uint8))
    return all(np.any(table[i] == ident) for i in range(group.order))


# ---------------------------------------------------------------------------
# congruence patterns

GAMMA13 = (
    (1, 1, 1, 3),
    (3, 1, 3, 3),
    (1, 1, 1, 3),
    (1, Fraction(1, 3), 1, 1),
)
GAMMA13_2 = tuple(tuple(2 * x for x in row) for row in GAMMA13)


def _in_lattice(x, step) -> bool:
    q = Fraction(x) / Fraction(step)
    return q.denominator == 1


def _rational_entries(m):
    out = []
    for row in m:
        r = []
        for x in row:
            if hasattr(x, "b") and hasattr(x, "a"):
                if x.b != 0:
                    return None
                x = x.a
            try:
                r.append(Fraction(x))
            except TypeError:
                return None
        out.append(r)
    return out


def gamma_member(m, level: str = "1,3") -> bool:
    """Membership in Gamma_{1,3} ("1,3") or Gamma_{1,3}(2) ("1,3;2") as
    displayed: symplectic over Q and the entrywise pattern (for level 2 the
    pattern applies to gamma - I)."""
    if level not in ("1,3", "1,3;2"):
        raise ValueError(f"unknown level {level!r}")
    q = _rational_entries(m)
    if q is None or len(q) != 4:
        return False
    if not is_symplectic(q, QQ):
        return False
    if level == "1,3":
        return all(_in_lattice(q[i][j], GAMMA13[i][j]) for i in range(4) for j in range(4))
    return all(
        _in_lattice(q[i][j] - (1 if i == j else 0), GAMMA13_2[i][j])
        for i in range(4) for j in range(4)
    )


def reduce_mod2(m) -> np.ndarray:
    """Entrywise reduction of a 2-integral rational matrix."""
    q = _rational_entries(m)
    out = np.zeros((4, 4), dtype=np.uint8)
    for i in range(4):
        for j in range(4):
            x = q[i][j]
            if x.denominator % 2 == 0:
                raise ValueError("entry is not 2-integral")
            out[i, j] = (x.numerator * pow(x.denominator, -1, 2)) % 2
    return out


# ---------------------------------------------------------------------------
# V_3


@lru_cache(maxsize=None)
def v3_matrix():
    K = QuadExt(QQ, 3)
    r3 = K(0, 1)
    ir3 = r3.inverse()
    z = K.zero
    return (
        (z, ir3, z, z),
        (r3, z, z, z),
        (z, z, z, r3),
        (z, z, ir3, z),
    )


def _to_field(m, field):
    return [[field(x) for x in row] for row in m]


def transvection(v, lam):
    """x -> x + lam <x, v> v with <x, v> = x^T J v; symplectic for every v."""
    lam = Fraction(lam)
    jv = [sum(J4[i][k] * v[k] for k in range(4)) for i in range(4)]
    # x^T J v = sum_i x_i (Jv)_i
    return [[Fraction(int(i == j)) + lam * v[i] * jv[j] for j in range(4)] for i in range(4)]


def gamma2_samples(n: int = 50, seed: int = 42) -> list:
    """Elements of Gamma_{1,3}(2): pattern-fitting transvections, S_1/S_2 images
    with the level-2 conditions, and short products of these."""
    rng = random.Random(seed)
    gens = []
    seen = set()

    def add(m):
        key = tuple(tuple(r) for r in m)
        if key not in seen and gamma_member(m, "1,3;2"):
            seen.add(key)
            gens.append([list(r) for r in m])

    lams = [Fraction(k) for k in (2, -2, 6, -6, 4, 12)] + [Fraction(2, 3), Fraction(-2, 3)]
    tries = 0
    while len(gens) < n // 2 and tries < 20000:
        tries += 1
        v = [rng.randint(-2, 2) for _ in range(4)]
        if not any(v):
            continue
        add(transvection(v, rng.choice(lams)))
    while len(gens) < 3 * n // 4:
        m, mp = _random_sl2(rng, 1), _random_sl2(rng, 1)
        add(s1_matrix(m, mp))
        m2 = _random_sl2(rng, 1)
        mp2 = _lift_congruent(m2, rng)
        try:
            add(s2_matrix(m2, mp2))
        except ValueError:
            pass
    base = list(gens)
    while len(gens) < n:
        a, b = rng.choice(base), rng.choice(base)
        add(mat_mul(a, b))
    return gens[:n]


def _random_sl2(rng, level2: int = 0):
    """Random SL(2, Z) element; level2=1 forces congruence to I mod 2."""
    while True:
        if level2:
            a = 2 * rng.randint(-3, 3) + 1
            b = 2 * rng.randint(-3, 3)
        else:
            a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        from math import gcd

        if gcd(a, b) != 1:
            continue
        # solve a d - b c = 1
        g, x, y = _egcd(a, b)
        d, c = x, -y
        if level2 and (c % 2 or d % 2 == 0):
            # shift (c, d) by multiples of (a, b) to fix parity
            for k in range(-4, 5):
                cc, dd = c + k * a, d + k * b
                if cc % 2 == 0 and dd % 2 == 1:
                    c, d = cc, dd
                    break
            else:
                continue
        t = rng.randint(-2, 2)
        if level2:
            t *= 2
        return [[a, b], [c + t * a, d + t * b]]


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def _lift_congruent(m, rng):
    """A second SL(2,Z) element congruent to m mod 4 (times a level-4 factor)."""
    k = [[1, 4 * rng.randint(-1, 1)], [0, 1]]
    return [[sum(m[i][t] * k[t][j] for t in range(2)) for j in range(2)] for i in range(2)]


@dataclass
class V3Report:
    square_is_identity: bool
    symplectic: bool
    samples: int
    conjugates_ok: int
    witness: object = None

    @property
    def ok(self) -> bool:
        return self.square_is_identity and self.symplectic and self.conjugates_ok == self.samples


def v3_checks(samples: int = 50, seed: int = 42) -> V3Report:
    K = QuadExt(QQ, 3)
    v = [list(r) for r in v3_matrix()]
    vi = mat_inv(v, K)
    sq = mat_mul(v, v)
    square = all(sq[i][j] == (1 if i == j else 0) for i in range(4) for j in range(4))
    sympl = is_symplectic(v, K)
    ok = 0
    witness = None
    gammas = gamma2_samples(samples, seed)
    for g in gammas:
        gk = _to_field(g, K)
        c1 = mat_mul(mat_mul(v, gk), vi)
        c2 = mat_mul(mat_mul(vi, gk), v)
        if gamma_member(c1, "1,3;2") and gamma_member(c2, "1,3;2"):
            ok += 1
        elif witness is None:
            witness = g
    return V3Report(square, sympl, len(gammas), ok, witness)


# ---------------------------------------------------------------------------
# stabiliser embeddings


def _check_sl2(m):
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1:
        raise ValueError(f"{m} is not in SL(2,Z)")


def s1_matrix(m, mp):
    """(M, M') -> [[a,0,b,0],[0,a',0,b'],[c,0,d,0],[0,c',0,d']]."""
    _check_sl2(m)
    _check_sl2(mp)
    (a, b), (c, d) = m
    (a2, b2), (c2, d2) = mp
    return [[Fraction(x) for x in row] for row in (
        (a, 0, b, 0),
        (0, a2, 0, b2),
        (c, 0, d, 0),
        (0, c2, 0, d2),
    )]


def s2_matrix(m, mp):
    """The displayed embedding of {(M, M') : M = M' mod 2}."""
    _check_sl2(m)
    _check_sl2(mp)
    (a, b), (c, d) = m
    (a2, b2), (c2, d2) = mp
    if any((x - y) % 2 for x, y in zip((a, b, c, d), (a2, b2, c2, d2))):
        raise ValueError("S_2 needs M = M' mod 2")
    F = Fraction
    return [
        [F(a), F(0), F(2 * b), F(3 * b)],
        [F(3 * (a - a2), 2), F(a2), F(3 * b), F(3 * (3 * b + b2), 2)],
        [F(3 * c2 + c, 2), F(-c2), F(d), F(3 * (d - d2), 2)],
        [F(-c2), F(2 * c2, 3), F(0), F(d2)],
    ]


def stabilizer_embeddings(pair, which: str):
    m, mp = pair
    if which == "S1":
        return s1_matrix(m, mp)
    if which == "S2":
        return s2_matrix(m, mp)
    raise ValueError(f"unknown stabiliser {which!r}")


@dataclass(frozen=True)
class SiegelPoint:
    """Z = [[t1, t2], [t2, t3]] over Q(i) with Im Z positive definite."""

    t1: object
    t2: object
    t3: object

    def __post_init__(self):
        y1, y2, y3 = (self._im(t) for t in (self.t1, self.t2, self.t3))
        if not (y1 > 0 and y1 * y3 - y2 * y2 > 0):
            raise ValueError("Im Z is not positive definite")

    @staticmethod
    def _im(t):
        return Fraction(t.b) if hasattr(t, "b") else Fraction(0)

    @property
    def matrix(self):
        return [[self.t1, self.t2], [self.t2, self.t3]]

    @classmethod
    def from_matrix(cls, z):
        if z[0][1] != z[1][0]:
            raise ValueError("Z is not symmetric")
        return cls(z[0][0], z[0][1], z[1][1])


def gaussian(a, b=0):
    return QuadExt(QQ, -1)(Fraction(a), Fraction(b))


def act_siegel(m, z: SiegelPoint) -> SiegelPoint:
    """(AZ + B)(CZ + D)^{-1}."""
    K = QuadExt(QQ, -1)
    mk = _to_field(m, K)
    A = [row[:2] for row in mk[:2]]
    B = [row[2:] for row in mk[:2]]
    C = [row[:2] for row in mk[2:]]
    D = [row[2:] for row in mk[2:]]
    Z = [[K(x) for x in row] for row in z.matrix]
    num = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(mat_mul(A, Z), B)]
    den = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(mat_mul(C, Z), D)]
    return SiegelPoint.from_matrix(mat_mul(num, mat_inv(den, K)))


def siegel_samples(kind: str, n: int = 10, seed: int = 42) -> list:
    """Exact points with t2 = 0 ("H1") or 3 t1 = 2 t2 ("H2")."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        x1, x3 = Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), 3)
        y1 = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        if kind == "H1":
            y3 = Fraction(rng.randint(1, 6), rng.randint(1, 3))
            out.append(SiegelPoint(gaussian(x1, y1), gaussian(0), gaussian(x3, y3)))
        elif kind == "H2":
            t1 = gaussian(x1, y1)
            y3 = Fraction(9, 4) * y1 + Fraction(rng.randint(1, 6), rng.randint(1, 3))
            out.append(SiegelPoint(t1, t1 * Fraction(3, 2), gaussian(x3, y3)))
        else:
            raise ValueError(kind)
    return out


def on_h1(z: SiegelPoint) -> bool:
    return z.t2 == 0


def on_h2(z: SiegelPoint) -> bool:
    return z.t1 * 3 == z.t2 * 2


@dataclass
class EmbeddingReport:
    which: str
    symplectic: int
    homomorphism: int
    stabilizes: int
    samples: int
    siegel_samples: int
    pattern_members: int
    witness: object = None


def embedding_checks(which: str, pairs: int = 50, points: int = 10, seed: int = 42):
    rng = random.Random(seed)

    def pair():
        m = _random_sl2(rng)
        if which == "S1":
            return m, _random_sl2(rng)
        # same class mod 2: multiply by a level-2 element
        k = _random_sl2(rng, 1)
        return m, [[sum(m[i][t] * k[t][j] for t in range(2)) for j in range(2)] for i in range(2)]

    def mul2(x, y):
        return [[sum(x[i][t] * y[t][j] for t in range(2)) for j in range(2)] for i in range(2)]

    sym = hom = member = 0
    witness = None
    for _ in range(pairs):
        (m1, n1), (m2, n2) = pair(), pair()
        g1, g2 = stabilizer_embeddings((m1, n1), which), stabilizer_embeddings((m2, n2), which)
        g12 = stabilizer_embeddings((mul2(m1, m2), mul2(n1, n2)), which)
        sym += is_symplectic(g1, QQ)
        if mat_mul(g1, g2) == g12:
            hom += 1
        elif witness is None:
            witness = ((m1, n1), (m2, n2))
        member += gamma_member(g1, "1,3")
    zs = siegel_samples("H1" if which == "S1" else "H2", points, seed)
    test = on_h1 if which == "S1" else on_h2
    stab = 0
    for z in zs:
        g = stabilizer_embeddings(pair(), which)
        img = act_siegel(g, z)
        stab += test(img)
    return EmbeddingReport(which, sym, hom, stab, pairs, len(zs), member, witness)


# ---------------------------------------------------------------------------
# index towers


def sl2_mod(n: int) -> list:
    """SL(2, Z/n) by enumeration of the n^4 candidates."""
    return [
        (a, b, c, d)
        for a, b, c, d in product(range(n), repeat=4)
        if (a * d - b * c) % n == 1 % n
    ]


@dataclass(frozen=True)
class Towers:
    sl2_z2: int
    sl2_z4: int
    s1_index: int
    g2: int
    g2pp: int
    g2p: int
    kernel_mod4: tuple

    @property
    def s2_tower(self) -> tuple:
        return (self.g2 // self.g2pp, self.g2pp // self.g2p)

    @property
    def s2_index(self) -> int:
        return self.g2 // self.g2p


@lru_cache(maxsize=None)
def index_towers() -> Towers:
    g2 = sl2_mod(2)
    g4 = sl2_mod(4)
    # S_1 / S_1(2) = SL(2, Z/2) x SL(2, Z/2), counted as pairs
    s1 = sum(1 for _ in product(g2, g2))

    def mod2(m):
        return tuple(x % 2 for x in m)

    ident2 = (1, 0, 0, 1)
    big = [(m, n) for m in g4 for n in g4 if mod2(m) == mod2(n)]
    mid = [(m, n) for m, n in big if mod2(m) == ident2 and mod2(n) == ident2]
    small = [(m, n) for m, n in mid if m == n]
    kernel = tuple(m for m in g4 if mod2(m) == ident2)
    return Towers(len(g2), len(g4), s1, len(big), len(mid), len(small), kernel)


@dataclass(frozen=True)
class ComponentCounts:
    products: int
    bielliptic: int
    sp4_order: int
    s1_index: int
    s2_index: int


def component_counts() -> ComponentCounts:
    order = sp4_f2_enumerate().order
    t = index_towers()
    if order % t.s1_index or order % t.s2_index:
        raise ArithmeticError("indices do not divide |Sp(4, F_2)|")
    return ComponentCounts(order // t.s1_index, order // t.s2_index, order, t.s1_index, t.s2_index)


# ---------------------------------------------------------------------------
# orbit counting


def _compose(p, q):
    return tuple(p[q[x]] for x in range(len(q)))


def _inverse(p):
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def generate_group(gens, degree: int) -> frozenset:
    ident = tuple(range(degree))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _compose(s, g)
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    return frozenset(group)


@dataclass(frozen=True)
class OrbitCount:
    lhs: int
    rhs: Fraction


def orbit_count_lemma(G, Gp, X, x0, act=None) -> OrbitCount:
    """Number of G'-orbits on X versus [G:G'] / [S:S'] (stabilisers of x0)."""
    act = act or (lambda g, x: g[x])
    G, Gp, X = frozenset(G), frozenset(Gp), list(X)
    if not Gp <= G:
        raise ValueError("G' is not a subgroup of G")
    for g in G:
        gi = _inverse(g)
        for h in Gp:
            if _compose(_compose(g, h), gi) not in Gp:
                raise ValueError("G' is not normal in G")
    if {act(g, x0) for g in G} != set(X):
        raise ValueError("G is not transitive on X")
    remaining = set(X)
    orbits = 0
    while remaining:
        x = remaining.pop()
        remaining -= {act(h, x) for h in Gp}
        orbits += 1
    s = sum(1 for g in G if act(g, x0) == x0)
    sp = sum(1 for g in Gp if act(g, x0) == x0)
    return OrbitCount(orbits, Fraction(len(G), len(Gp)) / Fraction(s, sp))


def random_lemma_instance(rng: random.Random, max_degree: int = 6, max_set: int = 12):
    """(G, G', X, x0, act): G generated by random permutations, G' the kernel
    of its action on a random orbit of subsets, X another orbit."""
    while True:
        n = rng.randint(3, max_degree)
        gens = [tuple(rng.sample(range(n), n)) for _ in range(rng.randint(1, 2))]
        G = generate_group(gens, n)

        def act(g, s):
            return frozenset(g[i] for i in s)

        def orbit(s):
            return {act(g, s) for g in G}

        k = rng.randint(1, n - 1)
        x0 = frozenset(rng.sample(range(n), k))
        X = orbit(x0)
        if len(X) > max_set:
            continue
        y0 = frozenset(rng.sample(range(n), rng.randint(1, n - 1)))
        Y = orbit(y0)
        Gp = frozenset(g for g in G if all(act(g, y) == y for y in Y))
        return G, Gp, X, x0, act


def lemma_trials(count: int = 100, seed: int = 42) -> list:
    rng = random.Random(seed)
    return [orbit_count_lemma(*random_lemma_instance(rng)) for _ in range(count)]
