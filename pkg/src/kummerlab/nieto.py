"""Nieto's quintic N = {sum u = sum 1/u = 0} in P^5, its planes, lines and
nodes, the S6 symmetry, and the squaring map from the line variety M."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import combinations, permutations, product

import numpy as np

from .exact.fields import QQ, Field, GF, common_field
from .exact.linalg import rank
from .exact.poly import MultiPoly
from .fqvec import tables
from .projgeom import ProjPoint

NODE = (1, 1, 1, -1, -1, -1)


def hyperplane_poly(field: Field = QQ) -> MultiPoly:
    return sum(MultiPoly.gens(6, field), MultiPoly.zero(6, field))


def quintic_poly(field: Field = QQ) -> MultiPoly:
    """F_N = sum_i prod_{j != i} u_j, the cleared form of sum 1/u_i."""
    u = MultiPoly.gens(6, field)
    one = MultiPoly.const(1, 6, field)
    return sum(
        (reduce(lambda a, b: a * b, (u[j] for j in range(6) if j != i), one) for i in range(6)),
        MultiPoly.zero(6, field),
    )


def m_equations(field: Field = QQ) -> tuple:
    """(sum x^2, sum_i prod_{j != i} x_j^2) cutting out the line variety M."""
    x = MultiPoly.gens(6, field)
    sq = [v * v for v in x]
    return hyperplane_poly(field).substitute(sq), quintic_poly(field).substitute(sq)


def _elementary4(vals):
    """e_4 of five values."""
    total = 0
    for combo in combinations(vals, 4):
        total = total + reduce(lambda a, b: a * b, combo)
    return total


@dataclass(frozen=True)
class NMembership:
    on_N: bool
    values: tuple  # (sum u, F_N(u))


def n_membership(u) -> NMembership:
    coords = u.coords if isinstance(u, ProjPoint) else tuple(u)
    if len(coords) != 6:
        raise ValueError("points of N live in P^5")
    field = common_field(coords)
    s = hyperplane_poly(field)(coords)
    f = quintic_poly(field)(coords)
    return NMembership(s == 0 and f == 0, (s, f))


def jacobian_rank_on_N(u) -> int:
    """Rank of the Jacobian of (sum u, F_N) at a point of N (2 = smooth)."""
    coords = u.coords if isinstance(u, ProjPoint) else tuple(u)
    if not n_membership(coords).on_N:
        raise ValueError(f"{coords} is not on N")
    field = common_field(coords)
    grad = [_elementary4([coords[j] for j in range(6) if j != i]) for i in range(6)]
    return rank([[field.one] * 6, [field(g) for g in grad]], field)


# ---------------------------------------------------------------------------
# planes, lines, nodes


@dataclass(frozen=True)
class Family:
    """A linear subvariety of N given by a parametrisation u = u(params)."""

    kind: str  # "S", "V" or "D"
    label: tuple
    param: tuple  # six MultiPoly in the parameters

    def contained_in_N(self) -> bool:
        return (
            hyperplane_poly().substitute(self.param).is_zero()
            and quintic_poly().substitute(self.param).is_zero()
        )

    def point(self, *values):
        return tuple(p(list(values)) for p in self.param)


def perfect_matchings(items=tuple(range(6))):
    items = list(items)
    if not items:
        yield ()
        return
    first = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1 :]
        for m in perfect_matchings(rest):
            yield ((first, items[k]),) + m


def s_plane(matching) -> Family:
    a = MultiPoly.gens(3)
    param = [None] * 6
    for (i, j), t in zip(matching, a):
        param[i] = t
        param[j] = -t
    return Family("S", tuple(matching), tuple(param))


def v_plane(i: int, j: int) -> Family:
    a, b, c = MultiPoly.gens(3)
    rest = [k for k in range(6) if k not in (i, j)]
    zero = MultiPoly.zero(3)
    param = [zero] * 6
    for k, t in zip(rest, (a, b, c, -a - b - c)):
        param[k] = t
    return Family("V", (i, j), tuple(param))


def d_line(i: int, j: int, k: int) -> Family:
    a, b = MultiPoly.gens(2)
    rest = [m for m in range(6) if m not in (i, j, k)]
    zero = MultiPoly.zero(2)
    param = [zero] * 6
    for m, t in zip(rest, (a, b, -a - b)):
        param[m] = t
    return Family("D", (i, j, k), tuple(param))


@dataclass(frozen=True)
class PlaneFamilies:
    s_planes: tuple
    v_planes: tuple
    d_lines: tuple
    nodes: tuple

    def counts(self) -> tuple:
        return (len(self.s_planes), len(self.v_planes), len(self.d_lines), len(self.nodes))


@lru_cache(maxsize=None)
def plane_families() -> PlaneFamilies:
    s = tuple(s_plane(m) for m in perfect_matchings())
    v = tuple(v_plane(i, j) for i, j in combinations(range(6), 2))
    d = tuple(d_line(*c) for c in combinations(range(6), 3))
    nodes = tuple(sorted(s6_orbit(ProjPoint(NODE))))
    return PlaneFamilies(s, v, d, nodes)


def s6_orbit(p, as_projective: bool = True) -> set:
    coords = p.coords if isinstance(p, ProjPoint) else tuple(p)
    out = set()
    for perm in permutations(range(len(coords))):
        img = tuple(coords[perm[i]] for i in range(len(coords)))
        out.add(ProjPoint(img) if as_projective else img)
    return out


# ---------------------------------------------------------------------------
# squaring map


class DegenerateFiber(ValueError):
    """Some coordinate vanishes, so the squaring fibre is not the generic one."""


def squaring_fiber(u) -> int:
    """Number of x in P^5(F_p) with x_i^2 = lam * u_i for a common lam != 0."""
    coords = u.coords if isinstance(u, ProjPoint) else tuple(u)
    field = common_field(coords)
    if not field.is_finite:
        raise ValueError("fibre counts need a finite field")
    if any(c == 0 for c in coords):
        raise DegenerateFiber("degenerate")
    found = set()
    for lam in field.elements():
        if lam == 0:
            continue
        roots = [field.sqrt(lam * c) for c in coords]
        if any(r is None for r in roots):
            continue
        for signs in product((1, -1), repeat=len(coords)):
            found.add(ProjPoint([s * r for s, r in zip(signs, roots)], field))
    return len(found)


def sign_group_order(generators) -> int:
    """Order of the subgroup of {+-1}^n / {+-1} generated by sign vectors."""

    def norm(v):
        return v if v[0] == 1 else tuple(-x for x in v)

    n = len(generators[0])
    group = {tuple([1] * n)}
    frontier = list(group)
    gens = [norm(tuple(g)) for g in generators]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = norm(tuple(x * y for x, y in zip(a, g)))
                if c not in group:
                    group.add(c)
                    nxt.append(c)
        frontier = nxt
    return len(group)


# ---------------------------------------------------------------------------
# singular census over F_p


@dataclass
class NCensus:
    p: int
    points_on_N: int
    singular: list = field(default_factory=list)
    nodes: list = field(default_factory=list)
    dline_points: list = field(default_factory=list)
    anomalies: list = field(default_factory=list)


def _census_chunk(tab, pts: np.ndarray):
    """Return (on_N mask, singular mask) for a block of P^4 points (u0..u4)."""
    add, mul, neg = tab.add, tab.mul, tab.neg
    u = np.empty((pts.shape[0], 6), dtype=np.int32)
    u[:, :5] = pts
    s = pts[:, 0]
    for k in range(1, 5):
        s = add[s, pts[:, k]]
    u[:, 5] = neg[s]

    def prod(cols):
        acc = u[:, cols[0]]
        for c in cols[1:]:
            acc = mul[acc, u[:, c]]
        return acc

    fn = np.zeros(pts.shape[0], dtype=np.int32)
    for i in range(6):
        fn = add[fn, prod([j for j in range(6) if j != i])]
    on = fn == 0
    idx = np.nonzero(on)[0]
    sub = u[idx]
    grads = []
    for i in range(6):
        rest = [j for j in range(6) if j != i]
        g = np.zeros(idx.size, dtype=np.int32)
        for combo in combinations(rest, 4):
            t = sub[:, combo[0]]
            for c in combo[1:]:
                t = mul[t, sub[:, c]]
            g = add[g, t]
        grads.append(g)
    sing_sub = np.ones(idx.size, dtype=bool)
    for g in grads[1:]:
        sing_sub &= g == grads[0]
    sing = np.zeros(pts.shape[0], dtype=bool)
    sing[idx[sing_sub]] = True
    return on, sing, u


def singular_census_N(p: int, workers: int = 1) -> NCensus:
    """Exhaustive scan of N(F_p); singular points classified, anomalies kept."""
    if p < 7:
        raise ValueError("census needs p >= 7")
    fld = GF(p)
    tab = tables(fld)
    pts = tab.projective_points(4)
    chunks = np.array_split(np.arange(pts.shape[0]), max(1, workers))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda ix: _census_chunk(tab, pts[ix]), chunks))
    else:
        parts = [_census_chunk(tab, pts[ix]) for ix in chunks]

    census = NCensus(p, sum(int(on.sum()) for on, _, _ in parts))
    node_set = {ProjPoint([fld(x) for x in n.coords], fld) for n in plane_families().nodes}
    for _, sing, u in parts:
        for row in u[sing]:
            pt = ProjPoint([fld.decode(c) for c in row], fld)
            census.singular.append(pt)
    census.singular.sort()
    for pt in census.singular:
        if pt in node_set:
            census.nodes.append(pt)
        elif sum(1 for c in pt if c == 0) >= 3:
            census.dline_points.append(pt)
        else:
            census.anomalies.append(pt)
    return census


def dline_points_mod_p(p: int) -> set:
    """All F_p points of the twenty D-lines."""
    fld = GF(p)
    out = set()
    for fam in plane_families().d_lines:
        for a, b in product(range(p), repeat=2):
            if a == 0 and b == 0:
                continue
            coords = [poly.map_coeffs(fld)([fld(a), fld(b)]) for poly in fam.param]
            if any(c != 0 for c in coords):
                out.add(ProjPoint(coords, fld))
    return out
