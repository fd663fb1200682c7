"""Heisenberg-invariant quartics A q0 + B q1 + C q2 + D q3 + E q4.

Includes the F_AE family (A = E = 0), the desmic pencil with its twelve
nodes and sixteen common lines, exhaustive singular-point and line censuses
over F_q, and the linear solve for the invariant quartic through a line.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .exact.fields import QQ, Field, common_field, finite_field
from .exact.linalg import kernel, normalize_vector
from .exact.poly import MultiPoly
from .fqvec import tables
from .heisenberg import character_eigenlines
from .projgeom import PluckerLine, ProjPoint, line_in_hypersurface


@lru_cache(maxsize=None)
def q_basis(field: Field = QQ) -> tuple:
    z = MultiPoly.gens(4, field)
    sq = [v * v for v in z]
    return (
        sq[0] * sq[0] + sq[1] * sq[1] + sq[2] * sq[2] + sq[3] * sq[3],
        sq[0] * sq[1] + sq[2] * sq[3],
        sq[0] * sq[2] + sq[1] * sq[3],
        sq[0] * sq[3] + sq[1] * sq[2],
        z[0] * z[1] * z[2] * z[3],
    )


class QuarticCoeffs:
    """Projective point (A:B:C:D:E) of the invariant quartics."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field: Field | None = None):
        coeffs = list(coeffs)
        if len(coeffs) != 5:
            raise ValueError("need five coefficients")
        field = field or common_field(coeffs)
        coeffs = [field(c) for c in coeffs]
        if all(c == 0 for c in coeffs):
            raise ValueError("(0:0:0:0:0) is not a quartic")
        self.coeffs = tuple(coeffs)
        self.field = field

    def to_poly(self) -> MultiPoly:
        out = MultiPoly.zero(4, self.field)
        for c, q in zip(self.coeffs, q_basis(self.field)):
            if c != 0:
                out = out + q * c
        return out

    def normalized(self) -> tuple:
        return normalize_vector(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, QuarticCoeffs) and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __repr__(self):
        return "(" + ":".join(str(c) for c in self.normalized()) + ")"


def coeffs_of(f: MultiPoly) -> QuarticCoeffs | None:
    """Read (A:...:E) off an invariant quartic; None if f is not in the span."""
    field = f.field
    z4 = (4, 0, 0, 0)
    vals = [
        f.coefficient(z4),
        f.coefficient((2, 2, 0, 0)),
        f.coefficient((2, 0, 2, 0)),
        f.coefficient((2, 0, 0, 2)),
        f.coefficient((1, 1, 1, 1)),
    ]
    if all(v == 0 for v in vals):
        return None
    qc = QuarticCoeffs(vals, field)
    return qc if qc.to_poly() == f else None


# ---------------------------------------------------------------------------
# desmic pencil


@dataclass(frozen=True)
class DesmicParams:
    C: object
    D: object

    def __post_init__(self):
        if self.C == 0 and self.D == 0:
            raise ValueError("(C:D) = (0:0)")


def desmic_quartic(params: DesmicParams):
    """C(z0^2-z3^2)(z1^2-z2^2) + D(z0^2-z2^2)(z3^2-z1^2), expanded.

    Returns (QuarticCoeffs, MultiPoly); the coefficients are (0, C-D, -C, D, 0).
    """
    field = common_field([params.C, params.D])
    C, D = field(params.C), field(params.D)
    z = MultiPoly.gens(4, field)
    sq = [v * v for v in z]
    f = (sq[0] - sq[3]) * (sq[1] - sq[2]) * C + (sq[0] - sq[2]) * (sq[3] - sq[1]) * D
    return QuarticCoeffs([0, C - D, -C, D, 0], field), f


POLES = tuple(tuple(1 if i == k else 0 for i in range(4)) for k in range(4))


def cube_vertices() -> tuple:
    """The eight points (1:e1:e2:e3), e_i = +-1."""
    return tuple((1,) + e for e in product((1, -1), repeat=3))


def vertex_parity(v) -> str:
    """'even' / 'odd' by the number of minus signs of (+-1:+-1:+-1:+-1)."""
    minus = sum(1 for x in v if x == -1)
    return "even" if minus % 2 == 0 else "odd"


@lru_cache(maxsize=None)
def desmic_lines() -> tuple:
    """The 16 lines z_j = e_j (j != i), z_i free: one per pole and sign class."""
    out = []
    for i in range(4):
        others = [j for j in range(4) if j != i]
        for signs in product((1, -1), repeat=2):
            e = dict(zip(others, (1,) + signs))
            v = tuple(e.get(k, 0) for k in range(4))
            out.append(PluckerLine(v, POLES[i], QQ))
    return tuple(out)


def desmic_lines_symbolic() -> bool:
    """Every desmic line lies on every pencil member, as an identity in (C, D, s, t)."""
    ring = MultiPoly.gens(4)  # C, D, s, t
    C, D, s, t = ring
    for line in desmic_lines():
        v, w = line.rows
        z = [s * a + t * b for a, b in zip(v, w)]
        sq = [x * x for x in z]
        f = (sq[0] - sq[3]) * (sq[1] - sq[2]) * C + (sq[0] - sq[2]) * (sq[3] - sq[1]) * D
        if not f.is_zero():
            return False
    return True


def fae_poles_symbolic() -> bool:
    """Each coordinate pole is singular on B q1 + C q2 + D q3 for all (B, C, D)."""
    ring = MultiPoly.gens(7)  # B, C, D, z0..z3
    B, C, D = ring[:3]
    z = ring[3:]
    sq = [v * v for v in z]
    f = (sq[0] * sq[1] + sq[2] * sq[3]) * B + (sq[0] * sq[2] + sq[1] * sq[3]) * C \
        + (sq[0] * sq[3] + sq[1] * sq[2]) * D
    zero = MultiPoly.zero(3)
    Bc, Cc, Dc = MultiPoly.gens(3)
    for pole in POLES:
        subst = [Bc, Cc, Dc] + [MultiPoly.const(x, 3) for x in pole]
        for g in [f] + [f.diff(3 + i) for i in range(4)]:
            if g.substitute(subst) != zero:
                return False
    return True


@dataclass(frozen=True)
class ReyeRow:
    line: PluckerLine
    poles: tuple
    even: tuple
    odd: tuple

    @property
    def shape_ok(self) -> bool:
        return len(self.poles) == 1 and len(self.even) == 1 and len(self.odd) == 1


def reye_incidence(params: DesmicParams) -> list:
    """For each of the 16 lines, the singular points it carries."""
    field = common_field([params.C, params.D])
    if field(params.C) * field(params.D) == 0:
        raise ValueError("Reye incidence needs CD != 0")
    rows = []
    verts = cube_vertices()
    for line in desmic_lines():
        poles = tuple(p for p in POLES if line.contains(p))
        even = tuple(v for v in verts if vertex_parity(v) == "even" and line.contains(v))
        odd = tuple(v for v in verts if vertex_parity(v) == "odd" and line.contains(v))
        rows.append(ReyeRow(line, poles, even, odd))
    return rows


# ---------------------------------------------------------------------------
# censuses over F_q


def _kernel_field(f: MultiPoly, q: int) -> MultiPoly:
    field = finite_field(q)
    if f.field == field:
        return f
    if f.field != QQ:
        raise ValueError(f"polynomial over {f.field} cannot be read over F_{q}")
    return f.map_coeffs(field)


def singular_points(f: MultiPoly, q: int) -> list:
    """All points of P^3(F_q) where f and its gradient vanish (sorted)."""
    if q < 7:
        raise ValueError("singular census needs q >= 7")
    if f.nvars != 4 or not f.is_homogeneous() or f.total_degree() != 4:
        raise ValueError("need a homogeneous quartic in z0..z3")
    g = _kernel_field(f, q)
    tab = tables(g.field)
    pts = tab.projective_points(3)
    mask = tab.vanishing([g] + g.gradient(), pts)
    return sorted(ProjPoint(tab.decode_point(r), g.field) for r in pts[mask])


@dataclass
class LineCensus:
    q: int
    lines: list

    @property
    def count(self) -> int:
        return len(self.lines)


def lines_census(f: MultiPoly, q: int) -> LineCensus:
    """Every line of P^3(F_q) on {f = 0}.

    A line has echelon rows r1 (lead i) and r2 (lead j > i, r1[j] = 0), both
    normalised points of the surface, so candidates are pairs of surface
    points; each candidate is certified with :func:`line_in_hypersurface`.
    """
    if q < 7:
        raise ValueError("line census needs q >= 7")
    g = _kernel_field(f, q)
    tab = tables(g.field)
    pts = tab.projective_points(3)
    surf = pts[tab.vanishing([g], pts)]
    lead = np.argmax(surf != 0, axis=1)
    zero = g.field.encode(g.field.zero)
    compiled = tab.compile(g)
    d = g.total_degree()
    found = []
    for i in range(4):
        for j in range(i + 1, 4):
            r1 = surf[(lead == i) & (surf[:, j] == zero)]
            r2 = surf[lead == j]
            if r1.size == 0 or r2.size == 0:
                continue
            a = np.repeat(r1, r2.shape[0], axis=0)
            b = np.tile(r2, (r1.shape[0], 1))
            ok = np.ones(a.shape[0], dtype=bool)
            # r1 and r2 are on the surface; d - 1 further points a + t b settle it
            for t in range(1, d):
                tcode = g.field.encode(g.field.decode(t)) if t < q else t
                tb = tab.mul[tcode, b]
                ok &= tab.evaluate(compiled, tab.add[a, tb]) == 0
            for ra, rb in zip(a[ok], b[ok]):
                line = PluckerLine(tab.decode_point(ra), tab.decode_point(rb), g.field)
                if line_in_hypersurface(line, g):
                    found.append(line)
    found.sort(key=PluckerLine.sort_key)
    return LineCensus(q, found)


def lines_census_bruteforce(f: MultiPoly, q: int) -> LineCensus:
    """Reference census through the full line enumeration (small q only)."""
    from .projgeom import enumerate_lines_p3

    g = _kernel_field(f, q)
    found = [line for line in enumerate_lines_p3(q) if line_in_hypersurface(line, g)]
    found.sort(key=PluckerLine.sort_key)
    return LineCensus(q, found)


# ---------------------------------------------------------------------------
# quartic through a line


@dataclass(frozen=True)
class QuarticFit:
    status: str  # "unique", "non-unique" or "none"
    kernel: tuple  # basis of the solution space (coefficient tuples)

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)

    @property
    def quartic(self) -> QuarticCoeffs:
        if self.status != "unique":
            raise ValueError(f"no unique quartic ({self.status}, dim {self.kernel_dim})")
        return QuarticCoeffs(self.kernel[0])


def line_conditions(line: PluckerLine) -> list:
    """5 x 5 matrix: q_k evaluated at five points of the line.

    Restricting to the line gives a binary quartic; its vanishing is
    equivalent to vanishing at w and at v + t w for four values of t.
    """
    field = line.field
    v, w = line.rows
    basis = q_basis(field)
    pts = [list(w)]
    for k in range(4):
        t = field.decode(k) if field.is_finite else field(k)
        pts.append([a + t * b for a, b in zip(v, w)])
    return [[q(p) for q in basis] for p in pts]


def quartic_through_line(line: PluckerLine) -> QuarticFit:
    field = line.field
    if field.is_finite and field.order < 6:
        raise ValueError("need a field with at least 6 elements")
    ker = kernel(line_conditions(line), field)
    if not ker:
        return QuarticFit("none", ())
    return QuarticFit("unique" if len(ker) == 1 else "non-unique", tuple(ker))


# ---------------------------------------------------------------------------
# squares of fundamental quadrics


def is_fundamental_square(f) -> MultiPoly | None:
    """The fundamental quadric Q with to_poly(f) proportional to Q^2, else None."""
    qc = f if isinstance(f, QuarticCoeffs) else QuarticCoeffs(f)
    target = qc.to_poly()
    field = qc.field
    lead_exp, lead_c = target.terms[0]
    for _, quad in character_eigenlines(2):
        sq = quad.map_coeffs(field) if field != QQ else quad
        sq = sq * sq
        c = sq.coefficient(lead_exp)
        if c == 0:
            continue
        if sq * (lead_c / c) == target:
            return quad
    return None


# ---------------------------------------------------------------------------
# the Heisenberg normalizer acting on (A:B:C:D:E)


@lru_cache(maxsize=None)
def normalizer_generators() -> tuple:
    """(g, R_g) for generators g of the normalizer, R_g the 5 x 5 rational
    matrix of f -> f(g z) on coefficient vectors (up to scale)."""
    from .exact.fields import QuadraticField

    qi = QuadraticField(QQ, -1)
    i = qi.gen

    def perm(p):
        return [[1 if p[c] == r else 0 for c in range(4)] for r in range(4)]

    had = [[(-1) ** (bin(r & c).count("1")) for c in range(4)] for r in range(4)]
    gens = [
        perm((1, 0, 2, 3)),
        perm((0, 2, 1, 3)),
        perm((0, 1, 3, 2)),
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
        had,
        [[1, 0, 0, 0], [0, i, 0, 0], [0, 0, 1, 0], [0, 0, 0, i]],
    ]
    return tuple((tuple(tuple(r) for r in g), quartic_action(g)) for g in gens)


def quartic_action(g) -> tuple:
    """R with (sum a_k q_k)(g z) = sum (R a)_j q_j, rescaled to rationals."""
    field = common_field(x for row in g for x in row)
    z = MultiPoly.gens(4, field)
    lin = [sum((z[c] * field(g[r][c]) for c in range(4) if g[r][c] != 0), MultiPoly.zero(4, field))
           for r in range(4)]
    cols = []
    for q in q_basis(field):
        img = coeffs_of(q.substitute(lin))
        if img is None:
            raise ValueError("matrix does not normalise the invariant quartics")
        cols.append(list(img.coeffs))
    flat = [x for c in cols for x in c]
    lead = next(x for x in flat if x != 0)
    cols = [[x / lead for x in c] for c in cols]
    out = []
    for r in range(5):
        row = []
        for c in range(5):
            x = cols[c][r]
            if field != QQ:
                if x.b != 0:
                    raise ValueError("action is not rational up to scale")
                x = x.a
            row.append(QQ(x))
        out.append(tuple(row))
    return tuple(out)


def _primitive_int(m) -> tuple:
    """Integer matrix proportional to m, coprime entries, first nonzero > 0."""
    from math import gcd, lcm

    flat = [QQ(x) for row in m for x in row]
    den = lcm(*(x.denominator for x in flat))
    ints = [int(x * den) for x in flat]
    g = 0
    for x in ints:
        g = gcd(g, x)
    lead = next(x for x in ints if x)
    g = g if lead > 0 else -g
    return tuple(tuple(x // g for x in ints[5 * r: 5 * r + 5]) for r in range(5))


@lru_cache(maxsize=None)
def normalizer_matrices() -> tuple:
    """The image of the normalizer in PGL_5(Q) (closure of the generators),
    each element scaled so that its first nonzero entry is 1."""
    gens = [_primitive_int(r) for _, r in normalizer_generators()]
    ident = _primitive_int([[int(i == j) for j in range(5)] for i in range(5)])
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = _primitive_int([[sum(g[i][k] * a[k][j] for k in range(5)) for j in range(5)]
                                    for i in range(5)])
                if c not in group:
                    group.add(c)
                    nxt.append(c)
        frontier = nxt
    return tuple(
        tuple(tuple(QQ(x) / next(y for r in m for y in r if y) for x in row) for row in m)
        for m in sorted(group)
    )


def wedge_permutation(g) -> tuple | None:
    """pi with wedge^2(g) e_k proportional to e_pi(k) on the wedge eigenlines."""
    from .heisenberg import wedge_eigenbasis
    from .projgeom import MINOR_ORDER, plucker_minors

    field = common_field(x for row in g for x in row)
    basis = wedge_eigenbasis().basis
    cols = [plucker_minors([field(g[r][i]) for r in range(4)], [field(g[r][j]) for r in range(4)])
            for i, j in MINOR_ORDER]
    lines = [normalize_vector([field(x) for x in e]) for e in basis]
    out = []
    for e in basis:
        img = [sum((cols[c][r] * e[c] for c in range(6)), field.zero) for r in range(6)]
        k = next((k for k, ln in enumerate(lines) if normalize_vector(img) == ln), None)
        if k is None:
            return None
        out.append(k)
    return tuple(out)
