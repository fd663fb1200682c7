"""Projective points, lines in P^3 with Plücker coordinates, and enumeration
of P^n(F_q) and of the lines of P^3(F_q)."""

from __future__ import annotations

from itertools import product

from .exact.fields import Field, common_field, finite_field, scalar_key
from .exact.linalg import rref
from .exact.poly import MultiPoly

__all__ = [
    "ProjPoint",
    "PluckerLine",
    "MINOR_ORDER",
    "plucker_minors",
    "plucker_relation",
    "plucker_of_line",
    "enumerate_proj_points",
    "enumerate_lines_p3",
    "count_proj_points",
    "count_lines_p3",
    "line_in_hypersurface",
    "restrict_to_line",
    "random_line",
]

# all-plus Plücker relation: p01*p23 + p02*p31 + p03*p12 = 0
MINOR_ORDER = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))


class ProjPoint:
    """A point of projective space, scaled so its first nonzero entry is 1."""

    __slots__ = ("coords", "field")

    def __init__(self, coords, field: Field | None = None):
        coords = list(coords)
        field = field or common_field(coords)
        coords = [field(x) for x in coords]
        lead = next((x for x in coords if x != 0), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        inv = field.one / lead
        self.coords = tuple(x * inv for x in coords)
        self.field = field

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def sort_key(self):
        return tuple(scalar_key(x) for x in self.coords)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return "(" + ":".join(str(x) for x in self.coords) + ")"


def plucker_minors(v, w) -> tuple:
    """Raw 2x2 minors of the span matrix [v; w] in :data:`MINOR_ORDER`."""
    return tuple(v[i] * w[j] - v[j] * w[i] for i, j in MINOR_ORDER)


def plucker_relation(p):
    return p[0] * p[3] + p[1] * p[4] + p[2] * p[5]


class PluckerLine:
    """A line of P^3 stored by the reduced echelon form of a spanning pair."""

    __slots__ = ("rows", "plucker", "field")

    def __init__(self, v, w, field: Field | None = None):
        field = field or common_field(list(v) + list(w))
        rows, piv = rref([list(v), list(w)], field)
        if len(piv) != 2:
            raise ValueError("points do not span a line")
        self.rows = (tuple(rows[0]), tuple(rows[1]))
        self.field = field
        raw = plucker_minors(*self.rows)
        if plucker_relation(raw) != 0:  # pragma: no cover - identity of minors
            raise AssertionError("Plücker relation failed")
        self.plucker = ProjPoint(raw, field).coords

    def point(self, s, t) -> tuple:
        v, w = self.rows
        return tuple(s * a + t * b for a, b in zip(v, w))

    def points(self):
        """All points of the line over a finite field, in parameter order."""
        field = self.field
        pts = [ProjPoint(self.point(field.one, t), field) for t in field.elements()]
        pts.append(ProjPoint(self.rows[1], field))
        return pts

    def contains(self, p) -> bool:
        coords = p.coords if isinstance(p, ProjPoint) else tuple(p)
        _, piv = rref([list(self.rows[0]), list(self.rows[1]), list(coords)], self.field)
        return len(piv) == 2

    def __eq__(self, other):
        return isinstance(other, PluckerLine) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def sort_key(self):
        return tuple(scalar_key(x) for row in self.rows for x in row)

    def __repr__(self):
        return f"PluckerLine({list(self.rows[0])}, {list(self.rows[1])})"


def plucker_of_line(p, q) -> PluckerLine:
    p = p.coords if isinstance(p, ProjPoint) else tuple(p)
    q = q.coords if isinstance(q, ProjPoint) else tuple(q)
    if len(p) != 4 or len(q) != 4:
        raise ValueError("lines live in P^3")
    try:
        return PluckerLine(p, q)
    except ValueError as exc:
        raise ValueError("coincident points do not determine a line") from exc


def _check_q(q: int) -> Field:
    if q < 5:
        raise ValueError(f"unsupported field size {q}")
    return finite_field(q)


def count_proj_points(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def count_lines_p3(q: int) -> int:
    return (q * q + 1) * (q * q + q + 1)


def enumerate_proj_points(n: int, q: int):
    """Every point of P^n(F_q) once: by leading position, then by code order."""
    field = _check_q(q)
    elems = [field.decode(c) for c in range(q)]
    zero, one = field.zero, field.one
    for lead in range(n + 1):
        for tail in product(elems, repeat=n - lead):
            yield ProjPoint((zero,) * lead + (one,) + tail, field)


def enumerate_lines_p3(q: int):
    """Every line of P^3(F_q) once, as echelon forms with pivots i < j."""
    field = _check_q(q)
    elems = [field.decode(c) for c in range(q)]
    zero, one = field.zero, field.one
    for i in range(4):
        for j in range(i + 1, 4):
            free1 = [k for k in range(i + 1, 4) if k != j]
            free2 = list(range(j + 1, 4))
            for vals in product(elems, repeat=len(free1) + len(free2)):
                r1 = [zero] * 4
                r2 = [zero] * 4
                r1[i] = one
                r2[j] = one
                for k, x in zip(free1, vals):
                    r1[k] = x
                for k, x in zip(free2, vals[len(free1) :]):
                    r2[k] = x
                yield PluckerLine(r1, r2, field)


def restrict_to_line(f: MultiPoly, line: PluckerLine) -> MultiPoly:
    """f(s*v + t*w) as a binary form in (s, t)."""
    field = line.field
    s, t = MultiPoly.gens(2, field)
    v, w = line.rows
    images = [s * a + t * b for a, b in zip(v, w)]
    return f.map_coeffs(field).substitute(images) if f.field != field else f.substitute(images)


def line_in_hypersurface(line: PluckerLine, f: MultiPoly) -> bool:
    """Whether f vanishes on the whole line (checked at deg f + 1 points)."""
    if f.is_zero() or not f.is_homogeneous():
        raise ValueError("need a nonzero homogeneous polynomial")
    if f.nvars != 4:
        raise ValueError("need a polynomial in 4 variables")
    d = f.total_degree()
    field = line.field
    if field.is_finite and field.order < d:
        raise ValueError(f"F_{field.order} is too small to certify degree {d}")
    v, w = line.rows
    if f(list(w)) != 0:
        return False
    for k in range(d):
        t = field(k) if not field.is_finite else field.decode(k)
        if f([a + t * b for a, b in zip(v, w)]) != 0:
            return False
    return True


def random_line(field: Field, rng) -> PluckerLine:
    """Uniform-ish random line over a finite field (by random spanning pair)."""
    q = field.order
    while True:
        v = [field.decode(rng.randrange(q)) for _ in range(4)]
        w = [field.decode(rng.randrange(q)) for _ in range(4)]
        try:
            return PluckerLine(v, w, field)
        except ValueError:
            continue
