"""j-invariant of the elliptic curves on a desmic surface.

Tangent cone at the pole (1:0:0:0) -> conic of directions; the directions to
the four even vertices are the branch points; their cross-ratio (through a
projection of the conic to P^1) gives lambda and then j.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact.fields import Field, common_field
from .exact.linalg import det, solve_linear
from .exact.poly import MultiPoly
from .projgeom import ProjPoint
from .quartics import DesmicParams, desmic_quartic


class DegenerateParameters(ValueError):
    pass


@dataclass(frozen=True)
class ConicForm:
    """Symmetric 3 x 3 matrix M; the conic is x^T M x = 0."""

    matrix: tuple

    @property
    def field(self) -> Field:
        return common_field(x for row in self.matrix for x in row)

    def __call__(self, x):
        m = self.matrix
        return sum((x[i] * m[i][j] * x[j] for i in range(3) for j in range(3)), 0)

    def polar(self, x) -> tuple:
        """Coefficients of the tangent line (polar of x)."""
        m = self.matrix
        return tuple(sum((m[i][j] * x[j] for j in range(3)), 0) for i in range(3))

    def is_smooth(self) -> bool:
        return det([list(r) for r in self.matrix], self.field) != 0

    def to_poly(self) -> MultiPoly:
        y = MultiPoly.gens(3, self.field)
        out = MultiPoly.zero(3, self.field)
        for i in range(3):
            for j in range(3):
                if self.matrix[i][j] != 0:
                    out = out + y[i] * y[j] * self.matrix[i][j]
        return out

    @classmethod
    def from_poly(cls, f: MultiPoly) -> "ConicForm":
        if f.nvars != 3 or not f.is_homogeneous() or f.total_degree() != 2:
            raise ValueError("need a ternary quadratic form")
        half = f.field.one / 2
        m = [[f.field.zero] * 3 for _ in range(3)]
        for e, c in f.terms:
            idx = [i for i in range(3) for _ in range(e[i])]
            i, j = idx
            if i == j:
                m[i][i] = c
            else:
                m[i][j] = m[j][i] = c * half
        return cls(tuple(tuple(r) for r in m))


def tangent_cone(f: MultiPoly, node) -> ConicForm:
    """Quadratic part of f at a singular point, in the chart z_i = 1 (i the
    first nonzero coordinate), variables the remaining z_j in order."""
    if f.nvars != 4:
        raise ValueError("need a surface in P^3")
    node = node if isinstance(node, ProjPoint) else ProjPoint(node, f.field)
    field = f.field
    p = [field(x) for x in node.coords]
    if f(p) != 0 or any(g(p) != 0 for g in f.gradient()):
        raise ValueError(f"{node} is not a singular point")
    i = next(k for k in range(4) if p[k] != 0)
    rest = [k for k in range(4) if k != i]
    y = MultiPoly.gens(3, field)
    images = [None] * 4
    images[i] = MultiPoly.const(p[i], 3, field)
    for k, var in zip(rest, y):
        images[k] = var + p[k]
    quad = f.substitute(images).homogeneous_part(2)
    if quad.is_zero():
        raise ValueError("quadratic part vanishes: not a node")
    return ConicForm.from_poly(quad)


# ---------------------------------------------------------------------------
# cross-ratio


@dataclass(frozen=True)
class CrossRatio:
    """A point of P^1 stored as (num : den); den = 0 is infinity."""

    num: object
    den: object

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    @property
    def value(self):
        return None if self.is_infinite else self.num / self.den

    def orbit(self) -> frozenset:
        """The six values lam, 1/lam, 1-lam, ... (lam not in {0, 1, inf})."""
        lam = self.value
        if lam is None or lam == 0 or lam == 1:
            raise DegenerateParameters("cross-ratio is 0, 1 or infinity")
        one = lam / lam
        return frozenset(
            {lam, one / lam, one - lam, one / (one - lam), (lam - one) / lam, lam / (lam - one)}
        )

    def __repr__(self):
        return "inf" if self.is_infinite else str(self.value)


def _bracket(p, q):
    return p[0] * q[1] - p[1] * q[0]


def cross_ratio(points) -> CrossRatio:
    """[13][24] / ([14][23]) on four points (a:b) of P^1; on slopes this is
    (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3)), so cr(inf, 0, 1, lam) = lam."""
    p1, p2, p3, p4 = points
    num = _bracket(p1, p3) * _bracket(p2, p4)
    den = _bracket(p1, p4) * _bracket(p2, p3)
    if num == 0 and den == 0:
        raise ValueError("points are not distinct")
    return CrossRatio(num, den)


def _complement(center, field):
    """Two standard basis vectors completing ``center`` to a basis."""
    for a in range(3):
        for b in range(a + 1, 3):
            e1 = [field.one if k == a else field.zero for k in range(3)]
            e2 = [field.one if k == b else field.zero for k in range(3)]
            if det([list(center), e1, e2], field) != 0:
                return e1, e2
    raise ValueError("zero centre")  # pragma: no cover


def pencil_coordinate(center, x, e1, e2, field) -> tuple:
    """(alpha : beta) with x = gamma*center + alpha*e1 + beta*e2."""
    cols = [[center[r], e1[r], e2[r]] for r in range(3)]
    sol = solve_linear(cols, list(x), field).solution
    return (sol[1], sol[2])


def conic_cross_ratio(conic: ConicForm, pts, center) -> CrossRatio:
    """Cross-ratio of four conic points seen from ``center`` on the conic.

    Lines through the centre are coordinatised by where they meet the line
    spanned by two complementary basis vectors; the tangent line is used
    when the centre is one of the four points.
    """
    field = conic.field
    pts = [p.coords if isinstance(p, ProjPoint) else tuple(field(x) for x in p) for p in pts]
    center = center.coords if isinstance(center, ProjPoint) else tuple(field(x) for x in center)
    if len(pts) != 4:
        raise ValueError("need four points")
    if not conic.is_smooth():
        raise ValueError("conic is singular")
    if conic(center) != 0:
        raise ValueError("centre is not on the conic")
    if any(conic(p) != 0 for p in pts):
        raise ValueError("a point is not on the conic")
    if len({ProjPoint(p, field) for p in pts}) != 4:
        raise ValueError("points are not distinct")
    e1, e2 = _complement(center, field)
    cp = ProjPoint(center, field)
    coords = []
    for p in pts:
        if ProjPoint(p, field) == cp:
            # a point of the tangent line other than the centre
            tangent = conic.polar(center)
            direction = next(
                d for d in (
                    (tangent[1], -tangent[0], 0),
                    (tangent[2], 0, -tangent[0]),
                    (0, tangent[2], -tangent[1]),
                )
                if any(x != 0 for x in d) and ProjPoint(d, field) != cp
            )
            coords.append(pencil_coordinate(center, direction, e1, e2, field))
        else:
            coords.append(pencil_coordinate(center, p, e1, e2, field))
    return cross_ratio(coords)


# ---------------------------------------------------------------------------
# j


def j_from_lambda(lam):
    """256 (lam^2 - lam + 1)^3 / (lam^2 (lam - 1)^2)."""
    if isinstance(lam, CrossRatio):
        if lam.is_infinite:
            raise DegenerateParameters("lambda = infinity")
        lam = lam.value
    if lam == 0 or lam == 1:
        raise DegenerateParameters(f"lambda = {lam}")
    one = lam / lam
    return 256 * (lam * lam - lam + one) ** 3 / (lam * lam * (lam - one) ** 2)


def j_closed_form(params: DesmicParams):
    """2^8 (C^2 - CD + D^2)^3 / (C^2 D^2 (C - D)^2)."""
    field = common_field([params.C, params.D])
    C, D = field(params.C), field(params.D)
    if C == 0:
        raise DegenerateParameters("C = 0")
    if D == 0:
        raise DegenerateParameters("D = 0")
    if C == D:
        raise DegenerateParameters("C = D")
    return 256 * (C * C - C * D + D * D) ** 3 / (C * C * D * D * (C - D) ** 2)


EVEN_DIRECTIONS = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1))


@dataclass(frozen=True)
class JResult:
    cross_ratio: CrossRatio
    lambda_orbit: frozenset
    j: object
    conic: ConicForm


def desmic_j_pipeline(params: DesmicParams, center_index: int = 3) -> JResult:
    """Tangent cone at (1:0:0:0), branch points towards the even vertices,
    cross-ratio from one of them, then j."""
    field = common_field([params.C, params.D])
    C, D = field(params.C), field(params.D)
    if C * D * (C - D) == 0:
        j_closed_form(params)  # raises the named error
    _, f = desmic_quartic(DesmicParams(C, D))
    conic = tangent_cone(f, (1, 0, 0, 0))
    pts = [tuple(field(x) for x in p) for p in EVEN_DIRECTIONS]
    cr = conic_cross_ratio(conic, pts, pts[center_index])
    return JResult(cr, cr.orbit(), j_from_lambda(cr), conic)


# ---------------------------------------------------------------------------
# identities as polynomials


def _j_lambda_homogeneous(x: MultiPoly, y: MultiPoly):
    """Numerator and denominator of j(x/y), both multiplied by y^6."""
    num = (x * x - x * y + y * y) ** 3 * 256
    den = x * x * (x - y) ** 2 * y * y
    return num, den


def j_identity_symbolic() -> bool:
    """j_from_lambda(C/D) and j_closed_form(C, D) agree as rational functions."""
    C, D = MultiPoly.gens(2)
    n1, d1 = _j_lambda_homogeneous(C, D)
    n2 = (C * C - C * D + D * D) ** 3 * 256
    d2 = C * C * D * D * (C - D) ** 2
    return n1 * d2 == n2 * d1


def s3_identities_symbolic() -> dict:
    """j(lam) = j(1/lam) = j(1 - lam), cross-multiplied in (x : y) = lam."""
    x, y = MultiPoly.gens(2)
    n, d = _j_lambda_homogeneous(x, y)
    ni, di = _j_lambda_homogeneous(y, x)  # 1/lam
    nc, dc = _j_lambda_homogeneous(y - x, y)  # 1 - lam
    return {"inverse": n * di == ni * d, "complement": n * dc == nc * d}
