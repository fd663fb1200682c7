"""The level-(2,2) Heisenberg group, its Schrödinger representation on
C^4 = functions on Z_2 x Z_2, and the induced actions on polynomials and on
the Plücker space of lines.

Basis labelling: (z0, z1, z2, z3) = (delta_00, delta_01, delta_10, delta_11),
so coordinate index i corresponds to y = (i >> 1, i & 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

from .exact.fields import QQ
from .exact.linalg import kernel, mat_mul, rref, solve_linear
from .exact.poly import MultiPoly, monomials_of_degree
from .projgeom import MINOR_ORDER, plucker_minors


def _dot(u, v) -> int:
    return (u[0] * v[0] + u[1] * v[1]) & 1


def _idx(y) -> int:
    return 2 * y[0] + y[1]


def _vec(i: int) -> tuple:
    return (i >> 1, i & 1)


@dataclass(frozen=True, order=True)
class HeisElement:
    """(a, b, s): translation a, character b, central sign s."""

    a: tuple = (0, 0)
    b: tuple = (0, 0)
    s: int = 1

    def __post_init__(self):
        if self.s not in (1, -1):
            raise ValueError("central part must be +1 or -1")

    def __mul__(self, other: "HeisElement") -> "HeisElement":
        a = ((self.a[0] + other.a[0]) & 1, (self.a[1] + other.a[1]) & 1)
        b = ((self.b[0] + other.b[0]) & 1, (self.b[1] + other.b[1]) & 1)
        s = self.s * other.s * (-1 if _dot(self.b, other.a) else 1)
        return HeisElement(a, b, s)

    def inverse(self) -> "HeisElement":
        # (a,b,s)^2 = (0,0,(-1)^{b.a})
        return HeisElement(self.a, self.b, self.s * (-1 if _dot(self.b, self.a) else 1))

    @property
    def image(self) -> tuple:
        """Image in Z_2^4 (drop the centre)."""
        return self.a + self.b


IDENTITY = HeisElement()
CENTRAL = HeisElement((0, 0), (0, 0), -1)


@lru_cache(maxsize=None)
def group_elements() -> tuple:
    """All 32 elements, in a fixed order."""
    vecs = list(product((0, 1), repeat=2))
    return tuple(HeisElement(a, b, s) for s in (1, -1) for a in vecs for b in vecs)


def center() -> list:
    g = group_elements()
    return [z for z in g if all(z * h == h * z for h in g)]


def schrodinger_matrix(g: HeisElement) -> tuple:
    """Matrix of U(g) f(x) = s (-1)^{b.(x+a)} f(x+a) in the delta basis.

    U(g) delta_y = s (-1)^{b.y} delta_{y+a}.  With this form g -> U(g) is a
    homomorphism for the group law of :class:`HeisElement`.
    """
    m = [[0] * 4 for _ in range(4)]
    for col in range(4):
        y = _vec(col)
        row = _idx(((y[0] + g.a[0]) & 1, (y[1] + g.a[1]) & 1))
        m[row][col] = g.s * (-1 if _dot(g.b, y) else 1)
    return tuple(tuple(r) for r in m)


def act_on_poly(g: HeisElement, f: MultiPoly) -> MultiPoly:
    """(g.f)(z) = f(U(g)^{-1} z); a left action on polynomials in z0..z3."""
    if f.nvars != 4:
        raise ValueError("Heisenberg action needs 4 variables")
    u = schrodinger_matrix(g)
    z = MultiPoly.gens(4, f.field)
    # U is a signed permutation, so U^{-1} = U^T
    images = [sum((z[j] * u[j][i] for j in range(4) if u[j][i]), MultiPoly.zero(4, f.field))
              for i in range(4)]
    return f.substitute(images)


def _action_matrix(g: HeisElement, monos: list) -> list:
    """Columns: images of the monomials under g, in the monomial basis."""
    index = {m: i for i, m in enumerate(monos)}
    n = len(monos)
    cols = []
    for m in monos:
        img = act_on_poly(g, MultiPoly(4, {m: 1}))
        col = [Fraction(0)] * n
        for e, c in img.terms:
            col[index[e]] = c
        cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _basis_polys(vectors, monos) -> list:
    return [MultiPoly(4, {m: c for m, c in zip(monos, v) if c != 0}) for v in vectors]


def _primitive(v):
    """Scale a rational vector to coprime integers with first nonzero > 0."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return tuple(-x for x in ints) if lead < 0 else tuple(ints)


@lru_cache(maxsize=None)
def invariant_subspace(d: int) -> tuple:
    """Basis of the degree-d polynomials fixed by the whole group.

    Fixed space of the Reynolds operator (average over the 32 elements),
    returned as the reduced echelon basis in grlex-descending monomial order.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    monos = monomials_of_degree(4, d)
    n = len(monos)
    reynolds = [[Fraction(0)] * n for _ in range(n)]
    for g in group_elements():
        m = _action_matrix(g, monos)
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    reynolds[i][j] += m[i][j]
    system = [[reynolds[i][j] / 32 - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    fixed = kernel(system, QQ)
    if not fixed:
        return ()
    rows, _ = rref([list(v) for v in fixed], QQ)
    return tuple(_basis_polys(rows, monos))


def char_value(alpha: tuple, g: HeisElement) -> int:
    """Value at g of the character of Z_2^4 indexed by alpha."""
    return -1 if sum(x * y for x, y in zip(alpha, g.image)) & 1 else 1


CHARACTERS = tuple(product((0, 1), repeat=4))


def _simultaneous_eigenlines(matrices: dict, n: int):
    """Split Q^n under commuting +-1 matrices indexed by Z_2^4 images."""
    found = []
    for alpha in CHARACTERS:
        rows = []
        for g, m in matrices.items():
            chi = char_value(alpha, g)
            rows.extend([[m[i][j] - (chi if i == j else 0) for j in range(n)] for i in range(n)])
        space = kernel(rows, QQ)
        if space:
            found.append((alpha, space))
    return found


@lru_cache(maxsize=None)
def character_eigenlines(degree: int = 2) -> tuple:
    """Simultaneous eigenlines of the group on quadrics: ((alpha, quadric), ...).

    Raises if some character occurs with multiplicity other than one.
    """
    if degree != 2:
        raise ValueError("only quadrics are supported")
    monos = monomials_of_degree(4, 2)
    reps = {g: _action_matrix(g, monos) for g in group_elements() if g.s == 1}
    out = []
    for alpha, space in _simultaneous_eigenlines(reps, len(monos)):
        if len(space) != 1:
            raise ArithmeticError(f"character {alpha} has multiplicity {len(space)}")
        vec = _primitive(space[0])
        out.append((alpha, _basis_polys([vec], monos)[0]))
    return tuple(out)


def fundamental_quadrics() -> list:
    return [q for _, q in character_eigenlines(2)]


def wedge_matrix(g: HeisElement) -> list:
    """Matrix of wedge^2 U(g) on Plücker coordinates (columns = images of basis)."""
    u = schrodinger_matrix(g)
    cols = []
    for i, j in MINOR_ORDER:
        v = [u[r][i] for r in range(4)]
        w = [u[r][j] for r in range(4)]
        cols.append(plucker_minors(v, w))
    return [[cols[c][r] for c in range(6)] for r in range(6)]


@dataclass(frozen=True)
class WedgeEigenbasis:
    """Eigen-coordinates y_k = <e_k, p> on Plücker space.

    ``basis`` rows are the eigenvectors e_k (primitive integers); ``weights``
    c_k satisfy  p01 p23 + p02 p31 + p03 p12 = sum c_k y_k^2,  so that
    u_k = c_k y_k^2 are the squared coordinates x_k^2 of the line variety.
    """

    basis: tuple
    characters: tuple
    weights: tuple
    signs: dict

    def coordinates(self, plucker) -> tuple:
        return tuple(sum(e * p for e, p in zip(row, plucker)) for row in self.basis)

    def squares(self, plucker) -> tuple:
        y = self.coordinates(plucker)
        return tuple(c * v * v for c, v in zip(self.weights, y))


@lru_cache(maxsize=None)
def wedge_eigenbasis() -> WedgeEigenbasis:
    mats = {g: wedge_matrix(g) for g in group_elements()}
    if any(mats[CENTRAL][i][j] != (i == j) for i in range(6) for j in range(6)):
        raise ArithmeticError("centre does not act trivially on wedge^2")
    lines = _simultaneous_eigenlines({g: m for g, m in mats.items() if g.s == 1}, 6)
    if len(lines) != 6 or any(len(space) != 1 for _, space in lines):
        raise ArithmeticError(
            f"expected six 1-dimensional eigenspaces, got {[len(s) for _, s in lines]}"
        )
    basis = tuple(_primitive(space[0]) for _, space in lines)
    characters = tuple(alpha for alpha, _ in lines)

    # express the Plücker quadric in the eigen-coordinates: Q(p) = sum c_k y_k^2
    # with p = sum_k y_k e_k / |e_k|^2 (the e_k are orthogonal)
    norms = [sum(x * x for x in e) for e in basis]
    weights = []
    for k, e in enumerate(basis):
        v = [Fraction(x, norms[k]) for x in e]
        weights.append(v[0] * v[3] + v[1] * v[4] + v[2] * v[5])
    for k in range(6):
        for l in range(k + 1, 6):
            ek = [Fraction(x, norms[k]) for x in basis[k]]
            el = [Fraction(x, norms[l]) for x in basis[l]]
            cross = sum(ek[i] * el[j] + el[i] * ek[j] for i, j in ((0, 3), (1, 4), (2, 5)))
            if cross:
                raise ArithmeticError("Plücker quadric is not diagonal in the eigenbasis")
    signs = {g: tuple(char_value(alpha, g) for alpha in characters) for g in group_elements()}
    return WedgeEigenbasis(basis, characters, tuple(weights), signs)


def reynolds_check(f: MultiPoly) -> bool:
    """Independent invariance check: fixed by every one of the 32 elements."""
    return all(act_on_poly(g, f) == f for g in group_elements())


def representation_defects() -> list:
    """Pairs (g, h) with U(g)U(h) != U(gh); empty when the map is a homomorphism."""
    bad = []
    elems = group_elements()
    mats = {g: [list(r) for r in schrodinger_matrix(g)] for g in elems}
    for g in elems:
        for h in elems:
            if mat_mul(mats[g], mats[h]) != mats[g * h]:
                bad.append((g, h))
    return bad


def in_span(f: MultiPoly, basis) -> bool:
    """Membership of f in the span of ``basis`` by an exact linear solve."""
    monos = sorted({m for b in list(basis) + [f] for m in b.monomials()})
    cols = [[b.coefficient(m) for m in monos] for b in basis]
    matrix = [[cols[j][i] for j in range(len(basis))] for i in range(len(monos))]
    rhs = [f.coefficient(m) for m in monos]
    return solve_linear(matrix, rhs, f.field).consistent
