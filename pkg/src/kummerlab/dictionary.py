"""The linear map L between points u of N (on the hyperplane sum u = 0) and
invariant quartics (A:B:C:D:E), recovered from the line/quartic incidence.

How :func:`fit_dictionary` gets there:

1. anchors fix the B row and impose that A and E vanish on the plane F45 and
   that L045 lands in the desmic pencil (B + C + D = 0);
2. the ten nodes of N must go to the ten squares of fundamental quadrics;
   a backtracking search over these matchings leaves finitely many maps;
3. lines over F_p on a unique invariant quartic a(line) select the maps with
   F_N(L^-1 a(line)) = 0 for every sample, at every prime.

The direct route L(x(line)^2) ~ a(line) is kept as :func:`squaring_route`.
It is inconsistent: flipping the sign of one eigen-coordinate of a line keeps
x^2 but moves the quartic, and that pair is reported as the witness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import isqrt

from .exact.fields import QQ, GF, Field, common_field
from .exact.linalg import mat_vec, normalize_vector, rref, solve_linear
from .exact.poly import MultiPoly
from .fqvec import nullspace_mod_p, rref_mod_p, tables
from .heisenberg import wedge_eigenbasis
from .nieto import plane_families, quintic_poly
from .projgeom import PluckerLine, ProjPoint, random_line
from .quartics import (
    QuarticCoeffs,
    is_fundamental_square,
    normalizer_matrices,
    quartic_through_line,
    singular_points,
)

ANCHOR_B = (Fraction(-1, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), 0, 0)
ROWS = "ABCDE"


class FitError(RuntimeError):
    """Infeasible or ambiguous fit; ``witness`` carries the evidence."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# the map


def _reduce_row(row):
    """Representative of a row modulo (1,...,1) with last entry zero."""
    last = row[5]
    return tuple(x - last for x in row)


def _display_row(row):
    """Representative modulo (1,...,1) with the most zeros, then the smallest
    absolute sum."""
    cands = [tuple(x - c for x in row) for c in set(row)]

    def key(r):
        return (-sum(1 for x in r if x == 0), sum(abs(x) for x in r), tuple(-x for x in r))

    return min(cands, key=key)


@dataclass(frozen=True)
class DictMap:
    """5 x 6 rational matrix acting on u (rows A..E), defined modulo the
    all-ones row, plus the labelling of the u indices by eigen-coordinates."""

    matrix: tuple
    labeling: tuple | None = None

    def __post_init__(self):
        m = tuple(_display_row(tuple(Fraction(x) for x in row)) for row in self.matrix)
        object.__setattr__(self, "matrix", m)

    @property
    def reduced(self) -> tuple:
        """5 x 5 matrix on (u0..u4) after substituting u5 = -(u0+...+u4)."""
        return tuple(_reduce_row(r)[:5] for r in self.matrix)

    def rank_on_hyperplane(self) -> int:
        return len(rref([list(r) for r in self.reduced], QQ)[1])

    def over(self, field: Field) -> list:
        return [[field(x) for x in row] for row in self.matrix]

    def image(self, u):
        coords = u.coords if isinstance(u, ProjPoint) else tuple(u)
        fld = common_field(coords)
        if sum(coords, fld.zero) != 0:
            raise ValueError("u is not on the hyperplane sum u = 0")
        return tuple(mat_vec(self.over(fld), coords))

    def preimage(self, a, fld: Field):
        """u with sum u = 0 and L u = a (exact; None when inconsistent)."""
        rows = self.over(fld) + [[fld.one] * 6]
        sol = solve_linear(rows, [fld(x) for x in a] + [fld.zero], fld)
        if not sol.consistent or sol.nullity:
            return None
        return sol.solution

    def same_map(self, other: "DictMap") -> bool:
        a = [x for row in self.reduced for x in row]
        b = [x for row in other.reduced for x in row]
        return normalize_vector(a) == normalize_vector(b)

    def to_text(self) -> str:
        lines = ["# rows A..E acting on u0..u5, modulo the all-ones row"]
        for name, row in zip(ROWS, self.matrix):
            lines.append(name + " " + " ".join(str(x) for x in row))
        lab = "none" if self.labeling is None else " ".join(str(i) for i in self.labeling)
        lines.append("labeling " + lab)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DictMap":
        rows, labeling = {}, None
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, *rest = line.split()
            if head == "labeling":
                labeling = None if rest == ["none"] else tuple(int(x) for x in rest)
            elif head in ROWS:
                if len(rest) != 6:
                    raise ValueError(f"row {head} needs six entries")
                rows[head] = tuple(Fraction(x) for x in rest)
            else:
                raise ValueError(f"unexpected line {line!r}")
        if set(rows) != set(ROWS):
            raise ValueError("need rows A, B, C, D, E")
        return cls(tuple(rows[r] for r in ROWS), labeling)


def apply_dictionary(d: DictMap, u) -> QuarticCoeffs:
    img = d.image(u)
    if all(x == 0 for x in img):
        raise ValueError(f"{u} is in the kernel of the dictionary")
    return QuarticCoeffs(img)


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class Incidence:
    line: PluckerLine
    quartic: QuarticCoeffs
    squares: tuple  # x_k^2 = c_k y_k^2 from the wedge eigenbasis


def eigen_squares(line: PluckerLine) -> tuple:
    wb = wedge_eigenbasis()
    fld = line.field
    y = [sum((fld(e) * p for e, p in zip(row, line.plucker)), fld.zero) for row in wb.basis]
    return tuple(fld(c) * v * v for c, v in zip(wb.weights, y))


@lru_cache(maxsize=None)
def n_points_mod_p(p: int) -> tuple:
    """Points of N(F_p) with no zero coordinate (exhaustive, sorted)."""
    from .nieto import _census_chunk

    fld = GF(p)
    tab = tables(fld)
    on, _, u = _census_chunk(tab, tab.projective_points(4))
    pts = [tuple(fld.decode(c) for c in row) for row in u[on]]
    return tuple(sorted((x for x in pts if all(c != 0 for c in x)), key=lambda x: [int(c) for c in x]))


def lift_to_line(u, signs, fld: Field) -> PluckerLine | None:
    """A line with eigen-squares proportional to u (None if u/c is not a square class)."""
    wb = wedge_eigenbasis()
    ratios = [fld(x) / fld(c) for x, c in zip(u, wb.weights)]
    for lam in (fld.one, fld.nonsquare()):
        roots = [fld.sqrt(lam * r) for r in ratios]
        if all(x is not None for x in roots):
            break
    else:
        return None
    norms = [sum(e * e for e in row) for row in wb.basis]
    pl = [fld.zero] * 6
    for k in range(6):
        y = roots[k] * signs[k]
        for i in range(6):
            pl[i] = pl[i] + y * fld(wb.basis[k][i]) / fld(norms[k])
    return line_from_plucker(pl, fld)


def line_samples(p: int, count: int, seed: int = 42, distinct: bool = True) -> list:
    """``count`` lines over F_p, each on exactly one invariant quartic (with
    pairwise distinct quartics when ``distinct``).

    Uniformly random lines almost never lie on an invariant quartic, so the
    lines are built on M: points u of N (in seeded random order) with u/c a
    square class, square roots in the wedge eigenbasis, random signs.
    """
    fld = GF(p)
    rng = random.Random(f"{seed}:{p}")
    pool = list(n_points_mod_p(p))
    rng.shuffle(pool)
    out = []
    seen, quartics = set(), set()
    for u in pool:
        for _ in range(4):
            signs = [1] + [rng.choice((1, -1)) for _ in range(5)]
            line = lift_to_line(u, signs, fld)
            if line is None:
                break
            if line in seen:
                continue
            seen.add(line)
            fit = quartic_through_line(line)
            if fit.status != "unique" or (distinct and fit.quartic in quartics):
                continue
            quartics.add(fit.quartic)
            out.append(Incidence(line, fit.quartic, eigen_squares(line)))
            if len(out) == count:
                return out
    raise FitError(f"only {len(out)} of {count} sample lines found mod {p}", len(out))


def line_from_plucker(p, fld: Field) -> PluckerLine:
    """Recover the line from a Plücker vector (columns of v w^T - w v^T)."""
    p01, p02, p03, p23, p31, p12 = [fld(x) for x in p]
    m = [
        [fld.zero, p01, p02, p03],
        [-p01, fld.zero, p12, -p31],
        [-p02, -p12, fld.zero, p23],
        [-p03, p31, -p23, fld.zero],
    ]
    cols = [[m[r][c] for r in range(4)] for c in range(4)]
    cols = [c for c in cols if any(x != 0 for x in c)]
    for a, b in combinations(cols, 2):
        try:
            return PluckerLine(a, b, fld)
        except ValueError:
            continue
    raise ValueError("not a decomposable Plücker vector")


# ---------------------------------------------------------------------------
# the squaring route (kept as a diagnostic)


@dataclass
class SquaringRouteReport:
    p: int
    samples: int
    nontrivial_kernel: int  # solutions beyond the all-ones ambiguity
    witness: tuple | None  # (line, flipped line, its quartic, flipped quartic)

    @property
    def feasible(self) -> bool:
        return self.nontrivial_kernel > 0


def flip_witness(p: int, seed: int = 42, tries: int = 400):
    """A line and its image under one sign change of an eigen-coordinate, both
    on unique quartics: same squares x^2, different quartics."""
    fld = GF(p)
    wb = wedge_eigenbasis()
    rng = random.Random(f"flip:{seed}:{p}")
    norms = [sum(e * e for e in row) for row in wb.basis]
    for _ in range(tries):
        line = random_line(fld, rng)
        fit = quartic_through_line(line)
        if fit.status != "unique":
            continue
        y = [sum((fld(e) * q for e, q in zip(row, line.plucker)), fld.zero) for row in wb.basis]
        for k in range(6):
            if y[k] == 0:
                continue
            flipped = [
                q - 2 * y[k] * fld(e) / fld(norms[k]) for q, e in zip(line.plucker, wb.basis[k])
            ]
            other = line_from_plucker(flipped, fld)
            fit2 = quartic_through_line(other)
            if fit2.status != "unique":
                continue
            if ProjPoint(eigen_squares(line), fld) != ProjPoint(eigen_squares(other), fld):
                raise AssertionError("sign flip changed the squares")  # pragma: no cover
            if fit2.quartic != fit.quartic:
                return line, other, fit.quartic, fit2.quartic
    return None


def squaring_route(samples, p: int, seed: int = 42) -> SquaringRouteReport:
    """Solve L(x^2) ~ a by cross-multiplication over F_p (30 unknowns)."""
    rows = []
    for s in samples:
        u = [int(x) for x in s.squares]
        a = [int(x) for x in s.quartic.normalized()]
        t = next(i for i in range(5) if a[i] % p)
        for r in range(5):
            if r == t:
                continue
            row = [0] * 30
            for k in range(6):
                row[r * 6 + k] += a[t] * u[k]
                row[t * 6 + k] -= a[r] * u[k]
            rows.append(row)
    ker = nullspace_mod_p(rows, p)
    # the five directions (row += c * (1,...,1)) are always there
    trivial = len(ker) if ker else 0
    nontrivial = max(0, trivial - 5)
    witness = flip_witness(p, seed) if nontrivial == 0 else None
    return SquaringRouteReport(p, len(samples), nontrivial, witness)


# ---------------------------------------------------------------------------
# anchored solve over Q with node matching
#
# Unknowns: the rows A, C, D, E of the 5 x 5 reduced matrix (u5 eliminated);
# the B row is the anchor.

_FREE_ROWS = (0, 2, 3, 4)
_B5 = _reduce_row(ANCHOR_B)[:5]
_NVARS = 20


def _var(row, col):
    return _FREE_ROWS.index(row) * 5 + col


def _image_rows(n):
    """(Mn)_r as (coefficients over the unknowns, constant) for r = 0..4."""
    out = []
    for r in range(5):
        coef = [Fraction(0)] * _NVARS
        const = Fraction(0)
        if r == 1:
            const = sum(Fraction(b) * x for b, x in zip(_B5, n))
        else:
            for c in range(5):
                coef[_var(r, c)] = Fraction(n[c])
        out.append((coef, const))
    return out


def anchor_equations() -> list:
    """Rows [coefficients..., rhs]: A and E vanish on F45 (u4 = u5 = 0), and
    B + C + D vanishes on L045 (u0 = u4 = u5 = 0)."""
    eqs = []
    for r in (0, 4):
        for v in [(1, -1, 0, 0, 0), (1, 0, -1, 0, 0), (1, 0, 0, -1, 0)]:
            coef = [Fraction(0)] * _NVARS
            for c in range(5):
                coef[_var(r, c)] = Fraction(v[c])
            eqs.append(coef + [Fraction(0)])
    for v in [(0, 1, -1, 0, 0), (0, 1, 0, -1, 0)]:
        coef = [Fraction(0)] * _NVARS
        for r in (2, 3):
            for c in range(5):
                coef[_var(r, c)] = Fraction(v[c])
        eqs.append(coef + [-sum(Fraction(b) * x for b, x in zip(_B5, v))])
    return eqs


def _match_equations(n, m):
    """M n proportional to m, cross-multiplied against m's leading entry."""
    img = _image_rows(n)
    t = next(i for i in range(5) if m[i] != 0)
    eqs = []
    for r in range(5):
        if r == t:
            continue
        coef = [img[r][0][k] * m[t] - img[t][0][k] * m[r] for k in range(_NVARS)]
        const = img[r][1] * m[t] - img[t][1] * m[r]
        eqs.append(coef + [-const])
    return eqs


_P = 1000003  # search prime; every survivor is re-verified over Q


def _mod(x) -> int:
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, _P) % _P


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """r/s = a mod m with |r|, s <= sqrt(m/2) (Wang's algorithm)."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    f = Fraction(r1, s1)
    if (f.numerator - a * f.denominator) % m:
        return None
    return f


def _assemble(x):
    return tuple(
        tuple(_B5) if r == 1 else tuple(x[_var(r, c)] for c in range(5)) for r in range(5)
    )


@lru_cache(maxsize=None)
def quadric_squares() -> tuple:
    """(A:B:C:D:E) of the squares of the ten fundamental quadrics."""
    from .heisenberg import fundamental_quadrics
    from .quartics import coeffs_of

    out = []
    for q in fundamental_quadrics():
        c = coeffs_of(q * q)
        if c is None:
            raise ArithmeticError("square of a fundamental quadric is not invariant")
        out.append(tuple(c.normalized()))
    return tuple(out)


@dataclass
class MatchReport:
    candidates: list  # reduced 5 x 5 matrices over Q
    branches: int
    ambiguous: int  # branches left with free parameters after all ten nodes
    unreconstructed: int  # determined mod the search prime but not over Q


@lru_cache(maxsize=None)
def node_matching() -> MatchReport:
    """All maps satisfying the anchors that send the ten nodes of N bijectively
    onto the ten quadric squares.

    The backtracking runs modulo a large prime; each determined solution is
    rationally reconstructed and then checked exactly over Q.
    """
    nnodes = [tuple(n.coords[:5]) for n in plane_families().nodes]
    targets = quadric_squares()
    index = {t: j for j, t in enumerate(targets)}
    found = []
    stats = {"branches": 0, "ambiguous": 0, "lost": 0}

    def to_mod(eqs):
        return [[_mod(v) for v in row] for row in eqs]

    def finish(xmod):
        x = [rational_reconstruction(int(v), _P) for v in xmod]
        if any(v is None for v in x):
            stats["lost"] += 1
            return
        mat = _assemble(x)
        used = set()
        for n in nnodes:
            img = [sum((a * b for a, b in zip(row, n)), Fraction(0)) for row in mat]
            if all(v == 0 for v in img):
                return
            j = index.get(tuple(normalize_vector(img)))
            if j is None or j in used:
                return
            used.add(j)
        if mat not in found:
            found.append(mat)

    anchors = to_mod(anchor_equations())
    blocks = {(i, j): to_mod(_match_equations(n, t))
              for i, n in enumerate(nnodes) for j, t in enumerate(targets)}

    def consistent(rows):
        return _NVARS not in rref_mod_p(rows, _P)[1]

    # pairwise compatibility of (node -> target) assignments under the anchors
    single = {k: consistent(anchors + b) for k, b in blocks.items()}
    pair = {}
    for (i, a), (k, b) in combinations([k for k, ok in single.items() if ok], 2):
        if i != k and a != b:
            pair[(i, a, k, b)] = pair[(k, b, i, a)] = consistent(anchors + blocks[i, a] + blocks[k, b])

    def options(i, used, assigned):
        return [j for j in range(len(targets))
                if j not in used and single[i, j]
                and all(pair.get((i, j, k, b), False) for k, b in assigned)]

    def search(rows, used, assigned=()):
        stats["branches"] += 1
        red, piv = rref_mod_p(rows, _P)
        if _NVARS in piv:
            return
        if len(piv) == _NVARS:
            x = [0] * _NVARS
            for k, c in enumerate(piv):
                x[c] = int(red[k, _NVARS])
            finish(x)
            return
        done = {k for k, _ in assigned}
        if len(done) == len(nnodes):
            stats["ambiguous"] += 1
            return
        # most constrained node first
        opts = {i: options(i, used, assigned) for i in range(len(nnodes)) if i not in done}
        i = min(opts, key=lambda k: (len(opts[k]), k))
        base = red.tolist()
        for j in opts[i]:
            search(base + blocks[i, j], used | {j}, assigned + ((i, j),))

    search(anchors, frozenset())
    return MatchReport(found, stats["branches"], stats["ambiguous"], stats["lost"])


def _lift_reduced(mat5) -> tuple:
    """5 x 5 map on (u0..u4) -> 5 x 6 with a zero u5 column."""
    return tuple(tuple(row) + (Fraction(0),) for row in mat5)


def incidence_residuals(d: DictMap, samples) -> list:
    """F_N(L^{-1} a(line)) per sample, over the sample's field (None where
    a(line) is off the image of L)."""
    out = []
    for s in samples:
        fld = s.quartic.field
        u = d.preimage(s.quartic.coeffs, fld)
        out.append(None if u is None else quintic_poly(fld)(list(u)))
    return out


# ---------------------------------------------------------------------------
# fitting


@dataclass
class FitResult:
    dictionary: DictMap
    survivors: list  # candidates consistent with the incidence data (DictMap)
    candidates: int  # anchored node matchings before the incidence test
    per_field: dict  # field size -> indices of the candidates surviving there
    squaring: list  # SquaringRouteReport per prime
    symmetric_survivors: bool  # every survivor differs from the choice by a symmetry


def _field_key(s) -> int:
    fld = s.quartic.field
    return fld.order if fld.is_finite else 0


def fit_dictionary(samples=None, primes=(7, 11, 13), seed: int = 42, count: int = 40) -> FitResult:
    """Anchored node matching over Q, then selection by line incidence: a
    candidate survives when F_N(L^-1 a(line)) = 0 for every sample.

    ``samples`` (Incidence records, any mix of F_p and Q lines) defaults to
    ``count`` lines per prime from :func:`line_samples`.
    """
    if samples is None:
        if len(primes) < 2:
            raise ValueError("need at least two primes")
        samples = [s for p in primes for s in line_samples(p, count, seed, distinct=False)]
    samples = list(samples)
    if len(samples) < 30:
        raise ValueError("need at least 30 samples")
    groups = {}
    for s in samples:
        groups.setdefault(_field_key(s), []).append(s)
    if len([k for k in groups if k]) < 2:
        raise ValueError("samples must come from at least two primes")

    match = node_matching()
    if match.ambiguous:
        raise FitError("node matching leaves free parameters", match.ambiguous)
    if not match.candidates:
        raise FitError("anchors and node matching are infeasible")
    cands = [DictMap(_lift_reduced(m)) for m in match.candidates]
    bad = [d for d in cands if not _anchors_hold(d)]
    if bad:
        raise FitError("a reconstructed map violates the anchors over Q", bad[0])

    per_field, squaring = {}, []
    for key in sorted(groups):
        data = groups[key]
        if key:
            squaring.append(squaring_route(data, key, seed))
        per_field[key] = [
            i for i, d in enumerate(cands)
            if all(r is not None and r == 0 for r in incidence_residuals(d, data))
        ]
    keep = set(range(len(cands)))
    for idx in per_field.values():
        keep &= set(idx)
    if not keep:
        raise FitError("no anchored candidate is consistent with the line incidence", per_field)
    survivors = sorted(
        (cands[i] for i in keep),
        key=lambda d: tuple((x.numerator, x.denominator) for row in d.reduced for x in row),
    )
    chosen = DictMap(survivors[0].matrix, find_labeling(survivors[0]))
    sym = all(related_by_symmetry(chosen, d) is not None for d in survivors)
    return FitResult(chosen, survivors, len(cands), per_field, squaring, sym)


def _anchors_hold(d: DictMap) -> bool:
    if normalize_vector(d.reduced[1]) != normalize_vector(_B5):
        return False
    f45 = [(1, -1, 0, 0, 0, 0), (1, 0, -1, 0, 0, 0), (1, 0, 0, -1, 0, 0)]
    l045 = [(0, 1, -1, 0, 0, 0), (0, 1, 0, -1, 0, 0)]
    for v in f45:
        img = d.image([Fraction(x) for x in v])
        if img[0] != 0 or img[4] != 0:
            return False
    for v in l045:
        img = d.image([Fraction(x) for x in v])
        if img[1] + img[2] + img[3] != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# symmetry: normalizer action on quartics versus S6 on u


def _sum_zero(row):
    """The representative of a row modulo (1,...,1) with entries summing to 0."""
    shift = sum(row, Fraction(0)) / 6
    return tuple(x - shift for x in row)


def _columns(rows):
    rows = [_sum_zero(r) for r in rows]
    return [tuple(r[k] for r in rows) for k in range(6)]


def column_permutation(m1, m2) -> tuple | None:
    """tau with m1 = lam * m2 P_tau (columns: col_k(m1) = lam col_tau(k)(m2)),
    rows read modulo (1,...,1); None if there is no such tau."""
    c1, c2 = _columns(m1), _columns(m2)
    k0 = next((k for k, c in enumerate(c1) if any(x != 0 for x in c)), None)
    if k0 is None:
        return None
    i0 = next(i for i, x in enumerate(c1[k0]) if x != 0)
    for cand in c2:
        if cand[i0] == 0:
            continue
        lam = c1[k0][i0] / cand[i0]
        scaled = [tuple(lam * x for x in c) for c in c2]
        tau, free = [], list(range(6))
        for col in c1:
            j = next((j for j in free if scaled[j] == col), None)
            if j is None:
                break
            free.remove(j)
            tau.append(j)
        else:
            return tuple(tau)
    return None


def _apply(r, d: DictMap):
    return [[sum((r[i][k] * d.matrix[k][j] for k in range(5)), Fraction(0)) for j in range(6)]
            for i in range(5)]


def u_permutation(d: DictMap, r) -> tuple | None:
    """tau in S6 with R L = L P_tau up to scale, (P_tau u)_k = u_tau(k)."""
    return column_permutation(_apply(r, d), d.matrix)


def related_by_symmetry(d1: DictMap, d2: DictMap) -> tuple | None:
    """(R, tau) with d2 = R d1 P_tau up to scale, R in the normalizer image."""
    for r in normalizer_matrices():
        tau = column_permutation(d2.matrix, _apply(r, d1))
        if tau is not None:
            return r, tau
    return None


def find_labeling(d: DictMap) -> tuple | None:
    """sigma in S6 with tau_g = sigma pi_g sigma^-1 on the normalizer
    generators, pi_g the permutation of the wedge eigenlines (or its inverse);
    None when neither convention admits such a sigma."""
    from itertools import permutations

    from .quartics import normalizer_generators, wedge_permutation

    taus, pis = [], []
    for g, r in normalizer_generators():
        tau = u_permutation(d, r)
        pi = wedge_permutation(g)
        if tau is None or pi is None:
            return None
        taus.append(tau)
        pis.append(pi)
    for conv in (pis, [_inv(p) for p in pis]):
        for sigma in permutations(range(6)):
            si = _inv(sigma)
            if all(tuple(sigma[pi[si[k]]] for k in range(6)) == tau for tau, pi in zip(taus, conv)):
                return sigma
    return None


def cycle_type(perm) -> tuple:
    seen, lengths = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        n, k = 0, s
        while k not in seen:
            seen.add(k)
            k = perm[k]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def labeling_obstruction(d: DictMap) -> list:
    """(generator index, cycle type of tau_g, cycle type of pi_g) where they
    differ; conjugate permutations share a cycle type, so any entry rules out
    a labeling."""
    from .quartics import normalizer_generators, wedge_permutation

    out = []
    for k, (g, r) in enumerate(normalizer_generators()):
        tau, pi = u_permutation(d, r), wedge_permutation(g)
        if tau is None or pi is None or cycle_type(tau) != cycle_type(pi):
            out.append((k, tau and cycle_type(tau), pi and cycle_type(pi)))
    return out


def _inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


# ---------------------------------------------------------------------------
# validation


@dataclass
class Check:
    name: str
    ok: bool
    detail: str
    witness: object = None


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def by_name(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)


def _random_point(fam, fld, rng):
    nparams = fam.param[0].nvars
    while True:
        vals = [fld(rng.randrange(fld.order)) for _ in range(nparams)]
        u = [poly.map_coeffs(fld)(vals) for poly in fam.param]
        if any(x != 0 for x in u):
            return tuple(u)


def _generic_fae(a) -> bool:
    A, B, C, D, E = a
    if A != 0 or E != 0:
        return False
    if B * C * D == 0:
        return False
    return all(B + s * C + t * D != 0 for s in (1, -1) for t in (1, -1))


def _integral(a):
    """Primitive integer vector proportional to a (None for the zero vector)."""
    from math import gcd, lcm

    if all(x == 0 for x in a):
        return None
    fr = [Fraction(x) for x in a]
    m = lcm(*(x.denominator for x in fr))
    ints = [int(x * m) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def singular_line(sing: list) -> PluckerLine | None:
    """A line all of whose F_q points are in ``sing`` (None if there is none)."""
    pts = set(sing)
    for a, b in combinations(sing, 2):
        line = PluckerLine(a.coords, b.coords, a.field)
        if all(q in pts for q in line.points()):
            return line
    return None


def holdout_residuals(d: DictMap, p: int, count: int, seed: int, fit_count: int = 40) -> list:
    """(line, F_N(L^-1 a(line))) for lines outside the default fitting set;
    every residual is zero when a(line) lies in L(N)."""
    used = {s.line for s in line_samples(p, fit_count, seed, distinct=False)}
    fresh = [s for s in line_samples(p, count + fit_count, seed + 1000, distinct=False)
             if s.line not in used][:count]
    return list(zip((s.line for s in fresh), incidence_residuals(d, fresh)))


def validate_dictionary(d: DictMap, primes=(11, 13), seed: int = 42,
                        vplane: int = 20, splane: int = 5, holdout: int = 20) -> ValidationReport:
    rep = ValidationReport()
    fams = plane_families()

    # nodes -> squares of fundamental quadrics (over Q)
    bad = []
    squares = {}
    for n in fams.nodes:
        q = is_fundamental_square(apply_dictionary(d, n.coords))
        if q is None:
            bad.append(n)
        else:
            squares[n] = q
    distinct = len({repr(q) for q in squares.values()})
    rep.checks.append(Check(
        "nodes.squares", not bad and distinct == 10,
        f"{len(squares)}/10 nodes map to squares of {distinct} distinct fundamental quadrics",
        bad[0] if bad else None,
    ))

    node_t = ProjPoint((-1, 1, 1, 1, -1, -1))
    q = is_fundamental_square(apply_dictionary(d, node_t.coords))
    rep.checks.append(Check(
        "nodes.sample", q is not None and q.total_degree() == 2,
        f"(-1:1:1:1:-1:-1) -> {apply_dictionary(d, node_t.coords)} = ({q})^2",
    ))

    # D-line L045 -> desmic pencil
    l045 = fams.d_lines[[f.label for f in fams.d_lines].index((0, 4, 5))]
    ok = True
    a, b = MultiPoly.gens(2)
    imgs = [sum((row[k] * l045.param[k] for k in range(6)), MultiPoly.zero(2)) for row in d.matrix]
    # image (A, B, C, D, E) as linear forms in (a, b); pencil: A = E = 0, B + C + D = 0
    ok = imgs[0].is_zero() and imgs[4].is_zero() and (imgs[1] + imgs[2] + imgs[3]).is_zero()
    # and every pencil member is hit: the map (a, b) -> (C, D) is onto
    cd = [[imgs[2].coefficient((1, 0)), imgs[2].coefficient((0, 1))],
          [imgs[3].coefficient((1, 0)), imgs[3].coefficient((0, 1))]]
    onto = len(rref(cd, QQ)[1]) == 2
    rep.checks.append(Check("dline.desmic", ok and onto,
                            "L045 maps onto the desmic pencil" if ok and onto else "L045 image off the pencil"))

    # V-plane and S-plane samples, and holdout incidence, per prime
    f45 = fams.v_planes[[f.label for f in fams.v_planes].index((4, 5))]
    for p in primes:
        fld = GF(p)
        rng = random.Random(f"validate:{seed}:{p}")
        counts, witness, tried = [], None, 0
        while len(counts) < vplane and tried < 50 * vplane:
            tried += 1
            u = _random_point(f45, fld, rng)
            a = d.image(u)
            if all(x == 0 for x in a) or not _generic_fae(a):
                continue
            n = len(singular_points(QuarticCoeffs(a).to_poly(), p))
            counts.append(n)
            if n != 4 and witness is None:
                witness = u
        rep.checks.append(Check(
            f"vplane.four_nodes.p{p}", len(counts) == vplane and all(c == 4 for c in counts),
            f"{sum(1 for c in counts if c == 4)}/{len(counts)} generic F45 images have 4 singular points",
            witness,
        ))

        found, witness, done, fields = 0, None, 0, set()
        while done < splane:
            fam = fams.s_planes[rng.randrange(15)]
            vals = [Fraction(rng.randint(-9, 9)) for _ in range(3)]
            u = [poly(vals) for poly in fam.param]
            if any(x == 0 for x in u):
                continue  # keep clear of the V-planes and D-lines
            a = _integral(d.image(u))
            if a is None or any(x % p == 0 for x in a if x != 0) or all(x % p == 0 for x in a):
                continue
            done += 1
            f = QuarticCoeffs(a).to_poly()
            # the double line need not be defined over F_p; fall back to F_{p^2}
            for q in (p, p * p):
                if singular_line(singular_points(f, q)) is not None:
                    found += 1
                    fields.add(q)
                    break
            else:
                if witness is None:
                    witness = tuple(u)
        rep.checks.append(Check(
            f"splane.double_line.p{p}", found == done,
            f"{found}/{done} S-plane images are singular along a line"
            f" (over F_q, q in {sorted(fields)})", witness,
        ))

        res = holdout_residuals(d, p, holdout, seed)
        badh = [line for line, r in res if r is None or r != 0]
        rep.checks.append(Check(
            f"holdout.incidence.p{p}", not badh,
            f"{len(res) - len(badh)}/{len(res)} fresh lines: F_N(L^-1 a(line)) = 0",
            badh[0] if badh else None,
        ))
    return rep


def vplane_image(d: DictMap, fam) -> tuple:
    """Canonical echelon basis of the image of a V-plane (a plane of P^4)."""
    basis = []
    nparams = fam.param[0].nvars
    for k in range(nparams):
        vals = [Fraction(int(i == k)) for i in range(nparams)]
        basis.append(d.image([poly(vals) for poly in fam.param]))
    rows, _ = rref([list(b) for b in basis], QQ)
    return tuple(tuple(r) for r in rows if any(x != 0 for x in r))


def plane_orbit(plane, matrices) -> set:
    """Orbit of a linear subspace (echelon rows) under matrices acting on columns."""

    def act(r, pl):
        imgs = [[sum(r[i][k] * v[k] for k in range(5)) for i in range(5)] for v in pl]
        rows, _ = rref(imgs, QQ)
        return tuple(tuple(x) for x in rows if any(y != 0 for y in x))

    orbit = {plane}
    frontier = [plane]
    while frontier:
        nxt = []
        for pl in frontier:
            for r in matrices:
                img = act(r, pl)
                if img not in orbit:
                    orbit.add(img)
                    nxt.append(img)
        frontier = nxt
    return orbit


def intertwining_check(d: DictMap) -> tuple:
    """(images of the 15 V-planes, normalizer orbit of {A = E = 0})."""
    from .quartics import normalizer_generators

    images = {vplane_image(d, fam) for fam in plane_families().v_planes}
    fae = ((1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1))
    base = tuple(tuple(Fraction(x) for x in row) for row in fae[1:4])
    orbit = plane_orbit(base, [r for _, r in normalizer_generators()])
    return images, orbit
