"""Sparse multivariate polynomials over an exact field.

Terms are kept in a dict keyed by exponent tuples with no zero coefficients,
so equality is structural.  The canonical listing order is graded
lexicographic, highest term first.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product

from .fields import QQ, Field, FieldMismatch, Fp, QuadElement, common_field

__all__ = ["MultiPoly", "poly_eval", "poly_gradient", "to_text", "parse_poly"]


def _grlex(exps):
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("nvars", "field", "_terms")

    def __init__(self, nvars: int, terms=None, field: Field = QQ):
        self.nvars = nvars
        self.field = field
        acc: dict[tuple, object] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for exps, c in items:
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError(f"exponent {exps} has wrong length for {nvars} vars")
                c = field(c)
                if exps in acc:
                    acc[exps] = acc[exps] + c
                else:
                    acc[exps] = c
        self._terms = {e: c for e, c in acc.items() if c != 0}

    @classmethod
    def _raw(cls, nvars, field, terms):
        poly = cls.__new__(cls)
        poly.nvars = nvars
        poly.field = field
        poly._terms = terms
        return poly

    @classmethod
    def var(cls, i: int, nvars: int, field: Field = QQ):
        exps = [0] * nvars
        exps[i] = 1
        return cls._raw(nvars, field, {tuple(exps): field.one})

    @classmethod
    def gens(cls, nvars: int, field: Field = QQ):
        return [cls.var(i, nvars, field) for i in range(nvars)]

    @classmethod
    def const(cls, c, nvars: int, field: Field = QQ):
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def zero(cls, nvars: int, field: Field = QQ):
        return cls._raw(nvars, field, {})

    # -- structure ---------------------------------------------------------

    @property
    def terms(self) -> list[tuple[tuple, object]]:
        return sorted(self._terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), self.field.zero)

    def monomials(self):
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw(
            self.nvars, self.field, {e: c for e, c in self._terms.items() if sum(e) == d}
        )

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return (
                self.nvars == other.nvars
                and self.field == other.field
                and self._terms == other._terms
            )
        if isinstance(other, (int, Fraction, Fp, QuadElement)):
            return self == MultiPoly.const(other, self.nvars, self.field)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials have different numbers of variables")
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        return MultiPoly.const(other, self.nvars, self.field)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return MultiPoly._raw(self.nvars, self.field, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, self.field, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.field(other)
            if c == 0:
                return MultiPoly.zero(self.nvars, self.field)
            return MultiPoly._raw(
                self.nvars, self.field, {e: v * c for e, v in self._terms.items()}
            )
        other = self._lift(other)
        terms: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(self.nvars, self.field, {e: c for e, c in terms.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.const(1, self.nvars, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale_to_monic(self) -> "MultiPoly":
        """Divide by the leading (grlex-highest) coefficient."""
        if self.is_zero():
            return self
        return self * (self.field.one / self.terms[0][1])

    # -- calculus and substitution ----------------------------------------

    def diff(self, i: int) -> "MultiPoly":
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                terms[tuple(d)] = c * e[i]
        return MultiPoly(self.nvars, terms, self.field)

    def gradient(self) -> list["MultiPoly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return poly_eval(self, point)

    def substitute(self, images) -> "MultiPoly":
        """Compose with ``images`` (one polynomial per variable, sharing nvars)."""
        images = list(images)
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0]
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        result = MultiPoly.zero(target.nvars, target.field)
        for e, c in self._terms.items():
            term = MultiPoly.const(c, target.nvars, target.field)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def map_coeffs(self, field: Field, fn=None) -> "MultiPoly":
        """Push coefficients into ``field`` (via ``fn`` if given)."""
        fn = fn or field
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self._terms.items()}, field)

    def __repr__(self):
        return f"MultiPoly({to_text(self)!r}, nvars={self.nvars}, field={self.field})"


def poly_eval(f: MultiPoly, point):
    """Exact value of ``f`` at ``point``."""
    point = list(point)
    if len(point) != f.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {f.nvars} vars")
    field = common_field(point)
    if field != f.field and any(not isinstance(x, int) for x in point):
        raise FieldMismatch(f"point in {field}, polynomial over {f.field}")
    point = [f.field(x) for x in point]
    powers: dict = {}
    total = f.field.zero
    for e, c in f._terms.items():
        term = c
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                pw = powers.get(key)
                if pw is None:
                    pw = powers[key] = point[i] ** k
                term = term * pw
        total = total + term
    return total


def poly_gradient(f: MultiPoly) -> list[MultiPoly]:
    return f.gradient()


# ---------------------------------------------------------------------------
# text format


def _coeff_text(c) -> str:
    if isinstance(c, Fp):
        return str(c.v)
    s = str(c)
    if isinstance(c, QuadElement):
        return s
    return s


def to_text(f: MultiPoly, prefix: str = "z") -> str:
    """Render as e.g. ``3*z0^2*z1 - 1/2*z3 + 4``."""
    if f.is_zero():
        return "0"
    out = []
    for exps, c in f.terms:
        mono = "*".join(
            f"{prefix}{i}" if k == 1 else f"{prefix}{i}^{k}" for i, k in enumerate(exps) if k
        )
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        ctext = _coeff_text(mag)
        if not mono:
            body = ctext
        elif ctext == "1":
            body = mono
        else:
            body = f"{ctext}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"{'-' if neg else '+'} {body}")
    return " ".join(out)


_VAR = re.compile(r"^([uxz])(\d+)(?:\^(\d+))?$")
_COEFF = re.compile(r"^\d+(?:/\d+)?$")
_ARITY = {"z": 4, "u": 6, "x": 6}


def parse_poly(text: str, nvars: int | None = None, field: Field = QQ) -> MultiPoly:
    """Inverse of :func:`to_text` for rational or prime-field coefficients."""
    src = text.replace("−", "-").strip()
    if src == "0":
        return MultiPoly.zero(nvars or 1, field)  # no variable to infer an arity from
    chunks = re.split(r"\s+([+-])\s+", src)
    signs = ["+"]
    first = chunks[0]
    if first.startswith("-"):
        signs = ["-"]
        first = first[1:]
    bodies = [first]
    for sign, body in zip(chunks[1::2], chunks[2::2]):
        signs.append(sign)
        bodies.append(body)

    parsed = []
    top = -1
    prefix = None
    for sign, body in zip(signs, bodies):
        coeff = Fraction(1)
        exps: dict[int, int] = {}
        for factor in body.split("*"):
            factor = factor.strip()
            if _COEFF.match(factor):
                coeff *= Fraction(factor)
                continue
            m = _VAR.match(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r}")
            if prefix is None:
                prefix = m.group(1)
            elif prefix != m.group(1):
                raise ValueError("mixed variable names")
            i = int(m.group(2))
            exps[i] = exps.get(i, 0) + int(m.group(3) or 1)
            top = max(top, i)
        parsed.append((-coeff if sign == "-" else coeff, exps))

    # z0..z3 live in P^3 and u0..u5, x0..x5 in P^5 unless told otherwise
    n = nvars if nvars is not None else max(top + 1, _ARITY.get(prefix, 0))
    if top >= n:
        raise ValueError(f"variable index {top} out of range for {n} vars")
    terms = []
    for coeff, exps in parsed:
        vec = [0] * n
        for i, k in exps.items():
            vec[i] = k
        terms.append((tuple(vec), field(coeff)))
    return MultiPoly(max(n, 1), terms, field)


def monomials_of_degree(nvars: int, d: int) -> list[tuple]:
    """All exponent vectors of total degree d, grlex-descending."""
    out = [e for e in product(range(d + 1), repeat=nvars) if sum(e) == d]
    return sorted(out, reverse=True)
