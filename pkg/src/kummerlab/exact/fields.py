"""Exact scalar fields: Q, F_p and quadratic extensions Q(sqrt d), F_{p^2}.

Rationals are plain :class:`fractions.Fraction` values.  Prime-field and
quadratic-extension elements are small immutable objects that know their
field; mixing elements of different fields raises :class:`FieldMismatch`.
Python ints coerce into every field.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from sympy import isprime

__all__ = [
    "FieldMismatch",
    "Field",
    "RationalField",
    "PrimeField",
    "QuadraticField",
    "Fp",
    "QuadElement",
    "QQ",
    "GF",
    "QuadExt",
    "finite_field",
    "field_of",
    "scalar_key",
]


class FieldMismatch(ValueError):
    """Operands live in different fields."""


class Field:
    characteristic: int
    order: int | None  # None for infinite fields

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def elements(self):
        raise TypeError(f"{self} is infinite")

    def contains(self, x) -> bool:
        return field_of(x) == self

    def is_square(self, x) -> bool:
        return self.sqrt(x) is not None

    def sqrt(self, x):
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Q


class RationalField(Field):
    characteristic = 0
    order = None

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, (Fp, QuadElement)):
            raise FieldMismatch(f"cannot coerce {x!r} into QQ")
        if isinstance(x, float):
            raise TypeError("floats are not exact; pass a Fraction or int")
        return Fraction(x)

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def sqrt(self, x):
        x = Fraction(x)
        if x < 0:
            return None
        n, d = isqrt(x.numerator), isqrt(x.denominator)
        if n * n == x.numerator and d * d == x.denominator:
            return Fraction(n, d)
        return None

    def reduce_to(self, x, field: "PrimeField"):
        """Image of a rational in F_p (denominator must be prime to p)."""
        x = Fraction(x)
        return field(x.numerator) / field(x.denominator)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


# ---------------------------------------------------------------------------
# F_p


class PrimeField(Field):
    """The field Z/p for a prime p >= 5 (smaller primes only on request)."""

    def __init__(self, p: int, *, allow_small: bool = False):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        if p < 5 and not allow_small:
            raise ValueError(f"prime fields require p >= 5, got {p}")
        self.p = p
        self.characteristic = p
        self.order = p
        self._sqrt = None

    def __call__(self, x):
        if isinstance(x, Fp):
            if x.field != self:
                raise FieldMismatch(f"{x!r} is not in {self}")
            return x
        if isinstance(x, int):
            return Fp(x % self.p, self)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self}")
            return Fp(x.numerator * pow(x.denominator, -1, self.p) % self.p, self)
        if isinstance(x, QuadElement):
            raise FieldMismatch(f"cannot coerce {x!r} into {self}")
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def elements(self):
        return [Fp(v, self) for v in range(self.p)]

    def encode(self, x) -> int:
        return self(x).v

    def decode(self, code: int):
        return Fp(int(code), self)

    def sqrt(self, x):
        if self._sqrt is None:
            table = {}
            for r in range(self.p):
                table.setdefault(r * r % self.p, r)
            self._sqrt = table
        r = self._sqrt.get(self(x).v)
        return None if r is None else Fp(r, self)

    def legendre(self, x) -> int:
        v = self(x).v
        if v == 0:
            return 0
        return 1 if pow(v, (self.p - 1) // 2, self.p) == 1 else -1

    def nonsquare(self):
        for v in range(2, self.p):
            if self.legendre(v) == -1:
                return self(v)
        raise ValueError("no non-square")  # unreachable for odd p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class Fp:
    __slots__ = ("v", "field")

    def __init__(self, v: int, field: PrimeField):
        self.v = v
        self.field = field

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.field.p != self.field.p:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.v
        if isinstance(other, int):
            return other % self.field.p
        if isinstance(other, Fraction):
            return self.field(other).v
        if isinstance(other, QuadElement):
            return NotImplemented
        raise FieldMismatch(f"cannot combine {self.field} with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp((self.v + o) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp((self.v - o) % self.field.p, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        return Fp((o - self.v) % self.field.p, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o % self.field.p, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v % self.field.p, self.field)

    def __pos__(self):
        return self

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.field}")
        return Fp(pow(self.v, -1, self.field.p), self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Fp(o, self.field).inverse()

    def __rtruediv__(self, other):
        return Fp(self._coerce(other), self.field) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Fp(pow(self.v, e, self.field.p), self.field)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.field.p == other.field.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            try:
                return self.v == self._coerce(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def lift(self) -> int:
        """Symmetric integer lift in (-p/2, p/2]."""
        p = self.field.p
        return self.v - p if self.v > p // 2 else self.v

    def __repr__(self):
        return f"{self.v} (mod {self.field.p})"

    def __str__(self):
        return str(self.v)


@lru_cache(maxsize=None)
def GF(p: int, allow_small: bool = False) -> PrimeField:
    return PrimeField(p, allow_small=allow_small)


# ---------------------------------------------------------------------------
# quadratic extensions


class QuadraticField(Field):
    """base(sqrt d) for a non-square d; elements a + b*sqrt(d)."""

    def __init__(self, base: Field, d):
        d = base(d)
        if isinstance(base, RationalField):
            if d not in (-1, 3):
                raise ValueError("over QQ only sqrt(-1) and sqrt(3) are supported")
        elif isinstance(base, PrimeField):
            if base.legendre(d) != -1:
                raise ValueError(f"{d} is a square in {base}")
        else:
            raise TypeError("base must be QQ or a prime field")
        self.base = base
        self.d = d
        self.characteristic = base.characteristic
        self.order = None if base.order is None else base.order**2
        self._sqrt = None

    def __call__(self, x, b=0):
        if isinstance(x, QuadElement):
            if x.field != self:
                raise FieldMismatch(f"{x!r} is not in {self}")
            return x
        return QuadElement(self.base(x), self.base(b), self)

    @property
    def gen(self):
        """sqrt(d)."""
        return QuadElement(self.base(0), self.base(1), self)

    def elements(self):
        base = self.base.elements()
        return [QuadElement(a, b, self) for b in base for a in base]

    def encode(self, x) -> int:
        x = self(x)
        return x.a.v + self.base.p * x.b.v

    def decode(self, code: int):
        code = int(code)
        p = self.base.p
        return QuadElement(Fp(code % p, self.base), Fp(code // p, self.base), self)

    def sqrt(self, x):
        x = self(x)
        if self.is_finite:
            if self._sqrt is None:
                table = {}
                for r in self.elements():
                    table.setdefault(r * r, r)
                self._sqrt = table
            return self._sqrt.get(x)
        # over QQ: only elements of the form a^2 or a^2 d in the base
        if x.b == 0:
            r = self.base.sqrt(x.a)
            if r is not None:
                return self(r)
            r = self.base.sqrt(x.a / self.d)
            if r is not None:
                return self(0, r)
        return None

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticField)
            and other.base == self.base
            and other.d == self.d
        )

    def __hash__(self):
        return hash(("Quad", self.base, self.d))

    def __repr__(self):
        return f"{self.base}(sqrt({self.d}))"


class QuadElement:
    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field: QuadraticField):
        self.a = a
        self.b = b
        self.field = field

    def _coerce(self, other) -> "QuadElement":
        if isinstance(other, QuadElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        try:
            return QuadElement(self.field.base(other), self.field.base.zero, self.field)
        except (TypeError, FieldMismatch) as exc:
            raise FieldMismatch(f"cannot combine {self.field} with {other!r}") from exc

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElement(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadElement(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self.field.d
        return QuadElement(
            self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, self.field
        )

    __rmul__ = __mul__

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.field)

    def __pos__(self):
        return self

    def conjugate(self):
        return QuadElement(self.a, -self.b, self.field)

    def norm(self):
        return self.a * self.a - self.field.d * self.b * self.b

    def trace(self):
        return 2 * self.a

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.field}")
        return QuadElement(self.a / n, -self.b / n, self.field)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return self.field == other.field and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction, Fp)):
            try:
                o = self._coerce(other)
            except FieldMismatch:
                return False
            return self.a == o.a and self.b == o.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.field.d}))"

    __str__ = __repr__


@lru_cache(maxsize=None)
def QuadExt(base: Field, d) -> QuadraticField:
    return QuadraticField(base, d)


@lru_cache(maxsize=None)
def finite_field(q: int) -> Field:
    """F_q for q = p or q = p^2.

    F_9 is accepted for enumeration tests; its base F_3 is otherwise
    outside the supported primes.
    """
    if isprime(q):
        return GF(q)
    r = isqrt(q)
    if r * r == q and isprime(r):
        base = GF(r, allow_small=(r == 3))
        if r < 3:
            raise ValueError(f"unsupported field size {q}")
        return QuadExt(base, base.nonsquare().v)
    raise ValueError(f"unsupported field size {q}")


def field_of(x) -> Field:
    if isinstance(x, (int, Fraction)):
        return QQ
    if isinstance(x, (Fp, QuadElement)):
        return x.field
    raise TypeError(f"not a scalar: {x!r}")


def common_field(values) -> Field:
    """The single field shared by ``values``; ints defer to the others."""
    field = None
    for x in values:
        if isinstance(x, int) and not isinstance(x, bool):
            continue
        f = field_of(x)
        if field is None:
            field = f
        elif f != field:
            raise FieldMismatch(f"{field} vs {f}")
    return QQ if field is None else field


def scalar_key(x):
    """Total order on scalars of one field, used for deterministic sorting."""
    if isinstance(x, (int, Fraction)):
        return (Fraction(x),)
    if isinstance(x, Fp):
        return (x.v,)
    if isinstance(x, QuadElement):
        return (scalar_key(x.b), scalar_key(x.a))
    raise TypeError(f"not a scalar: {x!r}")
