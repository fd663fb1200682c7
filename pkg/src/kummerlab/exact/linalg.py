"""Dense exact linear algebra over any supported field (lists of lists)."""

from __future__ import annotations

from fractions import Fraction

from dataclasses import dataclass

from .fields import QQ, Field, common_field

__all__ = [
    "LinearSolution",
    "rref",
    "solve_linear",
    "rank",
    "kernel",
    "mat_mul",
    "mat_vec",
    "transpose",
    "identity",
    "mat_inv",
    "det",
    "normalize_vector",
]


@dataclass(frozen=True)
class LinearSolution:
    rank: int
    pivots: tuple
    kernel: tuple  # basis vectors, first nonzero entry 1
    solution: tuple | None  # particular solution, None if inconsistent or rhs absent
    consistent: bool = True

    @property
    def nullity(self) -> int:
        return len(self.kernel)


def _field_of_matrix(matrix, field):
    if field is not None:
        return field
    return common_field(x for row in matrix for x in row) if matrix else QQ


def rref(matrix, field: Field | None = None):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    field = _field_of_matrix(matrix, field)
    rows = [[field(x) for x in row] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pivot_row = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [a - f * b for a, b in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, tuple(pivots)


def normalize_vector(v):
    """Scale so that the first nonzero entry is 1."""
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return tuple(v)
    if isinstance(lead, int):
        lead = Fraction(lead)
    inv = 1 / lead
    return tuple(x * inv for x in v)


def solve_linear(matrix, rhs=None, field: Field | None = None) -> LinearSolution:
    """Rank, kernel basis and (optionally) a particular solution of A x = b.

    An inconsistent system is reported via ``consistent=False``.
    """
    field = _field_of_matrix(matrix, field)
    if rhs is not None:
        if len(rhs) != len(matrix):
            raise ValueError("rhs length does not match row count")
        aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
        rows, piv = rref(aug, field)
        ncols = len(matrix[0]) if matrix else 0
        consistent = ncols not in piv
        pivots = tuple(c for c in piv if c < ncols)
        coeff_rows = [row[:ncols] for row in rows]
    else:
        rows, pivots = rref(matrix, field)
        ncols = len(matrix[0]) if matrix else 0
        coeff_rows = rows
        consistent = True

    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = -coeff_rows[i][fc]
        basis.append(normalize_vector(v))

    solution = None
    if rhs is not None and consistent:
        x = [field.zero] * ncols
        for i, pc in enumerate(pivots):
            x[pc] = rows[i][ncols]
        solution = tuple(x)
    return LinearSolution(len(pivots), pivots, tuple(basis), solution, consistent)


def rank(matrix, field: Field | None = None) -> int:
    if not matrix:
        return 0
    return len(rref(matrix, field)[1])


def kernel(matrix, field: Field | None = None) -> list[tuple]:
    return list(solve_linear(matrix, None, field).kernel)


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    bt = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in bt:
            s = 0
            for x, y in zip(row, col):
                if x != 0 and y != 0:
                    s = s + x * y
            out_row.append(s)
        out.append(out_row)
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        s = 0
        for x, y in zip(row, v):
            if x != 0 and y != 0:
                s = s + x * y
        out.append(s)
    return out


def identity(n: int, field: Field = QQ):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_inv(a, field: Field | None = None):
    field = _field_of_matrix(a, field)
    n = len(a)
    aug = [list(row) + identity(n, field)[i] for i, row in enumerate(a)]
    rows, piv = rref(aug, field)
    if piv[:n] != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in rows]


def det(a, field: Field | None = None):
    field = _field_of_matrix(a, field)
    rows = [[field(x) for x in row] for row in a]
    n = len(rows)
    result = field.one
    for c in range(n):
        pr = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pr is None:
            return field.zero
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            result = -result
        result = result * rows[c][c]
        inv = field.one / rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return result
