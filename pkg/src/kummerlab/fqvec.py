"""Vectorised arithmetic over small finite fields.

Elements of F_q are encoded as integers 0..q-1 (``field.encode``) and all
operations go through q x q lookup tables, so whole point sets can be pushed
through a polynomial at once.  Used by the exhaustive censuses.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exact.fields import Field, finite_field
from .exact.poly import MultiPoly


class FqTables:
    def __init__(self, field: Field):
        if not field.is_finite:
            raise ValueError("vector kernels need a finite field")
        self.field = field
        q = self.q = field.order
        elems = [field.decode(c) for c in range(q)]
        self.add = np.empty((q, q), dtype=np.int32)
        self.mul = np.empty((q, q), dtype=np.int32)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                self.add[i, j] = field.encode(a + b)
                self.mul[i, j] = field.encode(a * b)
        self.neg = np.array([field.encode(-a) for a in elems], dtype=np.int32)
        self.one = field.encode(field.one)
        self._pow: dict[int, np.ndarray] = {}

    def power(self, e: int) -> np.ndarray:
        table = self._pow.get(e)
        if table is None:
            table = np.array(
                [self.field.encode(self.field.decode(c) ** e) for c in range(self.q)],
                dtype=np.int32,
            )
            self._pow[e] = table
        return table

    def compile(self, f: MultiPoly):
        if f.field != self.field:
            raise ValueError(f"polynomial over {f.field}, kernel over {self.field}")
        return [(self.field.encode(c), e) for e, c in f._terms.items()]

    def evaluate(self, f, points: np.ndarray) -> np.ndarray:
        """Codes of f at each row of ``points`` (shape (N, nvars))."""
        terms = self.compile(f) if isinstance(f, MultiPoly) else f
        acc = np.zeros(points.shape[0], dtype=np.int32)
        for code, exps in terms:
            t = np.full(points.shape[0], code, dtype=np.int32)
            for i, k in enumerate(exps):
                if k:
                    t = self.mul[t, self.power(k)[points[:, i]]]
            acc = self.add[acc, t]
        return acc

    def vanishing(self, polys, points: np.ndarray) -> np.ndarray:
        """Boolean mask of rows where every polynomial vanishes."""
        mask = np.ones(points.shape[0], dtype=bool)
        for f in polys:
            idx = np.nonzero(mask)[0]
            if idx.size == 0:
                break
            vals = self.evaluate(f, points[idx])
            mask[idx[vals != 0]] = False
        return mask

    def projective_points(self, n: int) -> np.ndarray:
        """All points of P^n(F_q), normalised (first nonzero coordinate 1).

        Ordered by the position of the leading 1, then lexicographically by
        the codes of the remaining coordinates.
        """
        return _proj_points(self.q, n, self.one)

    def decode_point(self, row):
        return tuple(self.field.decode(c) for c in row)


@lru_cache(maxsize=None)
def _proj_points(q: int, n: int, one: int) -> np.ndarray:
    blocks = []
    for lead in range(n + 1):
        free = n - lead
        if free:
            grid = np.indices((q,) * free, dtype=np.int32).reshape(free, -1).T
        else:
            grid = np.zeros((1, 0), dtype=np.int32)
        block = np.zeros((grid.shape[0], n + 1), dtype=np.int32)
        block[:, lead] = one
        block[:, lead + 1 :] = grid
        blocks.append(block)
    out = np.concatenate(blocks)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def tables(field: Field) -> FqTables:
    return FqTables(field)


def tables_for(q: int) -> FqTables:
    return tables(finite_field(q))


def rref_mod_p(matrix, p: int):
    """Reduced echelon form of an integer matrix over F_p (numpy, int64).

    Returns (rows, pivots) with rows reduced to residues in [0, p).
    """
    a = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def nullspace_mod_p(matrix, p: int) -> list:
    """Kernel basis over F_p, each vector scaled to leading entry 1."""
    a = np.array(matrix, dtype=np.int64)
    ncols = a.shape[1]
    rows, pivots = rref_mod_p(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i, fc]) % p
        lead = v[np.nonzero(v)[0][0]]
        basis.append([int(x) for x in (v * pow(int(lead), -1, p)) % p])
    return basis
