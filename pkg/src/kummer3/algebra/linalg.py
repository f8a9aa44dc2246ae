"""Exact dense linear algebra: echelon forms, rank and kernels.

Prime fields with ``p < 2**31`` go through a vectorised numpy elimination on
int64 (products of two residues stay below ``2**62``).  Everything else uses
a pure-Python elimination on field elements.

Pivoting always takes the first nonzero entry in the current column,
searching from the lowest row index, so echelon forms are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fields import PrimeField

NUMPY_PRIME_LIMIT = 2**31


@dataclass(frozen=True)
class Matrix:
    field: object
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(field(x) for x in r)
        return cls(field, len(rows), ncols, tuple(flat))

    @classmethod
    def from_numpy(cls, field, arr: np.ndarray) -> "Matrix":
        arr = np.asarray(arr)
        return cls(field, arr.shape[0], arr.shape[1],
                   tuple(int(x) for x in arr.reshape(-1)))

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls.from_rows(field, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, (field(0),) * (rows * cols))

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other):
        F = self.field
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            cols_o = [other.entries[j::other.cols] for j in range(other.cols)]
            out = []
            for i in range(self.rows):
                r = self.row(i)
                out.extend(F.norm(sum(a * b for a, b in zip(r, c))) for c in cols_o)
            return Matrix(F, self.rows, other.cols, tuple(out))
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return [F.norm(sum(a * b for a, b in zip(self.row(i), vec))) for i in range(self.rows)]

    def scaled(self, c) -> "Matrix":
        F = self.field
        return Matrix(F, self.rows, self.cols, tuple(F.norm(x * c) for x in self.entries))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)


def _uses_numpy(field) -> bool:
    return isinstance(field, PrimeField) and field.p < NUMPY_PRIME_LIMIT


def rref_mod_p(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an integer array modulo ``p < 2**31``."""
    a = np.array(a, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        factors = a[:, c].copy()
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            block = a[hit, c:]
            block -= np.outer(factors[hit], a[r, c:]) % p
            block %= p
            a[hit, c:] = block
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod_p(a, p: int) -> int:
    return len(rref_mod_p(a, p)[1])


def _kernel_from_rref(R, pivots, ncols, neg):
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for j in free:
        v = [0] * ncols
        v[j] = 1
        for k, pc in enumerate(pivots):
            v[pc] = neg(R[k][j])
        basis.append(v)
    return basis


def nullspace_mod_p(a, p: int) -> np.ndarray:
    """Canonical (reduced echelon) basis of the right kernel, as rows."""
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    R, pivots = rref_mod_p(a, p)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    if not free:
        return np.zeros((0, ncols), dtype=np.int64)
    K = np.zeros((len(free), ncols), dtype=np.int64)
    K[np.arange(len(free)), free] = 1
    if pivots:
        K[:, pivots] = (-R[:len(pivots), free].T) % p
    return rref_mod_p(K, p)[0]


def left_nullspace_mod_p(a, p: int) -> np.ndarray:
    return nullspace_mod_p(np.asarray(a, dtype=np.int64).T, p)


def _rref_generic(rows: list[list], F) -> tuple[list[list], list[int]]:
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        i = next((k for k in range(r, nrows) if a[k][c] != 0), None)
        if i is None:
            continue
        a[r], a[i] = a[i], a[r]
        inv = F.inv(a[r][c])
        a[r] = [F.norm(x * inv) for x in a[r]]
        prow = a[r]
        for k in range(nrows):
            if k != r and a[k][c] != 0:
                fac = a[k][c]
                a[k] = [F.norm(x - fac * y) for x, y in zip(a[k], prow)]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return m, []
    if _uses_numpy(m.field):
        R, piv = rref_mod_p(np.array(m.to_rows(), dtype=np.int64), m.field.p)
        return Matrix.from_numpy(m.field, R), piv
    R, piv = _rref_generic(m.to_rows(), m.field)
    return Matrix.from_rows(m.field, R), piv


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix) -> list[tuple]:
    """Basis of the right kernel of ``m`` in reduced echelon form.

    The basis vectors, stacked as rows, form a matrix in reduced row echelon
    form (leading entry 1 in its first nonzero position), which makes the
    basis canonical for the kernel.
    """
    F = m.field
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [tuple(F(int(i == j)) for j in range(m.cols)) for i in range(m.cols)]
    if _uses_numpy(F):
        K = nullspace_mod_p(np.array(m.to_rows(), dtype=np.int64), F.p)
        return [tuple(int(x) for x in row) for row in K]
    R, piv = _rref_generic(m.to_rows(), F)
    basis = _kernel_from_rref(R, piv, m.cols, lambda x: F.norm(-x))
    if not basis:
        return []
    K, _ = _rref_generic(basis, F)
    return [tuple(r) for r in K]


def left_nullspace(m: Matrix) -> list[tuple]:
    return nullspace(m.transpose())


def span_rank(vectors: Sequence[Sequence], field) -> int:
    vectors = [list(v) for v in vectors]
    if not vectors:
        return 0
    if _uses_numpy(field):
        return rank_mod_p(np.array(vectors, dtype=np.int64), field.p)
    return len(_rref_generic(vectors, field)[1])


def echelon_basis(vectors: Sequence[Sequence], field) -> list[tuple]:
    """Canonical reduced echelon basis of the span of ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    if _uses_numpy(field):
        R, piv = rref_mod_p(np.array(vectors, dtype=np.int64), field.p)
        return [tuple(int(x) for x in R[i]) for i in range(len(piv))]
    R, piv = _rref_generic(vectors, field)
    return [tuple(R[i]) for i in range(len(piv))]


def matmul_mod_p(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` for residues below ``2**31`` without int64 overflow.

    ``b`` is split into 16-bit halves so each partial product is below
    ``2**47``; sums over up to ``2**16`` terms stay within int64.
    """
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if a.shape[1] > 2**15:
        raise ValueError("inner dimension too large for split multiplication")
    lo = b & 0xFFFF
    hi = b >> 16
    res_lo = (a @ lo) % p
    res_hi = (a @ hi) % p
    return (res_hi * (1 << 16) + res_lo) % p


def solve_mod_p(a: np.ndarray, rhs: np.ndarray, p: int):
    """Solve ``a x = rhs`` (rhs may have several columns) for full-column-rank ``a``.

    Returns ``None`` when the system is inconsistent or ``a`` is rank deficient.
    """
    a = np.asarray(a, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64)
    if rhs.ndim == 1:
        rhs = rhs[:, None]
    n = a.shape[1]
    R, piv = rref_mod_p(np.hstack([a, rhs]), p)
    if piv[:n] != list(range(n)) or (len(piv) > n):
        return None
    return R[:n, n:]
