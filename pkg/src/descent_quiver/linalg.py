"""Exact linear algebra over the rationals.

Two layers live here.  :class:`QMatrix` and the free functions ``rref``,
``kernel_basis``, ``det_sign``, ``span_rank`` and ``span_contains`` are
plain Gaussian elimination over :class:`fractions.Fraction`; they are used
for the small geometric problems (flat bases, orientations) and serve as
the reference implementation.  The ``int_*`` helpers push large dense
integer problems through FLINT, which is exact as well but runs in C.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import flint

QVector = tuple  # tuple[Fraction, ...]


def qvector(values: Iterable) -> QVector:
    return tuple(Fraction(v) for v in values)


class QMatrix:
    """Immutable dense matrix of canonical Fractions."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        self._rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "QMatrix":
        return cls([[0] * c for _ in range(r)], c)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def row(self, i: int) -> QVector:
        return self._rows[i]

    def rows(self) -> tuple[QVector, ...]:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, QMatrix)
            and self.shape == other.shape
            and self._rows == other._rows
        )

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"QMatrix([{body}])"

    def transpose(self) -> "QMatrix":
        return QMatrix(
            [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
        )

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = other.transpose().rows()
        return QMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows],
            other.ncols,
        )

    def apply(self, v: Sequence) -> QVector:
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * Fraction(b) for a, b in zip(r, v)), Fraction(0)) for r in self._rows)

    def swap_rows(self, i: int, j: int) -> "QMatrix":
        rows = list(self._rows)
        rows[i], rows[j] = rows[j], rows[i]
        return QMatrix(rows, self.ncols)


def _as_qmatrix(m) -> QMatrix:
    return m if isinstance(m, QMatrix) else QMatrix(m)


def rref(m) -> tuple[QMatrix, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank."""
    m = _as_qmatrix(m)
    rows = [list(r) for r in m.rows()]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return QMatrix(rows, m.ncols), pivots, len(pivots)


def rank(m) -> int:
    return rref(m)[2]


def kernel_basis(m) -> list[QVector]:
    """Basis of the right null space, one vector per free column.

    The vector attached to free column ``f`` has a 1 in position ``f`` and 0
    in every other free position, so the basis is canonical for the row space.
    """
    m = _as_qmatrix(m)
    red, pivots, _ = rref(m)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        basis.append(tuple(v))
    return basis


def det_sign(m) -> int:
    m = _as_qmatrix(m)
    if m.nrows != m.ncols:
        raise ValueError("det_sign needs a square matrix")
    rows = [list(r) for r in m.rows()]
    n = len(rows)
    sign = 1
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            sign = -sign
        if rows[c][c] < 0:
            sign = -sign
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[c][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return sign


def _check_dims(vectors, dim=None):
    dims = {len(v) for v in vectors}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise ValueError("dimension mismatch")


def span_rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    _check_dims(vectors)
    return rank(QMatrix(vectors))


def span_contains(vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return all(Fraction(x) == 0 for x in v)
    _check_dims(vectors, len(v))
    return span_rank(list(vectors) + [v]) == span_rank(vectors)


# ---------------------------------------------------------------------------
# FLINT-backed helpers for large integer problems.  Row scaling does not change
# ranks or row spaces, so callers hand over integer numerators.


def int_matrix(rows: Sequence[Sequence[int]], ncols: int) -> flint.fmpz_mat:
    if not rows:
        return flint.fmpz_mat(0, ncols)
    return flint.fmpz_mat([[int(x) for x in r] for r in rows])


def int_rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    if not rows:
        return 0
    return int_matrix(rows, ncols).rank()


def flint_rank(m) -> int:
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rank()


def row_basis(m) -> flint.fmpq_mat:
    """Nonzero rows of the RREF of ``m`` (a FLINT matrix) as an fmpq_mat."""
    if m.nrows() == 0:
        return flint.fmpq_mat(0, m.ncols())
    red, r = flint.fmpq_mat(m).rref()
    if r == 0:
        return flint.fmpq_mat(0, m.ncols())
    return flint.fmpq_mat([[red[i, j] for j in range(m.ncols())] for i in range(r)])


def stack_rows(mats, ncols: int) -> flint.fmpq_mat:
    rows = []
    for m in mats:
        for i in range(m.nrows()):
            rows.append([m[i, j] for j in range(ncols)])
    if not rows:
        return flint.fmpq_mat(0, ncols)
    return flint.fmpq_mat(rows)


def to_fraction(x) -> Fraction:
    """Convert a FLINT rational or integer entry to a Fraction."""
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(int(x))


def fmpz_from_rows(rows, ncols: int) -> flint.fmpz_mat:
    """Integer matrix from a 2-d numpy array (any integer or object dtype)."""
    import numpy as np

    arr = np.asarray(rows, dtype=object).reshape(-1, ncols)
    if arr.shape[0] == 0:
        return flint.fmpz_mat(0, ncols)
    return flint.fmpz_mat(arr.shape[0], ncols, [int(x) for x in arr.ravel()])


def fmpz_to_array(m: flint.fmpz_mat):
    import numpy as np

    return np.array([int(x) for x in m.entries()], dtype=object).reshape(m.nrows(), m.ncols())


class Subspace:
    """Row space of an integer matrix, kept as its primitive reduced basis."""

    def __init__(self, basis: flint.fmpz_mat):
        self.basis = basis
        self.ncols = basis.ncols()

    @classmethod
    def span(cls, m: flint.fmpz_mat, chunk: int | None = None) -> "Subspace":
        ncols = m.ncols()
        if m.nrows() == 0:
            return cls(flint.fmpz_mat(0, ncols))
        red, _, r = m.rref()
        if r == 0:
            return cls(flint.fmpz_mat(0, ncols))
        rows = red.entries()[: r * ncols]
        return cls(flint.fmpz_mat(r, ncols, _primitive_rows(rows, r, ncols)))

    @classmethod
    def span_of_blocks(cls, blocks, ncols: int) -> "Subspace":
        """Span of a stream of row blocks, reducing as it goes."""
        current = cls(flint.fmpz_mat(0, ncols))
        pending: list = []
        pending_rows = 0
        for b in blocks:
            if b.nrows() == 0:
                continue
            pending.append(b)
            pending_rows += b.nrows()
            if pending_rows >= 2 * ncols:
                current = cls.span(_vstack([current.basis] + pending, ncols))
                pending, pending_rows = [], 0
        if pending:
            current = cls.span(_vstack([current.basis] + pending, ncols))
        return current

    @property
    def dim(self) -> int:
        return self.basis.nrows()

    def __len__(self):
        return self.dim

    def rows(self):
        return fmpz_to_array(self.basis)

    def contains(self, v) -> bool:
        if self.dim == 0:
            return all(int(x) == 0 for x in v)
        stacked = _vstack([self.basis, fmpz_from_rows([v], self.ncols)], self.ncols)
        return stacked.rank() == self.dim

    def sum_dim(self, other: "Subspace") -> int:
        return flint_rank(_vstack([self.basis, other.basis], self.ncols))

    def intersection_dim(self, other: "Subspace") -> int:
        return self.dim + other.dim - self.sum_dim(other)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.basis == other.basis


def _primitive_rows(entries, r: int, ncols: int) -> list:
    from math import gcd

    out = []
    for i in range(r):
        row = [int(x) for x in entries[i * ncols : (i + 1) * ncols]]
        g = 0
        for x in row:
            g = gcd(g, x)
        lead = next((x for x in row if x), 1)
        if lead < 0:
            g = -g
        if g not in (0, 1):
            row = [x // g for x in row]
        out.extend(row)
    return out


def _vstack(mats, ncols: int) -> flint.fmpz_mat:
    entries: list = []
    n = 0
    for m in mats:
        if m.nrows():
            entries.extend(m.entries())
            n += m.nrows()
    if n == 0:
        return flint.fmpz_mat(0, ncols)
    return flint.fmpz_mat(n, ncols, entries)
