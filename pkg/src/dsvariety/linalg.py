"""Dense exact matrices over Q(t1, ..., tm)."""

from __future__ import annotations

import random
from fractions import Fraction

from . import _elim
from .errors import DivisionByZero, ShapeMismatch
from .scalar import ONE, ZERO, ScalarExpr, scalar


class ExactMatrix:
    """Immutable dense matrix with ScalarExpr entries (row-major)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data, cols=None):
        if cols is not None:
            # (rows, cols, flat) form used internally
            rows, flat = data
            self.rows, self.cols = rows, cols
            self._data = tuple(flat)
            return
        data = [list(r) for r in data]
        if not data or not data[0]:
            raise ShapeMismatch("matrices must be non-empty")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ShapeMismatch("ragged rows")
        self.rows, self.cols = len(data), width
        self._data = tuple(scalar(x) for r in data for x in r)

    @classmethod
    def _make(cls, rows, cols, flat):
        return cls((rows, flat), cols)

    # constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls._make(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls.diag([ONE] * n)

    @classmethod
    def diag(cls, values):
        values = [scalar(v) for v in values]
        n = len(values)
        flat = [ZERO] * (n * n)
        for i, v in enumerate(values):
            flat[i * n + i] = v
        return cls._make(n, n, flat)

    @classmethod
    def unit(cls, n, i, j, cols=None):
        """E_{i,j} with 0-based indices."""
        cols = n if cols is None else cols
        flat = [ZERO] * (n * cols)
        flat[i * cols + j] = ONE
        return cls._make(n, cols, flat)

    @classmethod
    def column(cls, values):
        return cls([[v] for v in values])

    @classmethod
    def block_assemble(cls, grid):
        """Matrix from a grid of blocks; ``None`` marks a zero block.

        Block sizes are inferred from the non-None blocks of each block row
        and block column; scalars are treated as 1x1 blocks.
        """
        grid = [[_as_block(b) for b in row] for row in grid]
        heights = []
        for row in grid:
            hs = {b.rows for b in row if b is not None}
            if len(hs) != 1:
                raise ShapeMismatch("inconsistent block heights")
            heights.append(hs.pop())
        widths = []
        for c in range(len(grid[0])):
            ws = {row[c].cols for row in grid if row[c] is not None}
            if len(ws) != 1:
                raise ShapeMismatch("inconsistent block widths")
            widths.append(ws.pop())
        out = []
        for row, h in zip(grid, heights):
            for i in range(h):
                line = []
                for b, w in zip(row, widths):
                    if b is None:
                        line.extend([ZERO] * w)
                    else:
                        line.extend(b._data[i * b.cols:(i + 1) * b.cols])
                out.append(line)
        return cls._make(len(out), len(out[0]), [x for r in out for x in r])

    @classmethod
    def block_diag(cls, *blocks):
        blocks = [_as_block(b) for b in blocks]
        grid = []
        for i, b in enumerate(blocks):
            row = []
            for j, c in enumerate(blocks):
                row.append(b if i == j else cls.zeros(b.rows, c.cols))
            grid.append(row)
        return cls.block_assemble(grid)

    # access ---------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i * self.cols + j]

    def row(self, i):
        return list(self._data[i * self.cols:(i + 1) * self.cols])

    def col(self, j):
        return [self._data[i * self.cols + j] for i in range(self.rows)]

    def tolist(self):
        return [self.row(i) for i in range(self.rows)]

    def flat(self):
        return list(self._data)

    def submatrix(self, rows, cols):
        return ExactMatrix([[self[i, j] for j in cols] for i in rows])

    def with_entries(self, updates):
        flat = list(self._data)
        for (i, j), v in updates.items():
            flat[i * self.cols + j] = scalar(v)
        return ExactMatrix._make(self.rows, self.cols, flat)

    # arithmetic -----------------------------------------------------------
    def _check_same(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other):
        self._check_same(other)
        return ExactMatrix._make(self.rows, self.cols, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other):
        self._check_same(other)
        return ExactMatrix._make(self.rows, self.cols, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self):
        return ExactMatrix._make(self.rows, self.cols, [-a for a in self._data])

    def scale(self, c):
        c = scalar(c)
        return ExactMatrix._make(self.rows, self.cols, [c * a for a in self._data])

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return self @ c
        return self.scale(c)

    __rmul__ = scale

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        n, m, k = self.rows, self.cols, other.cols
        a, b = self._data, other._data
        out = []
        for i in range(n):
            arow = a[i * m:(i + 1) * m]
            for j in range(k):
                acc = ZERO
                for t in range(m):
                    x = arow[t]
                    if x:
                        y = b[t * k + j]
                        if y:
                            acc = acc + x * y
                out.append(acc)
        return ExactMatrix._make(n, k, out)

    def __pow__(self, k):
        if not self.is_square():
            raise ShapeMismatch("power of a non-square matrix")
        out = ExactMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    @property
    def T(self):
        return ExactMatrix._make(self.cols, self.rows,
                                 [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def transpose(self):
        return self.T

    def trace(self):
        if not self.is_square():
            raise ShapeMismatch("trace of a non-square matrix")
        total = ZERO
        for i in range(self.rows):
            total = total + self[i, i]
        return total

    def is_zero(self):
        return not any(self._data)

    def is_scalar(self):
        if not self.is_square():
            return False
        d = self[0, 0]
        return all((self[i, j] == d) if i == j else not self[i, j]
                   for i in range(self.rows) for j in range(self.cols))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self._data, other._data))

    def __hash__(self):
        return hash((self.shape, self._data))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix([{body}])"

    # exact linear algebra -------------------------------------------------
    def rank(self):
        return _elim.rank(self.tolist())

    def kernel_basis(self):
        """Basis of {v : self @ v = 0} as tuples of ScalarExpr."""
        vecs = _elim.kernel(self.tolist(), self.cols)
        return [tuple(_elim.from_field(x) for x in v) for v in vecs]

    def column_space(self):
        """Basis of the column space, taken from the pivot columns."""
        rows, _ = _elim.to_field_rows(self.tolist())
        _, pivots = _elim.rref(rows)
        return [tuple(self.col(j)) for j in pivots]

    def inverse(self):
        if not self.is_square():
            raise ShapeMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = [self.row(i) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        rows, _ = _elim.to_field_rows(aug)
        reduced, pivots = _elim.rref(rows)
        if pivots[:n] != list(range(n)) or len(reduced) < n:
            raise DivisionByZero("matrix is singular")
        return ExactMatrix([[_elim.from_field(x) for x in r[n:]] for r in reduced])

    def determinant(self):
        if not self.is_square():
            raise ShapeMismatch("determinant of a non-square matrix")
        rows, _ = _elim.to_field_rows(self.tolist())
        n = self.rows
        det = Fraction(1) if isinstance(rows[0][0], Fraction) else ONE
        for c in range(n):
            pivot = next((i for i in range(c, n) if rows[i][c]), None)
            if pivot is None:
                return ZERO
            if pivot != c:
                rows[c], rows[pivot] = rows[pivot], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = 1 / rows[c][c]
            for i in range(c + 1, n):
                if rows[i][c]:
                    f = rows[i][c] * inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return _elim.from_field(det)

    def apply(self, v):
        """Matrix times a vector given as a sequence."""
        if len(v) != self.cols:
            raise ShapeMismatch("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = ZERO
            for x, y in zip(self.row(i), v):
                if x and y:
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)


def _as_block(b):
    if b is None or isinstance(b, ExactMatrix):
        return b
    return ExactMatrix([[b]])


def class_membership(a, c):
    """Whether ``a`` lies in the conjugacy class ``c``.

    For every listed eigenvalue with blocks b_1 >= b_2 >= ... the ranks of
    (a - lambda I)^k must equal n - sum_i min(k, b_i) for k = 1 .. b_1 + 1.
    The extra power certifies that the generalized eigenspace has exactly the
    declared dimension, so with block sizes adding up to n no other
    eigenvalue can occur.
    """
    if not a.is_square():
        raise ShapeMismatch("class membership needs a square matrix")
    n = a.rows
    if n != c.n:
        raise ShapeMismatch(f"matrix size {n} does not match class size {c.n}")
    ident = ExactMatrix.identity(n)
    for value, blocks in c.spectrum:
        shifted = a - ident.scale(value)
        power = shifted
        for k in range(1, blocks[0] + 2):
            expected = n - sum(min(k, b) for b in blocks)
            if power.rank() != expected:
                return False
            if k <= blocks[0]:
                power = power @ shifted
    return True


def class_representative(c):
    """The Jordan matrix of a class (upper-triangular Jordan blocks)."""
    n = c.n
    flat = [ZERO] * (n * n)
    pos = 0
    for value, blocks in c.spectrum:
        for b in blocks:
            for i in range(b):
                flat[(pos + i) * n + pos + i] = value
                if i + 1 < b:
                    flat[(pos + i) * n + pos + i + 1] = ONE
            pos += b
    return ExactMatrix._make(n, n, flat)


def random_unimodular(n, rng, steps=None, spread=2):
    """Random integer matrix with determinant 1 (and integer inverse).

    Built as a product of elementary shears so both it and its inverse have
    small entries.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    steps = 3 * n if steps is None else steps
    m = ExactMatrix.identity(n)
    if n == 1:
        return m
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        f = rng.choice([k for k in range(-spread, spread + 1) if k])
        m = m @ ExactMatrix.identity(n).with_entries({(i, j): f})
    return m


def conjugate(a, p, p_inv=None):
    """p a p^{-1}."""
    if p_inv is None:
        p_inv = p.inverse()
    return p @ a @ p_inv


def vectors_to_matrix(vectors):
    """Columns ``vectors`` as an n x k matrix."""
    vectors = [list(v) for v in vectors]
    return ExactMatrix([[v[i] for v in vectors] for i in range(len(vectors[0]))])


__all__ = [
    "ExactMatrix",
    "class_membership",
    "class_representative",
    "random_unimodular",
    "conjugate",
    "vectors_to_matrix",
    "ScalarExpr",
]
