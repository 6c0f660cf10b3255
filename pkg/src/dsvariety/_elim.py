"""Elimination kernels shared by the matrix code.

Rows are lists of field elements: either all :class:`fractions.Fraction`
(the fast path for rational data) or all :class:`ScalarExpr`.  Both support
the field operations and ``bool(x)`` as a nonzero test.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import Poly, ScalarExpr


def to_field_rows(rows):
    """Convert rows of ScalarExpr to Fractions when every entry is rational."""
    rows = [list(r) for r in rows]
    if all(x.is_constant() for r in rows for x in r):
        return [[x.as_fraction() for x in r] for r in rows], True
    return rows, False


def from_field(x):
    return x if isinstance(x, ScalarExpr) else ScalarExpr(x)


def rref(rows):
    """Reduced row echelon form in place-free style.

    Returns ``(reduced_rows, pivot_columns)``; the zero rows are dropped.
    Pivots are the first nonzero entry in row-major scan order.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                pr = rows[r]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def gauss_rank(rows):
    """Rank by ordinary elimination (used on Fraction rows)."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = 1 / pr[c]
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def bareiss_rank(rows):
    """Fraction-free rank of a matrix of ScalarExpr.

    Each row is scaled by the product of its distinct denominators so all
    entries become polynomials; Bareiss elimination then divides exactly by
    the previous pivot, which keeps intermediate degrees bounded.
    """
    polys = []
    for row in rows:
        dens = []
        for x in row:
            d = x.denominator
            if not d.is_constant() and all(d != e for e in dens):
                dens.append(d)
        scale = Poly.const(1)
        for d in dens:
            scale = scale * d
        prow = []
        for x in row:
            num = x.numerator * scale
            q = num.exact_div(x.denominator)
            prow.append(q)
        polys.append(prow)
    if not polys:
        return 0
    m = polys
    nrows, ncols = len(m), len(m[0])
    prev = Poly.const(1)
    rank = 0
    for c in range(ncols):
        pivot = None
        for i in range(rank, nrows):
            if not m[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][c]
        for i in range(rank + 1, nrows):
            a = m[i][c]
            new = []
            for j in range(ncols):
                if j <= c:
                    new.append(Poly())
                    continue
                val = p * m[i][j] - a * m[rank][j]
                q = val.exact_div(prev)
                if q is None:  # pragma: no cover - Bareiss division is exact
                    raise ArithmeticError("inexact Bareiss division")
                new.append(q)
            m[i] = new
        # entries of the pivot row left of c are irrelevant from here on
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(rows):
    field_rows, rational = to_field_rows(rows)
    if rational:
        return gauss_rank(field_rows)
    return bareiss_rank(field_rows)


def kernel(rows, ncols):
    """Basis of the right kernel, as lists of field elements."""
    field_rows, rational = to_field_rows(rows)
    reduced, pivots = rref(field_rows)
    zero = Fraction(0) if rational else ScalarExpr(0)
    one = Fraction(1) if rational else ScalarExpr(1)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


class EchelonBasis:
    """Incrementally maintained reduced echelon basis of a span."""

    def __init__(self, length):
        self.length = length
        self.rows = {}  # pivot column -> row with 1 at pivot, 0 at other pivots

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        v = list(v)
        for c, row in self.rows.items():
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, v):
        """Add ``v``; return True if it enlarged the span."""
        v = self.reduce(v)
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        inv = 1 / v[pivot]
        v = [x * inv for x in v]
        for c, row in list(self.rows.items()):
            if row[pivot]:
                f = row[pivot]
                self.rows[c] = [a - f * b for a, b in zip(row, v)]
        self.rows[pivot] = v
        return True

    def contains(self, v):
        return not any(self.reduce(v))

    def basis(self):
        return [self.rows[c] for c in sorted(self.rows)]
