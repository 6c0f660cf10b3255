"""Verification operations on (p+1)-tuples of matrices."""

from __future__ import annotations

from dataclasses import dataclass

from . import _elim
from .classes import ADDITIVE, check_flavor
from .errors import NotBlockTriangular, PreconditionViolated, ShapeMismatch
from .linalg import ExactMatrix, class_membership
from .scalar import ZERO
from .spectra import d_of_jnf


@dataclass(frozen=True)
class MatrixTuple:
    """Matrices A_1..A_{p+1} (or M_j), optionally bound to conjugacy classes."""

    matrices: tuple
    classes: tuple | None = None
    flavor: str = ADDITIVE

    def __post_init__(self):
        check_flavor(self.flavor)
        mats = tuple(self.matrices)
        if not mats:
            raise ShapeMismatch("empty tuple")
        n = mats[0].rows
        if any(m.shape != (n, n) for m in mats):
            raise ShapeMismatch("all matrices must be square of the same size")
        object.__setattr__(self, "matrices", mats)
        if self.classes is not None:
            classes = tuple(self.classes)
            if len(classes) != len(mats):
                raise ShapeMismatch("one class per matrix is required")
            if any(c.n != n for c in classes):
                raise ShapeMismatch("class sizes do not match the matrices")
            object.__setattr__(self, "classes", classes)

    @property
    def n(self):
        return self.matrices[0].rows

    @property
    def p(self):
        return len(self.matrices) - 1

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]

    def conjugated(self, p, p_inv=None):
        """The tuple (p A_j p^{-1})_j with the same classes."""
        if p_inv is None:
            p_inv = p.inverse()
        return MatrixTuple(tuple(p @ a @ p_inv for a in self.matrices), self.classes, self.flavor)

    def with_classes(self, classes):
        return MatrixTuple(self.matrices, classes, self.flavor)


def direct_sum(*tuples):
    """Block-diagonal direct sum of tuples of equal length."""
    length = len(tuples[0])
    if any(len(t) != length for t in tuples):
        raise ShapeMismatch("tuples must have equal length")
    mats = tuple(ExactMatrix.block_diag(*[t[j] for t in tuples]) for j in range(length))
    return MatrixTuple(mats, None, tuples[0].flavor)


@dataclass(frozen=True)
class TupleReport:
    constraint_ok: bool
    membership_ok: tuple

    @property
    def ok(self):
        return self.constraint_ok and all(self.membership_ok)


def constraint_holds(t):
    n = t.n
    if t.flavor == ADDITIVE:
        total = ExactMatrix.zeros(n)
        for a in t:
            total = total + a
        return total.is_zero()
    prod = ExactMatrix.identity(n)
    for m in t:
        prod = prod @ m
    return prod == ExactMatrix.identity(n)


def verify_tuple(t):
    """Check the sum (or product) constraint and, if bound, class membership."""
    membership = ()
    if t.classes is not None:
        membership = tuple(class_membership(a, c) for a, c in zip(t.matrices, t.classes))
    return TupleReport(constraint_holds(t), membership)


# --------------------------------------------------------------------------
# commutator systems

def _intertwiner_rows(a, b):
    """Rows of the linear map X -> X a - b X on row-major vec(X)."""
    n = a.rows
    rows = []
    for i in range(n):
        for k in range(n):
            row = [ZERO] * (n * n)
            for m in range(n):
                x = a[m, k]
                if x:
                    row[i * n + m] = row[i * n + m] + x
                y = b[i, m]
                if y:
                    row[m * n + k] = row[m * n + k] - y
            rows.append(row)
    return rows


def centralizer_basis(t):
    """Basis of {Z : Z A_j = A_j Z for all j} as n x n matrices."""
    n = t.n
    rows = []
    for a in t:
        rows.extend(_intertwiner_rows(a, a))
    vecs = _elim.kernel(rows, n * n)
    return [ExactMatrix._make(n, n, [_elim.from_field(x) for x in v]) for v in vecs]


def centralizer_dimension(t):
    n = t.n
    rows = []
    for a in t:
        rows.extend(_intertwiner_rows(a, a))
    return n * n - _elim.rank(rows)


def intertwiner_basis(t1, t2):
    """Basis of {X : X A_j = A'_j X for all j}."""
    if t1.n != t2.n or len(t1) != len(t2):
        raise ShapeMismatch("tuples differ in size or length")
    n = t1.n
    rows = []
    for a, b in zip(t1, t2):
        rows.extend(_intertwiner_rows(a, b))
    vecs = _elim.kernel(rows, n * n)
    return [ExactMatrix._make(n, n, [_elim.from_field(x) for x in v]) for v in vecs]


def algebra_basis(t, stop_at_full=True):
    """Basis of the unital algebra generated by the tuple.

    Breadth-first: words are extended on the right by each generator and
    kept when they enlarge the span.
    """
    n = t.n
    echelon = _elim.EchelonBasis(n * n)
    ident = ExactMatrix.identity(n)
    rational = all(x.is_constant() for a in t for x in a.flat())

    def vec(m):
        if rational:
            return [x.as_fraction() for x in m.flat()]
        return m.flat()

    basis = [ident]
    echelon.add(vec(ident))
    queue = [ident]
    while queue:
        if stop_at_full and len(echelon) == n * n:
            break
        word = queue.pop(0)
        for a in t:
            w = word @ a
            if echelon.add(vec(w)):
                basis.append(w)
                queue.append(w)
    return basis


def algebra_dimension(t):
    return len(algebra_basis(t))


def is_irreducible(t):
    """Absolute irreducibility via the Burnside criterion (algebra = M_n)."""
    return algebra_dimension(t) == t.n * t.n


def are_equivalent(t1, t2):
    """Equivalence of two irreducible tuples: a nonzero intertwiner exists."""
    if t1.n != t2.n or len(t1) != len(t2):
        raise PreconditionViolated("tuples differ in size or length")
    if not is_irreducible(t1) or not is_irreducible(t2):
        raise PreconditionViolated("are_equivalent needs irreducible tuples")
    return bool(intertwiner_basis(t1, t2))


@dataclass(frozen=True)
class TangentDimensions:
    direct: int
    formula: int

    @property
    def agree(self):
        return self.direct == self.formula


def _tangent_map_rows(t):
    """Matrix of (X_1, ..., X_{p+1}) -> derivative of the constraint."""
    n = t.n
    nn = n * n
    blocks = []
    mats = t.matrices
    for j, a in enumerate(mats):
        comm = _intertwiner_rows(a, a)  # X -> X a - a X
        if t.flavor == ADDITIVE:
            blocks.append(comm)
            continue
        # X -> P_<j [X, a] P_>j
        left = ExactMatrix.identity(n)
        for m in mats[:j]:
            left = left @ m
        right = ExactMatrix.identity(n)
        for m in mats[j + 1:]:
            right = right @ m
        # vec(L Y R) = kron(L, R^T) vec(Y) for row-major vec
        kron = [[left[i, k] * right[l, jj] for k in range(n) for l in range(n)]
                for i in range(n) for jj in range(n)]
        blocks.append(_matmul_rows(kron, comm))
    rows = []
    for r in range(nn):
        row = []
        for b in blocks:
            row.extend(b[r])
        rows.append(row)
    return rows


def _matmul_rows(a, b):
    out = []
    for row in a:
        acc = [ZERO] * len(b[0])
        for x, brow in zip(row, b):
            if x:
                acc = [s + x * y if y else s for s, y in zip(acc, brow)]
        out.append(acc)
    return out


def tangent_dimension(t):
    """Dimension of the tangent space of the variety at ``t``, two ways.

    direct: sum_j rank(ad A_j) minus the rank of the linearized constraint map;
    formula: sum_j d_j - n^2 + dim of the joint centralizer.
    """
    if t.classes is None:
        raise PreconditionViolated("tangent_dimension needs bound classes")
    report = verify_tuple(t)
    if not report.ok:
        raise PreconditionViolated("tuple is not a point of the variety")
    n = t.n
    orbit = sum(_elim.rank(_intertwiner_rows(a, a)) for a in t)
    direct = orbit - _elim.rank(_tangent_map_rows(t))
    ds = sum(d_of_jnf(c.jnf()) for c in t.classes)
    formula = ds - n * n + centralizer_dimension(t)
    return TangentDimensions(direct, formula)


# --------------------------------------------------------------------------
# degeneration

def _block_ranges(partition, n):
    if sum(partition) != n or any(b < 1 for b in partition):
        raise ShapeMismatch("partition does not match the matrix size")
    ranges = []
    start = 0
    for b in partition:
        ranges.append(range(start, start + b))
        start += b
    return ranges


def is_block_upper_triangular(a, partition):
    ranges = _block_ranges(partition, a.rows)
    for bi, rows in enumerate(ranges):
        for bj in range(bi):
            for i in rows:
                for j in ranges[bj]:
                    if a[i, j]:
                        return False
    return True


def diagonal_limit(t, partition):
    """Block-diagonal part of a block upper-triangular tuple.

    This is the limit of conjugating by diag(1, e, e^2, ...) (one power per
    block) as e -> 0, which kills everything above the diagonal blocks.
    """
    ranges = _block_ranges(partition, t.n)
    out = []
    for a in t:
        if not is_block_upper_triangular(a, partition):
            raise NotBlockTriangular("matrix is not block upper-triangular for this partition")
        updates = {}
        for bi, rows in enumerate(ranges):
            for bj in range(bi + 1, len(ranges)):
                for i in rows:
                    for j in ranges[bj]:
                        if a[i, j]:
                            updates[(i, j)] = 0
        out.append(a.with_entries(updates) if updates else a)
    return MatrixTuple(tuple(out), t.classes, t.flavor)


def conjugation_family(t, partition, eps):
    """Conjugate by diag(I, eps^-1 I, eps^-2 I, ...): block (i, j) scales by eps^(j-i)."""
    ranges = _block_ranges(partition, t.n)
    owner = {}
    for b, r in enumerate(ranges):
        for i in r:
            owner[i] = b
    out = []
    for a in t:
        updates = {}
        for i in range(t.n):
            for j in range(t.n):
                shift = owner[j] - owner[i]
                if shift > 0 and a[i, j]:
                    updates[(i, j)] = a[i, j] * eps ** shift
        out.append(a.with_entries(updates) if updates else a)
    return MatrixTuple(tuple(out), t.classes, t.flavor)
