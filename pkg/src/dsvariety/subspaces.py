"""Common invariant subspaces of dimension 1 and 2."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import _elim
from .classes import ADDITIVE
from .errors import NotDiagonalizable, PreconditionViolated
from .linalg import ExactMatrix, vectors_to_matrix
from .scalar import ONE, ZERO, ScalarExpr, scalar

SUBSPACE = "subspace"
FAMILY = "family"
UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class InvariantSubspace:
    """Invariant subspaces of dimension ``dim`` attached to one eigenvalue selection.

    kind == "subspace": ``basis`` spans a single invariant subspace.
    kind == "family": infinitely many invariant subspaces of dimension ``dim``
    lie inside the span of ``basis`` (for dim 1: every line of a joint
    eigenspace).
    kind == "unresolved": invariant subspaces may lie inside the span of
    ``basis`` but could not be isolated over the ground field.
    """

    dim: int
    eigenvalues: tuple
    basis: tuple
    kind: str = SUBSPACE

    @property
    def container_dim(self):
        return len(self.basis)


def _stack_kernel(mats, n):
    rows = []
    for m in mats:
        rows.extend(m.tolist())
    if not rows:
        return [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    return [tuple(_elim.from_field(x) for x in v) for v in _elim.kernel(rows, n)]


def echelon_basis(vectors):
    """Canonical (reduced row echelon) basis of a span; makes spans comparable."""
    if not vectors:
        return ()
    rows, _ = _elim.to_field_rows([[scalar(x) for x in v] for v in vectors])
    reduced, _ = _elim.rref(rows)
    return tuple(tuple(_elim.from_field(x) for x in r) for r in reduced)


def same_span(a, b):
    return echelon_basis(list(a)) == echelon_basis(list(b))


def _largest_invariant_inside(t, basis):
    """Largest subspace of span(basis) mapped into itself by every matrix."""
    n = t.n
    while basis:
        b = vectors_to_matrix(basis)
        # rows whose kernel is span(basis)
        annihilator = ExactMatrix([list(v) for v in b.T.kernel_basis()]) if len(basis) < n else None
        if annihilator is None:
            return basis
        stacked = []
        for a in t:
            stacked.extend((annihilator @ a @ b).tolist())
        coeffs = [tuple(_elim.from_field(x) for x in v) for v in _elim.kernel(stacked, len(basis))]
        if len(coeffs) == len(basis):
            return basis
        basis = [b.apply(c) for c in coeffs]
    return basis


def _restrict(t, basis):
    """Matrices of the tuple restricted to the invariant span of ``basis``."""
    p = vectors_to_matrix(basis)
    m = len(basis)
    rows, _ = _elim.to_field_rows(p.T.tolist())
    _, pivots = _elim.rref(rows)
    sel = pivots[:m]
    ps_inv = p.submatrix(sel, range(m)).inverse()
    out = []
    for a in t:
        ap = a @ p
        out.append(ps_inv @ ap.submatrix(sel, range(m)))
    return out


def _wedge_pairs(m):
    return list(itertools.combinations(range(m), 2))


def _wedge_operator(r, flavor):
    """Induced action on the second exterior power (derivation or group action)."""
    m = r.rows
    pairs = _wedge_pairs(m)
    index = {pq: i for i, pq in enumerate(pairs)}
    size = len(pairs)
    rows = [[ZERO] * size for _ in range(size)]

    def put(i, j, coeff, col):
        # coefficient of e_i ^ e_j, reordered to i < j
        if i == j or not coeff:
            return
        if i < j:
            rows[index[(i, j)]][col] = rows[index[(i, j)]][col] + coeff
        else:
            rows[index[(j, i)]][col] = rows[index[(j, i)]][col] - coeff

    for col, (a, b) in enumerate(pairs):
        if flavor == ADDITIVE:
            for i in range(m):
                put(i, b, r[i, a], col)
                put(a, i, r[i, b], col)
        else:
            for i in range(m):
                for j in range(m):
                    put(i, j, r[i, a] * r[j, b], col)
    return ExactMatrix(rows)


def _skew(w, m):
    pairs = _wedge_pairs(m)
    s = [[ZERO] * m for _ in range(m)]
    for (a, b), x in zip(pairs, w):
        s[a][b] = x
        s[b][a] = -x
    return ExactMatrix(s)


def _plucker_forms(w1, w2, m):
    """Each Pluecker quadric restricted to the pencil s*w1 + t*w2, as (alpha, beta, gamma)."""
    index = {pq: i for i, pq in enumerate(_wedge_pairs(m))}
    forms = []
    for a, b, c, d in itertools.combinations(range(m), 4):
        def q4(w, a=a, b=b, c=c, d=d):
            return (w[index[(a, b)]] * w[index[(c, d)]]
                    - w[index[(a, c)]] * w[index[(b, d)]]
                    + w[index[(a, d)]] * w[index[(b, c)]])
        alpha = q4(w1)
        gamma = q4(w2)
        beta = q4([x + y for x, y in zip(w1, w2)]) - alpha - gamma
        forms.append((alpha, beta, gamma))
    return forms


def _rational_sqrt(x):
    q = x.as_fraction()
    if q is None or q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return ScalarExpr(Fraction(a, b))
    return None


def _binary_roots(alpha, beta, gamma):
    """Projective roots (s, t) of alpha s^2 + beta s t + gamma t^2, or None if not rational."""
    if not alpha:
        roots = [(ONE, ZERO)]
        if beta:
            roots.append((-gamma, beta))
        return roots
    disc = beta * beta - 4 * alpha * gamma
    if not disc:
        return [(-beta / (2 * alpha), ONE)]
    root = _rational_sqrt(disc)
    if root is None:
        return None
    return [((-beta + root) / (2 * alpha), ONE), ((-beta - root) / (2 * alpha), ONE)]


def _planes_in(t, ustar, flavor, targets):
    """Two-dimensional invariant subspaces inside the invariant span ``ustar``."""
    m = len(ustar)
    restricted = _restrict(t, ustar)
    ops = []
    for r, target in zip(restricted, targets):
        w = _wedge_operator(r, flavor)
        ops.append(w - ExactMatrix.identity(w.rows).scale(target))
    k = _stack_kernel(ops, len(_wedge_pairs(m)))
    p = vectors_to_matrix(ustar)
    if not k:
        return SUBSPACE, []
    if len(k) == len(_wedge_pairs(m)):
        return FAMILY, None

    def plane(w):
        s = _skew(w, m)
        if s.rank() != 2:
            return None
        return [p.apply(c) for c in s.column_space()]

    if len(k) == 1:
        pl = plane(k[0])
        return SUBSPACE, ([pl] if pl else [])
    if len(k) > 2 or m < 4:
        # m < 4: every vector of the pencil is decomposable
        return (FAMILY if m < 4 and len(k) == 2 else UNRESOLVED), None
    forms = [f for f in _plucker_forms(k[0], k[1], m) if any(f)]
    if not forms:
        return FAMILY, None
    roots = _binary_roots(*forms[0])
    if roots is None:
        return UNRESOLVED, None
    planes = []
    for s, tt in roots:
        if all(not (a * s * s + b * s * tt + c * tt * tt) for a, b, c in forms):
            pl = plane([s * x + tt * y for x, y in zip(k[0], k[1])])
            if pl and not any(same_span(pl, q) for q in planes):
                planes.append(pl)
    return SUBSPACE, planes


def _constraint_ok(values, flavor):
    if flavor == ADDITIVE:
        total = ZERO
        for v in values:
            total = total + v
        return total.is_zero()
    total = ONE
    for v in values:
        total = total * v
    return total == ONE


def invariant_subspaces(t, max_dim=2):
    """Common invariant subspaces of dimension 1 (and 2 if ``max_dim`` is 2).

    Eigenvalue selections are taken from the bound classes and pruned by the
    trace (or determinant) constraint that the restricted tuple must satisfy.
    Dimension 1: joint eigenspaces.  Dimension 2 (diagonalizable classes
    only): the largest invariant subspace inside the intersection of the
    selected eigenspace pairs, searched for planes through the induced action
    on its second exterior power.
    """
    if t.classes is None:
        raise PreconditionViolated("invariant_subspaces needs bound classes")
    if max_dim not in (1, 2):
        raise PreconditionViolated("max_dim must be 1 or 2")
    n = t.n
    flavor = t.flavor
    out = []
    ident = ExactMatrix.identity(n)
    eig = [c.eigenvalues for c in t.classes]

    if n >= 2:
        for combo in itertools.product(*eig):
            if not _constraint_ok(combo, flavor):
                continue
            k = _stack_kernel([a - ident.scale(x) for a, x in zip(t, combo)], n)
            if k:
                kind = SUBSPACE if len(k) == 1 else FAMILY
                out.append(InvariantSubspace(1, tuple(combo), echelon_basis(k), kind))

    if max_dim < 2 or n < 3:
        return out
    if not all(c.is_diagonalizable() for c in t.classes):
        raise NotDiagonalizable("dimension-2 search needs diagonalizable classes")
    pair_options = [list(itertools.combinations_with_replacement(e, 2)) for e in eig]
    for combo in itertools.product(*pair_options):
        if not _constraint_ok([x for pair in combo for x in pair], flavor):
            continue
        if flavor == ADDITIVE:
            targets = [x + y for x, y in combo]
        else:
            targets = [x * y for x, y in combo]
        mats = []
        for a, (x, y) in zip(t, combo):
            if x == y:
                mats.append(a - ident.scale(x))
            else:
                mats.append((a - ident.scale(x)) @ (a - ident.scale(y)))
        u = _stack_kernel(mats, n)
        if len(u) < 2:
            continue
        ustar = _largest_invariant_inside(t, [tuple(v) for v in u])
        if len(ustar) < 2:
            continue
        if len(ustar) == 2:
            out.append(InvariantSubspace(2, tuple(combo), echelon_basis(ustar)))
            continue
        kind, planes = _planes_in(t, ustar, flavor, targets)
        if planes is None:
            out.append(InvariantSubspace(2, tuple(combo), echelon_basis(ustar), kind))
        else:
            for pl in planes:
                out.append(InvariantSubspace(2, tuple(combo), echelon_basis(pl)))
    return out


def has_invariant_line(t):
    return any(s.dim == 1 for s in invariant_subspaces(t, max_dim=1))
