"""Builders for explicit matrix families and stratum-dimension bookkeeping."""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import _elim
from .classes import ADDITIVE, ConjugacyClassSpec
from .errors import (
    ConstructionFailed,
    EquivalentBlocks,
    ExtDimensionMismatch,
    InfeasibleShape,
    InvalidInstance,
    InvalidSpec,
    PreconditionViolated,
    ScalarSum,
    SpectralConstraintViolated,
    TraceMismatch,
    ZeroParameter,
)
from .linalg import ExactMatrix, random_unimodular
from .relations import enumerate_relations, split_signature
from .scalar import ZERO, ScalarExpr, scalar
from .spectra import class_jnf_tuple, expected_dimension, kappa
from .tuples import (
    MatrixTuple,
    are_equivalent,
    centralizer_dimension,
    constraint_holds,
    direct_sum,
    is_irreducible,
    verify_tuple,
)


def _sum(values):
    total = ZERO
    for v in values:
        total = total + v
    return total


# --------------------------------------------------------------------------
# four-class data with two eigenvalues each


@dataclass(frozen=True)
class SpectralData2x2:
    """Eigenvalues lambda_j, mu_j (j = 1..4) with both sums zero."""

    lambdas: tuple
    mus: tuple

    def __post_init__(self):
        lam = tuple(scalar(x) for x in self.lambdas)
        mu = tuple(scalar(x) for x in self.mus)
        if len(lam) != 4 or len(mu) != 4:
            raise SpectralConstraintViolated("need four lambdas and four mus")
        if not _sum(lam).is_zero() or not _sum(mu).is_zero():
            raise SpectralConstraintViolated("sum of lambdas and sum of mus must both vanish")
        if any(a == b for a, b in zip(lam, mu)):
            raise SpectralConstraintViolated("lambda_j must differ from mu_j")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "mus", mu)

    def classes(self, lam_mult=1, mu_mult=1):
        out = []
        for a, b in zip(self.lambdas, self.mus):
            values, mults = [], []
            for v, m in ((a, lam_mult), (b, mu_mult)):
                if m:
                    values.append(v)
                    mults.append(m)
            out.append(ConjugacyClassSpec.diagonal(values, mults))
        return tuple(out)


SAMPLE_DATA = SpectralData2x2((0, 1, 3, -4), (2, 5, 11, -18))


def build_exB(data, u):
    """Irreducible-in-general 2x2 quadruple, upper-triangular pair plus lower-triangular pair."""
    u = scalar(u)
    if u.is_zero():
        raise ZeroParameter("u must be nonzero")
    l1, l2, l3, l4 = data.lambdas
    m1, m2, m3, m4 = data.mus
    mats = (
        ExactMatrix([[l1, 1], [0, m1]]),
        ExactMatrix([[l2, -1], [0, m2]]),
        ExactMatrix([[l3, 0], [u, m3]]),
        ExactMatrix([[l4, 0], [-u, m4]]),
    )
    return MatrixTuple(mats, data.classes(1, 1))


def build_exH(l, data, permuted=False):
    """Upper-triangular (2l+1)-quadruple with eigenvalue multiplicities l+1, l.

    The default layout has trivial centralizer.  ``permuted`` uses the
    diagonal order (lambda, mu I, lambda I), whose first and last entries
    agree, so E_{1,2l+1} commutes with the whole tuple.
    """
    if l < 1:
        raise InvalidInstance("l must be at least 1")
    n = 2 * l + 1
    lam, mu = data.lambdas, data.mus
    head, mid, tail = [0], list(range(1, l + 1)), list(range(l + 1, n))
    if not permuted:
        # H1, H2 blocked (1, l, l); H3 blocked (l, 1, l)
        h1 = ExactMatrix.diag([lam[0]] * (l + 1) + [mu[0]] * l)
        h2 = ExactMatrix.diag([lam[1]] * (l + 1) + [mu[1]] * l).with_entries(
            {(mid[i], tail[i]): 1 for i in range(l)})
        h3 = ExactMatrix.diag([lam[2]] * (l + 1) + [mu[2]] * l).with_entries(
            {(i, tail[i]): 1 for i in range(l)})
    else:
        def d(j):
            return ExactMatrix.diag([lam[j]] + [mu[j]] * l + [lam[j]] * l)
        h1 = d(0)
        h2 = d(1).with_entries({(head[0], c): 1 for c in mid})
        h3 = d(2)
    h4 = -(h1 + h2 + h3)
    return MatrixTuple((h1, h2, h3, h4), data.classes(l + 1, l))


# --------------------------------------------------------------------------
# 2x2 sums


def _two_eigenvalues(c):
    if c.n != 2 or not c.is_diagonalizable():
        raise PreconditionViolated("expected a diagonalizable 2x2 class")
    if c.is_scalar():
        raise PreconditionViolated("split_sum_2x2 needs non-scalar classes")
    return c.eigenvalues


def split_sum_2x2(s, c1, c2):
    """B1 in c1 and B2 in c2 with B1 + B2 = S, for a non-scalar 2x2 matrix S."""
    l1, m1 = _two_eigenvalues(c1)
    l2, m2 = _two_eigenvalues(c2)
    if s.shape != (2, 2):
        raise PreconditionViolated("S must be 2x2")
    if s.is_scalar():
        raise ScalarSum("S is scalar")
    if s.trace() != c1.trace() + c2.trace():
        raise TraceMismatch("trace of S differs from the sum of class traces")
    y = y_inv = None
    if not s[0, 1]:
        if s[1, 0]:
            y = y_inv = ExactMatrix([[0, 1], [1, 0]])
        else:
            y, y_inv = ExactMatrix([[1, 1], [0, 1]]), ExactMatrix([[1, -1], [0, 1]])
        s = y @ s @ y_inv
    g = s[0, 1]
    h = s[0, 0] - l1
    w = (h * (l2 + m2 - h) - l2 * m2) / g
    u = s[1, 0] - w
    b1 = ExactMatrix([[l1, 0], [u, m1]])
    b2 = ExactMatrix([[h, g], [w, l2 + m2 - h]])
    if y is not None:
        b1 = y_inv @ b1 @ y
        b2 = y_inv @ b2 @ y
    return b1, b2


def build_2x2_tuple(classes, seed=0, budget=64):
    """Irreducible zero-sum tuple of 2x2 matrices from diagonalizable classes.

    The first two non-scalar classes are completed by :func:`split_sum_2x2`;
    the others are diagonal representatives conjugated by seeded random
    unimodular matrices.  Attempts are repeated up to ``budget`` times.
    """
    classes = tuple(classes)
    if len(classes) < 3:
        raise PreconditionViolated("need at least three classes")
    for c in classes:
        if c.n != 2 or not c.is_diagonalizable() or c.flavor != ADDITIVE:
            raise PreconditionViolated("classes must be additive diagonalizable 2x2")
    if not _sum(c.trace() for c in classes).is_zero():
        raise TraceMismatch("class traces do not sum to zero")
    free = [i for i, c in enumerate(classes) if not c.is_scalar()]
    reps = [ExactMatrix.diag(c.expanded_eigenvalues()) for c in classes]
    if len(free) < 2:
        raise ConstructionFailed("fewer than two non-scalar classes: every tuple is reducible",
                                 MatrixTuple(tuple(reps), classes))
    i1, i2 = free[:2]
    rng = random.Random(seed)
    witness = None
    for _ in range(budget):
        mats = list(reps)
        for j in range(len(classes)):
            if j not in (i1, i2) and not classes[j].is_scalar():
                p = random_unimodular(2, rng)
                mats[j] = p @ reps[j] @ p.inverse()
        s = -_sum_matrices([m for j, m in enumerate(mats) if j not in (i1, i2)], 2)
        if s.is_scalar():
            continue
        mats[i1], mats[i2] = split_sum_2x2(s, classes[i1], classes[i2])
        t = MatrixTuple(tuple(mats), classes)
        if is_irreducible(t):
            return t
        witness = t
    raise ConstructionFailed(f"no irreducible tuple within {budget} attempts", witness)


def _sum_matrices(mats, n):
    total = ExactMatrix.zeros(n)
    for m in mats:
        total = total + m
    return total


# --------------------------------------------------------------------------
# block-diagonal stratum points


def build_HB_point(s, data, n, u_list, seed=None):
    """Direct sum of s 2x2 blocks (one per u) and one upper-triangular block of size n-2s."""
    if n < 1 or n % 2 == 0:
        raise InvalidInstance("n must be odd and positive")
    k = (n - 1) // 2
    if not 0 <= s <= k:
        raise InvalidInstance(f"s must lie between 0 and {k}")
    u_list = [scalar(u) for u in u_list]
    if len(u_list) != s:
        raise InvalidInstance("need exactly s values of u")
    blocks = [build_exB(data, u) for u in u_list]
    for i in range(s):
        for j in range(i):
            if are_equivalent(blocks[i], blocks[j]):
                raise EquivalentBlocks(f"blocks {j} and {i} are equivalent")
    l = k - s
    if l >= 1:
        blocks.append(build_exH(l, data))
    else:
        blocks.append(MatrixTuple(tuple(ExactMatrix([[x]]) for x in data.lambdas)))
    t = direct_sum(*blocks).with_classes(data.classes(k + 1, k))
    if seed is not None:
        p = random_unimodular(n, seed)
        t = t.conjugated(p)
    return t


# --------------------------------------------------------------------------
# the 2x2 triples with a transcendental eigenvalue

SEC3_VARIANTS = ("V1", "V2", "prime", "doubleprime")


def sec3_classes():
    pi = ScalarExpr.symbol("t1")
    return (
        ConjugacyClassSpec.diagonal([pi, 2]),
        ConjugacyClassSpec.diagonal([1 - pi, -1]),
        ConjugacyClassSpec(2, ((-1, (2,)),)),
    )


def build_sec3(variant, eps=None):
    """Triples of 2x2 matrices with eigenvalues (t1, 2), (1 - t1, -1), (-1, -1)."""
    pi = ScalarExpr.symbol("t1")
    a2 = ExactMatrix.diag([1 - pi, -1])
    if variant == "V1":
        a1, a3 = ExactMatrix([[pi, 1], [0, 2]]), ExactMatrix([[-1, -1], [0, -1]])
    elif variant == "V2":
        a1, a3 = ExactMatrix([[pi, 0], [1, 2]]), ExactMatrix([[-1, 0], [-1, -1]])
    elif variant in ("prime", "doubleprime"):
        if eps is None:
            raise PreconditionViolated(f"variant {variant} needs eps")
        e = scalar(eps)
        if variant == "prime":
            a1, a3 = ExactMatrix([[pi, e], [0, 2]]), ExactMatrix([[-1, -e], [0, -1]])
        else:
            a1, a3 = ExactMatrix([[pi, 0], [e, 2]]), ExactMatrix([[-1, 0], [-e, -1]])
    else:
        raise PreconditionViolated(f"unknown variant {variant!r}")
    return MatrixTuple((a1, a2, a3), sec3_classes())


# --------------------------------------------------------------------------
# classes with multiplicity vectors (m_j, 1, ..., 1)


@dataclass(frozen=True)
class Sec4Instance:
    """Diagonalizable classes: mu_j of multiplicity m_j plus r_j = n - m_j simple eigenvalues."""

    n: int
    mus: tuple
    simples: tuple

    @property
    def p(self):
        return len(self.mus) - 1

    @property
    def mults(self):
        return tuple(self.n - len(s) for s in self.simples)

    @property
    def rs(self):
        return tuple(len(s) for s in self.simples)

    def _classes(self, drop):
        return tuple(
            ConjugacyClassSpec.diagonal([mu, *simple], [self.n - len(simple) - drop] + [1] * len(simple))
            for mu, simple in zip(self.mus, self.simples)
        )

    def classes(self):
        return self._classes(0)

    def star_classes(self):
        """mu_j multiplicity lowered by 2 (size n - 2)."""
        return self._classes(2)

    def prime_classes(self):
        """mu_j multiplicity lowered by 1 (size n - 1)."""
        return self._classes(1)


def _sec4_shape(n, p, m=None):
    if p <= 3:
        raise InfeasibleShape("p > 3 is required")
    if n < 4:
        raise InfeasibleShape("n must be at least 4")
    if m is not None:
        m = tuple(int(x) for x in m)
        if len(m) != p + 1:
            raise InfeasibleShape("need one multiplicity per class")
        if any(not 3 <= x <= n - 1 for x in m):
            raise InfeasibleShape("multiplicities must lie in [3, n-1]")
        if sum(n - x for x in m) != 2 * n - 2:
            raise InfeasibleShape("sum of r_j must equal 2n - 2")
        return m
    total = 2 * n - 2
    if not p + 1 <= total <= (p + 1) * (n - 3):
        raise InfeasibleShape(f"no r_j in [1, {n - 3}] add up to {total} over {p + 1} classes")
    rs = [1] * (p + 1)
    extra = total - (p + 1)
    j = 0
    while extra:
        if rs[j] < n - 3:
            rs[j] += 1
            extra -= 1
        j = (j + 1) % (p + 1)
    return tuple(n - r for r in rs)


def sec4_reference_signature(n, m):
    """Relation splits of a symbolic instance where (*) and the trace condition are the only ties."""
    p1 = len(m)
    mus = [ScalarExpr.symbol(f"a{j}") for j in range(p1 - 1)]
    mus.append(-_sum(mus))
    simples = []
    count = 0
    for j in range(p1):
        row = []
        for _ in range(n - m[j]):
            row.append(ScalarExpr.symbol(f"b{count}"))
            count += 1
        simples.append(row)
    trace = _sum(x * k for x, k in zip(mus, m)) + _sum(x for row in simples for x in row)
    simples[-1][-1] = simples[-1][-1] - trace
    inst = Sec4Instance(n, tuple(mus), tuple(tuple(r) for r in simples))
    return split_signature(enumerate_relations(inst.classes()))


def sec4_instance_from_values(n, mus, simples, reference=None):
    """Validate concrete eigenvalues; raise InvalidInstance with the reason if rejected."""
    mus = tuple(scalar(x) for x in mus)
    simples = tuple(tuple(scalar(x) for x in row) for row in simples)
    if len(mus) != len(simples):
        raise InvalidInstance("one mu per class is required")
    m = tuple(n - len(row) for row in simples)
    _sec4_shape(n, len(mus) - 1, m)
    inst = Sec4Instance(n, mus, simples)
    try:
        classes = inst.classes()
    except InvalidSpec as exc:
        raise InvalidInstance(f"eigenvalues are not distinct within a class: {exc}") from exc
    if not _sum(mus).is_zero():
        raise InvalidInstance("sum of mu_j is not zero")
    if not _sum(c.trace() for c in classes).is_zero():
        raise InvalidInstance("class traces do not sum to zero")
    if reference is None:
        reference = sec4_reference_signature(n, m)
    found = split_signature(enumerate_relations(classes))
    if found != reference:
        raise InvalidInstance(f"{len(found ^ reference)} relation splits differ from the generic pattern")
    return inst


def make_sec4_instance(n, p, seed=0, m=None, budget=64, spread=40):
    """Random integer eigenvalues satisfying sum(mu_j) = 0, the trace condition and nothing else."""
    m = _sec4_shape(n, p, m)
    reference = sec4_reference_signature(n, m)
    rng = random.Random(seed)
    for _ in range(budget):
        mus = [rng.randint(-spread, spread) for _ in range(p)]
        mus.append(-sum(mus))
        simples = [[rng.randint(-spread, spread) for _ in range(n - mj)] for mj in m]
        trace = sum(x * k for x, k in zip(mus, m)) + sum(sum(r) for r in simples)
        simples[-1][-1] -= trace
        try:
            return sec4_instance_from_values(n, mus, simples, reference)
        except InvalidInstance:
            continue
    raise ConstructionFailed(f"no admissible eigenvalues within {budget} attempts")


# --------------------------------------------------------------------------
# extensions of an irreducible tuple by two copies of the one-dimensional one


@dataclass(frozen=True)
class Extension:
    tuple: MatrixTuple
    dim_l: int
    dim_n: int


def _ext_representatives(mats, mus):
    """Two representatives of L/N for the column extensions of ``mats`` by ``mus``.

    L = {(L_j) : L_j in image(H_j - mu_j I), sum L_j = 0}, N = {((H_j - mu_j I) x)_j}.
    """
    m = mats[0].rows
    count = len(mats)
    shifted = [h - ExactMatrix.identity(m).scale(mu) for h, mu in zip(mats, mus)]
    images = [s.column_space() for s in shifted]
    columns = [(j, v) for j, img in enumerate(images) for v in img]
    if columns:
        rows = [[v[i] for _, v in columns] for i in range(m)]
        coeffs = [[_elim.from_field(x) for x in c] for c in _elim.kernel(rows, len(columns))]
    else:
        coeffs = []

    def tuple_vector(c):
        out = [ZERO] * (m * count)
        for x, (j, v) in zip(c, columns):
            if x:
                for i in range(m):
                    out[j * m + i] = out[j * m + i] + x * v[i]
        return out

    l_vectors = [tuple_vector(c) for c in coeffs]
    n_vectors = [[s[i, k] for s in shifted for i in range(m)] for k in range(m)]
    dim_l = _elim.rank(l_vectors) if l_vectors else 0
    dim_n = _elim.rank(n_vectors)
    quotient = _elim.EchelonBasis(m * count)
    for v in n_vectors:
        quotient.add(v)
    reps = []
    if l_vectors:
        rows, _ = _elim.to_field_rows(l_vectors)
        reduced, _ = _elim.rref(rows)
        for v in reduced:
            v = [_elim.from_field(x) for x in v]
            if quotient.add(v):
                reps.append([v[j * m:(j + 1) * m] for j in range(count)])
    return dim_l, dim_n, reps


def extend_propH(h, mus, side="left"):
    """Trivial-centralizer tuple with diagonal blocks (H, mu, mu) (left) or (mu, mu, H) (right).

    The off-diagonal columns (or rows) represent two independent classes in
    L/N; ExtDimensionMismatch is raised unless dim L/N is exactly 2.
    """
    if side not in ("left", "right"):
        raise PreconditionViolated("side must be 'left' or 'right'")
    mus = tuple(scalar(x) for x in mus)
    if len(mus) != len(h):
        raise PreconditionViolated("one mu per matrix is required")
    if h.classes is None:
        raise PreconditionViolated("the tuple must carry its classes")
    if not constraint_holds(h):
        raise PreconditionViolated("the tuple does not sum to zero")
    if not _sum(mus).is_zero():
        raise PreconditionViolated("sum of mu_j must vanish")
    if not is_irreducible(h):
        raise PreconditionViolated("the tuple must be irreducible")
    if h.n == 1 and all(a[0, 0] == mu for a, mu in zip(h, mus)):
        raise PreconditionViolated("the tuple equals the one-dimensional tuple mu")
    mats = list(h.matrices) if side == "left" else [a.T for a in h.matrices]
    dim_l, dim_n, reps = _ext_representatives(mats, mus)
    if dim_l - dim_n != 2:
        raise ExtDimensionMismatch(f"dim L/N = {dim_l - dim_n}, expected 2", dim_l, dim_n)
    r_cols, q_cols = reps[0], reps[1]
    out = []
    for j, (a, mu) in enumerate(zip(h.matrices, mus)):
        r = ExactMatrix.column(r_cols[j])
        q = ExactMatrix.column(q_cols[j])
        if side == "left":
            grid = [[a, r, q], [None, mu, None], [None, None, mu]]
        else:
            grid = [[mu, None, r.T], [None, mu, q.T], [None, None, a]]
        out.append(ExactMatrix.block_assemble(grid))
    classes = tuple(c.with_multiplicity(mu, _mult(c, mu) + 2) for c, mu in zip(h.classes, mus))
    t = MatrixTuple(tuple(out), classes)
    if not verify_tuple(t).ok or centralizer_dimension(t) != 1:
        raise ConstructionFailed("extension failed verification", t)
    return Extension(t, dim_l, dim_n)


def _mult(c, value):
    for v, m in zip(c.eigenvalues, c.multiplicities):
        if v == value:
            return m
    return 0


# --------------------------------------------------------------------------
# dimension bookkeeping


@dataclass(frozen=True)
class HBDims:
    n: int
    s: int
    dim_hb: int
    dim_sigma: int
    dim_group: int
    dim_transversal: int
    kappa: int
    expected: int
    top_stratum_alt: int | None

    def as_dict(self):
        return dict(self.__dict__)


def hb_stratum_dims(n, s):
    """Dimension of the stratum of s 2x2 blocks plus one upper-triangular block."""
    if n < 1 or n % 2 == 0:
        raise InvalidInstance("n must be odd and positive")
    k = (n - 1) // 2
    if not 0 <= s <= k:
        raise InvalidInstance(f"s must lie between 0 and {k}")
    h = n - 2 * s
    dim_sigma = 5 * s + h * h - 1
    dim_group = 4 * s + h * h
    dim_transversal = n * n - dim_group
    classes = SAMPLE_DATA.classes(k + 1, k)
    t = class_jnf_tuple(classes)
    return HBDims(
        n=n, s=s,
        dim_hb=dim_sigma + dim_transversal,
        dim_sigma=dim_sigma,
        dim_group=dim_group,
        dim_transversal=dim_transversal,
        kappa=kappa(t),
        expected=expected_dimension(t),
        top_stratum_alt=n * n + (n - 3) // 2 if s == k else None,
    )


@dataclass(frozen=True)
class Sec4Dims:
    n: int
    rs: tuple
    dim_u: int
    dim_w: int
    u_prime: int
    u_star: int
    transversal_u: int
    transversal_w: int
    kappa: int
    expected: int

    @property
    def audit_ok(self):
        return (self.dim_u == self.u_prime + self.transversal_u
                and self.dim_w == self.u_star + 2 * self.n + self.transversal_w
                and self.dim_w == self.dim_u - 1)

    def as_dict(self):
        out = dict(self.__dict__)
        out["rs"] = list(self.rs)
        out["audit_ok"] = self.audit_ok
        return out


def sec4_stratum_dims(n, rs):
    """Dimensions of the block-diagonal stratum U and the extension strata W."""
    rs = tuple(int(r) for r in rs)
    if n < 4 or len(rs) < 5:
        raise InvalidInstance("need n >= 4 and at least five classes")
    if any(not 1 <= r <= n - 3 for r in rs) or sum(rs) != 2 * n - 2:
        raise InvalidInstance("need 1 <= r_j <= n-3 with sum 2n - 2")
    sq = sum(r * r for r in rs)
    u_prime = sum((2 * n - 3) * r - r * r for r in rs) - ((n - 1) ** 2 - 1)
    u_star = sum((2 * n - 5) * r - r * r for r in rs) - ((n - 2) ** 2 - 1)
    ds = sum(n * n - (n - r) ** 2 - r for r in rs)
    kap = 2 * n * n - ds
    return Sec4Dims(
        n=n, rs=rs,
        dim_u=3 * (n - 1) ** 2 + 1 - sq,
        dim_w=3 * (n - 1) ** 2 - sq,
        u_prime=u_prime,
        u_star=u_star,
        transversal_u=2 * n - 2,
        transversal_w=2 * (n - 2),
        kappa=kap,
        expected=1 - kap + n * n,
    )


def stratum_dims(inst):
    """Dispatch: a Sec4Instance or an (n, s) pair."""
    if isinstance(inst, Sec4Instance):
        return sec4_stratum_dims(inst.n, inst.rs)
    try:
        n, s = inst
    except (TypeError, ValueError):
        raise InvalidInstance("expected a Sec4Instance or an (n, s) pair") from None
    return hb_stratum_dims(int(n), int(s))


__all__ = [
    "SpectralData2x2",
    "SAMPLE_DATA",
    "build_exB",
    "build_exH",
    "split_sum_2x2",
    "build_2x2_tuple",
    "build_HB_point",
    "SEC3_VARIANTS",
    "sec3_classes",
    "build_sec3",
    "Sec4Instance",
    "make_sec4_instance",
    "sec4_instance_from_values",
    "sec4_reference_signature",
    "Extension",
    "extend_propH",
    "HBDims",
    "Sec4Dims",
    "hb_stratum_dims",
    "sec4_stratum_dims",
    "stratum_dims",
]
