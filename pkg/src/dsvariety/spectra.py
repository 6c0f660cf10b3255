"""Jordan normal form combinatorics and class-level necessary conditions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .classes import ADDITIVE
from .errors import EmptyClassList, InvalidChoice, InvalidSpec, PsiUndefined
from .scalar import ONE, ZERO


@dataclass(frozen=True)
class Jnf:
    """A Jordan normal form: ``((eigenvalue_id, (b1 >= b2 >= ...)), ...)``."""

    entries: tuple

    def __post_init__(self):
        entries = tuple((eid, tuple(int(b) for b in blocks)) for eid, blocks in self.entries)
        ids = [eid for eid, _ in entries]
        if len(set(ids)) != len(ids):
            raise InvalidSpec("eigenvalue ids must be distinct")
        for _, blocks in entries:
            if not blocks or min(blocks) < 1:
                raise InvalidSpec("block sizes must be positive")
            if list(blocks) != sorted(blocks, reverse=True):
                raise InvalidSpec("block sizes must be non-increasing")
        if not entries:
            raise InvalidSpec("empty JNF")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def diagonal(cls, mults):
        """Diagonal JNF with multiplicity vector ``mults`` (ids 0, 1, ...)."""
        return cls(tuple((i, (1,) * m) for i, m in enumerate(mults)))

    @classmethod
    def single_block(cls, size):
        return cls(((0, (size,)),))

    @property
    def n(self):
        return sum(sum(b) for _, b in self.entries)

    @property
    def ids(self):
        return tuple(eid for eid, _ in self.entries)

    def blocks(self, eid):
        for e, b in self.entries:
            if e == eid:
                return b
        raise KeyError(eid)

    def is_diagonal(self):
        return all(b == 1 for _, blocks in self.entries for b in blocks)

    def multiplicities(self):
        return tuple(sum(b) for _, b in self.entries)

    def shape(self):
        """Canonical unlabeled form, used to compare JNFs up to renaming."""
        return tuple(sorted((b for _, b in self.entries), reverse=True))

    def max_block_ids(self):
        top = max(len(b) for _, b in self.entries)
        return [eid for eid, b in self.entries if len(b) == top]


@dataclass(frozen=True)
class JnfTuple:
    jnfs: tuple

    def __post_init__(self):
        jnfs = tuple(self.jnfs)
        if len(jnfs) < 1:
            raise InvalidSpec("a tuple needs at least one JNF")
        if len({j.n for j in jnfs}) != 1:
            raise InvalidSpec("all JNFs in a tuple must have the same size")
        object.__setattr__(self, "jnfs", jnfs)

    @property
    def n(self):
        return self.jnfs[0].n

    @property
    def p(self):
        return len(self.jnfs) - 1

    def __len__(self):
        return len(self.jnfs)

    def __iter__(self):
        return iter(self.jnfs)

    def __getitem__(self, i):
        return self.jnfs[i]

    def shape(self):
        return tuple(j.shape() for j in self.jnfs)


def as_jnf_tuple(t):
    if isinstance(t, JnfTuple):
        return t
    return JnfTuple(tuple(t))


def lambda_tuple(k):
    """The PMV ((k+1, k),) * 4 as a tuple of diagonal JNFs of size 2k+1."""
    mv = (k + 1, k) if k > 0 else (1,)
    return JnfTuple((Jnf.diagonal(mv),) * 4)


def r_of_jnf(j):
    """n minus the largest number of Jordan blocks sharing one eigenvalue."""
    return j.n - max(len(b) for _, b in j.entries)


def d_of_jnf(j):
    """Dimension of the conjugacy class with JNF ``j``.

    The centralizer of a Jordan matrix has dimension
    sum over eigenvalues of sum_{i,i'} min(b_i, b_i').
    """
    cent = 0
    for _, blocks in j.entries:
        for a in blocks:
            for b in blocks:
                cent += min(a, b)
    return j.n * j.n - cent


def kappa(t):
    """Index of rigidity 2n^2 - sum d_j."""
    t = as_jnf_tuple(t)
    return 2 * t.n * t.n - sum(d_of_jnf(j) for j in t)


def expected_dimension(t):
    t = as_jnf_tuple(t)
    return 1 - kappa(t) + t.n * t.n


def check_inequalities(t):
    """Return ``(alpha, beta, omega)`` for the tuple."""
    t = as_jnf_tuple(t)
    n = t.n
    rs = [r_of_jnf(j) for j in t]
    ds = [d_of_jnf(j) for j in t]
    alpha = sum(ds) >= 2 * n * n - 2
    beta = all(sum(rs) - r >= n for r in rs)
    omega = sum(rs) >= 2 * n
    return alpha, beta, omega


def _psi_failures(t):
    _, beta, omega = check_inequalities(t)
    reasons = []
    if t.n <= 1:
        reasons.append("n>1")
    if not beta:
        reasons.append("beta")
    if omega:
        reasons.append("omega")
    return reasons


def psi_step(t, choice=None):
    """One step of the reduction map on JNF tuples.

    ``choice`` optionally gives, per class, the eigenvalue id whose blocks are
    shrunk; it must attain the maximal block count.  ``None`` entries (or no
    choice at all) fall back to the first maximal id.
    """
    t = as_jnf_tuple(t)
    reasons = _psi_failures(t)
    if reasons:
        raise PsiUndefined(reasons)
    n = t.n
    n1 = sum(r_of_jnf(j) for j in t) - n
    drop = n - n1
    if choice is None:
        choice = [None] * len(t)
    if len(choice) != len(t):
        raise InvalidChoice("one choice per class is required")
    out = []
    for j, eid in zip(t, choice):
        candidates = j.max_block_ids()
        if eid is None:
            eid = candidates[0]
        elif eid not in candidates:
            raise InvalidChoice(f"eigenvalue {eid!r} does not have the maximal number of blocks")
        entries = []
        for e, blocks in j.entries:
            if e == eid:
                # the last `drop` entries of a non-increasing list are the smallest
                keep = len(blocks) - drop
                blocks = tuple(sorted(blocks[:keep] + tuple(b - 1 for b in blocks[keep:] if b > 1),
                                      reverse=True))
            if blocks:
                entries.append((e, blocks))
        out.append(Jnf(tuple(entries)))
    return JnfTuple(tuple(out))


@dataclass(frozen=True)
class ConditionReport:
    alpha: bool
    beta: bool
    omega: bool
    kappa: int
    verdict: str
    trail: tuple
    final_n: int
    failure: str | None = None
    generic_sufficient: bool = False

    @property
    def satisfied(self):
        return self.verdict == "satisfied"

    def describe(self):
        if self.satisfied:
            return "satisfied"
        return f"violated ({self.failure})"


def necessary_condition(t, choices=None, generic=False):
    """Iterate the reduction map as long as it is defined and judge the endpoint.

    ``choices`` is an optional list of per-stage choice lists.  ``generic``
    is a report-only flag: set it when the eigenvalues are known to be
    generic, in which case the verdict is also sufficient.
    """
    t = as_jnf_tuple(t)
    alpha, beta, omega = check_inequalities(t)
    trail = [t]
    failure = None
    stage = 0
    current = t
    while True:
        _, b, w = check_inequalities(current)
        if current.n == 1 or w:
            verdict = "satisfied"
            break
        if not b:
            verdict = "violated"
            failure = f"beta at stage {stage}"
            break
        choice = choices[stage] if choices is not None and stage < len(choices) else None
        current = psi_step(current, choice)
        trail.append(current)
        stage += 1
    return ConditionReport(
        alpha=alpha,
        beta=beta,
        omega=omega,
        kappa=kappa(t),
        verdict=verdict,
        trail=tuple(trail),
        final_n=current.n,
        failure=failure,
        generic_sufficient=bool(generic and verdict == "satisfied"),
    )


def all_choice_sequences(t, limit=None):
    """Yield every complete reduction trail reachable through admissible choices."""
    t = as_jnf_tuple(t)
    stack = [(t, (t,))]
    count = 0
    while stack:
        current, trail = stack.pop()
        if _psi_failures(current):
            yield trail
            count += 1
            if limit is not None and count >= limit:
                return
            continue
        options = [j.max_block_ids() for j in current]
        for choice in itertools.product(*options):
            nxt = psi_step(current, list(choice))
            stack.append((nxt, trail + (nxt,)))


def verdict_of_trail(trail):
    last = trail[-1]
    _, _, omega = check_inequalities(last)
    return "satisfied" if (last.n == 1 or omega) else "violated"


# --------------------------------------------------------------------------
# the (delta) inequality


@dataclass(frozen=True)
class DeltaResult:
    min_value: int
    witness: tuple
    n: int

    @property
    def holds(self):
        return self.min_value >= 2 * self.n


def delta_min_rank_sum(classes):
    """Minimum over admissible shifts of sum_j rk(A_j - b_j I).

    Additive classes use shifts with b_1 + ... + b_{p+1} = 0, multiplicative
    ones rk(b_j M_j - I) with b_1 ... b_{p+1} = 1.  The witness lists the shift
    per class; ``None`` marks the single free shift, chosen off the spectrum.
    Ties are broken by the lexicographic order of eigenvalue indices, with the
    free choice sorting last.
    """
    classes = list(classes)
    if not classes:
        raise EmptyClassList("no classes given")
    n = classes[0].n
    flavor = classes[0].flavor
    if any(c.n != n or c.flavor != flavor for c in classes):
        raise InvalidSpec("classes must share size and flavor")

    options = []
    for c in classes:
        opts = []
        for value, blocks in c.spectrum:
            shift = value if flavor == ADDITIVE else ONE / value
            opts.append((shift, n - len(blocks)))
        options.append(opts)
    min_rank = [min(r for _, r in opts) for opts in options]

    best = None
    best_key = None

    def consider(value, key, witness):
        nonlocal best, best_key
        if best is None or value < best[0] or (value == best[0] and key < best_key):
            best = (value, witness)
            best_key = key

    # (a) every shift is an eigenvalue and the constraint holds exactly
    for combo in itertools.product(*[range(len(o)) for o in options]):
        shifts = [options[j][i][0] for j, i in enumerate(combo)]
        if flavor == ADDITIVE:
            total = ZERO
            for s in shifts:
                total = total + s
            ok = total.is_zero()
        else:
            total = ONE
            for s in shifts:
                total = total * s
            ok = total == ONE
        if ok:
            value = sum(options[j][i][1] for j, i in enumerate(combo))
            consider(value, combo, tuple(shifts))

    # (b) exactly one free shift, the others at a rank-minimizing eigenvalue
    for free in range(len(classes)):
        combo = []
        shifts = []
        for j, opts in enumerate(options):
            if j == free:
                combo.append(len(opts))
                shifts.append(None)
            else:
                i = next(i for i, (_, r) in enumerate(opts) if r == min_rank[j])
                combo.append(i)
                shifts.append(opts[i][0])
        value = n + sum(min_rank[j] for j in range(len(classes)) if j != free)
        consider(value, tuple(combo), tuple(shifts))

    return DeltaResult(best[0], best[1], n)


def class_jnf_tuple(classes):
    return JnfTuple(tuple(c.jnf() for c in classes))


__all__ = [
    "Jnf",
    "JnfTuple",
    "ConditionReport",
    "DeltaResult",
    "lambda_tuple",
    "r_of_jnf",
    "d_of_jnf",
    "kappa",
    "expected_dimension",
    "check_inequalities",
    "psi_step",
    "necessary_condition",
    "all_choice_sequences",
    "verdict_of_trail",
    "delta_min_rank_sum",
    "class_jnf_tuple",
]
