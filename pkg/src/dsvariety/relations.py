"""Global trace/determinant condition and non-genericity relations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .classes import ADDITIVE
from .errors import EmptyClassList, InvalidSpec, SizeLimit
from .scalar import ONE, ZERO

DEFAULT_BUDGET = 10**7


def _check_classes(classes):
    classes = list(classes)
    if not classes:
        raise EmptyClassList("no classes given")
    n = classes[0].n
    flavor = classes[0].flavor
    if any(c.n != n or c.flavor != flavor for c in classes):
        raise InvalidSpec("classes must share size and flavor")
    return classes, n, flavor


def check_global_condition(classes):
    """Sum of all traces is 0 (additive) or product of determinants is 1."""
    classes, _, flavor = _check_classes(classes)
    if flavor == ADDITIVE:
        total = ZERO
        for c in classes:
            total = total + c.trace()
        return total.is_zero()
    total = ONE
    for c in classes:
        total = total * c.determinant()
    return total == ONE


@dataclass(frozen=True)
class RelationWitness:
    """A satisfied relation, stored in its canonical complement-orientation.

    ``sets`` holds one sorted tuple of 1-based indices per class, indexing the
    class's eigenvalues repeated with multiplicity.  ``splits`` records how
    many copies of each distinct eigenvalue enter the set.
    """

    sets: tuple
    splits: tuple
    cardinality: int

    def complement(self, classes):
        splits = tuple(
            tuple(m - k for k, m in zip(split, c.multiplicities))
            for split, c in zip(self.splits, classes)
        )
        return _witness_from_splits(splits, classes)


def _expand_split(split, mults):
    out = []
    start = 1
    for k, m in zip(split, mults):
        out.extend(range(start, start + k))
        start += m
    return tuple(out)


def _witness_from_splits(splits, classes):
    sets = tuple(_expand_split(s, c.multiplicities) for s, c in zip(splits, classes))
    return RelationWitness(sets, tuple(splits), len(sets[0]))


def canonical(witness, classes):
    """The lexicographically smaller of a witness and its complement."""
    other = witness.complement(classes)
    return min(witness, other, key=lambda w: w.sets)


def _splits(mults, card):
    """All ways to take ``card`` copies from eigenvalues with multiplicities ``mults``."""
    if not mults:
        if card == 0:
            yield ()
        return
    head, rest = mults[0], mults[1:]
    for k in range(min(head, card), -1, -1):
        for tail in _splits(rest, card - k):
            yield (k,) + tail


def count_candidates(classes, max_card=None):
    classes, n, _ = _check_classes(classes)
    if max_card is None:
        max_card = n - 1
    total = 0
    for card in range(1, max_card + 1):
        prod = 1
        for c in classes:
            prod *= sum(1 for _ in _splits(c.multiplicities, card))
        total += prod
    return total


def enumerate_relations(classes, max_card=None, budget=DEFAULT_BUDGET):
    """All satisfied non-genericity relations with 1 <= |Phi_j| <= max_card.

    The search runs over multiplicity splits (how many copies of each
    distinct eigenvalue enter Phi_j), which is exhaustive because relations
    only depend on the multiset of eigenvalues selected.  Each relation is
    reported once per complement pair, in canonical orientation, sorted.
    """
    classes, n, flavor = _check_classes(classes)
    if max_card is None:
        max_card = n - 1
    if not 1 <= max_card < n and n > 1:
        raise InvalidSpec("max_card must satisfy 1 <= max_card < n")
    if count_candidates(classes, max_card) > budget:
        raise SizeLimit(f"relation search exceeds the budget of {budget} candidates")

    found = {}
    for card in range(1, max_card + 1):
        per_class = []
        for c in classes:
            options = []
            for split in _splits(c.multiplicities, card):
                if flavor == ADDITIVE:
                    value = ZERO
                    for v, k in zip(c.eigenvalues, split):
                        if k:
                            value = value + v * k
                else:
                    value = ONE
                    for v, k in zip(c.eigenvalues, split):
                        if k:
                            value = value * v ** k
                options.append((split, value))
            per_class.append(options)
        for combo in itertools.product(*per_class):
            if flavor == ADDITIVE:
                total = ZERO
                for _, v in combo:
                    total = total + v
                hit = total.is_zero()
            else:
                total = ONE
                for _, v in combo:
                    total = total * v
                hit = total == ONE
            if hit:
                w = canonical(_witness_from_splits(tuple(s for s, _ in combo), classes), classes)
                found[w.sets] = w
    return [found[k] for k in sorted(found, key=lambda s: (min(len(s[0]), n - len(s[0])), s))]


def is_generic(classes, budget=DEFAULT_BUDGET):
    return not enumerate_relations(classes, budget=budget)


def split_signature(relations):
    """Set of split tuples, handy for comparing relation lists between instances."""
    return {w.splits for w in relations}
