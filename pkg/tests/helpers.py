"""Shared generators and small independent oracles for the test suite."""

import itertools
from fractions import Fraction

import sympy

from dsvariety.classes import ConjugacyClassSpec
from dsvariety.linalg import ExactMatrix
from dsvariety.spectra import Jnf, JnfTuple, check_inequalities, psi_step, verdict_of_trail
from dsvariety.tuples import MatrixTuple


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def jnf_shapes(n):
    """Every JNF of size n up to relabeling: a sorted tuple of block partitions."""
    found = set()

    def rec(remaining, acc):
        if remaining == 0:
            found.add(tuple(sorted(acc, reverse=True)))
            return
        for size in range(1, remaining + 1):
            for part in partitions(size):
                if acc and part > acc[-1]:
                    continue
                rec(remaining - size, acc + [part])

    rec(n, [])
    return sorted(found)


def jnf_of(shape):
    return Jnf(tuple((i, blocks) for i, blocks in enumerate(shape)))


def class_of(shape, values=None):
    values = range(len(shape)) if values is None else values
    return ConjugacyClassSpec(sum(sum(b) for b in shape), tuple(zip(values, shape)))


def to_sympy(m):
    return sympy.Matrix(m.rows, m.cols, [sympy.sympify(str(x)) for x in m.flat()])


def sympy_rank(m):
    return to_sympy(m).rank(simplify=True)


def commutant_dimension_sympy(a):
    """dim {Z : Z a = a Z} via sympy's nullspace on the n^2 x n^2 system."""
    n = a.rows
    s = to_sympy(a)
    rows = []
    for i in range(n):
        for k in range(n):
            row = [0] * (n * n)
            for m in range(n):
                row[i * n + m] += s[m, k]
                row[m * n + k] -= s[i, m]
            rows.append(row)
    return len(sympy.Matrix(rows).nullspace())


def words(generators, max_len):
    for length in range(1, max_len + 1):
        yield from itertools.product(range(len(generators)), repeat=length)


def word_traces(t, max_len=3):
    """Traces of all words of bounded length; a complete invariant for irreducible 2x2 tuples."""
    out = []
    for w in words(t.matrices, max_len):
        m = ExactMatrix.identity(t.n)
        for i in w:
            m = m @ t[i]
        out.append(m.trace())
    return out


def rational_tuple(rows_list):
    return MatrixTuple(tuple(ExactMatrix(r) for r in rows_list))


def frac_subsets_relations(classes):
    """Brute force: every relation over raw index subsets, reduced to split signatures.

    Independent of the split-based search: walks itertools.combinations of the
    expanded eigenvalue lists with Fraction arithmetic.
    """
    expanded = [[Fraction(str(v)) for v in c.expanded_eigenvalues()] for c in classes]
    n = len(expanded[0])
    distinct = [list(c.eigenvalues) for c in classes]
    found = set()
    for card in range(1, n):
        per_class = [list(itertools.combinations(range(n), card)) for _ in classes]
        for combo in itertools.product(*per_class):
            if sum(sum(expanded[j][i] for i in s) for j, s in enumerate(combo)) == 0:
                splits = []
                comp = []
                for j, s in enumerate(combo):
                    vals = [expanded[j][i] for i in s]
                    split = tuple(vals.count(Fraction(str(v))) for v in distinct[j])
                    splits.append(split)
                    comp.append(tuple(m - k for k, m in zip(split, classes[j].multiplicities)))
                found.add(frozenset([tuple(splits), tuple(comp)]))
    return found


def psi_defined(t):
    _, beta, omega = check_inequalities(t)
    return beta and not omega and t.n > 1


def reachable_verdicts(t, memo):
    """Verdicts over every choice sequence; memoized on unlabeled shapes.

    Psi acts class by class and its outcome only depends on the block
    structures, so branching over distinct per-class results is exhaustive.
    """
    key = t.shape()
    if key in memo:
        return memo[key]
    if psi_defined(t):
        per_class = []
        for idx, j in enumerate(t):
            seen = {}
            for eid in j.max_block_ids():
                probe = [None] * len(t)
                probe[idx] = eid
                out = psi_step(t, probe)[idx]
                seen.setdefault(out.shape(), out)
            per_class.append(list(seen.values()))
        result = set()
        for combo in itertools.product(*per_class):
            result |= reachable_verdicts(JnfTuple(combo), memo)
    else:
        result = {verdict_of_trail((t,))}
    memo[key] = frozenset(result)
    return memo[key]
