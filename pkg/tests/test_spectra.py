import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsvariety.classes import ConjugacyClassSpec
from dsvariety.errors import EmptyClassList, InvalidChoice, PsiUndefined
from dsvariety.linalg import ExactMatrix, class_representative
from dsvariety.scalar import ScalarExpr
from dsvariety.spectra import (
    Jnf,
    JnfTuple,
    all_choice_sequences,
    check_inequalities,
    class_jnf_tuple,
    d_of_jnf,
    delta_min_rank_sum,
    expected_dimension,
    kappa,
    lambda_tuple,
    necessary_condition,
    psi_step,
    r_of_jnf,
    verdict_of_trail,
)
from dsvariety.tuples import MatrixTuple, centralizer_dimension

from helpers import (
    class_of,
    commutant_dimension_sympy,
    jnf_of,
    jnf_shapes,
    partitions,
    psi_defined,
    reachable_verdicts,
)

SEXTUPLE_31 = JnfTuple((Jnf.diagonal((3, 1)),) * 6)
N2_DIAG = JnfTuple((Jnf.diagonal((1, 1)),) * 2)
TRIPLE_2X2 = JnfTuple((Jnf.diagonal((1, 1)), Jnf.diagonal((1, 1)), Jnf.single_block(2)))


# -- r, d, kappa -------------------------------------------------------------

def test_r_examples():
    assert r_of_jnf(Jnf.diagonal((3, 2))) == 2
    assert r_of_jnf(Jnf.diagonal((4,))) == 0
    assert r_of_jnf(Jnf.diagonal((1, 1, 1))) == 2


def test_d_examples():
    assert d_of_jnf(Jnf.diagonal((3, 2))) == 12
    assert d_of_jnf(Jnf.diagonal((6,))) == 0
    block = ExactMatrix([[5, 1, 0], [0, 5, 1], [0, 0, 5]])
    assert d_of_jnf(Jnf.single_block(3)) == 9 - commutant_dimension_sympy(block) == 6


def test_kappa_examples():
    assert kappa(lambda_tuple(1)) == 2
    assert kappa(TRIPLE_2X2) == 2
    assert kappa(JnfTuple((Jnf.diagonal((1,)),) * 2)) == 2
    for k in range(1, 6):
        assert kappa(lambda_tuple(k)) == 2


def test_expected_dimension_examples():
    for k in range(1, 4):
        n = 2 * k + 1
        assert expected_dimension(lambda_tuple(k)) == n * n - 1
    assert expected_dimension(TRIPLE_2X2) == 3
    assert expected_dimension(JnfTuple((Jnf.diagonal((1, 1)),) * 4)) == 5


def test_inequality_examples():
    assert check_inequalities(lambda_tuple(2)) == (True, True, False)
    # sum d = 6 * (16 - 9 - 1) = 36 >= 2n^2 - 2 = 30
    assert check_inequalities(SEXTUPLE_31) == (True, True, False)
    assert check_inequalities(N2_DIAG)[1:] == (False, False)


# -- reduction map -------------------------------------------------------------

def test_psi_examples():
    assert psi_step(lambda_tuple(3)).shape() == lambda_tuple(2).shape()
    step = psi_step(SEXTUPLE_31)
    assert step.n == 2 and step.shape() == JnfTuple((Jnf.diagonal((1, 1)),) * 6).shape()


def test_psi_undefined_reports_reasons():
    with pytest.raises(PsiUndefined) as info:
        psi_step(N2_DIAG)
    assert "beta" in info.value.reasons
    with pytest.raises(PsiUndefined) as info:
        psi_step(JnfTuple((Jnf.diagonal((1, 1, 1)),) * 3))
    assert info.value.reasons == ("omega",)
    with pytest.raises(PsiUndefined) as info:
        psi_step(JnfTuple((Jnf.diagonal((1,)),) * 3))
    assert "n>1" in info.value.reasons


def test_psi_invalid_choice():
    with pytest.raises(InvalidChoice):
        psi_step(lambda_tuple(2), [1, None, None, None])
    assert psi_step(lambda_tuple(2), [0, 0, 0, 0]) == psi_step(lambda_tuple(2))


def test_psi_tie_same_result_for_every_choice():
    t = JnfTuple((Jnf.diagonal((3, 3)),) * 3)
    results = {psi_step(t, list(c)).shape() for c in itertools.product((0, 1), repeat=3)}
    assert len(results) == 1


def test_necessary_examples():
    rep = necessary_condition(lambda_tuple(2))
    assert rep.satisfied and rep.final_n == 1
    assert [t.n for t in rep.trail] == [5, 3, 1]
    assert [t.shape() for t in rep.trail[:2]] == [lambda_tuple(2).shape(), lambda_tuple(1).shape()]
    rep = necessary_condition(SEXTUPLE_31)
    assert rep.satisfied and len(rep.trail) == 2 and rep.final_n == 2
    rep = necessary_condition(N2_DIAG)
    assert not rep.satisfied and rep.describe() == "violated (beta at stage 0)"
    assert len(rep.trail) == 1 and rep.kappa % 2 == 0


def test_generic_flag_is_report_only():
    assert necessary_condition(lambda_tuple(1), generic=True).generic_sufficient
    assert not necessary_condition(N2_DIAG, generic=True).generic_sufficient


# -- delta -----------------------------------------------------------------------

def _sextuple_classes():
    mus = (-23, 32, -32, -8, -25, 56)
    nus = (23, 17, 20, 8, -14, -54)
    return [ConjugacyClassSpec.diagonal([m, v], [3, 1]) for m, v in zip(mus, nus)]


def _quadruple_classes():
    return [ConjugacyClassSpec.diagonal([a, b], [3, 2]) for a, b in zip((0, 1, 3, -4), (2, 5, 11, -18))]


def delta_oracle(classes):
    """Matrix-level minimum of sum rk(A_j - b_j I) on Jordan representatives.

    Candidate shifts: spectra, plus for each index the value forced by the
    constraint (when it is off the spectrum its rank is n).
    """
    reps = [class_representative(c) for c in classes]
    n = classes[0].n
    ident = ExactMatrix.identity(n)
    best = None
    for combo in itertools.product(*[c.eigenvalues for c in classes]):
        total = sum(combo, ScalarExpr(0))
        if total.is_zero():
            value = sum((a - ident.scale(b)).rank() for a, b in zip(reps, combo))
            best = value if best is None else min(best, value)
    for free in range(len(classes)):
        others = [c for j, c in enumerate(classes) if j != free]
        for combo in itertools.product(*[c.eigenvalues for c in others]):
            b = -sum(combo, ScalarExpr(0))
            shifts = list(combo)
            shifts.insert(free, b)
            value = sum((a - ident.scale(s)).rank() for a, s in zip(reps, shifts))
            best = value if best is None else min(best, value)
    return best


def test_delta_examples():
    res = delta_min_rank_sum(_sextuple_classes())
    assert res.min_value == 6 and not res.holds
    assert res.witness == (-23, 32, -32, -8, -25, 56)
    res = delta_min_rank_sum(_quadruple_classes())
    assert res.min_value == 8 and not res.holds
    with pytest.raises(EmptyClassList):
        delta_min_rank_sum([])


def test_delta_generic_case_uses_one_free_shift():
    classes = [ConjugacyClassSpec.diagonal([1, 2, 7], [2, 1, 1]),
               ConjugacyClassSpec.diagonal([3, 5], [3, 1]),
               ConjugacyClassSpec.diagonal([11, -13, 17], [1, 2, 1])]
    res = delta_min_rank_sum(classes)
    rs = [2, 1, 2]
    assert res.min_value == min(4 + sum(rs) - r for r in rs)
    assert None in res.witness


@pytest.mark.parametrize("build", [_quadruple_classes, _sextuple_classes])
def test_delta_matches_matrix_level_oracle(build):
    classes = build()
    assert delta_min_rank_sum(classes).min_value == delta_oracle(classes)


@settings(max_examples=40)
@given(st.data())
def test_delta_oracle_random_classes(data):
    n = data.draw(st.integers(2, 4))
    shapes = jnf_shapes(n)
    classes = []
    for _ in range(data.draw(st.integers(2, 4))):
        shape = data.draw(st.sampled_from(shapes))
        values = data.draw(st.lists(st.integers(-3, 3), min_size=len(shape), max_size=len(shape), unique=True))
        classes.append(class_of(shape, values))
    assert delta_min_rank_sum(classes).min_value == delta_oracle(classes)


@settings(max_examples=100)
@given(st.data())
def test_delta_bounded_by_r_sum_when_minimal_tuple_is_admissible(data):
    n = data.draw(st.integers(2, 6))
    p1 = data.draw(st.integers(2, 5))
    classes = []
    tops = []
    for j in range(p1):
        shape = data.draw(st.sampled_from(jnf_shapes(n)))
        values = data.draw(st.lists(st.integers(-20, 20), min_size=len(shape), max_size=len(shape), unique=True))
        c = class_of(shape, values)
        top = max(range(len(shape)), key=lambda i: (len(shape[i]), -i))
        tops.append(values[top])
        classes.append(c)
    # shift the last class so the block-count-maximal eigenvalues sum to zero
    shift = -sum(tops)
    last = classes[-1]
    classes[-1] = ConjugacyClassSpec(n, tuple((v + shift, b) for v, b in last.spectrum))
    r_sum = sum(r_of_jnf(c.jnf()) for c in classes)
    assert delta_min_rank_sum(classes).min_value <= r_sum


# -- exhaustive properties ---------------------------------------------------------

def test_diagonal_formulas_exhaustive():
    for n in range(1, 9):
        for mv in partitions(n):
            for order in set(itertools.permutations(mv)):
                j = Jnf.diagonal(order)
                assert d_of_jnf(j) == n * n - sum(m * m for m in mv)
                assert r_of_jnf(j) == n - max(mv)


def test_d_is_even_exhaustive():
    for n in range(1, 9):
        for shape in jnf_shapes(n):
            assert d_of_jnf(jnf_of(shape)) % 2 == 0


def test_d_matches_commutant_kernel_up_to_5():
    for n in range(1, 6):
        for shape in jnf_shapes(n):
            c = class_of(shape)
            rep = MatrixTuple((class_representative(c),))
            assert d_of_jnf(c.jnf()) == n * n - centralizer_dimension(rep)


def test_d_matches_sympy_kernel_up_to_3():
    for n in range(1, 4):
        for shape in jnf_shapes(n):
            c = class_of(shape)
            assert d_of_jnf(c.jnf()) == n * n - commutant_dimension_sympy(class_representative(c))


def _psi_bounds_hold(t):
    n1 = sum(r_of_jnf(j) for j in t) - t.n
    out = psi_step(t)
    assert out.n == n1 < t.n
    assert all(t.n - n1 <= t.n - r_of_jnf(j) for j in t)


def _choice_invariant(t, memo=None):
    verdicts = reachable_verdicts(t, {} if memo is None else memo)
    assert verdicts == {necessary_condition(t).verdict}


def test_memoized_sweep_agrees_with_full_enumeration():
    shapes = [jnf_of(s) for s in jnf_shapes(4)]
    for combo in itertools.combinations_with_replacement(shapes, 3):
        t = JnfTuple(combo)
        full = {verdict_of_trail(trail) for trail in all_choice_sequences(t)}
        assert full == reachable_verdicts(t, {})


def test_psi_properties_all_shapes_small_n():
    for n in range(2, 5):
        shapes = [jnf_of(s) for s in jnf_shapes(n)]
        for size in (3, 4):
            for combo in itertools.combinations_with_replacement(shapes, size):
                t = JnfTuple(combo)
                if psi_defined(t):
                    _psi_bounds_hold(t)
                _choice_invariant(t)


@pytest.mark.parametrize("n,size", [(5, 3), (5, 4), (6, 3), (7, 3)])
def test_psi_properties_all_shapes_mid_n(n, size):
    shapes = [jnf_of(s) for s in jnf_shapes(n)]
    memo = {}
    for combo in itertools.combinations_with_replacement(shapes, size):
        t = JnfTuple(combo)
        if psi_defined(t):
            _psi_bounds_hold(t)
        _choice_invariant(t, memo)


def test_psi_properties_diagonal_quadruples_up_to_8():
    for n in range(2, 9):
        mvs = [Jnf.diagonal(mv) for mv in partitions(n)]
        memo = {}
        for combo in itertools.combinations_with_replacement(mvs, 4):
            t = JnfTuple(combo)
            if psi_defined(t):
                _psi_bounds_hold(t)
            _choice_invariant(t, memo)


@settings(max_examples=300)
@given(st.data())
def test_psi_properties_random_up_to_8(data):
    n = data.draw(st.integers(2, 8))
    shapes = jnf_shapes(n)
    size = data.draw(st.integers(2, 5))
    t = JnfTuple(tuple(jnf_of(data.draw(st.sampled_from(shapes))) for _ in range(size)))
    if psi_defined(t):
        _psi_bounds_hold(t)
    _choice_invariant(t)
    rep = necessary_condition(t)
    assert rep.kappa % 2 == 0 and rep.final_n == rep.trail[-1].n


def test_class_jnf_tuple_roundtrip():
    c = ConjugacyClassSpec(4, ((ScalarExpr.symbol("t1"), (2, 1)), (0, (1,))))
    t = class_jnf_tuple([c, c])
    assert t.n == 4 and t[0].blocks(str(ScalarExpr.symbol("t1"))) == (2, 1)
