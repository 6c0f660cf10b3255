import random

import pytest

from dsvariety.classes import ConjugacyClassSpec
from dsvariety.constructions import (
    SAMPLE_DATA,
    SpectralData2x2,
    build_2x2_tuple,
    build_exB,
    build_exH,
    build_HB_point,
    build_sec3,
    extend_propH,
    hb_stratum_dims,
    make_sec4_instance,
    sec4_instance_from_values,
    sec4_stratum_dims,
    split_sum_2x2,
    stratum_dims,
)
from dsvariety.errors import (
    ConstructionFailed,
    EquivalentBlocks,
    ExtDimensionMismatch,
    InfeasibleShape,
    InvalidInstance,
    PreconditionViolated,
    ScalarSum,
    SpectralConstraintViolated,
    TraceMismatch,
    ZeroParameter,
)
from dsvariety.linalg import ExactMatrix
from dsvariety.scalar import ScalarExpr
from dsvariety.spectra import JnfTuple, check_inequalities, class_jnf_tuple, necessary_condition
from dsvariety.tuples import (
    MatrixTuple,
    algebra_dimension,
    are_equivalent,
    centralizer_basis,
    centralizer_dimension,
    is_irreducible,
    tangent_dimension,
    verify_tuple,
)

D = SAMPLE_DATA
T1, T2 = ScalarExpr.symbol("t1"), ScalarExpr.symbol("t2")


def _ints(m):
    return [[int(x.as_fraction()) for x in row] for row in m.tolist()]


# -- golden values (computed once, frozen) -------------------------------------

def test_exB_golden():
    t = build_exB(D, 1)
    assert [_ints(m) for m in t] == [
        [[0, 1], [0, 2]], [[1, -1], [0, 5]], [[3, 0], [1, 11]], [[-4, 0], [-1, -18]]]
    assert verify_tuple(t).ok
    assert algebra_dimension(t) == 4 and centralizer_dimension(t) == 1
    assert tangent_dimension(t).direct == 5


@pytest.mark.parametrize("l,tangent", [(1, 8), (2, 24), (3, 48)])
def test_exH_golden(l, tangent):
    t = build_exH(l, D)
    n = 2 * l + 1
    assert verify_tuple(t).ok
    assert centralizer_dimension(t) == 1
    td = tangent_dimension(t)
    assert td.agree and td.direct == tangent == n * n - 1


def test_exH_permuted_has_corner_in_centralizer():
    t = build_exH(2, D, permuted=True)
    assert verify_tuple(t).ok
    basis = centralizer_basis(t)
    assert len(basis) == 9
    corner = ExactMatrix.unit(5, 0, 4)
    span = [m.flat() for m in basis]
    stacked = ExactMatrix(span + [corner.flat()])
    assert stacked.rank() == len(basis)


@pytest.mark.parametrize("s,cent,tangent", [(0, 1, 24), (1, 2, 25), (2, 3, 26)])
def test_HB_golden(s, cent, tangent):
    t = build_HB_point(s, D, 5, list(range(1, s + 1)))
    assert verify_tuple(t).ok
    assert centralizer_dimension(t) == cent
    td = tangent_dimension(t)
    assert td.agree and td.direct == tangent
    dims = hb_stratum_dims(5, s)
    assert dims.dim_hb == 24 + s
    assert dims.kappa == 2 and dims.expected == 24
    assert dims.top_stratum_alt == (26 if s == 2 else None)


def test_HB_seeded_conjugation_keeps_invariants():
    t = build_HB_point(1, D, 5, [1], seed=7)
    assert verify_tuple(t).ok and centralizer_dimension(t) == 2
    assert t != build_HB_point(1, D, 5, [1])


# -- errors ----------------------------------------------------------------------

def test_construction_errors():
    with pytest.raises(ZeroParameter):
        build_exB(D, 0)
    with pytest.raises(InvalidInstance):
        build_exH(0, D)
    with pytest.raises(InvalidInstance):
        build_HB_point(3, D, 5, [1, 2, 3])
    with pytest.raises(InvalidInstance):
        build_HB_point(0, D, 4, [])
    with pytest.raises(EquivalentBlocks):
        build_HB_point(2, D, 5, [1, 1])
    with pytest.raises(SpectralConstraintViolated):
        SpectralData2x2((0, 1, 3, -4), (2, 5, 11, -17))
    with pytest.raises(PreconditionViolated):
        build_sec3("prime")
    with pytest.raises(PreconditionViolated):
        build_sec3("V3")


# -- 2x2 sums ------------------------------------------------------------------------

def test_split_sum_random_targets():
    rng = random.Random(21)
    c1 = ConjugacyClassSpec.diagonal([1, 4], [1, 1])
    c2 = ConjugacyClassSpec.diagonal([-2, 3], [1, 1])
    done = 0
    while done < 100:
        a, b, c = (rng.randint(-6, 6) for _ in range(3))
        s = ExactMatrix([[a, b], [c, 6 - a]])
        if s.is_scalar():
            continue
        b1, b2 = split_sum_2x2(s, c1, c2)
        assert b1 + b2 == s
        assert verify_tuple(MatrixTuple((b1, b2), (c1, c2))).membership_ok == (True, True)
        done += 1


def test_split_sum_errors():
    c1 = ConjugacyClassSpec.diagonal([1, 4], [1, 1])
    c2 = ConjugacyClassSpec.diagonal([-2, 3], [1, 1])
    with pytest.raises(ScalarSum):
        split_sum_2x2(ExactMatrix.diag([3, 3]), c1, c2)
    with pytest.raises(TraceMismatch):
        split_sum_2x2(ExactMatrix([[1, 1], [0, 1]]), c1, c2)
    with pytest.raises(PreconditionViolated):
        split_sum_2x2(ExactMatrix([[1, 1], [0, 1]]), ConjugacyClassSpec.diagonal([1], [2]), c2)


def test_build_2x2_tuple_symbolic_eigenvalues():
    classes = (ConjugacyClassSpec.diagonal([T1, 1], [1, 1]),
               ConjugacyClassSpec.diagonal([T2, 2], [1, 1]),
               ConjugacyClassSpec.diagonal([0, 5], [1, 1]),
               ConjugacyClassSpec.diagonal([-T1 - T2, -8], [1, 1]))
    t = build_2x2_tuple(classes, seed=3)
    assert verify_tuple(t).ok and is_irreducible(t)


def test_build_2x2_tuple_reports_reducible_case():
    scalar_classes = [ConjugacyClassSpec.diagonal([1, 2], [1, 1]),
                      ConjugacyClassSpec.diagonal([-1], [2]),
                      ConjugacyClassSpec.diagonal([-1, 0], [1, 1])]
    # the two non-scalar classes must sum to a scalar matrix, so every attempt is reducible
    with pytest.raises(ConstructionFailed):
        build_2x2_tuple(scalar_classes)
    with pytest.raises(ConstructionFailed):
        build_2x2_tuple([ConjugacyClassSpec.diagonal([1, 2], [1, 1]),
                         ConjugacyClassSpec.diagonal([-1], [2]),
                         ConjugacyClassSpec.diagonal([-1, 0], [1, 1]),
                         ConjugacyClassSpec.diagonal([0], [2])])


def test_build_2x2_tuple_on_exB_classes():
    t = build_2x2_tuple(D.classes(1, 1), seed=0)
    assert verify_tuple(t).ok and is_irreducible(t)
    assert are_equivalent(t, t.conjugated(ExactMatrix([[1, 2], [1, 3]])))


# -- transcendental triples -------------------------------------------------------------

def test_sec3_suite():
    for v in ("V1", "V2"):
        t = build_sec3(v)
        assert verify_tuple(t).ok and not is_irreducible(t)
    for v in ("prime", "doubleprime"):
        assert verify_tuple(build_sec3(v, T2)).ok
    p0, q0 = build_sec3("prime", 0), build_sec3("doubleprime", 0)
    assert p0.matrices == q0.matrices
    assert verify_tuple(p0).membership_ok == (True, True, False)


# -- multiplicity (m, 1, ..., 1) instances ------------------------------------------------

def test_sec4_instance_and_condition():
    inst = make_sec4_instance(4, 5, seed=1)
    assert inst.mults == (3,) * 6 and inst.rs == (1,) * 6
    t = class_jnf_tuple(inst.classes())
    rep = necessary_condition(t)
    assert rep.satisfied and rep.final_n == 2 and check_inequalities(rep.trail[-1])[2]
    with pytest.raises(InfeasibleShape):
        make_sec4_instance(4, 3)
    with pytest.raises(InfeasibleShape):
        make_sec4_instance(3, 5)
    with pytest.raises(InfeasibleShape):
        make_sec4_instance(4, 5, m=(3, 3, 3, 3, 3, 2))


def test_sec4_candidate_with_repeated_eigenvalue_is_rejected():
    with pytest.raises(InvalidInstance):
        sec4_instance_from_values(4, (1, 2, 4, 8, 16, -31), ((1,), (-2,), (4,), (-8,), (16,), (-11,)))


def test_sec4_instance_rejects_extra_relation():
    inst = make_sec4_instance(4, 5, seed=1)
    simples = [list(r) for r in inst.simples]
    # force nu_1 + nu_2 = mu_1 + mu_2, an extra relation of cardinality two
    simples[0][0] = inst.mus[0] + inst.mus[1] - simples[1][0]
    simples[-1][-1] = simples[-1][-1] - (simples[0][0] - inst.simples[0][0])
    with pytest.raises(InvalidInstance):
        sec4_instance_from_values(4, inst.mus, simples)


def test_sec4_mixed_multiplicities_n5():
    inst = make_sec4_instance(5, 5, seed=0)
    assert sorted(inst.rs, reverse=True) == [2, 2, 1, 1, 1, 1]
    assert necessary_condition(class_jnf_tuple(inst.classes())).satisfied


@pytest.mark.parametrize("side", ["left", "right"])
def test_extension_both_sides(side):
    inst = make_sec4_instance(4, 5, seed=1)
    h = build_2x2_tuple(inst.star_classes(), seed=0)
    ext = extend_propH(h, inst.mus, side)
    assert (ext.dim_l, ext.dim_n) == (4, 2)
    t = ext.tuple
    assert t.n == 4 and verify_tuple(t).ok
    assert t.classes == inst.classes()
    assert centralizer_dimension(t) == 1
    td = tangent_dimension(t)
    assert td.agree and td.direct == 21


def test_extension_errors():
    inst = make_sec4_instance(4, 5, seed=1)
    h = build_2x2_tuple(inst.star_classes(), seed=0)
    with pytest.raises(PreconditionViolated):
        extend_propH(h, inst.mus, "top")
    with pytest.raises(PreconditionViolated):
        extend_propH(h, inst.mus[:-1] + (inst.mus[-1] + 1,))
    with pytest.raises(PreconditionViolated):
        extend_propH(MatrixTuple(h.matrices), inst.mus)
    # mu off the spectrum of every H_j makes each shift invertible, so L/N is too large
    shifted = tuple(m + 1000 * (1 if j % 2 else -1) for j, m in enumerate(inst.mus))
    with pytest.raises(ExtDimensionMismatch) as info:
        extend_propH(h, shifted)
    assert info.value.dim_l - info.value.dim_n != 2


def test_stratum_dims():
    d = sec4_stratum_dims(4, (1,) * 6)
    assert (d.dim_u, d.dim_w, d.kappa, d.expected) == (22, 21, -4, 21)
    assert d.audit_ok
    assert stratum_dims(make_sec4_instance(4, 5, seed=1)) == d
    assert stratum_dims((5, 2)).dim_hb == 26
    with pytest.raises(InvalidInstance):
        stratum_dims("nope")
    with pytest.raises(InvalidInstance):
        sec4_stratum_dims(4, (1,) * 5)
    for k in (1, 2, 3):
        n = 2 * k + 1
        for s in range(k + 1):
            assert hb_stratum_dims(n, s).dim_hb == n * n + s - 1


def test_jnf_tuple_of_extension_matches_instance():
    inst = make_sec4_instance(4, 5, seed=1)
    assert class_jnf_tuple(inst.classes()).shape() == JnfTuple(
        tuple(c.jnf() for c in inst.classes())).shape()
