"""Exact computations around the (weak) Deligne-Simpson problem.

Conjugacy classes with exact spectra over Q(t1, ..., tm), class-level
necessary conditions, verification of concrete matrix tuples and builders
for explicit families.
"""

from .classes import ADDITIVE, MULTIPLICATIVE, ConjugacyClassSpec
from .errors import DSPError
from .linalg import ExactMatrix, class_membership
from .relations import check_global_condition, enumerate_relations, is_generic
from .scalar import ScalarExpr, parse_scalar
from .spectra import (
    Jnf,
    JnfTuple,
    check_inequalities,
    d_of_jnf,
    delta_min_rank_sum,
    expected_dimension,
    kappa,
    necessary_condition,
    psi_step,
    r_of_jnf,
)
from .subspaces import invariant_subspaces
from .tuples import (
    MatrixTuple,
    are_equivalent,
    centralizer_dimension,
    diagonal_limit,
    is_irreducible,
    tangent_dimension,
    verify_tuple,
)

__version__ = "0.1.0"

__all__ = [
    "ADDITIVE",
    "MULTIPLICATIVE",
    "ConjugacyClassSpec",
    "DSPError",
    "ExactMatrix",
    "class_membership",
    "check_global_condition",
    "enumerate_relations",
    "is_generic",
    "ScalarExpr",
    "parse_scalar",
    "Jnf",
    "JnfTuple",
    "check_inequalities",
    "d_of_jnf",
    "delta_min_rank_sum",
    "expected_dimension",
    "kappa",
    "necessary_condition",
    "psi_step",
    "r_of_jnf",
    "invariant_subspaces",
    "MatrixTuple",
    "are_equivalent",
    "centralizer_dimension",
    "diagonal_limit",
    "is_irreducible",
    "tangent_dimension",
    "verify_tuple",
]
