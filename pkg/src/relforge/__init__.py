"""Additive relations over finite commutative monoids.

Relations are multi-valued maps from argument points to value sets; they can
be added pointwise with the monoid, composed with one-variable relations,
transformed by permuting tuple positions, decomposed into superpositions of
one-variable relations, and used to solve equations.
"""

from . import errors
from .decompose import (
    DecompositionResult,
    Method,
    SingularRelation,
    compact_decompose_search,
    decompose,
    decompose_singular,
    decompose_singular_nested,
    impossibility_search_order2,
    singular_split,
)
from .expr import Sum, Unary, Var, evaluate_expr, expr_to_relation, parse_expr, print_expr
from .laws import LawReport, check_laws
from .monoid import (
    Monoid,
    derived_operator_system,
    mk_monoid,
    mk_monoid_mod,
    mk_monoid_saturating,
    submonoid_closure,
)
from .ops import TransformSpec, add, compose_arg, compose_val, extend_false, inverse, transform
from .relation import PointClass, Relation, classify_point, eval_point, image, random_relation
from .solver import (
    DoubleBranchesEquation,
    SolveOutcome,
    brute_solve,
    operator_instantiation_demo,
    pipeline_formula,
    pipeline_solve,
)
from .textio import parse_monoid, parse_relation, print_monoid, print_relation

__version__ = "0.1.0"

__all__ = [
    "errors",
    "DecompositionResult",
    "Method",
    "SingularRelation",
    "compact_decompose_search",
    "decompose",
    "decompose_singular",
    "decompose_singular_nested",
    "impossibility_search_order2",
    "singular_split",
    "Sum",
    "Unary",
    "Var",
    "evaluate_expr",
    "expr_to_relation",
    "parse_expr",
    "print_expr",
    "LawReport",
    "check_laws",
    "Monoid",
    "derived_operator_system",
    "mk_monoid",
    "mk_monoid_mod",
    "mk_monoid_saturating",
    "submonoid_closure",
    "TransformSpec",
    "add",
    "compose_arg",
    "compose_val",
    "extend_false",
    "inverse",
    "transform",
    "PointClass",
    "Relation",
    "classify_point",
    "eval_point",
    "image",
    "random_relation",
    "DoubleBranchesEquation",
    "SolveOutcome",
    "brute_solve",
    "operator_instantiation_demo",
    "pipeline_formula",
    "pipeline_solve",
    "parse_monoid",
    "parse_relation",
    "print_monoid",
    "print_relation",
]
