import itertools

import numpy as np
import pytest

from relforge import (
    DoubleBranchesEquation,
    Relation,
    brute_solve,
    decompose,
    expr_to_relation,
    mk_monoid_mod,
    operator_instantiation_demo,
    pipeline_formula,
    pipeline_solve,
    random_relation,
    transform,
)
from relforge.decompose import decompose_singular_nested, singular
from relforge.errors import DecompositionMismatch, RelationError
from relforge.expr import Sum
from relforge.relation import PointClass
from relforge.solver import (
    SOLVE_TRANSFORM,
    Comparison,
    brute_relation,
    compare,
    solution_relation,
    transport,
)

M3 = mk_monoid_mod(3)


def naive_solutions(r1, r2, r3, a, b, c):
    """Literal reading: x solves when some branch values u, v give c under R3."""
    return {x for x in range(3)
            if any(c in r3.eval((u, v)) for u in r1.eval((x, a)) for v in r2.eval((x, b)))}


def _triple(rng, functional):
    r1 = random_relation(2, 3, rng, functional=functional)
    r2 = random_relation(2, 3, rng, functional=functional)
    r3 = random_relation(2, 3, rng)
    return r1, r2, r3


def test_brute_matches_literal_reading():
    rng = np.random.default_rng(0)
    for _ in range(20):
        r1, r2, r3 = _triple(rng, False)
        for a, b, c in itertools.product(range(3), repeat=3):
            eq = DoubleBranchesEquation(r1, r2, r3, a, b, c, M3)
            assert brute_solve(eq) == naive_solutions(r1, r2, r3, a, b, c)
        rel = brute_relation(r1, r2, r3)
        assert all(rel.eval((a, b, c)) == naive_solutions(r1, r2, r3, a, b, c)
                   for a, b, c in itertools.product(range(3), repeat=3))


def test_pipeline_equals_brute_for_functional_branches():
    rng = np.random.default_rng(1)
    for _ in range(30):
        r1, r2, r3 = _triple(rng, True)
        w, _ = solution_relation(r1, r2, decompose(r3, M3), M3)
        assert w == brute_relation(r1, r2, r3)


def test_pipeline_contains_brute_in_general():
    rng = np.random.default_rng(2)
    strict = 0
    for _ in range(40):
        r1, r2, r3 = _triple(rng, False)
        w, _ = solution_relation(r1, r2, decompose(r3, M3), M3)
        b = brute_relation(r1, r2, r3)
        for p in w.points():
            assert b.eval(p) <= w.eval(p)
        strict += w != b
    assert strict > 0


def test_pipeline_solve_single_equation():
    rng = np.random.default_rng(3)
    r1, r2, r3 = _triple(rng, True)
    eq = DoubleBranchesEquation(r1, r2, r3, 1, 2, 0, M3)
    out = pipeline_solve(eq)
    assert out.solution_set == brute_solve(eq)
    assert out.kind is {0: PointClass.UNDEFINED, 1: PointClass.SINGLE}.get(len(out.solution_set), PointClass.MANY)
    # W reads x from (a, b, c); R5 reads c from (x, a, b)
    assert transform(out.R5, SOLVE_TRANSFORM) == out.W
    assert compare(eq).verdict == "AGREE"


def test_formula_has_27_terms_and_tabulates_to_w():
    rng = np.random.default_rng(4)
    r1, r2, r3 = _triple(rng, True)
    eq = DoubleBranchesEquation(r1, r2, r3, 0, 0, 0, M3)
    out = pipeline_solve(eq)
    d = pipeline_formula(eq, out)
    assert d.term_count == 27 and isinstance(d.expr, Sum) and len(d.expr.children) == 27
    assert expr_to_relation(d.expr, 3, M3) == out.W


def test_formula_requires_solution_relation():
    eq = DoubleBranchesEquation(*(Relation.zero(2, 3),) * 3, 0, 0, 0, M3)
    from relforge.solver import SolveOutcome
    with pytest.raises(ValueError):
        pipeline_formula(eq, SolveOutcome(frozenset(), "brute"))


def test_supplied_decomposition_must_match():
    rng = np.random.default_rng(5)
    r1, r2, r3 = _triple(rng, True)
    eq = DoubleBranchesEquation(r1, r2, r3, 0, 0, 0, M3)
    other = decompose(Relation.zero(2, 3), M3)
    if r3 != Relation.zero(2, 3):
        with pytest.raises(DecompositionMismatch):
            pipeline_solve(eq, other)
    assert pipeline_solve(eq, decompose(r3, M3)).solution_set == brute_solve(eq)


def test_non_flat_terms_are_rejected_by_pipeline():
    from relforge.decompose import DecompositionResult, Method
    nested = decompose_singular_nested(singular((0, 0), (1,), 2, 3), M3)
    bare_sum = DecompositionResult(Sum((nested.child,)), Method.NESTED, 1, (), (), 2)
    r = Relation.zero(2, 3)
    with pytest.raises(DecompositionMismatch):
        solution_relation(r, r, bare_sum, M3)


def test_equation_validation():
    z2, z3 = Relation.zero(2, 3), Relation.zero(1, 3)
    with pytest.raises(RelationError):
        DoubleBranchesEquation(z2, z2, z3, 0, 0, 0, M3)
    with pytest.raises(RelationError):
        DoubleBranchesEquation(z2, z2, z2, 3, 0, 0, M3)
    with pytest.raises(RelationError):
        DoubleBranchesEquation(Relation.zero(2, 2), z2, z2, 0, 0, 0, M3)


def test_comparison_verdicts():
    assert Comparison(frozenset({1}), frozenset({1})).verdict == "AGREE"
    assert Comparison(frozenset({1, 2}), frozenset({1})).verdict == "SUBSET"
    assert Comparison(frozenset({1}), frozenset({2})).verdict == "DISAGREE"


def test_undefined_and_many_valued_solutions_are_reported():
    # R3 = universal gives every x; R3 = empty gives none
    r1 = Relation.from_cells([[0, 1, 2]] * 3, 3, arity=2)
    eq_all = DoubleBranchesEquation(r1, r1, Relation.universal(2, 3), 0, 0, 0, M3)
    eq_none = DoubleBranchesEquation(r1, r1, Relation.empty(2, 3), 0, 0, 0, M3)
    assert pipeline_solve(eq_all).kind is PointClass.MANY
    assert pipeline_solve(eq_none).kind is PointClass.UNDEFINED


def test_transport_relabels():
    r = Relation.from_tuples([(0, 1, 2)], 2, 3)
    assert transport(r, (0, 2, 1)).tuples() == [(0, 2, 1)]


def test_operator_demo():
    rep = operator_instantiation_demo(M3, seed=7, equations=3)
    assert rep.closed and rep.submonoid_order == 3
    assert rep.isomorphism is not None
    assert rep.checked == 81 and rep.mismatches == [] and rep.ok


def test_operator_demo_trivial_submonoid():
    rep = operator_instantiation_demo(M3, functions=[(0, 0, 0)])
    assert rep.submonoid_order == 1 and rep.isomorphism is None and rep.checked == 0


def test_w_reads_r5_backwards():
    rng = np.random.default_rng(6)
    r1, r2, r3 = _triple(rng, False)
    w, r5 = solution_relation(r1, r2, decompose(r3, M3), M3)
    for a, b, c in itertools.product(range(3), repeat=3):
        assert w.eval((a, b, c)) == {x for x in range(3) if c in r5.eval((x, a, b))}


def test_solution_class_matches_w_point_class():
    rng = np.random.default_rng(8)
    for _ in range(10):
        r1, r2, r3 = _triple(rng, True)
        d = decompose(r3, M3)
        for a, b, c in itertools.product(range(3), repeat=3):
            out = pipeline_solve(DoubleBranchesEquation(r1, r2, r3, a, b, c, M3), d)
            assert out.kind is out.W.classify((a, b, c))
