"""The double-branches equation ``(x R1 a) R3 (x R2 b) = c``.

Two independent routes:

* :func:`brute_solve` enumerates witnesses directly: ``x`` solves the
  equation iff some ``u in R1(x, a)`` and ``v in R2(x, b)`` have
  ``c in R3(u, v)``.
* :func:`pipeline_solve` never looks inside ``R3`` except through a verified
  decomposition ``R3(u, v) = sum_i f_i[g_i1(u) + g_i2(v)]``.  It pushes the
  location relations into ``R1``/``R2`` by composition, lifts both to three
  variables ``(x, a, b)``, adds, applies each ``f_i``, sums the terms and
  finally permutes the tuple positions to read ``x`` as a function of
  ``(a, b, c)``.

For single-valued total ``R1`` and ``R2`` the two agree exactly.  With
many-valued ``R1``/``R2`` each term of the pipeline may pick its own
intermediate witnesses, so its answer can be a strict superset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _bits
from .decompose import DecompositionResult, decompose
from .errors import DecompositionMismatch, RelationError
from .expr import Expr, Sum, Unary, Var, evaluate_expr, expr_to_relation
from .monoid import Monoid, derived_operator_system, find_isomorphism, submonoid_closure
from .ops import TransformSpec, add, add_all, compose_val, extend_false, inverse, transform
from .relation import PointClass, Relation, random_relation

SOLVE_TRANSFORM = TransformSpec((2, 3, 0, 1))
OPERATOR_FUNCTIONS = ((0, 0, 0), (2, 0, 1), (1, 0, 2))


@dataclass(frozen=True)
class DoubleBranchesEquation:
    r1: Relation
    r2: Relation
    r3: Relation
    a: int
    b: int
    c: int
    monoid: Monoid

    def __post_init__(self):
        n = self.monoid.order
        for name in ("r1", "r2", "r3"):
            r = getattr(self, name)
            if r.arity != 2:
                raise RelationError(f"{name} must have two variables, got {r.arity}")
            if r.order != n:
                raise RelationError(f"{name} has order {r.order}, monoid has order {n}")
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not 0 <= v < n:
                raise RelationError(f"{name}={v} outside 0..{n - 1}")

    def with_constants(self, a: int, b: int, c: int) -> "DoubleBranchesEquation":
        return DoubleBranchesEquation(self.r1, self.r2, self.r3, a, b, c, self.monoid)


@dataclass(frozen=True)
class SolveOutcome:
    solution_set: frozenset[int]
    method: str
    W: Relation | None = None
    R5: Relation | None = None
    formula: Expr | None = None

    @property
    def kind(self) -> PointClass:
        k = len(self.solution_set)
        return PointClass.UNDEFINED if k == 0 else PointClass.SINGLE if k == 1 else PointClass.MANY


# -- oracle ---------------------------------------------------------------------------

def brute_solve(eq: DoubleBranchesEquation) -> frozenset[int]:
    out = set()
    for x in range(eq.monoid.order):
        if any(eq.c in eq.r3.eval((u, v))
               for u in eq.r1.eval((x, eq.a)) for v in eq.r2.eval((x, eq.b))):
            out.add(x)
    return frozenset(out)


def brute_relation(r1: Relation, r2: Relation, r3: Relation) -> Relation:
    """``(a, b, c) -> brute-force solution set``, for all constants at once."""
    n = r1.order
    masks = np.zeros((n, n, n), dtype=_bits.DTYPE)
    for x, a, b in itertools.product(range(n), repeat=3):
        reach = 0
        for u in r1.eval((x, a)):
            for v in r2.eval((x, b)):
                reach |= int(r3.masks[u, v])
        for c in _bits.members(reach):
            masks[a, b, c] |= 1 << x
    return Relation(masks, n)


# -- pipeline ---------------------------------------------------------------------------

def flat_terms(d: DecompositionResult) -> list[tuple[Relation, Relation, Relation]]:
    """``(f, g1, g2)`` for each top-level term ``f[g1(x1) + g2(x2)]``."""
    terms = d.expr.children if isinstance(d.expr, Sum) else (d.expr,)
    out = []
    for t in terms:
        if not (isinstance(t, Unary) and isinstance(t.child, Sum) and len(t.child.children) == 2):
            raise DecompositionMismatch("pipeline needs flat two-variable terms f[g1(u) + g2(v)]")
        g = {}
        for leaf in t.child.children:
            if not (isinstance(leaf, Unary) and isinstance(leaf.child, Var)):
                raise DecompositionMismatch("pipeline needs flat two-variable terms f[g1(u) + g2(v)]")
            g[leaf.child.index] = leaf.f
        if set(g) != {1, 2}:
            raise DecompositionMismatch("each term must read both variables exactly once")
        out.append((t.f, g[1], g[2]))
    return out


def solution_relation(r1: Relation, r2: Relation, d: DecompositionResult, m: Monoid):
    """Run the pipeline once; returns ``(W, R5)`` valid for every ``(a, b, c)``."""
    stage = []
    for f, g1, g2 in flat_terms(d):
        lifted1 = extend_false(compose_val(r1, inverse(g1)), 3, (1, 2))
        lifted2 = extend_false(compose_val(r2, inverse(g2)), 3, (1, 3))
        stage.append(compose_val(add(lifted1, lifted2, m), inverse(f)))
    r5 = add_all(stage, m)
    return transform(r5, SOLVE_TRANSFORM), r5


def pipeline_solve(eq: DoubleBranchesEquation, d: DecompositionResult | None = None) -> SolveOutcome:
    m = eq.monoid
    if d is None:
        d = decompose(eq.r3, m)
    elif expr_to_relation(d.expr, 2, m) != eq.r3:
        raise DecompositionMismatch("supplied decomposition does not tabulate to R3")
    w, r5 = solution_relation(eq.r1, eq.r2, d, m)
    return SolveOutcome(w.eval((eq.a, eq.b, eq.c)), "pipeline", W=w, R5=r5)


def pipeline_formula(eq: DoubleBranchesEquation, outcome: SolveOutcome) -> DecompositionResult:
    """Decompose ``W`` so that ``x`` is an explicit superposition in ``(a, b, c)``.

    The returned expression is checked twice: by tabulation inside
    :func:`decompose` and pointwise at ``(a, b, c)`` against the solution set.
    """
    if outcome.W is None:
        raise ValueError("outcome carries no solution relation; run pipeline_solve first")
    d = decompose(outcome.W, eq.monoid)
    at = evaluate_expr(d.expr, (eq.a, eq.b, eq.c), eq.monoid)
    if at != outcome.solution_set:
        raise DecompositionMismatch(f"formula gives {sorted(at)} at (a, b, c), pipeline gave "
                                    f"{sorted(outcome.solution_set)}")
    return d


@dataclass(frozen=True)
class Comparison:
    pipeline: frozenset[int]
    brute: frozenset[int]

    @property
    def verdict(self) -> str:
        if self.pipeline == self.brute:
            return "AGREE"
        if self.brute < self.pipeline:
            return "SUBSET"
        return "DISAGREE"


def compare(eq: DoubleBranchesEquation, d: DecompositionResult | None = None) -> Comparison:
    return Comparison(pipeline_solve(eq, d).solution_set, brute_solve(eq))


# -- operator equations ----------------------------------------------------------------------

@dataclass
class OperatorDemoReport:
    functions: tuple[Relation, ...]
    closed: bool
    submonoid_order: int
    isomorphism: tuple[int, ...] | None
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.closed and (self.isomorphism is None or not self.mismatches)


def transport(r: Relation, phi: tuple[int, ...]) -> Relation:
    """Relabel arguments and values of ``r`` along the bijection ``phi``."""
    n = r.order
    return Relation.from_tuples([tuple(phi[x] for x in t) for t in r.tuples()], r.arity, n)


def operator_instantiation_demo(m: Monoid, functions=OPERATOR_FUNCTIONS, *, seed: int = 0,
                                equations: int = 3, density: float = 0.4) -> OperatorDemoReport:
    """Solve double-branches equations whose carrier is a set of functions.

    ``functions`` (single-valued one-variable relations over ``m``) must form a
    submonoid of the derived operator system.  When that submonoid is
    isomorphic to ``m``, random equations over ``m`` are transported across the
    isomorphism and both sides are solved, brute force and pipeline, for every
    ``(a, b, c)``; the solution sets must correspond.
    """
    derived = derived_operator_system(m)
    rels = tuple(f if isinstance(f, Relation) else Relation.from_function(f, m.order) for f in functions)
    sub = submonoid_closure(derived, rels)
    phi = find_isomorphism(m, sub)
    report = OperatorDemoReport(tuple(derived.elements_rel[e] for e in sub.embedding), True, sub.order, phi)
    if phi is None:
        return report

    rng = np.random.default_rng(seed)
    n = m.order

    def mapped(values):
        return frozenset(phi[x] for x in values)

    for _ in range(equations):
        r1, r2, r3 = (random_relation(2, n, rng, density) for _ in range(3))
        t1, t2, t3 = (transport(r, phi) for r in (r1, r2, r3))
        base_w, _ = solution_relation(r1, r2, decompose(r3, m), m)
        op_w, _ = solution_relation(t1, t2, decompose(t3, sub), sub)
        base_b = brute_relation(r1, r2, r3)
        op_b = brute_relation(t1, t2, t3)
        for a, b, c in itertools.product(range(n), repeat=3):
            report.checked += 1
            key = (phi[a], phi[b], phi[c])
            if mapped(base_w.eval((a, b, c))) != op_w.eval(key) or mapped(base_b.eval((a, b, c))) != op_b.eval(key):
                report.mismatches.append((a, b, c))
    return report
