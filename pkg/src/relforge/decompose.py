"""Decomposing many-variable relations into superpositions of one-variable ones.

The construction: split the target into singular relations (one point carrying
the target's value set, ``{0}`` everywhere else), address each point with
indicator-style *location* relations whose monoid sum reaches a distinguished
element only at that point, and map that element to the value set with a
*value* relation.  The location relations depend only on the point, never on
the target's values.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _bits
from .errors import (
    DecompositionMismatch,
    FaithfulnessTooLow,
    NoSolutionWithinBudget,
    OrderTooSmall,
    RelationError,
    UnsupportedArity,
)
from .expr import Expr, Sum, Unary, Var, expr_to_relation
from .monoid import Monoid
from .ops import add_all
from .relation import Relation


class Method(enum.Enum):
    TRIVIAL = "trivial"
    NESTED = "nested"
    COMPACT = "compact"


@dataclass(frozen=True)
class SingularRelation:
    relation: Relation
    point: tuple[int, ...]
    values: frozenset[int]

    @property
    def arity(self) -> int:
        return self.relation.arity


@dataclass(frozen=True)
class DecompositionResult:
    expr: Expr
    method: Method
    term_count: int
    location_relations: tuple[tuple[Relation, ...], ...]
    value_relations: tuple[Relation, ...]
    arity: int
    notes: tuple[str, ...] = field(default=())


# -- building blocks ---------------------------------------------------------

def indicator(order: int, at: int) -> Relation:
    """``at -> {1}``, everything else ``-> {0}``."""
    return Relation.from_function([1 if x == at else 0 for x in range(order)], order)


def value_relation(order: int, target: int, values: frozenset[int] | Sequence[int]) -> Relation:
    """``target -> values``, everything else ``-> {0}``."""
    masks = [1] * order
    masks[target] = _bits.mask_of(values)
    return Relation(masks, order)


def collapse_relation(m: Monoid) -> Relation:
    """Maps ``1+1`` to ``{1}`` and everything else to ``{0}``."""
    return value_relation(m.order, m.repeat_one(2), (1,))


def singular(point: Sequence[int], values, arity: int, order: int) -> SingularRelation:
    point = tuple(int(x) for x in point)
    masks = np.ones((order,) * arity, dtype=_bits.DTYPE)
    masks[point] = _bits.mask_of(values)
    return SingularRelation(Relation(masks, order), point, frozenset(values))


def singular_split(r: Relation) -> list[SingularRelation]:
    """One singular relation per point, in lexicographic point order.

    Their sum is ``r``: ``{0}`` is neutral and an empty value set absorbs.
    """
    return [singular(p, r.eval(p), r.arity, r.order) for p in r.points()]


def resum(parts: Sequence[SingularRelation], m: Monoid) -> Relation:
    return add_all([s.relation for s in parts], m)


# -- single terms ----------------------------------------------------------------

def _require_one(m: Monoid) -> None:
    if m.order < 2:
        raise OrderTooSmall("monoid of order 1 has no element 1 to build indicators from")


def _flat_term(s: SingularRelation, m: Monoid):
    locs = tuple(indicator(m.order, pj) for pj in s.point)
    f = value_relation(m.order, m.repeat_one(s.arity), s.values)
    expr = Unary(f, Sum(tuple(Unary(g, Var(j + 1)) for j, g in enumerate(locs))))
    return expr, locs, f


def _nested_term(s: SingularRelation, m: Monoid):
    g = [indicator(m.order, pj) for pj in s.point]
    col = collapse_relation(m)
    inner: Expr = Sum((Unary(g[0], Var(1)), Unary(g[1], Var(2))))
    for j in range(2, s.arity):
        inner = Sum((Unary(col, inner), Unary(g[j], Var(j + 1))))
    f = value_relation(m.order, m.repeat_one(2), s.values)
    locs = tuple(g) + (col,) * (s.arity - 2)
    return Unary(f, inner), locs, f


def decompose_singular(s: SingularRelation, m: Monoid) -> Expr:
    """``f[g_1(x_1) + ... + g_M(x_M)]`` with indicators at the singular point."""
    _require_one(m)
    if m.faithfulness < s.arity:
        raise FaithfulnessTooLow(
            f"flat form needs faithfulness >= {s.arity}, monoid has {m.faithfulness}; "
            "use the nested form")
    return _flat_term(s, m)[0]


def decompose_singular_nested(s: SingularRelation, m: Monoid) -> Expr:
    """Chain two indicators at a time, collapsing each partial sum back to 0/1."""
    _require_one(m)
    if m.faithfulness < 2:
        raise FaithfulnessTooLow(f"nested form needs faithfulness >= 2, monoid has {m.faithfulness}")
    if s.arity < 2:
        raise UnsupportedArity("nested form needs at least two variables")
    return _nested_term(s, m)[0]


# -- whole relations -------------------------------------------------------------

def decompose(r: Relation, m: Monoid, *, form: str = "auto", prune_zero: bool = False) -> DecompositionResult:
    """One term per point (``order**arity`` terms), verified by tabulation.

    ``form`` is ``"auto"`` (flat when the monoid is faithful enough, nested
    otherwise), ``"flat"`` or ``"nested"``.  ``prune_zero`` drops terms whose
    point carries exactly ``{0}``.
    """
    if r.order != m.order:
        raise RelationError(f"relation has order {r.order}, monoid has order {m.order}")
    if m.order < 3:
        raise OrderTooSmall(f"decomposition needs order >= 3, got {m.order}")
    if m.faithfulness < 2:
        raise FaithfulnessTooLow(f"decomposition needs faithfulness >= 2, monoid has {m.faithfulness}")
    if form == "auto":
        nested = m.faithfulness < r.arity
    elif form in ("flat", "trivial"):
        if m.faithfulness < r.arity:
            raise FaithfulnessTooLow(f"flat form needs faithfulness >= {r.arity}, monoid has {m.faithfulness}")
        nested = False
    elif form == "nested":
        if r.arity < 2:
            raise UnsupportedArity("nested form needs at least two variables")
        nested = True
    else:
        raise ValueError(f"unknown form {form!r}")

    build = _nested_term if nested else _flat_term
    terms, locs, vals = [], [], []
    for s in singular_split(r):
        if prune_zero and s.values == frozenset((0,)):
            continue
        e, g, f = build(s, m)
        terms.append(e)
        locs.append(g)
        vals.append(f)
    if not terms:
        # everything was {0}; one term still has to stand for the relation
        e, g, f = build(singular((0,) * r.arity, (0,), r.arity, r.order), m)
        terms, locs, vals = [e], [g], [f]

    expr = Sum(tuple(terms))
    _verify(expr, r, m)
    return DecompositionResult(expr, Method.NESTED if nested else Method.TRIVIAL, len(terms),
                               tuple(locs), tuple(vals), r.arity)


def _verify(expr: Expr, r: Relation, m: Monoid) -> None:
    got = expr_to_relation(expr, r.arity, m)
    if got != r:
        bad = next(p for p in r.points() if got.eval(p) != r.eval(p))
        raise DecompositionMismatch(f"decomposition does not reproduce the relation at {bad}")


# -- order 2 ----------------------------------------------------------------------

@dataclass(frozen=True)
class ImpossibilityReport:
    target: Relation
    single_term_cases: int
    single_term_matches: tuple[tuple[Relation, Relation, Relation], ...]
    # number of terms -> one witness (f, g1, g2) per term, or None if unreachable
    multi_term: dict[int, tuple[tuple[Relation, Relation, Relation], ...] | None]
    # term count at which the reachable set stopped growing, if it did
    saturated_at: int | None = None

    @property
    def single_term_representable(self) -> bool:
        return bool(self.single_term_matches)

    def min_terms(self) -> int | None:
        if self.single_term_matches:
            return 1
        found = [k for k, w in sorted(self.multi_term.items()) if w is not None]
        return found[0] if found else None


def impossibility_search_order2(m: Monoid, target: Relation | None = None, max_terms: int = 2,
                                max_matches: int = 64) -> ImpossibilityReport:
    """Exhaustive search for ``f[g1(x1) + g2(x2)]`` equal to ``target``.

    Every ``(f, g1, g2)`` among the 16 one-variable relations is tried.  Sums
    of up to ``max_terms`` such terms are then searched breadth-first over the
    (at most 256) distinct relations a single term can produce.  The constant
    ``{0}`` relation is itself a single term, so the reachable sets only grow
    with the term count; once they stop growing (``saturated_at``) the
    outcome holds for every larger number of terms as well.
    """
    if m.order != 2:
        raise ValueError(f"order-2 search needs an order-2 monoid, got order {m.order}")
    if target is None:
        target = singular((0, 0), (1,), 2, 2).relation
    if target.arity != 2 or target.order != 2:
        raise UnsupportedArity("target must be a two-variable relation of order 2")

    unary = [Relation(row, 2) for row in _all_unary(2)]
    u = np.array([r.masks for r in unary])                             # (16, 2)
    inner = _bits.sumset(u[:, None, :, None], u[None, :, None, :], m.table)   # (16, 16, 2, 2)
    full = _bits.apply_unary(inner[None], u[:, None, None, :], 2)      # (16 f, 16 g1, 16 g2, 2, 2)

    hit = np.all(full == target.masks, axis=(-2, -1))
    matches = tuple((unary[f], unary[g1], unary[g2]) for f, g1, g2 in np.argwhere(hit)[:max_matches])

    # distinct single-term relations, keyed by their 4-point code
    codes = _code4(full)
    single: dict[int, tuple[int, int, int]] = {}
    for idx in zip(*np.unravel_index(np.arange(codes.size), codes.shape)):
        single.setdefault(int(codes[idx]), tuple(int(x) for x in idx))

    def decode(code: int) -> np.ndarray:
        return np.array([(code >> (4 * k)) & 0xF for k in range(4)], dtype=_bits.DTYPE).reshape(2, 2)

    target_code = int(_code4(target.masks))
    multi: dict[int, tuple | None] = {}
    level = {c: (w,) for c, w in single.items()}
    single_items = list(single.items())
    saturated_at = None
    for k in range(2, max_terms + 1):
        nxt: dict[int, tuple] = {}
        for c, ws in level.items():
            a = decode(c)
            for c2, w2 in single_items:
                s = int(_code4(_bits.sumset(a, decode(c2), m.table)))
                if s not in nxt:
                    nxt[s] = ws + (w2,)
        grew = len(nxt) > len(level)
        level = nxt
        w = level.get(target_code)
        multi[k] = None if w is None else tuple((unary[f], unary[g1], unary[g2]) for f, g1, g2 in w)
        if not grew:
            saturated_at = k - 1
            break
    return ImpossibilityReport(target, int(hit.size), matches, multi, saturated_at)


def _all_unary(order: int) -> np.ndarray:
    count = 1 << (order * order)
    codes = np.arange(count, dtype=_bits.DTYPE)
    return (codes[:, None] >> (np.arange(order, dtype=_bits.DTYPE) * order)) & ((1 << order) - 1)


def _code4(masks: np.ndarray) -> np.ndarray:
    flat = masks.reshape(masks.shape[:-2] + (4,))
    return (flat << (np.arange(4, dtype=_bits.DTYPE) * 4)).sum(axis=-1)


# -- compact search ------------------------------------------------------------------

def compact_families(order: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The fixed ``(x, y)`` location families of the ``order + 1`` term scheme.

    Returned as element lists; the first three terms address the corner rows
    and columns, the remaining ``order - 2`` ones pair a descending ramp in
    ``x`` with an indicator in ``y``.
    """
    n = order
    if n < 3:
        raise OrderTooSmall(f"compact scheme needs order >= 3, got {n}")
    ramp_short = tuple(n - 2 - k for k in range(n - 1)) + (0,)       # (N-2, ..., 1, 0, 0)
    ramp_full = tuple(n - 1 - k for k in range(n))                     # (N-1, ..., 1, 0)
    rise = (0,) + tuple(range(n - 1))                                  # (0, 0, 1, ..., N-2)

    def ind(k):
        return tuple(1 if x == k else 0 for x in range(n))

    fams = [
        (ind(0), ramp_short),
        (rise, ind(n - 1)),
        (ramp_short, ind(n - 1)),
    ]
    fams += [(ramp_full, ind(j)) for j in range(n - 2)]
    return fams


def compact_decompose_search(r: Relation, m: Monoid, terms: int, *, max_nodes: int = 2_000_000) -> DecompositionResult:
    """Backtracking search for value tables over fixed location families.

    With ``terms >= order**2`` the one-term-per-point assignment is used
    directly.  Otherwise the first ``min(terms, order + 1)`` families are
    fixed and the value-table entries are solved for; every term but the
    first has its last entry pinned to ``{0}``.  Raises
    :class:`NoSolutionWithinBudget` when the search fails or exceeds
    ``max_nodes``; that is not a proof that no decomposition exists.
    """
    if r.arity != 2:
        raise UnsupportedArity(f"compact search handles two-variable relations, got arity {r.arity}")
    if r.order != m.order:
        raise RelationError(f"relation has order {r.order}, monoid has order {m.order}")
    if terms < 1:
        raise NoSolutionWithinBudget("term budget must be at least 1")
    n = m.order
    notes = []
    if n % 2 == 0:
        notes.append("even order: the compact scheme is stated for odd orders; result is experimental")

    if terms >= n * n:
        full = decompose(r, m, form="flat")
        return DecompositionResult(full.expr, Method.COMPACT, full.term_count, full.location_relations,
                                   full.value_relations, 2, tuple(notes) + ("one term per point",))

    fams = compact_families(n)[:terms]
    k = len(fams)
    # address[i][x, y] = g_ix(x) + g_iy(y)
    address = [m.table[np.ix_(np.array(gx), np.array(gy))] for gx, gy in fams]

    fixed = {}
    for i in range(1, k):
        fixed[(i, n - 1)] = 1  # mask of {0}
    unknowns = []
    for (x, y) in itertools.product(range(n), repeat=2):
        for i in range(k):
            key = (i, int(address[i][x, y]))
            if key not in fixed and key not in unknowns:
                unknowns.append(key)
    pos = {key: j for j, key in enumerate(unknowns)}

    # each point's constraint is checked once its last unknown is assigned
    checks: dict[int, list[tuple[int, int]]] = {}
    pre = []
    for (x, y) in itertools.product(range(n), repeat=2):
        deps = [pos[(i, int(address[i][x, y]))] for i in range(k) if (i, int(address[i][x, y])) in pos]
        if deps:
            checks.setdefault(max(deps), []).append((x, y))
        else:
            pre.append((x, y))

    functional = r.is_functional()
    domain = [1 << v for v in range(n)] if functional else list(range(1 << n))
    assign: dict[tuple[int, int], int] = dict(fixed)
    target = r.masks
    nodes = 0

    all_sets = np.arange(1 << n, dtype=_bits.DTYPE)
    set_sum = _bits.sumset(all_sets[:, None], all_sets[None, :], m.table).tolist()
    keys = {(x, y): [(i, int(address[i][x, y])) for i in range(k)]
            for x, y in itertools.product(range(n), repeat=2)}

    def point_ok(x, y) -> bool:
        ks = keys[(x, y)]
        acc = assign[ks[0]]
        for key in ks[1:]:
            acc = set_sum[acc][assign[key]]
        return acc == int(target[x, y])

    def solve(j: int) -> bool:
        nonlocal nodes
        if j == len(unknowns):
            return True
        for val in domain:
            nodes += 1
            if nodes > max_nodes:
                raise NoSolutionWithinBudget(f"search exceeded {max_nodes} nodes")
            assign[unknowns[j]] = val
            if all(point_ok(x, y) for x, y in checks.get(j, ())) and solve(j + 1):
                return True
        del assign[unknowns[j]]
        return False

    if not all(point_ok(x, y) for x, y in pre):
        raise NoSolutionWithinBudget("a point covered only by pinned entries cannot match")
    if not solve(0):
        raise NoSolutionWithinBudget(f"no value tables for {k} terms reproduce the relation")

    locs, vals, parts = [], [], []
    for i, (gx, gy) in enumerate(fams):
        h = Relation([assign.get((i, e), 1) for e in range(n)], n)
        g1 = Relation.from_function(gx, n)
        g2 = Relation.from_function(gy, n)
        locs.append((g1, g2))
        vals.append(h)
        parts.append(Unary(h, Sum((Unary(g1, Var(1)), Unary(g2, Var(2))))))
    expr = Sum(tuple(parts))
    _verify(expr, r, m)
    return DecompositionResult(expr, Method.COMPACT, k, tuple(locs), tuple(vals), 2,
                               tuple(notes) + (f"search nodes: {nodes}",))
