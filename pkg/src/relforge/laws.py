"""Executable algebraic laws for relation addition, composition and transformation.

Each law is checked in bulk on stacked mask arrays (random samples, or every
relation when the space is small enough to enumerate).  A failing check keeps
its first counterexample as plain :class:`Relation` objects so that
:func:`recheck` can confirm it with the ordinary relation-level operations.

The distributive law of composition over addition is only an equality when the
substituted relation is single-valued and total.  For arbitrary ``beta`` the
left side picks one witness for both summands and the right side may pick two,
so only ``LHS <= RHS`` holds; the suite checks exactly that.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import _bits
from .monoid import Monoid
from .ops import SWAP, TransformSpec, add, all_transforms, compose_arg, transform
from .relation import (
    Relation,
    all_masks,
    functional_masks,
    random_functional_masks,
    random_masks,
)

EXHAUSTIVE_LIMIT = 1 << 25


@dataclass
class LawReport:
    name: str
    title: str
    holds: bool
    checked: int
    counterexample: dict | None = None
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        text = f"{status} {self.name} {self.title} ({self.checked} checks)"
        if self.note:
            text += f" - {self.note}"
        return text


# -- individual checks --------------------------------------------------------------
# kinds: "R" relation of the law's arity, "B" any one-variable relation,
# "F" single-valued total one-variable relation

@dataclass(frozen=True)
class Check:
    name: str
    kinds: tuple[str, ...]
    batch: Callable          # (arrays, m, arity) -> (lhs, rhs)
    single: Callable         # (relations, m) -> (lhs, rhs)
    subset: bool = False
    min_arity: int = 1


def _sum(a, b, m):
    return _bits.sumset(a, b, m.table)


def _ca(r, i, beta, arity):
    return _bits.compose_arg(r, i, beta, arity)


def _swap(r, n):
    return _bits.transform(r, SWAP.positions, 2, n)


CHECKS: dict[str, Check] = {}


def _register(c: Check) -> None:
    CHECKS[c.name] = c


_register(Check(
    "addition-commutative", ("R", "R"),
    lambda x, m, k: (_sum(x[0], x[1], m), _sum(x[1], x[0], m)),
    lambda x, m: (add(x[0], x[1], m), add(x[1], x[0], m)),
))
_register(Check(
    "addition-associative", ("R", "R", "R"),
    lambda x, m, k: (_sum(_sum(x[0], x[1], m), x[2], m), _sum(x[0], _sum(x[1], x[2], m), m)),
    lambda x, m: (add(add(x[0], x[1], m), x[2], m), add(x[0], add(x[1], x[2], m), m)),
))
_register(Check(
    "transposal", ("R", "B", "B"),
    lambda x, m, k: (_ca(_ca(x[0], 1, x[1], k), 2, x[2], k), _ca(_ca(x[0], 2, x[2], k), 1, x[1], k)),
    lambda x, m: (compose_arg(compose_arg(x[0], 1, x[1]), 2, x[2]),
                  compose_arg(compose_arg(x[0], 2, x[2]), 1, x[1])),
    min_arity=2,
))
for _i in (1, 2):
    _register(Check(
        f"distributive-functional-x{_i}", ("R", "R", "F"),
        lambda x, m, k, i=_i: (_ca(_sum(x[0], x[1], m), i, x[2], k),
                               _sum(_ca(x[0], i, x[2], k), _ca(x[1], i, x[2], k), m)),
        lambda x, m, i=_i: (compose_arg(add(x[0], x[1], m), i, x[2]),
                            add(compose_arg(x[0], i, x[2]), compose_arg(x[1], i, x[2]), m)),
        min_arity=_i,
    ))
    _register(Check(
        f"distributive-inclusion-x{_i}", ("R", "R", "B"),
        CHECKS[f"distributive-functional-x{_i}"].batch,
        CHECKS[f"distributive-functional-x{_i}"].single,
        subset=True,
        min_arity=_i,
    ))
    _register(Check(
        f"distributive-equality-x{_i}", ("R", "R", "B"),
        CHECKS[f"distributive-functional-x{_i}"].batch,
        CHECKS[f"distributive-functional-x{_i}"].single,
        min_arity=_i,
    ))
_register(Check(
    "swap-compose-x1", ("R", "B"),
    lambda x, m, k: (_ca(_swap(x[0], m.order), 1, x[1], 2), _swap(_ca(x[0], 2, x[1], 2), m.order)),
    lambda x, m: (compose_arg(transform(x[0], SWAP), 1, x[1]), transform(compose_arg(x[0], 2, x[1]), SWAP)),
    min_arity=2,
))
_register(Check(
    "swap-compose-x2", ("R", "B"),
    lambda x, m, k: (_ca(_swap(x[0], m.order), 2, x[1], 2), _swap(_ca(x[0], 1, x[1], 2), m.order)),
    lambda x, m: (compose_arg(transform(x[0], SWAP), 2, x[1]), transform(compose_arg(x[0], 1, x[1]), SWAP)),
    min_arity=2,
))
_register(Check(
    "swap-sum", ("R", "R"),
    lambda x, m, k: (_swap(_sum(x[0], x[1], m), m.order), _sum(_swap(x[0], m.order), _swap(x[1], m.order), m)),
    lambda x, m: (transform(add(x[0], x[1], m), SWAP), add(transform(x[0], SWAP), transform(x[1], SWAP), m)),
    min_arity=2,
))


def _violations(lhs: np.ndarray, rhs: np.ndarray, subset: bool, arity: int) -> np.ndarray:
    axes = tuple(range(-arity, 0))
    bad = (lhs & ~rhs) != 0 if subset else lhs != rhs
    return np.any(bad, axis=axes)


def _as_relations(arrays, order) -> list[Relation]:
    return [Relation(a, order) for a in arrays]


def _first_difference(lhs: Relation, rhs: Relation, subset: bool):
    for p in lhs.points():
        a, b = lhs.eval(p), rhs.eval(p)
        if (subset and not a <= b) or (not subset and a != b):
            return p, a, b
    return None


def _counterexample(check: Check, inputs: list[Relation], m: Monoid) -> dict:
    lhs, rhs = check.single(inputs, m)
    p, a, b = _first_difference(lhs, rhs, check.subset)
    return {"check": check.name, "inputs": inputs, "point": p, "lhs": a, "rhs": b}


def recheck(counterexample: dict, m: Monoid) -> bool:
    """True when the stored counterexample still violates its law."""
    check = CHECKS[counterexample["check"]]
    lhs, rhs = check.single(counterexample["inputs"], m)
    return _first_difference(lhs, rhs, check.subset) is not None


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: int = 0
    counterexample: dict | None = None


def _run(check: Check, batches: Iterator[list[np.ndarray]], m: Monoid, arity: int) -> CheckResult:
    res = CheckResult(check.name)
    for arrays in batches:
        lhs, rhs = check.batch(arrays, m, arity)
        bad = _violations(lhs, rhs, check.subset, arity)
        res.checked += int(bad.size)
        nbad = int(np.count_nonzero(bad))
        if nbad:
            res.failures += nbad
            if res.counterexample is None:
                k = int(np.argmax(bad))
                res.counterexample = _counterexample(check, _as_relations([a[k] for a in arrays], m.order), m)
    return res


# -- input generation ------------------------------------------------------------------

def _sample_batches(kinds, arity, m, rng, samples, density, chunk=4096):
    n = m.order
    left = samples
    while left > 0:
        size = min(chunk, left)
        left -= size
        arrays = []
        for kind in kinds:
            if kind == "R":
                arrays.append(random_masks(rng, (size,) + (n,) * arity, n, density))
            elif kind == "B":
                arrays.append(random_masks(rng, (size, n), n, density))
            else:
                arrays.append(random_functional_masks(rng, (size, n), n))
        yield arrays


def _pools(arity, n):
    return {"R": all_masks(arity, n), "B": all_masks(1, n), "F": functional_masks(1, n)}


def _product_batches(pools, chunk=1 << 15):
    sizes = [len(p) for p in pools]
    total = math.prod(sizes)
    for start in range(0, total, chunk):
        idx = np.unravel_index(np.arange(start, min(total, start + chunk)), sizes)
        yield [p[i] for p, i in zip(pools, idx)]


def exhaustive_size(kinds, arity, n) -> int:
    count = {"R": 1 << (n ** (arity + 1)), "B": 1 << (n * n), "F": n ** n}
    return math.prod(count[k] for k in kinds)


# -- transformation group ------------------------------------------------------------------

def _check_transform_group(arity: int, rel_masks: np.ndarray, n: int) -> tuple[CheckResult, bool]:
    specs = all_transforms(arity)
    res = CheckResult("transform-group")
    ident = TransformSpec.identity(arity)

    def fail(msg, **extra):
        res.failures += 1
        if res.counterexample is None:
            res.counterexample = {"check": "transform-group", "reason": msg, **extra}

    for a, b, c in itertools.product(specs, repeat=3):
        res.checked += 1
        if (a * b) * c != a * (b * c):
            fail("composition is not associative", specs=(a, b, c))
    for a in specs:
        res.checked += 2
        if a * ident != a or ident * a != a:
            fail("identity spec is not neutral", specs=(a,))
        if a * a.inverse() != ident or a.inverse() * a != ident:
            fail("inverse spec does not invert", specs=(a,))
    abelian = all(a * b == b * a for a, b in itertools.product(specs, repeat=2))
    if arity >= 2 and abelian:
        fail("composition of specs is commutative")

    # the group acts on relations: applying t1 then t2 equals applying t1.then(t2)
    for t1, t2 in itertools.product(specs, repeat=2):
        step = _bits.transform(_bits.transform(rel_masks, t1.positions, arity, n), t2.positions, arity, n)
        once = _bits.transform(rel_masks, t1.then(t2).positions, arity, n)
        bad = _violations(step, once, False, arity)
        res.checked += int(bad.size)
        if bad.any():
            k = int(np.argmax(bad))
            fail("action mismatch", specs=(t1, t2), inputs=[Relation(rel_masks[k], n)])
    ident_bad = _violations(_bits.transform(rel_masks, ident.positions, arity, n), rel_masks, False, arity)
    res.checked += int(ident_bad.size)
    if ident_bad.any():
        fail("identity spec moves a relation")
    return res, abelian


# -- suites -----------------------------------------------------------------------------------

GROUPS = [
    ("addition", "addition is commutative and associative",
     ("addition-commutative", "addition-associative")),
    ("transposal", "compositions in different arguments commute", ("transposal",)),
    ("distributive", "composition distributes over addition",
     ("distributive-functional-x1", "distributive-functional-x2",
      "distributive-inclusion-x1", "distributive-inclusion-x2")),
    ("transform-group", "transformations form a group acting on relations", ()),
    ("swap-compose", "swap turns composition in one argument into the other",
     ("swap-compose-x1", "swap-compose-x2")),
    ("swap-sum", "swap distributes over addition", ("swap-sum",)),
]


def check_laws(m: Monoid, samples: int = 500, seed: int = 0, *, density: float = 0.4,
               arity: int = 2, exhaustive: bool | None = None) -> list[LawReport]:
    """Run every law group; one :class:`LawReport` per group.

    ``exhaustive=None`` enumerates every input combination whenever that is
    at most ``EXHAUSTIVE_LIMIT`` cases per check and samples otherwise.
    """
    rng = np.random.default_rng(seed)
    n = m.order
    pools = None
    results: dict[str, CheckResult] = {}
    modes: dict[str, str] = {}

    def run(name):
        check = CHECKS[name]
        use_all = exhaustive
        if use_all is None:
            use_all = exhaustive_size(check.kinds, arity, n) <= EXHAUSTIVE_LIMIT
        nonlocal pools
        if use_all:
            if pools is None:
                pools = _pools(arity, n)
            batches = _product_batches([pools[k] for k in check.kinds])
        else:
            batches = _sample_batches(check.kinds, arity, m, rng, samples, density)
        modes[name] = "exhaustive" if use_all else "sampled"
        results[name] = _run(check, batches, m, arity)

    reports = []
    for gid, title, names in GROUPS:
        names = [x for x in names if CHECKS[x].min_arity <= arity]
        if gid == "transform-group":
            if exhaustive or (exhaustive is None and exhaustive_size(("R",), arity, n) <= EXHAUSTIVE_LIMIT):
                rel = all_masks(arity, n)
                mode = "exhaustive"
            else:
                rel = random_masks(rng, (samples,) + (n,) * arity, n, density)
                mode = "sampled"
            res, abelian = _check_transform_group(arity, rel, n)
            note = mode + ("; not abelian" if not abelian else "")
            reports.append(LawReport(gid, title, res.failures == 0, res.checked, res.counterexample, note))
            continue
        if not names:
            continue
        for name in names:
            run(name)
        group = [results[x] for x in names]
        failed = next((r for r in group if r.failures), None)
        note = "/".join(sorted({modes[x] for x in names}))
        if gid == "distributive":
            eq_names = [f"distributive-equality-x{i}" for i in (1, 2) if i <= arity]
            for x in eq_names:
                run(x)
            broken = sum(results[x].failures for x in eq_names)
            note += "; equality for single-valued total beta, inclusion LHS <= RHS for any beta"
            note += f"; equality fails for many-valued beta in {broken} case(s)"
        reports.append(LawReport(gid, title, failed is None, sum(r.checked for r in group),
                                 failed.counterexample if failed else None, note))
    return reports


def equality_counterexample(m: Monoid, seed: int = 0, tries: int = 20000) -> LawReport:
    """Find ``R1, R2, beta`` where ``(R1+R2) x1 beta != R1 x1 beta + R2 x1 beta``.

    Starts from ``beta = {(0,0), (0,1)}``: one argument with two images is
    enough when the summands disagree across the two images.
    """
    n = m.order
    check = CHECKS["distributive-equality-x1"]
    beta = np.zeros(n, dtype=_bits.DTYPE)
    beta[0] = 0b11
    rng = np.random.default_rng(seed)
    checked = 0
    for start in range(0, tries, 4096):
        size = min(4096, tries - start)
        r1 = random_functional_masks(rng, (size, n, n), n)
        r2 = random_functional_masks(rng, (size, n, n), n)
        arrays = [r1, r2, np.broadcast_to(beta, (size, n))]
        lhs, rhs = check.batch(arrays, m, 2)
        bad = _violations(lhs, rhs, False, 2)
        checked += size
        if bad.any():
            k = int(np.argmax(bad))
            cx = _counterexample(check, _as_relations([a[k] for a in arrays], n), m)
            return LawReport("distributive-equality", "distributivity as an equality for many-valued beta",
                             False, checked, cx, "LHS uses one witness, RHS may use two")
    return LawReport("distributive-equality", "distributivity as an equality for many-valued beta", True, checked)
