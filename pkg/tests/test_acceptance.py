"""End-to-end acceptance checks, one test per criterion.

Each test prints an ``ACCEPT <n> PASS|FAIL`` line and the collected lines
are repeated in the terminal summary.  Criterion 11 (whole-suite wall time)
is measured by the session hook in ``conftest.py``.
"""

import itertools
import time

import numpy as np

from relforge import (
    DoubleBranchesEquation,
    Method,
    Relation,
    add,
    brute_solve,
    check_laws,
    decompose,
    decompose_singular,
    derived_operator_system,
    expr_to_relation,
    extend_false,
    impossibility_search_order2,
    mk_monoid_mod,
    operator_instantiation_demo,
    parse_relation,
    pipeline_formula,
    pipeline_solve,
    print_expr,
    random_relation,
    submonoid_closure,
)
from relforge.decompose import singular
from relforge.monoid import find_isomorphism
from relforge.relation import enumerate_relations, random_masks
from relforge.solver import brute_relation, solution_relation

from conftest import record
from test_relation import REFERENCE_R1

M3 = mk_monoid_mod(3)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def finish(number, ok, limit, elapsed, detail):
    within = elapsed < limit
    record(number, ok and within, f"{detail}; {elapsed:.2f} s (limit {limit:g} s)")
    assert ok, detail
    assert within, f"took {elapsed:.2f} s, limit {limit} s"


def test_01_enumeration():
    with Timer() as t:
        rels = list(enumerate_relations(1, 2))
        got = [set(r.tuples()) for r in rels]
    ok = len(rels) == 16 and got == REFERENCE_R1
    finish(1, ok, 1.0, t.elapsed, f"{len(rels)} one-variable relations over order 2, reference order")


def test_02_addition_table():
    left = "relation arity=2 order=3\nphi phi phi\n0 1 2\n0*1 1*2 0*1*2\n"
    right = "relation arity=2 order=3\nphi 1 0*1*2\nphi 0 0*2\nphi 0 1*2\n"
    expected = "relation arity=2 order=3\nphi phi phi\nphi 1 1*2\nphi 1*2 0*1*2\n"
    with Timer() as t:
        got = add(parse_relation(left), parse_relation(right), M3)
    ok = got == parse_relation(expected)
    finish(2, ok, 1.0, t.elapsed, "worked mod-3 sum reproduced cell for cell")


def test_03_false_extension_tables():
    source = Relation.from_cells([0, (1, 2), ()], 3)
    first = "relation arity=2 order=3\n0 0 0\n1*2 1*2 1*2\nphi phi phi\n"
    second = "relation arity=2 order=3\n0 1*2 phi\n0 1*2 phi\n0 1*2 phi\n"
    with Timer() as t:
        ok = (extend_false(source, 2, (1,)) == parse_relation(first)
              and extend_false(source, 2, (2,)) == parse_relation(second))
    finish(3, ok, 1.0, t.elapsed, "both dummy-variable tables of (0,1*2,-) reproduced")


def test_04_law_suite():
    with Timer() as t:
        runs = {
            "order 3 sampled": check_laws(M3, samples=500, seed=2024, arity=2, exhaustive=False),
            "order 2 arity 1 exhaustive": check_laws(mk_monoid_mod(2), arity=1, exhaustive=True),
            "order 2 arity 2 exhaustive": check_laws(mk_monoid_mod(2), arity=2, exhaustive=True),
        }
    failures = [(k, r.line()) for k, reps in runs.items() for r in reps if not r.holds]
    for k, reps in runs.items():
        for r in reps:
            print(f"  [{k}] {r.line()}")
    sampled_ok = all(r.checked >= 500 for r in runs["order 3 sampled"])
    ok = not failures and sampled_ok
    checks = sum(r.checked for reps in runs.values() for r in reps)
    finish(4, ok, 60.0, t.elapsed, f"six law groups, {checks} checks, {len(failures)} violations")


def test_05_decomposition_round_trip():
    rng = np.random.default_rng(41)
    plan = [(3, 2, 1000), (4, 2, 1000), (5, 2, 1000), (3, 3, 100)]
    failures = []
    with Timer() as t:
        for order, arity, count in plan:
            m = mk_monoid_mod(order)
            for _ in range(count):
                density = float(rng.uniform(0.15, 0.85))
                r = Relation(random_masks(rng, (order,) * arity, order, density), order)
                d = decompose(r, m)
                expected_method = Method.NESTED if arity > m.faithfulness else Method.TRIVIAL
                if (d.term_count != order ** arity or d.method is not expected_method
                        or expr_to_relation(d.expr, arity, m) != r):
                    failures.append((order, arity))
    total = sum(c for *_, c in plan)
    finish(5, not failures, 120.0, t.elapsed,
           f"{total} relations (1000 each at orders 3, 4, 5 with arity 2; 100 nested at 3/3), "
           f"{len(failures)} failures")


def test_06_singular_formula():
    expected = "(apply [0,0,1] (sum (apply [1,0,0] (var 1)) (apply [1,0,0] (var 2))))"
    with Timer() as t:
        got = print_expr(decompose_singular(singular((0, 0), (1,), 2, 3), M3))
    finish(6, got == expected, 1.0, t.elapsed, f"emitted {got}")


def test_07_order2_impossibility():
    with Timer() as t:
        rep = impossibility_search_order2(mk_monoid_mod(2), max_terms=1)
    ok = rep.single_term_cases == 16 ** 3 and not rep.single_term_matches
    finish(7, ok, 5.0, t.elapsed,
           f"{rep.single_term_cases} single-term cases, {len(rep.single_term_matches)} represent the target")


def test_08_double_branches_agreement():
    rng = np.random.default_rng(808)
    triples = 200
    mismatches = 0
    with Timer() as t:
        for _ in range(triples):
            r1 = random_relation(2, 3, rng, functional=True)
            r2 = random_relation(2, 3, rng, functional=True)
            r3 = random_relation(2, 3, rng, density=float(rng.uniform(0.2, 0.8)))
            d = decompose(r3, M3)
            for a, b, c in itertools.product(range(3), repeat=3):
                eq = DoubleBranchesEquation(r1, r2, r3, a, b, c, M3)
                if pipeline_solve(eq, d).solution_set != brute_solve(eq):
                    mismatches += 1

        not_contained = strict_cases = strict_triples = 0
        for _ in range(triples):
            r1, r2, r3 = (random_relation(2, 3, rng, density=float(rng.uniform(0.2, 0.8))) for _ in range(3))
            w, _ = solution_relation(r1, r2, decompose(r3, M3), M3)
            brute = brute_relation(r1, r2, r3)
            strict_here = 0
            for p in itertools.product(range(3), repeat=3):
                pb, pw = brute.eval(p), w.eval(p)
                not_contained += not pb <= pw
                strict_here += pb < pw
            strict_cases += strict_here
            strict_triples += strict_here > 0
    ok = mismatches == 0 and not_contained == 0
    detail = (f"functional: {triples} triples x 27 constants, {mismatches} mismatches; "
              f"unrestricted: {triples} triples, containment {triples * 27 - not_contained}/{triples * 27}, "
              f"strict superset at {strict_cases}/{triples * 27} constants "
              f"({100 * strict_triples / triples:.1f}% of triples)")
    finish(8, ok, 120.0, t.elapsed, detail)


def test_09_solution_formula():
    rng = np.random.default_rng(909)
    bad = []
    with Timer() as t:
        for k in range(5):
            r1 = random_relation(2, 3, rng, functional=True)
            r2 = random_relation(2, 3, rng, functional=True)
            r3 = random_relation(2, 3, rng)
            eq = DoubleBranchesEquation(r1, r2, r3, k % 3, (k + 1) % 3, (2 * k) % 3, M3)
            out = pipeline_solve(eq)
            d = pipeline_formula(eq, out)
            if d.term_count != 27 or len(d.expr.children) != 27 or expr_to_relation(d.expr, 3, M3) != out.W:
                bad.append(k)
    finish(9, not bad, 10.0, t.elapsed, f"5 equations, 27-term formula tabulates to W; {len(bad)} failures")


def test_10_operator_system():
    with Timer() as t:
        d2 = derived_operator_system(mk_monoid_mod(2), verify="exhaustive")
        tab = d2.table
        axioms = d2.order == 16 and all(
            tab[tab[a, b], c] == tab[a, tab[b, c]] and tab[a, b] == tab[b, a] and tab[0, a] == a
            for a, b, c in itertools.product(range(16), repeat=3))

        d3 = derived_operator_system(M3)
        funcs = [Relation.from_function(v, 3) for v in ((0, 0, 0), (2, 0, 1), (1, 0, 2))]
        sub = submonoid_closure(d3, funcs)
        iso = find_isomorphism(M3, sub)
        reports = [operator_instantiation_demo(M3, seed=s, equations=3) for s in range(3)]
    mismatches = sum(len(r.mismatches) for r in reports)
    checked = sum(r.checked for r in reports)
    ok = axioms and sub.order == 3 and iso is not None and mismatches == 0 and all(r.ok for r in reports)
    finish(10, ok, 10.0, t.elapsed,
           f"16-element derived monoid axioms {'hold' if axioms else 'fail'}; function set closed "
           f"(order {sub.order}), isomorphism {iso}; {checked} transported solutions, {mismatches} mismatches")
