"""Command-line entry point: ``relforge <subcommand> ...``.

Exit status: 0 on success, 1 when a law check or a solver agreement check
fails, 2 on usage, parse or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import laws as lawmod
from .decompose import compact_decompose_search, decompose, impossibility_search_order2
from .errors import RelforgeError
from .expr import evaluate_expr, expr_to_relation, max_var, parse_expr, print_expr, relations_in
from .monoid import (
    Monoid,
    derived_operator_system,
    mk_monoid_mod,
    mk_monoid_saturating,
    submonoid_closure,
)
from .ops import TransformSpec, compose, extend_false, transform
from .ops import add as add_rel
from .relation import PointClass, Relation, random_relation
from .solver import (
    DoubleBranchesEquation,
    brute_solve,
    operator_instantiation_demo,
    pipeline_formula,
    pipeline_solve,
)
from .textio import format_set, parse_monoid, parse_relation, print_monoid, print_relation

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "RELFORGE_SEED"


@dataclass(frozen=True)
class RunConfig:
    monoid: str = "mod"
    seed: int = 0
    samples: int = 500
    density: float = 0.4
    out: str | None = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        seed = getattr(args, "seed", 0)
        env = os.environ.get(SEED_ENV)
        if env is not None and env.strip():
            try:
                seed = int(env)
            except ValueError:
                raise RelforgeError(f"{SEED_ENV}={env!r} is not an integer") from None
        return cls(getattr(args, "monoid", "mod"), seed, getattr(args, "samples", 500),
                   getattr(args, "density", 0.4), getattr(args, "out", None))


class UsageError(RelforgeError):
    pass


def resolve_monoid(selector: str, order: int) -> Monoid:
    if selector == "mod":
        return mk_monoid_mod(order)
    if selector == "saturating":
        return mk_monoid_saturating(order - 1)
    m = parse_monoid(_read(selector))
    if m.order != order:
        raise UsageError(f"--monoid {selector} has order {m.order}, inputs have order {order}")
    return m


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _rel(path: str) -> Relation:
    return parse_relation(_read(path))


def _ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _kind(values) -> str:
    return {0: PointClass.UNDEFINED, 1: PointClass.SINGLE}.get(len(values), PointClass.MANY).value


# -- subcommands ----------------------------------------------------------------------

def cmd_show(args, cfg, out):
    r = _rel(args.relation)
    out.append(print_relation(r).rstrip("\n"))
    counts = r.class_counts()
    out.append("# points: " + " ".join(f"{k.value}={v}" for k, v in counts.items()))
    return EXIT_OK


def cmd_add(args, cfg, out):
    r1, r2 = _rel(args.left), _rel(args.right)
    out.append(print_relation(add_rel(r1, r2, resolve_monoid(cfg.monoid, r1.order))).rstrip("\n"))
    return EXIT_OK


def cmd_compose(args, cfg, out):
    out.append(print_relation(compose(_rel(args.relation), args.index, _rel(args.beta))).rstrip("\n"))
    return EXIT_OK


def cmd_transform(args, cfg, out):
    out.append(print_relation(transform(_rel(args.relation), TransformSpec.parse(args.spec))).rstrip("\n"))
    return EXIT_OK


def cmd_extend(args, cfg, out):
    r = extend_false(_rel(args.relation), args.arity, _ints(args.positions, "--positions"))
    out.append(print_relation(r).rstrip("\n"))
    return EXIT_OK


def cmd_decompose(args, cfg, out):
    r = _rel(args.relation)
    m = resolve_monoid(cfg.monoid, r.order)
    if args.method == "compact":
        d = compact_decompose_search(r, m, args.terms or m.order + 1)
    else:
        form = {"auto": "auto", "trivial": "flat", "nested": "nested"}[args.method]
        d = decompose(r, m, form=form, prune_zero=args.prune_zero)
    out.append(f"# method={d.method.value} terms={d.term_count} arity={d.arity} order={r.order}")
    for note in d.notes:
        out.append(f"# {note}")
    out.append(print_expr(d.expr, indent=2))
    return EXIT_OK


def cmd_eval_expr(args, cfg, out):
    text = _read(args.expr)
    e = parse_expr(text, args.order)
    rels = relations_in(e)
    order = args.order or (rels[0].order if rels else None)
    if order is None:
        raise UsageError("expression has no relation tokens; pass --order")
    arity = args.arity or max_var(e)
    m = resolve_monoid(cfg.monoid, order)
    if args.point:
        point = _ints(args.point, "--point")
        if len(point) != arity or any(not 0 <= p < order for p in point):
            raise UsageError(f"--point must have {arity} coordinates within 0..{order - 1}")
        values = evaluate_expr(e, point, m)
        out.append(f"{format_set(values)} ({_kind(values)})")
    else:
        out.append(print_relation(expr_to_relation(e, arity, m)).rstrip("\n"))
    return EXIT_OK


def cmd_solve_db(args, cfg, out):
    r1, r2, r3 = _rel(args.r1), _rel(args.r2), _rel(args.r3)
    m = resolve_monoid(cfg.monoid, r1.order)
    eq = DoubleBranchesEquation(r1, r2, r3, args.a, args.b, args.c, m)
    pipe = brute = None
    if args.method in ("pipeline", "both"):
        outcome = pipeline_solve(eq)
        pipe = outcome.solution_set
        out.append(f"pipeline: {format_set(pipe)} ({_kind(pipe)})")
        if args.formula:
            d = pipeline_formula(eq, outcome)
            out.append(f"# x as a superposition in (a, b, c): {d.term_count} terms")
            out.append(print_expr(d.expr, indent=2))
    if args.method in ("brute", "both"):
        brute = brute_solve(eq)
        out.append(f"brute: {format_set(brute)} ({_kind(brute)})")
    if args.method == "both":
        if pipe == brute:
            out.append("AGREE")
        elif brute < pipe:
            out.append("SUBSET")
        else:
            out.append("DISAGREE")
            return EXIT_FAIL
    return EXIT_OK


def cmd_laws(args, cfg, out):
    m = resolve_monoid(cfg.monoid, args.order)
    exhaustive = {"auto": None, "exhaustive": True, "sampled": False}[args.mode]
    reports = lawmod.check_laws(m, cfg.samples, cfg.seed, density=cfg.density,
                                arity=args.arity, exhaustive=exhaustive)
    for r in reports:
        out.append(r.line())
        if r.counterexample:
            out.append(f"  counterexample: {r.counterexample}")
    return EXIT_OK if all(r.holds for r in reports) else EXIT_FAIL


def cmd_random(args, cfg, out):
    rng = np.random.default_rng(cfg.seed)
    r = random_relation(args.arity, args.order, rng, cfg.density, functional=args.functional)
    out.append(print_relation(r).rstrip("\n"))
    return EXIT_OK


def cmd_derived_system(args, cfg, out):
    base = resolve_monoid(cfg.monoid, args.order)
    d = derived_operator_system(base)
    out.append(f"# derived operator system over order {base.order}: {d.order} one-variable relations")
    out.append(f"# identity: {d.elements_rel[0]!r}")
    if args.table:
        out.append(print_monoid(d).rstrip("\n"))
    if args.closure:
        funcs = [Relation.from_cells([[int(v) for v in c.split("*")] if c != "-" else None
                                      for c in tok.split(",")], base.order) for tok in args.closure]
        sub = submonoid_closure(d, funcs)
        out.append(f"# closed submonoid of order {sub.order}: "
                   + " ".join(repr(d.elements_rel[e]) for e in sub.embedding))
        out.append(print_monoid(sub).rstrip("\n"))
    if args.demo:
        rep = operator_instantiation_demo(base, seed=cfg.seed)
        out.append(f"# operator demo: isomorphism={rep.isomorphism} checked={rep.checked} "
                   f"mismatches={len(rep.mismatches)}")
        return EXIT_OK if rep.ok else EXIT_FAIL
    return EXIT_OK


def cmd_impossibility(args, cfg, out):
    m = resolve_monoid(cfg.monoid, 2)
    rep = impossibility_search_order2(m, max_terms=args.max_terms)
    out.append(f"single-term cases tried: {rep.single_term_cases}")
    out.append(f"single-term matches: {len(rep.single_term_matches)}")
    for k, w in sorted(rep.multi_term.items()):
        out.append(f"{k}-term sums: " + ("representable" if w else "not representable"))
    if rep.saturated_at is not None:
        out.append(f"reachable set saturates at {rep.saturated_at} terms")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def _common(p, *, monoid=True, seed=False):
    if monoid:
        p.add_argument("--monoid", default="mod",
                       help="mod, saturating, or a monoid file (default: mod)")
    if seed:
        p.add_argument("--seed", type=int, default=0, help=f"RNG seed; {SEED_ENV} overrides")
    p.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relforge", description="Additive relations over finite monoids")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("show", help="print a relation canonically")
    p.add_argument("relation")
    _common(p, monoid=False)
    p.set_defaults(func=cmd_show)

    p = sub.add_parser("add", help="sum two relations")
    p.add_argument("left")
    p.add_argument("right")
    _common(p)
    p.set_defaults(func=cmd_add)

    p = sub.add_parser("compose", help="compose with a one-variable relation")
    p.add_argument("relation")
    p.add_argument("beta")
    p.add_argument("--index", type=int, required=True, help="argument 1..M, or 0 for the value slot")
    _common(p, monoid=False)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("transform", help="permute tuple positions")
    p.add_argument("relation")
    p.add_argument("--spec", required=True, help="e.g. 2,1,0")
    _common(p, monoid=False)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("extend", help="add dummy variables")
    p.add_argument("relation")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--positions", required=True, help="e.g. 1,3")
    _common(p, monoid=False)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("decompose", help="superposition of one-variable relations")
    p.add_argument("relation")
    p.add_argument("--method", choices=("auto", "trivial", "nested", "compact"), default="auto")
    p.add_argument("--terms", type=int, help="term budget for --method compact")
    p.add_argument("--prune-zero", action="store_true", help="drop terms for points valued {0}")
    _common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("eval-expr", help="evaluate or tabulate an expression file")
    p.add_argument("expr")
    p.add_argument("--point", help="comma-separated argument point")
    p.add_argument("--arity", type=int)
    p.add_argument("--order", type=int)
    _common(p)
    p.set_defaults(func=cmd_eval_expr)

    p = sub.add_parser("solve-db", help="solve (x R1 a) R3 (x R2 b) = c")
    p.add_argument("r1")
    p.add_argument("r2")
    p.add_argument("r3")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--method", choices=("pipeline", "brute", "both"), default="both")
    p.add_argument("--formula", action="store_true", help="also print x as a superposition")
    _common(p)
    p.set_defaults(func=cmd_solve_db)

    p = sub.add_parser("laws", help="check the algebraic laws")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--density", type=float, default=0.4)
    p.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    _common(p, seed=True)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("random", help="generate a random relation")
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--density", type=float, default=0.4)
    p.add_argument("--functional", action="store_true", help="single-valued and total")
    _common(p, monoid=False, seed=True)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("derived-system", help="monoid of all one-variable relations")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--table", action="store_true", help="print the full addition table")
    p.add_argument("--closure", nargs="+", metavar="CELLS",
                   help="check a subset for closure, each given as comma-separated cells, e.g. 2,0,1")
    p.add_argument("--demo", action="store_true", help="solve transported equations over the subset")
    _common(p, seed=True)
    p.set_defaults(func=cmd_derived_system)

    p = sub.add_parser("impossibility", help="order-2 representability search")
    p.add_argument("--max-terms", type=int, default=6)
    _common(p)
    p.set_defaults(func=cmd_impossibility)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out: list[str] = []
    try:
        cfg = RunConfig.from_args(args)
        code = args.func(args, cfg, out)
    except RelforgeError as exc:
        print(f"relforge {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = "\n".join(out) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


cli_main = main


if __name__ == "__main__":
    raise SystemExit(main())
