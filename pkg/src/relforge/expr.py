"""Superposition expressions built from one-variable relations.

Three node kinds: ``Var(j)`` reads argument ``j`` (1-based), ``Sum`` adds its
children with the monoid (all combinations, empty if any child is empty) and
``Unary(f, child)`` takes the union of ``f``-images over the child's values.

Text form::

    expr     := "(var" INDEX ")" | "(sum" expr+ ")" | "(apply" reltoken expr ")"
    reltoken := "[" cell ("," cell)* "]"      cell := "-" | digits joined by "*"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _bits
from .errors import ParseError, RelationError
from .monoid import Monoid
from .relation import Relation, cell_text


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise RelationError(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Sum:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise RelationError("Sum needs at least one child")


@dataclass(frozen=True)
class Unary:
    f: Relation
    child: "Expr"

    def __post_init__(self):
        if self.f.arity != 1:
            raise RelationError(f"Unary needs a one-variable relation, got arity {self.f.arity}")


Expr = Union[Var, Sum, Unary]


def max_var(e: Expr) -> int:
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Sum):
        return max(max_var(c) for c in e.children)
    return max_var(e.child)


def relations_in(e: Expr) -> list[Relation]:
    if isinstance(e, Var):
        return []
    if isinstance(e, Sum):
        return [r for c in e.children for r in relations_in(c)]
    return [e.f] + relations_in(e.child)


def term_count(e: Expr) -> int:
    return len(e.children) if isinstance(e, Sum) else 1


def evaluate_expr(e: Expr, point: Sequence[int], m: Monoid) -> frozenset[int]:
    """Value set of ``e`` at one argument point, computed with plain sets."""
    if isinstance(e, Var):
        return frozenset((int(point[e.index - 1]),))
    if isinstance(e, Sum):
        acc = evaluate_expr(e.children[0], point, m)
        for c in e.children[1:]:
            acc = m.sum_sets(acc, evaluate_expr(c, point, m))
        return acc
    inner = evaluate_expr(e.child, point, m)
    out: set[int] = set()
    for x in inner:
        out |= e.f.eval((x,))
    return frozenset(out)


def _tabulate(e: Expr, grid: np.ndarray, m: Monoid) -> np.ndarray:
    if isinstance(e, Var):
        return np.left_shift(_bits.DTYPE(1), grid[e.index - 1])
    if isinstance(e, Sum):
        acc = _tabulate(e.children[0], grid, m)
        for c in e.children[1:]:
            acc = _bits.sumset(acc, _tabulate(c, grid, m), m.table)
        return acc
    return _bits.apply_unary(_tabulate(e.child, grid, m), e.f.masks, grid.ndim - 1)


def expr_to_relation(e: Expr, arity: int, m: Monoid) -> Relation:
    """Tabulate ``e`` over every point of ``{0..order-1}^arity``."""
    if max_var(e) > arity:
        raise RelationError(f"expression reads variable {max_var(e)} but arity is {arity}")
    for f in relations_in(e):
        if f.order != m.order:
            raise RelationError(f"relation of order {f.order} inside expression over order {m.order}")
    grid = np.indices((m.order,) * arity, dtype=_bits.DTYPE)
    masks = np.broadcast_to(_tabulate(e, grid, m), (m.order,) * arity)
    return Relation(masks, m.order)


# -- text ------------------------------------------------------------------------

def reltoken(f: Relation) -> str:
    return "[" + ",".join(cell_text(x) for x in f.masks) + "]"


def print_expr(e: Expr, indent: int | None = None) -> str:
    """Canonical text; with ``indent`` the top-level sum is split one term per line."""
    if indent is not None and isinstance(e, Sum):
        pad = " " * indent
        return "(sum\n" + "\n".join(pad + print_expr(c) for c in e.children) + ")"
    if isinstance(e, Var):
        return f"(var {e.index})"
    if isinstance(e, Sum):
        return "(sum " + " ".join(print_expr(c) for c in e.children) + ")"
    return f"(apply {reltoken(e.f)} {print_expr(e.child)})"


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\[[^\]]*\])|([A-Za-z]+)|(\d+)|(\S))")
_CELL = re.compile(r"^(?:-|\d+(?:\*\d+)*)$")


def _tokens(text: str):
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            break
        start = mt.start(mt.lastindex)
        line += text.count("\n", pos, start)
        nl = text.rfind("\n", 0, start)
        line_start = nl + 1
        col = start - line_start + 1
        if mt.group(6) is not None:
            raise ParseError(f"unexpected character {mt.group(6)!r}", line, col)
        kind = ("open", "close", "rel", "word", "int")[mt.lastindex - 1]
        yield kind, mt.group(mt.lastindex), line, col
        pos = mt.end()


def parse_reltoken(tok: str, line=None, col=None) -> list[int]:
    body = tok[1:-1].strip()
    if not body:
        raise ParseError("empty relation token", line, col)
    masks = []
    for cell in body.split(","):
        cell = cell.strip()
        if not _CELL.match(cell):
            raise ParseError(f"bad cell {cell!r} in relation token", line, col)
        masks.append(0 if cell == "-" else _bits.mask_of(int(v) for v in cell.split("*")))
    return masks


def parse_expr(text: str, order: int | None = None) -> Expr:
    """Inverse of :func:`print_expr`; whitespace between tokens is free.

    The carrier order is inferred from the relation tokens unless given.
    """
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty expression", 1, 1)
    state = {"i": 0, "order": order}

    def peek():
        if state["i"] >= len(toks):
            last = toks[-1]
            raise ParseError("unexpected end of input", last[2], last[3])
        return toks[state["i"]]

    def take(kind):
        tok = peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2], tok[3])
        state["i"] += 1
        return tok

    def node():
        take("open")
        _, word, line, col = take("word")
        if word == "var":
            idx = int(take("int")[1])
            if idx < 1:
                raise ParseError("variable index must be >= 1", line, col)
            take("close")
            return Var(idx)
        if word == "sum":
            children = [node()]
            while peek()[0] == "open":
                children.append(node())
            take("close")
            return Sum(tuple(children))
        if word == "apply":
            _, tok, rl, rc = take("rel")
            masks = parse_reltoken(tok, rl, rc)
            n = state["order"] if state["order"] is not None else len(masks)
            if len(masks) != n:
                raise ParseError(f"relation token has {len(masks)} cells, expected {n}", rl, rc)
            if any(mk >= 1 << n for mk in masks):
                raise ParseError(f"relation token has a value outside 0..{n - 1}", rl, rc)
            state["order"] = n
            child = node()
            take("close")
            return Unary(Relation(masks, n), child)
        raise ParseError(f"unknown form {word!r}", line, col)

    e = node()
    if state["i"] != len(toks):
        _, tok, line, col = toks[state["i"]]
        raise ParseError(f"trailing input {tok!r}", line, col)
    return e
