"""Text formats for relations and monoids.

Relation file::

    relation arity=2 order=3
    0   1   2
    0*1 0*2 1*2
    -   0*1*2 -

Rows run over the leading ``arity-1`` coordinates in lexicographic order and
columns over the last coordinate.  ``-`` is undefined; ``phi``, ``N``, ``φ``
and ``∅`` are accepted as aliases on input.  Lines starting with ``#`` and
blank lines are ignored.

Monoid file::

    monoid order=3
    0 1 2
    1 2 0
    2 0 1
"""

from __future__ import annotations

import re

import numpy as np

from . import _bits
from .errors import ParseError, RangeError, ShapeError
from .monoid import Monoid
from .relation import Relation, cell_text

UNDEFINED_ALIASES = {"-", "phi", "N", "φ", "∅"}

_REL_HEADER = re.compile(r"^relation\s+arity=(\d+)\s+order=(\d+)\s*$")
_MON_HEADER = re.compile(r"^monoid\s+order=(\d+)\s*$")
_CELL = re.compile(r"^\d+(\*\d+)*$")


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield no, line


def _fields(line: str):
    for mt in re.finditer(r"\S+", line):
        yield mt.group(), mt.start() + 1


def parse_cell(tok: str, order: int, line: int | None = None, col: int | None = None) -> int:
    if tok in UNDEFINED_ALIASES:
        return 0
    if not _CELL.match(tok):
        raise ParseError(f"bad cell {tok!r}", line, col)
    values = [int(v) for v in tok.split("*")]
    bad = [v for v in values if v >= order]
    if bad:
        raise RangeError(f"line {line}, column {col}: value {bad[0]} outside 0..{order - 1} in cell {tok!r}")
    return _bits.mask_of(values)


def parse_relation(text: str) -> Relation:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty relation file", 1, 1)
    no, header = lines[0]
    mt = _REL_HEADER.match(header.strip())
    if mt is None:
        raise ParseError("expected header 'relation arity=<M> order=<N>'", no, 1)
    arity, order = int(mt.group(1)), int(mt.group(2))
    if arity < 1 or not 1 <= order <= _bits.MAX_ORDER:
        raise RangeError(f"line {no}: arity must be >= 1 and order within 1..{_bits.MAX_ORDER}")
    rows = lines[1:]
    expected_rows = order ** (arity - 1)
    if len(rows) != expected_rows:
        raise ShapeError(f"expected {expected_rows} rows for arity {arity}, order {order}; found {len(rows)}")
    masks = np.zeros((expected_rows, order), dtype=_bits.DTYPE)
    for r, (no, line) in enumerate(rows):
        cells = list(_fields(line))
        if len(cells) != order:
            raise ShapeError(f"line {no}: expected {order} cells, found {len(cells)}")
        for c, (tok, col) in enumerate(cells):
            masks[r, c] = parse_cell(tok, order, no, col)
    return Relation(masks.reshape((order,) * arity), order)


def print_relation(r: Relation) -> str:
    flat = r.masks.reshape(-1, r.order)
    lines = [f"relation arity={r.arity} order={r.order}"]
    lines += [" ".join(cell_text(x) for x in row) for row in flat]
    return "\n".join(lines) + "\n"


def parse_monoid(text: str, **kwargs) -> Monoid:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty monoid file", 1, 1)
    no, header = lines[0]
    mt = _MON_HEADER.match(header.strip())
    if mt is None:
        raise ParseError("expected header 'monoid order=<N>'", no, 1)
    order = int(mt.group(1))
    rows = lines[1:]
    if len(rows) != order:
        raise ShapeError(f"expected {order} table rows, found {len(rows)}")
    table = []
    for no, line in rows:
        row = []
        for tok, col in _fields(line):
            if not tok.isdigit():
                raise ParseError(f"bad table entry {tok!r}", no, col)
            if int(tok) >= order:
                raise RangeError(f"line {no}, column {col}: entry {tok} outside 0..{order - 1}")
            row.append(int(tok))
        if len(row) != order:
            raise ShapeError(f"line {no}: expected {order} entries, found {len(row)}")
        table.append(row)
    return Monoid(table, **kwargs)


def print_monoid(m: Monoid) -> str:
    lines = [f"monoid order={m.order}"]
    lines += [" ".join(str(int(x)) for x in row) for row in m.table]
    return "\n".join(lines) + "\n"


def format_set(values) -> str:
    return "{" + ", ".join(str(v) for v in sorted(values)) + "}"

