"""Additive relations: multi-valued maps from argument points to value sets.

A :class:`Relation` of arity ``M`` over a carrier of size ``order`` stores one
bitmask per argument point (see :mod:`relforge._bits`).  An empty mask means
the relation is undefined there; that is a normal state, not an error.
"""

from __future__ import annotations

import enum
import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _bits
from .errors import OrderMismatch, RelationError


class PointClass(enum.Enum):
    UNDEFINED = "undefined"
    SINGLE = "single"
    MANY = "many"


Point = tuple[int, ...]


class Relation:
    """Immutable arity-``M`` relation over ``{0, ..., order-1}``."""

    __slots__ = ("masks", "order", "arity", "_hash")

    def __init__(self, masks, order: int):
        a = np.array(masks, dtype=_bits.DTYPE)
        if not 1 <= order <= _bits.MAX_ORDER:
            raise RelationError(f"order must lie in 1..{_bits.MAX_ORDER}, got {order}")
        if a.ndim < 1 or any(s != order for s in a.shape):
            raise RelationError(f"mask array of shape {a.shape} does not match order {order}")
        if a.min() < 0 or a.max() >= (1 << order):
            raise RelationError(f"value outside 0..{order - 1}")
        a.setflags(write=False)
        self.masks = a
        self.order = order
        self.arity = a.ndim
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_cells(cls, cells, order: int, arity: int = 1) -> "Relation":
        """Build from nested sequences of value collections.

        A cell may be an int, an iterable of ints, or ``None``/``()`` for
        undefined.  ``cells`` is nested ``arity`` levels deep.
        """
        def conv(c, depth):
            if depth == 0:
                return _bits.mask_of(_as_values(c))
            return [conv(x, depth - 1) for x in c]

        return cls(conv(cells, arity), order)

    @classmethod
    def from_tuples(cls, tuples: Iterable[Sequence[int]], arity: int, order: int) -> "Relation":
        masks = np.zeros((order,) * arity, dtype=_bits.DTYPE)
        for t in tuples:
            if len(t) != arity + 1:
                raise RelationError(f"tuple {tuple(t)} does not have {arity + 1} entries")
            if any(not 0 <= x < order for x in t):
                raise RelationError(f"tuple {tuple(t)} has entries outside 0..{order - 1}")
            masks[tuple(t[:-1])] |= 1 << t[-1]
        return cls(masks, order)

    @classmethod
    def from_function(cls, values: Sequence[int], order: int | None = None) -> "Relation":
        """Single-valued total one-variable relation ``x -> values[x]``."""
        order = order or len(values)
        return cls([1 << int(v) for v in values], order)

    @classmethod
    def empty(cls, arity: int, order: int) -> "Relation":
        return cls(np.zeros((order,) * arity), order)

    @classmethod
    def universal(cls, arity: int, order: int) -> "Relation":
        return cls(np.full((order,) * arity, (1 << order) - 1), order)

    @classmethod
    def constant(cls, value: int, arity: int, order: int) -> "Relation":
        return cls(np.full((order,) * arity, 1 << value), order)

    @classmethod
    def zero(cls, arity: int, order: int) -> "Relation":
        """The 'o' relation: value 0 everywhere, the identity of addition."""
        return cls.constant(0, arity, order)

    @classmethod
    def identity(cls, order: int) -> "Relation":
        return cls.from_function(range(order), order)

    # -- views ---------------------------------------------------------------

    def points(self) -> Iterator[Point]:
        return itertools.product(range(self.order), repeat=self.arity)

    def eval(self, point: Sequence[int]) -> frozenset[int]:
        return frozenset(_bits.members(self.masks[self._check_point(point)]))

    __call__ = eval

    def classify(self, point: Sequence[int]) -> PointClass:
        k = bin(int(self.masks[self._check_point(point)])).count("1")
        if k == 0:
            return PointClass.UNDEFINED
        return PointClass.SINGLE if k == 1 else PointClass.MANY

    def image(self, *sets: Iterable[int]) -> frozenset[int]:
        """Union of values over every point of ``sets[0] x ... x sets[M-1]``."""
        if len(sets) != self.arity:
            raise RelationError(f"image needs {self.arity} sets, got {len(sets)}")
        acc = 0
        for p in itertools.product(*(sorted(set(s)) for s in sets)):
            acc |= int(self.masks[self._check_point(p)])
        return frozenset(_bits.members(acc))

    def tuples(self) -> list[tuple[int, ...]]:
        return [p + (v,) for p in self.points() for v in _bits.members(self.masks[p])]

    def is_functional(self) -> bool:
        """Single-valued and total at every point."""
        return bool(np.all(_bits.popcount(self.masks) == 1))

    def class_counts(self) -> dict[PointClass, int]:
        pc = _bits.popcount(self.masks)
        return {
            PointClass.UNDEFINED: int(np.sum(pc == 0)),
            PointClass.SINGLE: int(np.sum(pc == 1)),
            PointClass.MANY: int(np.sum(pc >= 2)),
        }

    def _check_point(self, point) -> Point:
        p = tuple(int(x) for x in point) if not isinstance(point, (int, np.integer)) else (int(point),)
        if len(p) != self.arity or any(not 0 <= x < self.order for x in p):
            raise RelationError(f"point {p} is not in range for arity {self.arity}, order {self.order}")
        return p

    # -- dunder --------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.masks, other.masks)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, self.masks.shape, self.masks.tobytes()))
        return self._hash

    def __repr__(self):
        if self.arity == 1:
            body = ",".join(cell_text(m) for m in self.masks)
            return f"Relation(({body}))"
        return f"Relation(arity={self.arity}, order={self.order}, tuples={len(self.tuples())})"


def cell_text(mask: int) -> str:
    vs = _bits.members(mask)
    return "*".join(str(v) for v in vs) if vs else "-"


def _as_values(c):
    if c is None:
        return ()
    if isinstance(c, (int, np.integer)):
        return (int(c),)
    return tuple(c)


# -- module-level operations --------------------------------------------------

def classify_point(r: Relation, point) -> PointClass:
    return r.classify(point)


def eval_point(r: Relation, point) -> frozenset[int]:
    return r.eval(point)


def image(r: Relation, *sets) -> frozenset[int]:
    return r.image(*sets)


def check_compatible(*rels: Relation) -> None:
    orders = {r.order for r in rels}
    if len(orders) > 1:
        raise OrderMismatch(f"relations have different orders {sorted(orders)}")


def enumerate_relations(arity: int, order: int) -> Iterator[Relation]:
    """Every relation, smallest first, lexicographic within a size."""
    all_tuples = list(itertools.product(range(order), repeat=arity + 1))
    for size in range(len(all_tuples) + 1):
        for chosen in itertools.combinations(all_tuples, size):
            yield Relation.from_tuples(chosen, arity, order)


def all_masks(arity: int, order: int) -> np.ndarray:
    """Stacked masks of all ``2**(order**(arity+1))`` relations, indexed by code."""
    points = order ** arity
    total = 1 << (order * points)
    if total > 1 << 20:
        raise RelationError(f"refusing to materialize {total} relations")
    codes = np.arange(total, dtype=_bits.DTYPE)
    shifts = np.arange(points, dtype=_bits.DTYPE) * order
    flat = (codes[:, None] >> shifts) & ((1 << order) - 1)
    return flat.reshape((total,) + (order,) * arity)


def functional_masks(arity: int, order: int) -> np.ndarray:
    """Stacked masks of all single-valued total relations."""
    points = order ** arity
    combos = np.array(list(itertools.product(range(order), repeat=points)), dtype=_bits.DTYPE)
    return (1 << combos).reshape((len(combos),) + (order,) * arity)


DTYPE_ONE = _bits.DTYPE(1)


def random_masks(rng: np.random.Generator, shape: tuple[int, ...], order: int, density: float) -> np.ndarray:
    """Each value independently present with probability ``density``."""
    bits = rng.random(shape + (order,)) < density
    return _bits.from_tuples(bits)


def random_functional_masks(rng: np.random.Generator, shape: tuple[int, ...], order: int) -> np.ndarray:
    return DTYPE_ONE << rng.integers(0, order, size=shape).astype(_bits.DTYPE)



def random_relation(arity: int, order: int, rng: np.random.Generator, density: float = 0.4,
                    functional: bool = False) -> Relation:
    shape = (order,) * arity
    if functional:
        return Relation(random_functional_masks(rng, shape, order), order)
    return Relation(random_masks(rng, shape, order, density), order)
