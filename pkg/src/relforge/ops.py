"""The operation algebra on relations: addition, transformation, composition,
false extension.

Tuple positions are labelled the way the relations are written: arguments are
``1..M`` and the value slot is ``0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import _bits
from .errors import ArityMismatch, BadIndex, BadPositions, NotAPermutation, OrderMismatch
from .monoid import Monoid
from .relation import Relation, check_compatible


@dataclass(frozen=True)
class TransformSpec:
    """A permutation of tuple positions, written ``(i1, ..., iM, i0)``.

    Applying it maps each tuple ``(b1, ..., bM, b0)`` to
    ``(b_i1, ..., b_iM, b_i0)``.
    """

    positions: tuple[int, ...]

    def __post_init__(self):
        pos = tuple(int(p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        m = len(pos) - 1
        if m < 1 or sorted(pos) != list(range(m + 1)):
            raise NotAPermutation(f"{pos} is not a permutation of (1, ..., {m}, 0)")

    @property
    def arity(self) -> int:
        return len(self.positions) - 1

    @classmethod
    def identity(cls, arity: int) -> "TransformSpec":
        return cls(tuple(range(1, arity + 1)) + (0,))

    @classmethod
    def parse(cls, text: str) -> "TransformSpec":
        try:
            return cls(tuple(int(x) for x in text.replace(" ", "").split(",")))
        except ValueError:
            raise NotAPermutation(f"cannot read transform spec {text!r}") from None

    def _slot(self, label: int) -> int:
        return self.arity if label == 0 else label - 1

    def then(self, other: "TransformSpec") -> "TransformSpec":
        """The spec equal to applying ``self`` first and ``other`` second."""
        if other.arity != self.arity:
            raise ArityMismatch("transform specs have different arities")
        return TransformSpec(tuple(self.positions[self._slot(label)] for label in other.positions))

    def __mul__(self, other: "TransformSpec") -> "TransformSpec":
        # (a * b) applies b first, as with function composition
        return other.then(self)

    def inverse(self) -> "TransformSpec":
        out = [0] * len(self.positions)
        for k, label in enumerate(self.positions):
            out[self._slot(label)] = k + 1 if k < self.arity else 0
        return TransformSpec(tuple(out))

    def __str__(self):
        return ",".join(str(p) for p in self.positions)


def all_transforms(arity: int) -> list[TransformSpec]:
    """All ``(arity+1)!`` position permutations."""
    labels = tuple(range(1, arity + 1)) + (0,)
    return [TransformSpec(p) for p in itertools.permutations(labels)]


SWAP = TransformSpec((2, 1, 0))
INVERSE = TransformSpec((0, 1))


def add(r1: Relation, r2: Relation, m: Monoid) -> Relation:
    """Pointwise set sum; undefined wherever either side is undefined."""
    if r1.arity != r2.arity:
        raise ArityMismatch(f"cannot add arity {r1.arity} to arity {r2.arity}")
    check_compatible(r1, r2)
    if r1.order != m.order:
        raise OrderMismatch(f"relations have order {r1.order}, monoid has order {m.order}")
    return Relation(_bits.sumset(r1.masks, r2.masks, m.table), r1.order)


def add_all(rels: Sequence[Relation], m: Monoid) -> Relation:
    it = iter(rels)
    acc = next(it)
    for r in it:
        acc = add(acc, r, m)
    return acc


def transform(r: Relation, t: TransformSpec | Sequence[int]) -> Relation:
    if not isinstance(t, TransformSpec):
        t = TransformSpec(tuple(t))
    if t.arity != r.arity:
        raise NotAPermutation(f"spec {t} has length {len(t.positions)}, relation needs {r.arity + 1}")
    return Relation(_bits.transform(r.masks, t.positions, r.arity, r.order), r.order)


def inverse(beta: Relation) -> Relation:
    """Converse of a one-variable relation."""
    if beta.arity != 1:
        raise ArityMismatch("inverse is defined here for one-variable relations; use transform")
    return transform(beta, INVERSE)


def _check_beta(r: Relation, beta: Relation) -> None:
    if beta.arity != 1:
        raise ArityMismatch(f"composition needs a one-variable relation, got arity {beta.arity}")
    if beta.order != r.order:
        raise OrderMismatch(f"orders differ: {r.order} vs {beta.order}")


def compose_arg(r: Relation, i: int, beta: Relation) -> Relation:
    """``r x_i beta``: the i-th argument is first passed through ``beta``."""
    _check_beta(r, beta)
    if not 1 <= i <= r.arity:
        raise BadIndex(f"argument index {i} outside 1..{r.arity}")
    return Relation(_bits.compose_arg(r.masks, i, beta.masks, r.arity), r.order)


def compose_val(r: Relation, beta: Relation) -> Relation:
    """``r x_0 beta``: the value set becomes its preimage under ``beta``."""
    _check_beta(r, beta)
    return Relation(_bits.compose_val(r.masks, beta.masks, r.arity), r.order)


def compose(r: Relation, i: int, beta: Relation) -> Relation:
    return compose_val(r, beta) if i == 0 else compose_arg(r, i, beta)


def extend_false(r: Relation, target_arity: int, positions: Sequence[int]) -> Relation:
    """Embed ``r`` into ``target_arity`` variables.

    Variable ``j`` of ``r`` becomes variable ``positions[j-1]`` of the result;
    the remaining variables are ignored by the value.
    """
    positions = tuple(int(p) for p in positions)
    if len(positions) != r.arity:
        raise BadPositions(f"need {r.arity} positions, got {len(positions)}")
    if target_arity < r.arity:
        raise BadPositions(f"target arity {target_arity} is below source arity {r.arity}")
    if len(set(positions)) != len(positions) or any(not 1 <= p <= target_arity for p in positions):
        raise BadPositions(f"positions {positions} must be distinct and within 1..{target_arity}")
    return Relation(_bits.extend(r.masks, positions, target_arity, r.order), r.order)
