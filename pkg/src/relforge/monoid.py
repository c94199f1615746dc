"""Finite commutative monoids given by explicit addition tables.

Elements are the ordinals ``0 .. order-1`` and element ``0`` is always the
identity.  Construction verifies the axioms and precomputes the
indicator-faithfulness degree: the largest ``m`` such that the iterated sums
``0, 1, 1+1, ..., (m copies of 1)`` are pairwise distinct.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from . import _bits
from .errors import (
    CarrierTooLarge,
    MissingIdentity,
    MonoidError,
    NoIdentityAtZero,
    NotAssociative,
    NotClosed,
    NotCommutative,
)

# largest carrier for which all 2**(order**2) one-variable relations are enumerated
DERIVED_MAX_ORDER = 3


class Monoid:
    """A verified finite commutative monoid with identity ``0``.

    Instances are immutable; build them with :func:`mk_monoid`,
    :func:`mk_monoid_mod` or :func:`mk_monoid_saturating`.
    """

    def __init__(self, table, *, verify: str = "exhaustive", samples: int = 20000, seed: int = 0):
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise MonoidError(f"addition table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            bad = tuple(int(x) for x in np.argwhere((t < 0) | (t >= n))[0])
            raise MonoidError(f"table entry at {bad} is {int(t[bad])}, outside 0..{n - 1}")
        t.setflags(write=False)
        self.table = t
        self.order = n

        _check_identity(t)
        _check_commutative(t)
        if verify == "exhaustive":
            _check_associative(t)
        elif verify == "sample":
            _check_associative_sampled(t, samples, seed)
        elif verify != "none":
            raise ValueError(f"unknown verify mode {verify!r}")
        self.commutative = True
        self.faithfulness = _faithfulness(t)
        self.one_sums = tuple(self.repeat_one(k) for k in range(self.faithfulness + 1))

    def add(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def sum_sets(self, xs: Iterable[int], ys: Iterable[int]) -> frozenset[int]:
        ys = tuple(ys)
        return frozenset(int(self.table[x, y]) for x in xs for y in ys)

    def repeat_one(self, k: int) -> int:
        """``1 + 1 + ... + 1`` with ``k`` copies (``0`` for ``k == 0``)."""
        if k and self.order < 2:
            raise MonoidError("monoid of order 1 has no element 1")
        s = 0
        for _ in range(k):
            s = self.add(s, 1)
        return s

    def elements(self) -> range:
        return range(self.order)

    def __eq__(self, other):
        return isinstance(other, Monoid) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"Monoid(order={self.order}, faithfulness={self.faithfulness})"


def _check_identity(t: np.ndarray) -> None:
    ids = np.arange(t.shape[0])
    bad = np.nonzero((t[0] != ids) | (t[:, 0] != ids))[0]
    if bad.size:
        raise NoIdentityAtZero(int(bad[0]))


def _check_commutative(t: np.ndarray) -> None:
    bad = np.argwhere(t != t.T)
    if bad.size:
        raise NotCommutative(tuple(int(x) for x in bad[0]))


def _check_associative(t: np.ndarray) -> None:
    n = t.shape[0]
    # chunk over the first operand to keep memory at O(n^2)
    for a in range(n):
        left = t[t[a]]            # [b, c] -> (a+b)+c
        right = t[a][t]           # [b, c] -> a+(b+c)
        bad = np.argwhere(left != right)
        if bad.size:
            b, c = (int(x) for x in bad[0])
            raise NotAssociative((a, b, c))


def _check_associative_sampled(t: np.ndarray, samples: int, seed: int) -> None:
    n = t.shape[0]
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    bad = np.nonzero(t[t[a, b], c] != t[a, t[b, c]])[0]
    if bad.size:
        k = bad[0]
        raise NotAssociative((int(a[k]), int(b[k]), int(c[k])))


def _faithfulness(t: np.ndarray) -> int:
    if t.shape[0] < 2:
        return 0
    seen = {0}
    s, m = 0, 0
    while True:
        s = int(t[s, 1])
        if s in seen:
            return m
        seen.add(s)
        m += 1


def mk_monoid(table, **kwargs) -> Monoid:
    return Monoid(table, **kwargs)


def mk_monoid_mod(k: int) -> Monoid:
    """Cyclic addition on ``0..k-1``."""
    if k < 1:
        raise MonoidError("mod-k monoid needs k >= 1")
    r = np.arange(k)
    return Monoid((r[:, None] + r[None, :]) % k)


def mk_monoid_saturating(n: int) -> Monoid:
    """``min(a + b, n)`` on ``0..n``."""
    if n < 0:
        raise MonoidError("saturating monoid needs n >= 0")
    r = np.arange(n + 1)
    return Monoid(np.minimum(r[:, None] + r[None, :], n))


class DerivedMonoid(Monoid):
    """Monoid whose elements are all one-variable relations over a base carrier.

    Element ``k`` is ``self.elements_rel[k]``; element 0 is the constant-0
    relation, which is the identity of relation addition.
    """

    def __init__(self, table, elements_rel, base: Monoid, **kwargs):
        super().__init__(table, **kwargs)
        self.elements_rel = tuple(elements_rel)
        self.base = base
        self._index = {r: k for k, r in enumerate(self.elements_rel)}

    def index_of(self, relation) -> int:
        try:
            return self._index[relation]
        except KeyError:
            raise MonoidError(f"{relation!r} is not an element of this derived monoid") from None


def _relation_code(masks: np.ndarray, n: int) -> np.ndarray:
    """Pack the per-point masks of one-variable relations into a single integer."""
    shifts = (np.arange(n, dtype=np.int64) * n)
    return (masks.astype(np.int64) << shifts).sum(axis=-1)


def derived_operator_system(m: Monoid, *, verify: str | None = None) -> DerivedMonoid:
    """All one-variable relations over ``m``'s carrier under relation addition.

    For order <= 2 the axioms are checked exhaustively; at order 3 (512
    elements) associativity is checked on sampled triples unless ``verify`` says
    otherwise.
    """
    from .relation import Relation

    n = m.order
    if n > DERIVED_MAX_ORDER:
        raise CarrierTooLarge(
            f"order {n} gives 2**{n * n} one-variable relations; limit is order {DERIVED_MAX_ORDER}")
    count = 1 << (n * n)
    codes = np.arange(count, dtype=np.int64)
    cells = (codes[:, None] >> (np.arange(n, dtype=np.int64) * n)) & ((1 << n) - 1)

    identity_code = int(_relation_code(np.ones(n, dtype=np.int64), n))
    # relabel so that index 0 is the identity: swap codes 0 and identity_code
    code_of_index = codes.copy()
    code_of_index[0], code_of_index[identity_code] = identity_code, 0
    index_of_code = np.empty_like(code_of_index)
    index_of_code[code_of_index] = np.arange(count)

    ordered = cells[code_of_index]
    summed = _bits.sumset(ordered[:, None, :], ordered[None, :, :], m.table)
    table = index_of_code[_relation_code(summed, n)]

    elements = [Relation(row, n) for row in ordered]
    if verify is None:
        verify = "exhaustive" if n <= 2 else "sample"
    return DerivedMonoid(table, elements, m, verify=verify)


class Submonoid(Monoid):
    """Closed subset of a parent monoid, relabelled ``0..k-1`` in parent order.

    ``embedding[k]`` is the parent element that sub-element ``k`` stands for.
    """

    def __init__(self, table, embedding, parent: Monoid):
        super().__init__(table)
        self.embedding = tuple(embedding)
        self.parent = parent


def submonoid_closure(m: Monoid, elements: Sequence) -> Submonoid:
    """Check that ``elements`` is a submonoid of ``m`` and return its table.

    Entries may be element indices or, for a :class:`DerivedMonoid`,
    one-variable relations.
    """
    idx = []
    for e in elements:
        if isinstance(e, (int, np.integer)):
            if not 0 <= int(e) < m.order:
                raise MonoidError(f"element {e} outside 0..{m.order - 1}")
            idx.append(int(e))
        elif isinstance(m, DerivedMonoid):
            idx.append(m.index_of(e))
        else:
            raise MonoidError(f"cannot interpret {e!r} as an element of {m!r}")
    chosen = sorted(set(idx))
    if 0 not in chosen:
        raise MissingIdentity("subset does not contain the identity element 0")
    pos = {e: k for k, e in enumerate(chosen)}
    k = len(chosen)
    table = np.zeros((k, k), dtype=np.int64)
    for (i, a), (j, b) in itertools.product(enumerate(chosen), repeat=2):
        s = m.add(a, b)
        if s not in pos:
            raise NotClosed((_label(m, a), _label(m, b)), _label(m, s))
        table[i, j] = pos[s]
    return Submonoid(table, chosen, m)


def _label(m: Monoid, e: int):
    if isinstance(m, DerivedMonoid):
        return m.elements_rel[e]
    return e


def find_isomorphism(a: Monoid, b: Monoid) -> tuple[int, ...] | None:
    """Brute-force a bijection ``phi`` with ``phi(x + y) = phi(x) + phi(y)``."""
    if a.order != b.order:
        return None
    n = a.order
    for rest in itertools.permutations(range(1, n)):
        phi = np.array((0,) + rest)
        if np.array_equal(phi[a.table], b.table[np.ix_(phi, phi)]):
            return tuple(int(x) for x in phi)
    return None
