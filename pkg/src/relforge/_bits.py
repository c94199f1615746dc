"""Array kernels over value-set bitmasks.

A relation of arity ``M`` over a carrier of size ``n`` is an int64 array whose
last ``M`` axes all have length ``n``; entry ``[b1, ..., bM]`` is a bitmask of
the value set (bit ``v`` set iff ``v`` is a value).  Every kernel accepts extra
leading batch axes and broadcasts them, which is what lets the law checker run
whole families of relations through one call.
"""

from __future__ import annotations

import numpy as np

DTYPE = np.int64
MAX_ORDER = 62


def mask_of(values) -> int:
    m = 0
    for v in values:
        m |= 1 << int(v)
    return m


def members(mask: int) -> tuple[int, ...]:
    mask = int(mask)
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def popcount(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=DTYPE)
    count = np.zeros(a.shape, dtype=DTYPE)
    while np.any(a):
        count += a & 1
        a = a >> 1
    return count


def _bit(a: np.ndarray, v: int) -> np.ndarray:
    return (a >> v) & 1


def sumset(a: np.ndarray, b: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Elementwise ``{x + y | x in a, y in b}``; empty if either side is empty."""
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    n = table.shape[0]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=DTYPE)
    b_bits = [_bit(b, j) for j in range(n)]
    for i in range(n):
        ai = _bit(a, i)
        if not ai.any():
            continue
        for j in range(n):
            out |= (ai & b_bits[j]) << DTYPE(table[i, j])
    return out


def _expand(x: np.ndarray, k: int) -> np.ndarray:
    return x.reshape(x.shape + (1,) * k)


def apply_unary(child: np.ndarray, f: np.ndarray, point_axes: int) -> np.ndarray:
    """Union of ``f``-images over each value set in ``child``.

    ``f`` has shape ``(..., n)``; its batch axes line up with ``child``'s
    leading axes, and ``child`` carries ``point_axes`` trailing point axes.
    """
    child = np.asarray(child, dtype=DTYPE)
    f = np.asarray(f, dtype=DTYPE)
    n = f.shape[-1]
    shape = np.broadcast_shapes(child.shape, f.shape[:-1] + (1,) * point_axes)
    out = np.zeros(shape, dtype=DTYPE)
    for e in range(n):
        out |= _bit(child, e) * _expand(f[..., e], point_axes)
    return out


def compose_arg(r: np.ndarray, i: int, beta: np.ndarray, arity: int) -> np.ndarray:
    """Substitute ``beta`` into argument ``i`` (1-based) of ``r``."""
    r = np.asarray(r, dtype=DTYPE)
    beta = np.asarray(beta, dtype=DTYPE)
    n = beta.shape[-1]
    axis = i - 1 - arity
    slices = [np.take(r, y, axis=axis) for y in range(n)]
    columns = []
    for x in range(n):
        acc = None
        for y in range(n):
            sel = _expand(_bit(beta[..., x], y), arity - 1)
            term = sel * slices[y]
            acc = term if acc is None else acc | term
        columns.append(acc)
    return np.stack(np.broadcast_arrays(*columns), axis=axis)


def compose_val(r: np.ndarray, beta: np.ndarray, arity: int) -> np.ndarray:
    """Values ``c`` such that ``beta(c)`` meets the value set of ``r``."""
    r = np.asarray(r, dtype=DTYPE)
    beta = np.asarray(beta, dtype=DTYPE)
    n = beta.shape[-1]
    shape = np.broadcast_shapes(r.shape, beta.shape[:-1] + (1,) * arity)
    out = np.zeros(shape, dtype=DTYPE)
    for c in range(n):
        hit = (r & _expand(beta[..., c], arity)) != 0
        out |= hit.astype(DTYPE) << DTYPE(c)
    return out


def to_tuples(r: np.ndarray, n: int) -> np.ndarray:
    """Boolean tuple-membership array: one extra trailing axis for the value."""
    r = np.asarray(r, dtype=DTYPE)
    return ((r[..., None] >> np.arange(n, dtype=DTYPE)) & 1).astype(bool)


def from_tuples(t: np.ndarray) -> np.ndarray:
    n = t.shape[-1]
    weights = DTYPE(1) << np.arange(n, dtype=DTYPE)
    return (t.astype(DTYPE) * weights).sum(axis=-1)


def transform(r: np.ndarray, spec: tuple[int, ...], arity: int, n: int) -> np.ndarray:
    """Permute tuple positions; ``spec`` lists labels 1..M and 0 (the value)."""
    t = to_tuples(r, n)
    batch = t.ndim - (arity + 1)

    def axis_of(label: int) -> int:
        return batch + (arity if label == 0 else label - 1)

    axes = list(range(batch)) + [axis_of(label) for label in spec]
    return from_tuples(np.transpose(t, axes))


def extend(r: np.ndarray, positions: tuple[int, ...], target_arity: int, n: int) -> np.ndarray:
    """Embed into ``target_arity`` variables; ``positions`` are 1-based."""
    r = np.asarray(r, dtype=DTYPE)
    grid = np.indices((n,) * target_arity)
    return r[(Ellipsis,) + tuple(grid[p - 1] for p in positions)]
