"""Dense linear algebra over the prime fields F_p.

Matrices are numpy ``int64`` arrays with entries reduced into ``[0, p)``.
Elimination is column-by-column with the lowest available row as pivot, so
every result is deterministic.
"""

from __future__ import annotations

import numpy as np


def reduce_mod(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def inverse_mod(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError("zero has no inverse mod %d" % p)
    return pow(int(x), p - 2, p)


def _rref_f2(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    # rows packed into Python ints (bit c = column c); XOR elimination
    rows, cols = m.shape
    nbytes = (cols + 7) // 8
    packed = np.packbits(m.astype(np.uint8), axis=1, bitorder="little")
    ints = [int.from_bytes(r.tobytes(), "little") for r in packed]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        bit = 1 << c
        i = next((i for i in range(r, rows) if ints[i] & bit), None)
        if i is None:
            continue
        ints[r], ints[i] = ints[i], ints[r]
        pr = ints[r]
        for j in range(rows):
            if j != r and ints[j] & bit:
                ints[j] ^= pr
        pivots.append(c)
        r += 1
    buf = np.frombuffer(b"".join(x.to_bytes(nbytes, "little") for x in ints), dtype=np.uint8)
    out = np.unpackbits(buf.reshape(rows, nbytes), axis=1, bitorder="little")[:, :cols]
    return out.astype(np.int64), pivots


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` over F_p and its pivot columns."""
    m = reduce_mod(a, p).copy()
    if p == 2 and m.size:
        return _rref_f2(m)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * inverse_mod(int(m[r, c]), p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of ``{x : a x = 0}`` as the columns of the returned matrix."""
    a = np.asarray(a)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-r[i, f]) % p
    return basis


def column_space(a, p: int) -> np.ndarray:
    """Independent columns spanning the image of ``a`` (a subset of them)."""
    a = reduce_mod(a, p)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    _, pivots = rref(a, p)
    return a[:, pivots]


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a x = b`` (``b`` may be a matrix), or None."""
    a = reduce_mod(a, p)
    b = reduce_mod(b, p)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    rows, cols = a.shape
    aug = np.concatenate([a, b], axis=1)
    r, pivots = rref(aug, p)
    if any(pc >= cols for pc in pivots):
        return None
    x = np.zeros((cols, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x[:, 0] if vec else x


def complement_basis(sub, ambient, p: int) -> np.ndarray:
    """Columns of ``ambient`` extending the span of ``sub`` to span both.

    Returns the chosen columns of ``ambient`` (greedy, left to right) that are
    independent modulo ``sub``.
    """
    sub = reduce_mod(sub, p)
    ambient = reduce_mod(ambient, p)
    k = sub.shape[1]
    _, pivots = rref(np.concatenate([sub, ambient], axis=1), p)
    chosen = [c - k for c in pivots if c >= k]
    return ambient[:, chosen]
