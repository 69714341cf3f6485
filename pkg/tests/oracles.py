"""Independent reference computations used by the tests.

Nothing here shares code with the package: Smith invariants come from
determinantal divisors, reachability from plain Python sets.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


def det(rows):
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            out = -out
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(out)


def determinantal_divisors(rows):
    """Invariant factors d_1 | d_2 | ... via gcds of k-by-k minors."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                g = gcd(g, det([[rows[i][j] for j in ci] for i in ri]))
        divisors.append(g)
    out = []
    for k in range(1, len(divisors)):
        if divisors[k] == 0:
            out.append(0)
        else:
            out.append(divisors[k] // divisors[k - 1])
    return out


def rank_mod_p(rows, p):
    a = [[x % p for x in r] for r in rows]
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def reach(edges, start, allowed):
    seen = set(start) & allowed
    stack = list(seen)
    while stack:
        c = stack.pop()
        for d in edges.get(c, ()):
            if d in allowed and d not in seen:
                seen.add(d)
                stack.append(d)
    return seen


def brute_invariant_part(edges, cells):
    """Cells on a bi-infinite path inside ``cells`` (finite graph: cycle reachability)."""
    cells = set(cells)
    cyc = set()
    for c in cells:
        # c lies on a cycle iff c reaches itself in one or more steps
        nxt = {d for d in edges.get(c, ()) if d in cells}
        if c in reach(edges, nxt, cells):
            cyc.add(c)
    rev = {}
    for c, ds in edges.items():
        for d in ds:
            rev.setdefault(d, set()).add(c)
    fwd = reach(edges, cyc, cells)
    bwd = reach(rev, cyc, cells)
    return fwd & bwd


def brute_invariant_part_pruned(edges, cells, lower, upper):
    """As :func:`brute_invariant_part`, discarding cycle classes on which some
    field component has a strict sign on every cell (``lower``/``upper`` map a
    cell to per-component enclosure bounds)."""
    cells = set(cells)
    rev = {}
    for c, ds in edges.items():
        for d in ds:
            rev.setdefault(d, set()).add(c)
    fwd_of = {c: reach(edges, {c}, cells) for c in cells}
    cyc = set()
    for c in cells:
        nxt = {d for d in edges.get(c, ()) if d in cells}
        if c not in reach(edges, nxt, cells):
            continue
        cls = {d for d in cells if d in fwd_of[c] and c in fwd_of[d]}
        dims = len(lower[c])
        signed = any(
            all(lower[d][i] > 0 for d in cls) or all(upper[d][i] < 0 for d in cls)
            for i in range(dims)
        )
        if not signed:
            cyc.add(c)
    fwd = reach(edges, cyc, cells)
    bwd = reach(rev, cyc, cells)
    return fwd & bwd


def nullspace_mod_p(rows, ncols, p):
    """Kernel basis (list of vectors) of a matrix given by rows, pure Python."""
    a = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-a[i][f]) % p
        basis.append(v)
    return basis


def _cols(m):
    """Columns of a numpy-like matrix as lists of Python ints."""
    m = [[int(x) for x in row] for row in m.tolist()]
    return [list(c) for c in zip(*m)] if m else []


def homology_dims(mat, p):
    """``dim H_k = n_k - rank d_k - rank d_{k+1}`` on a materialized slice."""
    out = {}
    for k in range(mat.lo + 1, mat.hi):
        names = mat.names.get(k, [])
        dk = mat.d.get(k)
        dk1 = mat.d.get(k + 1)
        r1 = rank_mod_p(dk.tolist(), p) if dk is not None and dk.size else 0
        r2 = rank_mod_p(dk1.tolist(), p) if dk1 is not None and dk1.size else 0
        out[k] = len(names) - r1 - r2
    return out


def induced_image_dim(mat, chain_map, src, tgt, p):
    """Dimension of the image in ``H_tgt`` of a chain map from ``C_src``.

    ``rank([f(Z_src) | B_tgt]) - rank(B_tgt)`` with everything in pure Python.
    """
    n_src = len(mat.names.get(src, []))
    n_tgt = len(mat.names.get(tgt, []))
    if not n_src or not n_tgt:
        return 0
    dk = mat.d.get(src)
    z = nullspace_mod_p(dk.tolist() if dk is not None and dk.shape[0] else [], n_src, p)
    f = [[int(x) for x in row] for row in chain_map.tolist()]
    img = [[sum(f[i][j] * v[j] for j in range(n_src)) % p for i in range(n_tgt)] for v in z]
    dt = mat.d.get(tgt + 1)
    b = _cols(dt) if dt is not None and dt.size else []
    both = img + b
    if not both:
        return 0
    r_all = rank_mod_p([list(r) for r in zip(*both)], p)
    r_b = rank_mod_p([list(r) for r in zip(*b)], p) if b else 0
    return r_all - r_b
