"""Duals, disjoint unions and grading shifts of equivariant complexes.

Duals and tensor products are computed on the free-cell models and brought
back to a minimal complex: zero differential, the homology below the
periodic range as explicit generators, and a standard tower above it.
"""

from __future__ import annotations

import numpy as np

from ..errors import FieldMismatch, FlavorMismatch, NotRealizable, ShiftParityError
from .cells import CellModel, dual_cells, tensor_cells
from .complex import OP_DEGREES, PIN2, PERIOD, S1, EquivariantComplex, Generator, parse_tower_id, tower_id
from .module import HomologyModule, cell_module_homology


def _unit(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def _is_standard(h: HomologyModule, s: int, hi: int) -> bool:
    p = h.field

    def iso(op, k):
        m = h.op(op, k)
        return m.shape == (1, 1) and m[0, 0] % p != 0

    for k in range(s, hi + 1):
        off = (k - s) % h.period
        want = 1 if (h.flavor == S1 and off == 0) or (h.flavor == PIN2 and off < 3) else 0
        if h.rank(k) != want:
            return False
        if not want:
            continue
        if k - h.period >= s and not iso(h.period_op, k):
            return False
        if h.flavor == PIN2 and off in (1, 2) and not iso("q", k):
            return False
    return True


def minimal_form(cells: CellModel, n: int, suspension: int = 0, name: str = "") -> EquivariantComplex:
    """Zero-differential complex with the homology and module structure of ``cells``."""
    flavor, p = cells.flavor, cells.field
    period = PERIOD[flavor]
    lo = cells.min_degree()
    hi = cells.max_degree() + 2 * period + 4
    h = cell_module_homology(cells, n, lo, hi, suspension)
    r0 = (-2 * n + suspension) % period
    s = lo - period + ((r0 - (lo - period)) % period)
    while s <= hi - 2 * period and not _is_standard(h, s, hi):
        s += period
    if s > hi - 2 * period:
        raise NotRealizable("homology of the cell model has no standard tower", {"window": [lo, hi]})

    # tower basis from the top generator downwards
    top = s + ((hi - s) // period) * period + (2 if flavor == PIN2 else 0)
    if top > hi:
        top -= period
    top_vec = np.ones(1, dtype=np.int64)
    tower: dict[int, np.ndarray] = {}
    k, vec = top, top_vec
    while k >= s:
        tower[k] = vec
        if flavor == PIN2:
            q1 = (h.op("q", k) @ vec) % p
            tower[k - 1] = q1
            tower[k - 2] = (h.op("q", k - 1) @ q1) % p
        nxt = k - period
        if nxt < s:
            break
        vec = (h.op(h.period_op, k) @ vec) % p
        k = nxt

    def name_of(k, i):
        return "g%d_%d" % (k, i)

    def terms(vec: np.ndarray, k: int) -> dict[str, int]:
        if k >= s:
            # a tower grading: the image is a multiple of the tower basis vector
            t = tower.get(k)
            if t is None or not np.any(vec % p):
                return {}
            i = int(np.flatnonzero(t % p)[0])
            c = (int(vec[i]) * pow(int(t[i]), p - 2, p)) % p
            if np.any((c * t - vec) % p):
                raise NotRealizable("tower image is not a multiple of the tower generator", {"grading": k})
            return {tower_id(k): c}
        return {name_of(k, i): int(x) % p for i, x in enumerate(vec) if int(x) % p}

    gens = []
    for k in range(lo, s):
        for i in range(h.rank(k)):
            ops = {}
            for op, deg in OP_DEGREES[flavor].items():
                img = (h.op(op, k) @ _unit(h.rank(k), i)) % p
                t = terms(img, k - deg)
                if t:
                    ops[op] = t
            gens.append(Generator(name_of(k, i), k, {}, ops))
    tower_ops = {}
    for k, vec in sorted(tower.items()):
        for op, deg in OP_DEGREES[flavor].items():
            if k - deg >= s:
                continue
            t = terms((h.op(op, k) @ vec) % p, k - deg)
            if t:
                tower_ops[(op, k)] = t
    c = EquivariantComplex(flavor, p, n, tuple(gens), suspension, s, tower_ops, cells, True, name)
    c.validate()
    return c


def _require_cells(c: EquivariantComplex) -> CellModel:
    if c.cells is None:
        raise NotRealizable(
            "complex has no free-cell model; duals and tensor products need one",
            {"name": c.name, "has_tower": c.has_tower},
        )
    return c.cells


def dualize(c: EquivariantComplex) -> EquivariantComplex:
    """Dual complex: gradings negated, operators transposed, ``n -> -n``."""
    cells = dual_cells(_require_cells(c))
    name = "dual(%s)" % c.name if c.name else ""
    return minimal_form(cells, -c.n, -c.suspension, name)


def tensor_disjoint_union(c1: EquivariantComplex, c2: EquivariantComplex) -> EquivariantComplex:
    """Complex of a disjoint union: tensor product over the operator ring, ``n`` adding."""
    if c1.flavor != c2.flavor:
        raise FlavorMismatch("cannot tensor %s with %s" % (c1.flavor, c2.flavor), {"flavors": [c1.flavor, c2.flavor]})
    if c1.field != c2.field:
        raise FieldMismatch("coefficient fields differ", {"fields": [c1.field, c2.field]})
    cells = tensor_cells(_require_cells(c1), _require_cells(c2))
    name = "%s+%s" % (c1.name, c2.name) if c1.name and c2.name else ""
    return minimal_form(cells, c1.n + c2.n, c1.suspension + c2.suspension, name)


def _shift_name(x: str, k: int) -> str:
    t = parse_tower_id(x)
    return tower_id(t + k) if t is not None else x


def _shift_terms(terms, k: int) -> dict[str, int]:
    return {_shift_name(x, k): v for x, v in terms.items()}


def degree_shift(c: EquivariantComplex, k: int, compensate: bool = True) -> EquivariantComplex:
    """Shift every grading by ``k``.

    With ``compensate`` the shift is recorded as a suspension, so absolute
    gradings and every invariant are unchanged; ``k`` must be a multiple of
    the suspension unit (4 for Pin2, 2 for S1).  Without it ``n`` drops by
    ``k/2`` and the invariants move with the gradings.
    """
    unit = 4 if c.flavor == PIN2 else 2
    if compensate and k % unit:
        raise ShiftParityError("compensated shifts must be multiples of %d for %s" % (unit, c.flavor), {"k": k})
    if not compensate and k % 2:
        raise ShiftParityError("shifts must be even to keep n integral", {"k": k})
    if k == 0:
        return c
    gens = tuple(
        Generator(g.id, g.grading + k, _shift_terms(g.d, k), {op: _shift_terms(t, k) for op, t in g.ops.items()})
        for g in c.generators
    )
    tops = {(op, g + k): _shift_terms(t, k) for (op, g), t in c.tower_ops.items()}
    cells = c.cells.shifted(k) if c.cells is not None else None
    if compensate:
        n, susp = c.n, c.suspension + k
    else:
        n, susp = c.n - k // 2, c.suspension
    return EquivariantComplex(c.flavor, c.field, n, gens, susp, c.tail_start + k, tops, cells, c.has_tower, c.name)
