"""Heuristic equivariant Floer complexes: a reducible tower plus irreducibles.

Gradings here are homological (``∂`` lowers them by one).  Tower generators
are named ``"T:<grading>"``; the standard tower starts at ``tail_start`` and
has ``U T_g = T_{g-2}`` (S1) or blocks ``T_{s+4k+{0,1,2}}`` with ``q``
lowering within a block and ``v T_g = T_{g-4}`` (Pin2).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .. import linalg
from ..errors import DegreeMismatch, DSquaredNonzero, FloerkitError, SchemaError

S1 = "S1"
PIN2 = "Pin2"
FLAVORS = (S1, PIN2)

OP_DEGREES = {S1: {"U": 2}, PIN2: {"q": 1, "v": 4}}
PERIOD_OP = {S1: "U", PIN2: "v"}
PERIOD = {S1: 2, PIN2: 4}


def tower_id(g: int) -> str:
    return "T:%d" % g


def parse_tower_id(name: str) -> int | None:
    if isinstance(name, str) and name.startswith("T:"):
        return int(name[2:])
    return None


def _clean(terms: Mapping[str, int] | None, p: int) -> dict[str, int]:
    out = {}
    for k, v in (terms or {}).items():
        v = int(v) % p
        if v:
            out[str(k)] = v
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class Generator:
    """An explicit (irreducible or finite-part) generator and its outgoing maps."""

    id: str
    grading: int
    d: Mapping[str, int] = field(default_factory=dict)
    ops: Mapping[str, Mapping[str, int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"id": self.id, "grading": self.grading, "d": dict(self.d)}
        for name, terms in sorted(self.ops.items()):
            out[name] = dict(terms)
        return out


@dataclass(frozen=True, eq=False)
class EquivariantComplex:
    """A graded complex over F with ``∂`` and module operators.

    ``suspension`` records grading normalizations already applied to the raw
    gradings: absolute grading = raw grading - suspension.  ``tower_ops``
    overrides the standard action of an operator on one tower generator,
    keyed ``(op, grading)``.  ``cells`` is an optional free-cell model used for
    duals and tensor products.  ``has_tower=False`` marks hand-built
    diagnostic complexes.
    """

    flavor: str
    field: int
    n: int
    generators: tuple[Generator, ...] = ()
    suspension: int = 0
    tail_start: int | None = None
    tower_ops: Mapping[tuple[str, int], Mapping[str, int]] = field(default_factory=dict)
    cells: object | None = None
    has_tower: bool = True
    name: str = ""

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise SchemaError("flavor must be one of %s" % (FLAVORS,), {"flavor": self.flavor})
        if self.flavor == PIN2 and self.field != 2:
            raise SchemaError("Pin2 complexes use F_2 coefficients", {"field": self.field})
        if self.field < 2 or any(self.field % k == 0 for k in range(2, int(self.field**0.5) + 1)):
            raise SchemaError("field characteristic must be prime", {"field": self.field})
        p = self.field
        if self.tail_start is None:
            object.__setattr__(self, "tail_start", -2 * self.n + self.suspension)
        names = set(OP_DEGREES[self.flavor])
        gens = []
        for g in self.generators:
            extra = set(g.ops) - names
            if extra:
                raise SchemaError("operators %s do not exist for %s" % (sorted(extra), self.flavor))
            gens.append(
                Generator(str(g.id), int(g.grading), _clean(g.d, p), {k: _clean(v, p) for k, v in sorted(g.ops.items()) if _clean(v, p)})
            )
        gens.sort(key=lambda g: (g.grading, g.id))
        ids = [g.id for g in gens]
        if len(set(ids)) != len(ids):
            raise SchemaError("generator ids must be unique", {"ids": ids})
        if any(parse_tower_id(i) is not None for i in ids):
            raise SchemaError("ids starting with 'T:' are reserved for the tower")
        object.__setattr__(self, "generators", tuple(gens))
        tops = {}
        for (op, g), terms in dict(self.tower_ops).items():
            if op not in names:
                raise SchemaError("unknown operator %r" % op)
            tops[(op, int(g))] = _clean(terms, p)
        object.__setattr__(self, "tower_ops", dict(sorted(tops.items())))
        self._check_degrees()

    # structure

    @property
    def period(self) -> int:
        return PERIOD[self.flavor]

    @property
    def period_op(self) -> str:
        return PERIOD_OP[self.flavor]

    @property
    def op_degrees(self) -> dict[str, int]:
        return OP_DEGREES[self.flavor]

    @property
    def mu(self) -> int:
        return self.n % 2

    @property
    def module_generator_count(self) -> int:
        return (1 if self.has_tower else 0) + len(self.generators)

    def by_id(self) -> dict[str, Generator]:
        return {g.id: g for g in self.generators}

    def is_tower_grading(self, g: int) -> bool:
        if not self.has_tower or g < self.tail_start:
            return False
        if self.flavor == S1:
            return (g - self.tail_start) % 2 == 0
        return (g - self.tail_start) % 4 != 3

    def grading_of(self, name: str) -> int:
        t = parse_tower_id(name)
        if t is not None:
            if not self.is_tower_grading(t):
                raise DegreeMismatch("no tower generator in grading %d" % t, {"target": name})
            return t
        g = self.by_id().get(name)
        if g is None:
            raise SchemaError("unknown target %r" % name, {"target": name})
        return g.grading

    def _check_degrees(self):
        degs = self.op_degrees
        for g in self.generators:
            for tgt in g.d:
                if self.grading_of(tgt) != g.grading - 1:
                    raise DegreeMismatch(
                        "boundary of %s must land in grading %d" % (g.id, g.grading - 1),
                        {"source": g.id, "target": tgt},
                    )
            for op, terms in g.ops.items():
                for tgt in terms:
                    if self.grading_of(tgt) != g.grading - degs[op]:
                        raise DegreeMismatch(
                            "%s of %s must land in grading %d" % (op, g.id, g.grading - degs[op]),
                            {"source": g.id, "target": tgt, "op": op},
                        )
        for (op, t), terms in self.tower_ops.items():
            if not self.is_tower_grading(t):
                raise DegreeMismatch("tower operator entry on a missing tower grading", {"grading": t})
            for tgt in terms:
                if self.grading_of(tgt) != t - degs[op]:
                    raise DegreeMismatch("tower operator entry has the wrong degree", {"op": op, "grading": t, "target": tgt})

    def standard_tower_image(self, op: str, g: int) -> dict[str, int]:
        s = self.tail_start
        if self.flavor == S1:
            return {tower_id(g - 2): 1} if g - 2 >= s else {}
        if op == "v":
            return {tower_id(g - 4): 1} if g - 4 >= s else {}
        off = (g - s) % 4
        return {tower_id(g - 1): 1} if off in (1, 2) else {}

    def tower_image(self, op: str, g: int) -> dict[str, int]:
        if (op, g) in self.tower_ops:
            return dict(self.tower_ops[(op, g)])
        return self.standard_tower_image(op, g)

    def explicit_range(self) -> tuple[int, int]:
        grads = [g.grading for g in self.generators]
        for (op, t), terms in self.tower_ops.items():
            grads.append(t)
        if self.has_tower:
            grads.append(self.tail_start)
        if not grads:
            return 0, 0
        return min(grads), max(grads)

    def auto_window(self) -> tuple[int, int]:
        lo, hi = self.explicit_range()
        return lo - 4, hi + 4 * (self.module_generator_count + 3)

    def with_(self, **kw) -> "EquivariantComplex":
        return replace(self, **kw)

    # materialization

    def materialize(self, lo: int, hi: int) -> "Materialized":
        """Finite slice of the complex with all generators graded in ``[lo, hi]``."""
        names: dict[int, list[str]] = {}
        for g in self.generators:
            if lo <= g.grading <= hi:
                names.setdefault(g.grading, []).append(g.id)
        if self.has_tower:
            for k in range(max(lo, self.tail_start), hi + 1):
                if self.is_tower_grading(k):
                    names.setdefault(k, []).append(tower_id(k))
        for k in names:
            names[k].sort(key=lambda x: (parse_tower_id(x) is None, x))
        pos = {k: {nm: i for i, nm in enumerate(v)} for k, v in names.items()}
        gens = self.by_id()
        p = self.field

        def image(name: str, op: str) -> dict[str, int]:
            t = parse_tower_id(name)
            if op == "d":
                return {} if t is not None else dict(gens[name].d)
            if t is not None:
                return self.tower_image(op, t)
            return dict(gens[name].ops.get(op, {}))

        def matrix(op: str, deg: int) -> dict[int, np.ndarray]:
            out = {}
            for k in range(lo, hi + 1):
                src, tgt = names.get(k, []), names.get(k - deg, [])
                if k - deg < lo:
                    continue
                m = np.zeros((len(tgt), len(src)), dtype=np.int64)
                for j, nm in enumerate(src):
                    for t, c in image(nm, op).items():
                        i = pos.get(k - deg, {}).get(t)
                        if i is not None:
                            m[i, j] = (m[i, j] + c) % p
                out[k] = m
            return out

        ops = {op: matrix(op, deg) for op, deg in self.op_degrees.items()}
        return Materialized(lo, hi, p, names, matrix("d", 1), ops)

    def validate(self, window: tuple[int, int] | None = None) -> None:
        """Check the chain-level relations on a window: ``∂² = 0``, ``∂`` commutes with
        every operator, ``q³ = 0`` and ``qv = vq``."""
        lo, hi = window or self.auto_window()
        m = self.materialize(lo - 2, hi + 2)
        p = self.field

        def comp(a: np.ndarray, b: np.ndarray) -> np.ndarray:
            return (a @ b) % p

        def fail(exc, msg, k):
            raise exc(msg, {"grading": k})

        for k in range(lo + 2, hi + 1):
            if k - 1 in m.d and k in m.d and np.any(comp(m.d[k - 1], m.d[k])):
                fail(DSquaredNonzero, "∂² ≠ 0 from grading %d" % k, k)
            for op, deg in self.op_degrees.items():
                a, b = m.ops[op].get(k), m.d.get(k - deg)
                c, e = m.d.get(k), m.ops[op].get(k - 1)
                if a is None or b is None or c is None or e is None:
                    continue
                if np.any((comp(b, a) - comp(e, c)) % p):
                    fail(FloerkitError, "∂ does not commute with %s from grading %d" % (op, k), k)
        if self.flavor == PIN2:
            q, v = m.ops["q"], m.ops["v"]
            for k in range(lo + 6, hi + 1):
                if all(j in q for j in (k, k - 1, k - 2)) and np.any(comp(q[k - 2], comp(q[k - 1], q[k]))):
                    fail(FloerkitError, "q³ ≠ 0 from grading %d" % k, k)
                if k in q and k - 1 in v and k in v and k - 4 in q:
                    if np.any((comp(v[k - 1], q[k]) - comp(q[k - 4], v[k])) % p):
                        fail(FloerkitError, "qv ≠ vq from grading %d" % k, k)

    def to_json(self) -> dict:
        out = {
            "flavor": self.flavor,
            "field": self.field,
            "n": self.n,
            "suspension": self.suspension,
            "tail_start": self.tail_start,
            "has_tower": self.has_tower,
            "generators": [g.to_json() for g in self.generators],
            "tower_ops": [
                {"op": op, "grading": g, "image": dict(terms)} for (op, g), terms in self.tower_ops.items()
            ],
        }
        if self.name:
            out["name"] = self.name
        if self.cells is not None:
            out["cells"] = self.cells.to_json()
        return out


@dataclass
class Materialized:
    lo: int
    hi: int
    field: int
    names: dict[int, list[str]]
    d: dict[int, np.ndarray]
    ops: dict[str, dict[int, np.ndarray]]

    def count(self, k: int) -> int:
        return len(self.names.get(k, []))


def _irreducibles(items: Iterable, op_names: Sequence[str]) -> list[Generator]:
    gens = []
    for i, it in enumerate(items):
        if isinstance(it, Generator):
            gens.append(it)
            continue
        if isinstance(it, Mapping):
            gid = it.get("id", "x%d" % (i + 1))
            ops = {op: it.get(op, {}) for op in op_names if it.get(op)}
            gens.append(Generator(gid, int(it["grading"]), it.get("d", {}), ops))
        else:
            grading, d, *rest = it
            ops = {}
            for op, terms in zip(op_names, rest):
                if terms:
                    ops[op] = terms
            gens.append(Generator("x%d" % (i + 1), int(grading), d, ops))
    return gens


def build_s1_complex(n: int, irreducibles: Sequence = (), field: int = 2, name: str = "") -> EquivariantComplex:
    """Tower from grading ``-2n`` plus irreducibles ``(grading, ∂-targets, U-targets)``."""
    from .cells import cells_from_heuristic

    c = EquivariantComplex(S1, field, n, tuple(_irreducibles(irreducibles, ["U"])), name=name)
    c.validate()
    return c.with_(cells=cells_from_heuristic(c))


def build_pin2_complex(n: int, irreducibles: Sequence = (), name: str = "") -> EquivariantComplex:
    """Tower from grading ``-2n`` plus irreducibles ``(grading, ∂, q, v targets)`` over F_2."""
    from .cells import cells_from_heuristic

    c = EquivariantComplex(PIN2, 2, n, tuple(_irreducibles(irreducibles, ["q", "v"])), name=name)
    c.validate()
    return c.with_(cells=cells_from_heuristic(c))


def complex_from_json(obj: Mapping, allow_unknown: bool = False) -> EquivariantComplex:
    from .cells import CellModel, cells_from_heuristic

    known = {"flavor", "field", "n", "suspension", "tail_start", "has_tower", "generators", "irreducibles", "tower_ops", "cells", "name"}
    extra = set(obj) - known
    if extra and not allow_unknown:
        raise SchemaError("unknown fields %s" % sorted(extra), {"fields": sorted(extra)})
    flavor = obj.get("flavor")
    if flavor not in FLAVORS:
        raise SchemaError("flavor must be one of %s" % (FLAVORS,), {"flavor": flavor})
    if "n" not in obj:
        raise SchemaError("missing field 'n'")
    ops = list(OP_DEGREES[flavor])
    gkeys = {"id", "grading", "d"} | set(ops)
    items = list(obj.get("generators", [])) + list(obj.get("irreducibles", []))
    for it in items:
        bad = set(it) - gkeys
        if bad and not allow_unknown:
            raise SchemaError("unknown generator fields %s" % sorted(bad), {"fields": sorted(bad)})
        if "grading" not in it:
            raise SchemaError("generator without grading", {"generator": it})
    tower_ops = {}
    for e in obj.get("tower_ops", []):
        tower_ops[(e["op"], int(e["grading"]))] = e.get("image", {})
    c = EquivariantComplex(
        flavor,
        int(obj.get("field", 2)),
        int(obj["n"]),
        tuple(_irreducibles(items, ops)),
        int(obj.get("suspension", 0)),
        obj.get("tail_start"),
        tower_ops,
        None,
        bool(obj.get("has_tower", True)),
        str(obj.get("name", "")),
    )
    c.validate()
    if obj.get("cells") is not None:
        return c.with_(cells=CellModel.from_json(obj["cells"]))
    return c.with_(cells=cells_from_heuristic(c))
