"""Windowed homology modules with induced operator matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import linalg
from ..errors import SchemaError, WindowTooSmall
from ..homology import GradedHomology
from .complex import OP_DEGREES, PERIOD, PERIOD_OP, EquivariantComplex


@dataclass(frozen=True, eq=False)
class HomologyModule:
    """Homology over F on ``window`` with ``ops[op][k]: H_k -> H_{k - deg(op)}``.

    Gradings are raw; ``suspension`` converts them to absolute gradings.
    """

    flavor: str
    field: int
    window: tuple[int, int]
    dims: dict[int, int]
    ops: dict[str, dict[int, np.ndarray]]
    n: int = 0
    suspension: int = 0
    certificate: dict = field(default_factory=dict)
    name: str = ""

    @property
    def certified(self) -> bool:
        return bool(self.certificate.get("passed"))

    @property
    def mu(self) -> int:
        return self.n % 2

    @property
    def period(self) -> int:
        return PERIOD[self.flavor]

    @property
    def period_op(self) -> str:
        return PERIOD_OP[self.flavor]

    def rank(self, k: int) -> int:
        return self.dims.get(k, 0)

    def ranks(self) -> dict[int, int]:
        return {k: v for k, v in sorted(self.dims.items()) if v}

    def op(self, name: str, k: int) -> np.ndarray:
        """Matrix of ``name`` from grading ``k``; zero if outside the window."""
        m = self.ops.get(name, {}).get(k)
        if m is None:
            deg = OP_DEGREES[self.flavor][name]
            return np.zeros((self.rank(k - deg), self.rank(k)), dtype=np.int64)
        return m

    def power(self, name: str, k: int, times: int) -> np.ndarray:
        """``name^times`` from grading ``k``."""
        deg = OP_DEGREES[self.flavor][name]
        out = np.eye(self.rank(k), dtype=np.int64)
        for i in range(times):
            out = (self.op(name, k - i * deg) @ out) % self.field
        return out

    def to_graded_homology(self) -> GradedHomology:
        return GradedHomology(self.field, self.ranks(), {})

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "field": self.field,
            "window": list(self.window),
            "n": self.n,
            "suspension": self.suspension,
            "ranks": {str(k): v for k, v in self.ranks().items()},
            "ops": {
                op: {str(k): m.tolist() for k, m in sorted(ms.items()) if m.size}
                for op, ms in sorted(self.ops.items())
            },
            "certificate": self.certificate,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HomologyModule":
        try:
            dims = {int(k): int(v) for k, v in obj["ranks"].items()}
            lo, hi = obj["window"]
            deg = OP_DEGREES[obj["flavor"]]
            ops: dict = {}
            for op, ms in obj.get("ops", {}).items():
                ops[op] = {}
                for k, rows in ms.items():
                    k = int(k)
                    shape = (dims.get(k - deg[op], 0), dims.get(k, 0))
                    ops[op][k] = np.array(rows, dtype=np.int64).reshape(shape)
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError("malformed homology module: %s" % e)
        return cls(
            obj["flavor"], int(obj["field"]), (int(lo), int(hi)), dims, ops,
            int(obj.get("n", 0)), int(obj.get("suspension", 0)), dict(obj.get("certificate", {})),
        )


def _quotient(out_map, in_map, dim: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Basis of ``ker(out) / im(in)`` (as chain vectors) and a basis of ``im(in)``."""
    z = linalg.nullspace(out_map, p) if out_map is not None and out_map.shape[0] else np.eye(dim, dtype=np.int64)
    if in_map is not None and in_map.size:
        b = linalg.column_space(in_map, p)
    else:
        b = np.zeros((dim, 0), dtype=np.int64)
    return linalg.complement_basis(b, z, p), b


def _coords(vecs: np.ndarray, h: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of cycle classes ``vecs`` in the homology basis ``h``."""
    if h.shape[1] == 0 or vecs.shape[1] == 0:
        return np.zeros((h.shape[1], vecs.shape[1]), dtype=np.int64)
    x = linalg.solve(np.concatenate([h, b], axis=1), vecs, p)
    if x is None:
        raise ArithmeticError("operator does not preserve cycles")
    return x[: h.shape[1]] % p


def _certificate(flavor: str, p: int, window, dims, ops, explicit_top: int | None) -> dict:
    lo, hi = window
    period, op = PERIOD[flavor], PERIOD_OP[flavor]
    top = list(range(hi - period + 1, hi + 1))
    reasons = []
    if hi - 2 * period + 1 < lo:
        reasons.append("window shorter than two periods")
    if explicit_top is not None and hi - 2 * period + 1 <= explicit_top:
        reasons.append("top two periods overlap the explicit part")
    if not reasons:
        if sum(dims.get(k, 0) for k in top) == 0:
            reasons.append("no homology in the top period")
        for k in top:
            m = ops[op].get(k)
            a, b = dims.get(k, 0), dims.get(k - period, 0)
            if a != b or (a and (m is None or linalg.rank(m, p) != a)):
                reasons.append("%s is not bijective from grading %d" % (op, k))
    return {"passed": not reasons, "band": [top[0], top[-1]], "operator": op, "reasons": reasons}


def _assemble(flavor, p, window, dims, ops, n, suspension, explicit_top, name, require_certificate):
    cert = _certificate(flavor, p, window, dims, ops, explicit_top)
    if require_certificate and not cert["passed"]:
        raise WindowTooSmall("periodicity could not be certified on %s" % (list(window),), cert)
    return HomologyModule(flavor, p, tuple(window), dims, ops, n, suspension, cert, name)


def module_homology(
    c: EquivariantComplex, window: tuple[int, int] | None = None, require_certificate: bool = True
) -> HomologyModule:
    """Homology of ``c`` on ``window`` (default ``auto_window``) with induced operators.

    The window must start at or below every generator, and its top two
    periods must lie above the explicit part with the periodic operator
    bijective there; otherwise ``WindowTooSmall`` (unless the certificate is
    not required, as for hand-built diagnostic complexes).
    """
    lo, hi = window if window is not None else c.auto_window()
    lo, hi = int(lo), int(hi)
    emin, emax = c.explicit_range()
    if require_certificate and (c.generators or c.has_tower) and lo > emin:
        raise WindowTooSmall("window starts above the lowest generator", {"window": [lo, hi], "lowest": emin})
    p = c.field
    m = c.materialize(lo - 1, hi + 1)
    bases = {}
    for k in range(lo, hi + 1):
        bases[k] = _quotient(m.d.get(k), m.d.get(k + 1), m.count(k), p)
    dims = {k: h.shape[1] for k, (h, _) in bases.items()}
    ops: dict = {}
    for op, deg in c.op_degrees.items():
        ops[op] = {}
        for k in range(lo + deg, hi + 1):
            h, _ = bases[k]
            ht, bt = bases[k - deg]
            img = (m.ops[op][k] @ h) % p if h.shape[1] else np.zeros((m.count(k - deg), 0), dtype=np.int64)
            ops[op][k] = _coords(img, ht, bt, p)
    top = emax if (c.generators or c.tower_ops) else None
    return _assemble(c.flavor, p, (lo, hi), dims, ops, c.n, c.suspension, top, c.name, require_certificate)


def cell_cohomology(cells, lo: int, hi: int):
    """Cohomology bases of a cell model on ``[lo, hi]``: ``{k: (H, B)}`` in cochain coordinates."""
    p = cells.field
    out = {}
    for k in range(lo, hi + 1):
        dim = len(cells.basis(k))
        out[k] = _quotient(cells.d_matrix(k), cells.d_matrix(k - 1), dim, p)
    return out


def cell_module_homology(
    cells, n: int, lo: int, hi: int, suspension: int = 0, require_certificate: bool = False, name: str = ""
) -> HomologyModule:
    """Homology of a cell model: dual of its cohomology, operators transposed."""
    p = cells.field
    co = cell_cohomology(cells, lo, hi)
    dims = {k: h.shape[1] for k, (h, _) in co.items()}
    ops: dict = {}
    for op, deg in OP_DEGREES[cells.flavor].items():
        ops[op] = {}
        for k in range(lo, hi - deg + 1):
            h, _ = co[k]
            ht, bt = co[k + deg]
            img = (cells.mult_matrix(op, k) @ h) % p if h.shape[1] else np.zeros((len(cells.basis(k + deg)), 0), dtype=np.int64)
            ops[op][k + deg] = _coords(img, ht, bt, p).T.copy()
    return _assemble(cells.flavor, p, (lo, hi), dims, ops, n, suspension, cells.max_degree(), name, require_certificate)
