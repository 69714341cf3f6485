"""Free-cell (semi-free) models of equivariant complexes.

A model is a free module over the cochain algebra ``B`` of the classifying
space with a differential ``d`` raising cochain degree by one:

* S1:   ``B = F_p[U]``, ``|U| = 2``, ``dU = 0``;
* Pin2: ``B = F_2[q, u]``, ``|q| = 1``, ``|u| = 2``, ``du = q^3``; ``v = u^2``.

The reducible contributes one free generator ``T``; each irreducible
contributes a block resolving a free orbit.  Homology in grading ``k`` is
the dual of cohomology in degree ``k``, with ``q``, ``v`` (or ``U``) acting
by the transposes of multiplication.  Duals are ``Hom_B(-, B)`` and disjoint
unions are tensor products over ``B``, which is what makes these models
(rather than the heuristic complexes) the carrier for both operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .. import linalg
from ..errors import DSquaredNonzero, SchemaError
from .complex import PIN2, S1, EquivariantComplex, parse_tower_id

Mono = tuple[int, int]  # exponents of (q, u); S1 uses (0, b) for U^b
Terms = dict[tuple[int, int, str], int]

MULT = {S1: {"U": (0, 1)}, PIN2: {"q": (1, 0), "v": (0, 2)}}


def mono_degree(a: int, b: int) -> int:
    return a + 2 * b


@lru_cache(maxsize=None)
def monomials(flavor: str, r: int) -> tuple[Mono, ...]:
    if r < 0:
        return ()
    if flavor == S1:
        return ((0, r // 2),) if r % 2 == 0 else ()
    return tuple((r - 2 * b, b) for b in range(r // 2 + 1))


def mono_d(flavor: str, a: int, b: int) -> dict[Mono, int]:
    """Differential of a monomial in ``B``."""
    if flavor == PIN2 and b % 2:
        return {(a + 3, b - 1): 1}
    return {}


@dataclass(frozen=True, eq=False)
class CellModel:
    flavor: str
    field: int
    degrees: Mapping[str, int]
    d: Mapping[str, Mapping[tuple[int, int, str], int]] = field(default_factory=dict)

    def __post_init__(self):
        p = self.field
        degs = {str(k): int(v) for k, v in self.degrees.items()}
        degs = dict(sorted(degs.items(), key=lambda kv: (kv[1], kv[0])))
        dd = {}
        for g in degs:
            terms = {}
            for (a, b, h), c in dict(self.d.get(g, {})).items():
                if h not in degs:
                    raise SchemaError("cell differential hits unknown generator %r" % h)
                if mono_degree(a, b) + degs[h] != degs[g] + 1:
                    raise SchemaError("cell differential of %r has the wrong degree" % g)
                if self.flavor == S1 and a:
                    raise SchemaError("S1 cells have no q")
                c = int(c) % p
                if c:
                    key = (int(a), int(b), h)
                    terms[key] = (terms.get(key, 0) + c) % p
            dd[g] = {k: v for k, v in sorted(terms.items()) if v}
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "d", dd)
        object.__setattr__(self, "_cache", {})

    # cochain complex

    def min_degree(self) -> int:
        return min(self.degrees.values()) if self.degrees else 0

    def max_degree(self) -> int:
        return max(self.degrees.values()) if self.degrees else 0

    def basis(self, k: int) -> list[tuple[int, int, str]]:
        key = ("basis", k)
        if key not in self._cache:
            out = []
            for g, dg in self.degrees.items():
                for a, b in monomials(self.flavor, k - dg):
                    out.append((a, b, g))
            self._cache[key] = out
        return self._cache[key]

    def _index(self, k: int) -> dict:
        key = ("index", k)
        if key not in self._cache:
            self._cache[key] = {e: i for i, e in enumerate(self.basis(k))}
        return self._cache[key]

    def d_matrix(self, k: int) -> np.ndarray:
        """Differential ``C^k -> C^{k+1}``."""
        key = ("d", k)
        if key in self._cache:
            return self._cache[key]
        src, tgt = self.basis(k), self._index(k + 1)
        p = self.field
        m = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for j, (a, b, g) in enumerate(src):
            for (a2, b2), c in mono_d(self.flavor, a, b).items():
                m[tgt[(a2, b2, g)], j] += c
            sign = -1 if (mono_degree(a, b) % 2 and p != 2) else 1
            for (a2, b2, h), c in self.d[g].items():
                m[tgt[(a + a2, b + b2, h)], j] += sign * c
        m %= p
        self._cache[key] = m
        return m

    def mult_matrix(self, op: str, k: int) -> np.ndarray:
        """Multiplication by ``op`` from ``C^k``."""
        da, db = MULT[self.flavor][op]
        src, tgt = self.basis(k), self._index(k + mono_degree(da, db))
        m = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for j, (a, b, g) in enumerate(src):
            m[tgt[(a + da, b + db, g)], j] = 1
        return m

    def check(self, hi: int | None = None) -> None:
        hi = self.max_degree() + 8 if hi is None else hi
        for k in range(self.min_degree(), hi):
            dd = (self.d_matrix(k + 1) @ self.d_matrix(k)) % self.field
            if dd.size and dd.any():
                raise DSquaredNonzero("cell differential squares to a nonzero map in degree %d" % k, {"degree": k})

    def is_valid(self, hi: int | None = None) -> bool:
        try:
            self.check(hi)
        except DSquaredNonzero:
            return False
        return True

    # constructions

    def shifted(self, k: int) -> "CellModel":
        return CellModel(self.flavor, self.field, {g: v + k for g, v in self.degrees.items()}, self.d)

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "field": self.field,
            "generators": [{"name": g, "degree": v} for g, v in self.degrees.items()],
            "d": [
                {"source": g, "target": h, "q": a, "u": b, "coef": c}
                for g, terms in self.d.items()
                for (a, b, h), c in terms.items()
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "CellModel":
        degs = {e["name"]: int(e["degree"]) for e in obj["generators"]}
        d: dict = {g: {} for g in degs}
        for e in obj.get("d", []):
            d[e["source"]][(int(e.get("q", 0)), int(e.get("u", 0)), e["target"])] = int(e["coef"])
        m = cls(obj["flavor"], int(obj["field"]), degs, d)
        m.check()
        return m


def dual_cells(m: CellModel) -> CellModel:
    """``Hom_B(M, B)``: degrees negated, ``d g* = Σ_h (-1)^{|g|+1} β_{h,g} h*``."""
    p = m.field
    degs = {g + "^": -v for g, v in m.degrees.items()}
    d: dict = {g + "^": {} for g in m.degrees}
    for h, terms in m.d.items():
        for (a, b, g), c in terms.items():
            sign = -1 if (m.degrees[g] + 1) % 2 else 1
            key = (a, b, h + "^")
            d[g + "^"][key] = (d[g + "^"].get(key, 0) + sign * c) % p
    return CellModel(m.flavor, p, degs, d)


def tensor_cells(m1: CellModel, m2: CellModel) -> CellModel:
    """Tensor product over ``B`` with the Koszul sign ``(-1)^{|g|}``."""
    p = m1.field
    degs = {}
    d = {}
    for g, dg in m1.degrees.items():
        for h, dh in m2.degrees.items():
            name = "(%s)*(%s)" % (g, h)
            degs[name] = dg + dh
            terms: dict = {}
            for (a, b, g2), c in m1.d[g].items():
                key = (a, b, "(%s)*(%s)" % (g2, h))
                terms[key] = (terms.get(key, 0) + c) % p
            sign = -1 if dg % 2 else 1
            for (a, b, h2), c in m2.d[h].items():
                key = (a, b, "(%s)*(%s)" % (g, h2))
                terms[key] = (terms.get(key, 0) + sign * c) % p
            d[name] = terms
    return CellModel(m1.flavor, p, degs, d)


def _block(flavor: str, x: str, k: int, degs: dict, d: dict) -> None:
    if flavor == S1:
        degs[x + ".1"], degs[x + ".e"] = k, k + 1
        d[x + ".1"] = {}
        d[x + ".e"] = {(0, 1, x + ".1"): 1}
    else:
        degs[x + ".1"], degs[x + ".q"] = k, k
        degs[x + ".u"], degs[x + ".qu"] = k + 1, k + 1
        d[x + ".1"] = {}
        d[x + ".q"] = {(1, 0, x + ".1"): 1}
        d[x + ".u"] = {(0, 1, x + ".1"): 1, (2, 0, x + ".q"): 1}
        d[x + ".qu"] = {(1, 0, x + ".u"): 1, (0, 1, x + ".q"): 1}


def _add(d: dict, src: str, key, c: int, p: int) -> None:
    d[src][key] = (d[src].get(key, 0) + c) % p


def cells_from_heuristic(c: EquivariantComplex) -> CellModel | None:
    """Free-cell model of a heuristic complex built from the supported motifs.

    Supported relations: ``∂x`` hitting the tower bottom or an explicit
    generator one degree down; ``q x = y`` (Pin2) and ``U x = y`` (S1)
    between explicit generators; ``U T_bottom = x`` (S1).  Anything else
    returns None (the complex still has homology, but no dual or tensor).
    """
    if not c.has_tower:
        return None
    f, p, s = c.flavor, c.field, c.tail_start
    degs: dict = {"T": s}
    d: dict = {"T": {}}
    for g in c.generators:
        _block(f, g.id, g.grading, degs, d)
    ids = {g.id for g in c.generators}
    for (op, t), terms in c.tower_ops.items():
        if f == S1 and op == "U" and t == s and all(x in ids for x in terms):
            for x, coef in terms.items():
                _add(d, x + ".e", (0, 0, "T"), -coef, p)
            continue
        return None
    for g in c.generators:
        x = g.id
        for tgt, coef in g.d.items():
            tg = parse_tower_id(tgt)
            if tg is not None:
                if tg != s:
                    return None
                _add(d, "T", (0, 0, x + ".1"), coef, p)
            elif f == S1:
                _add(d, tgt + ".1", (0, 0, x + ".1"), coef, p)
                _add(d, tgt + ".e", (0, 0, x + ".e"), -coef, p)
            else:
                for part in (".1", ".q", ".u", ".qu"):
                    _add(d, tgt + part, (0, 0, x + part), coef, p)
        for op, terms in g.ops.items():
            for tgt, coef in terms.items():
                if parse_tower_id(tgt) is not None:
                    return None
                if f == S1 and op == "U":
                    _add(d, tgt + ".e", (0, 0, x + ".1"), -coef, p)
                elif f == PIN2 and op == "q":
                    _add(d, tgt + ".q", (0, 0, x + ".1"), coef, p)
                    _add(d, tgt + ".u", (1, 0, x + ".q"), coef, p)
                    _add(d, tgt + ".qu", (0, 0, x + ".u"), coef, p)
                else:
                    return None
    m = CellModel(f, p, degs, d)
    return m if m.is_valid() else None
