"""Intersection-form obstructions: the Frøyshov inequality, the 10/8 bound and Smith."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .conley import CellSet, conley_index, discretize_flow, restrict_to_fixed_subgrid
from .conley.flows import FlowSpec, SignAction
from .errors import FieldMismatch, NotNegativeDefinite, SchemaError
from .homology import GradedHomology

E8_CARTAN = np.array(
    [
        [2, -1, 0, 0, 0, 0, 0, 0],
        [-1, 2, -1, 0, 0, 0, 0, 0],
        [0, -1, 2, -1, 0, 0, 0, -1],
        [0, 0, -1, 2, -1, 0, 0, 0],
        [0, 0, 0, -1, 2, -1, 0, 0],
        [0, 0, 0, 0, -1, 2, -1, 0],
        [0, 0, 0, 0, 0, -1, 2, 0],
        [0, 0, -1, 0, 0, 0, 0, 2],
    ],
    dtype=np.int64,
)

BLOCKS = {"-E8": -E8_CARTAN}


def det_exact(q) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    a = [[int(x) for x in row] for row in q]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def leading_minors(q: np.ndarray) -> list[int]:
    return [det_exact(q[:k, :k]) for k in range(1, q.shape[0] + 1)]


@dataclass(frozen=True, eq=False)
class Block:
    name: str
    gram: np.ndarray
    even: bool = True

    def to_json(self) -> dict:
        if self.name in BLOCKS and np.array_equal(self.gram, BLOCKS[self.name]):
            return {"name": self.name}
        return {"name": self.name, "gram": self.gram.tolist(), "even": self.even}


@dataclass(frozen=True, eq=False)
class IntersectionForm:
    """``m<-1>`` plus negative-definite blocks given by integer Gram matrices."""

    m: int = 0
    blocks: tuple[Block, ...] = ()

    def __post_init__(self):
        if self.m < 0:
            raise SchemaError("m must be non-negative", {"m": self.m})
        for b in self.blocks:
            g = b.gram
            if g.ndim != 2 or g.shape[0] != g.shape[1] or not np.array_equal(g, g.T):
                raise SchemaError("block %r is not a symmetric square matrix" % b.name)
            if b.even and np.any(np.diag(g) % 2):
                raise SchemaError("block %r is declared even but has an odd diagonal entry" % b.name)
            minors = leading_minors(-g)
            if any(x <= 0 for x in minors):
                raise NotNegativeDefinite(
                    "block %r is not negative definite" % b.name, {"block": b.name, "minors_of_negation": minors}
                )

    @property
    def rank(self) -> int:
        return self.m + sum(b.gram.shape[0] for b in self.blocks)

    @property
    def signature(self) -> int:
        return -self.rank

    @property
    def exact(self) -> bool:
        """True when every block is even, so the characteristic minimum is exact."""
        return all(b.even for b in self.blocks)

    def to_json(self) -> dict:
        return {"m": self.m, "blocks": [b.to_json() for b in self.blocks]}


def catalog_block(name: str) -> Block:
    if name not in BLOCKS:
        raise SchemaError("unknown block %r" % name, {"known": sorted(BLOCKS)})
    return Block(name, BLOCKS[name].copy(), True)


def make_form(m: int = 0, blocks: Sequence = ()) -> IntersectionForm:
    """Blocks may be catalog names, Gram matrices or ``{"name", "gram", "even"}`` mappings."""
    out = []
    for i, b in enumerate(blocks):
        if isinstance(b, Block):
            out.append(b)
        elif isinstance(b, str):
            out.append(catalog_block(b))
        elif isinstance(b, Mapping):
            extra = set(b) - {"name", "gram", "even"}
            if extra:
                raise SchemaError("unknown block fields %s" % sorted(extra))
            if "gram" in b:
                g = np.array(b["gram"], dtype=np.int64)
                out.append(Block(b.get("name", "block%d" % i), g, bool(b.get("even", True))))
            else:
                out.append(catalog_block(b["name"]))
        else:
            g = np.array(b, dtype=np.int64)
            out.append(Block("block%d" % i, g, not np.any(np.diag(g) % 2)))
    return IntersectionForm(int(m), tuple(out))


def form_from_json(obj: Mapping) -> IntersectionForm:
    extra = set(obj) - {"m", "blocks"}
    if extra:
        raise SchemaError("unknown form fields %s" % sorted(extra), {"fields": sorted(extra)})
    return make_form(obj.get("m", 0), obj.get("blocks", []))


def _block_min(b: Block, bound: int) -> int:
    if b.even:
        return 0  # the zero vector is characteristic
    g = b.gram
    diag = np.diag(g) % 2
    best = None
    for c in itertools.product(range(-bound, bound + 1), repeat=g.shape[0]):
        c = np.array(c, dtype=np.int64)
        if np.any((g @ c - diag) % 2):
            continue
        v = abs(int(c @ g @ c))
        best = v if best is None else min(best, v)
    if best is None:
        raise SchemaError("no characteristic vector within the search bound", {"block": b.name, "bound": bound})
    return best


def char_min_abs_square(f: IntersectionForm, bound: int = 3) -> int:
    """Minimum of ``|c.Qc|`` over characteristic ``c``: ``m`` from the diagonal part,
    0 for each even block, a bounded search for any other block."""
    if bound < 1:
        raise SchemaError("bound must be at least 1", {"bound": bound})
    return f.m + sum(_block_min(b, bound) for b in f.blocks)


@dataclass
class FroyshovVerdict:
    allowed: bool
    h: int
    required: Fraction
    margin: Fraction
    char_min: int
    signature: int
    exact: bool
    bound: int

    def to_json(self) -> dict:
        out = {
            "verdict": "allowed" if self.allowed else "excluded",
            "h": self.h,
            "required": str(self.required),
            "margin": str(self.margin),
            "char_min_abs_square": self.char_min,
            "signature": self.signature,
            "exact": self.exact,
        }
        if not self.exact:
            out["note"] = "bounded search, not a proof (bound %d)" % self.bound
        return out


def froyshov_inequality_check(h_boundary: int, f: IntersectionForm, bound: int = 3) -> FroyshovVerdict:
    """Allowed iff ``h >= (|σ| - min |c^2|)/8``, the best case of ``(c1^2 + |σ|)/8``."""
    cmin = char_min_abs_square(f, bound)
    req = Fraction(abs(f.signature) - cmin, 8)
    return FroyshovVerdict(h_boundary >= req, h_boundary, req, h_boundary - req, cmin, f.signature, f.exact, bound)


def furuta_bound_check(b2: int, sigma: int) -> dict:
    """``b2 >= (10/8)|σ| + 2``, compared exactly."""
    if b2 < abs(sigma):
        raise SchemaError("b2 must be at least |sigma|", {"b2": b2, "sigma": sigma})
    need = Fraction(10, 8) * abs(sigma) + 2
    return {"b2": b2, "sigma": sigma, "required": str(need), "verdict": "satisfied" if b2 >= need else "violated"}


@dataclass
class SmithReport:
    satisfied: bool
    total: int
    fixed: int
    modulus: int
    note: str = ""
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "verdict": "satisfied" if self.satisfied else "violated",
            "total_dimension": self.total,
            "fixed_dimension": self.fixed,
            "field": self.modulus,
        }
        if self.note:
            out["note"] = self.note
        out.update(self.details)
        return out


def smith_inequality_check(total: GradedHomology, fixed: GradedHomology) -> SmithReport:
    """Total F_p dimension of the fixed-point homology against that of the total space."""
    if total.modulus != fixed.modulus or total.modulus == 0:
        raise FieldMismatch(
            "both homologies must be over the same prime field", {"moduli": [total.modulus, fixed.modulus]}
        )
    a, b = total.total_dimension(), fixed.total_dimension()
    note = "" if b <= a else "fixed-point total exceeds the total space: inconsistent input"
    return SmithReport(b <= a, a, b, total.modulus, note)


def smith_flow_check(
    spec: FlowSpec, action, modulus: int = 2, lower: Sequence[float] | None = None, upper: Sequence[float] | None = None
) -> SmithReport:
    """Conley index homology of a symmetric flow against that of its fixed-point subgrid."""
    t = discretize_flow(spec)
    n = CellSet.full(t) if lower is None else CellSet.from_region(t, lower, upper)
    act = action if isinstance(action, SignAction) else SignAction.from_signed(action)
    _, full = conley_index(t, n, modulus)
    sub = restrict_to_fixed_subgrid(t, act, n)
    if lower is None or not sub.shape:
        nf = CellSet.full(sub)
    else:
        keep = [i for i in range(spec.dimension) if i not in act.flipped_axes()]
        nf = CellSet.from_region(sub, [lower[i] for i in keep], [upper[i] for i in keep])
    _, fixed = conley_index(sub, nf, modulus)
    rep = smith_inequality_check(full, fixed)
    rep.details = {"total": full.to_json(), "fixed": fixed.to_json()}
    return rep
