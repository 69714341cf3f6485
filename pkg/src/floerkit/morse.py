"""Morse complexes from critical-point and flow-line data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .conley.index import conley_index
from .conley.system import CellSet, TransitionSystem
from .errors import DegreeMismatch, DSquaredNonzero, SchemaError
from .homology import ExactMatrix, GradedChainComplex, GradedHomology, homology_of_complex


@dataclass(frozen=True)
class MorseData:
    """Critical points with Morse indices and signed counts of connecting flow lines.

    ``counts`` maps ``(x, y)`` to ``n_xy``; only pairs with
    ``index(x) == index(y) + 1`` are allowed.  ``compact`` is the user's
    assertion that the connecting set is closed under broken limits.
    """

    points: tuple[tuple[str, int], ...]
    counts: Mapping[tuple[str, str], int] = field(default_factory=dict)
    compact: bool = True

    def __post_init__(self):
        pts = tuple((str(n), int(k)) for n, k in self.points)
        names = [n for n, _ in pts]
        if len(set(names)) != len(names):
            raise SchemaError("critical point names must be unique", {"names": names})
        if any(k < 0 for _, k in pts):
            raise SchemaError("Morse indices are non-negative")
        index = dict(pts)
        counts = {}
        for (x, y), c in dict(self.counts).items():
            if x not in index or y not in index:
                raise SchemaError("flow line between unknown points", {"pair": [x, y]})
            if index[x] != index[y] + 1:
                raise DegreeMismatch(
                    "flow-line counts need index difference one", {"pair": [x, y], "indices": [index[x], index[y]]}
                )
            if int(c):
                counts[(x, y)] = int(c)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "counts", counts)

    def index_of(self, name: str) -> int:
        return dict(self.points)[name]

    def to_json(self) -> dict:
        return {
            "points": [{"name": n, "index": k} for n, k in self.points],
            "counts": [{"from": x, "to": y, "count": c} for (x, y), c in sorted(self.counts.items())],
            "compact": self.compact,
        }


def morse_boundary(d: MorseData) -> GradedChainComplex:
    """One generator per critical point; ``∂x = Σ_y n_xy y``.  No ``∂² = 0`` check."""
    by_index: dict[int, list[str]] = {}
    for name, k in d.points:
        by_index.setdefault(k, []).append(name)
    mats = {}
    for k, srcs in by_index.items():
        tgts = by_index.get(k - 1)
        if not tgts:
            continue
        data = np.zeros((len(tgts), len(srcs)), dtype=object)
        for j, x in enumerate(srcs):
            for i, y in enumerate(tgts):
                data[i, j] = d.counts.get((x, y), 0)
        mats[k] = ExactMatrix(data)
    return GradedChainComplex(list(d.points), mats, check=False)


@dataclass
class DSquaredReport:
    passed: bool
    witnesses: list[dict]
    compactness_consistent: bool
    note: str

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "witnesses": self.witnesses,
            "compactness_consistent": self.compactness_consistent,
            "note": self.note,
        }


def check_d_squared(d: MorseData) -> DSquaredReport:
    """Compose consecutive boundaries; each nonzero entry is a witness ``(x, z, value)``."""
    c = morse_boundary(d)
    witnesses = []
    for k in sorted(c.boundaries):
        if k - 1 not in c.boundaries:
            continue
        comp = (c.boundaries[k - 1] @ c.boundaries[k]).tolist()
        srcs, tgts = c.ids(k), c.ids(k - 2)
        for i, row in enumerate(comp):
            for j, v in enumerate(row):
                if v:
                    witnesses.append({"x": srcs[j], "z": tgts[i], "value": v})
    if not witnesses:
        return DSquaredReport(True, [], True, "boundary squares to zero")
    note = (
        "boundary does not square to zero; the connecting set is not closed under broken "
        "limits, so the compactness flag is inconsistent"
        if d.compact
        else "boundary does not square to zero, as allowed for a non-compact connecting set"
    )
    return DSquaredReport(False, witnesses, not d.compact, note)


def morse_homology(d: MorseData) -> GradedHomology:
    report = check_d_squared(d)
    if not report.passed:
        raise DSquaredNonzero(report.note, report.witnesses)
    return homology_of_complex(morse_boundary(d))


@dataclass
class ComparisonReport:
    morse: GradedHomology
    conley: GradedHomology
    match: bool
    diff: dict[int, tuple[int, int]]

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "morse": self.morse.to_json(),
            "conley": self.conley.to_json(),
            "diff": {str(g): {"morse": a, "conley": b} for g, (a, b) in sorted(self.diff.items())},
        }


def floer_comparison(d: MorseData, t: TransitionSystem, n: CellSet) -> ComparisonReport:
    """Morse homology against the homology of the Conley index of ``Inv(n)``."""
    hm = morse_homology(d)
    _, hc = conley_index(t, n)
    grads = sorted(set(hm.gradings()) | set(hc.gradings()))
    diff = {}
    for g in grads:
        a, b = hm.rank(g), hc.rank(g)
        if a != b or hm.torsion.get(g) != hc.torsion.get(g):
            diff[g] = (a, b)
    return ComparisonReport(hm, hc, not diff, diff)


def example_non_compact() -> MorseData:
    """A maximum, a saddle and a minimum joined in a chain by single flow lines."""
    return MorseData((("x", 2), ("y", 1), ("z", 0)), {("x", "y"): 1, ("y", "z"): 1}, compact=True)


def example_double_well() -> MorseData:
    """Downward gradient of a double well on the line: a local maximum between two minima."""
    return MorseData((("s", 1), ("m-", 0), ("m+", 0)), {("s", "m-"): 1, ("s", "m+"): -1})


def morse_from_json(obj: Mapping) -> MorseData:
    pts = [(p["name"], p["index"]) for p in obj.get("points", [])]
    counts = {(c["from"], c["to"]): c["count"] for c in obj.get("counts", [])}
    return MorseData(tuple(pts), counts, bool(obj.get("compact", True)))
