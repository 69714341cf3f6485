"""Index pairs, their verification and the cubical Conley index homology."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..errors import CollarTooThin, IsolationViolated
from ..homology import ExactMatrix, GradedChainComplex, GradedHomology, homology_of_complex
from .system import (
    CellSet,
    TransitionSystem,
    effective,
    forward_closure,
    invariant_part,
    isolation_witnesses,
)


@dataclass
class ConditionResult:
    name: str
    passed: bool
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witnesses": self.witnesses}


@dataclass
class VerificationReport:
    conditions: list[ConditionResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> ConditionResult:
        return next(c for c in self.conditions if c.name == name)

    def to_json(self) -> dict:
        return {"passed": self.passed, "conditions": [c.to_json() for c in self.conditions]}


@dataclass(frozen=True, eq=False)
class IndexPair:
    """``(N', L)`` with ``L`` the exit set; ``invariant`` is ``S = N' - L`` as constructed."""

    n_prime: CellSet
    exit_set: CellSet
    invariant: CellSet
    report: VerificationReport

    @property
    def verified(self) -> bool:
        return self.report.passed

    def __post_init__(self):
        if not self.exit_set.issubset(self.n_prime):
            raise ValueError("exit set must lie inside N'")


_WITNESS_LIMIT = 10


def verify_index_pair(t: TransitionSystem, p: IndexPair, n: CellSet) -> VerificationReport:
    """Check the combinatorial analogs of the three index pair conditions.

    (i) ``Inv(N' - L) = Inv(n)`` and no cell of it is adjacent to a cell
    outside ``n`` or to the box boundary (a one-cell collar); (ii) every edge leaving ``N'`` starts in ``L``;
    (iii) every edge from ``L`` that stays in ``N'`` ends in ``L``.
    """
    npr, ex = p.n_prime.mask, p.exit_set.mask
    core = CellSet(npr & ~ex)
    inv_core = invariant_part(t, core)
    inv_n = invariant_part(t, n)
    w1 = []
    if inv_core != inv_n:
        diff = np.flatnonzero(inv_core.mask ^ inv_n.mask)
        w1 += [{"cell": int(c), "reason": "invariant parts differ"} for c in diff[:_WITNESS_LIMIT]]
    touching = inv_core.mask & (t.neighbor_mask(~effective(t, n)) | t.boundary_mask())
    w1 += [{"cell": int(c), "reason": "no collar inside n"} for c in np.flatnonzero(touching)[:_WITNESS_LIMIT]]

    coo = t.adjacency.tocoo()
    src, dst = coo.row, coo.col
    leaving = npr[src] & ~npr[dst] & ~ex[src]
    w2 = [[int(a), int(b)] for a, b in zip(src[leaving][:_WITNESS_LIMIT], dst[leaving][:_WITNESS_LIMIT])]
    back = ex[src] & npr[dst] & ~ex[dst]
    w3 = [[int(a), int(b)] for a, b in zip(src[back][:_WITNESS_LIMIT], dst[back][:_WITNESS_LIMIT])]
    return VerificationReport(
        [
            ConditionResult("isolation", not w1, w1),
            ConditionResult("exit_set", not w2, w2),
            ConditionResult("positive_invariance", not w3, w3),
        ]
    )


def construct_index_pair(t: TransitionSystem, n: CellSet) -> IndexPair:
    """``N'`` = forward closure of ``S = Inv(n)`` inside ``n``, ``L = N' - S``."""
    bad = isolation_witnesses(t, n)
    if bad:
        raise IsolationViolated(
            "invariant part touches the boundary of the candidate neighborhood",
            {"cells": bad[:_WITNESS_LIMIT], "coords": [list(t.coords(c)) for c in bad[:_WITNESS_LIMIT]]},
        )
    s = invariant_part(t, n)
    npr = forward_closure(t, s, n)
    pair = IndexPair(npr, npr - s, s, VerificationReport([]))
    report = verify_index_pair(t, pair, n)
    pair = IndexPair(npr, npr - s, s, report)
    exits = report.condition("exit_set")
    if not exits.passed:
        raise CollarTooThin(
            "an invariant cell exits the neighborhood in one step; increase resolution or enlarge N",
            {"edges": exits.witnesses},
        )
    if not report.passed:
        # the construction guarantees (i) and (iii); reaching here is a bug, not user error
        raise AssertionError("constructed index pair failed verification: %s" % report.to_json())
    return pair


def _faces_of_cube(coords: tuple[int, ...]):
    """All elementary faces of the full cube at ``coords`` as ``(vertex, extent)`` pairs."""
    n = len(coords)
    for extent in itertools.product((0, 1), repeat=n):
        free = [i for i in range(n) if not extent[i]]
        for offs in itertools.product((0, 1), repeat=len(free)):
            v = list(coords)
            for i, o in zip(free, offs):
                v[i] += o
            yield tuple(v), extent


def _face_boundary(face):
    """Signed boundary of an elementary cube ``(vertex, extent)``."""
    v, ext = face
    out = []
    sign = 1
    for i, e in enumerate(ext):
        if not e:
            continue
        sub = ext[:i] + (0,) + ext[i + 1:]
        up = v[:i] + (v[i] + 1,) + v[i + 1:]
        out.append(((up, sub), sign))
        out.append(((v, sub), -sign))
        sign = -sign
    return out


def relative_cubical_complex(t: TransitionSystem, p: IndexPair, modulus: int = 0) -> GradedChainComplex:
    """Chain complex of cubical faces of ``N'`` modulo the faces of ``L``.

    Generators are the faces of cubes in ``S = N' - L`` that are not faces of
    any cube in ``L``, graded by dimension, with the signed cubical boundary.
    """
    core = p.n_prime - p.exit_set
    exit_faces = set()
    for c in p.exit_set.indices():
        exit_faces.update(_faces_of_cube(t.coords(c)))
    gens = set()
    for c in core.indices():
        for f in _faces_of_cube(t.coords(c)):
            if f not in exit_faces:
                gens.add(f)
    ordered = sorted(gens, key=lambda f: (sum(f[1]), f[0], f[1]))
    by_dim: dict[int, list] = {}
    for f in ordered:
        by_dim.setdefault(sum(f[1]), []).append(f)
    pos = {g: {f: i for i, f in enumerate(fs)} for g, fs in by_dim.items()}
    mats = {}
    for g, fs in by_dim.items():
        if g == 0 or g - 1 not in by_dim:
            continue
        rows = len(by_dim[g - 1])
        data = np.zeros((rows, len(fs)), dtype=object if not modulus else np.int64)
        lower = pos[g - 1]
        for j, f in enumerate(fs):
            for h, s in _face_boundary(f):
                i = lower.get(h)
                if i is not None:
                    data[i, j] += s
        mats[g] = ExactMatrix(data, modulus)
    gens_list = [(_face_id(f), sum(f[1])) for f in ordered]
    return GradedChainComplex(gens_list, mats, modulus)


def _face_id(face) -> str:
    v, ext = face
    return "|".join("%d%s" % (x, "+" if e else "") for x, e in zip(v, ext)) or "pt"


def conley_index_homology(t: TransitionSystem, p: IndexPair, modulus: int = 0) -> GradedHomology:
    """Relative homology of ``(N', L)``: reduced homology of the Conley index ``N'/L``."""
    if not p.verified:
        if not p.report.condition("exit_set").passed:
            raise CollarTooThin("index pair fails the exit set condition", p.report.to_json())
        raise IsolationViolated("index pair is not verified", p.report.to_json())
    return homology_of_complex(relative_cubical_complex(t, p, modulus))


def conley_index(t: TransitionSystem, n: CellSet, modulus: int = 0) -> tuple[IndexPair, GradedHomology]:
    pair = construct_index_pair(t, n)
    return pair, conley_index_homology(t, pair, modulus)
