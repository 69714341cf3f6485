"""Exact homology of finitely generated graded chain complexes.

Coefficients are the integers (``modulus == 0``, arbitrary precision) or a
prime field F_p (``modulus == p``).  Boundary maps lower the grading by one.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .errors import DegreeMismatch, DSquaredNonzero


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    """An exact integer or F_p matrix.

    ``data`` is an object array of Python ints for Z (no overflow) and an
    ``int64`` array reduced into ``[0, p)`` for F_p.
    """

    data: np.ndarray
    modulus: int = 0

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if self.modulus:
            a = linalg.reduce_mod(a, self.modulus)
        else:
            a = np.array([[int(x) for x in row] for row in a.tolist()], dtype=object).reshape(a.shape)
        object.__setattr__(self, "data", a)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], modulus: int = 0, shape=None):
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        return cls(np.array(rows, dtype=object).reshape(shape), modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: int = 0):
        return cls(np.zeros((rows, cols), dtype=object if not modulus else np.int64), modulus)

    @classmethod
    def identity(cls, n: int, modulus: int = 0):
        m = np.zeros((n, n), dtype=object if not modulus else np.int64)
        for i in range(n):
            m[i, i] = 1
        return cls(m, modulus)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.modulus != other.modulus:
            raise ValueError("coefficient mismatch")
        if self.cols != other.rows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return ExactMatrix.zeros(self.rows, other.cols, self.modulus)
        return ExactMatrix(self.data.dot(other.data), self.modulus)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.data.T.copy(), self.modulus)

    def is_zero(self) -> bool:
        return not any(x != 0 for x in self.data.flat)

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data.tolist()]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.modulus == other.modulus
            and self.shape == other.shape
            and self.tolist() == other.tolist()
        )

    def __repr__(self) -> str:
        ring = "Z" if not self.modulus else "F_%d" % self.modulus
        return "ExactMatrix(%s, %s)" % (ring, self.tolist())


def _pick_pivot(a: list[list[int]], t: int):
    best = None
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best  # a unit is minimal, and the first one wins ties
    return best


def smith_normal_form(m: ExactMatrix, transforms: bool = True):
    """Smith normal form over the integers.

    Returns ``(diagonal, left, right)`` with ``left @ m @ right`` diagonal,
    ``diagonal[0] | diagonal[1] | ...`` all non-negative and both transforms
    unimodular.  Pivots are the smallest absolute value, ties broken by the
    lowest (row, column) index.  With ``transforms=False`` the transforms are
    not tracked and returned as ``None``.
    """
    if m.modulus:
        raise ValueError("smith_normal_form needs integer coefficients")
    rows, cols = m.shape
    a = m.tolist()
    left = [[int(i == j) for j in range(rows)] for i in range(rows)] if transforms else []
    right = [[int(i == j) for j in range(cols)] for i in range(cols)] if transforms else []

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if transforms:
            left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        if transforms:
            left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, k):
        for row in a:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        piv = _pick_pivot(a, t)
        if piv is None:
            break
        _, i, j = piv
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # a remainder survived: move the smallest entry of row/col t to the corner
                cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            if abs(a[t][t]) == 1:
                break
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if transforms:
                left[t] = [-x for x in left[t]]
        t += 1

    diag = [a[k][k] for k in range(min(rows, cols))]
    if not transforms:
        return diag, None, None
    return (
        diag,
        ExactMatrix.from_rows(left, shape=(rows, rows)),
        ExactMatrix.from_rows(right, shape=(cols, cols)),
    )


def integer_rank_and_torsion(m: ExactMatrix) -> tuple[int, list[int]]:
    diag, _, _ = smith_normal_form(m, transforms=False)
    nz = [d for d in diag if d]
    return len(nz), [d for d in nz if d > 1]


@dataclass(frozen=True)
class GradedHomology:
    """Per-grading Betti numbers (and torsion coefficients over Z).

    Zero entries are omitted so equal homologies compare equal.
    """

    modulus: int
    ranks: Mapping[int, int] = field(default_factory=dict)
    torsion: Mapping[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        ranks = {int(g): int(r) for g, r in self.ranks.items() if r}
        tors = {int(g): tuple(sorted(int(x) for x in t)) for g, t in self.torsion.items() if t}
        for g, t in tors.items():
            if any(x <= 1 for x in t):
                raise ValueError("torsion coefficients must exceed 1")
            if any(t[k + 1] % t[k] for k in range(len(t) - 1)):
                raise ValueError("torsion coefficients must form a divisibility chain")
        if self.modulus and tors:
            raise ValueError("field coefficients carry no torsion")
        object.__setattr__(self, "ranks", dict(sorted(ranks.items())))
        object.__setattr__(self, "torsion", dict(sorted(tors.items())))

    def rank(self, g: int) -> int:
        return self.ranks.get(g, 0)

    def total_dimension(self) -> int:
        return sum(self.ranks.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (g % 2) * r for g, r in self.ranks.items())

    def gradings(self) -> list[int]:
        return sorted(set(self.ranks) | set(self.torsion))

    def to_json(self) -> dict:
        return {
            "field": self.modulus,
            "ranks": {str(g): r for g, r in self.ranks.items()},
            "torsion": {str(g): list(t) for g, t in self.torsion.items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "GradedHomology":
        return cls(
            int(obj.get("field", 0)),
            {int(g): int(r) for g, r in obj.get("ranks", {}).items()},
            {int(g): tuple(t) for g, t in obj.get("torsion", {}).items()},
        )


class GradedChainComplex:
    """A finitely generated chain complex with integer gradings.

    ``boundaries[g]`` is the matrix of the boundary from grading ``g`` to
    ``g - 1`` (rows: generators of ``g - 1``, columns: generators of ``g``,
    both in the order they appear in ``generators``).  Missing gradings mean
    a zero map.  With ``check=True`` a nonzero composite raises
    :class:`DSquaredNonzero`; Morse data with a non-compact connecting set
    is built with ``check=False`` and rejected later by the homology engine.
    """

    def __init__(
        self,
        generators: Iterable[tuple[object, int]],
        boundaries: Mapping[int, ExactMatrix] | None = None,
        modulus: int = 0,
        check: bool = True,
    ):
        self.generators = tuple((gid, int(g)) for gid, g in generators)
        ids = [gid for gid, _ in self.generators]
        if len(set(ids)) != len(ids):
            raise ValueError("generator ids must be unique")
        self.modulus = modulus
        self._by_grading: dict[int, list] = defaultdict(list)
        for gid, g in self.generators:
            self._by_grading[g].append(gid)
        self.boundaries: dict[int, ExactMatrix] = {}
        for g, mat in (boundaries or {}).items():
            if mat.modulus != modulus:
                raise ValueError("boundary coefficient tag differs from the complex")
            want = (self.count(g - 1), self.count(g))
            if mat.shape != want:
                raise DegreeMismatch(
                    "boundary in grading %d has shape %s, expected %s" % (g, mat.shape, want),
                    {"grading": g},
                )
            if not mat.is_zero():
                self.boundaries[int(g)] = mat
        if check:
            bad = self.d_squared_failures()
            if bad:
                raise DSquaredNonzero(
                    "boundary squares to a nonzero map in grading %d" % bad[0], {"grading": bad[0]}
                )

    def ids(self, g: int) -> list:
        return list(self._by_grading.get(g, []))

    def count(self, g: int) -> int:
        return len(self._by_grading.get(g, ()))

    def gradings(self) -> list[int]:
        return sorted(self._by_grading)

    def boundary(self, g: int) -> ExactMatrix:
        mat = self.boundaries.get(g)
        if mat is None:
            return ExactMatrix.zeros(self.count(g - 1), self.count(g), self.modulus)
        return mat

    def d_squared_failures(self) -> list[int]:
        """Gradings ``g`` where the boundary out of ``g`` composed with the next is nonzero."""
        bad = []
        for g in sorted(self.boundaries):
            if g - 1 in self.boundaries and not (self.boundaries[g - 1] @ self.boundaries[g]).is_zero():
                bad.append(g)
        return bad

    def euler_characteristic(self) -> int:
        return sum((-1) ** (g % 2) * self.count(g) for g in self.gradings())

    def with_modulus(self, p: int) -> "GradedChainComplex":
        """Change of coefficients (reduction mod p of an integral complex)."""
        if self.modulus and self.modulus != p:
            raise ValueError("cannot change between prime fields")
        mats = {g: ExactMatrix(m.data.astype(np.int64) if p else m.data, p) for g, m in self.boundaries.items()}
        return GradedChainComplex(self.generators, mats, p, check=False)


def _map_rank(mat: ExactMatrix) -> int:
    if mat.rows == 0 or mat.cols == 0:
        return 0
    if mat.modulus:
        return linalg.rank(mat.data, mat.modulus)
    return integer_rank_and_torsion(mat)[0]


def homology_of_complex(c: GradedChainComplex) -> GradedHomology:
    """Homology per grading: rank ``dim ker d_g - rank d_{g+1}`` plus torsion over Z."""
    bad = c.d_squared_failures()
    if bad:
        raise DSquaredNonzero(
            "boundary squares to a nonzero map in grading %d" % bad[0], {"grading": bad[0]}
        )
    ranks, torsion = {}, {}
    image_rank = {}
    for g in c.gradings():
        mat = c.boundaries.get(g + 1)
        if mat is None:
            image_rank[g] = 0
        elif c.modulus:
            image_rank[g] = linalg.rank(mat.data, c.modulus)
        else:
            r, tors = integer_rank_and_torsion(mat)
            image_rank[g] = r
            torsion[g] = tors
    for g in c.gradings():
        out = c.boundaries.get(g)
        kernel = c.count(g) - (_map_rank(out) if out is not None else 0)
        ranks[g] = kernel - image_rank[g]
    return GradedHomology(c.modulus, ranks, torsion)


def dual_complex(c: GradedChainComplex) -> GradedChainComplex:
    """Transpose every boundary and negate gradings (the cochain complex)."""
    gens = [(gid, -g) for gid, g in c.generators]
    mats = {}
    for g, mat in c.boundaries.items():
        # coboundary C^{g-1} -> C^g lives in negated grading -(g-1)
        mats[-(g - 1)] = mat.T
    return GradedChainComplex(gens, mats, c.modulus, check=False)


def cohomology_of_complex(c: GradedChainComplex) -> GradedHomology:
    """Cohomology, reported with negated gradings (``H^k`` sits at key ``-k``)."""
    bad = c.d_squared_failures()
    if bad:
        raise DSquaredNonzero(
            "boundary squares to a nonzero map in grading %d" % bad[0], {"grading": bad[0]}
        )
    return homology_of_complex(dual_complex(c))
