"""Sampled vector fields on boxes and the built-in flow catalog."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import InvalidFlowSpec


@dataclass(frozen=True)
class SignAction:
    """A signed coordinate permutation ``x_i -> signs[i] * x_{perm[i]}``."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    @classmethod
    def from_signed(cls, spec: Sequence[int]) -> "SignAction":
        """Parse the 1-based signed list used in JSON (``[-1, 2]`` flips axis 1)."""
        perm, signs = [], []
        for v in spec:
            v = int(v)
            if v == 0:
                raise InvalidFlowSpec("action entries are nonzero 1-based signed axes", {"action": list(spec)})
            perm.append(abs(v) - 1)
            signs.append(1 if v > 0 else -1)
        if sorted(perm) != list(range(len(perm))):
            raise InvalidFlowSpec("action is not a permutation", {"action": list(spec)})
        return cls(tuple(perm), tuple(signs))

    def to_signed(self) -> list[int]:
        return [s * (p + 1) for p, s in zip(self.perm, self.signs)]

    @property
    def dimension(self) -> int:
        return len(self.perm)

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm))) and all(s == 1 for s in self.signs)

    def flipped_axes(self) -> list[int]:
        return [i for i, s in enumerate(self.signs) if s < 0]


@dataclass(frozen=True, eq=False)
class FlowSpec:
    """A vector field on a box, sampled at every vertex of a regular grid.

    ``samples`` has shape ``(*[r + 1 for r in resolution], dimension)``.
    ``lipschitz[i]`` bounds the variation of component ``i`` per unit length.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    resolution: tuple[int, ...]
    samples: np.ndarray
    lipschitz: tuple[float, ...]
    action: SignAction | None = None
    name: str = "custom"

    def __post_init__(self):
        n = len(self.resolution)
        if n < 1 or len(self.lower) != n or len(self.upper) != n or len(self.lipschitz) != n:
            raise InvalidFlowSpec("box, resolution and Lipschitz bounds must share the dimension")
        if any(r < 2 for r in self.resolution):
            raise InvalidFlowSpec("resolution must be at least 2 per axis", {"resolution": list(self.resolution)})
        if any(not lo < hi for lo, hi in zip(self.lower, self.upper)):
            raise InvalidFlowSpec("box bounds must satisfy lower < upper")
        if any(not np.isfinite(x) or x < 0 for x in self.lipschitz):
            raise InvalidFlowSpec("Lipschitz bounds must be finite and non-negative")
        s = np.asarray(self.samples, dtype=float)
        want = tuple(r + 1 for r in self.resolution) + (n,)
        if s.shape != want:
            raise InvalidFlowSpec("sample array has shape %s, expected %s" % (s.shape, want))
        if not np.all(np.isfinite(s)):
            bad = np.argwhere(~np.isfinite(s))[0].tolist()
            raise InvalidFlowSpec("non-finite field sample", {"index": bad})
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        if self.action is not None:
            a = self.action
            if a.dimension != n:
                raise InvalidFlowSpec("action dimension differs from the flow")
            for i, (p, sg) in enumerate(zip(a.perm, a.signs)):
                if self.resolution[i] != self.resolution[p]:
                    raise InvalidFlowSpec("action does not map the grid to itself", {"axis": i})
                lo, hi = (self.lower[p], self.upper[p]) if sg > 0 else (-self.upper[p], -self.lower[p])
                if not (np.isclose(lo, self.lower[i]) and np.isclose(hi, self.upper[i])):
                    raise InvalidFlowSpec("action does not map the box to itself", {"axis": i})

    @property
    def dimension(self) -> int:
        return len(self.resolution)

    @property
    def widths(self) -> np.ndarray:
        return (np.array(self.upper) - np.array(self.lower)) / np.array(self.resolution)

    def vertex_coordinates(self, axis: int) -> np.ndarray:
        return grid_coordinates(self.lower[axis], self.upper[axis], self.resolution[axis])

    def same_grid(self, other: "FlowSpec") -> bool:
        return (
            self.resolution == other.resolution
            and np.allclose(self.lower, other.lower)
            and np.allclose(self.upper, other.upper)
        )


def grid_coordinates(lo: float, hi: float, r: int) -> np.ndarray:
    """Vertex coordinates, exactly mirror-symmetric about the box midpoint."""
    mid = (lo + hi) / 2.0
    half = (hi - lo) / 2.0
    k = np.arange(r + 1)
    return mid + half * (2 * k - r) / r


def sample_field(
    f: Callable[..., Sequence[np.ndarray]],
    lower: Sequence[float],
    upper: Sequence[float],
    resolution: Sequence[int],
    lipschitz: Sequence[float],
    action: SignAction | None = None,
    name: str = "custom",
) -> FlowSpec:
    """Evaluate ``f(*coords)`` (vectorized, one array per axis) on the vertex grid."""
    resolution = tuple(int(r) for r in resolution)
    axes = [grid_coordinates(lo, hi, r) for lo, hi, r in zip(lower, upper, resolution)]
    mesh = np.meshgrid(*axes, indexing="ij")
    comps = f(*mesh)
    samples = np.stack([np.broadcast_to(np.asarray(c, dtype=float), mesh[0].shape) for c in comps], axis=-1)
    return FlowSpec(
        tuple(float(x) for x in lower),
        tuple(float(x) for x in upper),
        resolution,
        samples,
        tuple(float(x) for x in lipschitz),
        action,
        name,
    )


def double_well(depth: float = 1.0, shift: float = 0.0, resolution: int = 64, box=(-2.0, 2.0), action=None) -> FlowSpec:
    """Downward gradient of ``depth * ((x - shift)^2 - 1)^2``."""
    lo, hi = box
    reach = max(abs(lo - shift), abs(hi - shift))
    lip = depth * max(4.0, 12 * reach**2 - 4)  # sup |f'| on the box; 44 on [-2, 2]
    return sample_field(
        lambda x: [-4 * depth * (x - shift) * ((x - shift) ** 2 - 1)],
        [lo], [hi], [resolution], [lip], action, "double_well_1d",
    )


def linear_flow(signs: Sequence[int], resolution: int = 64, name: str = "linear") -> FlowSpec:
    """``x_i' = signs[i] * x_i`` on ``[-1, 1]^n``; index = number of positive signs."""
    n = len(signs)
    return sample_field(
        lambda *xs: [s * x for s, x in zip(signs, xs)],
        [-1.0] * n, [1.0] * n, [resolution] * n, [1.0] * n, None, name,
    )


CATALOG = ("double_well_1d", "saddle_2d", "max_2d", "min_2d")


def catalog_flow(name: str, resolution: int | None = None) -> FlowSpec:
    if name == "double_well_1d":
        return double_well(resolution=resolution or 64, action=SignAction((0,), (-1,)))
    signs = {"saddle_2d": (1, -1), "max_2d": (1, 1), "min_2d": (-1, -1)}.get(name)
    if signs is None:
        raise InvalidFlowSpec("unknown catalog flow %r" % name, {"catalog": list(CATALOG)})
    return linear_flow(signs, resolution or 64, name)


def depth_family(depths: Sequence[float], resolution: int = 64) -> list[FlowSpec]:
    return [double_well(depth=a, resolution=resolution) for a in depths]


def shift_family(shifts: Sequence[float], resolution: int = 64) -> list[FlowSpec]:
    return [double_well(shift=s, resolution=resolution) for s in shifts]


_FLOW_KEYS = {"name", "lower", "upper", "resolution", "lipschitz", "action", "samples", "catalog"}


def flow_to_json(spec: FlowSpec) -> dict:
    return {
        "name": spec.name,
        "lower": list(spec.lower),
        "upper": list(spec.upper),
        "resolution": list(spec.resolution),
        "lipschitz": list(spec.lipschitz),
        "action": spec.action.to_signed() if spec.action is not None else None,
        "samples": spec.samples.tolist(),
    }


def flow_from_json(obj, allow_unknown: bool = False) -> FlowSpec:
    """Either ``{"catalog": name, "resolution": r}`` or an explicit sampled field."""
    extra = set(obj) - _FLOW_KEYS
    if extra and not allow_unknown:
        raise InvalidFlowSpec("unknown flow fields %s" % sorted(extra), {"fields": sorted(extra)})
    if "catalog" in obj:
        res = obj.get("resolution")
        if isinstance(res, list):
            res = res[0]
        return catalog_flow(obj["catalog"], res)
    try:
        action = obj.get("action")
        return FlowSpec(
            tuple(float(x) for x in obj["lower"]),
            tuple(float(x) for x in obj["upper"]),
            tuple(int(r) for r in obj["resolution"]),
            np.asarray(obj["samples"], dtype=float),
            tuple(float(x) for x in obj["lipschitz"]),
            SignAction.from_signed(action) if action is not None else None,
            str(obj.get("name", "custom")),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidFlowSpec("malformed flow specification: %s" % e)
