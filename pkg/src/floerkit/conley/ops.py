"""Continuation, symmetry and fixed-point operations on transition systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ActionNotSymmetry, InvalidFlowSpec, IsolationViolated
from ..homology import GradedHomology
from .flows import FlowSpec, SignAction
from .index import IndexPair, conley_index, construct_index_pair
from .system import (
    CellSet,
    TransitionSystem,
    discretize_flow,
    isolation_witnesses,
    point_system,
)


@dataclass
class ContinuationReport:
    homologies: list[GradedHomology]
    equal: bool

    def to_json(self) -> dict:
        return {"equal": self.equal, "homologies": [h.to_json() for h in self.homologies]}


def continuation_check(family: Sequence[FlowSpec], n: CellSet, modulus: int = 0) -> ContinuationReport:
    """Index homology of ``n`` along a family of flows on one grid."""
    if not family:
        return ContinuationReport([], True)
    base = family[0]
    homs = []
    for i, spec in enumerate(family):
        if spec.dimension != base.dimension or not spec.same_grid(base):
            raise InvalidFlowSpec("family members must share dimension, box and resolution", {"index": i})
        t = discretize_flow(spec)
        bad = isolation_witnesses(t, n)
        if bad:
            raise IsolationViolated(
                "candidate neighborhood is not isolating for family member %d" % i,
                {"index": i, "cells": bad[:10]},
            )
        homs.append(conley_index(t, n, modulus)[1])
    return ContinuationReport(homs, all(h == homs[0] for h in homs))


def _as_action(action) -> SignAction:
    return action if isinstance(action, SignAction) else SignAction.from_signed(action)


def cell_permutation_mask(t: TransitionSystem, action: SignAction, mask: np.ndarray) -> np.ndarray:
    """Image of a cell mask under a coordinate sign action."""
    flipped = tuple(action.flipped_axes())
    if not flipped:
        return mask.copy()
    return np.flip(mask.reshape(t.shape), axis=flipped).ravel()


def symmetry_defect(spec: FlowSpec, action: SignAction) -> tuple[float, list[int] | None]:
    """Largest deviation of ``F(g x) = g F(x)`` over the samples, with its location."""
    flipped = tuple(action.flipped_axes())
    s = spec.samples
    image = np.flip(s, axis=flipped) if flipped else s.copy()
    image = image * np.array(action.signs, dtype=float)
    dev = np.abs(image - s)
    if dev.size == 0:
        return 0.0, None
    k = int(np.argmax(dev))
    return float(dev.flat[k]), list(np.unravel_index(k, dev.shape))


def check_action(spec: FlowSpec, action: SignAction, tol: float = 1e-9):
    if action.dimension != spec.dimension:
        raise InvalidFlowSpec("action dimension differs from the flow")
    if action.perm != tuple(range(action.dimension)):
        raise InvalidFlowSpec(
            "only coordinate sign actions are supported (fixed sets must be grid aligned)",
            {"action": action.to_signed()},
        )
    for i in action.flipped_axes():
        if not np.isclose(spec.lower[i], -spec.upper[i]):
            raise InvalidFlowSpec("action does not map the box to itself", {"axis": i})
        if spec.resolution[i] % 2:
            raise InvalidFlowSpec("flipped axes need an even resolution", {"axis": i})
    scale = max(1.0, float(np.abs(spec.samples).max()) if spec.samples.size else 1.0)
    dev, where = symmetry_defect(spec, action)
    if dev > tol * scale:
        raise ActionNotSymmetry(
            "field samples are not invariant under the action",
            {"sample_index": where, "deviation": dev},
        )


def pair_is_invariant(t: TransitionSystem, action: SignAction, pair: IndexPair) -> bool:
    for cs in (pair.n_prime, pair.exit_set):
        if not np.array_equal(cell_permutation_mask(t, action, cs.mask), cs.mask):
            return False
    return True


def fixed_flow(spec: FlowSpec, action: SignAction) -> FlowSpec | None:
    """The flow restricted to the fixed hyperplane ``x_i = 0`` of every flipped axis.

    Returns None when every axis is flipped (the fixed set is a point).
    """
    flipped = action.flipped_axes()
    keep = [i for i in range(spec.dimension) if i not in flipped]
    if not keep:
        return None
    idx = tuple(spec.resolution[i] // 2 if i in flipped else slice(None) for i in range(spec.dimension))
    samples = spec.samples[idx][..., keep]
    return FlowSpec(
        tuple(spec.lower[i] for i in keep),
        tuple(spec.upper[i] for i in keep),
        tuple(spec.resolution[i] for i in keep),
        samples,
        tuple(spec.lipschitz[i] for i in keep),
        None,
        spec.name + "_fixed",
    )


def restrict_to_fixed_subgrid(t: TransitionSystem, action, n: CellSet | None = None) -> TransitionSystem:
    """Transition system of the fixed-point locus of a coordinate sign action.

    Flipped axes are cut at their center vertex, where the flipped field
    components vanish by symmetry; the remaining components are resampled on
    the lower-dimensional grid.  When ``n`` (default: all cells) is isolating,
    the constructed index pair is also checked to be setwise invariant.
    """
    action = _as_action(action)
    if action.is_identity():
        return t
    if t.spec is None:
        raise InvalidFlowSpec("system carries no sampled field")
    check_action(t.spec, action)
    n = n if n is not None else CellSet.full(t)
    if not np.array_equal(cell_permutation_mask(t, action, n.mask), n.mask):
        raise ActionNotSymmetry("candidate neighborhood is not invariant under the action")
    if not isolation_witnesses(t, n):
        pair = construct_index_pair(t, n)
        if not pair_is_invariant(t, action, pair):
            raise ActionNotSymmetry("constructed index pair is not invariant under the action")
    sub = fixed_flow(t.spec, action)
    if sub is None:
        return point_system(self_loop=True)
    return discretize_flow(sub)
