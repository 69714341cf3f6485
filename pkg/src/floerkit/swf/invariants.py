"""Tail invariants, Tate patterns and operator relations on homology modules."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import linalg
from ..errors import CongruenceViolation, ParityViolation, TailPatternViolation, WindowTooSmall
from .complex import PIN2, S1, EquivariantComplex
from .module import HomologyModule, module_homology


def _require_certified(h: HomologyModule) -> None:
    if not h.certified:
        raise WindowTooSmall("homology module has no periodicity certificate", h.certificate)


def tails(h: HomologyModule) -> dict[int, int]:
    """Per-grading dimension of ``∩_k im(op^k)`` for the periodic operator.

    Within a certified window the intersection is the image of a power of
    the operator from the top band, where it acts bijectively.
    """
    _require_certified(h)
    lo, hi = h.window
    p, op = h.period, h.period_op
    out = {}
    for k in range(lo, hi + 1):
        m = 0
        while k + m * p <= hi - p:
            m += 1
        src = k + m * p
        out[k] = linalg.rank(h.power(op, src, m), h.field) if h.rank(src) and h.rank(k) else 0
    return out


def _top_band(h: HomologyModule) -> range:
    lo, hi = h.window
    return range(hi - h.period + 1, hi + 1)


def u_tail_bottom(h: HomologyModule) -> int:
    """Minimal absolute grading of a nonzero element of the U-tail."""
    if h.flavor != S1:
        raise TailPatternViolation("the U-tail needs the S1 flavor", {"flavor": h.flavor})
    t = tails(h)
    band = {k - h.suspension: t[k] for k in _top_band(h)}
    if sorted(band.values()) != [0, 1]:
        raise TailPatternViolation("U-tail is not one-dimensional in one parity", {"band": band})
    return min(k for k, v in t.items() if v) - h.suspension


def froyshov_h(d: int) -> int:
    if d % 2:
        raise ParityViolation("d = %d is odd" % d, {"d": d})
    return -d // 2


def v_tail_bottoms(h: HomologyModule) -> tuple[int, int, int]:
    """Minimal absolute gradings ``(a, b, c)`` of the v-tail in residues ``2μ, 2μ+1, 2μ+2`` mod 4."""
    if h.flavor != PIN2:
        raise TailPatternViolation("the v-tails need the Pin2 flavor", {"flavor": h.flavor})
    t = tails(h)
    base = 2 * h.mu
    band = {(k - h.suspension) % 4: t[k] for k in _top_band(h)}
    want = {(base + i) % 4: (1 if i < 3 else 0) for i in range(4)}
    if band != want:
        raise TailPatternViolation(
            "v-tail dimensions by residue do not match 1,1,1,0 anchored at 2μ",
            {"band": {str(r): v for r, v in sorted(band.items())}, "mu": h.mu},
        )
    out = []
    for i in range(3):
        r = (base + i) % 4
        out.append(min(k for k, v in t.items() if v and (k - h.suspension) % 4 == r) - h.suspension)
    return tuple(out)


def alpha_beta_gamma(a: int, b: int, c: int, mu: int | None = None) -> tuple[int, int, int]:
    """``α = a/2``, ``β = (b-1)/2``, ``γ = (c-2)/2`` after the mod 4 congruence check."""
    if not (a % 4 == (b - 1) % 4 == (c - 2) % 4) or (mu is not None and a % 4 != (2 * mu) % 4):
        raise CongruenceViolation("a, b-1, c-2 are not congruent to 2μ mod 4", {"abc": [a, b, c], "mu": mu})
    return a // 2, (b - 1) // 2, (c - 2) // 2


@dataclass(frozen=True)
class InvariantReport:
    flavor: str
    mu: int
    window: tuple[int, int]
    d: int | None = None
    h: int | None = None
    abc: tuple[int, int, int] | None = None
    alpha_beta_gamma: tuple[int, int, int] | None = None
    name: str = ""

    @property
    def alpha(self) -> int:
        return self.alpha_beta_gamma[0]

    @property
    def beta(self) -> int:
        return self.alpha_beta_gamma[1]

    @property
    def gamma(self) -> int:
        return self.alpha_beta_gamma[2]

    def values(self) -> tuple:
        """The extracted integers, for comparing reports from different windows."""
        return (self.flavor, self.mu, self.d, self.h, self.abc, self.alpha_beta_gamma)

    def to_json(self) -> dict:
        out: dict = {"flavor": self.flavor, "mu": self.mu, "window": list(self.window)}
        if self.name:
            out["name"] = self.name
        if self.flavor == S1:
            out.update({"d": self.d, "h": self.h})
        else:
            a, b, c = self.abc
            al, be, ga = self.alpha_beta_gamma
            out.update({"a": a, "b": b, "c": c, "alpha": al, "beta": be, "gamma": ga})
        return out


def invariants_of_module(h: HomologyModule) -> InvariantReport:
    if h.flavor == S1:
        d = u_tail_bottom(h)
        hv = froyshov_h(d)
        return InvariantReport(S1, h.mu, h.window, d=d, h=hv, name=h.name)
    abc = v_tail_bottoms(h)
    return InvariantReport(PIN2, h.mu, h.window, abc=abc, alpha_beta_gamma=alpha_beta_gamma(*abc, h.mu), name=h.name)


def extract_invariants(c: EquivariantComplex, window: tuple[int, int] | None = None) -> InvariantReport:
    return invariants_of_module(module_homology(c, window))


@dataclass
class TateReport:
    passed: bool
    pattern: dict[int, int]
    reasons: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"passed": self.passed, "pattern": {str(k): v for k, v in sorted(self.pattern.items())}, "reasons": self.reasons}


def tate_pattern_check(h: HomologyModule, strict: bool = False) -> TateReport:
    """Invert the periodic operator and compare with ``F[U, U^-1]`` or ``F_2[q, v, v^-1]/(q^3)``.

    The localization is read off the certified top band, where the
    operator is invertible; the pattern is indexed by absolute grading
    residue.
    """
    reasons: list[str] = []
    pattern: dict[int, int] = {}
    if not h.certified:
        reasons.append("no periodic band: the tail is absent or the window is too small")
    else:
        band = list(_top_band(h))
        pattern = {(k - h.suspension) % h.period: h.rank(k) for k in band}
        if h.flavor == S1:
            if sorted(pattern.values()) != [0, 1]:
                reasons.append("localized ranks are not 1 and 0 in the two parities")
        else:
            base = 2 * h.mu
            want = {(base + i) % 4: (1 if i < 3 else 0) for i in range(4)}
            if pattern != want:
                reasons.append("localized ranks are not 1,1,1,0 anchored at 2μ")
            else:
                for k in band:
                    if (k - h.suspension - base) % 4 in (1, 2) and linalg.rank(h.op("q", k), h.field) != 1:
                        reasons.append("q is not an isomorphism from grading %d in the localization" % k)
        lo, hi = h.window
        for k in band:
            if k - h.period >= lo and h.rank(k - h.period) != h.rank(k):
                reasons.append("localized ranks are not periodic at grading %d" % k)
    report = TateReport(not reasons, pattern, reasons)
    if strict and not report.passed:
        raise TailPatternViolation("Tate pattern check failed", report.to_json())
    return report


def operator_relations(h: HomologyModule) -> list[dict]:
    """Failures of ``q^3 = 0`` and ``qv = vq`` on homology (Pin2), and of
    bijectivity of the periodic operator on the certified band."""
    p = h.field
    lo, hi = h.window
    bad = []
    if h.flavor == PIN2:
        for k in range(lo + 3, hi + 1):
            if np.any(h.power("q", k, 3) % p):
                bad.append({"relation": "q^3", "grading": k})
        for k in range(lo + 5, hi + 1):
            qv = (h.op("q", k - 4) @ h.op("v", k)) % p
            vq = (h.op("v", k - 1) @ h.op("q", k)) % p
            if np.any((qv - vq) % p):
                bad.append({"relation": "qv", "grading": k})
    if h.certified:
        for k in _top_band(h):
            m = h.op(h.period_op, k)
            if m.shape[0] != m.shape[1] or linalg.rank(m, p) != m.shape[0]:
                bad.append({"relation": "periodic", "grading": k})
    return bad
