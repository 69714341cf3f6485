"""Spin arithmetic, the non-splitting certificate and additivity defects."""

from __future__ import annotations

from typing import Sequence

from ..errors import DivisibilityError, FlavorMismatch
from .complex import PIN2, EquivariantComplex
from .constructions import dualize, tensor_disjoint_union
from .invariants import extract_invariants


def n_invariant(ind_c: int, c1_sq: int, sigma: int) -> int:
    """``n = ind_C - (c1^2 - σ)/8``."""
    if (c1_sq - sigma) % 8:
        raise DivisibilityError("c1^2 - σ must be divisible by 8", {"c1_sq": c1_sq, "sigma": sigma})
    return ind_c - (c1_sq - sigma) // 8


def rokhlin_mu(sigma: int) -> int:
    """``μ = σ/8 mod 2``."""
    if sigma % 8:
        raise DivisibilityError("signature of a spin bounding form must be divisible by 8", {"sigma": sigma})
    return (sigma // 8) % 2


def nonsplitting_certificate(c: EquivariantComplex) -> dict:
    """Check ``β(-Y) = -β(Y)`` and ``β ≡ μ (mod 2)``, then draw the order-two conclusion.

    If ``Y`` had order two in the homology cobordism group then ``Y ~ -Y``,
    so ``β(Y) = β(-Y) = -β(Y)`` forces ``β = 0`` and hence ``μ = 0``.
    """
    if c.flavor != PIN2:
        raise FlavorMismatch("the certificate needs the Pin2 flavor", {"flavor": c.flavor})
    r = extract_invariants(c)
    rd = extract_invariants(dualize(c))
    beta, beta_dual, mu = r.beta, rd.beta, r.mu
    facts = {
        "beta_antisymmetric": beta_dual == -beta,
        "beta_lifts_mu": (beta - mu) % 2 == 0,
        "order_two_implies_mu_zero": True,
    }
    if mu:
        conclusion = "mu = 1: Y cannot have order two in the homology cobordism group"
    else:
        conclusion = "mu = 0: consistent with order two"
    return {
        "name": c.name,
        "alpha_beta_gamma": list(r.alpha_beta_gamma),
        "dual_alpha_beta_gamma": list(rd.alpha_beta_gamma),
        "beta": beta,
        "beta_dual": beta_dual,
        "mu": mu,
        "facts": facts,
        "consistent": all(facts.values()),
        "order_two_possible": mu == 0,
        "conclusion": conclusion,
    }


def _combination(coeffs: Sequence[int], abg: Sequence[int]) -> int:
    return sum(int(a) * int(b) for a, b in zip(coeffs, abg))


def additivity_defect(coeffs: Sequence[int], complexes: Sequence[EquivariantComplex]) -> list[list[int]]:
    """``D[i][j] = f(c_i ⊔ c_j) - f(c_i) - f(c_j)`` for ``f = c_α α + c_β β + c_γ γ``."""
    if len(coeffs) != 3:
        raise ValueError("three coefficients (c_alpha, c_beta, c_gamma) are needed")
    for c in complexes:
        if c.flavor != PIN2:
            raise FlavorMismatch("additivity defects need the Pin2 flavor", {"flavor": c.flavor})
    single = [_combination(coeffs, extract_invariants(c).alpha_beta_gamma) for c in complexes]
    out = []
    for i, ci in enumerate(complexes):
        row = []
        for j, cj in enumerate(complexes):
            both = extract_invariants(tensor_disjoint_union(ci, cj)).alpha_beta_gamma
            row.append(_combination(coeffs, both) - single[i] - single[j])
        out.append(row)
    return out
