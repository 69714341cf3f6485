"""Equivariant Floer modules: complexes, homology, invariants and constructions."""

from .catalog import NAMES as CATALOG_NAMES
from .catalog import catalog, catalog_complex
from .cells import CellModel, cells_from_heuristic, dual_cells, tensor_cells
from .certificates import additivity_defect, n_invariant, nonsplitting_certificate, rokhlin_mu
from .complex import (
    PIN2,
    S1,
    EquivariantComplex,
    Generator,
    build_pin2_complex,
    build_s1_complex,
    complex_from_json,
)
from .constructions import degree_shift, dualize, minimal_form, tensor_disjoint_union
from .invariants import (
    InvariantReport,
    TateReport,
    alpha_beta_gamma,
    extract_invariants,
    froyshov_h,
    invariants_of_module,
    operator_relations,
    tails,
    tate_pattern_check,
    u_tail_bottom,
    v_tail_bottoms,
)
from .module import HomologyModule, cell_module_homology, module_homology

__all__ = [
    "CATALOG_NAMES", "PIN2", "S1", "CellModel", "EquivariantComplex", "Generator", "HomologyModule",
    "InvariantReport", "TateReport", "additivity_defect", "alpha_beta_gamma", "build_pin2_complex",
    "build_s1_complex", "catalog", "catalog_complex", "cell_module_homology", "cells_from_heuristic",
    "complex_from_json", "degree_shift", "dual_cells", "dualize", "extract_invariants", "froyshov_h",
    "invariants_of_module", "minimal_form", "module_homology", "n_invariant", "nonsplitting_certificate",
    "operator_relations", "rokhlin_mu", "tails", "tate_pattern_check", "tensor_cells",
    "tensor_disjoint_union", "u_tail_bottom", "v_tail_bottoms",
]
