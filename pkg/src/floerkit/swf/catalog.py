"""Built-in complexes: the three-sphere and two Brieskorn spheres."""

from __future__ import annotations

from ..errors import SchemaError
from .complex import PIN2, S1, EquivariantComplex, build_pin2_complex, build_s1_complex

NAMES = ("S3", "Sigma_2_3_5", "Sigma_2_3_11")


def catalog_complex(name: str, flavor: str = PIN2, field: int = 2) -> EquivariantComplex:
    """``S3`` (tower from 0), ``Sigma_2_3_5`` (tower from 2, ``n = -1``) and
    ``Sigma_2_3_11`` (``n = 0`` with irreducibles in grading 1 killing the tower bottom:
    two for S1, one for Pin2)."""
    if name not in NAMES:
        raise SchemaError("unknown catalog complex %r" % name, {"known": list(NAMES)})
    if flavor == S1:
        if name == "S3":
            return build_s1_complex(0, (), field, name)
        if name == "Sigma_2_3_5":
            return build_s1_complex(-1, (), field, name)
        irr = [{"id": "x1", "grading": 1, "d": {"T:0": 1}}, {"id": "x2", "grading": 1, "d": {"T:0": 1}}]
        return build_s1_complex(0, irr, field, name)
    if flavor != PIN2:
        raise SchemaError("flavor must be S1 or Pin2", {"flavor": flavor})
    if field != 2:
        raise SchemaError("Pin2 complexes use F_2 coefficients", {"field": field})
    if name == "S3":
        return build_pin2_complex(0, (), name)
    if name == "Sigma_2_3_5":
        return build_pin2_complex(-1, (), name)
    return build_pin2_complex(0, [{"id": "x1", "grading": 1, "d": {"T:0": 1}}], name)


def catalog(flavor: str = PIN2, field: int = 2) -> dict[str, EquivariantComplex]:
    return {name: catalog_complex(name, flavor, field) for name in NAMES}
