"""Exception hierarchy shared by every module.

Each error carries a stable machine-readable ``code`` and an optional
``witness`` payload (JSON-serializable) that the CLI emits verbatim.
"""

from __future__ import annotations

from typing import Any


class FloerkitError(Exception):
    code = "error"

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "witness": self.witness}


class SchemaError(FloerkitError):
    code = "schema_error"


class DSquaredNonzero(FloerkitError):
    code = "d_squared_nonzero"


class DegreeMismatch(FloerkitError):
    code = "degree_mismatch"


class InvalidFlowSpec(FloerkitError):
    code = "invalid_flow_spec"


class IsolationViolated(FloerkitError):
    code = "isolation_violated"


class CollarTooThin(FloerkitError):
    code = "collar_too_thin"


class ActionNotSymmetry(FloerkitError):
    code = "action_not_symmetry"


class WindowTooSmall(FloerkitError):
    code = "window_too_small"


class ParityViolation(FloerkitError):
    code = "parity_violation"


class TailPatternViolation(FloerkitError):
    code = "tail_pattern_violation"


class CongruenceViolation(FloerkitError):
    code = "congruence_violation"


class FlavorMismatch(FloerkitError):
    code = "flavor_mismatch"


class ShiftParityError(FloerkitError):
    code = "shift_parity_error"


class DivisibilityError(FloerkitError):
    code = "divisibility_error"


class NotNegativeDefinite(FloerkitError):
    code = "not_negative_definite"


class FieldMismatch(FloerkitError):
    code = "field_mismatch"


class NotRealizable(FloerkitError):
    """A hand-written complex has no free-cell realization (needed for dual/tensor)."""

    code = "not_realizable"
