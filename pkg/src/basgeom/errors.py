"""Exception hierarchy.

Two families matter to callers: ``InvalidInput`` (the data handed in is
malformed or violates a structural precondition; the CLI maps it to exit
code 2) and ``MathematicalFailure`` (the input is well formed but an
asserted mathematical property does not hold).
"""

from __future__ import annotations


class BasError(Exception):
    """Base class for every error raised by this package."""

    def __init__(self, message: str, *, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidInput(BasError):
    pass


class MathematicalFailure(BasError):
    pass


class InputShapeError(InvalidInput):
    pass


class NotALieAlgebraError(InvalidInput):
    def __init__(self, message: str, *, triple=None, witness=None):
        super().__init__(message, witness=witness)
        self.triple = triple


class NotASubalgebraError(InvalidInput):
    pass


class InvalidHermitianError(InvalidInput):
    pass


class NotIntegrableError(InvalidInput):
    def __init__(self, message: str, *, nijenhuis=None, torsion=None):
        super().__init__(message, witness=nijenhuis)
        self.nijenhuis = nijenhuis
        self.torsion = torsion


class NotInvariantError(InvalidInput):
    pass


class EffectivityError(InvalidInput):
    pass


class NoKostantFormError(MathematicalFailure):
    pass


class InternalInconsistencyError(MathematicalFailure):
    pass


class NotBASError(MathematicalFailure):
    pass


class TrivialSubmoduleError(InvalidInput):
    pass


class InvalidRepresentationError(InvalidInput):
    pass


class UnknownEntryError(InvalidInput):
    pass


class UnsupportedHypothesisError(InvalidInput):
    pass


class WitnessFailureError(MathematicalFailure):
    pass


class AdmissibilityError(InvalidInput):
    pass


class DocumentError(InvalidInput):
    """Raised while parsing an algebra document; carries a field path."""

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(field)
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.field = field
        self.line = line
