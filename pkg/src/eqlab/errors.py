"""Exception types shared across the workbench."""

from dataclasses import dataclass, field


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


@dataclass(frozen=True)
class Violation:
    """One structural invariant failure: which invariant, which elements."""

    kind: str
    witness: tuple

    def __str__(self):
        return f"{self.kind}{self.witness}"


class InvariantViolation(WorkbenchError):
    """Raised when raw data fails the structural invariants of its backend."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class SizeLimitExceeded(WorkbenchError):
    """A construction or search would exceed the configured caps."""


class NonCommutingSquare(WorkbenchError):
    """The four morphisms handed to the lifting checker do not commute."""


class NoFactorizationSystem(WorkbenchError):
    """The backend has no (surjection, injection) factorization system."""


class NotStronglyConnected(WorkbenchError):
    """A required morphism between coproduct parts does not exist."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"no morphism exists for the pair {witness}")


class DepthExhausted(WorkbenchError):
    """A derivation or saturation hit its depth/round budget before settling."""


class NoWitnessInBounds(WorkbenchError):
    """An exhaustive witness search finished without finding anything."""

    def __init__(self, bounds):
        self.bounds = bounds
        super().__init__(f"search exhausted within bounds {bounds}")


class UnsupportedBackend(WorkbenchError):
    """The operation is only defined for a subset of the backends."""


class UnboundVariable(WorkbenchError):
    """Term evaluation met a variable missing from the assignment."""


class DslError(WorkbenchError):
    """Base class for theory-text errors; carries a source position."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class ParseError(DslError):
    pass


class ArityMismatch(DslError):
    pass


class UnknownOp(DslError):
    pass


class UnknownVar(DslError):
    pass


class UncertifiedFamily(DslError):
    """A term family does not derivably respect its index context."""
