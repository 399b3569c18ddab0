"""Exception hierarchy shared by the workbench."""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class AxiomViolation(WorkbenchError):
    """A ring or module table fails an axiom; ``witness`` names the failing triple."""

    def __init__(self, axiom, witness=None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom} fails at {witness}")


class SpecError(WorkbenchError):
    """Malformed ring or module input."""


class SizeGuard(WorkbenchError):
    """An exhaustive computation would exceed a configured size ceiling."""

    def __init__(self, what, size, limit):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: size {size} exceeds guard {limit}")


class NotSemisimple(WorkbenchError):
    pass


class NotApplicable(WorkbenchError):
    pass


class PreconditionViolation(WorkbenchError):
    pass


class SearchExhausted(WorkbenchError):
    def __init__(self, what, bound):
        self.bound = bound
        super().__init__(f"{what}: no witness within search bound {bound}")


class InternalAssertion(WorkbenchError):
    """Raised when a computed object fails its own verification (an implementation bug)."""


class ExtensionNotFound(InternalAssertion):
    pass


class CoherenceFailure(InternalAssertion):
    pass
