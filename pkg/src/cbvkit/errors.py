class CbvError(Exception):
    """Base class for errors raised by cbvkit."""


class ArityError(CbvError, ValueError):
    """Inputs of incompatible tensor arity."""


class ShapeError(CbvError, ValueError):
    """Malformed block profile, decoration, or key."""


class StructureError(CbvError):
    """A structural precondition (d^2 = 0, symmetry, ...) does not hold."""


class IncompleteStructureError(StructureError):
    """A generating map needed by a formula is missing from an untruncated set."""
