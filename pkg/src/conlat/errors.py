"""Exception types shared across the package."""


class LatticeError(Exception):
    """Base class for all conlat errors."""


class NotAPartialOrder(LatticeError):
    pass


class NotALattice(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAHomomorphism(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAnEmbedding(LatticeError):
    pass


class NotACongruence(LatticeError):
    pass


class NotAFilter(LatticeError):
    pass


class NotAnIdeal(LatticeError):
    pass


class NotAnIsomorphism(LatticeError):
    pass


class NotDistributive(LatticeError):
    pass


class SizeCapExceeded(LatticeError):
    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class SearchExhausted(LatticeError):
    """A backtracking search ran out of budget without finding a witness."""

    def __init__(self, message, largest_tried=None):
        super().__init__(message)
        self.largest_tried = largest_tried


class IncoherentProblem(LatticeError):
    pass


class GluingSeamMismatch(LatticeError):
    pass


class MeetUndefined(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConstructionUncertified(LatticeError):
    """A certified construction step produced an object that failed its check."""

    def __init__(self, message, step=None, witness=None):
        super().__init__(message)
        self.step = step
        self.witness = witness


class PreconditionFailed(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IncoherentPresentation(LatticeError):
    pass


class ParseError(LatticeError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column
