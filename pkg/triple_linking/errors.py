"""
Triple Linking — Exceptions

Every operation reports bad input through a LinkingError subclass so the
command line can map them all to exit code 2.
"""


class LinkingError(ValueError):
    """Base class for all input and precondition failures."""


class FramingParseError(LinkingError):
    """A framing matrix file could not be parsed."""


class NotSymmetricError(LinkingError):
    """A framing matrix or gram matrix is not symmetric."""


class SingularFramingError(LinkingError):
    """det(Λ) = 0: the surgery is not a rational homology sphere."""


class DimensionMismatchError(LinkingError):
    """Element, subspace or vector does not fit its ambient object."""


class DegenerateFormError(LinkingError):
    """The linking form has a nontrivial radical."""


class PreconditionError(LinkingError):
    """The input is well-formed but outside an operation's supported range."""


class VectorParseError(LinkingError):
    """An obstruction vector could not be parsed."""
