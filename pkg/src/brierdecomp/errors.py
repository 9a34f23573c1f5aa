"""Exception types shared across the library.

Two families matter to callers: input-side errors (bad data, bad
parameters) and internal-consistency errors (a summary or report that
violates a mathematical guarantee, i.e. a bug or corrupted value, never
a property of valid data). The CLI maps the first family to exit code 2
and the second to exit code 1.
"""


class BrierDecompError(Exception):
    """Base class for all library errors."""


class InputError(BrierDecompError):
    """Base class for errors caused by invalid user input or parameters."""


class DomainError(InputError):
    """A forecast or outcome value is outside its legal domain."""


class EmptyInputError(InputError):
    """A dataset with zero records was supplied."""


class ParseError(InputError):
    """A byte stream could not be parsed as the declared format."""


class InvalidTolerance(InputError):
    """A tolerance parameter is non-positive or NaN."""


class InvalidBinCount(InputError):
    """A binning was requested with fewer than one bin."""


class UnsupportedSpec(InputError):
    """No closed-form targets exist for the requested generator kind."""


class InternalConsistencyError(BrierDecompError):
    """A mathematically guaranteed invariant failed beyond tolerance.

    Valid data can never trigger this; it indicates a corrupted moment
    summary or an implementation defect.
    """
