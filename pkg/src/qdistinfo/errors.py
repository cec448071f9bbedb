"""Exception hierarchy shared by all modules.

Two broad families matter to callers (and to the CLI exit-code mapping):
input/validation problems, and numerical-conditioning problems that arise
mid-computation on inputs that were formally valid.
"""


class QdistError(Exception):
    """Base class for all package errors."""


class ValidationError(QdistError):
    """An input fails a structural invariant (Hermiticity, trace, positivity,
    completeness, range, or file schema)."""


class ShapeError(ValidationError):
    """Operands have mismatched or illegal dimensions."""


class ConditioningError(QdistError):
    """An operation needs better-conditioned input than it was given
    (near-singular state where an inverse power is required)."""


class RankError(ConditioningError):
    """A matrix is numerically singular where invertibility is required."""


class DomainError(ConditioningError):
    """A spectral function was applied outside its domain
    (e.g. square root of an operator with a significantly negative eigenvalue)."""


class SingularityError(ConditioningError):
    """A vanishing probability or log argument is paired with non-negligible
    weight, so the requested quantity diverges."""


class DivergenceInfiniteError(QdistError):
    """A relative-information quantity is infinite: the numerator distribution
    puts weight where the reference distribution has none."""
