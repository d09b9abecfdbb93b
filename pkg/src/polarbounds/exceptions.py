"""Exception types that separate bad input, failed hypotheses, and numerical failure."""

__all__ = [
    "DomainError",
    "MatrixFormatError",
    "HypothesisError",
    "SpectralOverlapError",
    "NumericalError",
    "InconsistentSystemError",
]


class DomainError(ValueError):
    """Input outside a routine's domain: wrong shape, not Hermitian, not PSD, singular."""


class MatrixFormatError(DomainError):
    """Matrix text file is malformed."""


class HypothesisError(DomainError):
    """Range-compatibility hypotheses required by a structured solve do not hold."""


class SpectralOverlapError(DomainError):
    """Two spectra overlap where a positive separation is required."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or lost too much precision."""


class InconsistentSystemError(NumericalError):
    """The assembled linear system has no solution within tolerance."""
