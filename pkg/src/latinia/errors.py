"""Exception hierarchy shared by all latinia modules."""


class LatinIAError(Exception):
    """Base class for every error raised by this package."""


class NonConvergence(LatinIAError):
    """An iterative factorization did not reach the requested residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularMatrix(LatinIAError):
    """A pivot fell below the singularity threshold during inversion."""


class SingularChannel(SingularMatrix):
    """A channel matrix needed for beamformer propagation is singular."""


class RankDeficient(LatinIAError):
    """A matrix expected to have full column rank does not."""


class DependentInput(LatinIAError):
    """Gram-Schmidt met a vector that lies in the span of its predecessors."""


class ZeroVector(LatinIAError):
    """An operation that needs a direction was given a zero vector."""


class BudgetExceeded(LatinIAError):
    """The requested enumeration or search is larger than the allowed budget."""


class InvalidTriple(LatinIAError):
    """A column triple does not name three distinct in-range columns."""


class ChainStructureViolation(LatinIAError):
    """Alignment pairs of a scheme do not decompose into K disjoint 3-cycles."""


class ConfigError(LatinIAError):
    """Invalid simulation configuration."""
