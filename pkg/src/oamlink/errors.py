"""Exception and warning types raised by oamlink."""


class OamLinkError(Exception):
    """Base class for all oamlink errors."""


class NonConvergence(OamLinkError):
    """Adaptive quadrature ran out of subdivisions before meeting tolerance."""


class PoleError(OamLinkError, ValueError):
    """Gamma function evaluated at a non-positive integer."""


class NoRoot(OamLinkError):
    """Equal-radius waist matching has no positive real solution."""


class UnsupportedState(OamLinkError, ValueError):
    """OAM state not supported by the requested field expression."""


class DomainError(OamLinkError, ValueError):
    """Parameter outside the domain of a model formula."""


class IndexOutOfRange(OamLinkError, IndexError):
    """Antenna index outside 1..N."""


class SingularMatrix(OamLinkError):
    """Regularised normal matrix of the MMSE equalizer is singular."""


class ConfigError(OamLinkError):
    """Problem with a scenario configuration file."""


class ParseError(ConfigError):
    """Configuration text could not be parsed."""


class ValidationError(ConfigError, ValueError):
    """Configuration parsed but violates a parameter invariant."""


class TruncationWarning(RuntimeWarning):
    """A bilateral series hit its order cap before converging."""


class IoError(OamLinkError, OSError):
    """Output file could not be written."""
