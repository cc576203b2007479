"""Exception types raised by the library.

ConfigError subclasses indicate a bad request (CLI exit code 2), SolverError
subclasses indicate a numerical failure for a well-formed request (exit 3).
"""


class BiphotonError(Exception):
    """Base class for all library errors."""


class ConfigError(BiphotonError):
    """Invalid configuration or input."""


class SolverError(BiphotonError):
    """A numerical procedure failed or has no solution."""


class OutOfRange(ConfigError):
    """Wavelength outside the declared validity range of a dispersion model."""


class DegenerateGrid(ConfigError):
    """Frequency grid cannot resolve the state (too narrow or all zero)."""


class BadDomain(ConfigError):
    """Operation applied to an amplitude in the wrong domain."""


class ZeroHeraldRate(ConfigError):
    """Heralding filter passes no amplitude."""


class NotAsymmetric(ConfigError):
    """Neither group-velocity mismatch is small enough for the asymmetric regime."""


class AlreadyMatched(ConfigError):
    """Quasi-phasematching requested where the mismatch already vanishes."""


class ZeroMismatch(ConfigError):
    """Spacer carrier mismatch vanishes; spacer length cannot be quantized."""


class NoPhasematch(SolverError):
    """No phasematching angle exists for the requested process."""


class NoOppositeSign(SolverError):
    """Crystal and spacer mismatches have the same sign; no compensation point."""


class NumericalFailure(SolverError):
    """Linear algebra or root finding failed to converge."""
