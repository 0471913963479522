"""Exception hierarchy shared by all heraldsim modules."""


class HeraldSimError(Exception):
    """Base class for every error raised by this package."""


class TruncationExceeded(HeraldSimError, ValueError):
    """An operation would create a term with more photons than ``n_max``."""


class RegistryMismatch(HeraldSimError, ValueError):
    """States or transforms refer to incompatible mode registries."""


class DuplicateMode(HeraldSimError, ValueError):
    """A mode label appears more than once where distinct modes are required."""


class BadAngle(HeraldSimError, ValueError):
    """A beam-splitter angle lies outside ``[0, pi/2]``."""


class BadEfficiency(HeraldSimError, ValueError):
    """A detector efficiency lies outside ``[0, 1]``."""


class ZeroTrace(HeraldSimError, ZeroDivisionError):
    """Fidelity requested for an ensemble with (numerically) zero trace."""


class NoRoot(HeraldSimError, ValueError):
    """No interaction time reproduces the requested pair probability."""


class CheckFailed(HeraldSimError, AssertionError):
    """Simulation and closed-form values disagree beyond tolerance."""
