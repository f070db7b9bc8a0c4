"""Exceptions raised by hydrogenoid.

All of them derive from :class:`HydrogenoidError`; the ones signalling bad
input also derive from :class:`ValueError` so that callers catching the
builtin keep working.
"""


class HydrogenoidError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(HydrogenoidError, ValueError):
    """Invalid physical or numerical parameters (nu = 0, kappa out of range, ...)."""


class ConfigError(ParameterError):
    """Malformed or unknown entries in a run configuration."""


class DomainError(HydrogenoidError, ValueError):
    """A special function was evaluated outside its domain."""


class PoleError(DomainError):
    """Evaluation exactly at a pole of Gamma, digamma or the spectral function."""


class TraceError(HydrogenoidError, ValueError):
    """The boundary trace (g0, g1) could not be extracted: not in the adjoint domain."""


class SpectralPointError(HydrogenoidError, ArithmeticError):
    """The spectral point of a resolvent is an eigenvalue of the extension."""


class SolverError(HydrogenoidError, RuntimeError):
    """A root bracket, integrator or eigensolver failed."""
