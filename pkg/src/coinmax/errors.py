"""Exception types shared across the package."""


class CoinmaxError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CoinmaxError):
    """An argument lies outside the documented domain of an operation."""


class DegenerateInputError(CoinmaxError):
    """An input is degenerate (e.g. the identically-zero polynomial)."""


class RootIsolationError(CoinmaxError):
    """Root isolation could not certify the requested interval."""


class CertificationError(CoinmaxError):
    """A maxima certification failed; wraps the underlying cause."""


class ConvergenceError(CoinmaxError):
    """Iterative solver failed to converge.

    Carries the best iterate found so that callers can report diagnostics.
    """

    def __init__(self, message, best_nodes=None, residual=None, iterations=None):
        super().__init__(message)
        self.best_nodes = best_nodes
        self.residual = residual
        self.iterations = iterations


class DegenerateConfigurationError(CoinmaxError):
    """A prior atom coincides with an estimator node (subgradient case)."""


class RankDeficiencyError(CoinmaxError):
    """The stationarity system is singular; reports the null-space dimension."""

    def __init__(self, message, nullity):
        super().__init__(message)
        self.nullity = nullity


class InfeasibleWeightsError(CoinmaxError):
    """The stationarity system has a solution with negative masses."""

    def __init__(self, message, masses):
        super().__init__(message)
        self.masses = tuple(masses)


class SupportCountError(CoinmaxError):
    """Fewer certified maxima than the n+2 prior atoms a certificate needs."""
