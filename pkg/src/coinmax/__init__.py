"""Minimax estimation workbench for the probability of a biased coin.

Computes and certifies minimax estimators under absolute-error loss, the
closed-form squared-error minimax estimator, least-favorable priors with
Nash-equilibrium certificates, and asymptotic-distribution diagnostics.
"""

__version__ = "0.1.0"

from .bernstein import (
    Polynomial,
    RootInfo,
    bernstein_row,
    binomial_coefficient,
    binomial_weight,
    isolate_roots,
    isolate_roots_detailed,
)
from .errors import (
    CertificationError,
    CoinmaxError,
    ConvergenceError,
    DegenerateConfigurationError,
    DegenerateInputError,
    DomainError,
    InfeasibleWeightsError,
    RankDeficiencyError,
    RootIsolationError,
    SupportCountError,
)
from .penalty import (
    MaximaSet,
    NodeSet,
    PiecewisePenalty,
    build_piecewise,
    certify_maxima,
    eval_abs_penalty,
    eval_sq_penalty,
    sup_norm_abs,
)

__all__ = [name for name in dir() if not name.startswith("_")]
