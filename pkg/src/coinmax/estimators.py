"""Estimator families: MLE, modified MLE, squared-error minimax, and the
equimax-solved absolute-error minimax (AEME).

The AEME solver equalizes the n+2 per-interval maxima of the absolute-loss
penalty (a Remez-style equioscillation system): damped Newton on the vector
of consecutive maxima differences, with unknowns reduced by the symmetry
a_k + a_{n-k} = 1 so that symmetry holds by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .errors import ConvergenceError, DomainError
from .penalty import (
    MaximaSet,
    NodeSet,
    build_piecewise,
    certify_maxima,
    node_interval_maxima,
    sup_norm_abs,
)

__all__ = [
    "METHODS",
    "SolverConfig",
    "AemeResult",
    "mle_nodes",
    "mmle_nodes",
    "seme_nodes",
    "aeme_nodes",
    "equimax_residual",
    "aeme_solve",
    "nodes_for_method",
]

METHODS = ("mle", "mmle", "seme", "aeme")


def mle_nodes(n: int) -> NodeSet:
    """Maximum-likelihood estimates a_k = k/n."""
    return NodeSet(n, tuple(k / n for k in range(n + 1)))


def mmle_nodes(n: int) -> NodeSet:
    """Modified maximum-likelihood estimates a_k = (k+1)/(n+2)."""
    return NodeSet(n, tuple((k + 1) / (n + 2) for k in range(n + 1)))


def seme_nodes(n: int) -> NodeSet:
    """Squared-error minimax estimates 1/2 + sqrt(n)/(1+sqrt(n)) (k/n - 1/2)."""
    c = math.sqrt(n) / (1.0 + math.sqrt(n))
    return NodeSet(n, tuple(0.5 + c * (k / n - 0.5) for k in range(n + 1)))


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iterations: int = 200
    fd_step: float = 1e-7
    multistart_count: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.tol <= 0 or self.fd_step <= 0:
            raise DomainError("solver tolerances must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")


@dataclass(frozen=True)
class AemeResult:
    nodes: NodeSet
    sup_norm: float
    maxima: MaximaSet
    equimax_residual: float
    iterations: int
    converged: bool


def equimax_residual(ns: NodeSet) -> float:
    """Spread max_j mu_j - min_j mu_j of the n+2 per-interval maxima."""
    if not ns.strictly_increasing:
        raise DomainError("equimax residual requires strictly increasing nodes")
    values = [rec.value for rec in node_interval_maxima(ns)]
    return max(values) - min(values)


def _free_count(n: int) -> int:
    # Unknowns after mirroring; the middle node is pinned at 1/2 when n is even.
    return (n + 1) // 2


def _assemble(n: int, free: np.ndarray) -> NodeSet:
    h = _free_count(n)
    nodes = np.empty(n + 1)
    nodes[:h] = free
    if (n + 1) % 2 == 1:
        nodes[h] = 0.5
    nodes[n + 1 - h :] = 1.0 - free[::-1]
    return NodeSet(n, tuple(nodes))


def _is_admissible(n: int, free: np.ndarray) -> bool:
    h = _free_count(n)
    if np.any(free <= 0.0) or np.any(free >= 1.0):
        return False
    full = np.concatenate([free, [0.5] if (n + 1) % 2 == 1 else [], 1.0 - free[::-1]])
    return bool(np.all(np.diff(full) > 0.0))


def _head_maxima(n: int, free: np.ndarray) -> np.ndarray:
    """First h+1 interval maxima mu_{-1} .. mu_{h-1}; mirrors cover the rest."""
    h = _free_count(n)
    recs = node_interval_maxima(_assemble(n, free))
    return np.array([recs[j].value for j in range(h + 1)])


def _residual_vector(n: int, free: np.ndarray) -> np.ndarray:
    mu = _head_maxima(n, free)
    return mu[:-1] - mu[1:]


def _full_residual(n: int, free: np.ndarray) -> float:
    values = [rec.value for rec in node_interval_maxima(_assemble(n, free))]
    return max(values) - min(values)


def _newton(n: int, free: np.ndarray, cfg: SolverConfig) -> tuple[np.ndarray, int, bool]:
    h = _free_count(n)
    x = free.copy()
    r = _residual_vector(n, x)
    iterations = 0
    for _ in range(cfg.max_iterations):
        if _full_residual(n, x) <= cfg.tol:
            return x, iterations, True
        iterations += 1
        jac = np.empty((h, h))
        for i in range(h):
            step = np.zeros(h)
            step[i] = cfg.fd_step
            jac[:, i] = (
                _residual_vector(n, x + step) - _residual_vector(n, x - step)
            ) / (2.0 * cfg.fd_step)
        try:
            dx = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            dx, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        lam = 1.0
        accepted = False
        while lam >= 1e-6:
            x_new = x + lam * dx
            if _is_admissible(n, x_new):
                r_new = _residual_vector(n, x_new)
                if np.max(np.abs(r_new)) < np.max(np.abs(r)):
                    x, r = x_new, r_new
                    accepted = True
                    break
            lam *= 0.5
        if not accepted:
            break
    return x, iterations, _full_residual(n, x) <= cfg.tol


def _multistart(n: int, cfg: SolverConfig) -> np.ndarray:
    """Nelder-Mead on the sup norm directly, jittered around MMLE and SEME."""
    h = _free_count(n)
    rng = np.random.default_rng(cfg.seed)
    anchors = [
        np.array(mmle_nodes(n).nodes[:h]),
        np.array(seme_nodes(n).nodes[:h]),
    ]
    starts = list(anchors)
    while len(starts) < cfg.multistart_count:
        base = anchors[len(starts) % 2]
        starts.append(base + rng.uniform(-0.02, 0.02, h))

    big = 1.0  # worst possible sup norm; inadmissible points rank past it

    def objective(free):
        if not _is_admissible(n, free):
            return big + float(np.sum(np.abs(free - 0.25)))
        return sup_norm_abs(_assemble(n, free))

    best, best_val = None, np.inf
    for start in starts:
        res = minimize(objective, start, method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 2000})
        if res.fun < best_val:
            best, best_val = res.x, res.fun
    return np.asarray(best)


@lru_cache(maxsize=128)
def _aeme_solve_cached(n: int, cfg: SolverConfig) -> AemeResult:
    free0 = np.array(mmle_nodes(n).nodes[: _free_count(n)])
    x, iterations, converged = _newton(n, free0, cfg)
    if not converged:
        x2, it2, converged2 = _newton(n, _multistart(n, cfg), cfg)
        iterations += it2
        if converged2 or _full_residual(n, x2) < _full_residual(n, x):
            x, converged = x2, converged2
    nodes = _assemble(n, x)
    residual = _full_residual(n, x)
    if not converged:
        raise ConvergenceError(
            f"equimax solver stalled at residual {residual:.3e} for n={n}",
            best_nodes=nodes,
            residual=residual,
            iterations=iterations,
        )
    maxima = certify_maxima(build_piecewise(nodes))
    return AemeResult(
        nodes=nodes,
        sup_norm=maxima.sup_norm,
        maxima=maxima,
        equimax_residual=residual,
        iterations=iterations,
        converged=converged,
    )


def aeme_solve(n: int, cfg: SolverConfig | None = None) -> AemeResult:
    """Solve for the absolute-error minimax node set by equalizing maxima.

    Raises ConvergenceError (carrying the best iterate and its residual) if
    the damped Newton iteration and the multistart fallback both stall.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return _aeme_solve_cached(n, cfg if cfg is not None else SolverConfig())


def aeme_nodes(n: int, cfg: SolverConfig | None = None) -> NodeSet:
    return aeme_solve(n, cfg).nodes


def nodes_for_method(method: str, n: int, cfg: SolverConfig | None = None) -> NodeSet:
    if method == "mle":
        return mle_nodes(n)
    if method == "mmle":
        return mmle_nodes(n)
    if method == "seme":
        return seme_nodes(n)
    if method == "aeme":
        return aeme_nodes(n, cfg)
    raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")
