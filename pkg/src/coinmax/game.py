"""Two-player zero-sum layer: expected penalty under a prior, least-favorable
weights, Nash-equilibrium certificates, and the exact closed forms for one
and two tosses.

Certificates for general n are numerical: the equilibrium is certified by
residuals (value gap, stationarity, interlacing, mass feasibility) rather
than claimed proved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bernstein import binomial_weight
from .errors import (
    DegenerateConfigurationError,
    DomainError,
    InfeasibleWeightsError,
    RankDeficiencyError,
    SupportCountError,
)
from .estimators import SolverConfig, aeme_solve
from .penalty import NodeSet, build_piecewise, eval_abs_penalty

__all__ = [
    "AtomicMeasure",
    "NashCertificate",
    "CertificateConfig",
    "expected_penalty",
    "penalty_gradient",
    "stationarity_weights",
    "nash_certificate",
    "nash_n1_closed",
    "nash_n2_closed",
    "newton_cubic_root",
    "radical_cubic_root",
]

_MASS_FEASIBILITY_TOL = -1e-10
_ATOM_NODE_SEPARATION = 1e-12


@dataclass(frozen=True)
class AtomicMeasure:
    """Player I mixed strategy: point masses m_j at support points p_j."""

    points: tuple[float, ...]
    masses: tuple[float, ...]

    def __post_init__(self):
        points = tuple(float(p) for p in self.points)
        masses = tuple(float(m) for m in self.masses)
        if len(points) != len(masses) or not points:
            raise DomainError("points and masses must be same nonzero length")
        if any(not 0.0 <= p <= 1.0 for p in points):
            raise DomainError("support points must lie in [0, 1]")
        if any(x >= y for x, y in zip(points, points[1:])):
            raise DomainError("support points must be strictly increasing")
        if any(m < 0.0 for m in masses):
            raise DomainError("masses must be nonnegative")
        if abs(sum(masses) - 1.0) > 1e-12:
            raise DomainError(f"masses sum to {sum(masses)}, not 1")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "masses", masses)


def expected_penalty(ns: NodeSet, m: AtomicMeasure) -> float:
    """Expected absolute-loss penalty of strategy ns against the prior m."""
    return float(sum(w * eval_abs_penalty(ns, p) for p, w in zip(m.points, m.masses)))


def penalty_gradient(ns: NodeSet, m: AtomicMeasure) -> np.ndarray:
    """dE/da_k = -sum_j m_j C(n,k) p_j^k (1-p_j)^(n-k) sign(p_j - a_k).

    Undefined (subgradient only) when an atom sits on a node.
    """
    for p in m.points:
        for a in ns.nodes:
            if abs(p - a) <= _ATOM_NODE_SEPARATION:
                raise DegenerateConfigurationError(
                    f"atom {p} coincides with node {a}; gradient undefined"
                )
    grad = np.zeros(ns.n + 1)
    for k, a_k in enumerate(ns.nodes):
        grad[k] = -sum(
            w * binomial_weight(ns.n, k, p) * math.copysign(1.0, p - a_k)
            for p, w in zip(m.points, m.masses)
        )
    return grad


def _interlaces(nodes: Sequence[float], support: Sequence[float]) -> bool:
    if len(support) != len(nodes) + 1:
        return False
    merged = []
    for p, a in zip(support, nodes):
        merged += [p, a]
    merged.append(support[-1])
    return all(x < y for x, y in zip(merged, merged[1:]))


def _stationarity_system(ns: NodeSet, support: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    n = ns.n
    a = np.empty((n + 2, n + 2))
    for k, a_k in enumerate(ns.nodes):
        a[k] = [
            binomial_weight(n, k, p) * math.copysign(1.0, p - a_k) for p in support
        ]
    a[n + 1] = 1.0
    b = np.zeros(n + 2)
    b[n + 1] = 1.0
    return a, b


def stationarity_weights(ns: NodeSet, support: Sequence[float]) -> AtomicMeasure:
    """Masses on the given support making every dE/da_k vanish.

    Solves the (n+2)-square linear system {gradient = 0, total mass = 1}.
    Raises InfeasibleWeightsError when a mass falls below -1e-10 and
    RankDeficiencyError when the system is singular.
    """
    support = tuple(float(p) for p in support)
    if len(support) != ns.n + 2:
        raise DomainError(f"need {ns.n + 2} support points, got {len(support)}")
    if not _interlaces(ns.nodes, support):
        raise DomainError("support must interlace the nodes")
    a, b = _stationarity_system(ns, support)
    try:
        masses = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        s = np.linalg.svd(a, compute_uv=False)
        nullity = int(np.sum(s < s[0] * 1e-12))
        raise RankDeficiencyError(
            f"stationarity system is singular (null space dimension {nullity})",
            nullity=nullity,
        ) from None
    if np.any(masses < _MASS_FEASIBILITY_TOL):
        raise InfeasibleWeightsError(
            f"negative masses {masses.min():.3e} on support {support}",
            masses=masses.tolist(),
        )
    masses = np.where(masses < 0.0, 0.0, masses)  # clip roundoff-level negatives
    masses /= masses.sum()
    return AtomicMeasure(support, tuple(masses))


@dataclass(frozen=True)
class CertificateConfig:
    tol: float = 1e-8
    solver: SolverConfig = field(default_factory=SolverConfig)


@dataclass(frozen=True)
class NashCertificate:
    """Strategy pair plus the residuals certifying (or refuting) equilibrium."""

    n: int
    nodes: NodeSet
    prior: AtomicMeasure
    game_value: float
    stationarity_residual: float
    value_gap: float
    interlacing_ok: bool
    valid: bool
    condition_number: float
    maxima_points: tuple[float, ...]
    notes: tuple[str, ...] = ()


def _finish_certificate(
    n: int,
    nodes: NodeSet,
    prior: AtomicMeasure,
    game_value: float,
    maxima_points: tuple[float, ...],
    tol: float,
    condition_number: float,
    notes: tuple[str, ...],
    masses_feasible: bool,
) -> NashCertificate:
    value_gap = abs(expected_penalty(nodes, prior) - game_value)
    try:
        stationarity = float(np.max(np.abs(penalty_gradient(nodes, prior))))
    except DegenerateConfigurationError:
        stationarity = math.inf
        notes = notes + ("atom-on-node degeneracy; gradient undefined",)
    interlacing_ok = _interlaces(nodes.nodes, prior.points)
    valid = (
        masses_feasible
        and interlacing_ok
        and value_gap <= tol
        and stationarity <= tol
    )
    return NashCertificate(
        n=n,
        nodes=nodes,
        prior=prior,
        game_value=game_value,
        stationarity_residual=stationarity,
        value_gap=value_gap,
        interlacing_ok=interlacing_ok,
        valid=valid,
        condition_number=condition_number,
        maxima_points=maxima_points,
        notes=notes,
    )


def nash_certificate(n: int, cfg: CertificateConfig | None = None) -> NashCertificate:
    """Certificate pipeline: solve AEME, support the prior on the certified
    maxima, solve for least-favorable weights, then fill in residuals."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    cfg = cfg if cfg is not None else CertificateConfig()
    result = aeme_solve(n, cfg.solver)
    nodes = result.nodes
    points = list(result.maxima.points)
    notes: tuple[str, ...] = ()
    if len(points) != n + 2:
        if len(points) < n + 2:
            raise SupportCountError(
                f"{len(points)} certified maxima, need {n + 2} prior atoms"
            )
        pp = build_piecewise(nodes)
        points = sorted(sorted(points, key=pp, reverse=True)[: n + 2])
        notes = (f"{len(result.maxima.points)} certified maxima; kept the {n + 2} largest",)
    support = tuple(points)
    a, _ = _stationarity_system(nodes, support)
    condition_number = float(np.linalg.cond(a))
    try:
        prior = stationarity_weights(nodes, support)
        masses_feasible = True
    except InfeasibleWeightsError as exc:
        clipped = np.maximum(np.array(exc.masses), 0.0)
        prior = AtomicMeasure(support, tuple(clipped / clipped.sum()))
        masses_feasible = False
        notes = notes + (f"infeasible raw masses: {exc.masses}",)
    return _finish_certificate(
        n,
        nodes,
        prior,
        result.sup_norm,
        result.maxima.points,
        cfg.tol,
        condition_number,
        notes,
        masses_feasible,
    )


def nash_n1_closed() -> NashCertificate:
    """Exact one-toss equilibrium: nodes (1/4, 3/4), prior (1/4, 1/2, 1/4)
    on {0, 1/2, 1}, value 1/4."""
    nodes = NodeSet(1, (0.25, 0.75))
    prior = AtomicMeasure((0.0, 0.5, 1.0), (0.25, 0.5, 0.25))
    a, _ = _stationarity_system(nodes, prior.points)
    return _finish_certificate(
        1,
        nodes,
        prior,
        0.25,
        (0.0, 0.5, 1.0),
        CertificateConfig().tol,
        float(np.linalg.cond(a)),
        (),
        True,
    )


def newton_cubic_root() -> float:
    """The unique real root of x^3 - x^2 + 3x - 1, by Newton from 0.35."""
    x = 0.35
    for _ in range(60):
        f = ((x - 1.0) * x + 3.0) * x - 1.0
        df = (3.0 * x - 2.0) * x + 3.0
        step = f / df
        x -= step
        if abs(step) < 1e-16:
            break
    return x


def radical_cubic_root() -> float:
    """The same root in closed form: (1 + u - 8/u)/3 with u = cbrt(1+3*sqrt(57))."""
    u = (1.0 + 3.0 * math.sqrt(57.0)) ** (1.0 / 3.0)
    return (1.0 + u - 8.0 / u) / 3.0


def nash_n2_closed() -> NashCertificate:
    """Exact two-toss equilibrium built from the cubic root p1 = 0.3611...

    p1 is computed both by Newton on the cubic and from the radical form;
    the two must agree to 1e-13.
    """
    p1 = newton_cubic_root()
    if abs(p1 - radical_cubic_root()) > 1e-13:
        raise ArithmeticError("cubic root computations disagree beyond 1e-13")
    q = p1 * p1 + (1.0 - p1) ** 2 + 1.0
    a0 = 2.0 * p1 * (1.0 - p1) ** 2 / q
    nodes = NodeSet(2, (a0, 0.5, 1.0 - a0))
    m1 = 0.5 / q
    m0 = 0.5 - m1
    support = (0.0, p1, 1.0 - p1, 1.0)
    prior = AtomicMeasure(support, (m0, m1, m1, m0))
    a, _ = _stationarity_system(nodes, support)
    return _finish_certificate(
        2,
        nodes,
        prior,
        a0,
        support,
        CertificateConfig().tol,
        float(np.linalg.cond(a)),
        (),
        True,
    )
