"""Risk (penalty) functions of a node-set strategy, exactly and certified.

The expected absolute loss p -> sum_k C(n,k) p^k (1-p)^(n-k) |p - a_k| is a
continuous piecewise polynomial in p: between consecutive distinct node
values every |p - a_k| has a fixed sign. Pieces are stored in the shifted
variable s = p - t_i, which keeps evaluation stable for large n where the
raw monomial basis loses digits near p = 1.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .bernstein import Polynomial, bernstein_matrix, bernstein_row, isolate_roots
from .errors import CertificationError, CoinmaxError, DomainError

__all__ = [
    "NodeSet",
    "PenaltyPiece",
    "PiecewisePenalty",
    "IntervalMaximum",
    "MaximaSet",
    "DEFAULT_EPS_MAX",
    "eval_abs_penalty",
    "eval_sq_penalty",
    "abs_penalty_values",
    "sq_penalty_values",
    "build_piecewise",
    "certify_maxima",
    "sup_norm_abs",
    "node_interval_maxima",
]

# Relative tolerance for membership in the set of absolute maxima; one order
# of slack above the equimax solver's 1e-10 residual target.
DEFAULT_EPS_MAX = 1e-9

# Candidate maxima closer than this are treated as one location (piece
# endpoints are shared by two pieces).
_POINT_MERGE_TOL = 1e-10


@dataclass(frozen=True)
class NodeSet:
    """Player II strategy: estimate a_k in [0,1] for each head count k."""

    n: int
    nodes: tuple[float, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"need n >= 1, got {self.n}")
        nodes = tuple(float(a) for a in self.nodes)
        if len(nodes) != self.n + 1:
            raise DomainError(f"need {self.n + 1} nodes for n={self.n}, got {len(nodes)}")
        for a in nodes:
            if not 0.0 <= a <= 1.0:
                raise DomainError(f"node {a} outside [0, 1]")
        object.__setattr__(self, "nodes", nodes)

    @property
    def ordered(self) -> bool:
        return all(x <= y for x, y in zip(self.nodes, self.nodes[1:]))

    @property
    def strictly_increasing(self) -> bool:
        return all(x < y for x, y in zip(self.nodes, self.nodes[1:]))

    def mirrored(self) -> "NodeSet":
        """The reflected strategy a'_k = 1 - a_{n-k}."""
        return NodeSet(self.n, tuple(1.0 - a for a in reversed(self.nodes)))


def eval_abs_penalty(ns: NodeSet, p: float) -> float:
    """Expected absolute loss at true probability p."""
    row = bernstein_row(ns.n, p)
    return float(row @ np.abs(p - np.array(ns.nodes)))


def eval_sq_penalty(ns: NodeSet, p: float) -> float:
    """Expected squared loss at true probability p."""
    row = bernstein_row(ns.n, p)
    return float(row @ (p - np.array(ns.nodes)) ** 2)


def abs_penalty_values(ns: NodeSet, ps: Sequence[float]) -> np.ndarray:
    """Vectorized eval_abs_penalty over many probabilities."""
    ps = np.asarray(ps, dtype=float)
    diff = np.abs(ps[:, None] - np.array(ns.nodes)[None, :])
    return np.einsum("ij,ij->i", bernstein_matrix(ns.n, ps), diff)


def sq_penalty_values(ns: NodeSet, ps: Sequence[float]) -> np.ndarray:
    """Vectorized eval_sq_penalty over many probabilities."""
    ps = np.asarray(ps, dtype=float)
    diff = (ps[:, None] - np.array(ns.nodes)[None, :]) ** 2
    return np.einsum("ij,ij->i", bernstein_matrix(ns.n, ps), diff)


@dataclass(frozen=True)
class PenaltyPiece:
    lo: float
    hi: float
    poly: Polynomial  # in the local variable s = p - lo, s in [0, hi - lo]

    def __call__(self, p: float) -> float:
        return self.poly(p - self.lo)


@dataclass(frozen=True)
class PiecewisePenalty:
    n: int
    breakpoints: tuple[float, ...]
    pieces: tuple[PenaltyPiece, ...]

    def piece_index(self, p: float) -> int:
        i = bisect.bisect_right(self.breakpoints, p) - 1
        return min(max(i, 0), len(self.pieces) - 1)

    def __call__(self, p: float) -> float:
        return self.pieces[self.piece_index(p)](p)


@lru_cache(maxsize=256)
def _pascal_rows(n: int) -> tuple[np.ndarray, ...]:
    import math

    return tuple(
        np.array([float(math.comb(k, j)) for j in range(k + 1)]) for k in range(n + 1)
    )


def _piece_poly(n: int, nodes: tuple[float, ...], t: float, u: float) -> Polynomial:
    """Local coefficients of the absolute-loss penalty on [t, u]."""
    rows = _pascal_rows(n)
    comb_n = rows[n]
    coeffs = np.zeros(n + 2)
    for k, a_k in enumerate(nodes):
        sign = 1.0 if a_k <= t else -1.0
        # (t+s)^k and (1-t-s)^(n-k) expanded in s
        left = rows[k] * t ** np.arange(k, -1, -1.0)
        right = rows[n - k] * (1.0 - t) ** np.arange(n - k, -1, -1.0)
        right = right * (-1.0) ** np.arange(n - k + 1)
        base = np.convolve(left, right)  # degree n
        scale = sign * comb_n[k]
        coeffs[: n + 1] += scale * (t - a_k) * base
        coeffs[1:] += scale * base
    return Polynomial(tuple(coeffs))


def build_piecewise(ns: NodeSet) -> PiecewisePenalty:
    """Exact piecewise-polynomial form of the absolute-loss penalty.

    Coincident nodes merge into a single breakpoint; piece count is
    (number of distinct interior nodes) + 1.
    """
    breaks = sorted({0.0, 1.0} | set(ns.nodes))
    pieces = tuple(
        PenaltyPiece(t, u, _piece_poly(ns.n, ns.nodes, t, u))
        for t, u in zip(breaks, breaks[1:])
    )
    return PiecewisePenalty(ns.n, tuple(breaks), pieces)


@dataclass(frozen=True)
class IntervalMaximum:
    index: int  # -1 for the piece left of the first breakpoint node
    location: float
    value: float


@dataclass(frozen=True)
class MaximaSet:
    """Certified global-maximum locations of a penalty function."""

    sup_norm: float
    points: tuple[float, ...]
    interval_maxima: tuple[IntervalMaximum, ...]


def _piece_candidates(piece: PenaltyPiece) -> list[tuple[float, float]]:
    """(location, value) pairs: endpoints plus interior critical points."""
    width = piece.hi - piece.lo
    deriv = piece.poly.derivative()
    cands = [(piece.lo, piece.poly(0.0)), (piece.hi, piece.poly(width))]
    if not deriv.is_zero:
        try:
            crit = isolate_roots(deriv, 0.0, width, 1e-12)
        except CoinmaxError as exc:
            raise CertificationError(
                f"root isolation failed on piece [{piece.lo}, {piece.hi}]"
            ) from exc
        cands.extend((piece.lo + s, piece.poly(s)) for s in crit)
    return cands


def certify_maxima(pp: PiecewisePenalty, eps_max: float = DEFAULT_EPS_MAX) -> MaximaSet:
    """Per-piece argmax over endpoints and derivative roots; global maxima set.

    Every candidate whose value is within relative eps_max of the sup norm is
    reported, so multiple maxima on one piece are kept (the single-max-per-
    interval property is conjectural).
    """
    if not 0.0 < eps_max <= 1e-6:
        raise DomainError(f"eps_max={eps_max} outside (0, 1e-6]")
    interval_maxima = []
    candidates: list[tuple[float, float]] = []
    for i, piece in enumerate(pp.pieces):
        cands = _piece_candidates(piece)
        loc, val = max(cands, key=lambda lv: lv[1])
        interval_maxima.append(IntervalMaximum(i - 1, loc, val))
        candidates.extend(cands)
    sup = max(rec.value for rec in interval_maxima)
    cutoff = sup * (1.0 - eps_max)
    points: list[float] = []
    for loc, val in sorted(candidates):
        if val < cutoff:
            continue
        if points and loc - points[-1] <= _POINT_MERGE_TOL:
            continue
        points.append(loc)
    return MaximaSet(sup, tuple(points), tuple(interval_maxima))


def sup_norm_abs(ns: NodeSet) -> float:
    """Sup norm of the absolute-loss penalty for this strategy."""
    return certify_maxima(build_piecewise(ns)).sup_norm


def node_interval_maxima(ns: NodeSet) -> tuple[IntervalMaximum, ...]:
    """Maxima over the n+2 node intervals [0,a0], [a0,a1], ..., [an,1].

    Requires an ordered node set. Zero-length intervals (coincident nodes or
    nodes at the boundary) contribute the penalty value at the point.
    """
    if not ns.ordered:
        raise DomainError("node_interval_maxima requires an ordered node set")
    pp = build_piecewise(ns)
    piece_max = {}
    for i, piece in enumerate(pp.pieces):
        loc, val = max(_piece_candidates(piece), key=lambda lv: lv[1])
        piece_max[i] = IntervalMaximum(i - 1, loc, val)
    ends = (0.0,) + ns.nodes + (1.0,)
    out = []
    for j in range(-1, ns.n + 1):
        lo, hi = ends[j + 1], ends[j + 2]
        if hi - lo == 0.0:
            out.append(IntervalMaximum(j, lo, pp(lo)))
        else:
            rec = piece_max[pp.piece_index(0.5 * (lo + hi))]
            out.append(IntervalMaximum(j, rec.location, rec.value))
    return tuple(out)
