"""Binomial/Bernstein weights and certified real-root isolation on an interval.

The root isolator subdivides recursively, certifying subintervals where the
derivative cannot vanish (Taylor-shifted coefficient bound) so that each
bracket holds exactly one root, then refines brackets with Brent's method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateInputError, DomainError, RootIsolationError

__all__ = [
    "Polynomial",
    "RootInfo",
    "binomial_coefficient",
    "binomial_weight",
    "bernstein_row",
    "bernstein_matrix",
    "isolate_roots",
    "isolate_roots_detailed",
]

# |f'| below this at a root marks the root as (near-)multiple.
MULTIPLE_ROOT_DERIVATIVE_FLOOR = 1e-10


def binomial_coefficient(n: int, k: int) -> float:
    """C(n, k) as a float (exact integer arithmetic before the final rounding)."""
    if k < 0 or k > n:
        raise DomainError(f"k={k} outside [0, {n}]")
    return float(math.comb(n, k))


@lru_cache(maxsize=256)
def _binomial_row(n: int) -> np.ndarray:
    return np.array([float(math.comb(n, k)) for k in range(n + 1)])


def binomial_weight(n: int, k: int, p: float) -> float:
    """C(n,k) p^k (1-p)^(n-k), the weight of outcome k in n tosses."""
    if n < 0:
        raise DomainError(f"n={n} must be >= 0")
    if k < 0 or k > n:
        raise DomainError(f"k={k} outside [0, {n}]")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    return binomial_coefficient(n, k) * p**k * (1.0 - p) ** (n - k)


def bernstein_row(n: int, p: float) -> np.ndarray:
    """All n+1 binomial weights at p; entries sum to 1."""
    if n < 0:
        raise DomainError(f"n={n} must be >= 0")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    k = np.arange(n + 1)
    return _binomial_row(n) * p**k * (1.0 - p) ** (n - k)


def bernstein_matrix(n: int, ps: Sequence[float]) -> np.ndarray:
    """Binomial weight rows for many p values at once, shape (len(ps), n+1)."""
    ps = np.asarray(ps, dtype=float)
    k = np.arange(n + 1)
    return _binomial_row(n) * ps[:, None] ** k * (1.0 - ps[:, None]) ** (n - k)


@dataclass(frozen=True)
class Polynomial:
    """Real univariate polynomial, coefficients ordered low degree first.

    Trailing exact zeros are stripped so the leading coefficient is nonzero
    unless the polynomial is identically zero.
    """

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        if not coeffs:
            coeffs = (0.0,)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coefficients) == 1 and self.coefficients[0] == 0.0

    def __call__(self, x):
        # Horner; works for scalars and numpy arrays alike
        acc = self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0.0,))
        c = self.coefficients
        return Polynomial(tuple(c[i] * i for i in range(1, len(c))))


class RootInfo(NamedTuple):
    x: float
    multiple: bool  # derivative magnitude at the root below the floor


def _horner(coeffs: np.ndarray, x: float) -> float:
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


@lru_cache(maxsize=64)
def _binom_matrix(size: int) -> np.ndarray:
    m = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1):
            m[j, i] = math.comb(i, j)
    return m


def _taylor_shift(coeffs: np.ndarray, a: float) -> np.ndarray:
    """Coefficients of p(a + s) as a polynomial in s."""
    if a == 0.0:
        return coeffs.copy()
    size = len(coeffs)
    delta = np.arange(size)[None, :] - np.arange(size)[:, None]
    powers = np.where(delta >= 0, float(a) ** np.maximum(delta, 0), 0.0)
    return (_binom_matrix(size) * powers) @ coeffs


def _range_bound(shifted: np.ndarray, width: float) -> float:
    """Upper bound for |q| on [0, width] given coefficients of q at the left end."""
    w_pow = width ** np.arange(len(shifted))
    return float(np.abs(shifted) @ w_pow)


def _deriv_cannot_vanish(deriv: np.ndarray, a: float, b: float) -> bool:
    e = _taylor_shift(deriv, a)
    w_pow = (b - a) ** np.arange(len(e))
    tail = float(np.abs(e[1:]) @ w_pow[1:]) if len(e) > 1 else 0.0
    return abs(e[0]) > tail


def isolate_roots(poly: Polynomial, lo: float, hi: float, tol: float = 1e-12) -> list[float]:
    """All real roots of poly in [lo, hi], each within +-tol, strictly increasing.

    Multiple (or unresolvably close) roots are reported once.
    """
    return [r.x for r in isolate_roots_detailed(poly, lo, hi, tol)]


def isolate_roots_detailed(
    poly: Polynomial, lo: float, hi: float, tol: float = 1e-12
) -> list[RootInfo]:
    if poly.is_zero:
        raise DegenerateInputError("cannot isolate roots of the zero polynomial")
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if poly.degree == 0:
        return []

    c = np.array(poly.coefficients)
    d = c[1:] * np.arange(1, len(c))
    w_floor = max(tol, 1e-13)

    found: list[float] = []

    def refine(a: float, b: float, fa: float, fb: float) -> float:
        if fa == 0.0:
            return a
        if fb == 0.0:
            return b
        return brentq(lambda x: _horner(c, x), a, b, xtol=tol, rtol=8.9e-16)

    stack = [(lo, hi)]
    budget = 200_000
    while stack:
        budget -= 1
        if budget < 0:
            raise RootIsolationError(
                f"subdivision budget exhausted isolating degree-{poly.degree} roots"
            )
        a, b = stack.pop()
        fa, fb = _horner(c, a), _horner(c, b)
        if fa == 0.0:
            found.append(a)
            a += w_floor
            if a >= b:
                continue
            fa = _horner(c, a)
            if fa == 0.0:
                continue
        if fb == 0.0:
            found.append(b)
            b -= w_floor
            if b <= a:
                continue
            fb = _horner(c, b)
            if fb == 0.0:
                continue
        if _deriv_cannot_vanish(d, a, b):
            if (fa > 0.0) != (fb > 0.0):
                found.append(refine(a, b, fa, fb))
            continue
        if b - a <= w_floor:
            if (fa > 0.0) != (fb > 0.0):
                found.append(refine(a, b, fa, fb))
            else:
                # Derivative may vanish here; accept a near-multiple root only
                # if f can plausibly reach zero within the interval.
                m = 0.5 * (a + b)
                fm = _horner(c, m)
                reachable = _range_bound(_taylor_shift(d, a), b - a) * (b - a)
                if abs(fm) <= reachable:
                    found.append(m)
            continue
        m = 0.5 * (a + b)
        stack.append((m, b))
        stack.append((a, m))

    found.sort()
    merge_tol = max(4.0 * tol, 1e-12)
    merged: list[float] = []
    for x in found:
        if merged and x - merged[-1] <= merge_tol:
            continue
        merged.append(x)
    return [
        RootInfo(x, bool(abs(_horner(d, x)) < MULTIPLE_ROOT_DERIVATIVE_FLOOR))
        for x in merged
    ]
