"""Rotation-number arithmetic: continued fractions, convergents, Diophantine checks.

All rational work is done on exact Python integers; floats only appear at the
very end (and in the plane helpers below, which are plain double precision).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi


class InvalidInputError(ValueError):
    """Raised when a numeric construction violates its preconditions."""


# ---------------------------------------------------------------------------
# plane helpers
# ---------------------------------------------------------------------------

def modulus(z: complex) -> float:
    """Euclidean distance of z from the origin."""
    return abs(z)


def angle(z):
    """Argument of z normalized to [0, 2*pi).  angle(0) is 0 by convention.

    Accepts a complex scalar or a complex ndarray (elementwise).  A tiny
    negative argument may round up to exactly 2*pi after the shift; that case
    folds back to 0 so the half-open range holds everywhere.
    """
    a = np.angle(z)
    if np.isscalar(a) or getattr(a, "ndim", 0) == 0:
        a = float(a)
        if a < 0.0:
            a += TWO_PI
        return 0.0 if a >= TWO_PI else a
    a = np.where(a < 0.0, a + TWO_PI, a)
    a[a >= TWO_PI] = 0.0
    return a


def from_polar(mod: float, ang: float) -> complex:
    """Inverse of (modulus, angle)."""
    return complex(mod * math.cos(ang), mod * math.sin(ang))


def is_finite(z: complex) -> bool:
    """True when both components are finite (no NaN/Inf)."""
    return math.isfinite(z.real) and math.isfinite(z.imag)


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuedFraction:
    """Finite continued fraction 1/(a1 + 1/(a2 + ... + 1/am)), all terms >= 1."""

    terms: tuple[int, ...]

    def __init__(self, terms):
        terms = tuple(int(t) for t in terms)
        if not terms:
            raise InvalidInputError("continued fraction needs at least one term")
        if any(t < 1 for t in terms):
            raise InvalidInputError(f"continued fraction terms must be >= 1, got {terms}")
        object.__setattr__(self, "terms", terms)


@dataclass(frozen=True)
class RationalApproximant:
    """Reduced fraction p/q with q > 0."""

    p: int
    q: int

    def __init__(self, p: int, q: int):
        p, q = int(p), int(q)
        if q <= 0:
            raise InvalidInputError(f"denominator must be positive, got {q}")
        g = math.gcd(p, q)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def value(self) -> float:
        return self.p / self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def convergents(cf: ContinuedFraction) -> list[RationalApproximant]:
    """Convergent sequence p_i/q_i of the fraction, one entry per term.

    Standard recurrence p_i = a_i*p_{i-1} + p_{i-2} on exact integers
    (Python integers are unbounded, so the arithmetic cannot overflow).
    The last convergent equals the full value of the fraction.
    """
    p_prev2, p_prev1 = 1, 0  # seeds for a leading integer part of 0
    q_prev2, q_prev1 = 0, 1
    out = []
    for a in cf.terms:
        p = a * p_prev1 + p_prev2
        q = a * q_prev1 + q_prev2
        out.append(RationalApproximant(p, q))
        p_prev2, p_prev1 = p_prev1, p
        q_prev2, q_prev1 = q_prev1, q
    return out


def cf_fraction(cf: ContinuedFraction) -> Fraction:
    """Exact rational value of the continued fraction."""
    last = convergents(cf)[-1]
    return Fraction(last.p, last.q)


def cf_value(cf: ContinuedFraction) -> float:
    """Value of the fraction in (0, 1], correctly rounded from the exact rational."""
    last = convergents(cf)[-1]
    return last.p / last.q


def diophantine_check(theta: float, r: float, k: float,
                      approximants: list[RationalApproximant]) -> list[bool]:
    """Per-approximant witness check of |theta - p/q| > r / q**k.

    A finite-depth report only: passing every listed p/q says nothing about
    rationals not in the list, and no finite computation can classify theta.
    """
    if r <= 0:
        raise InvalidInputError(f"r must be positive, got {r}")
    if k < 2:
        raise InvalidInputError(f"k must be >= 2, got {k}")
    if not 0.0 < theta < 1.0:
        raise InvalidInputError(f"theta must lie in (0, 1), got {theta}")
    report = []
    for approx in approximants:
        gap = abs(theta - approx.p / approx.q)
        report.append(gap > r / approx.q ** k)
    return report
