"""Iteration engines: fixed-count, escape-time and approximation.

Scalar functions follow the loop order of the classical renderers exactly
(test-then-assign, steps count applications of f, immediate escape reports 1).
The *_grid variants run the same recurrences on whole seed arrays; per pixel
they agree with the scalar engines step for step, with the one documented
difference that grid-poisoned cells are frozen to NaN rather than keeping the
first non-finite value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .funcexpr import MapExpr, evaluate
from .numerics import InvalidInputError, is_finite

BUDGET_EXHAUSTED = "budget-exhausted"
ESCAPED = "escaped"
APPROXIMATED = "approximated"
POISONED = "poisoned"

# compact codes for per-pixel termination rasters
TERM_CODES = {BUDGET_EXHAUSTED: 0, ESCAPED: 1, APPROXIMATED: 2, POISONED: 3}
TERM_NAMES = {code: name for name, code in TERM_CODES.items()}

MAX_FIXED_ITERS = 2**31 - 1
_NANC = complex(float("nan"), float("nan"))


@dataclass(frozen=True)
class IterationBudget:
    """Loop limits: top index t, trapping radius r, approximation distance."""

    max_iters: int = 50
    escape_radius: float = 2.0
    epsilon: float = 1e-5

    def __post_init__(self):
        if self.max_iters < 1:
            raise InvalidInputError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.escape_radius > 0:
            raise InvalidInputError(f"escape_radius must be > 0, got {self.escape_radius}")
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidInputError(f"epsilon must lie in (0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class OrbitOutcome:
    final_z: complex
    steps_taken: int
    termination: str


def iterate_fixed(f: MapExpr, seed: complex, n: int) -> OrbitOutcome:
    """n-fold image of the seed with no test conditions; f_0(z) = z."""
    if n < 0 or n > MAX_FIXED_ITERS:
        raise InvalidInputError(f"iteration count out of range: {n}")
    z = complex(seed)
    for step in range(1, n + 1):
        z = evaluate(f, z)
        if not is_finite(z):
            return OrbitOutcome(z, step, POISONED)
    return OrbitOutcome(z, n, BUDGET_EXHAUSTED)


def iterate_escape(f: MapExpr, seed: complex, budget: IterationBudget) -> OrbitOutcome:
    """Iterate until the next image leaves the trapping disc of radius r."""
    z = complex(seed)
    for i in range(budget.max_iters):
        nxt = evaluate(f, z)
        if not is_finite(nxt):
            return OrbitOutcome(nxt, i + 1, POISONED)
        if abs(nxt) > budget.escape_radius:
            return OrbitOutcome(nxt, i + 1, ESCAPED)
        z = nxt
    return OrbitOutcome(z, budget.max_iters, BUDGET_EXHAUSTED)


def iterate_approx(f: MapExpr, seed: complex, budget: IterationBudget) -> OrbitOutcome:
    """Iterate until two successive iterates are closer than epsilon."""
    z = complex(seed)
    for i in range(budget.max_iters):
        nxt = evaluate(f, z)
        if not is_finite(nxt):
            return OrbitOutcome(nxt, i + 1, POISONED)
        if abs(nxt - z) < budget.epsilon:
            return OrbitOutcome(nxt, i + 1, APPROXIMATED)
        z = nxt
    return OrbitOutcome(z, budget.max_iters, BUDGET_EXHAUSTED)


# ---------------------------------------------------------------------------
# whole-grid engines (the raster fast path)
# ---------------------------------------------------------------------------

def iterate_fixed_grid(f: MapExpr, seeds: np.ndarray, n: int):
    """Vector form of iterate_fixed over a seed array.

    Returns (final, poisoned): final values (NaN where poisoned) and the
    poison mask.  Poisoned cells freeze: once a component goes non-finite the
    cell never re-enters the recurrence, mirroring the scalar early exit.
    """
    if n < 0 or n > MAX_FIXED_ITERS:
        raise InvalidInputError(f"iteration count out of range: {n}")
    z = np.array(seeds, dtype=np.complex128, copy=True)
    poisoned = np.zeros(z.shape, dtype=bool)
    for _ in range(n):
        if poisoned.all():
            break
        z = evaluate(f, z)
        poisoned |= ~np.isfinite(z)
        z[poisoned] = _NANC
    return z, poisoned


def _iterate_tested_grid(f: MapExpr, seeds: np.ndarray, budget: IterationBudget,
                         mode: str):
    """Shared masked loop for the escape-time and approximation criteria."""
    z = np.array(seeds, dtype=np.complex128, copy=True)
    shape = z.shape
    final = z.copy()
    steps = np.full(shape, budget.max_iters, dtype=np.int32)
    term = np.full(shape, TERM_CODES[BUDGET_EXHAUSTED], dtype=np.uint8)
    active = np.ones(shape, dtype=bool)
    hit_code = TERM_CODES[ESCAPED] if mode == "escape" else TERM_CODES[APPROXIMATED]

    for i in range(budget.max_iters):
        if not active.any():
            break
        nxt = evaluate(f, z)
        finite = np.isfinite(nxt)
        poisoned_now = active & ~finite
        if mode == "escape":
            with np.errstate(invalid="ignore"):
                hit_now = active & finite & (np.abs(nxt) > budget.escape_radius)
        else:
            with np.errstate(invalid="ignore"):
                hit_now = active & finite & (np.abs(nxt - z) < budget.epsilon)
        done = poisoned_now | hit_now
        if done.any():
            final[done] = nxt[done]
            steps[done] = i + 1
            term[poisoned_now] = TERM_CODES[POISONED]
            term[hit_now] = hit_code
            active &= ~done
        z = np.where(active, nxt, z)

    final[active] = z[active]
    return final, steps, term


def iterate_escape_grid(f: MapExpr, seeds: np.ndarray, budget: IterationBudget):
    """Vector iterate_escape; returns (final, steps int32, term codes uint8)."""
    return _iterate_tested_grid(f, seeds, budget, "escape")


def iterate_approx_grid(f: MapExpr, seeds: np.ndarray, budget: IterationBudget):
    """Vector iterate_approx; returns (final, steps int32, term codes uint8)."""
    return _iterate_tested_grid(f, seeds, budget, "approx")
