"""Equipotential classification models.

The main model is the holed k-branched star: k half-open angular sectors
about an anchor point minus a central disc (the stand-in for a Siegel
compactum).  Concentric circles and straight-line grids are kept for
comparison; they index by distance rings and by coordinate bands.

Every classifier has a scalar form (exact integer result) and a *_grid form
running the identical arithmetic on complex arrays; the two agree per point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import TWO_PI, InvalidInputError, angle

HOLE = -1  # level index of points inside the star hole

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass(frozen=True)
class StarModel:
    """Holed k-branched star anchored at the fixed point.

    branches partition the full turn (the existence interval, fixed at 2*pi)
    into equal angular sectors; hole_radius is the radius of the central
    disc, measured in the dynamical plane on the iterated point.  A radius
    of zero means the hole is empty (the Cremer case).
    """

    branches: int
    hole_radius: float = 0.5
    anchor: complex = 0j

    EXISTENCE_INTERVAL = TWO_PI

    def __post_init__(self):
        if not isinstance(self.branches, int) or self.branches < 1:
            raise InvalidInputError(f"branches must be a positive integer, got {self.branches}")
        if not (math.isfinite(self.hole_radius) and self.hole_radius >= 0.0):
            raise InvalidInputError(f"hole_radius must be finite and >= 0, got {self.hole_radius}")

    @property
    def potential_rate(self) -> float:
        return self.EXISTENCE_INTERVAL / self.branches


def star_classify(model: StarModel, z: complex) -> int:
    """Level index of z: -1 inside the hole, else the sector number in [0, k).

    Sector j is the half-open wedge [j*2pi/k, (j+1)*2pi/k) about the anchor;
    the truncated quotient is clamped to k-1 for angles that round to a full
    turn, so the result range is exact.
    """
    w = z - model.anchor
    if abs(w) <= model.hole_radius:
        return HOLE
    index = int(angle(w) / model.potential_rate)
    return min(index, model.branches - 1)


def star_classify_grid(model: StarModel, zs: np.ndarray) -> np.ndarray:
    """star_classify over a complex array; int32 result, same values."""
    w = zs - model.anchor
    with np.errstate(invalid="ignore"):
        inside = np.abs(w) <= model.hole_radius
        index = (angle(w) / model.potential_rate).astype(np.int32)
    np.minimum(index, model.branches - 1, out=index)
    return np.where(inside, np.int32(HOLE), index)


def circles_classify(ring_width: float, anchor: complex, z: complex) -> int:
    """Ring number of z among concentric circles of the given width."""
    if not ring_width > 0:
        raise InvalidInputError(f"ring_width must be > 0, got {ring_width}")
    return math.floor(abs(z - anchor) / ring_width)


def circles_classify_grid(ring_width: float, anchor: complex, zs: np.ndarray) -> np.ndarray:
    if not ring_width > 0:
        raise InvalidInputError(f"ring_width must be > 0, got {ring_width}")
    with np.errstate(invalid="ignore"):
        return np.floor(np.abs(zs - anchor) / ring_width).astype(np.int32)


def grid_classify(orientation: str, spacing: float, z: complex) -> int:
    """Band number of z among horizontal or vertical lines; may be negative."""
    if not spacing > 0:
        raise InvalidInputError(f"spacing must be > 0, got {spacing}")
    if orientation == HORIZONTAL:
        return math.floor(z.imag / spacing)
    if orientation == VERTICAL:
        return math.floor(z.real / spacing)
    raise InvalidInputError(f"orientation must be horizontal or vertical, got {orientation!r}")


def grid_classify_grid(orientation: str, spacing: float, zs: np.ndarray) -> np.ndarray:
    if not spacing > 0:
        raise InvalidInputError(f"spacing must be > 0, got {spacing}")
    if orientation == HORIZONTAL:
        coords = zs.imag
    elif orientation == VERTICAL:
        coords = zs.real
    else:
        raise InvalidInputError(f"orientation must be horizontal or vertical, got {orientation!r}")
    with np.errstate(invalid="ignore"):
        return np.floor(coords / spacing).astype(np.int32)
