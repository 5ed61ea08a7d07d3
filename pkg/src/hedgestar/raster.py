"""Viewport mapping, the per-pixel render pipeline and contour extraction.

A render walks every pixel center, iterates the map (a fixed number of steps
for the equipotential methods, the escape/approximation criteria for the
classical ones) and stores one classification level per pixel.  Contours are
the trespass set: pixels whose level differs from the left or up neighbour.

Everything here is deterministic: the same RenderConfig always produces the
same IndexField and therefore the same image bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import dynamics, equipotential
from .dynamics import TERM_CODES, IterationBudget
from .funcexpr import MapExpr
from .numerics import InvalidInputError

EQUIPOTENTIAL_STAR = "equipotential-star"
EQUIPOTENTIAL_CIRCLES = "equipotential-circles"
EQUIPOTENTIAL_GRID = "equipotential-grid"
ESCAPE_TIME = "escape-time"
APPROXIMATION = "approximation"

METHODS = (EQUIPOTENTIAL_STAR, EQUIPOTENTIAL_CIRCLES, EQUIPOTENTIAL_GRID,
           ESCAPE_TIME, APPROXIMATION)
EQUIPOTENTIAL_METHODS = (EQUIPOTENTIAL_STAR, EQUIPOTENTIAL_CIRCLES, EQUIPOTENTIAL_GRID)

OUTPUT_MODES = ("contour", "filled")

# outside/poison sentinel for the line-grid model, whose legitimate band
# numbers may be negative (so -1 is taken)
GRID_OUTSIDE_LEVEL = int(np.iinfo(np.int32).min)


class ConfigError(ValueError):
    """A render parameter failed validation; names the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned window of the plane mapped onto a pixel raster."""

    left: float
    right: float
    top: float
    bottom: float
    width: int
    height: int

    def __post_init__(self):
        for name in ("left", "right", "top", "bottom"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"viewport {name} must be finite")
        if not self.left < self.right:
            raise InvalidInputError(f"viewport needs left < right, got {self.left} >= {self.right}")
        if not self.bottom < self.top:
            raise InvalidInputError(f"viewport needs bottom < top, got {self.bottom} >= {self.top}")
        if self.width < 1 or self.height < 1:
            raise InvalidInputError(f"raster size must be positive, got {self.width}x{self.height}")

    @property
    def pixel_size_x(self) -> float:
        return (self.right - self.left) / self.width

    @property
    def pixel_size_y(self) -> float:
        return (self.top - self.bottom) / self.height


def pixel_to_plane(viewport: Viewport, x: int, y: int) -> complex:
    """Plane point at the CENTER of pixel cell (x, y); injective on the grid."""
    if not (0 <= x < viewport.width and 0 <= y < viewport.height):
        raise InvalidInputError(
            f"pixel ({x}, {y}) outside raster {viewport.width}x{viewport.height}")
    re = viewport.left + (x + 0.5) * viewport.pixel_size_x
    im = viewport.top - (y + 0.5) * viewport.pixel_size_y
    return complex(re, im)


def plane_grid(viewport: Viewport) -> np.ndarray:
    """(height, width) complex array of pixel centers.

    Row-major, row 0 at the top; entry [y, x] is bit-identical to
    pixel_to_plane(viewport, x, y).
    """
    xs = np.arange(viewport.width, dtype=np.float64)
    ys = np.arange(viewport.height, dtype=np.float64)
    re = viewport.left + (xs + 0.5) * viewport.pixel_size_x
    im = viewport.top - (ys + 0.5) * viewport.pixel_size_y
    return re[np.newaxis, :] + 1j * im[:, np.newaxis]


@dataclass
class IndexField:
    """Per-pixel classification levels plus termination tags.

    levels[y, x] is the branch/ring/band index for equipotential renders
    (hole_level marking hole and poisoned cells) or steps_taken for the
    classical methods (hole_level None).
    """

    levels: np.ndarray        # int32 (height, width)
    terminations: np.ndarray  # uint8 (height, width), dynamics.TERM_CODES
    viewport: Viewport
    method: str
    hole_level: int | None

    @property
    def shape(self):
        return self.levels.shape


@dataclass(frozen=True)
class RenderConfig:
    """Everything a render needs; validate() reports the first bad field."""

    function: MapExpr
    viewport: Viewport
    method: str = EQUIPOTENTIAL_STAR
    anchor: complex = 0j
    iters: int = 100
    escape_radius: float = 2.0
    epsilon: float = 1e-5
    branches: int = 12
    hole_radius: float = 0.5
    ring_width: float = 0.25
    spacing: float = 0.25
    orientation: str = equipotential.HORIZONTAL
    palette: "PaletteSpec | None" = None  # defaulted in validate()
    output: str = "contour"

    def validate(self) -> "RenderConfig":
        from .palettes import PaletteSpec  # local import, palettes imports raster

        if self.method not in METHODS:
            raise ConfigError("method", f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if self.output not in OUTPUT_MODES:
            raise ConfigError("output", f"unknown output mode {self.output!r}")
        if self.iters < 1:
            raise ConfigError("iters", f"must be >= 1, got {self.iters}")
        if not (math.isfinite(self.anchor.real) and math.isfinite(self.anchor.imag)):
            raise ConfigError("anchor", "must be finite")
        if self.method == EQUIPOTENTIAL_STAR:
            if self.branches < 1:
                raise ConfigError("branches", f"must be >= 1, got {self.branches}")
            if not (math.isfinite(self.hole_radius) and self.hole_radius >= 0):
                raise ConfigError("hole-radius", f"must be finite and >= 0, got {self.hole_radius}")
        if self.method == EQUIPOTENTIAL_CIRCLES and not self.ring_width > 0:
            raise ConfigError("ring-width", f"must be > 0, got {self.ring_width}")
        if self.method == EQUIPOTENTIAL_GRID:
            if not self.spacing > 0:
                raise ConfigError("spacing", f"must be > 0, got {self.spacing}")
            if self.orientation not in (equipotential.HORIZONTAL, equipotential.VERTICAL):
                raise ConfigError("orientation", f"must be horizontal or vertical, got {self.orientation!r}")
        if not self.escape_radius > 0:
            raise ConfigError("escape-radius", f"must be > 0, got {self.escape_radius}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError("epsilon", f"must lie in (0, 1), got {self.epsilon}")
        cfg = self
        if cfg.palette is None:
            cfg = replace(cfg, palette=PaletteSpec())
        cfg.palette.validate()
        return cfg

    def star_model(self) -> equipotential.StarModel:
        return equipotential.StarModel(branches=self.branches,
                                       hole_radius=self.hole_radius,
                                       anchor=self.anchor)

    def budget(self) -> IterationBudget:
        return IterationBudget(max_iters=self.iters,
                               escape_radius=self.escape_radius,
                               epsilon=self.epsilon)


def render_field(config: RenderConfig) -> IndexField:
    """Run the raster pipeline: seed every pixel center, iterate, classify."""
    config = config.validate()
    seeds = plane_grid(config.viewport)

    if config.method in EQUIPOTENTIAL_METHODS:
        final, poisoned = dynamics.iterate_fixed_grid(config.function, seeds, config.iters)
        safe = np.where(poisoned, config.anchor, final)
        if config.method == EQUIPOTENTIAL_STAR:
            levels = equipotential.star_classify_grid(config.star_model(), safe)
            sentinel = equipotential.HOLE
        elif config.method == EQUIPOTENTIAL_CIRCLES:
            levels = equipotential.circles_classify_grid(config.ring_width, config.anchor, safe)
            sentinel = equipotential.HOLE
        else:
            levels = equipotential.grid_classify_grid(config.orientation, config.spacing, safe)
            sentinel = GRID_OUTSIDE_LEVEL
        levels = levels.astype(np.int32, copy=False)
        levels[poisoned] = sentinel
        term = np.full(seeds.shape, TERM_CODES[dynamics.BUDGET_EXHAUSTED], dtype=np.uint8)
        term[poisoned] = TERM_CODES[dynamics.POISONED]
        return IndexField(levels=levels, terminations=term, viewport=config.viewport,
                          method=config.method, hole_level=sentinel)

    budget = config.budget()
    if config.method == ESCAPE_TIME:
        _, steps, term = dynamics.iterate_escape_grid(config.function, seeds, budget)
    else:
        _, steps, term = dynamics.iterate_approx_grid(config.function, seeds, budget)
    return IndexField(levels=steps.astype(np.int32, copy=False), terminations=term,
                      viewport=config.viewport, method=config.method, hole_level=None)


def extract_contours(field: IndexField) -> np.ndarray:
    """Boolean mask of trespass pixels.

    A pixel is a contour pixel when its level differs from its left or its up
    neighbour (the first pixel of each run along both scan axes).  Hole and
    poisoned cells never mark contours themselves, but a neighbour that
    differs from them does.
    """
    levels = field.levels
    change = np.zeros(levels.shape, dtype=bool)
    change[:, 1:] |= levels[:, 1:] != levels[:, :-1]
    change[1:, :] |= levels[1:, :] != levels[:-1, :]
    if field.hole_level is not None:
        change &= levels != field.hole_level
    return change
