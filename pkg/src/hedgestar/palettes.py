"""Coloring of index fields.

Five modes:
  mono-contour   white background, trespass pixels black
  indexed        one fixed color per level, hole white
  random         the indexed table shuffled by a seeded generator
  rgb-cube       each pixel colored by its own plane position (an injective
                 affine map of the viewport into the RGB cube)
  ordered-shades monotone gray ramp over the level values (step counts)

Hole and poisoned cells come out white in every mode, and the whole thing is
deterministic: same field, same spec, same bytes.
"""

from __future__ import annotations

import colorsys
from dataclasses import dataclass

import numpy as np

from .numerics import InvalidInputError
from .raster import IndexField, extract_contours

MODES = ("mono-contour", "indexed", "random", "rgb-cube", "ordered-shades")

WHITE = np.array([255, 255, 255], dtype=np.uint8)
BLACK = np.array([0, 0, 0], dtype=np.uint8)


@dataclass(frozen=True)
class PaletteSpec:
    """Color mode plus the seed that makes the random mode reproducible."""

    mode: str = "mono-contour"
    seed: int = 0

    def validate(self) -> None:
        if self.mode not in MODES:
            raise InvalidInputError(f"unknown palette mode {self.mode!r}; choose from {', '.join(MODES)}")
        if not isinstance(self.seed, int):
            raise InvalidInputError(f"palette seed must be an integer, got {self.seed!r}")


def _hue_table(count: int) -> np.ndarray:
    """count distinct colors around the hue wheel, uint8 (count, 3)."""
    table = np.empty((max(count, 1), 3), dtype=np.uint8)
    for j in range(max(count, 1)):
        r, g, b = colorsys.hsv_to_rgb(j / max(count, 1), 0.85, 0.95)
        table[j] = (round(r * 255), round(g * 255), round(b * 255))
    return table


def _level_index(field: IndexField) -> tuple[np.ndarray, np.ndarray, int]:
    """Normalize levels to 0-based table indices; returns (idx, hole_mask, n)."""
    levels = field.levels
    if field.hole_level is not None:
        hole = levels == field.hole_level
    else:
        hole = np.zeros(levels.shape, dtype=bool)
    visible = levels[~hole]
    if visible.size == 0:
        return np.zeros(levels.shape, dtype=np.int64), hole, 1
    low = int(visible.min())
    high = int(visible.max())
    idx = (levels.astype(np.int64) - low).clip(0)
    return idx, hole, high - low + 1


def colorize(field: IndexField, palette: PaletteSpec,
             contours: np.ndarray | None = None) -> np.ndarray:
    """RGB image buffer (height, width, 3) uint8 for the field."""
    palette.validate()
    h, w = field.shape
    out = np.empty((h, w, 3), dtype=np.uint8)

    if palette.mode == "mono-contour":
        out[:] = WHITE
        if contours is None:
            contours = extract_contours(field)
        out[contours] = BLACK
        return out

    idx, hole, count = _level_index(field)
    if palette.mode in ("indexed", "random"):
        table = _hue_table(count)
        if palette.mode == "random":
            rng = np.random.default_rng(palette.seed)
            table = table[rng.permutation(len(table))]
        out[:] = table[idx]
    elif palette.mode == "ordered-shades":
        span = max(count - 1, 1)
        gray = (255 - (idx * 255) // span).astype(np.uint8)
        out[:] = gray[..., np.newaxis]
    else:  # rgb-cube: viewport-normalized plane position, affine into the cube
        fx = (np.arange(w, dtype=np.float64) + 0.5) / w
        fy = (np.arange(h, dtype=np.float64) + 0.5) / h
        fx = np.broadcast_to(fx[np.newaxis, :], (h, w))
        fy = np.broadcast_to(fy[:, np.newaxis], (h, w))
        out[..., 0] = np.round(fx * 255).astype(np.uint8)
        out[..., 1] = np.round(fy * 255).astype(np.uint8)
        out[..., 2] = np.round((1.0 - (fx + fy) / 2.0) * 255).astype(np.uint8)

    out[hole] = WHITE
    if contours is not None:
        out[contours] = BLACK
    return out
