"""hedgestar: equipotential rendering of local invariant sets.

The pipeline: parse a complex map f(z), iterate every pixel center of a
viewport, classify the final iterates against an equipotential model (the
holed branched star, concentric circles or line grids, or the classical
escape-time/approximation step counts) and turn the index field into
contours and colors.
"""

from .numerics import (ContinuedFraction, RationalApproximant, angle, cf_fraction,
                       cf_value, convergents, diophantine_check, from_polar,
                       modulus)
from .funcexpr import (GermPreset, MapExpr, builtin_presets, evaluate, get_preset,
                       parse, quadratic_germ_source, to_source)
from .dynamics import (IterationBudget, OrbitOutcome, iterate_approx,
                       iterate_escape, iterate_fixed)
from .equipotential import (StarModel, circles_classify, grid_classify,
                            star_classify)
from .raster import (IndexField, RenderConfig, Viewport, extract_contours,
                     pixel_to_plane, plane_grid, render_field)
from .palettes import PaletteSpec, colorize
from .imageio import decode_ppm, encode_image, write_image
from .config import build_config, config_from_text, parse_config_text, serialize_config

__version__ = "0.1.0"

__all__ = [
    "ContinuedFraction", "RationalApproximant", "angle", "cf_fraction",
    "cf_value", "convergents", "diophantine_check", "from_polar", "modulus",
    "GermPreset", "MapExpr", "builtin_presets", "evaluate", "get_preset",
    "parse", "quadratic_germ_source", "to_source",
    "IterationBudget", "OrbitOutcome", "iterate_approx", "iterate_escape",
    "iterate_fixed",
    "StarModel", "circles_classify", "grid_classify", "star_classify",
    "IndexField", "RenderConfig", "Viewport", "extract_contours",
    "pixel_to_plane", "plane_grid", "render_field",
    "PaletteSpec", "colorize",
    "decode_ppm", "encode_image", "write_image",
    "build_config", "config_from_text", "parse_config_text", "serialize_config",
]
