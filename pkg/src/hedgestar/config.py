"""The key-value render-config text format shared by the CLI and the service.

One "key = value" pair per line; blank lines and '#' comments are ignored.
Keys (all optional, later sources override earlier ones):

    preset        = flower4            # start from a builtin germ
    function      = z + z^4            # expression text (overrides preset's)
    theta-terms   = 3,10,20000         # continued-fraction terms; builds the
                                       # quadratic germ e^(2*pi*i*theta)*z+z^2
    method        = equipotential-star | equipotential-circles |
                    equipotential-grid | escape-time | approximation
    viewport      = -2,2,2,-2          # left,right,top,bottom
    size          = 400x400
    iters         = 100
    branches      = 12
    hole-radius   = 0.5
    anchor        = 0,0                # re,im (defaults to the preset's fixed point)
    ring-width    = 0.25
    spacing       = 0.25
    orientation   = horizontal | vertical
    escape-radius = 2.0
    epsilon       = 0.00001
    palette       = mono-contour | indexed | random | rgb-cube | ordered-shades
    seed          = 0
    output        = contour | filled
"""

from __future__ import annotations

from . import raster
from .funcexpr import ExprError, get_preset, parse, quadratic_germ_source
from .palettes import MODES as PALETTE_MODES
from .palettes import PaletteSpec
from .numerics import InvalidInputError
from .raster import ConfigError, RenderConfig, Viewport

KEYS = ("preset", "function", "theta-terms", "method", "viewport", "size",
        "iters", "branches", "hole-radius", "anchor", "ring-width", "spacing",
        "orientation", "escape-radius", "epsilon", "palette", "seed", "output")

DEFAULT_SIZE = (400, 400)
DEFAULT_VIEWPORT = (-2.0, 2.0, 2.0, -2.0)
# fixed-step methods iterate longer by default than the tested classics (t=50)
DEFAULT_ITERS = {raster.ESCAPE_TIME: 50, raster.APPROXIMATION: 50}
DEFAULT_EQUIPOTENTIAL_ITERS = 100


def parse_config_text(text: str) -> dict[str, str]:
    """Read the key-value format into a raw string mapping."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, f"unknown config key (line {lineno})")
        mapping[key] = value
    return mapping


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {value!r}") from None


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {value!r}") from None


def _parse_floats(key: str, value: str, count: int) -> tuple[float, ...]:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != count:
        raise ConfigError(key, f"expected {count} comma-separated numbers, got {value!r}")
    return tuple(_parse_float(key, p) for p in parts)


def _parse_size(value) -> tuple[int, int]:
    if isinstance(value, (tuple, list)):
        w, h = value
        return int(w), int(h)
    parts = value.lower().split("x")
    if len(parts) != 2:
        raise ConfigError("size", f"expected WIDTHxHEIGHT, got {value!r}")
    return _parse_int("size", parts[0]), _parse_int("size", parts[1])


def _parse_terms(value) -> tuple[int, ...]:
    if isinstance(value, (tuple, list)):
        return tuple(int(t) for t in value)
    return tuple(_parse_int("theta-terms", p.strip()) for p in value.split(","))


def build_config(options: dict) -> RenderConfig:
    """Resolve an options mapping (strings or typed values) to a RenderConfig.

    Resolution order: builtin defaults < preset defaults < explicit options.
    Raises ConfigError naming the bad field, or an ExprError (with position)
    when the function text does not parse.
    """
    options = dict(options)
    unknown = set(options) - set(KEYS)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config key")

    preset = None
    if options.get("preset"):
        try:
            preset = get_preset(str(options["preset"]))
        except KeyError as exc:
            raise ConfigError("preset", str(exc.args[0])) from None
    defaults = dict(preset.defaults) if preset else {}

    # the map itself
    source = options.get("function")
    terms = options.get("theta-terms")
    if source and terms:
        raise ConfigError("theta-terms", "conflicts with an explicit function")
    if terms:
        try:
            source = quadratic_germ_source(_parse_terms(terms))
        except InvalidInputError as exc:
            raise ConfigError("theta-terms", str(exc)) from None
    if source is not None:
        function = parse(str(source))
        anchor_default = 0j
    elif preset is not None:
        function = preset.expr
        anchor_default = preset.fixed_point
    else:
        raise ConfigError("function", "either function, preset or theta-terms is required")

    method = str(options.get("method") or defaults.get("method") or raster.EQUIPOTENTIAL_STAR)

    viewport_values = options.get("viewport") or defaults.get("viewport") or DEFAULT_VIEWPORT
    if isinstance(viewport_values, str):
        viewport_values = _parse_floats("viewport", viewport_values, 4)
    left, right, top, bottom = viewport_values
    width, height = _parse_size(options.get("size") or DEFAULT_SIZE)
    try:
        viewport = Viewport(left=float(left), right=float(right), top=float(top),
                            bottom=float(bottom), width=width, height=height)
    except InvalidInputError as exc:
        key = "size" if "size" in str(exc) else "viewport"
        raise ConfigError(key, str(exc)) from None

    anchor = options.get("anchor")
    if anchor is None:
        anchor = defaults.get("anchor", anchor_default)
    if isinstance(anchor, str):
        re, im = _parse_floats("anchor", anchor, 2)
        anchor = complex(re, im)

    def _number(key: str, fallback, convert):
        value = options.get(key)
        if value is None:
            return fallback
        return convert(key, str(value)) if isinstance(value, str) else value

    iters_default = defaults.get("iters", DEFAULT_ITERS.get(method, DEFAULT_EQUIPOTENTIAL_ITERS))
    palette_mode = str(options.get("palette") or defaults.get("palette") or "mono-contour")
    if palette_mode not in PALETTE_MODES:
        raise ConfigError("palette", f"unknown palette {palette_mode!r}; choose from {', '.join(PALETTE_MODES)}")

    config = RenderConfig(
        function=function,
        viewport=viewport,
        method=method,
        anchor=complex(anchor),
        iters=int(_number("iters", iters_default, _parse_int)),
        escape_radius=float(_number("escape-radius", defaults.get("escape_radius", 2.0), _parse_float)),
        epsilon=float(_number("epsilon", defaults.get("epsilon", 1e-5), _parse_float)),
        branches=int(_number("branches", defaults.get("branches", 12), _parse_int)),
        hole_radius=float(_number("hole-radius", defaults.get("hole_radius", 0.5), _parse_float)),
        ring_width=float(_number("ring-width", defaults.get("ring_width", 0.25), _parse_float)),
        spacing=float(_number("spacing", defaults.get("spacing", 0.25), _parse_float)),
        orientation=str(options.get("orientation") or defaults.get("orientation") or "horizontal"),
        palette=PaletteSpec(mode=palette_mode, seed=int(_number("seed", 0, _parse_int))),
        output=str(options.get("output") or defaults.get("output") or "contour"),
    )
    return config.validate()


def config_from_text(text: str) -> RenderConfig:
    return build_config(parse_config_text(text))


def serialize_config(config: RenderConfig) -> str:
    """Emit the key-value text for a config; config_from_text inverts it."""
    config = config.validate()
    vp = config.viewport
    lines = [
        f"function = {config.function.source}",
        f"method = {config.method}",
        f"viewport = {vp.left},{vp.right},{vp.top},{vp.bottom}",
        f"size = {vp.width}x{vp.height}",
        f"iters = {config.iters}",
        f"anchor = {config.anchor.real},{config.anchor.imag}",
        f"branches = {config.branches}",
        f"hole-radius = {config.hole_radius}",
        f"ring-width = {config.ring_width}",
        f"spacing = {config.spacing}",
        f"orientation = {config.orientation}",
        f"escape-radius = {config.escape_radius}",
        f"epsilon = {config.epsilon}",
        f"palette = {config.palette.mode}",
        f"seed = {config.palette.seed}",
        f"output = {config.output}",
    ]
    return "\n".join(lines) + "\n"
