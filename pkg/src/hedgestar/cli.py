"""Command-line entry point.

Subcommands:
  render      build a config from flags (and an optional --config file),
              render it and write the image
  presets     list the builtin germ presets with their defaults
  tune-sweep  render one file per value of a swept parameter, e.g.
              --hole-radius 0.20,0.15,0.10,0.09 or --branches 4,8,16,32,64

Exit codes: 0 success, 2 flag/config errors, 3 function parse errors,
4 I/O failures.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .config import build_config, parse_config_text
from .funcexpr import ExprError, builtin_presets
from .imageio import FORMATS, encode_image
from .numerics import InvalidInputError
from .palettes import MODES as PALETTE_MODES
from .palettes import colorize
from .raster import METHODS, ConfigError, extract_contours, render_field

SWEEPABLE = ("hole-radius", "branches", "iters")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hedgestar",
        description="Equipotential renderer for local invariant sets of holomorphic maps.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    render = sub.add_parser("render", help="render a single image")
    _add_render_flags(render)
    render.add_argument("--out", required=True,
                        help="output path; .ppm or .png picks the format")
    render.set_defaults(handler=_cmd_render)

    presets = sub.add_parser("presets", help="list builtin germ presets")
    presets.set_defaults(handler=_cmd_presets)

    sweep = sub.add_parser(
        "tune-sweep",
        help="render a comparative parameter sweep into numbered files")
    _add_render_flags(sweep)
    sweep.add_argument("--out", required=True,
                       help="base output path; files get -00, -01, ... before the suffix")
    sweep.set_defaults(handler=_cmd_sweep)

    return parser


def _add_render_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="config file in the key = value format; flags override it")
    sub.add_argument("--function", help="map expression, e.g. \"e^(2*pi*i*(3/7))*z + z^2\"")
    sub.add_argument("--preset", help="builtin germ name (see the presets subcommand)")
    sub.add_argument("--theta-terms", dest="theta_terms",
                     help="continued-fraction terms for the quadratic germ, e.g. 3,10,20000")
    sub.add_argument("--method", choices=METHODS,
                     help="render method (default equipotential-star)")
    sub.add_argument("--branches", help="star branch count (default 12)")
    sub.add_argument("--hole-radius", dest="hole_radius",
                     help="star hole radius; 0 means empty hole (default 0.5)")
    sub.add_argument("--viewport", help="plane window as left,right,top,bottom (default -2,2,2,-2)")
    sub.add_argument("--size", help="raster size as WxH (default 400x400)")
    sub.add_argument("--iters", help="iteration count (default 50 for the classical methods, else 100)")
    sub.add_argument("--escape-radius", dest="escape_radius",
                     help="trapping disc radius for escape-time (default 2.0)")
    sub.add_argument("--epsilon", help="approximation distance in (0,1) (default 0.00001)")
    sub.add_argument("--anchor", help="fixed point as re,im (defaults to the preset's)")
    sub.add_argument("--ring-width", dest="ring_width", help="circle model ring width (default 0.25)")
    sub.add_argument("--spacing", dest="spacing", help="line-grid spacing (default 0.25)")
    sub.add_argument("--orientation", choices=("horizontal", "vertical"),
                     help="line-grid orientation (default horizontal)")
    sub.add_argument("--palette", choices=PALETTE_MODES,
                     help="color mode (default mono-contour)")
    sub.add_argument("--seed", help="random-palette seed (default 0)")
    sub.add_argument("--output", choices=("contour", "filled"),
                     help="draw trespass contours or the filled field (default contour)")


_FLAG_KEYS = {
    "function": "function", "preset": "preset", "theta_terms": "theta-terms",
    "method": "method", "branches": "branches", "hole_radius": "hole-radius",
    "viewport": "viewport", "size": "size", "iters": "iters",
    "escape_radius": "escape-radius", "epsilon": "epsilon", "anchor": "anchor",
    "ring_width": "ring-width", "spacing": "spacing", "orientation": "orientation",
    "palette": "palette", "seed": "seed", "output": "output",
}


def _collect_options(args: argparse.Namespace) -> dict:
    options: dict = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise _IoError(f"--config: cannot read {args.config}: {exc}") from exc
        options.update(parse_config_text(text))
    for attr, key in _FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is not None:
            options[key] = value
    return options


class _IoError(OSError):
    pass


def _render_to_file(options: dict, out_path: str) -> str:
    config = build_config(options)
    started = time.perf_counter()
    field = render_field(config)
    contours = extract_contours(field) if config.output == "contour" else None
    image = colorize(field, config.palette, contours)
    elapsed = time.perf_counter() - started
    suffix = Path(out_path).suffix.lower().lstrip(".")
    fmt = suffix if suffix in FORMATS else "ppm"
    data = encode_image(image, fmt)
    try:
        Path(out_path).write_bytes(data)
    except OSError as exc:
        raise _IoError(f"--out: cannot write {out_path}: {exc}") from exc
    vp = config.viewport
    return (f"wrote {out_path} ({config.method}, {vp.width}x{vp.height}, "
            f"iters={config.iters}, {elapsed:.2f}s)")


def _cmd_render(args: argparse.Namespace) -> int:
    print(_render_to_file(_collect_options(args), args.out))
    return 0


def _cmd_presets(args: argparse.Namespace) -> int:
    for preset in builtin_presets():
        print(f"{preset.name:12s} f(z) = {preset.source}")
        print(f"{'':12s} fixed point {preset.fixed_point:.6g}; {preset.notes}")
        if preset.defaults:
            pairs = ", ".join(f"{k}={v}" for k, v in sorted(preset.defaults.items()))
            print(f"{'':12s} defaults: {pairs}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    options = _collect_options(args)
    swept = [key for key in SWEEPABLE if "," in str(options.get(key, ""))]
    if len(swept) != 1:
        raise ConfigError("tune-sweep",
                          f"exactly one of {', '.join('--' + k for k in SWEEPABLE)} "
                          "must carry a comma-separated value list")
    key = swept[0]
    values = [v.strip() for v in str(options[key]).split(",")]
    out = Path(args.out)
    stem = out.parent / out.stem
    suffix = out.suffix or ".ppm"
    for index, value in enumerate(values):
        step_options = dict(options)
        step_options[key] = value
        path = f"{stem}-{index:02d}{suffix}"
        line = _render_to_file(step_options, path)
        print(f"{line} [{key}={value}]")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ExprError as exc:
        print(f"error: --function: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
