"""Minimal render service for the interactive tuning frontend.

Two endpoints:

  POST /render?format=png|ppm
      Body: a render config in the key = value text format (see config.py).
      Returns the encoded image bytes.
      400  config validation failure (message names the field)
      413  size/iteration limits exceeded (checked before any compute)
      422  function expression parse error (includes the position)

  GET /presets
      JSON catalog of the builtin germ presets with default parameters.

Stateless and synchronous; identical requests return identical bytes.
Bind address/port via --host/--port flags or HEDGESTAR_HOST/HEDGESTAR_PORT.
"""

from __future__ import annotations

import argparse
import os

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .config import config_from_text
from .funcexpr import ExprError, builtin_presets
from .imageio import encode_image
from .numerics import InvalidInputError
from .palettes import colorize
from .raster import ConfigError, extract_contours, render_field

MAX_DIMENSION = 2048
MAX_ITERS = 10**6

MEDIA_TYPES = {"png": "image/png", "ppm": "image/x-portable-pixmap"}


def create_app() -> FastAPI:
    app = FastAPI(title="hedgestar render service", version="0.1.0")

    @app.post("/render")
    async def render(request: Request, format: str = "png") -> Response:
        if format not in MEDIA_TYPES:
            return _bad_request("format", f"unknown image format {format!r}")
        body = (await request.body()).decode("utf-8", errors="replace")
        try:
            config = config_from_text(body)
        except ExprError as exc:
            return JSONResponse(status_code=422,
                                content={"detail": str(exc), "position": exc.position})
        except (ConfigError, InvalidInputError) as exc:
            field = exc.field_name if isinstance(exc, ConfigError) else "config"
            return _bad_request(field, str(exc))

        vp = config.viewport
        if vp.width > MAX_DIMENSION or vp.height > MAX_DIMENSION:
            return JSONResponse(status_code=413, content={
                "detail": f"size: raster {vp.width}x{vp.height} exceeds the "
                          f"{MAX_DIMENSION}x{MAX_DIMENSION} limit"})
        if config.iters > MAX_ITERS:
            return JSONResponse(status_code=413, content={
                "detail": f"iters: {config.iters} exceeds the {MAX_ITERS} limit"})

        field = render_field(config)
        contours = extract_contours(field) if config.output == "contour" else None
        image = colorize(field, config.palette, contours)
        return Response(content=encode_image(image, format),
                        media_type=MEDIA_TYPES[format])

    @app.get("/presets")
    async def presets() -> JSONResponse:
        catalog = []
        for preset in builtin_presets():
            entry = {
                "name": preset.name,
                "expression": preset.source,
                "fixed_point": [preset.fixed_point.real, preset.fixed_point.imag],
                "notes": preset.notes,
                "defaults": _jsonable(preset.defaults),
            }
            catalog.append(entry)
        return JSONResponse(content={"presets": catalog})

    return app


def _bad_request(field: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": message, "field": field})


def _jsonable(defaults: dict) -> dict:
    out = {}
    for key, value in defaults.items():
        if isinstance(value, tuple):
            out[key] = list(value)
        else:
            out[key] = value
    return out


def main(argv=None) -> int:
    import uvicorn

    parser = argparse.ArgumentParser(prog="hedgestar-serve",
                                     description="Serve the render endpoints.")
    parser.add_argument("--host", default=os.environ.get("HEDGESTAR_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("HEDGESTAR_PORT", "8765")))
    args = parser.parse_args(argv)
    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
