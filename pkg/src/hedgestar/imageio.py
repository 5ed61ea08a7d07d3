"""Image encoding: binary PPM (P6, bit-exact, dependency-free) and PNG.

PPM is the reference format: header "P6\\n<w> <h>\\n255\\n" followed by the
raw RGB bytes, row-major, top row first.  decode_ppm inverts encode_image
byte for byte.  PNG goes through Pillow as a convenience.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .numerics import InvalidInputError

FORMATS = ("ppm", "png")


def _check_buffer(buffer: np.ndarray) -> np.ndarray:
    buffer = np.asarray(buffer)
    if buffer.ndim != 3 or buffer.shape[2] != 3 or buffer.dtype != np.uint8:
        raise InvalidInputError(
            f"image buffer must be uint8 with shape (height, width, 3), got "
            f"{buffer.dtype} {buffer.shape}")
    if buffer.size == 0:
        raise InvalidInputError("image buffer is empty")
    return np.ascontiguousarray(buffer)


def encode_image(buffer: np.ndarray, format: str = "ppm") -> bytes:
    """Serialize an RGB buffer to PPM (P6) or PNG bytes."""
    buffer = _check_buffer(buffer)
    height, width = buffer.shape[:2]
    if format == "ppm":
        header = f"P6\n{width} {height}\n255\n".encode("ascii")
        return header + buffer.tobytes()
    if format == "png":
        from PIL import Image

        out = io.BytesIO()
        Image.fromarray(buffer, mode="RGB").save(out, format="PNG")
        return out.getvalue()
    raise InvalidInputError(f"unknown image format {format!r}; choose from {', '.join(FORMATS)}")


def decode_ppm(data: bytes) -> np.ndarray:
    """Parse P6 bytes back into a (height, width, 3) uint8 buffer."""
    fields = []
    pos = 0
    # header: magic, width, height, maxval as whitespace-separated tokens,
    # '#' comments allowed, then exactly one whitespace byte before the raster
    while len(fields) < 4:
        if pos >= len(data):
            raise InvalidInputError("truncated PPM header")
        c = data[pos:pos + 1]
        if c == b"#":
            eol = data.find(b"\n", pos)
            pos = len(data) if eol < 0 else eol + 1
            continue
        if c.isspace():
            pos += 1
            continue
        end = pos
        while end < len(data) and not data[end:end + 1].isspace() and data[end:end + 1] != b"#":
            end += 1
        fields.append(data[pos:end])
        pos = end
    pos += 1  # single whitespace separating the header from the raster
    magic, width, height, maxval = fields
    if magic != b"P6":
        raise InvalidInputError(f"not a binary PPM (magic {magic!r})")
    width, height, maxval = int(width), int(height), int(maxval)
    if maxval != 255:
        raise InvalidInputError(f"only maxval 255 is supported, got {maxval}")
    expected = width * height * 3
    raster = data[pos:pos + expected]
    if len(raster) != expected:
        raise InvalidInputError(f"PPM raster has {len(raster)} bytes, expected {expected}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def write_image(path, buffer: np.ndarray, format: str | None = None) -> None:
    """Write the buffer to disk; the format defaults to the path suffix."""
    path = Path(path)
    if format is None:
        suffix = path.suffix.lower().lstrip(".")
        format = suffix if suffix in FORMATS else "ppm"
    path.write_bytes(encode_image(buffer, format))
