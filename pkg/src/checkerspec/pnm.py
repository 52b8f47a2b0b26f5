"""Binary PGM/PPM codec and the canonical in-memory image types.

Only 8-bit binary netpbm (P5 gray, P6 RGB) is supported. Everything downstream
works on :class:`GrayImage`, a float64 ``(height, width)`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, LengthError, UnsupportedFormatError

_WHITESPACE = b" \t\n\r\v\f"


@dataclass(frozen=True, eq=False)
class Image:
    """Decoded 8-bit raster.

    ``pixels`` has shape ``(height, width)`` for gray or ``(height, width, 3)``
    for interleaved RGB, dtype uint8.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("samples must lie in [0, 255]")
            px = px.astype(np.uint8)
        if px.ndim == 3 and px.shape[2] == 1:
            px = px[:, :, 0]
        if not (px.ndim == 2 or (px.ndim == 3 and px.shape[2] == 3)):
            raise ValueError(f"expected (h, w) or (h, w, 3) pixels, got {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.pixels.ndim == 2 else 3

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(np.array_equal(self.pixels, other.pixels))


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Single-channel real-valued image, ``values`` shaped ``(height, width)``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise FormatError("unexpected end of header")
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    tok, pos = _read_token(data, pos)
    if not tok.isdigit():
        raise FormatError(f"bad {what} in header: {tok!r}")
    return int(tok), pos


def decode_pnm(data: bytes) -> Image:
    """Decode a binary P5/P6 file with maxval 255."""
    magic = bytes(data[:2])
    if magic not in (b"P5", b"P6"):
        raise FormatError(f"bad magic {magic!r}")
    if len(data) < 3 or data[2:3] not in _WHITESPACE + b"#":
        raise FormatError("bad magic")
    channels = 1 if magic == b"P5" else 3
    width, pos = _header_int(data, 2, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise FormatError(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormatError(f"maxval {maxval} not supported (only 255)")
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise LengthError("missing payload")
    pos += 1
    need = width * height * channels
    payload = data[pos:pos + need]
    if len(payload) < need:
        raise LengthError(f"payload has {len(payload)} bytes, header declares {need}")
    px = np.frombuffer(bytes(payload), dtype=np.uint8).copy()
    shape = (height, width) if channels == 1 else (height, width, 3)
    return Image(px.reshape(shape))


def encode_pnm(img: Image) -> bytes:
    magic = b"P5" if img.channels == 1 else b"P6"
    header = magic + f"\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def encode_pgm(img: GrayImage, lo: float | None = None, hi: float | None = None) -> bytes:
    """Render real values as an 8-bit P5, mapping ``[lo, hi]`` onto ``[0, 255]``.

    ``lo``/``hi`` default to the image min/max. Values are clamped and
    rounded half away from zero.
    """
    if lo is None:
        lo = float(img.values.min())
    if hi is None:
        hi = float(img.values.max())
    if not hi > lo:
        raise ValueError(f"need hi > lo, got lo={lo} hi={hi}")
    scaled = (img.values - lo) * (255.0 / (hi - lo))
    # after clamping everything is >= 0, so floor(x + 0.5) rounds half away from zero
    q = np.floor(np.clip(scaled, 0.0, 255.0) + 0.5).astype(np.uint8)
    return encode_pnm(Image(q))


def to_gray(img: Image) -> GrayImage:
    """BT.601 luma for RGB, identity (as float) for gray. No rounding."""
    px = img.pixels.astype(np.float64)
    if img.channels == 1:
        return GrayImage(px)
    return GrayImage(0.299 * px[:, :, 0] + 0.587 * px[:, :, 1] + 0.114 * px[:, :, 2])


def resize_bilinear(img: GrayImage, height: int, width: int) -> GrayImage:
    """Bilinear resample with half-pixel centers and edge clamping."""
    v = img.values
    h, w = v.shape

    def coords(n_out, n_in):
        x = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        x = np.clip(x, 0, n_in - 1)
        i0 = np.floor(x).astype(int)
        i1 = np.minimum(i0 + 1, n_in - 1)
        return i0, i1, x - i0

    y0, y1, fy = coords(height, h)
    x0, x1, fx = coords(width, w)
    top = v[y0][:, x0] * (1 - fx) + v[y0][:, x1] * fx
    bot = v[y1][:, x0] * (1 - fx) + v[y1][:, x1] * fx
    return GrayImage(top * (1 - fy)[:, None] + bot * fy[:, None])


def read_image(path) -> Image:
    return decode_pnm(Path(path).read_bytes())


def write_image(path, img: Image) -> None:
    Path(path).write_bytes(encode_pnm(img))
