"""Enhanced spectrum of an image.

Pipeline: luma -> 5x5 median residual -> L random N x N crops -> 2-D DFT of
each crop -> sum of log10 magnitudes. Checkerboard artifacts sit at the same
frequency bins in every crop, so they add up coherently while scene content
does not.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DimensionError, FormatError, LengthError
from .pnm import GrayImage, Image, to_gray
from .rng import SplitMix64

DEFAULT_CROP_SIZE = 64
DEFAULT_CROP_COUNT = 16
DEFAULT_EPSILON = 1e-12

ESP_MAGIC = b"ESP1"


class ResidualImage(GrayImage):
    """Signed difference between an image and its median-filtered version."""


@dataclass(frozen=True)
class CropSet:
    crop_size: int
    count: int
    origins: tuple[tuple[int, int], ...]
    seed: int

    def crops(self, values: np.ndarray):
        n = self.crop_size
        for r, c in self.origins:
            yield values[r:r + n, c:c + n]


@dataclass(frozen=True, eq=False)
class EnhancedSpectrum:
    """Accumulated log-magnitude spectrum, unshifted (DC at ``[0, 0]``)."""

    values: np.ndarray
    crop_count: int

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other):
        if not isinstance(other, EnhancedSpectrum):
            return NotImplemented
        return self.crop_count == other.crop_count and np.array_equal(self.values, other.values)


def median_filter_5x5(img: GrayImage) -> GrayImage:
    """5x5 median with edge-replicate padding (13th of 25 sorted values)."""
    padded = np.pad(img.values, 2, mode="edge")
    windows = sliding_window_view(padded, (5, 5)).reshape(img.height, img.width, 25)
    return GrayImage(np.partition(windows, 12, axis=-1)[..., 12])


def residual(img: GrayImage) -> ResidualImage:
    return ResidualImage(img.values - median_filter_5x5(img).values)


def sample_crops(width: int, height: int, n: int, l: int, seed: int) -> CropSet:
    """Draw ``l`` crop origins uniformly from the valid rectangle.

    Each origin takes two SplitMix64 outputs: the first (mod ``height-n+1``)
    gives the row, the second (mod ``width-n+1``) the column.
    """
    if width < n or height < n:
        raise DimensionError(f"image {width}x{height} smaller than crop size {n}")
    if l < 1:
        raise ValueError("crop count must be >= 1")
    gen = SplitMix64(seed)
    origins = []
    for _ in range(l):
        row = gen.below(height - n + 1)
        col = gen.below(width - n + 1)
        origins.append((row, col))
    return CropSet(crop_size=n, count=l, origins=tuple(origins), seed=seed)


def dft2d(tile) -> np.ndarray:
    """Unnormalized forward 2-D DFT."""
    return np.fft.fft2(np.asarray(tile, dtype=np.float64))


def accumulate_spectrum(res: GrayImage, crops: CropSet, epsilon: float = DEFAULT_EPSILON) -> EnhancedSpectrum:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    n = crops.crop_size
    for r, c in crops.origins:
        if r < 0 or c < 0 or r + n > res.height or c + n > res.width:
            raise DimensionError(f"crop origin {(r, c)} out of range for {res.width}x{res.height}")
    total = np.zeros((n, n))
    # fixed origin-list order keeps the sum bit-reproducible
    for tile in crops.crops(res.values):
        total += np.log10(np.maximum(np.abs(dft2d(tile)), epsilon))
    return EnhancedSpectrum(total, crops.count)


def enhance_image(img: Image, n: int = DEFAULT_CROP_SIZE, l: int = DEFAULT_CROP_COUNT,
                  seed: int = 0, epsilon: float = DEFAULT_EPSILON) -> EnhancedSpectrum:
    gray = to_gray(img)
    res = residual(gray)
    crops = sample_crops(gray.width, gray.height, n, l, seed)
    return accumulate_spectrum(res, crops, epsilon)


def centered(spec: EnhancedSpectrum) -> GrayImage:
    """DC moved to the middle, for display only."""
    return GrayImage(np.fft.fftshift(spec.values))


def encode_esp(spec: EnhancedSpectrum) -> bytes:
    head = ESP_MAGIC + struct.pack("<II", spec.size, spec.crop_count)
    return head + spec.values.astype("<f8").tobytes()


def decode_esp(data: bytes) -> EnhancedSpectrum:
    if bytes(data[:4]) != ESP_MAGIC:
        raise FormatError("not an ESP1 file")
    if len(data) < 12:
        raise LengthError("truncated ESP1 header")
    n, l = struct.unpack("<II", data[4:12])
    need = 12 + 8 * n * n
    if len(data) < need:
        raise LengthError(f"ESP1 payload truncated: {len(data)} < {need} bytes")
    values = np.frombuffer(bytes(data[12:need]), dtype="<f8").astype(np.float64).reshape(n, n)
    return EnhancedSpectrum(values, l)


def write_esp(path, spec: EnhancedSpectrum) -> None:
    Path(path).write_bytes(encode_esp(spec))


def read_esp(path) -> EnhancedSpectrum:
    return decode_esp(Path(path).read_bytes())
