"""Synthetic real/fake image pairs.

"Real" images are multi-octave value noise built with bilinear upsampling,
which puts no energy at the Nyquist bins. "Fake" images go through the
zero-insertion upsample + small-kernel convolution that produces checkerboard
artifacts in CNN decoders, so their spectra peak at (N/2, 0), (0, N/2) and
(N/2, N/2).
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from .pnm import Image, write_image

MANIFEST_NAME = "manifest.csv"


def box_kernel(size: int = 3) -> np.ndarray:
    return np.full((size, size), 1.0 / size ** 2)


def gaussian_kernel(size: int = 7, sigma: float = 1.5) -> np.ndarray:
    x = np.arange(size) - size // 2
    g = np.exp(-x ** 2 / (2 * sigma ** 2))
    k = np.outer(g, g)
    return k / k.sum()


@dataclass(frozen=True, eq=False)
class SynthConfig:
    image_size: int = 256
    upsample_factor: int = 2
    kernel: np.ndarray = field(default_factory=box_kernel)
    noise_octaves: int = 5
    count_real: int = 100
    count_fake: int = 100
    seed: int = 0

    def __post_init__(self):
        k = np.asarray(self.kernel, dtype=np.float64)
        if k.ndim != 2 or k.shape[0] % 2 == 0 or k.shape[1] % 2 == 0:
            raise ValueError(f"kernel must be 2-D with odd sides, got {k.shape}")
        object.__setattr__(self, "kernel", k)
        if self.upsample_factor < 2:
            raise ValueError("upsample_factor must be >= 2")
        if self.image_size % self.upsample_factor:
            raise ValueError("image_size must be divisible by upsample_factor")
        if self.noise_octaves < 1:
            raise ValueError("noise_octaves must be >= 1")
        if self.count_real < 0 or self.count_fake < 0:
            raise ValueError("counts must be non-negative")

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.image_size, self.upsample_factor, self.noise_octaves,
                       self.count_real, self.count_fake, self.seed, self.kernel.shape)).encode())
        h.update(self.kernel.astype("<f8").tobytes())
        return h.hexdigest()


@dataclass
class DatasetManifest:
    entries: list[tuple[Path, int]]
    seed: int = 0
    config_digest: str = ""

    @property
    def paths(self) -> list[Path]:
        return [p for p, _ in self.entries]

    @property
    def labels(self) -> list[int]:
        return [y for _, y in self.entries]


def _rng(cfg: SynthConfig, index: int, label: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, index, label])


def value_noise(size: int, octaves: int, rng: np.random.Generator) -> np.ndarray:
    """Sum of bilinearly upsampled random lattices, coarsest cell = size/4."""
    out = np.zeros((size, size))
    amp = 1.0
    for k in range(octaves):
        cell = max(size // 2 ** (k + 2), 1)
        pts = size // cell + 1
        grid = rng.random((pts, pts))
        t = np.arange(size) / cell
        i0 = np.minimum(t.astype(int), pts - 2)
        f = t - i0
        rows = grid[i0] * (1 - f)[:, None] + grid[i0 + 1] * f[:, None]
        out += amp * (rows[:, i0] * (1 - f) + rows[:, i0 + 1] * f)
        amp *= 0.5
    return out


def quantize(x: np.ndarray) -> Image:
    """Min/max stretch to [0, 255] and round to 8 bits."""
    lo, hi = x.min(), x.max()
    scaled = (x - lo) * (255.0 / (hi - lo)) if hi > lo else np.zeros_like(x)
    return Image(np.clip(np.rint(scaled), 0, 255).astype(np.uint8))


def gen_real(cfg: SynthConfig, index: int) -> Image:
    rng = _rng(cfg, index, 0)
    return quantize(value_noise(cfg.image_size, cfg.noise_octaves, rng))


def gen_fake(cfg: SynthConfig, index: int) -> Image:
    rng = _rng(cfg, index, 1)
    f = cfg.upsample_factor
    low = value_noise(cfg.image_size // f, cfg.noise_octaves, rng)
    up = np.zeros((cfg.image_size, cfg.image_size))
    up[::f, ::f] = low
    # scipy's "nearest" mode is edge replication
    out = ndimage.convolve(up, cfg.kernel, mode="nearest")
    return quantize(out)


def build_dataset(cfg: SynthConfig, out_dir) -> DatasetManifest:
    """Write ``real_%05d.pgm`` / ``fake_%05d.pgm`` plus ``manifest.csv``.

    Manifest rows hold paths relative to ``out_dir``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    jobs = [(f"real_{i:05d}.pgm", 0, gen_real, i) for i in range(cfg.count_real)]
    jobs += [(f"fake_{i:05d}.pgm", 1, gen_fake, i) for i in range(cfg.count_fake)]
    for name, label, gen, i in jobs:
        path = out / name
        try:
            write_image(path, gen(cfg, i))
        except OSError as e:
            raise OSError(f"cannot write {path}: {e.strerror or e}") from e
        rows.append((name, label))
    manifest_path = out / MANIFEST_NAME
    try:
        with open(manifest_path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["path", "label"])
            w.writerows(rows)
    except OSError as e:
        raise OSError(f"cannot write {manifest_path}: {e.strerror or e}") from e
    return DatasetManifest([(out / n, y) for n, y in rows], cfg.seed, cfg.digest())


def read_manifest(path) -> DatasetManifest:
    """Load a ``path,label`` CSV; relative paths resolve against its directory."""
    path = Path(path)
    entries = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:2]] != ["path", "label"]:
            raise ValueError(f"{path}: expected header 'path,label'")
        for row in reader:
            label = int(row["label"])
            if label not in (0, 1):
                raise ValueError(f"{path}: label {label} not in {{0, 1}}")
            p = Path(row["path"])
            entries.append((p if p.is_absolute() else path.parent / p, label))
    return DatasetManifest(entries)
