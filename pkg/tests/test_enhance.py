import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from checkerspec.enhance import (CropSet, accumulate_spectrum, decode_esp, dft2d, encode_esp,
                                 enhance_image, median_filter_5x5, residual, sample_crops)
from checkerspec.errors import DimensionError, FormatError, LengthError
from checkerspec.pnm import GrayImage, Image
from checkerspec.synthgen import SynthConfig, gen_fake
from oracles import naive_dft2, sort_median5

EPS = 1e-12


def test_median_constant():
    g = GrayImage(np.full((7, 11), 7.0))
    assert np.array_equal(median_filter_5x5(g).values, g.values)


def test_median_removes_single_outlier():
    v = np.zeros((5, 5))
    v[2, 2] = 255
    assert median_filter_5x5(GrayImage(v)).values[2, 2] == 0


@pytest.mark.parametrize("shape", [(9, 9), (1, 1), (1, 7), (3, 2), (13, 6)])
def test_median_matches_sort_oracle(shape):
    v = np.random.default_rng(sum(shape)).integers(0, 256, shape).astype(float)
    assert np.array_equal(median_filter_5x5(GrayImage(v)).values, sort_median5(v))


def test_residual_constant_is_zero():
    assert not residual(GrayImage(np.full((6, 6), 3.0))).values.any()


def test_residual_of_impulse():
    v = np.zeros((5, 5))
    v[2, 2] = 255
    res = residual(GrayImage(v)).values
    assert np.array_equal(res, v - sort_median5(v))
    assert res[2, 2] == 255


@settings(max_examples=50)
@given(st.integers(0, 2**32), st.integers(1, 20), st.integers(1, 20))
def test_residual_range(seed, h, w):
    v = np.random.default_rng(seed).integers(0, 256, (h, w)).astype(float)
    res = residual(GrayImage(v)).values
    assert res.min() >= -255 and res.max() <= 255


def test_crops_single_valid_origin():
    cs = sample_crops(64, 64, 64, 5, 123)
    assert cs.origins == ((0, 0),) * 5


def test_crops_deterministic():
    assert sample_crops(256, 256, 64, 4, 42) == sample_crops(256, 256, 64, 4, 42)
    assert sample_crops(256, 256, 64, 4, 42) != sample_crops(256, 256, 64, 4, 43)


def test_crops_in_bounds():
    cs = sample_crops(100, 70, 16, 500, 9)
    rows = np.array([r for r, _ in cs.origins])
    cols = np.array([c for _, c in cs.origins])
    assert rows.min() >= 0 and rows.max() <= 70 - 16
    assert cols.min() >= 0 and cols.max() <= 100 - 16


def test_crops_too_small():
    with pytest.raises(DimensionError):
        sample_crops(63, 128, 64, 1, 0)


def test_crops_uniform_chi_square():
    n_draws, side = 10**5, 256 - 64 + 1
    cs = sample_crops(256, 256, 64, n_draws, 2024)
    o = np.array(cs.origins)
    joint = np.bincount(o[:, 0] * side + o[:, 1], minlength=side * side)
    for counts in (np.bincount(o[:, 0], minlength=side), np.bincount(o[:, 1], minlength=side), joint):
        k = counts.size
        expected = n_draws / k
        chi2 = ((counts - expected) ** 2 / expected).sum()
        df = k - 1
        assert abs(chi2 - df) < 3 * np.sqrt(2 * df)
        assert stats.chi2.sf(chi2, df) > 1e-3


def test_dft_constant():
    n, c = 8, 3.5
    F = dft2d(np.full((n, n), c))
    assert F[0, 0] == pytest.approx(n * n * c)
    F[0, 0] = 0
    assert np.abs(F).max() <= 1e-9 * n * n * abs(c)


def test_dft_impulse():
    t = np.zeros((8, 8))
    t[0, 0] = 1
    assert np.allclose(np.abs(dft2d(t)), 1.0, atol=1e-12)


def test_dft_cosine():
    n, k = 8, 2
    x = np.arange(n)[:, None] * np.ones((1, n))
    tile = np.cos(2 * np.pi * k * x / n)
    mag = np.abs(dft2d(tile))
    assert mag[k, 0] == pytest.approx(n * n / 2)
    assert mag[n - k, 0] == pytest.approx(n * n / 2)
    mag[k, 0] = mag[n - k, 0] = 0
    assert mag.max() < 1e-9
    assert np.allclose(dft2d(tile), naive_dft2(tile), atol=1e-9)


def test_esp_roundtrip():
    spec = enhance_image(Image(np.random.default_rng(1).integers(0, 256, (40, 40), dtype=np.uint8)), 16, 3, 5)
    data = encode_esp(spec)
    assert len(data) == 12 + 8 * 16 * 16
    assert data[:4] == b"ESP1"
    back = decode_esp(data)
    assert back == spec and back.values.tobytes() == spec.values.tobytes()
    with pytest.raises(FormatError):
        decode_esp(b"ESPX" + data[4:])
    with pytest.raises(LengthError):
        decode_esp(data[:-1])


def _random_residual(h=40, w=40, seed=0):
    return GrayImage(np.random.default_rng(seed).normal(size=(h, w)))


def test_accumulate_single_crop():
    res = _random_residual()
    cs = sample_crops(40, 40, 16, 1, 3)
    r, c = cs.origins[0]
    expected = np.log10(np.maximum(np.abs(np.fft.fft2(res.values[r:r + 16, c:c + 16])), EPS))
    assert np.array_equal(accumulate_spectrum(res, cs, EPS).values, expected)


def test_accumulate_zero_residual():
    cs = sample_crops(32, 32, 8, 5, 0)
    e = accumulate_spectrum(GrayImage(np.zeros((32, 32))), cs, EPS)
    assert np.allclose(e.values, 5 * np.log10(EPS), rtol=0, atol=1e-12)
    assert e.crop_count == 5 and e.size == 8


def test_accumulate_duplicate_origins_double():
    res = _random_residual()
    one = accumulate_spectrum(res, CropSet(16, 1, ((4, 7),), 0), EPS)
    two = accumulate_spectrum(res, CropSet(16, 2, ((4, 7), (4, 7)), 0), EPS)
    assert np.array_equal(two.values, 2 * one.values)


def test_accumulate_rejects_bad_origin():
    with pytest.raises(DimensionError):
        accumulate_spectrum(_random_residual(), CropSet(16, 1, ((30, 0),), 0), EPS)


def test_enhance_constant_image():
    e = enhance_image(Image(np.full((128, 128), 77, np.uint8)), 64, 8, 0, EPS)
    assert np.allclose(e.values, 8 * np.log10(EPS), rtol=0, atol=1e-12)


def test_enhance_deterministic():
    img = Image(np.random.default_rng(5).integers(0, 256, (100, 90, 3), dtype=np.uint8))
    a = enhance_image(img, 32, 6, 11)
    b = enhance_image(img, 32, 6, 11)
    assert a.values.tobytes() == b.values.tobytes()


def test_enhance_too_small():
    with pytest.raises(DimensionError):
        enhance_image(Image(np.zeros((63, 200), np.uint8)), 64, 4, 0)


def test_enhance_nyquist_peaks_on_fake():
    e = enhance_image(gen_fake(SynthConfig(), 0), 64, 16, 0).values
    med = np.median(e)
    for u, v in [(32, 0), (0, 32), (32, 32)]:
        assert e[u, v] > med


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(-1000, 1000))
def test_offset_invariance(seed, offset):
    rng = np.random.default_rng(seed)
    v = rng.integers(0, 256, (24, 24)).astype(float)
    cs = sample_crops(24, 24, 8, 4, seed)
    a = accumulate_spectrum(residual(GrayImage(v)), cs, EPS)
    b = accumulate_spectrum(residual(GrayImage(v + offset)), cs, EPS)
    assert np.array_equal(a.values, b.values)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_spectrum_finite(seed):
    rng = np.random.default_rng(seed)
    img = Image(rng.integers(0, 256, (20, 20), dtype=np.uint8) * rng.integers(0, 2))
    assert np.isfinite(enhance_image(img, 8, 3, seed).values).all()


def test_parseval_random_tiles():
    rng = np.random.default_rng(8)
    for n in (4, 8, 16, 64):
        t = rng.normal(size=(n, n))
        lhs = (t ** 2).sum()
        rhs = (np.abs(dft2d(t)) ** 2).sum() / n ** 2
        assert abs(lhs - rhs) <= 1e-6 * lhs
