import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from autovmd.errors import (
    BadPadFraction, EmptyFile, EmptySignal, LengthMismatch, NonFinite, ParseError, UnknownSignal,
)
from autovmd.spectrum import (
    ExtensionInfo, RawSignal, Spectrum, Taper, downsample, extend_spectrum, gen_signal,
    half_spectrum, load_csv, read_samples, restrict_to_original,
)
from oracles import dft_magnitude

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False).filter(
    lambda v: v == 0 or abs(v) > 1e-6)
signals = arrays(float, st.integers(8, 300), elements=finite)


def test_zero_signal_gives_zero_spectrum():
    spec = half_spectrum(RawSignal(np.zeros(256), 1.0))
    assert spec.grid_count == 201
    assert np.all(spec.values == 0)


def test_tone_peak_matches_brute_force_dft():
    sig = gen_signal("exp1")
    spec = half_spectrum(sig)
    mag = dft_magnitude(sig.samples)
    peak_cps = np.argmax(mag) / sig.samples.size
    x_peak = np.argmax(spec.values) * spec.grid_spacing * spec.nyquist_map
    assert peak_cps == pytest.approx(0.05)
    assert abs(x_peak - peak_cps) <= spec.grid_spacing * spec.nyquist_map
    # resampled values agree with the direct DFT at the bin nodes
    np.testing.assert_allclose(spec.values[::2], mag / mag.max(), atol=1e-12)


def test_constant_signal_is_dc_only():
    spec = half_spectrum(RawSignal(np.ones(200), 200.0))
    assert spec.values[0] == 1.0
    assert np.max(spec.values[2:]) < 1e-12


def test_spectrum_invariants_and_json_roundtrip():
    spec = half_spectrum(gen_signal("exp5"))
    assert spec.values.max() == 1.0 and spec.values.min() >= 0
    assert spec.nyquist_map == 0.5 and spec.grid_spacing == pytest.approx(1 / 200)
    again = Spectrum.from_dict(spec.to_dict())
    np.testing.assert_array_equal(again.values, spec.values)
    ext = extend_spectrum(spec)
    d = ext.to_dict()
    assert set(d) == {"values", "grid_spacing", "nyquist_map", "extension"}
    assert Spectrum.from_dict(d).extension == ext.extension


def test_errors():
    with pytest.raises(EmptySignal):
        RawSignal(np.zeros(5), 1.0)
    with pytest.raises(NonFinite):
        RawSignal(np.array([0.0] * 7 + [np.nan]), 1.0)
    with pytest.raises(UnknownSignal):
        gen_signal("exp9")
    with pytest.raises(BadPadFraction):
        extend_spectrum(half_spectrum(gen_signal("exp1")), 0.6)
    with pytest.raises(BadPadFraction):
        extend_spectrum(half_spectrum(gen_signal("exp1")), 0.0)


@given(signals, st.sampled_from([2.0, 0.5, 1024.0, 2.0 ** -20]))
def test_scaling_by_power_of_two_is_bit_identical(x, c):
    a = half_spectrum(RawSignal(x, 1.0), 64).values
    b = half_spectrum(RawSignal(c * x, 1.0), 64).values
    np.testing.assert_array_equal(a, b)


@given(signals, st.floats(1e-3, 1e3))
def test_scaling_by_any_positive_constant(x, c):
    a = half_spectrum(RawSignal(x, 1.0), 64).values
    b = half_spectrum(RawSignal(c * x, 1.0), 64).values
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-12)


@given(signals)
def test_time_reversal_gives_same_magnitudes(x):
    a = half_spectrum(RawSignal(x, 1.0), 64).values
    b = half_spectrum(RawSignal(x[::-1].copy(), 1.0), 64).values
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9)


def test_constant_spectrum_extends_flat():
    spec = Spectrum(np.full(201, 0.7), 1 / 200)
    ext = extend_spectrum(spec, 0.1)
    assert ext.grid_count == 241
    assert np.all(ext.values == 0.7)
    assert ext.extension == ExtensionInfo(20, 20, 0.7, Taper.RAISED_COSINE)


def test_extension_from_peak_to_floor_is_monotone():
    v = np.linspace(1.0, 0.0, 201) ** 2
    ext = extend_spectrum(Spectrum(v, 1 / 200), 0.1)
    left = ext.values[:20][::-1]          # outward from the junction
    assert left[0] >= 0.98 and left[-1] == 0.0
    assert np.all(np.diff(left) <= 0)


def test_extension_matches_downward_slope_at_junction():
    # rises from 0.2 to 0.4, then falls to the floor 0.1 at the right end; the
    # left end therefore slopes down outward and its slope is continued
    x = np.linspace(0, 1, 201)
    v = np.where(x <= 0.1, 0.2 + 2 * x, 0.4 - 0.3 * (x - 0.1) / 0.9)
    ext = extend_spectrum(Spectrum(v, 1 / 200), 0.1)
    inner_step = v[1] - v[0]
    outer_step = ext.values[20] - ext.values[19]
    assert outer_step == pytest.approx(inner_step, rel=0.1)
    # without the slope term the first step would be nearly flat
    assert outer_step > 0.5 * inner_step
    assert ext.values[0] == pytest.approx(v.min())


@given(arrays(float, st.integers(16, 120), elements=st.floats(0, 1)),
       st.floats(0.02, 0.5), st.sampled_from(list(Taper)))
def test_extension_keeps_interior_and_stays_in_range(v, frac, taper):
    spec = Spectrum(v, 1 / (v.size - 1))
    ext = extend_spectrum(spec, frac, taper)
    pad = int(round(frac * (v.size - 1)))
    inner = restrict_to_original(ext.values, ext.extension, v.size)
    np.testing.assert_array_equal(inner, v)
    assert ext.extension.left_pad == ext.extension.right_pad == pad
    if pad:
        lo, hi = v.min(), max(v[0], v[-1])
        pads = np.concatenate([ext.values[:pad], ext.values[-pad:]])
        assert pads.min() >= lo - 1e-12 and pads.max() <= hi + 1e-12
        assert ext.values[0] == pytest.approx(v.min()) and ext.values[-1] == pytest.approx(v.min())
        for seg in (ext.values[:pad][::-1], ext.values[-pad:]):
            assert np.all(np.diff(seg) <= 1e-12)


def test_restrict_to_original():
    info = ExtensionInfo(20, 20, 0.0)
    v = np.arange(240.0)
    np.testing.assert_array_equal(restrict_to_original(v, info), v[20:220])
    np.testing.assert_array_equal(restrict_to_original(v, ExtensionInfo(0, 0, 0.0)), v)
    with pytest.raises(LengthMismatch):
        restrict_to_original(v, info, original_count=201)


def test_generated_signals():
    t = np.arange(200) / 200
    np.testing.assert_array_equal(gen_signal("exp1").samples, 100 * np.sin(20 * np.pi * t))
    exp3 = gen_signal("exp3").samples
    base = 6 * t ** 2 + np.cos(10 * np.pi * t + 10 * np.pi * t ** 2)
    first = t <= 0.5
    np.testing.assert_allclose(exp3[first], (base + np.cos(60 * np.pi * t))[first])
    np.testing.assert_allclose(exp3[~first], (base + np.cos(80 * np.pi * t - 10 * np.pi))[~first])
    assert gen_signal("exp5").samples[0] == 75
    assert gen_signal("exp5").sample_rate == 200
    np.testing.assert_array_equal(gen_signal("exp4").samples, gen_signal("exp4").samples)
    assert gen_signal("BandStop", 128).samples.size == 128


def test_load_csv_and_downsample(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1.0\n2.0\n3.0\n")
    np.testing.assert_array_equal(read_samples(p), [1, 2, 3])
    p.write_text("value\n" + "\n".join(str(i) for i in range(1, 2001)) + "\n")
    sig = load_csv(p, sample_rate=360.0)
    assert sig.samples.size == 2000
    ds = downsample(sig, 10)
    assert ds.samples.size == 200
    np.testing.assert_array_equal(ds.samples[:3], [1, 11, 21])
    assert ds.sample_rate == 36.0


def test_load_csv_short_file_and_errors(tmp_path):
    p = tmp_path / "short.csv"
    p.write_text("1.0\n2.0\n3.0\n")
    with pytest.raises(EmptySignal):
        load_csv(p)          # parsed fine, but fewer than 8 samples
    p.write_text("1\n2\nx\n4\n")
    with pytest.raises(ParseError) as err:
        load_csv(p)
    assert err.value.line == 3
    p.write_text("header only\n")
    with pytest.raises(EmptyFile):
        load_csv(p)
