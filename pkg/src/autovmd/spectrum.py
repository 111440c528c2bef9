"""Signal generation, ingestion and magnitude-spectrum preparation.

The spectrum lives on a normalized axis ``x`` in ``[0, 1]`` sampled at
``grid_count`` uniform nodes. ``x = 1`` is the Nyquist frequency, so a
normalized position maps to cycles/sample through ``nyquist_map = 0.5``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import (
    BadPadFraction, EmptyFile, EmptySignal, LengthMismatch, NonFinite, ParseError,
    UnknownSignal,
)

NYQUIST_MAP = 0.5
DEFAULT_GRID = 201
DEFAULT_SAMPLES = 200

# Largest |slope| (in units of the drop) for which the slope-matched raised
# cosine stays monotone; the exact bound is pi**2 / 4.
_SLOPE_CAP = 2.0


class Taper(str, Enum):
    RAISED_COSINE = "raised_cosine"
    LINEAR = "linear"


class SignalName(str, Enum):
    EXP1 = "exp1"
    EXP2 = "exp2"
    EXP3 = "exp3"
    EXP4 = "exp4"
    EXP5 = "exp5"
    BANDSTOP = "bandstop"


@dataclass(frozen=True)
class RawSignal:
    """A uniformly sampled real signal."""

    samples: np.ndarray
    sample_rate: float
    label: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if samples.size < 8:
            raise EmptySignal(f"need at least 8 samples, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise NonFinite("signal contains NaN or Inf")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def time(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate


@dataclass(frozen=True)
class ExtensionInfo:
    left_pad: int
    right_pad: int
    floor_value: float
    taper: Taper = Taper.RAISED_COSINE

    def to_dict(self) -> dict:
        return {
            "left_pad": self.left_pad, "right_pad": self.right_pad,
            "floor_value": self.floor_value, "taper": Taper(self.taper).value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExtensionInfo":
        return cls(int(d["left_pad"]), int(d["right_pad"]), float(d["floor_value"]),
                   Taper(d.get("taper", Taper.RAISED_COSINE.value)))


@dataclass(frozen=True)
class Spectrum:
    """Normalized magnitude spectrum on a uniform grid.

    ``grid_spacing`` is the spacing of the original axis and is kept unchanged
    by extension, so an extended spectrum simply has more nodes.
    """

    values: np.ndarray
    grid_spacing: float
    nyquist_map: float = NYQUIST_MAP
    extension: Optional[ExtensionInfo] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise NonFinite("spectrum values must be finite and nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def grid_count(self) -> int:
        return int(self.values.size)

    @property
    def original_count(self) -> int:
        ext = self.extension
        return self.grid_count - (ext.left_pad + ext.right_pad if ext else 0)

    @property
    def x(self) -> np.ndarray:
        """Normalized coordinate of every node; extension nodes fall outside [0, 1]."""
        left = self.extension.left_pad if self.extension else 0
        return (np.arange(self.grid_count) - left) * self.grid_spacing

    def to_dict(self) -> dict:
        return {
            "values": self.values.tolist(),
            "grid_spacing": self.grid_spacing,
            "nyquist_map": self.nyquist_map,
            "extension": None if self.extension is None else self.extension.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Spectrum":
        ext = d.get("extension")
        return cls(np.asarray(d["values"], dtype=float), float(d["grid_spacing"]),
                   float(d.get("nyquist_map", NYQUIST_MAP)),
                   None if ext is None else ExtensionInfo.from_dict(ext))


def half_spectrum(signal: RawSignal, grid_count: int = DEFAULT_GRID) -> Spectrum:
    """Normalized one-sided magnitude spectrum resampled onto ``grid_count`` nodes.

    Parameters
    ----------
    signal : RawSignal
        Input signal.
    grid_count : int
        Number of nodes on the normalized axis, ``N + 1``.

    Returns
    -------
    Spectrum
        Magnitudes of the one-sided DFT (DC through Nyquist), linearly
        interpolated onto ``x = linspace(0, 1, grid_count)`` and divided by
        their maximum. An all-zero spectrum is returned unscaled.
    """
    if grid_count < 16:
        raise ValueError("grid_count must be at least 16")
    x = np.asarray(signal.samples, dtype=float)
    n = x.size
    mag = np.abs(np.fft.rfft(x))
    # bin k sits at k/n cycles/sample, i.e. 2k/n on the normalized axis
    src = 2.0 * np.arange(mag.size) / n
    dst = np.linspace(0.0, 1.0, grid_count)
    values = np.interp(dst, src, mag)
    peak = values.max()
    if peak > 0:
        values = values / peak
    return Spectrum(values, 1.0 / (grid_count - 1))


def _taper_segment(boundary, outward_slope, floor, pad, taper):
    """Values of the ``pad`` nodes appended beyond a boundary node.

    The decay spans the whole pad and lands on ``floor`` with zero slope at
    the outermost node. For the raised cosine the outward slope of the data
    is matched at the junction when it points downward; a rising slope is
    clipped to zero so the segment stays nonincreasing.
    """
    drop = boundary - floor
    span = pad
    s = np.arange(1, pad + 1) / span
    if drop <= 0:
        return np.full(pad, floor)
    if Taper(taper) is Taper.LINEAR:
        return floor + drop * (1.0 - s)
    k = np.clip(outward_slope * span, -_SLOPE_CAP * drop, 0.0)
    return floor + drop * 0.5 * (1.0 + np.cos(np.pi * s)) + k * s * (1.0 - s) ** 2


def extend_spectrum(spectrum: Spectrum, pad_fraction: float = 0.1,
                    taper: Taper = Taper.RAISED_COSINE) -> Spectrum:
    """Append smoothly decaying segments at both ends of a spectrum.

    Parameters
    ----------
    spectrum : Spectrum
        Unextended spectrum.
    pad_fraction : float
        Pad length per side as a fraction of ``N = grid_count - 1``.
    taper : Taper
        Shape of the decay.

    Returns
    -------
    Spectrum
        Spectrum with ``round(pad_fraction * N)`` extra nodes per side. The
        original values are copied unchanged into the middle.
    """
    if not 0 < pad_fraction <= 0.5:
        raise BadPadFraction(f"pad_fraction must be in (0, 0.5], got {pad_fraction}")
    if spectrum.extension is not None:
        raise ValueError("spectrum is already extended")
    f = spectrum.values
    pad = int(round(pad_fraction * (f.size - 1)))
    floor = float(f.min())
    if pad == 0:
        return replace(spectrum, extension=ExtensionInfo(0, 0, floor, Taper(taper)))
    left = _taper_segment(f[0], f[0] - f[1], floor, pad, taper)[::-1]
    right = _taper_segment(f[-1], f[-1] - f[-2], floor, pad, taper)
    values = np.concatenate([left, f, right])
    return Spectrum(values, spectrum.grid_spacing, spectrum.nyquist_map,
                    ExtensionInfo(pad, pad, floor, Taper(taper)))


def restrict_to_original(values, extension: Optional[ExtensionInfo],
                         original_count: Optional[int] = None) -> np.ndarray:
    """Slice the pre-extension part out of an extended vector."""
    if isinstance(values, Spectrum):
        extension = values.extension
        values = values.values
    v = np.asarray(values)
    if extension is None:
        return v
    lo, hi = extension.left_pad, v.size - extension.right_pad
    if hi <= lo:
        raise LengthMismatch("vector shorter than the extension pads")
    if original_count is not None and hi - lo != original_count:
        raise LengthMismatch(
            f"expected {original_count + extension.left_pad + extension.right_pad} values, "
            f"got {v.size}")
    return v[lo:hi]


def _signal_values(name: SignalName, t: np.ndarray) -> np.ndarray:
    pi = np.pi
    if name is SignalName.EXP1:
        return 100 * np.sin(20 * pi * t)
    if name is SignalName.EXP2:
        return 10 * np.cos(10 * pi * t) + 20 * np.sin(20 * pi * t)
    if name is SignalName.EXP3:
        chirp = 6 * t ** 2 + np.cos(10 * pi * t + 10 * pi * t ** 2)
        return chirp + np.where(t <= 0.5, np.cos(60 * pi * t), np.cos(80 * pi * t - 10 * pi))
    if name is SignalName.EXP4:
        return (1 / (1.2 + np.cos(2 * pi * t))
                + np.cos(32 * pi * t + 0.2 * np.cos(64 * pi * t)) / (1.5 + np.sin(2 * pi * t)))
    if name is SignalName.EXP5:
        out = 6 * t
        for i in range(1, 11):
            out = out + (13 - i) * np.cos((20 + 10 * i) * pi * t)
        return out
    if name is SignalName.BANDSTOP:
        return 60 * t + 60 * np.cos(200 * pi * t)
    raise UnknownSignal(str(name))


def gen_signal(name, sample_count: int = DEFAULT_SAMPLES) -> RawSignal:
    """Benchmark signal sampled at ``t = i / sample_count``, ``i = 0..sample_count-1``."""
    try:
        key = SignalName(str(getattr(name, "value", name)).lower())
    except ValueError:
        raise UnknownSignal(f"unknown signal {name!r}") from None
    if sample_count < 64:
        raise ValueError("sample_count must be at least 64")
    t = np.arange(sample_count) / sample_count
    return RawSignal(_signal_values(key, t), float(sample_count), key.value)


def read_samples(path) -> np.ndarray:
    """Parse a one-column CSV into an array of floats.

    A first line that does not parse as a number is taken as a header. Any
    later unparsable line raises ``ParseError`` with its 1-based line number.
    """
    path = Path(path)
    samples = []
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            cell = row[0].strip()
            try:
                samples.append(float(cell))
            except ValueError:
                if lineno == 1:
                    continue
                raise ParseError(f"cannot parse {cell!r} as a number", lineno) from None
    if not samples:
        raise EmptyFile(f"{path} contains no samples")
    return np.asarray(samples)


def load_csv(path, sample_rate: float = 1.0) -> RawSignal:
    """Read a one-column CSV of samples as a signal (see ``read_samples``)."""
    return RawSignal(read_samples(path), sample_rate, Path(path).stem)


def downsample(signal: RawSignal, ratio: int) -> RawSignal:
    """Keep every ``ratio``-th sample starting at index 0."""
    ratio = int(ratio)
    if ratio < 1:
        raise ValueError("ratio must be at least 1")
    return RawSignal(signal.samples[::ratio], signal.sample_rate / ratio, signal.label)


def take(signal: RawSignal, count: int) -> RawSignal:
    """First ``count`` samples of a signal."""
    return RawSignal(signal.samples[:int(count)], signal.sample_rate, signal.label)
