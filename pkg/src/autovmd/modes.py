"""Mode detection from the gap between a spectrum and its baseline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import EmptyInput, LengthMismatch, NonPositiveBandwidth
from .spectrum import Spectrum, restrict_to_original

_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class KdeEstimate:
    eval_points: np.ndarray
    density: np.ndarray
    bandwidth: float


@dataclass(frozen=True)
class ModeSet:
    """Detected modes.

    ``intervals`` are normalized-axis ``(lo, hi)`` pairs on the original grid;
    ``centers`` are in cycles/sample.
    """

    intervals: Tuple[Tuple[float, float], ...]
    centers: Tuple[float, ...]
    masses: Tuple[float, ...]
    threshold: float = 0.0

    @property
    def count(self) -> int:
        return len(self.centers)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "threshold": self.threshold,
            "modes": [
                {"lo": lo, "hi": hi, "center_cps": c, "mass": m}
                for (lo, hi), c, m in zip(self.intervals, self.centers, self.masses)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModeSet":
        modes = d.get("modes", [])
        return cls(tuple((float(m["lo"]), float(m["hi"])) for m in modes),
                   tuple(float(m["center_cps"]) for m in modes),
                   tuple(float(m["mass"]) for m in modes),
                   float(d.get("threshold", 0.0)))


def kde_density(residual_values, bandwidth: float, eval_count: int = 512) -> KdeEstimate:
    """Gaussian kernel density on ``[min - 3 bw, max + 3 bw]``."""
    r = np.asarray(residual_values, dtype=float).ravel()
    if r.size == 0:
        raise EmptyInput("no residual values")
    if not bandwidth > 0:
        raise NonPositiveBandwidth(f"bandwidth must be positive, got {bandwidth}")
    if eval_count < 32:
        raise ValueError("eval_count must be at least 32")
    t = np.linspace(r.min() - 3 * bandwidth, r.max() + 3 * bandwidth, eval_count)
    z = (t[:, None] - r[None, :]) / bandwidth
    density = np.exp(-0.5 * z ** 2).sum(axis=1) / (r.size * bandwidth * _SQRT_2PI)
    return KdeEstimate(t, density, float(bandwidth))


def silverman_bandwidth(values) -> float:
    """``0.9 min(std, IQR / 1.34) m**(-1/5)``, floored at ``1e-3`` for zero spread."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2:
        return 1e-3
    std = v.std(ddof=1)
    q75, q25 = np.percentile(v, [75, 25])
    spread = min(std, (q75 - q25) / 1.34)
    if spread <= 0:
        spread = std
    if not spread > 0:
        return 1e-3
    return float(0.9 * spread * v.size ** -0.2)


def scott_bandwidth(values) -> float:
    """Normal-reference rule ``1.06 std m**(-1/5)``, floored at ``1e-3``."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2:
        return 1e-3
    std = v.std(ddof=1)
    if not std > 0:
        return 1e-3
    return float(1.06 * std * v.size ** -0.2)


BANDWIDTH_RULES = {"scott": scott_bandwidth, "silverman": silverman_bandwidth}


def best_threshold(residual, kde: KdeEstimate) -> float:
    """Location of the density maximum (first one on ties)."""
    return float(kde.eval_points[int(np.argmax(kde.density))])


def extract_modes(f, g_star, t_star: float, spectrum: Spectrum, min_width: int = 3,
                  mass_floor: float = 1e-3, center: str = "centroid") -> ModeSet:
    """Split the thresholded gap into modes.

    Parameters
    ----------
    f, g_star : array_like
        Spectrum and baseline on the (possibly extended) grid.
    t_star : float
        Noise threshold subtracted from the gap.
    spectrum : Spectrum
        Provides the extension layout and frequency mapping.
    min_width : int
        Minimum run length in nodes.
    mass_floor : float
        Minimum run mass as a fraction of the total.
    center : {"centroid", "argmax"}
        Center estimator within each run.

    Returns
    -------
    ModeSet
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g_star, dtype=float)
    if f.shape != g.shape or f.size != spectrum.grid_count:
        raise LengthMismatch("f and g_star must match the spectrum grid")
    r = np.maximum(0.0, gap(f, g) - t_star)
    r = restrict_to_original(r, spectrum.extension)
    x = np.arange(r.size) * spectrum.grid_spacing
    return _runs_to_modes(r, x, spectrum.nyquist_map, min_width, mass_floor, center, t_star)


def gap(f, g) -> np.ndarray:
    """``f - clip(g, 0, f)``: the gap to the baseline projected onto the feasible box."""
    f = np.asarray(f, dtype=float)
    return f - np.clip(g, 0.0, f)


def _runs_to_modes(r, x, nyquist_map, min_width, mass_floor, center, t_star) -> ModeSet:
    positive = r > 0
    edges = np.diff(np.concatenate([[0], positive.astype(np.int8), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    total = r.sum()
    intervals: List[Tuple[float, float]] = []
    centers: List[float] = []
    masses: List[float] = []
    for a, b in zip(starts, stops):
        seg = r[a:b]
        mass = float(seg.sum())
        if b - a < min_width or mass < mass_floor * total:
            continue
        if center == "argmax":
            c = x[a + int(np.argmax(seg))]
        else:
            w = seg / seg.max()     # avoids underflow of x * r for subnormal mass
            c = float(np.clip(np.dot(x[a:b], w) / w.sum(), x[a], x[b - 1]))
        lo, hi = float(x[a]), float(x[b - 1])
        if hi <= lo:
            hi = lo + (x[1] - x[0]) * 1e-9
        intervals.append((lo, hi))
        centers.append(float(c) * nyquist_map)
        masses.append(mass)
    return ModeSet(tuple(intervals), tuple(centers), tuple(masses), float(t_star))


def detect_modes(f, g_star, spectrum: Spectrum, bandwidth: Optional[float] = None,
                 rule: str = "scott", eval_count: int = 512, min_width: int = 3,
                 mass_floor: float = 1e-3, center: str = "centroid"):
    """Threshold the gap with the KDE argmax and extract modes.

    The density is fit to the strictly positive gap values on the original
    axis; nodes where the baseline touches the spectrum carry no information
    about the background level.

    Returns
    -------
    ModeSet, KdeEstimate or None
    """
    f = np.asarray(f, dtype=float)
    r = restrict_to_original(gap(f, g_star), spectrum.extension)
    values = r[r > 0]
    if values.size == 0:
        empty = ModeSet((), (), (), 0.0)
        return empty, None
    bw = bandwidth if bandwidth is not None else BANDWIDTH_RULES[rule](values)
    kde = kde_density(values, bw, eval_count)
    t_star = max(best_threshold(values, kde), 0.0)
    modes = extract_modes(f, g_star, t_star, spectrum, min_width, mass_floor, center)
    return modes, kde
