"""SVG figures rendered from a run record."""

from __future__ import annotations

from pathlib import Path
from typing import List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import MissingTraces  # noqa: E402

PAD = 0.05


def padded_limits(*arrays, pad: float = PAD):
    """Data range of all arrays widened by ``pad`` of its span on each side."""
    data = np.concatenate([np.ravel(a) for a in arrays])
    lo, hi = float(np.min(data)), float(np.max(data))
    span = hi - lo
    if span == 0:
        span = abs(hi) if hi != 0 else 1.0
    return lo - pad * span, hi + pad * span


def overlay_figure(record: dict):
    """Spectrum with its supporting baseline."""
    spec = record["spectrum"]
    f = np.asarray(spec["values"])
    g = np.asarray(record["baseline"]["g_star"])
    left = (spec.get("extension") or {}).get("left_pad", 0)
    x = (np.arange(f.size) - left) * spec["grid_spacing"] * spec["nyquist_map"]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, f, lw=1.2, label="spectrum")
    ax.plot(x, g, lw=1.2, ls="--", label="baseline")
    for mode in record["modes"]["modes"]:
        ax.axvline(mode["center_cps"], color="0.6", lw=0.8, zorder=0)
    ax.set_xlim(*padded_limits(x))
    ax.set_ylim(*padded_limits(f, g))
    ax.set_xlabel("frequency (cycles/sample)")
    ax.set_ylabel("normalized magnitude")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def trace_figure(record: dict):
    """Relative change of the baseline per iteration on a log scale."""
    trace = np.asarray(record["baseline"].get("residual_trace") or [])
    if trace.size == 0:
        raise MissingTraces("run record has no residual trace")
    fig, ax = plt.subplots(figsize=(6, 4))
    k = np.arange(1, trace.size + 1)
    ax.semilogy(k, np.maximum(trace, np.finfo(float).tiny), lw=1.0)
    ax.set_xlabel("iteration")
    ax.set_ylabel("relative change")
    fig.tight_layout()
    return fig


def mode_figures(record: dict):
    vmd = record.get("vmd") or {}
    modes = vmd.get("modes") or []
    rate = vmd.get("sample_rate", 1.0)
    out = []
    for i, (u, w) in enumerate(zip(modes, vmd.get("omega_final", []))):
        u = np.asarray(u)
        t = np.arange(u.size) / rate
        fig, ax = plt.subplots(figsize=(7, 2.5))
        ax.plot(t, u, lw=1.0)
        ax.set_title(f"mode {i + 1}, center {w:.4f} cycles/sample", fontsize=9)
        ax.set_xlabel("t")
        fig.tight_layout()
        out.append(fig)
    return out


def write_plots(record: dict, out_dir) -> List[Path]:
    """Write overlay, trace and one figure per mode as SVG files."""
    trace = record.get("baseline", {}).get("residual_trace")
    if not trace:
        raise MissingTraces("run record has no residual trace")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    figures = [("overlay.svg", overlay_figure(record)), ("trace.svg", trace_figure(record))]
    figures += [(f"mode_{i + 1}.svg", fig) for i, fig in enumerate(mode_figures(record))]
    paths = []
    for name, fig in figures:
        path = out_dir / name
        fig.savefig(path, format="svg")
        plt.close(fig)
        paths.append(path)
    return paths
