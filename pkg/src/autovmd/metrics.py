"""Evaluation metrics for decompositions and detected centers."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CountMismatch, DegenerateInput, LengthMismatch, ZeroSource


@dataclass(frozen=True)
class EvalReport:
    cc: float
    pr: float
    recon_rel_err: float
    mode_count: int
    max_center_diff: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_row(self, experiment: str) -> str:
        """One row in the order experiment, K, CC, PR."""
        return f"{experiment},{self.mode_count},{self.cc!r},{self.pr!r}\n"


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch("signals must be one-dimensional with equal length")
    return x, y


def correlation_coefficient(x, y) -> float:
    """Pearson correlation; a constant argument against a varying one gives 0."""
    x, y = _pair(x, y)
    if x.size < 2:
        raise LengthMismatch("need at least two samples")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(np.dot(dx, dx))
    sy = np.sqrt(np.dot(dy, dy))
    if sx == 0 and sy == 0:
        raise DegenerateInput("both signals are constant")
    if sx == 0 or sy == 0:
        return 0.0
    return float(np.clip(np.dot(dx, dy) / (sx * sy), -1.0, 1.0))


def power_ratio(residual, source) -> float:
    """``sum(residual**2) / sum(source**2)``."""
    residual, source = _pair(residual, source)
    denom = np.dot(source, source)
    if denom == 0:
        raise ZeroSource("source is identically zero")
    return float(np.dot(residual, residual) / denom)


def max_center_diff(ours: Sequence[float], reference: Sequence[float]) -> float:
    """Largest absolute difference between the sorted center lists."""
    a = np.sort(np.asarray(ours, dtype=float))
    b = np.sort(np.asarray(reference, dtype=float))
    if a.size != b.size:
        raise CountMismatch(a.size, b.size)
    if a.size == 0:
        raise LengthMismatch("need at least one center")
    return float(np.max(np.abs(a - b)))


def relative_recon_error(source, recon) -> float:
    """``||source - recon|| / ||source||``."""
    source, recon = _pair(source, recon)
    norm = np.linalg.norm(source)
    if norm == 0:
        raise ZeroSource("source is identically zero")
    return float(np.linalg.norm(source - recon) / norm)


def evaluate(source, modes, reference_centers=None, centers=None) -> EvalReport:
    """Metrics of a decomposition ``modes`` (shape ``(K, T)``) against ``source``."""
    source = np.asarray(source, dtype=float)
    modes = np.atleast_2d(modes)
    recon = modes.sum(axis=0)
    diff = None
    if reference_centers is not None and centers is not None:
        diff = max_center_diff(centers, reference_centers)
    return EvalReport(
        cc=correlation_coefficient(source, recon),
        pr=power_ratio(source - recon, source),
        recon_rel_err=relative_recon_error(source, recon),
        mode_count=int(modes.shape[0]),
        max_center_diff=diff,
    )
