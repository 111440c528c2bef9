"""Benchmark suite over the synthetic experiments."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from .baseline import find_baseline
from .errors import CountMismatch
from .metrics import max_center_diff
from .pipeline import PipelineConfig, analyze, prepare_spectrum, run_vmd
from .spectrum import gen_signal
from .stencils import build_stencils


@dataclass(frozen=True)
class Reference:
    """Expected outcome of one experiment.

    ``centers`` are reference center frequencies (cycles/sample) with
    tolerance ``tol``; ``tones`` are the exact frequencies of the pure tones
    in the signal; ``iterations`` is a reference baseline step count.
    """

    count: int
    centers: Tuple[float, ...]
    tol: float
    tones: Tuple[float, ...]
    iterations: int


REFERENCES: Dict[str, Reference] = {
    "exp1": Reference(1, (0.0550,), 0.01, (0.05,), 5161),
    "exp2": Reference(2, (0.0300, 0.0575), 0.01, (0.025, 0.05), 5258),
    "exp3": Reference(4, (0.0100, 0.0775, 0.1550, 0.2075), 0.01, (), 3026),
    "exp4": Reference(3, (0.0125, 0.0875, 0.2475), 0.02, (), 3463),
    "exp5": Reference(11, (0.005, 0.0775, 0.1, 0.125, 0.155, 0.18, 0.2075, 0.2325, 0.2575,
                           0.2825, 0.3075), 0.01,
                      tuple(0.075 + 0.025 * i for i in range(10)), 1768),
}

TONE_TOL = 0.005        # two grid bins on the cycles/sample axis
ITERATION_FACTOR = 4
TIME_LIMIT = 10.0
AB_BUDGET = 1500


@dataclass
class BenchRow:
    experiment: str
    count: int
    centers: List[float]
    iterations: int
    converged: bool
    wall_time: float
    max_center_diff: Optional[float]
    tone_error: Optional[float]
    cc: Optional[float] = None
    pr: Optional[float] = None
    recon_rel_err: Optional[float] = None
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def tone_error(centers, tones) -> Optional[float]:
    """Largest distance from a tone to its nearest detected center."""
    if not tones:
        return None
    if not centers:
        return float("inf")
    c = np.asarray(centers)
    return float(max(np.min(np.abs(c - t)) for t in tones))


def run_experiment(name: str, config: PipelineConfig = PipelineConfig(),
                   with_vmd: bool = True) -> BenchRow:
    ref = REFERENCES[name]
    start = time.perf_counter()
    analysis = analyze(gen_signal(name, config.spectrum.sample_count), config)
    elapsed = time.perf_counter() - start
    centers = list(analysis.modes.centers)
    try:
        diff = max_center_diff(centers, ref.centers)
    except CountMismatch:
        diff = None
    terr = tone_error(centers, ref.tones)
    base = analysis.baseline
    row = BenchRow(name, analysis.modes.count, centers, base.iterations, base.converged,
                   elapsed, diff, terr)
    if with_vmd:
        _, report = run_vmd(analysis, config)
        if report is not None:
            row.cc, row.pr, row.recon_rel_err = report.cc, report.pr, report.recon_rel_err
    row.checks = {
        "count": row.count == ref.count,
        "centers": diff is not None and diff <= ref.tol,
        "tones": terr is None or terr <= TONE_TOL,
        "converged": base.converged,
        "iterations": base.iterations <= ITERATION_FACTOR * ref.iterations,
        "time": elapsed <= TIME_LIMIT,
    }
    return row


@dataclass
class ExtensionAB:
    gap_extended: float
    gap_plain: float
    residual_extended: float
    residual_plain: float
    budget: int

    @property
    def passed(self) -> bool:
        return (self.gap_extended < self.gap_plain
                and self.residual_extended < self.residual_plain)


def extension_ab(config: PipelineConfig = PipelineConfig(), budget: int = AB_BUDGET,
                 signal: str = "bandstop") -> ExtensionAB:
    """Baseline progress with and without spectrum extension at equal iteration budget."""
    sig = gen_signal(signal, config.spectrum.sample_count)
    bcfg = replace(config.baseline, max_iter=budget)
    out = []
    for pad in (config.spectrum.pad_fraction or 0.1, 0.0):
        _, ext = prepare_spectrum(sig, replace(config.spectrum, pad_fraction=pad))
        res = find_baseline(ext.values, build_stencils(ext.grid_count, ext.grid_spacing), bcfg)
        out.append((res.feasibility_gap(ext.values), res.final_residual))
    (ge, re_), (gp, rp) = out
    return ExtensionAB(ge, gp, re_, rp, budget)


def run_bench(config: PipelineConfig = PipelineConfig(), workers: int = 1,
              with_vmd: bool = True):
    """All experiments plus the extension A/B, rows sorted by experiment name."""
    names = sorted(REFERENCES)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda n: run_experiment(n, config, with_vmd), names))
    else:
        rows = [run_experiment(n, config, with_vmd) for n in names]
    return rows, extension_ab(config)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def bench_csv(rows: List[BenchRow], ab: ExtensionAB) -> str:
    header = ["experiment", "K", "centers", "iterations", "converged", "wall_time",
              "max_center_diff", "tone_error", "cc", "pr", "recon_rel_err", "passed"]
    lines = [",".join(header)]
    for r in rows:
        centers = ";".join(f"{c:.6f}" for c in r.centers)
        lines.append(",".join(_fmt(v) for v in (
            r.experiment, r.count, centers, r.iterations, r.converged, r.wall_time,
            r.max_center_diff, r.tone_error, r.cc, r.pr, r.recon_rel_err, r.passed)))
    lines.append("")
    lines.append("variant,feasibility_gap,final_residual,budget")
    lines.append(f"extended,{ab.gap_extended!r},{ab.residual_extended!r},{ab.budget}")
    lines.append(f"unextended,{ab.gap_plain!r},{ab.residual_plain!r},{ab.budget}")
    return "\n".join(lines) + "\n"


def bench_json(rows: List[BenchRow], ab: ExtensionAB) -> dict:
    return {
        "schema": 1,
        "experiments": [
            {**{k: v for k, v in r.__dict__.items()}, "passed": r.passed} for r in rows
        ],
        "extension_ab": {**ab.__dict__, "passed": ab.passed},
        "passed": all(r.passed for r in rows) and ab.passed,
    }
