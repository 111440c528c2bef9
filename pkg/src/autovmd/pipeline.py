"""End-to-end workflow: spectrum, baseline, modes, VMD and metrics."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Optional


from . import __version__
from .baseline import BaselineConfig, BaselineResult, find_baseline
from .errors import ConfigError
from .metrics import EvalReport, evaluate
from .modes import KdeEstimate, ModeSet, detect_modes
from .spectrum import (
    DEFAULT_SAMPLES, RawSignal, Spectrum, Taper, downsample, extend_spectrum, gen_signal,
    half_spectrum, load_csv, take,
)
from .stencils import build_stencils
from .vmd import VmdConfig, VmdResult, decompose

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SpectrumConfig:
    grid_count: int = 201
    pad_fraction: float = 0.1
    taper: str = Taper.RAISED_COSINE.value
    sample_count: int = DEFAULT_SAMPLES

    def __post_init__(self):
        Taper(self.taper)
        if self.pad_fraction < 0 or self.pad_fraction > 0.5:
            raise ConfigError("pad_fraction must be in [0, 0.5]; 0 disables extension")


@dataclass(frozen=True)
class KdeConfig:
    bandwidth: Optional[float] = None
    rule: str = "scott"
    eval_count: int = 512
    min_width: int = 3
    mass_floor: float = 1e-3
    center: str = "centroid"


@dataclass(frozen=True)
class VmdOverrides:
    alpha_penalty: float = 2000.0
    tau: float = 0.0
    tol: float = 1e-7
    max_iter: int = 500
    dc_lock: bool = True


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "out"
    emit_plots: bool = False
    emit_traces: bool = True


@dataclass(frozen=True)
class PipelineConfig:
    baseline: BaselineConfig = field(default_factory=BaselineConfig)
    vmd: VmdOverrides = field(default_factory=VmdOverrides)
    spectrum: SpectrumConfig = field(default_factory=SpectrumConfig)
    kde: KdeConfig = field(default_factory=KdeConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        parts = {}
        for f in fields(cls):
            sub = f.default_factory
            known = {x.name for x in fields(sub)}
            given = dict(d.get(f.name) or {})
            unknown = set(given) - known
            if unknown:
                raise ConfigError(f"unknown {f.name} keys: {sorted(unknown)}")
            parts[f.name] = sub(**given)
        extra = set(d) - {f.name for f in fields(cls)}
        if extra:
            raise ConfigError(f"unknown config sections: {sorted(extra)}")
        return cls(**parts)

    def with_overrides(self, **sections) -> "PipelineConfig":
        """Replace fields section by section, e.g. ``baseline={"epsilon": 1e-5}``."""
        out = self
        for name, values in sections.items():
            if values:
                out = replace(out, **{name: replace(getattr(out, name), **values)})
        return out


def load_config(path) -> PipelineConfig:
    with open(path, encoding="utf-8") as fh:
        return PipelineConfig.from_dict(json.load(fh))


@dataclass(frozen=True)
class InputSpec:
    """Where the signal comes from; enough to reload it."""

    signal: Optional[str] = None
    csv: Optional[str] = None
    take: Optional[int] = None
    downsample: int = 1
    sample_rate: float = 1.0

    def to_dict(self) -> dict:
        return asdict(self)

    def load(self, sample_count: int = DEFAULT_SAMPLES) -> RawSignal:
        if (self.signal is None) == (self.csv is None):
            raise ConfigError("give exactly one of a signal name or a CSV path")
        if self.signal is not None:
            sig = gen_signal(self.signal, sample_count)
        else:
            sig = load_csv(self.csv, self.sample_rate)
        if self.take is not None:
            sig = take(sig, self.take)
        if self.downsample > 1:
            sig = downsample(sig, self.downsample)
        return sig


@dataclass
class Analysis:
    signal: RawSignal
    spectrum: Spectrum
    extended: Spectrum
    baseline: BaselineResult
    modes: ModeSet
    kde: Optional[KdeEstimate]


def prepare_spectrum(signal: RawSignal, config: SpectrumConfig):
    spec = half_spectrum(signal, config.grid_count)
    if config.pad_fraction > 0:
        ext = extend_spectrum(spec, config.pad_fraction, Taper(config.taper))
    else:
        ext = spec
    return spec, ext


def analyze(signal: RawSignal, config: PipelineConfig = PipelineConfig()) -> Analysis:
    """Spectrum, supporting baseline and detected modes of a signal."""
    spec, ext = prepare_spectrum(signal, config.spectrum)
    stencils = build_stencils(ext.grid_count, ext.grid_spacing)
    base = find_baseline(ext.values, stencils, config.baseline)
    k = config.kde
    modes, kde = detect_modes(ext.values, base.g_star, ext, k.bandwidth, k.rule, k.eval_count,
                              k.min_width, k.mass_floor, k.center)
    return Analysis(signal, spec, ext, base, modes, kde)


def vmd_config_for(modes: ModeSet, overrides: VmdOverrides) -> Optional[VmdConfig]:
    if modes.count == 0:
        return None
    omega = tuple(sorted(min(max(c, 0.0), 0.5) for c in modes.centers))
    return VmdConfig(modes.count, omega, **asdict(overrides))


def run_vmd(analysis: Analysis, config: PipelineConfig):
    """Seeded VMD and its metrics; ``(None, None)`` when no mode was found."""
    cfg = vmd_config_for(analysis.modes, config.vmd)
    if cfg is None:
        return None, None
    result = decompose(analysis.signal, cfg)
    report = evaluate(analysis.signal.samples, result.modes)
    return result, report


def run_record(command: str, source: InputSpec, config: PipelineConfig, analysis: Analysis,
               vmd: Optional[VmdResult] = None, report: Optional[EvalReport] = None) -> dict:
    """JSON-ready record of one run."""
    traces = config.output.emit_traces
    rec = {
        "schema": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "input": source.to_dict(),
        "config": config.to_dict(),
        "spectrum": analysis.extended.to_dict(),
        "baseline": analysis.baseline.to_dict(traces=traces),
        "modes": analysis.modes.to_dict(),
        "vmd": None,
        "eval": None,
    }
    if vmd is not None:
        rec["vmd"] = {
            "iterations": vmd.iterations,
            "converged": vmd.converged,
            "omega_final": vmd.omega_final.tolist(),
            "sample_rate": analysis.signal.sample_rate,
            "modes": vmd.modes.tolist(),
        }
    if report is not None:
        rec["eval"] = report.to_dict()
    return rec


def replay(record: dict) -> Analysis:
    """Rerun the analysis stored in a run record."""
    config = PipelineConfig.from_dict(record["config"])
    source = InputSpec(**record["input"])
    return analyze(source.load(config.spectrum.sample_count), config)
