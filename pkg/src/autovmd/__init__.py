"""Automatic mode-count and center-frequency detection for VMD."""

__version__ = "0.1.0"

from .baseline import BaselineConfig, BaselineResult, DualState, find_baseline
from .modes import ModeSet, detect_modes
from .spectrum import RawSignal, Spectrum, extend_spectrum, gen_signal, half_spectrum
from .stencils import build_stencils
from .vmd import VmdConfig, VmdResult, decompose

__all__ = [
    "BaselineConfig", "BaselineResult", "DualState", "ModeSet", "RawSignal", "Spectrum",
    "VmdConfig", "VmdResult", "build_stencils", "decompose", "detect_modes",
    "extend_spectrum", "find_baseline", "gen_signal", "half_spectrum",
]
