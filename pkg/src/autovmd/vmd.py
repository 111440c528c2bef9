"""Variational mode decomposition on the one-sided spectrum.

Frequencies are in cycles/sample. Each mode is updated by a Wiener-like gain
centered on its current frequency, which is in turn moved to the power
centroid of the mode.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, IndexOutOfRange, ShapeMismatch
from .spectrum import RawSignal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VmdConfig:
    mode_count: int
    omega_init: tuple
    alpha_penalty: float = 2000.0
    tau: float = 0.0
    tol: float = 1e-7
    max_iter: int = 500
    dc_lock: bool = True

    def __post_init__(self):
        omega = tuple(float(w) for w in self.omega_init)
        object.__setattr__(self, "omega_init", omega)
        if self.mode_count < 1 or len(omega) != self.mode_count:
            raise ConfigError("omega_init must hold mode_count >= 1 values")
        if any(w < 0 or w > 0.5 for w in omega):
            raise ConfigError("initial centers must lie in [0, 0.5]")
        if any(b < a for a, b in zip(omega, omega[1:])):
            raise ConfigError("omega_init must be sorted ascending")
        if not self.alpha_penalty > 0 or self.tau < 0 or not self.tol > 0:
            raise ConfigError("need alpha_penalty > 0, tau >= 0, tol > 0")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")

    @classmethod
    def uniform(cls, mode_count: int, **kw) -> "VmdConfig":
        """Centers spread uniformly as ``0.5 k / K``."""
        return cls(mode_count, tuple(0.5 * k / mode_count for k in range(mode_count)), **kw)


@dataclass
class VmdState:
    u_hat: np.ndarray        # (K, bins) complex
    omega: np.ndarray        # (K,)
    lambda_hat: np.ndarray   # (bins,) complex
    iteration: int = 0


@dataclass
class VmdResult:
    modes: np.ndarray        # (K, T)
    omega_final: np.ndarray
    residual: np.ndarray
    iterations: int
    converged: bool
    max_imag_ratio: float = 0.0

    @property
    def reconstruction(self) -> np.ndarray:
        return self.modes.sum(axis=0)

    def to_dict(self) -> dict:
        return {
            "modes": self.modes.tolist(),
            "omega_final": self.omega_final.tolist(),
            "residual": self.residual.tolist(),
            "iterations": self.iterations,
            "converged": self.converged,
        }

    def to_csv(self, path, sample_rate: float = 1.0) -> None:
        t = np.arange(self.residual.size) / sample_rate
        header = ["t"] + [f"u_{k + 1}" for k in range(len(self.modes))] + ["residual"]
        table = np.column_stack([t, *self.modes, self.residual])
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in table:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def update_mode(state: VmdState, k: int, f_hat, alpha_penalty: float, freqs) -> np.ndarray:
    """``(f_hat - sum_{i != k} u_i + lambda/2) / (1 + 2 alpha (freqs - omega_k)**2)``."""
    K = state.u_hat.shape[0]
    if not 0 <= k < K:
        raise IndexOutOfRange(f"mode index {k} outside 0..{K - 1}")
    others = state.u_hat.sum(axis=0) - state.u_hat[k]
    numerator = f_hat - others + 0.5 * state.lambda_hat
    return numerator / (1.0 + 2.0 * alpha_penalty * (freqs - state.omega[k]) ** 2)


def update_omega(u_hat_k, bin_freqs, previous: float = 0.0) -> float:
    """Power-weighted mean frequency of one mode; ``previous`` if the mode is empty."""
    power = np.abs(u_hat_k) ** 2
    total = power.sum()
    if not total > 0:
        logger.debug("empty mode, keeping center %.6g", previous)
        return float(previous)
    return float(np.dot(bin_freqs, power) / total)


def update_multiplier(lambda_hat, f_hat, u_hats, tau: float) -> np.ndarray:
    """``lambda + tau (f_hat - sum_k u_k)``."""
    lambda_hat = np.asarray(lambda_hat)
    u_hats = np.atleast_2d(u_hats)
    if np.shape(f_hat) != lambda_hat.shape or u_hats.shape[1:] != lambda_hat.shape:
        raise ShapeMismatch("spectra must share one bin layout")
    if tau == 0:
        return lambda_hat.copy()
    return lambda_hat + tau * (f_hat - u_hats.sum(axis=0))


def mirror_extend(x) -> tuple:
    """Reflect half the signal at each end; returns the signal and the left offset."""
    x = np.asarray(x, dtype=float)
    half = x.size // 2
    return np.concatenate([x[:half][::-1], x, x[x.size - half:][::-1]]), half


def hermitian_inverse(half_spec, length: int) -> np.ndarray:
    """Complex inverse DFT of the Hermitian spectrum built from its nonnegative half."""
    half_spec = np.asarray(half_spec, dtype=complex).copy()
    half_spec[..., 0] = half_spec[..., 0].real
    if length % 2 == 0:
        half_spec[..., -1] = half_spec[..., -1].real
    neg = np.conj(half_spec[..., 1:(length + 1) // 2][..., ::-1])
    return np.fft.ifft(np.concatenate([half_spec, neg], axis=-1), axis=-1)


def _change(new, old):
    num = np.sum(np.abs(new - old) ** 2, axis=1)
    den = np.sum(np.abs(old) ** 2, axis=1)
    ratios = np.where(num == 0, 0.0, num / np.where(den > 0, den, 1.0))
    ratios = np.where((den == 0) & (num > 0), np.inf, ratios)
    return float(ratios.sum())


def decompose(signal, config: VmdConfig) -> VmdResult:
    """Decompose a signal into ``config.mode_count`` band-limited modes.

    Parameters
    ----------
    signal : RawSignal or array_like
        Real input.
    config : VmdConfig
        Mode count, seeds and penalties.

    Returns
    -------
    VmdResult
        Modes sorted by final center frequency. ``residual`` is the input
        minus the sum of modes.
    """
    x = np.asarray(signal.samples if isinstance(signal, RawSignal) else signal, dtype=float)
    K = config.mode_count
    if x.size < 4 * K:
        raise ConfigError(f"signal of {x.size} samples too short for {K} modes")
    ext, offset = mirror_extend(x)
    n = ext.size
    f_hat = np.fft.rfft(ext)
    freqs = np.arange(f_hat.size) / n
    one_bin = 1.0 / n
    omega = np.array(config.omega_init, dtype=float)
    locked = np.zeros(K, dtype=bool)
    if config.dc_lock:
        locked = omega < one_bin
        omega[locked] = 0.0
    state = VmdState(np.zeros((K, f_hat.size), dtype=complex), omega, np.zeros_like(f_hat))
    converged = False
    for it in range(1, config.max_iter + 1):
        previous = state.u_hat.copy()
        for k in range(K):
            state.u_hat[k] = update_mode(state, k, f_hat, config.alpha_penalty, freqs)
            if not locked[k]:
                state.omega[k] = update_omega(state.u_hat[k], freqs, state.omega[k])
        state.lambda_hat = update_multiplier(state.lambda_hat, f_hat, state.u_hat, config.tau)
        state.iteration = it
        if _change(state.u_hat, previous) < config.tol:
            converged = True
            break
    if not converged:
        logger.warning("VMD did not converge in %d iterations", config.max_iter)
    full = hermitian_inverse(state.u_hat, n)
    scale = np.max(np.abs(full.real)) if full.size else 0.0
    imag_ratio = float(np.max(np.abs(full.imag)) / scale) if scale > 0 else 0.0
    modes = full.real[:, offset:offset + x.size]
    order = np.argsort(state.omega, kind="stable")
    modes = modes[order]
    return VmdResult(modes, state.omega[order].copy(), x - modes.sum(axis=0),
                     state.iteration, converged, imag_ratio)
