"""Supporting baseline of a spectrum by projected dual ascent.

The baseline ``g`` minimizes curvature energy minus its integral subject to
``0 <= g <= f``. Each iteration solves the fourth-order BVP for fixed
multipliers (the primal minimizer) and then takes a projected ascent step on
the multipliers ``lambda`` (for ``g <= f``) and ``mu`` (for ``g >= 0``).
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, LengthMismatch, NonFiniteIterate
from .stencils import BandedSolver, StencilSet, assemble_system, boundary_rhs, _band_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaselineConfig:
    """Hyperparameters of the dual-ascent loop.

    ``theta`` and ``gamma`` default to ``None``, meaning ``step_fraction / L``
    where ``L`` is the spectral radius of the map from an interior multiplier
    perturbation to the baseline response. See ``dual_lipschitz``.
    """

    alpha0: float = 2e-5
    beta0: float = 1.0
    theta: Optional[float] = None
    gamma: Optional[float] = None
    epsilon: float = 1e-4
    max_iter: int = 60000
    step_fraction: float = 0.9

    def __post_init__(self):
        for name in ("alpha0", "beta0", "epsilon", "step_fraction"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("theta", "gamma"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ConfigError(f"{name} must be positive")
        if not self.epsilon < 1:
            raise ConfigError("epsilon must be below 1")
        if int(self.max_iter) < 1:
            raise ConfigError("max_iter must be at least 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DualState:
    lam: np.ndarray
    mu: np.ndarray

    @classmethod
    def zeros(cls, n: int) -> "DualState":
        return cls(np.zeros(n), np.zeros(n))


@dataclass
class BaselineResult:
    g_star: np.ndarray
    iterations: int
    residual_trace: np.ndarray
    dual_objective_trace: np.ndarray
    converged: bool
    duals: Optional[DualState] = None
    theta: float = float("nan")
    gamma: float = float("nan")
    wall_time: float = 0.0

    @property
    def final_residual(self) -> float:
        return float(self.residual_trace[-1]) if len(self.residual_trace) else 0.0

    def feasibility_gap(self, f) -> float:
        """``max(g - f, -g, 0)`` over all nodes."""
        g = self.g_star
        return float(max(np.max(g - f), np.max(-g), 0.0))

    def to_dict(self, traces: bool = True) -> dict:
        out = {
            "iterations": self.iterations,
            "converged": self.converged,
            "final_residual": self.final_residual,
            "theta": self.theta,
            "gamma": self.gamma,
            "wall_time": self.wall_time,
            "g_star": self.g_star.tolist(),
        }
        if traces:
            out["residual_trace"] = np.asarray(self.residual_trace).tolist()
            out["dual_objective_trace"] = np.asarray(self.dual_objective_trace).tolist()
        return out


class _Primal:
    """Factored BVP for fixed alpha; solves for any multipliers."""

    def __init__(self, stencils: StencilSet, f, alpha, beta):
        n = stencils.grid_count
        self.h4 = stencils.h ** 4
        self.beta = beta
        self.nn = n - 1
        system = assemble_system(stencils, alpha, np.zeros(n), f)
        self.solver = BandedSolver(system.bands)
        self.tail = boundary_rhs(f)

    def __call__(self, lam, mu):
        c = self.beta - lam + mu
        rhs = np.concatenate([self.h4 * c[2:self.nn - 1], self.tail])
        return self.solver.solve(_band_order(rhs))


def _weights(stencils, config, n):
    alpha = np.full(n, float(config.alpha0))
    beta = np.full(n, float(config.beta0))
    return alpha, beta


def primal_solve(stencils: StencilSet, f, config: BaselineConfig, duals: DualState) -> np.ndarray:
    """Baseline minimizing the Lagrangian for fixed multipliers."""
    f = np.asarray(f, dtype=float)
    _check_lengths(stencils, f, duals.lam, duals.mu)
    alpha, beta = _weights(stencils, config, f.size)
    return _Primal(stencils, f, alpha, beta)(duals.lam, duals.mu)


def dual_step(duals: DualState, g, f, theta: float, gamma: float) -> DualState:
    """Projected ascent ``lam += theta (g - f)``, ``mu += gamma (-g)``, clipped at 0."""
    g = np.asarray(g, dtype=float)
    f = np.asarray(f, dtype=float)
    if not (duals.lam.shape == duals.mu.shape == g.shape == f.shape):
        raise LengthMismatch("multipliers, g and f must have equal lengths")
    lam = np.maximum(0.0, duals.lam + theta * (g - f))
    mu = np.maximum(0.0, duals.mu - gamma * g)
    return DualState(lam, mu)


def lagrangian_value(g, duals: DualState, config: BaselineConfig, f,
                     stencils: StencilSet) -> float:
    """Discrete Lagrangian.

    The curvature term is ``h * sum_j alpha_j (g_{j-1} - 2 g_j + g_{j+1})**2 / h**4``
    over ``j = 1..N-1``; the linear terms use trapezoid weights. For constant
    ``alpha`` the BVP solution is the exact minimizer of this quantity over
    the nodes not pinned by the boundary rows, so evaluating it at the primal
    solution gives the dual function.
    """
    g = np.asarray(g, dtype=float)
    f = np.asarray(f, dtype=float)
    _check_lengths(stencils, g, f, duals.lam, duals.mu)
    h = stencils.h
    alpha, beta = _weights(stencils, config, g.size)
    d2 = (g[:-2] - 2 * g[1:-1] + g[2:]) / h ** 2
    curvature = h * np.sum(alpha[1:-1] * d2 ** 2)
    w = np.ones(g.size)
    w[0] = w[-1] = 0.5
    linear = h * np.sum(w * (-beta * g + duals.lam * (g - f) - duals.mu * g))
    return float(curvature + linear)


def dual_lipschitz(stencils: StencilSet, config: BaselineConfig, f=None) -> float:
    """Spectral radius of the interior multiplier-to-baseline response.

    A unit change of the interior right-hand side at node ``j`` moves the
    baseline by column ``j`` of ``h**4 * inv(M)`` restricted to interior
    nodes. The largest eigenvalue modulus of that block bounds how far one
    ascent step can move ``g``.
    """
    n = stencils.grid_count
    alpha = np.full(n, float(config.alpha0))
    system = assemble_system(stencils, alpha, np.zeros(n), np.zeros(n))
    solver = BandedSolver(system.bands)
    m = n - 4
    rhs = np.zeros((n, m))
    rhs[2:n - 2] = np.eye(m) * stencils.h ** 4
    resp = solver.solve(rhs)[2:n - 2]
    return float(np.max(np.abs(np.linalg.eigvals(resp))))


def step_sizes(stencils: StencilSet, config: BaselineConfig):
    if config.theta is not None and config.gamma is not None:
        return float(config.theta), float(config.gamma)
    auto = config.step_fraction / dual_lipschitz(stencils, config)
    theta = auto if config.theta is None else float(config.theta)
    gamma = auto if config.gamma is None else float(config.gamma)
    return theta, gamma


def _check_lengths(stencils, *vecs):
    for v in vecs:
        if np.shape(v) != (stencils.grid_count,):
            raise LengthMismatch(
                f"expected vectors of length {stencils.grid_count}, got {np.shape(v)}")


def find_baseline(f, stencils: StencilSet, config: BaselineConfig = BaselineConfig(),
                  callback: Optional[Callable[[int, np.ndarray, DualState], None]] = None
                  ) -> BaselineResult:
    """Run dual ascent until the relative change of ``g`` drops below ``epsilon``.

    Parameters
    ----------
    f : array_like
        Nonnegative spectrum on the stencil grid.
    stencils : StencilSet
        Operators for that grid.
    config : BaselineConfig
        Hyperparameters.
    callback : callable, optional
        Called as ``callback(k, g, duals)`` after every iteration.

    Returns
    -------
    BaselineResult
        ``converged`` is False if ``max_iter`` was reached; the last iterate
        is returned in that case.
    """
    start = time.perf_counter()
    f = np.asarray(f, dtype=float)
    _check_lengths(stencils, f)
    n = f.size
    if not np.any(f):
        return BaselineResult(np.zeros(n), 0, np.zeros(0), np.zeros(0), True,
                              DualState.zeros(n), wall_time=time.perf_counter() - start)
    theta, gamma = step_sizes(stencils, config)
    alpha, beta = _weights(stencils, config, n)
    primal = _Primal(stencils, f, alpha, beta)
    duals = DualState.zeros(n)
    g = primal(duals.lam, duals.mu)
    residuals = []
    objective = [lagrangian_value(g, duals, config, f, stencils)]
    converged = False
    k = 0
    for k in range(1, int(config.max_iter) + 1):
        duals = dual_step(duals, g, f, theta, gamma)
        g_new = primal(duals.lam, duals.mu)
        if not np.all(np.isfinite(g_new)):
            raise NonFiniteIterate(k)
        norm = np.linalg.norm(g_new)
        r = np.linalg.norm(g_new - g) / norm if norm > 0 else 0.0
        g = g_new
        residuals.append(r)
        objective.append(lagrangian_value(g, duals, config, f, stencils))
        if callback is not None:
            callback(k, g, duals)
        if r < config.epsilon:
            converged = True
            break
    if not converged:
        logger.warning("baseline did not converge in %d iterations (residual %.3g)",
                       k, residuals[-1])
    return BaselineResult(g, k, np.asarray(residuals), np.asarray(objective), converged,
                          duals, theta, gamma, time.perf_counter() - start)
