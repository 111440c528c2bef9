"""Five-point finite-difference operators and the fourth-order BVP system.

Interior equations sit at nodes ``i = 2..N-2`` and are listed first; the four
boundary rows ``g_0 = f_0``, ``g_N = f_N``, ``g_1 - g_0 = f_1 - f_0`` and
``g_N - g_{N-1} = f_N - f_{N-1}`` are appended last. Interior rows are scaled
by ``h**4`` on both sides to tame the condition number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .errors import (
    GridTooSmall, LengthMismatch, NonPositiveAlpha, OrderOutOfRange, SingularSystem,
)

_BASE = {
    1: (np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0, 1),
    2: (np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0, 2),
    3: (np.array([-1.0, 2.0, 0.0, -2.0, 1.0]) / 2.0, 3),
    4: (np.array([1.0, -4.0, 6.0, -4.0, 1.0]), 4),
}


@dataclass(frozen=True)
class StencilSet:
    """Five-point derivative stencils and boundary rows on a uniform grid.

    Attributes
    ----------
    grid_count : int
        Number of nodes ``N + 1``.
    h : float
        Grid spacing.
    coefficients : dict
        Maps derivative order 1..4 to the five weights (already divided by
        ``h**order``) applied at columns ``i-2..i+2`` for interior row ``i``.
    boundary_block : tuple
        Four rows, each a tuple of ``(column, coefficient)`` pairs.
    """

    grid_count: int
    h: float
    coefficients: dict
    boundary_block: tuple

    @property
    def n_interior(self) -> int:
        return self.grid_count - 4

    @property
    def d1(self):
        return self.coefficients[1]

    @property
    def d2(self):
        return self.coefficients[2]

    @property
    def d3(self):
        return self.coefficients[3]

    @property
    def d4(self):
        return self.coefficients[4]

    def interior_matrix(self, order: int) -> np.ndarray:
        """Dense ``(N-3, N+1)`` matrix of one derivative operator."""
        c = _coeffs(self, order)
        out = np.zeros((self.n_interior, self.grid_count))
        for r in range(self.n_interior):
            out[r, r:r + 5] = c
        return out

    def boundary_matrix(self) -> np.ndarray:
        out = np.zeros((4, self.grid_count))
        for r, row in enumerate(self.boundary_block):
            for col, val in row:
                out[r, col] = val
        return out


def build_stencils(grid_count: int, h: float) -> StencilSet:
    """Build the derivative stencils of orders 1..4 and the boundary block."""
    if grid_count < 8:
        raise GridTooSmall(f"grid_count must be at least 8, got {grid_count}")
    if not h > 0:
        raise ValueError("h must be positive")
    n = grid_count - 1
    coeffs = {k: base / h ** p for k, (base, p) in _BASE.items()}
    boundary = (
        ((0, 1.0),),
        ((n, 1.0),),
        ((0, -1.0), (1, 1.0)),
        ((n - 1, -1.0), (n, 1.0)),
    )
    return StencilSet(int(grid_count), float(h), coeffs, boundary)


def _coeffs(stencils, order):
    if order not in (1, 2, 3, 4):
        raise OrderOutOfRange(f"derivative order must be 1..4, got {order}")
    return stencils.coefficients[order]


def apply_derivative(stencils: StencilSet, order: int, v) -> np.ndarray:
    """Interior derivative estimates at nodes ``2..N-2`` (length ``N-3``)."""
    c = _coeffs(stencils, order)
    v = np.asarray(v, dtype=float)
    if v.shape != (stencils.grid_count,):
        raise LengthMismatch(f"expected {stencils.grid_count} values, got {v.shape}")
    m = stencils.n_interior
    out = np.zeros(m)
    for j in range(5):
        out += c[j] * v[j:j + m]
    return out


def broadcast_hadamard(v, m) -> np.ndarray:
    """Scale row ``i`` of ``m`` by ``v[i]``."""
    v = np.asarray(v)
    m = np.asarray(m)
    if v.ndim != 1 or m.ndim != 2 or v.size != m.shape[0]:
        raise LengthMismatch("vector length must equal the matrix row count")
    return v[:, None] * m


def interior_rows(stencils: StencilSet, alpha) -> np.ndarray:
    """Five-band coefficients of the scaled interior operator, shape ``(N-3, 5)``.

    Row ``i`` holds ``h**4 * (2 (A2 a)_i G2 + 4 (A1 a)_i G3 + 2 a_i G4)``
    restricted to columns ``i-2..i+2``.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (stencils.grid_count,):
        raise LengthMismatch("alpha must have one value per node")
    a = alpha[2:-2]
    da = apply_derivative(stencils, 1, alpha)
    dda = apply_derivative(stencils, 2, alpha)
    rows = (2 * dda[:, None] * stencils.d2 + 4 * da[:, None] * stencils.d3
            + 2 * a[:, None] * stencils.d4)
    return rows * stencils.h ** 4


@dataclass(frozen=True)
class BvpSystem:
    """The assembled linear system ``matrix @ g = rhs``.

    ``bands`` stores the same equations reordered so that row ``r`` constrains
    node ``r``; in that order the matrix has two bands on each side of the
    diagonal and can be factored as a banded matrix.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    h: float
    bands: np.ndarray

    def solve(self) -> np.ndarray:
        return BandedSolver(self.bands).solve(_band_order(self.rhs))

    def solve_dense(self) -> np.ndarray:
        return np.linalg.solve(self.matrix, self.rhs)

    def to_text(self) -> str:
        """Row-per-line, space-separated dump of ``[matrix | rhs]``."""
        full = np.column_stack([self.matrix, self.rhs])
        return "\n".join(" ".join(f"{x:.17g}" for x in row) for row in full) + "\n"


def _band_order(v):
    """Permute spec-ordered rows into node order (interior first -> banded)."""
    v = np.asarray(v)
    n = v.shape[0] - 1
    return np.concatenate([v[n - 3:n - 2], v[n - 1:n], v[:n - 3], v[n:n + 1], v[n - 2:n - 1]])


def _bands(rows, n):
    """Diagonal-ordered storage ``ab[2 + r - c, c]`` of the node-ordered matrix."""
    ab = np.zeros((5, n + 1))
    ab[2, 0] = 1.0                    # g_0
    ab[2, 1], ab[3, 0] = 1.0, -1.0    # g_1 - g_0
    for j in range(5):
        # interior node r = 2..N-2 touches column r - 2 + j
        cols = np.arange(n - 3) + j
        ab[2 + (np.arange(2, n - 1) - cols), cols] = rows[:, j]
    ab[2, n - 1], ab[1, n] = -1.0, 1.0  # g_N - g_{N-1}
    ab[2, n] = 1.0                    # g_N
    return ab


class BandedSolver:
    """LU factorization of a (2, 2)-banded matrix, reusable across right-hand sides."""

    def __init__(self, bands: np.ndarray):
        n = bands.shape[1]
        ab = np.zeros((7, n))
        ab[2:] = bands
        self._lu, self._piv, info = lapack.dgbtrf(ab, 2, 2)
        if info != 0:
            raise SingularSystem(f"banded LU failed (info={info})")

    def solve(self, rhs_node_order) -> np.ndarray:
        x, info = lapack.dgbtrs(self._lu, 2, 2, np.asarray(rhs_node_order, dtype=float),
                                self._piv)
        if info != 0:
            raise SingularSystem(f"banded solve failed (info={info})")
        return x


def boundary_rhs(f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    return np.array([f[0], f[-1], f[1] - f[0], f[-1] - f[-2]])


def assemble_system(stencils: StencilSet, alpha, rhs_interior, f) -> BvpSystem:
    """Assemble the BVP matrix and right-hand side.

    Parameters
    ----------
    stencils : StencilSet
        Operators for the grid.
    alpha : array_like
        Strictly positive curvature weight per node.
    rhs_interior : array_like
        Unscaled right-hand side ``beta - lambda + mu`` per node; only nodes
        ``2..N-2`` are used.
    f : array_like
        Spectrum supplying the boundary data.
    """
    npts = stencils.grid_count
    alpha = np.asarray(alpha, dtype=float)
    rhs_interior = np.asarray(rhs_interior, dtype=float)
    f = np.asarray(f, dtype=float)
    for name, vec in (("alpha", alpha), ("rhs_interior", rhs_interior), ("f", f)):
        if vec.shape != (npts,):
            raise LengthMismatch(f"{name} must have {npts} values, got {vec.shape}")
    if np.any(alpha <= 0):
        raise NonPositiveAlpha("alpha must be strictly positive")
    n = npts - 1
    rows = interior_rows(stencils, alpha)
    matrix = np.zeros((npts, npts))
    for r in range(n - 3):
        matrix[r, r:r + 5] = rows[r]
    matrix[n - 3:] = stencils.boundary_matrix()
    rhs = np.concatenate([stencils.h ** 4 * rhs_interior[2:n - 1], boundary_rhs(f)])
    return BvpSystem(matrix, rhs, stencils.h, _bands(rows, n))
