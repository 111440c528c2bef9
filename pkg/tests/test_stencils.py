import numpy as np
import pytest
from hypothesis import given, strategies as st

from autovmd.errors import (
    GridTooSmall, LengthMismatch, NonPositiveAlpha, OrderOutOfRange,
)
from autovmd.stencils import (
    apply_derivative, assemble_system, broadcast_hadamard, build_stencils,
)
from oracles import dense_bvp


def grid(n_intervals, h=None):
    h = h if h is not None else 1.0 / n_intervals
    return build_stencils(n_intervals + 1, h), np.arange(n_intervals + 1) * h


def test_coefficients_and_boundary_block():
    h = 0.1
    s = build_stencils(11, h)
    np.testing.assert_allclose(s.d1, np.array([1, -8, 0, 8, -1]) / (12 * h))
    np.testing.assert_allclose(s.d2, np.array([-1, 16, -30, 16, -1]) / (12 * h ** 2))
    np.testing.assert_allclose(s.d3, np.array([-1, 2, 0, -2, 1]) / (2 * h ** 3))
    np.testing.assert_allclose(s.d4, np.array([1, -4, 6, -4, 1]) / h ** 4)
    assert s.interior_matrix(4).shape == (7, 11)      # N - 3 rows
    b = s.boundary_matrix()
    assert [set(np.flatnonzero(r)) for r in b] == [{0}, {10}, {0, 1}, {9, 10}]
    np.testing.assert_array_equal(b[2, :2], [-1, 1])
    np.testing.assert_array_equal(b[3, 9:], [-1, 1])


def test_errors():
    with pytest.raises(GridTooSmall):
        build_stencils(7, 0.1)
    s = build_stencils(11, 0.1)
    with pytest.raises(OrderOutOfRange):
        apply_derivative(s, 5, np.zeros(11))
    with pytest.raises(LengthMismatch):
        apply_derivative(s, 1, np.zeros(10))
    with pytest.raises(LengthMismatch):
        broadcast_hadamard(np.ones(3), np.ones((4, 4)))
    with pytest.raises(NonPositiveAlpha):
        assemble_system(s, np.zeros(11), np.zeros(11), np.zeros(11))
    with pytest.raises(LengthMismatch):
        assemble_system(s, np.ones(10), np.zeros(11), np.zeros(11))


def test_trivial_examples():
    s, x = grid(40, 0.37)
    x = np.arange(41) * 0.37
    np.testing.assert_allclose(apply_derivative(s, 4, x ** 4), 24.0, rtol=1e-9)
    np.testing.assert_allclose(apply_derivative(s, 1, x ** 3), 3 * x[2:-2] ** 2, rtol=1e-9)
    np.testing.assert_allclose(apply_derivative(s, 2, np.full(41, 3.3)), 0.0, atol=1e-9)
    np.testing.assert_allclose(apply_derivative(s, 4, 0.37 * np.arange(41.0)), 0.0, atol=1e-9)
    np.testing.assert_allclose(apply_derivative(s, 3, x ** 3), 6.0, rtol=1e-9)


def test_second_derivative_of_sine():
    s, x = grid(200)
    d2 = apply_derivative(s, 2, np.sin(2 * np.pi * x))
    assert np.max(np.abs(d2 + 4 * np.pi ** 2 * np.sin(2 * np.pi * x[2:-2]))) <= 1e-4


@given(st.integers(0, 4), st.integers(1, 4),
       st.lists(st.floats(-3, 3), min_size=5, max_size=5),
       st.floats(0.01, 2.0), st.floats(-2, 2))
def test_polynomial_exactness(degree, order, coef, h, shift):
    s = build_stencils(12, h)
    x = shift + np.arange(12) * h
    c = np.array(coef[:degree + 1])
    p = np.polynomial.Polynomial(c)
    exact = p.deriv(order)(x[2:-2]) if order <= degree else np.zeros(8)
    got = apply_derivative(s, order, p(x))
    scale = max(1.0, np.max(np.abs(exact)), np.max(np.abs(p(x))) / h ** order)
    assert np.max(np.abs(got - exact)) <= 1e-9 * scale


def test_broadcast_hadamard_trivial():
    m = np.arange(12.0).reshape(3, 4)
    np.testing.assert_array_equal(broadcast_hadamard(np.ones(3), m), m)
    np.testing.assert_array_equal(broadcast_hadamard(np.zeros(3), m), np.zeros((3, 4)))


@given(st.integers(0, 2 ** 32 - 1))
def test_broadcast_hadamard_identity(seed):
    rng = np.random.default_rng(seed)
    A, B = rng.normal(size=(2, 6, 6))
    a, b = rng.normal(size=(2, 6))
    lhs = (A @ a) * (B @ b)
    rhs = broadcast_hadamard(A @ a, B) @ b
    np.testing.assert_allclose(rhs, lhs, rtol=1e-12, atol=1e-12)


def test_line_is_exact_solution():
    s, x = grid(50)
    f = 0.2 + 0.5 * x
    sys_ = assemble_system(s, np.full(51, 3e-3), np.zeros(51), f)
    np.testing.assert_allclose(sys_.solve(), f, atol=1e-12)
    np.testing.assert_allclose(sys_.solve_dense(), f, atol=1e-12)


def test_zero_data_gives_zero():
    s, _ = grid(30)
    sys_ = assemble_system(s, np.ones(31), np.zeros(31), np.zeros(31))
    assert np.max(np.abs(sys_.solve())) == 0.0


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("n", [20, 200])
def test_banded_matches_dense_oracle(seed, n):
    rng = np.random.default_rng(seed)
    h = 1.0 / n
    s = build_stencils(n + 1, h)
    alpha = rng.uniform(0.5, 2.0, n + 1) * 1e-3
    rhs = rng.normal(size=n + 1)
    f = rng.uniform(size=n + 1)
    sys_ = assemble_system(s, alpha, rhs, f)
    ref = dense_bvp(alpha, rhs, f, h)
    for g in (sys_.solve(), sys_.solve_dense()):
        assert np.linalg.norm(g - ref) <= 1e-8 * np.linalg.norm(ref)
    # the assembled dense matrix reproduces the oracle's equations
    assert np.allclose(sys_.matrix @ ref, sys_.rhs, rtol=1e-8, atol=1e-12)


@pytest.mark.parametrize("n", [20, 200])
def test_homogeneous_problem_has_only_zero_solution(n):
    rng = np.random.default_rng(n)
    s = build_stencils(n + 1, 1.0 / n)
    zero = np.zeros(n + 1)
    for _ in range(50):
        alpha = np.exp(rng.uniform(np.log(1e-6), np.log(10.0), n + 1))
        g = assemble_system(s, alpha, zero, zero).solve()
        assert np.max(np.abs(g)) <= 1e-8


def test_matrix_dump_format():
    s, x = grid(10)
    text = assemble_system(s, np.ones(11), np.ones(11), x).to_text()
    rows = text.strip().split("\n")
    assert len(rows) == 11
    assert all(len(r.split(" ")) == 12 for r in rows)
    assert float(rows[7].split(" ")[0]) == 1.0      # g_0 row is the first boundary row
