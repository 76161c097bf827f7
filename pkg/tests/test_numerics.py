import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from su11lab.numerics import (
    SingularMatrixError,
    central_difference,
    condition_number,
    determinant,
    inverse,
    richardson_even,
    solve_linear,
)


def test_solve_identity_returns_rhs(rng):
    B = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    np.testing.assert_allclose(solve_linear(np.eye(4), B), B)


def test_solve_diagonal():
    np.testing.assert_allclose(solve_linear(np.diag([2.0, 4.0]), np.eye(2)), np.diag([0.5, 0.25]))


def test_solve_permutation_is_own_inverse():
    P = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(solve_linear(P, np.eye(2)), P)


def test_solve_vector_rhs(rng):
    A = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    b = rng.normal(size=4)
    np.testing.assert_allclose(A @ solve_linear(A, b), b, atol=1e-12)


@pytest.mark.parametrize("A", [np.zeros((3, 3)), np.array([[1.0, 2.0], [2.0, 4.0]]), np.array([[1.0, 1.0], [1.0, 1.0 + 1e-17]])])
def test_singular_matrix_raises(A):
    with pytest.raises(SingularMatrixError):
        solve_linear(A, np.eye(len(A)))


def test_badly_scaled_row_is_not_singular():
    # a tiny but well-conditioned row must not trip the relative pivot test
    A = np.diag([1e-20, 1.0])
    np.testing.assert_allclose(inverse(A), np.diag([1e20, 1.0]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=16, max_size=16))
def test_inverse_round_trip(entries):
    A = np.array(entries).reshape(4, 4) + 8 * np.eye(4)
    np.testing.assert_allclose(A @ inverse(A), np.eye(4), atol=1e-10)


def test_determinant_examples():
    assert determinant(np.eye(4)) == pytest.approx(1.0)
    assert determinant(np.diag([2.0, 3.0])) == pytest.approx(6.0)


@given(st.floats(-5, 5))
def test_squeezing_preserves_determinant(r):
    assert determinant(np.diag([math.exp(2 * r), math.exp(-2 * r)])) == pytest.approx(1.0, rel=1e-12)


def test_condition_number_of_diagonal():
    assert condition_number(np.diag([1.0, 100.0])) == pytest.approx(100.0)


def test_central_difference_examples():
    assert central_difference(math.sin, 0.0, 1e-5) == pytest.approx(1.0, abs=1e-9)
    assert central_difference(lambda x: 7.0, 1.3) == pytest.approx(0.0, abs=1e-12)
    assert central_difference(lambda x: x * x, 3.0, 1e-5) == pytest.approx(6.0, abs=1e-8)


def test_central_difference_on_arrays():
    d = central_difference(lambda x: np.array([x, x**2, np.sin(x)]), 0.5)
    np.testing.assert_allclose(d, [1.0, 1.0, math.cos(0.5)], atol=1e-9)


@pytest.mark.parametrize("h", [0.0, -1e-3])
def test_central_difference_rejects_bad_step(h):
    with pytest.raises(ValueError):
        central_difference(math.sin, 0.0, h)


def test_richardson_removes_even_error_terms():
    steps = (0.1, 0.05, 0.025)
    values = [2.0 + 3 * s**2 - 5 * s**4 for s in steps]
    assert richardson_even(values, steps) == pytest.approx(2.0, abs=1e-13)
