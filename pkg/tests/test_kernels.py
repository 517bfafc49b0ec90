import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrbfps.kernels import (
    KernelSpec,
    cartesian_first_derivative,
    cartesian_laplacian,
    cartesian_second_derivative,
    evaluate,
    radial_derivative,
)

TUNED_N9 = KernelSpec.hybrid(1.4440, 0.7404, 0.0406)

specs = st.builds(
    KernelSpec.hybrid,
    st.floats(0.05, 5.0),
    st.floats(0.0, 1.0),
    st.floats(0.01, 1.0),
)


def test_gaussian_at_zero():
    assert evaluate(KernelSpec.gaussian(1.0), 0.0) == 1.0


def test_cubic_value():
    assert evaluate(KernelSpec.cubic(), 2.0) == 8.0


def test_hybrid_table_row():
    expected = 0.7404 * math.exp(-(1.4440**2)) + 0.0406
    assert evaluate(TUNED_N9, 1.0) == pytest.approx(expected, rel=1e-15)


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        evaluate(KernelSpec.cubic(), -0.1)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(family="hybrid", epsilon=1.0, alpha=0.0, beta=0.0),
        dict(family="hybrid", epsilon=-1.0, alpha=0.5, beta=0.5),
        dict(family="hybrid", epsilon=1.0, alpha=1.5, beta=0.5),
        dict(family="hybrid", epsilon=1.0, alpha=0.5, beta=-0.1),
        dict(family="gaussian", epsilon=1.0, alpha=0.5),
        dict(family="multiquadric", epsilon=1.0),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        KernelSpec(**kwargs)


def test_spec_is_immutable():
    with pytest.raises(AttributeError):
        TUNED_N9.epsilon = 2.0


def test_radial_derivative_examples():
    assert radial_derivative(KernelSpec.gaussian(1.0), 0.0, 1) == 0.0
    assert radial_derivative(KernelSpec.cubic(), 2.0, 1) == 12.0
    spec = KernelSpec.hybrid(1.0, 1.0, 1.0)
    h = 1e-6
    fd = (evaluate(spec, 1 + h) - evaluate(spec, 1 - h)) / (2 * h)
    assert fd == pytest.approx(3 - 2 / math.e, rel=1e-9)
    assert radial_derivative(spec, 1.0, 1) == pytest.approx(3 - 2 / math.e, rel=1e-14)


def test_radial_derivative_bad_order():
    with pytest.raises(ValueError):
        radial_derivative(KernelSpec.cubic(), 1.0, 3)


def test_second_radial_derivative_finite_difference():
    spec = KernelSpec.hybrid(1.3, 0.6, 0.2)
    r = np.linspace(0.05, 3, 40)
    h = 1e-4
    fd = (evaluate(spec, r + h) - 2 * evaluate(spec, r) + evaluate(spec, r - h)) / h**2
    np.testing.assert_allclose(radial_derivative(spec, r, 2), fd, rtol=1e-6, atol=1e-6)


def test_cartesian_first_derivative_examples():
    for spec in (KernelSpec.cubic(), KernelSpec.gaussian(2.0), TUNED_N9):
        assert cartesian_first_derivative(spec, [0.3, -0.2], [0.3, -0.2], 1) == 0.0
    assert cartesian_first_derivative(KernelSpec.cubic(), [2.0, 0.0], [0.0, 0.0], 0) == 12.0
    g = KernelSpec.gaussian(1.0)
    h = 1e-6
    fd = (evaluate(g, 1 + h) - evaluate(g, 1 - h)) / (2 * h)
    val = cartesian_first_derivative(g, [1.0, 0.0], [0.0, 0.0], 0)
    assert val == pytest.approx(fd, rel=1e-8)
    assert val == pytest.approx(-2 / math.e, rel=1e-14)


def test_cartesian_derivative_argument_errors():
    with pytest.raises(ValueError):
        cartesian_first_derivative(KernelSpec.cubic(), [1.0, 0.0], [0.0], 0)
    with pytest.raises(ValueError):
        cartesian_first_derivative(KernelSpec.cubic(), [1.0, 0.0], [0.0, 0.0], 2)


def test_cartesian_laplacian_examples():
    cubic = KernelSpec.cubic()
    assert cartesian_laplacian(cubic, 2.0, 2) == pytest.approx(18.0)
    assert cartesian_laplacian(cubic, 2.0, 1) == pytest.approx(12.0)
    g = KernelSpec.gaussian(1.0)
    h = 1e-4
    phi = lambda x, z: evaluate(g, math.hypot(x, z))
    fd = (phi(h, 0) + phi(-h, 0) + phi(0, h) + phi(0, -h) - 4 * phi(0, 0)) / h**2
    assert fd == pytest.approx(-4.0, rel=1e-6)
    assert cartesian_laplacian(g, 0.0, 2) == -4.0
    with pytest.raises(ValueError):
        cartesian_laplacian(g, 1.0, 0)


def test_laplacian_is_sum_of_axis_second_derivatives():
    spec = KernelSpec.hybrid(0.9, 0.4, 0.7)
    rng = np.random.default_rng(3)
    x = rng.uniform(-1, 1, (50, 3))
    c = rng.uniform(-1, 1, 3)
    total = sum(cartesian_second_derivative(spec, x, c, k) for k in range(3))
    r = np.linalg.norm(x - c, axis=1)
    np.testing.assert_allclose(total, cartesian_laplacian(spec, r, 3), rtol=1e-12, atol=1e-12)


@given(st.floats(0.0, 10.0), st.floats(0.0, 5.0))
def test_family_corner_cases_match_exactly(r, eps):
    assert evaluate(KernelSpec.hybrid(eps, 1.0, 0.0), r) == evaluate(KernelSpec.gaussian(eps), r)
    assert evaluate(KernelSpec.hybrid(eps, 0.0, 1.0), r) == evaluate(KernelSpec.cubic(), r)


@settings(max_examples=100)
@given(specs, st.floats(1e-3, 10.0))
def test_first_derivative_matches_central_differences(spec, r):
    h = 1e-6
    fd = (evaluate(spec, r + h) - evaluate(spec, r - h)) / (2 * h)
    exact = radial_derivative(spec, r, 1)
    # truncation is O(h^2); cancellation costs about |phi| * 1e-16 / h
    assert abs(exact - fd) <= 1e-7 * (abs(exact) + abs(evaluate(spec, r)) + 1.0)


@settings(max_examples=50)
@given(specs, st.floats(0.05, 2.0), st.floats(0.0, 2 * math.pi))
def test_laplacian_matches_five_point_stencil(spec, r, theta):
    h = 1e-4
    x0 = np.array([r * math.cos(theta), r * math.sin(theta)])
    phi = lambda p: evaluate(spec, np.linalg.norm(p))
    e = np.eye(2) * h
    fd = sum(phi(x0 + e[k]) + phi(x0 - e[k]) - 2 * phi(x0) for k in range(2)) / h**2
    exact = cartesian_laplacian(spec, r, 2)
    assert abs(exact - fd) <= 1e-5 * max(abs(exact), 1.0)


@given(st.floats(0.0, 5.0), st.floats(0.0, 3.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0),
       st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_evaluate_linear_in_weights(eps, r, a1, b1, a2, b2):
    if a1 + b1 == 0 or a2 + b2 == 0 or a1 + a2 > 1 or b1 + b2 > 1 or a1 + a2 + b1 + b2 == 0:
        return
    lhs = evaluate(KernelSpec.hybrid(eps, a1 + a2, b1 + b2), r)
    rhs = evaluate(KernelSpec.hybrid(eps, a1, b1), r) + evaluate(KernelSpec.hybrid(eps, a2, b2), r)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
