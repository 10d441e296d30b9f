#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    Tests of the forward-mode dual numbers.
"""


# =--------------= #
# Libraries import #
# =--------------= #

from src.Dual import Dual, directional, log1p, value_of, variables
import numpy as np
import pytest

# =------------------------------------------------------------------------------= #


def test_square_derivative():
    x, = variables([3.0])
    y = x * x
    assert y.value == 9.0
    assert y.tangent == pytest.approx([6.0])


def test_variables_seed_unit_directions():
    a, b, c = variables([1.0, 2.0, 3.0])
    assert a.tangent == pytest.approx([1.0, 0.0, 0.0])
    assert c.tangent == pytest.approx([0.0, 0.0, 1.0])


def test_gradient_of_a_rational_function():
    x, y = variables([2.0, 5.0])
    z = (x * y + 1) / (y - x) - 3 * x ** 2
    # z = (xy + 1)/(y - x) - 3x²
    dz_dx = (y.value * (y.value - x.value) + (x.value * y.value + 1)) / (y.value - x.value) ** 2 - 6 * x.value
    dz_dy = (x.value * (y.value - x.value) - (x.value * y.value + 1)) / (y.value - x.value) ** 2
    assert z.value == pytest.approx(11 / 3 - 12)
    assert z.tangent == pytest.approx([dz_dx, dz_dy])


def test_reflected_operators():
    x, = variables([4.0])
    assert (10 - x).tangent == pytest.approx([-1.0])
    assert (8 / x).value == 2.0
    assert (8 / x).tangent == pytest.approx([-0.5])
    assert (-x).tangent == pytest.approx([-1.0])


def test_log1p():
    x, = variables([0.5])
    assert log1p(x).value == pytest.approx(np.log(1.5))
    assert log1p(x).tangent == pytest.approx([1 / 1.5])
    assert log1p(2.0) == pytest.approx(np.log(3.0))


def test_numpy_arrays_defer_to_dual():
    x, = variables([np.array([1.0, 2.0, 3.0])])
    y = np.array([2.0, 2.0, 2.0]) * x + np.ones(3)
    assert isinstance(y, Dual)
    assert y.value == pytest.approx([3.0, 5.0, 7.0])
    assert y.tangent == pytest.approx([[2.0, 2.0, 2.0]])


def test_dual_exponent_rejected():
    x, y = variables([2.0, 3.0])
    with pytest.raises(TypeError):
        x ** y


def test_directional_seed():
    x, y = directional([1.0, 2.0], [0.5, -1.0])
    z = x * y
    assert z.tangent == pytest.approx(0.5 * 2.0 - 1.0 * 1.0)


def test_value_of():
    assert value_of(7.0) == 7.0
    x, = variables([np.zeros(4)])
    assert value_of(x) is x.value
