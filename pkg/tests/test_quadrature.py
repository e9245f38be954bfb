import math

import numpy as np

from riskgames.quadrature import adaptive_simpson, composite_simpson, integrate_pieces


def test_polynomial_exact():
    # Simpson integrates cubics exactly
    val = composite_simpson(lambda x: x**3, 0.0, 2.0, 2)
    assert val == 4.0


def test_adaptive_gaussian_window():
    # erf oracle: integral of exp(-20 (x-3)^2) over [2.5, 3.5]
    exact = math.sqrt(math.pi / 20.0) * math.erf(math.sqrt(20.0) * 0.5)
    val = adaptive_simpson(lambda x: np.exp(-20.0 * (x - 3.0) ** 2), 2.5, 3.5, tol=1e-12)
    assert abs(val - exact) < 1e-10


def test_pieces_sum_and_degenerate():
    val = integrate_pieces(lambda x: np.ones_like(x), [0.0, 0.5, 0.5, 2.0])
    assert abs(val - 2.0) < 1e-12
    assert integrate_pieces(lambda x: x, [1.0]) == 0.0
    assert integrate_pieces(lambda x: x, []) == 0.0
