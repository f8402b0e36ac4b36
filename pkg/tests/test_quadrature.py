import math

import numpy as np
import pytest

from transitq.quadrature import adaptive_gk, QuadratureError


def test_polynomial_exact():
    val, err = adaptive_gk(lambda x: x ** 6, [0.0, 1.0])
    assert val == pytest.approx(1.0 / 7.0, rel=1e-13)


def test_oscillatory_with_coarse_mesh():
    val, _ = adaptive_gk(lambda x: np.sin(40.0 * x), [0.0, 1.0, 2.0, 3.0],
                         epsabs=1e-12, epsrel=1e-12)
    exact = (1.0 - math.cos(120.0)) / 40.0
    assert val == pytest.approx(exact, abs=1e-10)


def test_vector_valued():
    val, _ = adaptive_gk(lambda x: np.stack([x, x ** 2], axis=1), [0.0, 2.0])
    assert val[0] == pytest.approx(2.0, rel=1e-12)
    assert val[1] == pytest.approx(8.0 / 3.0, rel=1e-12)


def test_budget_exhaustion_reports_achieved_error():
    f = lambda x: np.abs(x) ** -0.5 * (x != 0)  # integrable singularity
    with pytest.raises(QuadratureError) as exc:
        adaptive_gk(f, [1e-13, 1.0], epsabs=1e-300, epsrel=1e-15, max_panels=8)
    assert exc.value.achieved > 0


def test_bad_edges_rejected():
    with pytest.raises(ValueError):
        adaptive_gk(lambda x: x, [1.0, 0.0])
