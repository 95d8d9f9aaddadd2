"""Exact rational simplex."""

from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from secomni import InvalidArgumentError, simplex_max


def test_known_lp():
    # max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    value, x, y = simplex_max(
        [[1, 0], [0, 2], [3, 2]], [4, 12, 18], [3, 5]
    )
    assert value == 36
    assert x == [Fraction(2), Fraction(6)]
    # strong duality: b^T y equals the primal value
    assert sum(bi * yi for bi, yi in zip([4, 12, 18], y)) == 36


def test_fractional_answer_is_exact():
    value, x, _ = simplex_max([[2, 1], [1, 3]], [1, 1], [1, 1])
    assert value == Fraction(3, 5)
    assert x == [Fraction(2, 5), Fraction(1, 5)]


def test_matches_scipy_on_random_lps():
    rng = np.random.default_rng(11)
    for _ in range(40):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 5))
        a = rng.integers(-3, 6, size=(m, n))
        b = rng.integers(0, 8, size=m)
        c = rng.integers(-4, 5, size=n)
        try:
            value, x, y = simplex_max(a.tolist(), b.tolist(), c.tolist())
        except InvalidArgumentError:
            # unbounded; scipy must agree
            ref = linprog(-c, A_ub=a, b_ub=b, bounds=(0, None), method="highs")
            assert ref.status == 3
            continue
        ref = linprog(-c, A_ub=a, b_ub=b, bounds=(0, None), method="highs")
        assert ref.status == 0
        assert abs(float(value) + ref.fun) < 1e-9
        # returned point is feasible and attains the value
        xv = np.array([float(v) for v in x])
        assert np.all(a @ xv <= b + 1e-9)
        assert abs(float(sum(ci * xi for ci, xi in zip(c.tolist(), x))) - float(value)) < 1e-12
        # dual feasibility and strong duality, exactly
        yv = [Fraction(v) for v in y]
        assert all(v >= 0 for v in yv)
        for j in range(n):
            assert sum(a[i][j] * yv[i] for i in range(m)) >= c[j]
        assert sum(b[i] * yv[i] for i in range(m)) == value


def test_unbounded_raises():
    with pytest.raises(InvalidArgumentError):
        simplex_max([[-1]], [1], [1])


def test_validation():
    with pytest.raises(InvalidArgumentError):
        simplex_max([[1]], [-1], [1])
    with pytest.raises(InvalidArgumentError):
        simplex_max([[1, 2]], [1], [1])
