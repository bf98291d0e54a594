import math

import pytest

from ewlsim.ewl import payoff_one_param, payoff_three_param_fn
from ewlsim.optimize import maximize_1d, maximize_3d

# analytic optimum of the n=3, lam=20 classical payoff: exit probability 4/19
THETA_STAR_N3 = 2.0 * math.acos(math.sqrt(4.0 / 19.0))
VALUE_N3 = 16875.0 / 6859.0


def test_1d_recovers_driver_optimum():
    res = maximize_1d(lambda t: payoff_one_param(1, 4.0, t), 0.0, math.pi, tol=1e-10)
    assert res.value == pytest.approx(4.0 / 3.0, abs=1e-6)
    p = math.cos(res.argmax[0] / 2.0) ** 2
    assert p == pytest.approx(1.0 / 3.0, abs=1e-6)


def test_1d_recovers_n3_optimum():
    res = maximize_1d(lambda t: payoff_one_param(3, 20.0, t), 0.0, math.pi, tol=1e-10)
    assert res.value == pytest.approx(VALUE_N3, abs=1e-6)
    assert res.argmax[0] == pytest.approx(THETA_STAR_N3, abs=1e-5)
    assert res.argmax[0] / math.pi == pytest.approx(0.696, abs=1e-3)


def test_1d_constant_function():
    res = maximize_1d(lambda t: 2.5, 0.0, 1.0)
    assert res.value == 2.5
    assert 0.0 <= res.argmax[0] <= 1.0


def test_1d_invalid_interval():
    with pytest.raises(ValueError):
        maximize_1d(lambda t: t, 1.0, 1.0)
    with pytest.raises(ValueError):
        maximize_1d(lambda t: t, 0.0, 1.0, tol=0.0)


def test_1d_value_never_below_grid_best():
    def jagged(t):
        return math.sin(37.0 * t) + 0.3 * math.cos(11.0 * t)

    res = maximize_1d(jagged, 0.0, math.pi)
    assert res.value >= res.grid_best


def test_3d_recovers_example_optimum():
    res = maximize_3d(payoff_three_param_fn(3, 20.0), grid_per_dim=17, starts=8, tol=1e-9)
    assert res.value == pytest.approx(5.0, abs=1e-6)


@pytest.mark.parametrize("lam", [4.0, 1.5])
def test_3d_recovers_driver_cap(lam):
    res = maximize_3d(payoff_three_param_fn(1, lam), grid_per_dim=17, starts=8, tol=1e-9)
    assert res.value == pytest.approx(max(1.0, lam / 2.0), abs=1e-6)


def test_3d_deterministic_bit_identical():
    f = payoff_three_param_fn(2, 7.0)
    r1 = maximize_3d(f, grid_per_dim=9, starts=4, tol=1e-8)
    r2 = maximize_3d(f, grid_per_dim=9, starts=4, tol=1e-8)
    assert r1 == r2


def test_3d_beats_its_own_coarse_grid():
    f = payoff_three_param_fn(2, 7.0)
    res = maximize_3d(f, grid_per_dim=9, starts=4, tol=1e-8)
    two_pi = 2.0 * math.pi
    exhaustive = max(
        f(i * math.pi / 8, j * two_pi / 9, k * two_pi / 9)
        for i in range(9) for j in range(9) for k in range(9))
    assert res.value >= res.grid_best == pytest.approx(exhaustive, abs=0)
    assert 0.0 <= res.argmax[0] <= math.pi
    assert 0.0 <= res.argmax[1] < two_pi
    assert 0.0 <= res.argmax[2] < two_pi


def test_3d_invalid_configuration():
    f = payoff_three_param_fn(1, 4.0)
    with pytest.raises(ValueError):
        maximize_3d(f, grid_per_dim=1)
    with pytest.raises(ValueError):
        maximize_3d(f, starts=0)
    with pytest.raises(ValueError):
        maximize_3d(f, tol=-1.0)
