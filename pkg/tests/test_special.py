import cmath
import math

import mpmath
import pytest

from ricekit.errors import PoleError
from ricekit.special import (EULER_GAMMA, digamma, gamma, gamma_deriv,
                             log_beta, log_gamma, trigamma)

mpmath.mp.dps = 30

GRID = [
    1.0, 0.5, 2.0, 3.5, 10.0, 0.1,
    3 + 4j, -0.5 + 2j, -2.5 + 0.5j, 1 - 7j, 0.5 - 0.5j, 12 + 30j,
    -5.2 + 1e-3j, 8 - 0.25j,
]


def test_log_gamma_trivial_points():
    assert abs(log_gamma(1.0)) < 1e-14
    assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14


@pytest.mark.parametrize("s", GRID)
def test_log_gamma_against_mpmath(s):
    want = complex(mpmath.loggamma(s))
    got = log_gamma(s)
    assert abs(got - want) <= 1e-13 * max(1.0, abs(want))


def test_log_gamma_pole_errors():
    for s in (0.0, -1.0, -7.0):
        with pytest.raises(PoleError):
            log_gamma(s)


def test_gamma_and_beta():
    assert abs(gamma(5.0) - 24.0) < 1e-12
    # B(6, 1) = 1/6
    assert abs(cmath.exp(log_beta(6.0, 1.0)) - 1.0 / 6.0) < 1e-14


@pytest.mark.parametrize("s", [0.3, 1.0, 2.5, 4 + 3j, -1.5 + 2j, 0.5 - 5j])
def test_polygammas_against_mpmath(s):
    assert abs(digamma(s) - complex(mpmath.digamma(s))) < 1e-12 * max(
        1.0, abs(complex(mpmath.digamma(s))))
    want = complex(mpmath.polygamma(1, mpmath.mpc(s)))
    assert abs(trigamma(s) - want) < 1e-12 * max(1.0, abs(want))


def test_gamma_derivative_constants():
    # classical values at 1: Gamma'(1) = -euler, Gamma''(1) = zeta(2)+euler^2
    assert abs(gamma_deriv(1, 1.0) + EULER_GAMMA) < 1e-12
    assert abs(gamma_deriv(2, 1.0)
               - (math.pi ** 2 / 6 + EULER_GAMMA ** 2)) < 1e-12


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("s", [0.7, 2.0, 3.5 + 1j])
def test_gamma_derivs_against_mpmath(order, s):
    want = complex(mpmath.diff(mpmath.gamma, s, order))
    got = gamma_deriv(order, s)
    assert abs(got - want) <= 1e-10 * max(1.0, abs(want))
