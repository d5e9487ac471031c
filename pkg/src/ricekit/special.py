"""Double-precision complex special functions for the contour machinery.

``log_gamma`` is the principal branch of log Gamma.  It uses the Lanczos
approximation (g = 7, 9 coefficients) after shifting the argument into
Re s >= 0.5 through the recurrence

    log Gamma(s) = log Gamma(s + 1) - Log s ,

which preserves the principal branch everywhere off the cut (-inf, 0]
(on the cut the limit from above is returned).  The polygamma functions
follow the classical Bernoulli asymptotic series after an upward
recurrence shift; they back the closed forms for Gamma derivatives that
the twisted-Gamma module cross-validates against quadrature.
"""

from __future__ import annotations

import cmath
import math

from .errors import PoleError

EULER_GAMMA = 0.5772156649015328606065121

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _is_nonpositive_integer(s: complex) -> bool:
    return s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real)


def log_gamma(s) -> complex:
    """Principal-branch log Gamma(s); raises PoleError at 0, -1, -2, ..."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"log_gamma pole at s = {s.real:g}")
    shift = 0j
    w = s
    while w.real < 0.5:
        shift += cmath.log(w)
        w += 1.0
    acc = complex(_LANCZOS[0])
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (w - 1.0 + k)
    t = w + (_LANCZOS_G - 0.5)
    value = _HALF_LOG_TWO_PI + (w - 0.5) * cmath.log(t) - t + cmath.log(acc)
    return value - shift


def gamma(s) -> complex:
    return cmath.exp(log_gamma(s))


def log_beta(a, b) -> complex:
    """log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a + b)."""
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def reciprocal_gamma(s) -> complex:
    """1 / Gamma(s), entire: returns 0.0 at nonpositive integers."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        return 0j
    return cmath.exp(-log_gamma(s))


# Bernoulli numbers B_2 .. B_14 driving the asymptotic polygamma series.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)

_PSI_SHIFT = 12.0


def digamma(s) -> complex:
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"digamma pole at s = {s.real:g}")
    acc = 0j
    w = s
    while w.real < _PSI_SHIFT:
        acc -= 1.0 / w
        w += 1.0
    inv2 = 1.0 / (w * w)
    tail = 0j
    power = inv2
    for n, b2n in enumerate(_BERNOULLI, start=1):
        tail += b2n / (2 * n) * power
        power *= inv2
    return acc + cmath.log(w) - 0.5 / w - tail


def trigamma(s) -> complex:
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"trigamma pole at s = {s.real:g}")
    acc = 0j
    w = s
    while w.real < _PSI_SHIFT:
        acc += 1.0 / (w * w)
        w += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    tail = 0j
    power = inv * inv2
    for b2n in _BERNOULLI:
        tail += b2n * power
        power *= inv2
    return acc + inv + 0.5 * inv2 + tail


def tetragamma(s) -> complex:
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"tetragamma pole at s = {s.real:g}")
    acc = 0j
    w = s
    while w.real < _PSI_SHIFT:
        acc -= 2.0 / (w * w * w)
        w += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    tail = 0j
    power = inv2 * inv2
    for n, b2n in enumerate(_BERNOULLI, start=1):
        tail += (2 * n + 1) * b2n * power
        power *= inv2
    return acc - inv2 - inv * inv2 - tail


def gamma_deriv(order: int, s) -> complex:
    """Gamma^(order)(s) for order in {0, 1, 2, 3}.

    Assembled from polygamma values: G' = G p0, G'' = G (p0^2 + p1),
    G''' = G (p0^3 + 3 p0 p1 + p2).
    """
    if order not in (0, 1, 2, 3):
        raise ValueError("gamma_deriv supports orders 0..3")
    g = gamma(s)
    if order == 0:
        return g
    p0 = digamma(s)
    if order == 1:
        return g * p0
    p1 = trigamma(s)
    if order == 2:
        return g * (p0 * p0 + p1)
    p2 = tetragamma(s)
    return g * (p0 * p0 * p0 + 3.0 * p0 * p1 + p2)
