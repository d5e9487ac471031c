"""Depoissonization via the Poisson-Charlier expansion.

The expansion recovers a sequence from its Poisson transform P(z):

    f(n) = sum_{j >= 0} P^(j)(n) tau_j(n) / j! ,

where tau_j(n) = n! [z^n]((z - n)^j e^z) is an integer polynomial in n
of degree floor(j/2) (the j-th central moment structure of a Poisson(n)
variable).  Truncating at j < 2k yields the depoissonized estimate whose
error, for admissible transforms, drops by a factor ~n per extra k.
Derivatives of P are taken on Cauchy circles centred at n.

Admissibility is probed numerically: polynomial growth inside a cone
around the positive axis, |P(z) e^z| within e^{delta |z|}, delta < 1,
outside it.  The scan fits exponents by least squares; it is a
diagnostic, never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._quad import derivatives_via_circle
from .errors import DomainError
from .rice import AnalyticFunctionHandle

__all__ = [
    "charlier_tau", "charlier_polynomial", "CharlierTable",
    "poisson_derivatives", "charlier_truncated_estimate",
    "js_admissibility_scan", "JsReport",
]


def charlier_tau(j: int, n: int) -> int:
    """tau_j(n) = sum_l C(j,l) (-1)^(j-l) n^(j-l) n!/(n-l)!, exact."""
    if j < 0 or n < 0:
        raise DomainError("charlier_tau needs nonnegative integers")
    total = 0
    falling = 1  # n! / (n-l)!
    for ell in range(j + 1):
        if ell:
            if n - ell + 1 <= 0:
                break  # falling factorial hit zero: remaining terms vanish
            falling *= n - ell + 1
        total += math.comb(j, ell) * (-1) ** (j - ell) * n ** (j - ell) \
            * falling
    return total


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for k, bk in enumerate(b):
                out[i + k] += ai * bk
    return out


def charlier_polynomial(j: int) -> list[int]:
    """tau_j as integer coefficients in n (low order first).

    Degree floor(j/2) after the cancellations; tau_1 is identically 0.
    """
    total: list[int] = [0]
    for ell in range(j + 1):
        mono = [0] * (j - ell) + [1]          # n^(j-ell)
        falling = [1]
        for i in range(ell):                   # n (n-1) ... (n-ell+1)
            falling = _poly_mul(falling, [-i, 1])
        piece = _poly_mul(mono, falling)
        sign = math.comb(j, ell) * (-1) ** (j - ell)
        if len(piece) > len(total):
            total += [0] * (len(piece) - len(total))
        for i, c in enumerate(piece):
            total[i] += sign * c
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return total


@dataclass(frozen=True)
class CharlierTable:
    j: int
    coefficients: tuple[int, ...]

    @classmethod
    def build(cls, j: int) -> "CharlierTable":
        return cls(j=j, coefficients=tuple(charlier_polynomial(j)))

    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, n: int) -> int:
        return sum(c * n ** i for i, c in enumerate(self.coefficients))


def poisson_derivatives(P, n: int, j_max: int,
                        radius: float | None = None,
                        rtol: float = 1e-12) -> list[complex]:
    """P^(j)(n) for j = 0..j_max by the Cauchy formula on a circle at n.

    Default radius sqrt(n) capped at n/2 (large enough to see curvature,
    small enough to stay conditioned); the trapezoid point count doubles
    until the derivative set stabilises.
    """
    if n < 1:
        raise DomainError("poisson_derivatives needs n >= 1")
    if radius is None:
        radius = min(math.sqrt(n), n / 2.0)
    if not (0.0 < radius <= n / 2.0):
        raise DomainError("radius must lie in (0, n/2]")
    fn = P.fn if isinstance(P, AnalyticFunctionHandle) else P
    return derivatives_via_circle(fn, complex(n), j_max, radius, rtol=rtol)


def charlier_truncated_estimate(P, n: int, k: int,
                                radius: float | None = None) -> float:
    """sum_{0 <= j < 2k} P^(j)(n) tau_j(n) / j!  (the order-k estimate)."""
    if k < 1:
        raise DomainError("truncation order k must be >= 1")
    derivs = poisson_derivatives(P, n, 2 * k - 1, radius=radius)
    total = 0j
    fact = 1.0
    for j in range(2 * k):
        if j:
            fact *= j
        tau = charlier_tau(j, n)
        if tau:
            total += derivs[j] * (tau / fact)
    return total.real


@dataclass(frozen=True)
class JsRadiusRow:
    radius: float
    inside_max: float
    outside_log_max: float  # max over angles of log |P(z) e^z|


@dataclass(frozen=True)
class JsReport:
    theta: float
    alpha: float
    beta: float
    delta: float
    rows: tuple[JsRadiusRow, ...]

    @property
    def delta_flagged(self) -> bool:
        return self.delta >= 1.0


def js_admissibility_scan(P, theta: float, radii: Sequence[float],
                          n_angles: int = 96,
                          log_abs_pez=None) -> JsReport:
    """Fit admissibility exponents of an entire transform.

    Inside the cone |arg z| <= theta: max |P| fitted as r^alpha log^beta r.
    Outside the cone the quantity |P(z) e^z| overflows doubles long before
    interesting radii, so the scan works with its logarithm (supply
    log_abs_pez(z) = log |P(z) e^z| for transforms that cannot be
    composed naively) and fits it as delta * r; delta >= 1 is flagged.
    Purely diagnostic least-squares fits.
    """
    if not (0.0 < theta < math.pi / 2):
        raise DomainError("theta must lie in (0, pi/2)")
    fn = P.fn if isinstance(P, AnalyticFunctionHandle) else P
    if log_abs_pez is None:
        def log_abs_pez(z):
            return math.log(max(abs(complex(fn(z))), 1e-300)) + z.real
    radii = sorted(float(r) for r in radii)
    if len(radii) < 3:
        raise DomainError("need at least 3 radii to fit exponents")
    phis_in = np.linspace(-theta, theta, n_angles)
    phis_out = np.linspace(theta * 1.0001, math.pi, n_angles)
    rows = []
    for r in radii:
        inside = max(abs(complex(fn(z))) for z in r * np.exp(1j * phis_in))
        out_log = max(log_abs_pez(complex(r * np.exp(1j * phi)))
                      for phi in phis_out)
        rows.append(JsRadiusRow(r, inside, out_log))
    rs = np.array([row.radius for row in rows])
    ins = np.maximum([row.inside_max for row in rows], 1e-300)
    outs = np.array([row.outside_log_max for row in rows])
    design_in = np.column_stack(
        [np.ones_like(rs), np.log(rs), np.log(np.log(1.0 + rs))])
    coef_in, *_ = np.linalg.lstsq(design_in, np.log(ins), rcond=None)
    design_out = np.column_stack([np.ones_like(rs), rs])
    half = len(rows) // 2
    coef_out, *_ = np.linalg.lstsq(design_out[half:], outs[half:],
                                   rcond=None)
    return JsReport(theta=theta, alpha=float(coef_in[1]),
                    beta=float(coef_in[2]), delta=float(coef_out[1]),
                    rows=tuple(rows))
