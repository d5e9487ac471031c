"""Shared quadrature kernels: adaptive Gauss-Legendre panels on finite
intervals, chunk-doubling for infinite tails, and trapezoidal circle
sampling for Cauchy/Laurent coefficients.

Integrands are complex-valued functions of a real variable.  Panel
integrators prefer array-calling (one call per panel) and fall back to
scalar evaluation automatically.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import ConvergenceError, TailBoundError

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    rule = _GL_CACHE.get(order)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(order)
        rule = (x, w)
        _GL_CACHE[order] = rule
    return rule


def as_array_fn(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap f so it maps an ndarray of points to an ndarray of values."""

    def wrapped(xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs)
        try:
            out = np.asarray(f(xs))
            if out.shape == xs.shape:
                return out.astype(complex)
        except Exception:
            pass
        return np.array([complex(f(x)) for x in xs.ravel()]).reshape(xs.shape)

    return wrapped


def _panel(fvec, a: float, b: float, order: int) -> complex:
    x, w = _gl_rule(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = fvec(mid + half * x)
    return complex(half * np.sum(w * vals))


def integrate(f, a: float, b: float, tol: float, order: int = 16,
              max_depth: int = 50) -> complex:
    """Adaptive panel integral of f over [a, b], absolute tolerance tol.

    Each panel is accepted when the order-n estimate and the sum of its
    two half-panel estimates agree within the panel's tolerance share;
    panels split until then (depth capped).
    """
    fvec = as_array_fn(f)
    floor = 0.01 * float(tol)  # a panel this accurate never blocks globally
    total = 0j
    budget = 200_000
    stack = [(float(a), float(b), _panel(fvec, a, b, order), float(tol), 0)]
    while stack:
        budget -= 1
        if budget < 0:
            raise ConvergenceError(
                f"quadrature panel budget exhausted on [{a:g}, {b:g}]")
        lo, hi, whole, ptol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(fvec, lo, mid, order)
        right = _panel(fvec, mid, hi, order)
        err = abs(left + right - whole)
        if not math.isfinite(err):
            raise ConvergenceError(
                f"non-finite integrand values on [{lo:g}, {hi:g}]")
        if err <= max(ptol, floor) or depth >= max_depth:
            if depth >= max_depth and err > floor:
                raise ConvergenceError(
                    f"quadrature stalled on [{lo:g}, {hi:g}] "
                    f"(err {err:.2e} > tol {ptol:.2e})")
            total += left + right
        else:
            stack.append((lo, mid, left, 0.5 * ptol, depth + 1))
            stack.append((mid, hi, right, 0.5 * ptol, depth + 1))
    return total


def integrate_tail(f, start: float, tol: float, first_width: float = 1.0,
                   max_chunks: int = 80, quiet_chunks: int = 2,
                   order: int = 16) -> complex:
    """Integral of f over [start, +inf) by width-doubling chunks.

    Stops once `quiet_chunks` consecutive chunk contributions fall below
    tol; raises TailBoundError if the chunk cap is reached first.
    """
    fvec = as_array_fn(f)
    total = 0j
    lo = float(start)
    width = float(first_width)
    quiet = 0
    for _ in range(max_chunks):
        hi = lo + width
        chunk = integrate(fvec, lo, hi, tol, order=order)
        total += chunk
        quiet = quiet + 1 if abs(chunk) < tol else 0
        if quiet >= quiet_chunks:
            return total
        lo = hi
        width *= 2.0
    raise TailBoundError(
        f"tail of integral from {start:g} not below {tol:.2e} "
        f"after {max_chunks} chunks")


def circle_coefficients(f, center: complex, radius: float, orders,
                        rtol: float = 1e-10, start_points: int = 32,
                        max_points: int = 1 << 15) -> dict[int, complex]:
    """Coefficients a_k of f around `center`: a_k = coeff of (s-center)^k.

    Trapezoidal (FFT) circle sampling, spectrally accurate for f analytic
    on the circle; the point count doubles until all requested orders are
    stable to rtol (relative to their common scale).
    """
    orders = sorted(set(int(k) for k in orders))
    fvec = as_array_fn(f)
    m = max(start_points, 2 * (max(abs(k) for k in orders) + 1))
    prev: dict[int, complex] | None = None
    while m <= max_points:
        theta = 2.0 * np.pi * np.arange(m) / m
        pts = center + radius * np.exp(1j * theta)
        vals = fvec(pts)
        spectrum = np.fft.fft(vals) / m
        cur = {k: complex(spectrum[k % m] * radius ** (-k)) for k in orders}
        if prev is not None:
            scale = max(max(abs(v) for v in cur.values()), 1e-300)
            if all(abs(cur[k] - prev[k]) <= rtol * scale for k in orders):
                return cur
        prev = cur
        m *= 2
    raise ConvergenceError(
        f"circle coefficients did not stabilise with {max_points} points "
        f"(center {center}, radius {radius:g})")


def derivatives_via_circle(f, center: complex, j_max: int, radius: float,
                           rtol: float = 1e-10) -> list[complex]:
    """f^(j)(center) for j = 0..j_max via Cauchy's formula on a circle."""
    coeffs = circle_coefficients(f, center, radius, range(j_max + 1),
                                 rtol=rtol)
    out = []
    fact = 1.0
    for j in range(j_max + 1):
        if j:
            fact *= j
        out.append(coeffs[j] * fact)
    return out


def central_derivative(f, x0: float, order: int, h: float = 1e-2,
                       levels: int = 2) -> float | complex:
    """order-th derivative of f at x0 by central differences.

    Richardson-extrapolates `levels` times starting from step h; supports
    orders 1..3 (what the log-power-lifting differentiations need).
    """

    def diff(step: float):
        if order == 1:
            return (f(x0 + step) - f(x0 - step)) / (2.0 * step)
        if order == 2:
            return (f(x0 + step) - 2.0 * f(x0) + f(x0 - step)) / step ** 2
        if order == 3:
            return (f(x0 + 2 * step) - 2.0 * f(x0 + step)
                    + 2.0 * f(x0 - step) - f(x0 - 2 * step)) / (2.0 * step ** 3)
        raise ValueError("central_derivative supports orders 1..3")

    if order == 0:
        return f(x0)
    estimates = [diff(h / 2 ** i) for i in range(levels + 1)]
    # central differences have even error expansions: each level gains h^2
    factor = 4.0
    while len(estimates) > 1:
        estimates = [
            (factor * b - a) / (factor - 1.0)
            for a, b in zip(estimates, estimates[1:])
        ]
        factor *= 4.0
    return estimates[0]


def compensated_sum(values) -> complex:
    """Exactly-rounded sum of an iterable of complex values."""
    vals = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in vals),
                   math.fsum(v.imag for v in vals))
