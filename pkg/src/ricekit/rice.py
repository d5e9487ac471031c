"""Newton-series lifting of the binomial transform, the Rice kernel and
vertical-line Rice integral, and residue-based asymptotic extraction.

For a reduced sequence f (valuation 0, degree c < -1) the series

    psi(s) = sum_k (-1)^k f(k)/k! s(s-1)...(s-k+1)
           = sum_k f(k) Gamma(k-s) / (Gamma(-s) Gamma(k+1))

converges on Re s > c and interpolates the binomial transform at the
nonnegative integers.  Convergence is only algebraic (terms decay like
k^(c - Re s - 1)), far too slow near Re s = c for direct summation, so
when f carries an analytic lifting phi the tail from index K on is
evaluated with the Euler-Maclaurin formula applied to the smooth term
function t(x) = phi(x) exp(lgG(x-s) - lgG(x+1)) / Gamma(-s).

The Rice kernel L_n(s) = Gamma(n+1) Gamma(-s) / Gamma(n+1-s) = B(n+1,-s)
turns the binomial reconstruction into the line integral

    f(n) = (1/2 pi i) int_{Re s = a} L_n(s) psi(s) ds,   a in (c, 0),

(sign fixed by the n = 0 case: closing to the right around the kernel
poles 0..n gives back the alternating binomial sum).  Shifting the line
left across poles of psi converts each into residue terms that scale
like n^Re(pole) log^q n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import special
from ._quad import (as_array_fn, circle_coefficients, compensated_sum,
                    derivatives_via_circle, integrate, integrate_tail)
from .binomial import pi_transform
from .errors import (ConvergenceError, DomainError, PoleError,
                     PoleOverlapError)
from .sequences import SequenceSpec, TabulatedSeq
from .special import log_gamma  # re-exported: part of this module's surface

__all__ = [
    "AnalyticFunctionHandle", "PoleSpec", "AsymptoticTerm", "log_gamma",
    "newton_psi", "newton_psi_handle", "rice_kernel", "rice_recover_f",
    "laurent_coefficients", "shift_left_asymptotics",
]


@dataclass(frozen=True)
class AnalyticFunctionHandle:
    """A complex->complex evaluator with its declared half-plane and
    polynomial-growth exponent on vertical lines."""

    fn: Callable
    domain_re_min: float = -math.inf
    growth: float = 0.0
    label: str = ""

    def __call__(self, s):
        return self.fn(s)


@dataclass(frozen=True)
class PoleSpec:
    location: complex
    order: int
    shape: str = "S"  # S(trip) / H(yperbolic) / P(eriodic)

    def __post_init__(self):
        if self.order < 1:
            raise DomainError("pole order must be >= 1")
        if self.shape not in ("S", "H", "P"):
            raise DomainError("pole shape must be one of S, H, P")


@dataclass(frozen=True)
class AsymptoticTerm:
    """One contribution coefficient * n^exponent * log^log_power n."""

    exponent: float
    log_power: int
    coefficient: complex

    def evaluate(self, n) -> complex:
        return (self.coefficient * float(n) ** self.exponent
                * math.log(n) ** self.log_power)

    def __str__(self):
        c = self.coefficient
        coef = f"{c.real:.6g}" if abs(c.imag) < 1e-12 * max(1, abs(c.real)) \
            else f"({c.real:.6g}{c.imag:+.6g}i)"
        return f"{coef} * n^{self.exponent:g} * log^{self.log_power} n"


# --- Newton interpolation series ------------------------------------------

_EM_SWITCH = 800          # exact terms before the Euler-Maclaurin tail
_PLAIN_QUIET_TERMS = 20   # spec'd empirical rule for table-only inputs
_PLAIN_TERM_CAP = 2_000_000


def _newton_partial_sum(values: Sequence[complex], s: complex) -> complex:
    """sum_k values[k] * (-1)^k binom(s, k), coefficients by recurrence."""
    terms = []
    c = 1.0 + 0j
    for k, fk in enumerate(values):
        if k:
            c *= (k - 1 - s) / k
        if fk:
            terms.append(fk * c)
    return compensated_sum(terms)


def _log1p_c(w: complex) -> complex:
    """log(1 + w), accurate for small complex w."""
    if abs(w) < 1e-4:
        return w * (1 + w * (-1 / 2 + w * (1 / 3 + w * (-1 / 4 + w / 5))))
    return cmath.log(1.0 + w)


def _lgamma_ratio(x: float, s: complex) -> complex:
    """lgG(x - s) - lgG(x + 1) for real x > 0, stable for huge x.

    Past 1e6 the two log-Gammas are so large that their float difference
    loses everything, so the Stirling difference is assembled from O(1)
    pieces: -(s+1) log x + (x-s-1/2) log1p(-s/x) - (x+1/2) log1p(1/x)
    + (s+1) + Bernoulli corrections.
    """
    if x < 1e6:
        return special.log_gamma(x - s) - special.log_gamma(x + 1.0)
    lx = math.log(x)
    out = -(s + 1.0) * lx + (s + 1.0)
    out += (x - s - 0.5) * _log1p_c(-s / x)
    out -= (x + 0.5) * math.log1p(1.0 / x)
    out += 1.0 / (12.0 * (x - s)) - 1.0 / (12.0 * (x + 1.0))
    return out


def _em_tail(phi, s: complex, start: int, tol: float) -> complex:
    """Euler-Maclaurin estimate of sum_{k >= start} t(k) for the smooth
    continuation t(x) = phi(x) exp(lgG(x-s) - lgG(x+1)) / Gamma(-s).

    The integral part substitutes x = start * e^w, which decays like
    exp(-(Re s - c) w): smooth for every s right of the degree c.
    """
    lg_minus_s = special.log_gamma(-s)

    def t(x: float) -> complex:
        if x > 1e300:
            return 0j
        return complex(phi(x)) * cmath.exp(_lgamma_ratio(x, s) - lg_minus_s)

    k0 = float(start)

    def integrand(ws: np.ndarray) -> np.ndarray:
        # clamp the substitution: beyond x ~ 1e300 the terms are dead zero
        xs = k0 * np.exp(np.minimum(np.asarray(ws, dtype=float), 690.0))
        return np.array([t(x) for x in xs]) * xs

    integral = integrate_tail(integrand, 0.0, tol / 8.0, first_width=8.0)
    t0 = t(k0)
    tprime = (t(k0 + 1.0) - t(k0 - 1.0)) / 2.0
    return integral + 0.5 * t0 - tprime / 12.0


def newton_psi(f, s, tol: float = 1e-10) -> complex:
    """Evaluate the Newton-series lifting of the binomial transform of f.

    f is a reduced SequenceSpec (valuation 0, degree < -1) or a plain
    table of values.  At a nonnegative integer s the series terminates
    and the exact truncated sum (= the binomial transform there) comes
    back.  Elsewhere: specs with an analytic lifting get the accelerated
    Euler-Maclaurin tail; bare tables fall back to the empirical rule of
    stopping after 20 consecutive terms below tol * |partial sum|, which
    cannot certify tight tolerances near Re s = degree.
    """
    s = complex(s)
    if isinstance(f, SequenceSpec):
        c_deg = f.degree
        if s.real <= c_deg:
            raise DomainError(
                f"Newton series needs Re s > degree ({c_deg:g})")
        has_lift = f.has_lifting
        if has_lift:
            value = lambda k: complex(f.lifting(float(k)))
        elif isinstance(f, TabulatedSeq):
            size = len(f)
            value = lambda k: float(f.value(k)) if k < size else 0.0
        else:
            value = lambda k: float(f.value(k))
    else:
        table = [float(v) for v in f]
        has_lift = False
        value = lambda k: table[k] if k < len(table) else 0.0

    if s.imag == 0.0 and s.real >= 0 and s.real == int(s.real):
        count = int(s.real) + 1
        return _newton_partial_sum([value(k) for k in range(count)], s)

    if has_lift:
        head = _newton_partial_sum([value(k) for k in range(_EM_SWITCH)], s)
        return head + _em_tail(f.lifting, s, _EM_SWITCH, tol)

    # plain truncation with the empirical quiet-terms rule
    terms = []
    c = 1.0 + 0j
    quiet = 0
    total = 0j
    for k in range(_PLAIN_TERM_CAP):
        if k:
            c *= (k - 1 - s) / k
        tk = value(k) * c
        terms.append(tk)
        total += tk
        if abs(tk) < tol * max(abs(total), 1.0):
            quiet += 1
            if quiet >= _PLAIN_QUIET_TERMS:
                return compensated_sum(terms)
        else:
            quiet = 0
    raise ConvergenceError(
        f"Newton series did not satisfy the tail rule within "
        f"{_PLAIN_TERM_CAP} terms at s = {s:g}")


def newton_psi_handle(f, tol: float = 1e-10,
                      growth: float = 0.0) -> AnalyticFunctionHandle:
    """Wrap newton_psi(f, .) as a handle on Re s > degree(f)."""
    deg = f.degree if isinstance(f, SequenceSpec) else -math.inf
    return AnalyticFunctionHandle(
        fn=lambda s: newton_psi(f, s, tol=tol),
        domain_re_min=deg, growth=growth,
        label="newton-psi")


# --- Rice kernel and vertical-line recovery --------------------------------

def rice_kernel(n: int, s) -> complex:
    """L_n(s) = Gamma(n+1) Gamma(-s) / Gamma(n+1-s), log-domain.

    Defined off the integers 0..n (the kernel's simple poles).  At other
    integers both Gamma factors degenerate jointly, so the equivalent
    product form (-1)^(n+1) n! / (s(s-1)...(s-n)) takes over there.
    """
    s = complex(s)
    if s.imag == 0.0 and abs(s.real - round(s.real)) < 1e-12:
        k = round(s.real)
        if 0 <= k <= n:
            raise PoleError(f"Rice kernel pole at s = {k}")
        log_mag = math.lgamma(n + 1)
        sign = (-1) ** (n + 1)
        for j in range(n + 1):
            log_mag -= math.log(abs(k - j))
            if k - j < 0:
                sign = -sign
        return complex(sign * math.exp(log_mag))
    return cmath.exp(math.lgamma(n + 1) + special.log_gamma(-s)
                     - special.log_gamma(n + 1 - s))


def _line_integral(fn, abscissa: float, tol: float, first_width: float,
                   max_chunks: int = 64, t_cap: float = math.inf) -> complex:
    """(1/2 pi) int_-inf^inf fn(abscissa + i t) dt by width-doubling
    symmetric chunks.

    Stops after two consecutive quiet chunks, or at t_cap when the caller
    certifies the tail analytically (a finite cap also protects against
    evaluator noise far up the line, where truncated Newton series turn
    into pure cancellation error).
    """
    fvec = as_array_fn(lambda t: fn(abscissa + 1j * t))
    width = first_width
    total = integrate(fvec, -width, width, tol)
    lo, hi = -width, width
    quiet = 0
    for _ in range(max_chunks):
        if hi >= t_cap:
            return total / (2.0 * math.pi)
        step = min(width, t_cap - hi)
        chunk = (integrate(fvec, hi, hi + step, tol / 4.0)
                 + integrate(fvec, lo - step, lo, tol / 4.0))
        total += chunk
        lo, hi = lo - step, hi + step
        width *= 2.0
        quiet = quiet + 1 if abs(chunk) < tol / 2.0 else 0
        if quiet >= 2:
            return total / (2.0 * math.pi)
    raise ConvergenceError(
        f"line integral on Re s = {abscissa:g} still moving after "
        f"{max_chunks} chunk doublings")


def _kernel_tail_cap(n: int, a: float, growth: float, tol: float,
                     psi_scale: float) -> float:
    """Height T beyond which the kernel bound certifies the Rice tail:

        int_T^inf n! t^(a-n-1) C (1+t)^r dt < 2 pi tol

    using |L_n(a+it)| ~ n! |t|^(-(n+1)+a) for |t| >~ n.  Needs r < n + a.
    """
    decay = n - a - growth
    if decay <= 0.5:
        raise ConvergenceError(
            f"kernel decay n - a - growth = {decay:g} too weak for a "
            "certified truncation (raise n or lower the growth bound)")
    log_t = (math.lgamma(n + 1) + math.log(max(psi_scale, 1e-6))
             + math.log(32.0) - math.log(2.0 * math.pi * tol * decay)) / decay
    return max(4.0 * (n + 2), math.exp(min(log_t, 60.0)))


def rice_recover_f(psi, n: int, a: float, tol: float = 1e-9) -> float:
    """Recover f(n) from the lifting of its binomial transform:

        f(n) = (1/2 pi i) int_{Re s = a} L_n(s) psi(s) ds .

    a must lie in (degree, 0).  The truncation grows until two
    consecutive width-doubled chunks contribute below tolerance (the
    kernel decays like |t|^(a - n - 1) n! on the line, so this always
    terminates for n above the handle's growth exponent).
    """
    growth = 0.0
    if isinstance(psi, AnalyticFunctionHandle):
        c_min = psi.domain_re_min
        growth = psi.growth
        if not (c_min < a < 0.0):
            raise DomainError(
                f"abscissa {a:g} outside ({c_min:g}, 0)")
    if n < 0:
        raise DomainError("n must be a nonnegative integer")
    fn = psi.fn if isinstance(psi, AnalyticFunctionHandle) else psi

    def integrand(s: complex) -> complex:
        return rice_kernel(n, s) * complex(fn(s))

    # growth-normalised scale from a near-axis sample: far samples may
    # already sit in the evaluator's cancellation-noise zone
    psi_scale = 4.0 * abs(complex(fn(complex(a, 1.0)))) * 2.0 ** (-growth)
    t_cap = _kernel_tail_cap(n, a, growth, tol, psi_scale)
    value = _line_integral(integrand, a, tol,
                           first_width=float(max(16, 2 * n)), t_cap=t_cap)
    return value.real


def laurent_coefficients(g, center, max_order: int, radius: float,
                         rtol: float = 1e-10) -> list[complex]:
    """[a_-max_order, ..., a_0] of the Laurent expansion of g at center.

    Trapezoidal circle sampling with point doubling until stable; g must
    be analytic on the circle |s - center| = radius.
    """
    fn = g.fn if isinstance(g, AnalyticFunctionHandle) else g
    coeffs = circle_coefficients(fn, complex(center), radius,
                                 range(-max_order, 1), rtol=rtol)
    return [coeffs[k] for k in range(-max_order, 1)]


def _is_kernel_pole(location: complex, n: int) -> bool:
    return (abs(location.imag) < 1e-12
            and abs(location.real - round(location.real)) < 1e-12
            and 0 <= round(location.real) <= n)


def shift_left_asymptotics(psi, poles: Sequence[PoleSpec], n: int,
                           left_abscissa: float, tol: float = 1e-9,
                           radius: float = 0.25):
    """Shift the Rice line left across the listed poles of psi.

    Returns (terms, remainder) with

        f(n) = sum(term.evaluate(n) for term in terms) + remainder ,

    where the terms decompose the exact residues of L_n(s) psi(s): the
    residue at pole p splits over the Laurent orders of
    h(s) = Gamma(-s) psi(s) against the Taylor expansion of the entire
    factor Gamma(n+1)/Gamma(n+1-s), whose q-th coefficient behaves like
    n^p log^q n / q! -- so each piece is reported as an asymptotic term
    whose value at this n is exact.  The remainder is the line integral
    (1/2 pi i) int_{Re s = left_abscissa} L_n psi ds.

    If the kernel itself is singular at a listed pole (an integer in
    0..n) the extra Laurent order is handled automatically.
    """
    if n < 2:
        raise DomainError("asymptotic extraction needs n >= 2 (log n > 0)")
    fn = psi.fn if isinstance(psi, AnalyticFunctionHandle) else psi
    poles = list(poles)
    r = radius
    while r > 1e-3:
        ok = all(abs(p.location - q.location) >= 2.0 * r
                 for i, p in enumerate(poles) for q in poles[i + 1:])
        ok = ok and all(p.location.real - r > left_abscissa for p in poles)
        if ok:
            break
        r *= 0.5
    else:
        raise PoleOverlapError(
            "poles closer than twice the smallest usable contour radius")

    lgn1 = math.lgamma(n + 1)

    def h(s):
        s_arr = np.asarray(s, dtype=complex)
        g = np.array([cmath.exp(special.log_gamma(-z)) for z in s_arr.ravel()])
        vals = as_array_fn(fn)(s_arr)
        out = vals * g.reshape(s_arr.shape)
        return out

    def ratio_factor(s):
        s_arr = np.asarray(s, dtype=complex)
        out = np.array([cmath.exp(lgn1 - special.log_gamma(n + 1 - z))
                        for z in s_arr.ravel()])
        return out.reshape(s_arr.shape)

    log_n = math.log(n)
    terms: list[AsymptoticTerm] = []
    for p in poles:
        depth = p.order + (1 if _is_kernel_pole(p.location, n) else 0)
        h_coeffs = circle_coefficients(h, p.location, r,
                                       range(-depth, 0), rtol=tol / 10)
        taylor = derivatives_via_circle(ratio_factor, p.location,
                                        depth - 1, r, rtol=tol / 10)
        fact = 1.0
        for q in range(depth):
            if q:
                fact *= q
            piece = h_coeffs[-1 - q] * taylor[q] / fact
            if abs(piece) < tol * 1e-3:
                continue
            scale = float(n) ** p.location.real * log_n ** q
            terms.append(AsymptoticTerm(
                exponent=p.location.real, log_power=q,
                coefficient=piece / scale))

    def integrand(s: complex) -> complex:
        return rice_kernel(n, s) * complex(fn(s))

    growth = psi.growth if isinstance(psi, AnalyticFunctionHandle) else 0.0
    psi_scale = 4.0 * abs(complex(fn(complex(left_abscissa, 1.0)))) \
        * 2.0 ** (-growth)
    t_cap = _kernel_tail_cap(n, left_abscissa, growth, tol, psi_scale)
    remainder = _line_integral(integrand, left_abscissa, tol,
                               first_width=float(max(16, 2 * n)),
                               t_cap=t_cap).real
    terms.sort(key=lambda t: (-t.exponent, -t.log_power))
    return terms, remainder


def binomial_reconstruction(table: Sequence) -> list:
    """Exact f(n) = sum (-1)^k C(n,k) p(k): the oracle the Rice integral
    must reproduce (the transform is an involution)."""
    return pi_transform(table)
