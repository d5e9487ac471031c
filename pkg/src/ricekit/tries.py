"""Average-case analysis of tries over memoryless sources.

A memoryless source emits symbols i.i.d. with rational probabilities
(p_1, ..., p_r).  Additive trie costs under a toll f (f(0) = f(1) = 0)
have mean r(n) = E[sum over prefixes w of f(N_w)], computed here by four
independent routes that must agree:

  * the self-consistent binomial-split recurrence (binary sources), in
    exact rationals or in floats with log-domain binomial weights,
  * the alternating binomial sum r(n) = sum_k (-1)^k C(n,k) L(k) p(k)
    with L the prefix Dirichlet series and p the binomial transform of
    the toll (exact rationals, conditioning-limited to n <= 40),
  * the prefix harmonic sum of Poisson transforms at a Poisson rate,
  * Monte-Carlo simulation by recursive multiset splitting.

The Dirichlet series of a memoryless source collapses to the closed
form L(s) = 1 / (1 - sum p_i^s) (geometric series over prefix depths),
meromorphic with a simple pole at s = 1 of residue 1/h, h the entropy.
The sorting-toll cost grows like n log^2 n / (2h); the fit helper
measures that constant from recurrence data.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .binomial import pi_transform, poisson_transform_eval
from .errors import (AlphabetError, DepthCapError, DomainError, PoleError,
                     RangeError)
from .sequences import Toll

__all__ = [
    "MemorylessSource", "Toll", "TrieStats", "RNG_ALGORITHM",
    "lambda_series", "entropy", "exact_mean_recurrence",
    "mean_via_rice_pair", "poisson_mean_harmonic", "simulate_trie",
    "asymptotic_constant_fit", "FitReport",
]

RNG_ALGORITHM = "philox4x64 keyed per (seed, trial)"

RICE_PAIR_FLOAT_CAP = 40


@dataclass(frozen=True)
class MemorylessSource:
    """Finite alphabet with exact rational symbol probabilities."""

    probs: tuple[Fraction, ...]

    def __init__(self, probs):
        probs = tuple(Fraction(p) for p in probs)
        if len(probs) < 2:
            raise DomainError("a source needs an alphabet of size >= 2")
        if any(p <= 0 for p in probs):
            raise DomainError("symbol probabilities must be positive")
        if sum(probs) != 1:
            raise DomainError("symbol probabilities must sum to 1 exactly")
        object.__setattr__(self, "probs", probs)

    @property
    def r(self) -> int:
        return len(self.probs)

    @property
    def float_probs(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs])

    def entropy(self) -> float:
        return -sum(float(p) * math.log(p) for p in self.probs)

    def power_sum(self, s):
        """sum_i p_i^s; exact Fraction for integer s."""
        if isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1):
            return sum(p ** int(s) for p in self.probs)
        s = complex(s)
        return sum(np.exp(s * math.log(p)) for p in self.probs)

    def lambda_series(self, s):
        return lambda_series(self, s)


def entropy(source: MemorylessSource) -> float:
    """h = -sum p_i log p_i (natural log)."""
    return source.entropy()


def lambda_series(source: MemorylessSource, s):
    """Prefix Dirichlet series L(s) = sum_w pi_w^s = 1/(1 - sum p_i^s).

    Exact Fraction at integer s >= 2; complex elsewhere via the closed
    form, which continues the series beyond its abscissa Re s = 1.
    Raises PoleError at s = 1 (and anywhere sum p_i^s hits 1).
    """
    exact = isinstance(s, int) or (isinstance(s, Fraction)
                                   and s.denominator == 1)
    if exact and int(s) == 1:
        raise PoleError("Dirichlet series has its pole at s = 1")
    ps = source.power_sum(int(s) if exact else s)
    if exact:
        if ps >= 1:
            raise DomainError(f"prefix series diverges at s = {int(s)}")
        return 1 / (1 - ps)
    if abs(1.0 - complex(ps)) < 1e-14:
        raise PoleError(f"Dirichlet series pole: sum p_i^s = 1 at s = {s}")
    return 1.0 / (1.0 - complex(ps))


def lambda_pole_residue(source: MemorylessSource, eps: float = 1e-7) -> float:
    """Numeric limit of (s-1) L(s) at the pole; equals 1/entropy."""
    s = 1.0 + eps
    vals = [(x - 1.0) * complex(lambda_series(source, x)).real
            for x in (s, 1.0 + eps / 2)]
    return 2 * vals[1] - vals[0]  # Richardson in eps


# --- exact mean routes -------------------------------------------------------

def exact_mean_recurrence(source: MemorylessSource, toll: Toll, N: int,
                          mode: str = "exact"):
    """Mean additive cost r(0..N) from the binomial-split recurrence

        r(n) = [f(n) + sum_{k=1}^{n-1} C(n,k) p^k q^{n-k} (r(k)+r(n-k))]
               / (1 - p^n - q^n)

    (the k in {0, n} terms moved to the left side).  Binary sources only.
    Exact mode runs in rationals (requires a rational toll); float mode
    uses log-domain binomial weights, stable since every term is >= 0.
    """
    if source.r != 2:
        raise AlphabetError("the split recurrence is implemented for "
                            "binary sources; use mean_via_rice_pair")
    if mode not in ("exact", "float"):
        raise DomainError(f"unknown mode {mode!r}")
    if mode == "exact":
        if not toll.is_rational:
            raise DomainError("exact mode needs a rational toll")
        return _recurrence_exact(source, toll, N)
    return _recurrence_float(source, toll, N)


def _recurrence_exact(source, toll, N):
    p, q = source.probs
    r = [Fraction(0), Fraction(0)]
    pk = [p ** k for k in range(N + 1)]
    qk = [q ** k for k in range(N + 1)]
    for n in range(2, N + 1):
        acc = Fraction(toll.value(n))
        row = 1
        for k in range(1, n):
            row = row * (n - k + 1) // k  # C(n, k)
            acc += row * pk[k] * qk[n - k] * (r[k] + r[n - k])
        r.append(acc / (1 - pk[n] - qk[n]))
    return r


def _recurrence_float(source, toll, N):
    p, q = float(source.probs[0]), float(source.probs[1])
    lp, lq = math.log(p), math.log(q)
    lgam = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, N + 2)))))
    r = np.zeros(N + 1)
    toll_vals = toll.float_array(np.arange(N + 1))
    ks_all = np.arange(1, N + 1)
    log_p_k = ks_all * lp
    log_q_k = ks_all * lq
    for n in range(2, N + 1):
        ks = ks_all[: n - 1]
        logw = (lgam[n] - lgam[1:n] - lgam[n - 1:: -1][: n - 1]
                + log_p_k[: n - 1] + log_q_k[n - 2:: -1][: n - 1])
        inner = float(np.dot(np.exp(logw), r[1:n] + r[n - 1: 0: -1]))
        denom = -math.expm1(n * lp) - math.exp(n * lq)
        r[n] = (toll_vals[n] + inner) / denom
    return list(r)


def mean_via_rice_pair(source: MemorylessSource, toll: Toll, n: int):
    """r(n) = sum_{k=2}^{n} (-1)^k C(n,k) L(k) p(k), p the binomial
    transform of the toll.

    Exact rationals when the toll is rational (any alphabet size);
    irrational tolls fall back to floats, capped at n = 40 where the
    alternating sum is still conditioned.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if toll.valuation < 2:
        raise DomainError("tolls must vanish at 0 and 1")
    if n < 2:
        return Fraction(0) if toll.is_rational else 0.0
    table = [toll.value(k) for k in range(n + 1)]
    if toll.is_rational:
        p = pi_transform([Fraction(v) for v in table])
        acc = Fraction(0)
        for k in range(2, n + 1):
            lam = lambda_series(source, k)
            acc += (-1) ** k * math.comb(n, k) * lam * p[k]
        return acc
    if n > RICE_PAIR_FLOAT_CAP:
        raise RangeError(
            f"float mode conditioned for n <= {RICE_PAIR_FLOAT_CAP}")
    p = _pi_transform_float(table)
    terms = []
    for k in range(2, n + 1):
        lam = float(lambda_series(source, k))
        terms.append((-1) ** k * math.comb(n, k) * lam * p[k])
    return math.fsum(terms)


def _pi_transform_float(values):
    out = []
    for n in range(len(values)):
        out.append(math.fsum((-1) ** k * math.comb(n, k) * values[k]
                             for k in range(n + 1)))
    return out


# --- Poisson-rate harmonic sum ----------------------------------------------

def poisson_mean_harmonic(source: MemorylessSource, toll: Toll, z: float,
                          depth_cap: int = 64, tol: float = 1e-9) -> float:
    """Poisson-model mean cost as the prefix harmonic sum

        P_r(z) = sum_w P_f(z pi_w)

    grouped by symbol counts (pi_w depends only on the multiset of
    symbols for memoryless sources).  The depth tail is certified with
    P_f(x) = O(x^2) as x -> 0 (tolls have valuation 2): the depth-D layer
    is below C z^2 (sum p_i^2)^D.
    """
    if z <= 0:
        raise DomainError("poisson_mean_harmonic needs z > 0")
    probs = source.float_probs
    lam2 = float(sum(p * p for p in probs))
    # quadratic envelope constant for P_f near 0, with safety margin
    xs = [1e-3, 1e-2, 0.1]
    c_env = 4.0 * max(abs(complex(poisson_transform_eval(toll, x, tol=1e-12)))
                      / x ** 2 for x in xs)
    p_max = float(probs.max())
    total = 0.0
    for depth in range(depth_cap + 1):
        layer = 0.0
        for combo in combinations_with_replacement(range(source.r), depth):
            counts = [0] * source.r
            for i in combo:
                counts[i] += 1
            mult = math.factorial(depth)
            for ci in counts:
                mult //= math.factorial(ci)
            pi_w = float(np.prod(probs ** counts))
            layer += mult * poisson_transform_eval(toll, z * pi_w,
                                                   tol=tol / 100).real
        total += layer
        tail = c_env * z * z * lam2 ** (depth + 1) / (1.0 - lam2)
        # the quadratic envelope only applies once the deeper prefix
        # rates sit inside the sampled near-zero window
        if z * p_max ** (depth + 1) <= 0.1 and tail < tol:
            return total
    raise DepthCapError(
        f"harmonic-sum tail above {tol:.2e} at depth cap {depth_cap}")


# --- simulation ---------------------------------------------------------------

@dataclass(frozen=True)
class TrieStats:
    n: int
    mean: float
    stderr: float
    trials: int
    seed: int


def _simulate_range(source, toll, n, seed, lo, hi):
    probs = source.float_probs
    binary = source.r == 2
    p0 = probs[0]
    costs = np.empty(hi - lo)
    for trial in range(lo, hi):
        rng = np.random.Generator(np.random.Philox(key=[seed, trial]))
        counts = np.array([n], dtype=np.int64)
        cost = 0.0
        while counts.size:
            counts = counts[counts >= 2]
            if not counts.size:
                break
            cost += float(toll.float_array(counts).sum())
            if binary:
                left = rng.binomial(counts, p0)
                counts = np.concatenate([left, counts - left])
            else:
                counts = rng.multinomial(counts, probs).reshape(-1)
        costs[trial - lo] = cost
    return costs


def simulate_trie(source: MemorylessSource, toll: Toll, n: int, trials: int,
                  seed: int = 0, threads: int = 1) -> TrieStats:
    """Monte-Carlo mean of the additive cost over random tries.

    Words are never materialised: a node holding m >= 2 words draws the
    split of m into the subtrees directly (binomial/multinomial), which
    is the lazy symbol-by-symbol process marginalised.  Each trial uses
    its own counter-based Philox stream keyed by (seed, trial), so the
    result is independent of trial order and of the thread count.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if n < 0:
        raise DomainError("n must be nonnegative")
    if threads > 1 and trials >= 2 * threads:
        bounds = np.linspace(0, trials, threads + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda i: _simulate_range(source, toll, n, seed,
                                          bounds[i], bounds[i + 1]),
                range(threads)))
        costs = np.concatenate(parts)
    else:
        costs = _simulate_range(source, toll, n, seed, 0, trials)
    mean = float(costs.mean())
    stderr = float(costs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return TrieStats(n=n, mean=mean, stderr=stderr, trials=trials, seed=seed)


# --- asymptotic-constant fit ---------------------------------------------------

@dataclass(frozen=True)
class FitReport:
    a: float
    b: float
    c_fit: float
    c_theory: float
    n_lo: int
    n_hi: int

    @property
    def rel_err(self) -> float:
        return abs(self.c_fit - self.c_theory) / abs(self.c_theory)


def asymptotic_constant_fit(source: MemorylessSource, toll: Toll,
                            n_grid: Sequence[int],
                            r_values: Sequence[float] | None = None
                            ) -> FitReport:
    """Least-squares fit r(n)/n = a + b log n + c log^2 n over the grid.

    For the sorting toll the theory constant is c = 1/(2h); other tolls
    run through the same fitter (pathlength should give c ~ 0).  r(n)
    comes from the float recurrence unless precomputed values are passed.
    """
    n_grid = sorted(int(n) for n in n_grid)
    if n_grid[0] < 2:
        raise DomainError("fit grid must start at n >= 2")
    if r_values is None:
        r_all = _recurrence_float(source, toll, n_grid[-1])
        r_values = [r_all[n] for n in n_grid]
    ns = np.array(n_grid, dtype=float)
    y = np.array([float(r) for r in r_values]) / ns
    logs = np.log(ns)
    design = np.column_stack([np.ones_like(logs), logs, logs ** 2])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return FitReport(a=float(coef[0]), b=float(coef[1]), c_fit=float(coef[2]),
                     c_theory=1.0 / (2.0 * source.entropy()),
                     n_lo=n_grid[0], n_hi=n_grid[-1])


def log_spaced_grid(lo: int, hi: int, count: int = 200) -> list[int]:
    """Distinct integers log-uniform in [lo, hi] (fit-window sampling)."""
    if lo < 2 or hi <= lo:
        raise DomainError("need 2 <= lo < hi")
    pts = np.unique(np.round(np.exp(
        np.linspace(math.log(lo), math.log(hi), count))).astype(int))
    return [int(p) for p in pts]
