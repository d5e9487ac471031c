"""Sequence specifications and their growth bookkeeping.

A sequence of polynomial growth carries a degree d (growth exponent) and
a valuation (first nonzero index).  The valuation-degree condition
val > deg + 1 is what the contour machinery downstream needs; it is
forced by zero-padding the first sigma(d) entries (``plus_modify``) and
the padded sequence is then reduced to valuation 0 by the factorial
shift T (``canonicalize``):

    T[f](n) = f(n+1) / (n+1),     T^m[f](n) = f(n+m) / ((n+1)...(n+m)).

Canonical rewrites of power-log sequences k^d log^b k admit the closed
analytic continuation on Re s > -1

    phi(s) = (s+l)^(d-l) log^b(s+l) U(1/(s+l)),
    U(u)   = prod_{j=1}^{l-1} (1 - j u)^(-1)        (empty product for l=1),

with l = sigma(d).  Tabulated evaluation keeps the padding sentinel
value 1 at index sigma(d) and is authoritative for exact arithmetic;
phi is authoritative for analytic work (the two differ at the sentinel
index only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DomainError

Rational = Union[Fraction, int]


@dataclass(frozen=True)
class GrowthProfile:
    degree: float
    valuation: int

    @property
    def vd_satisfied(self) -> bool:
        return self.valuation > self.degree + 1


def sigma(d: float) -> int:
    """Padding length sigma(d): 2 + floor(d) for d >= 0, else 1.

    The d < 0 branch is pinned by the requirement sigma(d) > d + 1.
    """
    if not math.isfinite(d):
        raise DomainError("sigma needs a finite degree")
    if d >= 0:
        return 2 + math.floor(d)
    return 1


class SequenceSpec:
    """Base class: immutable value-level description of a sequence."""

    def value(self, n: int):
        raise NotImplementedError

    @property
    def degree(self) -> float:
        raise NotImplementedError

    @property
    def valuation(self) -> int:
        raise NotImplementedError

    def growth_profile(self) -> GrowthProfile:
        return GrowthProfile(self.degree, self.valuation)

    def values(self, count: int) -> list:
        return [self.value(n) for n in range(count)]

    def float_values(self, count: int) -> np.ndarray:
        return np.array([float(self.value(n)) for n in range(count)])

    @property
    def has_lifting(self) -> bool:
        return False

    def lifting(self, s):
        raise DomainError(f"{type(self).__name__} has no analytic lifting")

    def poly_bound_exponent(self) -> float:
        """Exponent D with |f(k)| <= M k^D for k >= 2 (M moderate)."""
        return max(self.degree, 0.0)


@dataclass(frozen=True)
class BasicSeq(SequenceSpec):
    """k^d log^b k for k >= 2, zero at k in {0, 1} (natural log)."""

    d: float
    b: int = 0

    def __post_init__(self):
        if self.b < 0 or self.b != int(self.b):
            raise DomainError("log power b must be a nonnegative integer")

    def value(self, n: int):
        if n < 2:
            return Fraction(0) if self._exact else 0.0
        if self._exact:
            return Fraction(n) ** int(self.d)
        return float(n) ** self.d * math.log(n) ** self.b

    @property
    def _exact(self) -> bool:
        return self.b == 0 and float(self.d) == int(self.d)

    @property
    def degree(self) -> float:
        return float(self.d)

    @property
    def valuation(self) -> int:
        return 2

    def poly_bound_exponent(self) -> float:
        # log^b k <= k^b for k >= 2
        return max(float(self.d), 0.0) + self.b


@dataclass(frozen=True)
class Toll(SequenceSpec):
    """Per-node cost with f(0) = f(1) = 0: size, pathlength, sorting, or
    a custom table."""

    kind: str
    b: int = 1
    table: tuple = ()
    declared_degree: float = 0.0

    def __post_init__(self):
        if self.kind not in ("size", "pathlength", "sorting", "custom"):
            raise DomainError(f"unknown toll kind {self.kind!r}")
        if self.kind == "custom":
            tab = tuple(Fraction(v) for v in self.table)
            if len(tab) >= 1 and tab[0] != 0 or len(tab) >= 2 and tab[1] != 0:
                raise DomainError("a toll must have f(0) = f(1) = 0")
            object.__setattr__(self, "table", tab)
        elif self.kind == "sorting" and self.b < 1:
            raise DomainError("sorting toll needs b >= 1")

    def value(self, n: int):
        if n < 2:
            return 0.0 if self.kind == "sorting" else Fraction(0)
        if self.kind == "size":
            return Fraction(1)
        if self.kind == "pathlength":
            return Fraction(n)
        if self.kind == "sorting":
            return float(n) * math.log(n) ** self.b
        return self.table[n] if n < len(self.table) else Fraction(0)

    def float_array(self, counts: np.ndarray) -> np.ndarray:
        """Vectorised toll over an integer array (entries < 2 give 0)."""
        counts = np.asarray(counts, dtype=float)
        live = counts >= 2
        if self.kind == "size":
            return live.astype(float)
        if self.kind == "pathlength":
            return np.where(live, counts, 0.0)
        if self.kind == "sorting":
            safe = np.where(live, counts, 2.0)
            return np.where(live, safe * np.log(safe) ** self.b, 0.0)
        tab = np.array([float(v) for v in self.table])
        idx = np.clip(counts.astype(int), 0, len(tab) - 1)
        vals = tab[idx] if len(tab) else np.zeros_like(counts)
        vals[counts.astype(int) >= len(tab)] = 0.0
        return np.where(live, vals, 0.0)

    @property
    def is_rational(self) -> bool:
        return self.kind in ("size", "pathlength", "custom")

    def basic_pair(self) -> tuple[float, int]:
        """The (d, b) power-log pair the toll follows for k >= 2."""
        if self.kind == "size":
            return (0.0, 0)
        if self.kind == "pathlength":
            return (1.0, 0)
        if self.kind == "sorting":
            return (1.0, self.b)
        raise DomainError("custom tolls have no power-log pair")

    @property
    def degree(self) -> float:
        if self.kind == "custom":
            return float(self.declared_degree)
        return self.basic_pair()[0]

    @property
    def valuation(self) -> int:
        return 2

    def poly_bound_exponent(self) -> float:
        if self.kind == "sorting":
            return 1.0 + self.b
        return max(self.degree, 0.0)


@dataclass(frozen=True)
class TabulatedSeq(SequenceSpec):
    """Finite table of exact rationals; the caller declares the degree."""

    table: tuple
    declared_degree: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "table",
                           tuple(Fraction(v) for v in self.table))

    def value(self, n: int):
        if n >= len(self.table):
            raise RangeErrorFromTable(n, len(self.table))
        return self.table[n]

    def __len__(self) -> int:
        return len(self.table)

    @property
    def degree(self) -> float:
        return float(self.declared_degree)

    @property
    def valuation(self) -> int:
        for i, v in enumerate(self.table):
            if v != 0:
                return i
        return len(self.table)


class RangeErrorFromTable(DomainError, IndexError):
    def __init__(self, n, size):
        super().__init__(f"index {n} outside tabulated range 0..{size - 1}")


@dataclass(frozen=True)
class PlussedSeq(SequenceSpec):
    """Zero-padded modification: zeros below sigma(d), sentinel 1 at
    sigma(d), the inner values above.  Satisfies the VD condition."""

    inner: SequenceSpec

    @property
    def pad(self) -> int:
        return sigma(self.inner.degree)

    def value(self, n: int):
        pad = self.pad
        if n < pad:
            return Fraction(0)
        if n == pad:
            return Fraction(1)
        return self.inner.value(n)

    @property
    def degree(self) -> float:
        return self.inner.degree

    @property
    def valuation(self) -> int:
        return self.pad

    def poly_bound_exponent(self) -> float:
        return self.inner.poly_bound_exponent()


@dataclass(frozen=True)
class ShiftedSeq(SequenceSpec):
    """T^m for m > 0, T^(-|m|) for m < 0 (see module docstring)."""

    inner: SequenceSpec
    m: int

    def value(self, n: int):
        m = self.m
        if m >= 0:
            num = self.inner.value(n + m)
            den = 1
            for j in range(n + 1, n + m + 1):
                den *= j
            if isinstance(num, Fraction):
                return num / den
            return num / float(den)
        k = -m
        if n < k:
            return Fraction(0)
        fall = 1
        for j in range(n, n - k, -1):
            fall *= j
        val = self.inner.value(n - k)
        if isinstance(val, Fraction):
            return fall * val
        return float(fall) * val

    @property
    def degree(self) -> float:
        return self.inner.degree - self.m

    @property
    def valuation(self) -> int:
        if self.m >= 0:
            return max(self.inner.valuation - self.m, 0)
        return self.inner.valuation - self.m

    @property
    def has_lifting(self) -> bool:
        return _canonical_pair(self) is not None

    def lifting(self, s):
        return lifting_phi(self, s)

    def poly_bound_exponent(self) -> float:
        pair = _canonical_pair(self)
        if pair is not None:
            return float(pair[1])  # |phi| <= C (1+log)^b on x >= 0
        return max(self.degree, 0.0)


def plus_modify(spec: SequenceSpec) -> PlussedSeq:
    """Zero-pad below sigma(deg) and plant the sentinel value 1 there."""
    return PlussedSeq(spec)


def shift_T(spec: SequenceSpec, m: int) -> SequenceSpec:
    """Apply T^m (m > 0 forward, m < 0 inverse); m = 0 returns spec.

    Composing with the opposite shift cancels: inner shifts of opposite
    sign are unwrapped instead of stacked.
    """
    if m == 0:
        return spec
    if isinstance(spec, ShiftedSeq):
        total = spec.m + m
        return spec.inner if total == 0 else ShiftedSeq(spec.inner, total)
    return ShiftedSeq(spec, m)


def canonicalize(spec: SequenceSpec) -> tuple[SequenceSpec, int]:
    """Reduced rewrite T^sigma(d)[spec+]; returns (canonical, sigma(d))."""
    ell = sigma(spec.degree)
    return shift_T(plus_modify(spec), ell), ell


def _canonical_pair(spec: SequenceSpec):
    """(d, b, l) when spec is the canonical rewrite of a power-log pair."""
    if not isinstance(spec, ShiftedSeq) or not isinstance(spec.inner, PlussedSeq):
        return None
    core = spec.inner.inner
    if isinstance(core, BasicSeq):
        d, b = float(core.d), core.b
    elif isinstance(core, Toll) and core.kind != "custom":
        d, b = core.basic_pair()
    else:
        return None
    ell = sigma(d)
    if spec.m != ell:
        return None
    return d, b, ell


def lifting_phi(spec: SequenceSpec, s):
    """Analytic continuation phi of a canonical power-log sequence.

    Defined on Re s > -1; agrees with the tabulated canonical sequence at
    every nonnegative integer except the sentinel-affected index (index 0,
    and only when the padded value differs from the power-log value there).
    Accepts scalars or numpy arrays.
    """
    pair = _canonical_pair(spec)
    if pair is None:
        raise DomainError("lifting_phi needs the canonical form of a "
                          "power-log (basic) sequence")
    d, b, ell = pair
    arr = np.asarray(s, dtype=complex)
    if np.any(arr.real <= -1.0):
        raise DomainError("lifting is defined on Re s > -1 only")
    w = arr + ell
    logw = np.log(w)
    out = np.exp((d - ell) * logw)
    if b:
        out = out * logw ** b
    for j in range(1, ell):
        out = out / (1.0 - j / w)
    if np.isscalar(s) or np.asarray(s).shape == ():
        return complex(out)
    return out


# --- plain-text serialisation -------------------------------------------

def format_spec(spec: SequenceSpec) -> str:
    if isinstance(spec, BasicSeq):
        return f"basic d={spec.d:g} b={spec.b}"
    if isinstance(spec, Toll):
        if spec.kind == "sorting" and spec.b != 1:
            return f"toll sorting b={spec.b}"
        if spec.kind == "custom":
            return "toll custom " + " ".join(str(v) for v in spec.table)
        return f"toll {spec.kind}"
    if isinstance(spec, TabulatedSeq):
        body = " ".join(str(v) for v in spec.table)
        if spec.declared_degree:
            return f"tab deg={spec.declared_degree:g} {body}"
        return f"tab {body}"
    raise DomainError(f"no text form for {type(spec).__name__}")


def parse_spec(text: str) -> SequenceSpec:
    """Parse `basic d=1 b=2`, `toll sorting`, `tab 0 0 1 4/3 ...`.

    Rationals use p/q; tabulated degree defaults to 0 unless a deg= token
    is given (degree is never inferred).
    """
    tokens = text.split()
    if not tokens:
        raise DomainError("empty sequence spec")
    head, rest = tokens[0], tokens[1:]
    if head == "basic":
        kv = _keyvals(rest)
        return BasicSeq(d=float(kv.get("d", 0.0)), b=int(kv.get("b", 0)))
    if head == "toll":
        if not rest:
            raise DomainError("toll spec needs a kind")
        kind = rest[0]
        if kind == "custom":
            return Toll("custom", table=tuple(Fraction(t) for t in rest[1:]))
        kv = _keyvals(rest[1:])
        if kind == "sorting":
            return Toll("sorting", b=int(kv.get("b", 1)))
        return Toll(kind)
    if head == "tab":
        deg = 0.0
        body = []
        for tok in rest:
            if tok.startswith("deg="):
                deg = float(tok[4:])
            else:
                body.append(Fraction(tok))
        return TabulatedSeq(tuple(body), declared_degree=deg)
    raise DomainError(f"unknown sequence spec kind {head!r}")


def _keyvals(tokens) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise DomainError(f"expected key=value token, got {tok!r}")
        key, val = tok.split("=", 1)
        out[key] = val
    return out
