import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ricekit.binomial import (log_abs_egf, pi_involution_check, pi_transform,
                              poisson_transform_eval, transform_csv_rows)
from ricekit.errors import ToleranceError
from ricekit.sequences import ShiftedSeq, TabulatedSeq, Toll, canonicalize
from ricekit.sequences import BasicSeq

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=16)


def test_constant_sequence_collapses():
    assert pi_transform([F(1)] * 12) == [F(1)] + [F(0)] * 11


def test_golden_sequence_transform():
    f = [F(1, (k + 1) * (k + 2)) for k in range(21)]
    assert pi_transform(f) == [F(1, n + 2) for n in range(21)]


def test_size_toll_transform():
    # f = (0, 0, 1, 1, ...) -> p = (0, 0, 1, 2, 3, ...): p(n) = n - 1
    f = [F(0), F(0)] + [F(1)] * 10
    p = pi_transform(f)
    assert p[:4] == [F(0), F(0), F(1), F(2)]
    assert all(p[n] == n - 1 for n in range(2, 12))


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=40))
def test_involution_property(values):
    assert pi_involution_check(values)


@settings(max_examples=25, deadline=None)
@given(st.lists(rationals, min_size=8, max_size=24),
       st.integers(min_value=1, max_value=3))
def test_shift_almost_commutes(values, m):
    """The m-fold shift anticommutes with the transform, sign (-1)^m.

    The identity needs valuation >= m (it comes from factoring z^m out of
    the transform's generating function), so the table is zero-padded.
    """
    values = [F(0)] * m + values
    tab = TabulatedSeq(tuple(values))
    n_keep = len(values) - m
    lhs = pi_transform([ShiftedSeq(tab, m).value(n) for n in range(n_keep)])
    pi_tab = TabulatedSeq(tuple(pi_transform(list(values))))
    rhs = [ShiftedSeq(pi_tab, m).value(n) for n in range(n_keep)]
    assert lhs == [(-1) ** m * v for v in rhs]


def test_transform_preserves_valuation():
    for ell in range(5):
        f = [F(0)] * ell + [F(3, 2), F(1), F(7)]
        p = pi_transform(f)
        assert all(v == 0 for v in p[:ell])
        assert p[ell] != 0


def test_poisson_constant():
    assert abs(poisson_transform_eval([1.0] * 400, 5.0, 1e-12) - 1.0) < 1e-12


def test_poisson_identity_sequence():
    z = 3 + 4j
    spec = BasicSeq(1, 0)  # k for k >= 2, i.e. identity minus the k=1 term

    def ident(k):
        return float(k)

    got = poisson_transform_eval(ident, z, 1e-12, degree_bound=1.0)
    assert abs(got - z) < 1e-11


def test_poisson_golden_against_high_precision():
    spec, _ = canonicalize(BasicSeq(0, 0))
    got = poisson_transform_eval(spec, 10.0, 1e-12)
    mpmath.mp.dps = 40
    want = mpmath.exp(-10) * mpmath.nsum(
        lambda k: mpmath.mpf(10) ** k / (mpmath.factorial(k)
                                         * (k + 1) * (k + 2)), [0, mpmath.inf])
    assert abs(got - complex(want)) < 1e-12


def test_poisson_tolerance_cap(monkeypatch):
    # hitting the term cap before the tail bound certifies must raise,
    # not silently truncate
    from ricekit import binomial
    monkeypatch.setattr(binomial, "POISSON_TERM_CAP_SLOPE", 0.5)
    with pytest.raises(ToleranceError):
        poisson_transform_eval(lambda k: 1.0, 30.0, 1e-12, degree_bound=0.0)


def test_log_abs_egf():
    # f == 1: sum z^k/k! = e^z, so the log magnitude is Re z (points kept
    # within the double-precision cancellation budget |z| - Re z < 30)
    vals = [1.0] * 4000
    for z in (50.0, 200 + 100j, 100 + 40j):
        assert abs(log_abs_egf(vals, z) - complex(z).real) < 1e-3


def test_csv_rows_render_rationals():
    rows = transform_csv_rows([F(1, 2), F(1, 3)])
    assert rows[0] == ("0", "1/2", "1/2")
    assert rows[1][2] == "1/6"


def test_toll_transform_matches_path_mean_seed():
    # pathlength toll: p(2) = f(2) = 2 feeds the route-(b) spot checks
    toll = Toll("pathlength")
    p = pi_transform([toll.value(k) for k in range(6)])
    assert p[2] == 2
