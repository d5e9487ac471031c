import math
from fractions import Fraction as F

import numpy as np
import pytest

from ricekit.binomial import pi_transform
from ricekit.errors import DomainError
from ricekit.sequences import (BasicSeq, PlussedSeq, ShiftedSeq, TabulatedSeq,
                               Toll, canonicalize, format_spec, lifting_phi,
                               parse_spec, plus_modify, shift_T, sigma)


def test_sigma_branches():
    assert sigma(1.0) == 3
    assert sigma(0.0) == 2
    assert sigma(-2.0) == 1
    # the defining inequality sigma(d) > d + 1
    for d in (-3.5, -1.0, -0.2, 0.0, 0.7, 1.0, 2.9, 4.0):
        assert sigma(d) > d + 1


def test_plus_modify_pathlength():
    plus = plus_modify(BasicSeq(1, 0))
    assert [plus.value(n) for n in range(7)] == [0, 0, 0, 1, 4, 5, 6]
    assert plus.growth_profile().vd_satisfied


def test_plus_modify_size_is_unchanged_tail():
    plus = plus_modify(BasicSeq(0, 0))
    assert [plus.value(n) for n in range(6)] == [0, 0, 1, 1, 1, 1]


def test_plus_modify_tabulated():
    plus = plus_modify(TabulatedSeq((0, 0, 5, 7), declared_degree=0.0))
    assert [plus.value(n) for n in range(4)] == [0, 0, 1, 7]


def test_shift_forward_of_plussed_pathlength():
    g = shift_T(plus_modify(BasicSeq(1, 0)), 3)
    assert g.value(0) == F(1, 6)
    assert g.value(1) == F(1, 6)   # 4/24: the sentinel sits at index -1 here
    assert g.value(2) == F(1, 12)  # 5/60


def test_shift_identity_and_roundtrip():
    tab = TabulatedSeq(tuple(F(k * k + 1, 3) for k in range(12)))
    assert shift_T(tab, 0) is tab
    back = shift_T(shift_T(tab, 3), -3)
    for n in range(3, 12 - 3):
        assert back.value(n) == tab.value(n)


def test_shift_valuation_bookkeeping():
    plus = plus_modify(BasicSeq(1, 0))  # valuation 3
    assert shift_T(plus, 2).valuation == 1
    assert shift_T(plus, 3).valuation == 0
    inv = shift_T(plus, -2)
    assert inv.valuation == 5
    assert inv.degree == plus.degree + 2


def test_canonicalize_golden():
    f, ell = canonicalize(BasicSeq(0, 0))
    assert ell == 2
    for k in range(10):
        assert f.value(k) == F(1, (k + 1) * (k + 2))
    profile = f.growth_profile()
    assert profile.valuation == 0
    assert profile.degree < -1


def test_canonicalize_sorting_closed_form():
    f, ell = canonicalize(BasicSeq(1, 1))
    assert ell == 3
    for k in range(1, 8):
        want = math.log(k + 3) / ((k + 1) * (k + 2))
        assert abs(float(f.value(k)) - want) < 1e-14
    # sentinel index: tabulated value is authoritative and differs
    assert f.value(0) == F(1, 6)


def test_canonical_reduction_property():
    for d, b in ((0, 0), (1, 0), (1, 1), (2, 1), (-2, 0), (0.5, 2)):
        f, ell = canonicalize(BasicSeq(d, b))
        assert ell == sigma(d)
        assert f.valuation == 0
        assert f.degree == d - ell
        assert f.degree < -1


def test_pi_compatibility_with_shift():
    # binomial transform of the canonical rewrite vs shifted transform
    F0 = plus_modify(BasicSeq(0, 0))
    ell = 2
    n_max = 20
    lhs = pi_transform([canonicalize(BasicSeq(0, 0))[0].value(n)
                        for n in range(n_max)])
    pi_f0 = pi_transform([F0.value(n) for n in range(n_max + ell)])
    shifted = ShiftedSeq(TabulatedSeq(tuple(pi_f0)), ell)
    sign = (-1) ** ell
    for n in range(n_max):
        assert lhs[n] == sign * shifted.value(n)


def test_lifting_examples():
    f0, _ = canonicalize(BasicSeq(0, 0))
    assert abs(lifting_phi(f0, 0.0) - 0.5) < 1e-15
    f2, _ = canonicalize(BasicSeq(1, 1))
    assert abs(lifting_phi(f2, 1.0) - math.log(4) / 6) < 1e-14
    s = 1 + 2j
    assert abs(lifting_phi(f0, s) - 1 / ((s + 1) * (s + 2))) < 1e-14


def test_lifting_matches_values_off_sentinel():
    f2, _ = canonicalize(BasicSeq(1, 1))
    for k in range(1, 12):
        assert abs(lifting_phi(f2, float(k)) - float(f2.value(k))) < 1e-13
    # the sentinel-affected index is the known exception
    assert abs(lifting_phi(f2, 0.0) - float(f2.value(0))) > 0.1


def test_lifting_domain_error():
    f0, _ = canonicalize(BasicSeq(0, 0))
    with pytest.raises(DomainError):
        lifting_phi(f0, -1.0)
    with pytest.raises(DomainError):
        lifting_phi(TabulatedSeq((0, 1)), 1.0)


def test_lifting_growth_bound():
    # |phi(s)| <= K |s+1|^(d-l) (1+|log(s+l)|)^b on Re s >= -1+eps
    d, b = 1, 1
    f, ell = canonicalize(BasicSeq(d, b))
    pts = [x + 1j * y for x in (-0.9, -0.5, 0.0, 2.0, 10.0)
           for y in (-40.0, -3.0, 0.0, 5.0, 100.0)]
    ratios = []
    for s in pts:
        bound = abs(s + 1) ** (d - ell) * (1 + abs(np.log(s + ell))) ** b
        ratios.append(abs(lifting_phi(f, s)) / bound)
    assert max(ratios) < 50.0


def test_spec_text_roundtrip():
    for text in ("basic d=1 b=2", "toll sorting", "toll size",
                 "tab 0 0 1 4/3"):
        spec = parse_spec(text)
        again = parse_spec(format_spec(spec))
        assert type(again) is type(spec)
    tab = parse_spec("tab 0 0 1/2 7")
    assert tab.table == (F(0), F(0), F(1, 2), F(7))
    assert parse_spec("basic d=1 b=2") == BasicSeq(1.0, 2)
    assert parse_spec("toll sorting b=2") == Toll("sorting", b=2)
    with pytest.raises(DomainError):
        parse_spec("frob 1 2")


def test_toll_validation():
    with pytest.raises(DomainError):
        Toll("custom", table=(1, 2, 3))  # f(0) must vanish
    toll = Toll("custom", table=(0, 0, F(5, 2)))
    assert toll.value(2) == F(5, 2)
    assert toll.value(10) == 0
    assert Toll("size").basic_pair() == (0.0, 0)
    assert Toll("sorting", b=2).basic_pair() == (1.0, 2)
