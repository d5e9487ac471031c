import math
from fractions import Fraction as F

import numpy as np
import pytest

from ricekit.errors import DomainError, TailBoundError
from ricekit.laplace import (G_ratio, HatPhiForm, TwistedGammaSpec,
                             bromwich_inverse, hat_phi_closed_form,
                             hat_phi_for_pair, poisson_factor,
                             poisson_factor_minus_one, psi_singular_expansion,
                             psi_via_laplace, tameness_probe, twisted_gamma,
                             twisted_gamma_closed_form, u_coefficients)
from ricekit.rice import newton_psi
from ricekit.sequences import BasicSeq, canonicalize
from ricekit.special import EULER_GAMMA, reciprocal_gamma


# --- Bromwich inversion ------------------------------------------------------

def test_bromwich_partial_fractions():
    got = bromwich_inverse(lambda s: 1.0 / ((s + 1) * (s + 2)), 1.0, -0.5)
    assert abs(got - (math.exp(-1) - math.exp(-2))) < 1e-9


def test_bromwich_double_pole():
    got = bromwich_inverse(lambda s: (s + 2.0) ** -2.0, 1.0, -0.5)
    assert abs(got - math.exp(-2)) < 1e-9


def test_bromwich_triple_pole():
    got = bromwich_inverse(lambda s: (s + 1.0) ** -3.0, 2.0, -0.5)
    assert abs(got - 2.0 * math.exp(-2)) < 1e-9


def test_bromwich_exponential_bound():
    # |phihat(u)| <= K e^{bu} along the inversion abscissa
    b = -0.5
    vals = [abs(bromwich_inverse(lambda s: 1.0 / ((s + 1) * (s + 2)), u, b))
            for u in (1.0, 2.0, 4.0)]
    assert vals[2] <= 1.2 * math.exp(b * 4.0)


def test_bromwich_domain_errors():
    with pytest.raises(DomainError):
        bromwich_inverse(lambda s: 1.0 / (s + 2), -1.0, -0.5)
    with pytest.raises(DomainError):
        bromwich_inverse(lambda s: 1.0 / (s + 2), 1.0, 0.5)


# --- closed-form inverse transforms -----------------------------------------

def test_u_coefficients():
    assert u_coefficients(1, 5) == [1, 0, 0, 0, 0]
    assert u_coefficients(2, 5) == [1, 1, 1, 1, 1]
    # l = 3: complete homogeneous sums of {1, 2}
    assert u_coefficients(3, 5) == [1, 3, 7, 15, 31]


def test_hat_phi_step1_form():
    form = HatPhiForm(ell=1, c=-2.0, b=0, series_coeffs=())
    assert abs(hat_phi_closed_form(form, 0.7)
               - 0.7 * math.exp(-0.7)) < 1e-14


def test_hat_phi_golden_identity():
    form = hat_phi_for_pair(0, 0)
    us = np.linspace(0.05, 3.0, 40)
    got = hat_phi_closed_form(form, us)
    want = np.exp(-us) - np.exp(-2 * us)
    assert np.max(np.abs(got - want)) < 1e-13


def test_hat_phi_matches_bromwich():
    form = hat_phi_for_pair(0, 0)
    for u in (0.5, 1.5):
        via_contour = bromwich_inverse(
            lambda s: 1.0 / ((s + 1) * (s + 2)), u, -0.5, tol=1e-10)
        assert abs(hat_phi_closed_form(form, u) - via_contour) < 1e-9


def test_hat_phi_log_factor_derivative_form():
    # b = 1 via parameter differentiation vs an independent quadrature of
    # the Bromwich integral for the log-bearing continuation
    form = hat_phi_for_pair(1, 1)
    spec, ell = canonicalize(BasicSeq(1, 1))

    def phi(s):
        w = s + ell
        return np.log(w) * w ** (1.0 - ell) / ((1 - 1 / w) * (1 - 2 / w))

    for u in (0.8, 1.6):
        want = bromwich_inverse(phi, u, -0.5, tol=1e-9)
        assert abs(hat_phi_closed_form(form, u) - want) < 1e-7


def test_hat_phi_v_series_bound():
    # |V_c(u)| <= A u e^{(l-1)u}: sampled form of the remainder control
    form = hat_phi_for_pair(1, 0)  # l = 3, c = -2
    us = np.linspace(0.05, 5.0, 60)
    v = (hat_phi_closed_form(form, us) * math.gamma(2.0)
         / (np.exp(-3 * us) * us) - 1.0)
    bound = us * np.exp(2 * us)
    assert np.all(np.abs(v) <= 4.0 * bound)


def test_g_ratio():
    assert abs(G_ratio(1, -2.0) - 0.5) < 1e-15
    assert abs(G_ratio(3, -2.0) - 1.0 / 24.0) < 1e-15
    for j in range(1, 13):
        for c in (-1.5, -2.0, -3.7, -10.0):
            assert 0.0 < G_ratio(j, c) <= 1.0 / math.factorial(j)
    with pytest.raises(DomainError):
        G_ratio(2, -0.5)


# --- the integral operator ----------------------------------------------------

def test_psi_via_laplace_beta_identity():
    got = psi_via_laplace(lambda u: np.exp(-np.asarray(u)), 3.0)
    assert abs(got - 0.25) < 1e-10


def test_psi_via_laplace_golden_chain():
    hat = lambda u: np.exp(-np.asarray(u)) - np.exp(-2 * np.asarray(u))
    assert abs(psi_via_laplace(hat, 5.0) - 1.0 / 7.0) < 1e-10
    assert abs(psi_via_laplace(hat, 0.0) - 0.5) < 1e-10


def test_psi_via_laplace_domain():
    with pytest.raises(DomainError):
        psi_via_laplace(lambda u: np.exp(-u), -1.5)


def test_psi_via_laplace_needs_decay():
    with pytest.raises(TailBoundError):
        psi_via_laplace(lambda u: 1.0 / (1.0 + np.asarray(u)) ** 2, 0.5,
                        tol=1e-10)


@pytest.mark.parametrize("pair", [(0, 0), (1, 0), (1, 1)])
def test_dual_route_psi_agreement(pair):
    """Newton series vs Laplace-operator route, 40-point grid in (-1, 3]."""
    d, b = pair
    spec, _ = canonicalize(BasicSeq(d, b))
    form = hat_phi_for_pair(d, b)
    hat = lambda u: hat_phi_closed_form(form, u)
    worst = 0.0
    for s in np.linspace(-0.9, 3.0, 40):
        diff = abs(newton_psi(spec, s, tol=1e-10)
                   - psi_via_laplace(hat, s, tol=1e-10))
        worst = max(worst, diff)
    assert worst < 1e-8


def test_kernel_distortion_estimates():
    # N_s(u) = Theta(1) at 0 and O(u^{-Re s}) at infinity;
    # M_s(u) = N_s(u) - 1 = Theta(u) at 0
    s = 1.5
    small = np.array([1e-6, 1e-4, 1e-2])
    big = np.array([10.0, 100.0, 1000.0])
    n_small = poisson_factor(s, small)
    assert np.all(np.abs(n_small - 1.0) < 1e-1)
    n_big = np.abs(poisson_factor(s, big))
    assert np.all(n_big <= 1.5 * big ** -s)
    m_small = poisson_factor_minus_one(s, small)
    ratio = np.abs(m_small) / small
    assert 0.5 * s / 2 < ratio.min() and ratio.max() < 2.0 * s


# --- twisted Gamma -------------------------------------------------------------

def test_twisted_gamma_spot_values():
    assert abs(twisted_gamma(TwistedGammaSpec(2, 0), 1.0) - 0.5) < 1e-12
    got = twisted_gamma(TwistedGammaSpec(1, 1), 1.0)
    assert abs(got + EULER_GAMMA) < 1e-11
    got = twisted_gamma(TwistedGammaSpec(1, 2), 1.0)
    assert abs(got - (math.pi ** 2 / 6 + EULER_GAMMA ** 2)) < 1e-10


@pytest.mark.parametrize("ell", [1, 2, 3])
@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 5.0])
def test_twisted_gamma_quadrature_vs_closed(ell, m, s):
    spec = TwistedGammaSpec(ell, m)
    quad = twisted_gamma(spec, s, tol=1e-12)
    closed = twisted_gamma_closed_form(spec, s)
    assert abs(quad - closed) <= 1e-10 * abs(closed)


def test_twisted_gamma_domain():
    with pytest.raises(DomainError):
        twisted_gamma(TwistedGammaSpec(2, 0), -0.5)


# --- singular expansions --------------------------------------------------------

def test_singular_expansion_golden():
    se = psi_singular_expansion(0, 0)
    assert se.ell == 2 and se.c == -2.0
    assert se.canonical_pole.location == -2.0
    assert se.lifted_pole.location == 0.0
    assert se.kappa == (1.0,)
    # the canonical main term carries the full singular part: the
    # difference to the exact lifting 1/(s+2) stays bounded at the pole
    # (it tends to -(euler + log 2))
    diffs = [abs(se.canonical_main(-2.0 + eps) - 1.0 / eps)
             for eps in (0.2, 0.1, 0.05, 0.01)]
    assert max(diffs) < 2.0
    assert abs(diffs[-1] - (EULER_GAMMA + math.log(2))) < 0.05


def test_singular_expansion_orders():
    # degree-1 pairs: the polynomial prefactor cancels one pole order
    assert psi_singular_expansion(0, 0).lifted_order() == 0
    assert psi_singular_expansion(1, 0).lifted_order() == 0
    assert psi_singular_expansion(1, 1).lifted_order() == 1
    assert psi_singular_expansion(1, 2).lifted_order() == 2


def test_singular_expansion_canonical_matches_newton():
    # near the canonical pole the Newton route must track the main term
    for d, b in ((1, 0), (1, 1)):
        se = psi_singular_expansion(d, b)
        spec, _ = canonicalize(BasicSeq(d, b))
        diffs = []
        for eps in (0.4, 0.2, 0.1):
            s = se.c + eps
            diffs.append(abs(newton_psi(spec, s, tol=1e-10)
                             - se.canonical_main(s)))
        # bounded remainder while both sides blow up like eps^-(b+1)
        assert max(diffs) < 5.0
        assert abs(newton_psi(spec, se.c + 0.1, tol=1e-10)) > 5.0 or b == 0


def test_remainder_handles_bounded():
    se = psi_singular_expansion(1, 1)
    for m in (0, 1):
        handle = se.b_handle(m)
        vals = [abs(handle(s)) for s in (0.0, 0.5, 1.0, 2.0)]
        assert max(vals) < 50.0
    a0 = se.a_handle(0)
    # A<0>(s) ~ TG_l(s - c) + bounded part on Re s >= 0
    got = a0(1.0)
    want = twisted_gamma_closed_form(TwistedGammaSpec(3, 0), 1.0 - se.c)
    assert abs(got - want) < 5.0


# --- tameness probe --------------------------------------------------------------

TS = [4.0, 6.0, 9.0, 13.5, 20.0, 30.0, 40.0]


def test_probe_twisted_gamma_decays():
    report = tameness_probe(
        lambda s: twisted_gamma_closed_form(TwistedGammaSpec(2, 0), s),
        c=0.0, strip_width=0.25, t_samples=TS)
    assert report.exponential_decay_confirmed
    for row in report.rows:
        assert abs(row.exp_rate + math.pi / 2) < 0.35


def test_probe_rational_is_polynomial():
    report = tameness_probe(lambda s: 1.0 / (s + 2.0), c=-2.0,
                            strip_width=0.5, t_samples=TS)
    assert report.classification == "polynomial"
    assert abs(report.rows[0].poly_power + 1.0) < 0.3


def test_probe_reciprocal_gamma_flagged():
    report = tameness_probe(lambda s: reciprocal_gamma(-s), c=1.0,
                            strip_width=0.5, t_samples=TS)
    assert report.exponential_growth_detected
    for row in report.rows:
        assert abs(row.exp_rate - math.pi / 2) < 0.35
