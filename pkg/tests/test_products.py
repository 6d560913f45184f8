import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slinverse import (
    ProductEvaluator,
    asymptotic_fit,
    bvpb_spectrum,
    check_condition28,
    check_condition6,
    integrate_fundamental,
    witness,
)
from slinverse.products import q_intervals


@pytest.fixture(scope="module")
def mathieu200(fwd):
    return fwd("mathieu", N=200)


def test_zero_potential_products():
    n = np.arange(1, 201)
    evd = ProductEvaluator("d", n ** 2.0)
    lam = np.array([-3.0, 0.3, 2.5, 17.0, 99.0])
    rho = np.sqrt(lam.astype(complex))
    exact = (np.sin(rho * math.pi) / rho).real
    assert evd(lam) == pytest.approx(exact, abs=1e-10)
    assert evd.d_dot_all(20) == pytest.approx((-1.0) ** n[:20] * math.pi / (2 * n[:20] ** 2), abs=1e-10)
    zeros = np.r_[0.0, np.repeat((2.0 * n[:100]) ** 2, 2)]
    evp = ProductEvaluator("p", zeros)
    assert evp(lam) == pytest.approx(1.0 - np.cos(rho * math.pi).real, abs=1e-10)


def test_product_ode_duality(mathieu200):
    q, dd, bs = mathieu200
    evd = ProductEvaluator("d", dd.gamma[:200])
    evp = ProductEvaluator("p", bs.lam)
    lam = np.linspace(-1.0, evp.validated_max, 50)
    e = integrate_fundamental(q, lam)
    assert np.max(np.abs(evd(lam) - e.d) / (1 + np.abs(e.d))) < 1e-6
    assert np.max(np.abs(evp(lam) - e.p) / (1 + np.abs(e.p))) < 1e-6


def test_r_duality():
    q = witness("abs")
    bb = bvpb_spectrum(q, 1.0, -1.0, 200)
    ev = ProductEvaluator("r", bb.mu)
    lam = np.linspace(bb.mu[0] - 2.0, ev.validated_max, 50)
    r = integrate_fundamental(q, lam).r(1.0, -1.0)
    assert np.max(np.abs(ev(lam) - r) / (1 + np.abs(r))) < 1e-3


def test_d_dot_matches_finite_differences(mathieu200):
    _, dd, _ = mathieu200
    ev = ProductEvaluator("d", dd.gamma[:200])
    for n in (1, 2, 5, 11):
        g, h = dd.gamma[n - 1], 1e-5 * (1 + dd.gamma[n - 1])
        fd = (ev(g + h) - ev(g - h)) / (2 * h)
        assert ev.d_dot(n) == pytest.approx(fd, rel=1e-5)
        assert ev.d_dot(n) == pytest.approx(dd.ddot[n - 1], rel=1e-8)


def test_tail_consistency(mathieu200):
    _, dd, bs = mathieu200
    lam = np.linspace(0.5, 600.0, 13)
    for kind, zeros in (("d", dd.gamma[:200]), ("p", bs.lam)):
        a = ProductEvaluator(kind, zeros, n_terms=100)(lam)
        b = ProductEvaluator(kind, zeros, n_terms=200)(lam)
        assert np.max(np.abs(a - b) / (1 + np.abs(b))) < 1e-4


def test_symmetric_signs(fwd):
    # sign Delta(gamma_n) = sign ddot(gamma_n) = (-1)^n, and (-1)^n Delta(gamma_n) -> 1
    _, dd, bs = fwd("mathieu")
    evp = ProductEvaluator("p", bs.lam)
    evd = ProductEvaluator("d", dd.gamma[:40])
    n = np.arange(1, 41)
    Delta = 1.0 - evp(dd.gamma[:40])
    ddot = evd.d_dot_all()
    assert np.all(np.sign(Delta) == (-1.0) ** n)
    assert np.all(np.sign(ddot) == (-1.0) ** n)
    assert np.max(np.abs((-1.0) ** n * Delta - 1.0)[20:]) < 1e-6


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        ProductEvaluator("d", [1.0, 2.0])
    with pytest.raises(ValueError):
        ProductEvaluator("q", np.arange(1, 30) ** 2.0)
    with pytest.raises(ValueError):
        ProductEvaluator("d", np.arange(30, 0, -1) ** 2.0)
    ev = ProductEvaluator("d", np.arange(1, 30) ** 2.0)
    with pytest.raises(ValueError):
        ev(2000.0)


@pytest.mark.parametrize("name", ["zero", "mathieu", "abs", "x", "xsin"])
def test_condition6_passes(fwd, name):
    _, _, bs = fwd(name)
    rep = check_condition6(bs.lam)
    assert rep.passed and rep.worst >= -1e-6 and rep.index.size >= 4


def test_condition6_tampered(fwd):
    _, _, bs = fwd("mathieu")
    lam = bs.lam.copy()
    lam[2] = lam[3] - 0.3 * (lam[3] - lam[2])  # narrow the band [lambda_2, lambda_3]
    rep = check_condition6(lam)
    assert not rep.passed and rep.index[np.argmin(rep.margins)] == 1


@pytest.mark.parametrize("a,b", [(0.0, 1.0), (1.0, -1.0)])
def test_condition28(a, b):
    bb = bvpb_spectrum(witness("mathieu"), a, b, 40)
    assert check_condition28(bb.mu, b).passed
    n, lo, hi = q_intervals(bb.mu, b)[1]
    mu = bb.mu.copy()
    mu[lo] = mu[hi] - 0.3 * (mu[hi] - mu[lo])
    assert not check_condition28(mu, b).passed


def test_q_intervals():
    mu = np.arange(10.0)
    assert q_intervals(mu, 1.0)[0] == (0, 0, 1)
    assert q_intervals(mu, -1.0)[0] == (1, 1, 2)


@pytest.mark.parametrize("name", ["zero", "const", "mathieu", "abs", "x", "xsin"])
def test_asymptotic_fits_recover_mean(fwd, name):
    q, dd, bs = fwd(name)
    for seq, model in ((dd.gamma, "eq9"), (bs.lam, "eq4"), (bs.lam_plus, "eq8")):
        fit = asymptotic_fit(seq, model)
        assert fit.params["alpha"] == pytest.approx(q.mean, abs=5e-2)
        assert not fit.diverging
    assert asymptotic_fit(dd.alpha, "eq12").params["scale"] == pytest.approx(1.0, abs=1e-2)


def test_asymptotic_fit_errors():
    with pytest.raises(ValueError):
        asymptotic_fit(np.arange(10.0), "eq9")
    with pytest.raises(ValueError):
        asymptotic_fit(np.arange(40.0), "eq99")


@settings(max_examples=15, deadline=None)
@given(c=st.floats(-4, 4), lam=st.floats(-3, 250))
def test_shifted_zero_spectrum_property(c, lam):
    n = np.arange(1, 121)
    ev = ProductEvaluator("d", n ** 2.0 + c)
    rho = complex(lam - c) ** 0.5
    exact = (np.sin(rho * math.pi) / rho).real if rho != 0 else math.pi
    assert ev(lam) == pytest.approx(exact, abs=1e-9 * (1 + abs(exact)))
