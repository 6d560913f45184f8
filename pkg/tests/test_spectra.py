import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from slinverse import (
    DEFAULT,
    NonSymmetricError,
    Potential,
    SolverError,
    asymptotic_fit,
    beta_sequence,
    bvpb_spectrum,
    dirichlet_spectrum,
    e_sequence,
    gaps,
    integrate_fundamental,
    matrix_spectrum,
    omega_sequence,
    periodic_spectrum,
    weight_numbers,
    witness,
)
from slinverse.spectra import Gap, oscillation_index


def test_dirichlet_closed_forms():
    assert dirichlet_spectrum(Potential.constant(0.0), 5) == pytest.approx([1, 4, 9, 16, 25], abs=1e-9)
    assert dirichlet_spectrum(Potential.constant(3.0), 3) == pytest.approx([4, 7, 12], abs=1e-9)


def test_dirichlet_mathieu_vs_oracle():
    q = witness("mathieu")
    ref = matrix_spectrum(q, "dirichlet", M=2000, N=5)
    assert dirichlet_spectrum(q, 5) == pytest.approx(ref, abs=1e-5)


def test_oscillation_index_of_eigenfunctions():
    q = witness("xsin")
    gamma = dirichlet_spectrum(q, 12)
    mid = 0.5 * (gamma[:-1] + gamma[1:])
    # between gamma_n and gamma_n+1 the solution S has n zeros in (0, pi)
    assert [oscillation_index(q, lam) for lam in mid] == list(range(1, 12))


def test_resolution_guard():
    with pytest.raises(SolverError):
        dirichlet_spectrum(witness("zero", M=16), 40)


def test_periodic_zero_potential():
    bs = periodic_spectrum(Potential.constant(0.0), 6)
    assert bs.lam == pytest.approx([0, 4, 4, 16, 16, 36, 36], abs=1e-8)
    assert bs.lam_plus == pytest.approx([1, 1, 9, 9, 25, 25], abs=1e-8)
    assert all(g.closed for g in bs.gaps)
    assert list(bs.eps) == [0] * 6
    assert list(bs.omega) == [0] * 6


def test_periodic_constant_shift():
    b0 = periodic_spectrum(Potential.constant(0.0), 4)
    b1 = periodic_spectrum(Potential.constant(1.5), 4)
    assert b1.lam == pytest.approx(b0.lam + 1.5, abs=1e-8)
    assert b1.lam_plus == pytest.approx(b0.lam_plus + 1.5, abs=1e-8)


def test_mathieu_gaps_and_oracle(fwd):
    q, dd, bs = fwd("mathieu")
    a1 = bs.gaps[0]
    assert not a1.closed and a1.length > 10 * DEFAULT.scaled("gap_length", 1)
    per = matrix_spectrum(q, "periodic", M=2000, N=5)
    anti = matrix_spectrum(q, "antiperiodic_like", M=2000, N=4)
    assert bs.lam[:5] == pytest.approx(per, abs=1e-4)
    assert bs.lam_plus[:4] == pytest.approx(anti, abs=1e-4)
    # gamma_1 sits on an endpoint of a_1, and eps_1 names which one
    side = bs.eps[0]
    assert side in (-1, 1)
    assert dd.gamma[0] == pytest.approx(a1.right if side == 1 else a1.left, abs=1e-8)


@pytest.mark.parametrize("name", ["mathieu", "abs", "x", "xsin"])
def test_orderings(fwd, name):
    _, dd, bs = fwd(name)
    lam, lp = bs.lam, bs.lam_plus
    assert np.all(np.diff(dd.gamma) > 0)
    d = np.diff(lam)
    assert np.all(d[0::2] > 0) and np.all(d[1::2] >= 0)
    merged = [lam[0]]
    for k in range(len(lam) // 2):
        merged += [lp[2 * k], lp[2 * k + 1], lam[2 * k + 1], lam[2 * k + 2]]
    dm = np.diff(merged)
    assert np.all(dm >= 0) and np.all(dm[0::2] > 0)


def test_gap_constructed_inputs():
    lam = np.array([0.0, 4.0, 4.0])
    lp = np.array([0.9, 1.2])
    gl = gaps(lam, lp, gamma=[1.2, 4.0])
    assert gl[0].cls == "open" and (gl[0].left, gl[0].right) == (0.9, 1.2)
    assert gl[1].closed
    assert list(e_sequence([1.2, 4.0], gl)) == [1, 0]
    assert list(e_sequence([0.9, 4.0], gl)) == [-1, 0]
    with pytest.raises(NonSymmetricError):
        e_sequence([1.05, 4.0], gl)


def test_gap_level():
    assert Gap(1, 0.0, 1.0, "open").level == -1.0
    assert Gap(2, 0.0, 1.0, "open").level == 1.0


@pytest.mark.parametrize("c", [0.0, 2.0])
def test_weights_constant(c):
    q = Potential.constant(c)
    gamma = dirichlet_spectrum(q, 10)
    n = np.arange(1, 11)
    assert weight_numbers(q, gamma) == pytest.approx(math.pi / (2 * n ** 2), rel=1e-9)
    assert beta_sequence(q, gamma) == pytest.approx((-1.0) ** (n - 1), abs=1e-9)


@pytest.mark.parametrize("name", ["mathieu", "abs", "x", "xsin"])
def test_weight_cross_check_and_identity(fwd, name):
    q, dd, _ = fwd(name)
    e = integrate_fundamental(q, dd.gamma)
    assert dd.alpha == pytest.approx(e.ddot * e.Sprime_pi, rel=1e-6)
    assert np.all(dd.alpha > 0)
    n = np.arange(1, dd.gamma.size + 1)
    assert np.all(np.sign(dd.ddot) == (-1.0) ** n)
    assert np.max(dd.weight_residual()) < 1e-6
    # Eq. relating delta^2 and Delta^2 - 1 at Dirichlet eigenvalues
    res = np.abs(e.delta ** 2 - (e.Delta ** 2 - 1.0)) / (1.0 + e.Delta ** 2)
    assert np.max(res) < 1e-6


def test_weights_reject_non_eigenvalue():
    q = witness("mathieu")
    with pytest.raises(SolverError):
        weight_numbers(q, [1.5])


def test_beta_and_omega_asymmetric(fwd):
    q, dd, bs = fwd("x")
    n = np.arange(1, 11)
    assert np.max(np.abs(dd.beta[:10] - (-1.0) ** (n - 1))) > 1e-3
    assert np.any(bs.omega != 0)
    assert bs.eps is None
    with pytest.raises(NonSymmetricError):
        e_sequence(dd.gamma, bs.gaps)


@pytest.mark.parametrize("name", ["zero", "mathieu", "abs"])
def test_symmetric_omega_zero_and_endpoints(fwd, name):
    _, dd, bs = fwd(name)
    assert not np.any(bs.omega)
    assert bs.eps is not None
    for g in bs.gaps:
        gn = dd.gamma[g.n - 1]
        assert min(abs(gn - g.left), abs(gn - g.right)) <= 1e-6 * g.n ** 2 + 0.5 * DEFAULT.scaled("gap_length", g.n)


def test_bvpb_zero_closed_form():
    q = Potential.constant(0.0)
    bb = bvpb_spectrum(q, 0.0, 1.0, 8)

    def r(lam):
        if lam > 0:
            rho = math.sqrt(lam)
            return (rho + 1 / rho) * math.sin(rho * math.pi) + 2.0
        rho = math.sqrt(-lam)
        return (1 / rho - rho) * math.sinh(rho * math.pi) + 2.0 if lam < 0 else math.pi + 2.0

    grid = np.linspace(-3.0, 90.0, 200001)
    vals = np.array([r(x) for x in grid])
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
        roots.append(brentq(r, grid[i], grid[i + 1], xtol=1e-14))
    assert bb.mu[: len(roots)] == pytest.approx(roots[: bb.mu.size], abs=1e-8)
    n = np.arange(bb.nu.size)
    assert bb.nu == pytest.approx((n + 0.5) ** 2, abs=1e-8)
    assert bb.h == 0.0


def test_bvpb_h_and_ordering():
    bb = bvpb_spectrum(Potential.constant(0.0), 1.0, 1.0, 10)
    assert bb.h == pytest.approx(4.0)
    assert np.all(bb.mu[2:] > bb.mu[:-2])
    assert set(np.unique(bb.eta)) <= {-1, 0, 1}
    assert bb.eta[-1] == 1


def test_bvpb_requires_symmetric_and_nonzero_b():
    with pytest.raises(ValueError):
        bvpb_spectrum(witness("x"), 0.0, 1.0, 5)
    with pytest.raises(ValueError):
        bvpb_spectrum(witness("zero"), 0.0, 0.0, 5)


def test_bvpb_mathieu_asymptotics():
    q = witness("mathieu")
    bb = bvpb_spectrum(q, 1.0, -1.0, 40)
    fit = asymptotic_fit(bb.mu, "eq26")
    assert fit.params["h"] == pytest.approx(bb.h, abs=5e-2)
    assert fit.params["b"] == pytest.approx(-1.0, abs=5e-2)


def test_omega_dead_zone():
    q = witness("mathieu")
    gamma = dirichlet_spectrum(q, 6)
    assert list(omega_sequence(q, gamma)) == [0] * 6


@settings(max_examples=10, deadline=None)
@given(c=st.floats(-3, 3))
def test_constant_shift_property(c):
    g0 = dirichlet_spectrum(Potential.constant(0.0, M=256), 6)
    gc = dirichlet_spectrum(Potential.constant(c, M=256), 6)
    assert gc == pytest.approx(g0 + c, abs=1e-8)
