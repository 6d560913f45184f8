"""Reconstruction of potentials from spectral data.

The Gelfand-Levitan equation

    K(x, t) + F(x, t) + int_0^x K(x, s) F(s, t) ds = 0,   0 < t < x,

is posed relative to a constant reference potential s (the fitted mean of
the Dirichlet eigenvalues), so that

    F(x, t) = sum_n [ phi(x, g_n) phi(t, g_n) / a_n - phi(x, g0_n) phi(t, g0_n) / a0_n ]

with phi(x, lam) = sin(rho x) / rho, rho^2 = lam - s, g0_n = n^2 + s and
a0_n = pi / (2 n^2).  Since F is a finite sum of products, K(x, .) lies in the
span of the same functions and the equation collapses to a small linear
system at every x.  The potential is q = s + 2 d/dx K(x, x).

Truncating the data after N terms drops the weight-number tail
2 (gamma_n - s) alpha_n / pi - 1 ~ c / n^2 with c = (q(0) - s) / 2.  To first
order the missing terms add (4c/pi) sum_{n>N} sin(2nx)/n to q, a Gibbs-type
layer at both ends; the tail correction fits c and adds that sum back.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CharacterizationError, SolverError
from .potential import Potential
from .products import ProductEvaluator, check_condition6
from .roots import bracket_root, golden_max
from .tolerances import DEFAULT

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class GLWorkspace:
    grid: np.ndarray
    F: np.ndarray
    K_diag: np.ndarray
    residual: float
    shift: float
    method: str
    tail: float = 0.0


def _phi(x, w):
    """phi(x, .) and its x-derivative for rho^2 = w; x (P,), w (B,) -> (P, B)."""
    x = np.asarray(x, dtype=float)[:, None]
    w = np.asarray(w, dtype=float)[None, :]
    rho = np.sqrt(np.abs(w))
    safe = np.where(rho > 0, rho, 1.0)
    pos, neg = w > 0, w < 0
    val = np.where(pos, np.sin(safe * x) / safe, np.where(neg, np.sinh(safe * x) / safe, x))
    der = np.where(pos, np.cos(safe * x), np.where(neg, np.cosh(safe * x), 1.0 + 0.0 * x))
    return val, der


def reference_shift(gamma):
    """Mean of the potential estimated from Dirichlet eigenvalues.

    gamma_n - n^2 ~ s + (c2 + (-1)^n a2)/n^2 + c4/n^4 on the upper half; the
    alternating column absorbs the parity split that a kink at pi/2 produces.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = np.arange(1, gamma.size + 1, dtype=float)
    up = n > gamma.size // 2
    k = n[up]
    A = np.column_stack([np.ones(k.size), k ** -2, (-1.0) ** k / k ** 2, k ** -4])
    return float(np.linalg.lstsq(A, (gamma - n * n)[up], rcond=None)[0][0])


def _basis(gamma, alpha, shift):
    """Eigenvalue parameters and weights of the separable kernel F."""
    n = np.arange(1, gamma.size + 1, dtype=float)
    g0 = n * n + shift
    a0 = math.pi / (2.0 * n * n)
    lam, wts = [], []
    for g, a, gr, ar in zip(gamma, alpha, g0, a0):
        if g == gr:
            if a != ar:
                lam.append(g)
                wts.append(1.0 / a - 1.0 / ar)
            continue
        lam += [g, gr]
        wts += [1.0 / a, -1.0 / ar]
    return np.array(lam) - shift, np.array(wts)


def _gl_separable(w, W, M):
    x = np.linspace(0.0, math.pi, M + 1)
    h = math.pi / M
    B = w.size
    K_diag = np.zeros(M + 1)
    dK = np.zeros(M + 1)
    if B == 0:
        return x, np.zeros((M + 1, M + 1)), K_diag, dK, 0.0
    u_all, du_all = _phi(x, w)
    G = np.zeros((B, B))
    eye = np.eye(B)
    worst = 0.0
    offs = 0.5 * h * (1.0 + _GL_NODES)
    qw = 0.5 * h * _GL_WEIGHTS
    for i in range(M + 1):
        if i > 0:
            uq, _ = _phi(x[i - 1] + offs, w)
            G += (uq * qw[:, None]).T @ uq
        u, du = u_all[i], du_all[i]
        A = eye + W[:, None] * G
        rhs = -W * u
        c = np.linalg.solve(A, rhs)
        res = np.max(np.abs(A @ c - rhs)) / max(1.0, np.max(np.abs(rhs)))
        worst = max(worst, res)
        kxx = u @ c
        dc = np.linalg.solve(A, -W * (du + u * kxx))
        K_diag[i] = kxx
        dK[i] = du @ c + u @ dc
    F = (u_all * W) @ u_all.T
    return x, F, K_diag, dK, worst


def _gl_nystrom(w, W, M):
    x = np.linspace(0.0, math.pi, M + 1)
    h = math.pi / M
    u_all, _ = _phi(x, w) if w.size else (np.zeros((M + 1, 0)), None)
    F = (u_all * W) @ u_all.T
    K_diag = np.zeros(M + 1)
    worst = 0.0
    for i in range(1, M + 1):
        sub = F[: i + 1, : i + 1]
        wt = np.full(i + 1, h)
        wt[0] = wt[-1] = 0.5 * h
        A = np.eye(i + 1) + sub * wt[None, :]
        f = F[i, : i + 1]
        k = np.linalg.solve(A, -f)
        worst = max(worst, np.max(np.abs(A @ k + f)) / max(1.0, np.max(np.abs(f))))
        K_diag[i] = k[-1]
    dK = np.gradient(K_diag, h, edge_order=2)
    return x, F, K_diag, dK, worst


def tail_coefficient(gamma, alpha, shift):
    """c in 2 (gamma_n - s) alpha_n / pi - 1 ~ c/n^2 + d/n^4, fitted on the upper half."""
    n = np.arange(1, gamma.size + 1, dtype=float)
    beta = 2.0 * (gamma - shift) * alpha / math.pi - 1.0
    up = n > gamma.size // 2
    A = np.column_stack([n[up] ** -2, n[up] ** -4])
    return float(np.linalg.lstsq(A, beta[up], rcond=None)[0][0])


def sawtooth_tail(x, N):
    """sum_{n>N} sin(2nx)/n on [0, pi], with the one-sided limits at the ends."""
    x = np.asarray(x, dtype=float)
    n = np.arange(1, N + 1, dtype=float)
    out = 0.5 * (math.pi - 2.0 * x) - np.sin(2.0 * np.outer(x, n)) @ (1.0 / n)
    out[x <= 0.0] = 0.5 * math.pi
    out[x >= math.pi] = -0.5 * math.pi
    return out


def gelfand_levitan(gamma, alpha, M=512, method="separable", shift=None, residual_tol=1e-8,
                    tail_correction=True):
    """Solve the Gelfand-Levitan equation; returns (q values on the grid, workspace)."""
    gamma = np.asarray(gamma, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    shift = reference_shift(gamma) if shift is None else float(shift)
    w, W = _basis(gamma, alpha, shift)
    if method == "separable":
        x, F, K_diag, dK, res = _gl_separable(w, W, M)
    elif method == "nystrom":
        x, F, K_diag, dK, res = _gl_nystrom(w, W, M)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not np.all(np.isfinite(dK)):
        raise SolverError("Gelfand-Levitan system is singular")
    if res > residual_tol:
        raise SolverError(f"Gelfand-Levitan residual {res:.2e} exceeds {residual_tol:.0e}")
    q = shift + 2.0 * dK
    c = 0.0
    if tail_correction and gamma.size >= 16:
        c = tail_coefficient(gamma, alpha, shift)
        q = q + 4.0 * c / math.pi * sawtooth_tail(x, gamma.size)
    return q, GLWorkspace(x, F, K_diag, res, shift, method, c)


# ---------------------------------------------------------------------------
# input validation
# ---------------------------------------------------------------------------


def _check_gamma(gamma):
    gamma = np.asarray(gamma, dtype=float)
    if gamma.size < 16:
        raise ValueError("at least 16 eigenvalues are required")
    if not np.all(np.isfinite(gamma)):
        raise CharacterizationError("eigenvalues must be finite", "9")
    bad = np.nonzero(np.diff(gamma) <= 0)[0]
    if bad.size:
        raise CharacterizationError(
            f"gamma is not strictly increasing at n={bad[0] + 1}", "9", index=int(bad[0]) + 1
        )
    n = np.arange(1, gamma.size + 1)
    resid = gamma - n * n - reference_shift(gamma)
    upper = n > gamma.size // 2
    # remainders must stay bounded; a wrong index offset shows up as growth ~ n
    if np.max(np.abs(resid[upper])) > max(1.0, 0.25 * gamma.size):
        raise CharacterizationError("gamma does not follow n^2 + const asymptotics", "9")
    return gamma


def _check_alpha(alpha, gamma):
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != gamma.shape:
        raise ValueError("gamma and alpha must have the same length")
    if np.any(~(alpha > 0)):
        k = int(np.nonzero(~(alpha > 0))[0][0])
        raise CharacterizationError(f"weight number alpha_{k + 1} is not positive", "12", index=k + 1)
    n = np.arange(1, alpha.size + 1)
    ratio = alpha * 2.0 * n * n / math.pi
    upper = n > alpha.size // 2
    if np.any(np.abs(ratio[upper] - 1.0) > 0.5):
        raise CharacterizationError("alpha does not follow pi/(2 n^2) asymptotics", "12")
    return alpha


def _finish(q_vals, symmetric):
    if symmetric:
        q_vals = 0.5 * (q_vals + q_vals[::-1])
    return Potential(q_vals, symmetric=symmetric)


# ---------------------------------------------------------------------------
# inverse problems
# ---------------------------------------------------------------------------


def solve_ip1(gamma, alpha, M=512, method="separable", return_info=False):
    """Potential from the Dirichlet spectral data {gamma_n, alpha_n}."""
    gamma = _check_gamma(gamma)
    alpha = _check_alpha(alpha, gamma)
    q, ws = gelfand_levitan(gamma, alpha, M, method)
    pot = _finish(q, False)
    return (pot, {"workspace": ws, "alpha": alpha}) if return_info else pot


def solve_ip3(gamma, M=512, method="separable", return_info=False):
    """Symmetric potential from the Dirichlet spectrum alone."""
    gamma = _check_gamma(gamma)
    ev = ProductEvaluator("d", gamma, n_terms=gamma.size)
    ddot = ev.d_dot_all()
    n = np.arange(1, gamma.size + 1)
    alpha = np.where(n % 2 == 0, 1.0, -1.0) * ddot
    alpha = _check_alpha(alpha, gamma)
    q, ws = gelfand_levitan(gamma, alpha, M, method)
    pot = _finish(q, True)
    return (pot, {"workspace": ws, "alpha": alpha, "ddot": ddot}) if return_info else pot


def _check_lambda(lam):
    lam = np.asarray(lam, dtype=float)
    if lam.size < 33 or lam.size % 2 == 0:
        raise ValueError("lambda sequence must hold lambda_0..lambda_2K with K >= 16")
    d = np.diff(lam)
    strict = d[0::2]  # lambda_2k < lambda_2k+1
    if np.any(strict <= 0) or np.any(d[1::2] < 0):
        k = int(np.nonzero(np.r_[strict <= 0, d[1::2] < 0])[0][0])
        raise CharacterizationError("lambda sequence violates the ordering lambda_0 < lambda_1 <= lambda_2 < ...", "3", index=k)
    return lam


def _odd_gaps(evp, lam, tol):
    """Gaps a_2k-1 as zeros of p - 2 on [lambda_2k-2, lambda_2k-1]."""
    out = {}
    for k in range(1, (lam.size - 1) // 2 + 1):
        n = 2 * k - 1
        lo, hi = lam[2 * k - 2], lam[2 * k - 1]
        m, pmax = golden_max(evp.eval, lo, hi)
        margin = pmax - 2.0
        if margin < -tol.condition_margin:
            raise CharacterizationError(
                f"band condition fails on [lambda_{2 * k - 2}, lambda_{2 * k - 1}]: max p - 2 = {margin:.3e}",
                "6",
                index=k - 1,
            )
        if margin <= tol.scaled("product_gap_value", n) or m in (lo, hi):
            out[n] = (m, m)
            continue
        f = lambda x: evp.eval(x) - 2.0
        left = bracket_root(f, lo, m)
        right = bracket_root(f, m, hi)
        if right - left <= tol.scaled("gap_length", n):
            out[n] = (m, m)
        else:
            out[n] = (left, right)
    return out


def algorithm1_gamma(lam, eps, tol=DEFAULT, n_terms=None):
    """Steps 1-4 of the symmetric reconstruction: place gamma_n in the gaps by E.

    Returns (gamma, gaps, p-evaluator) where gaps maps n to (left, right).
    """
    lam = _check_lambda(lam)
    eps = np.asarray(eps, dtype=int)
    evp = ProductEvaluator("p", lam, n_terms=lam.size if n_terms is None else n_terms)
    gaps = _odd_gaps(evp, lam, tol)
    for k in range(1, (lam.size - 1) // 2 + 1):
        left, right = lam[2 * k - 1], lam[2 * k]
        n = 2 * k
        if right - left <= tol.scaled("gap_length", n):
            mid = 0.5 * (left + right)
            gaps[n] = (mid, mid)
        else:
            gaps[n] = (left, right)
    N = len(gaps)
    if eps.size < N:
        raise ValueError(f"E sequence has {eps.size} entries, {N} gaps are determined by lambda")
    gamma = np.empty(N)
    for n in range(1, N + 1):
        left, right = gaps[n]
        e = int(eps[n - 1])
        if e not in (-1, 0, 1):
            raise CharacterizationError(f"eps_{n} = {e} is not in {{-1, 0, 1}}", "J1", index=n)
        closed = left == right
        if closed and e != 0:
            raise CharacterizationError(f"eps_{n} = {e} on the closed gap a_{n}", "J1", index=n)
        if not closed and e == 0:
            raise CharacterizationError(f"eps_{n} = 0 on the open gap a_{n} (length {right - left:.3e})", "J1", index=n)
        gamma[n - 1] = right if e == 1 else left
    return gamma, gaps, evp


def _alpha_from_products(gamma, evp, evd):
    ddot = evd.d_dot_all(gamma.size)
    Delta = 1.0 - evp.eval(gamma)
    return ddot, Delta


def solve_ip4(lam, eps, M=512, tol=DEFAULT, method="separable", return_info=False):
    """Symmetric potential from the periodic spectrum and the E-sequence."""
    gamma, gaps, evp = algorithm1_gamma(lam, eps, tol)
    _check_gamma(gamma)
    evd = ProductEvaluator("d", gamma, n_terms=gamma.size)
    ddot, Delta = _alpha_from_products(gamma, evp, evd)
    n = np.arange(1, gamma.size + 1)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    bad = np.nonzero((np.sign(ddot) != sign) | (np.sign(Delta) != sign))[0]
    if bad.size:
        k = int(bad[0]) + 1
        raise CharacterizationError(
            f"sign condition fails at n={k}: ddot={ddot[k - 1]:.3e}, Delta={Delta[k - 1]:.3e}", "23", index=k
        )
    alpha = ddot * Delta
    # the two weight formulas differ by |Delta(gamma_n)| - 1
    rel = np.abs(np.abs(Delta) - 1.0)
    limit = np.array([tol.scaled("deadzone", k) for k in n])
    if np.any(rel > limit):
        k = int(np.argmax(rel / limit)) + 1
        raise CharacterizationError(
            f"|Delta(gamma_{k})| = {abs(Delta[k - 1]):.9f} is not 1: gamma_{k} is not at a gap endpoint", "21", index=k
        )
    alpha = _check_alpha(alpha, gamma)
    q, ws = gelfand_levitan(gamma, alpha, M, method)
    pot = _finish(q, True)
    if return_info:
        return pot, {"workspace": ws, "alpha": alpha, "gamma": gamma, "gaps": gaps, "ddot": ddot, "Delta": Delta}
    return pot


def solve_ip2(lam, gamma, omega, M=512, tol=DEFAULT, method="separable", return_info=False):
    """Potential from the periodic spectrum, the Dirichlet spectrum and Omega."""
    lam = _check_lambda(lam)
    gamma = _check_gamma(gamma)
    omega = np.asarray(omega, dtype=int)
    if omega.size < gamma.size:
        raise ValueError("omega must have one entry per gamma_n")
    if np.any(~np.isin(omega, (-1, 0, 1))):
        raise CharacterizationError("omega entries must be -1, 0 or 1", "J")
    evp = ProductEvaluator("p", lam, n_terms=lam.size)
    c6 = check_condition6(lam, ev=evp, tol=tol.condition_margin)
    if not c6.passed:
        k = int(c6.index[np.argmin(c6.margins)])
        raise CharacterizationError(f"band condition fails at n={k}: margin {c6.worst:.3e}", "6", index=k)
    if gamma[-1] > evp.eval_limit:
        raise ValueError("gamma extends beyond the last periodic eigenvalue")
    evd = ProductEvaluator("d", gamma, n_terms=gamma.size)
    ddot, Delta = _alpha_from_products(gamma, evp, evd)
    disc = Delta * Delta - 1.0
    n = np.arange(1, gamma.size + 1)
    limit = np.array([tol.scaled("deadzone", k) for k in n])
    bad = np.nonzero((disc < -limit) & (omega[: gamma.size] != 0))[0]
    if bad.size:
        k = int(bad[0]) + 1
        raise CharacterizationError(
            f"Delta(gamma_{k})^2 - 1 = {disc[k - 1]:.3e} < 0 with omega_{k} != 0: gamma_{k} lies outside a_{k}",
            "J",
            index=k,
        )
    alpha = ddot * (Delta - omega[: gamma.size] * np.sqrt(np.clip(disc, 0.0, None)))
    alpha = _check_alpha(alpha, gamma)
    q, ws = gelfand_levitan(gamma, alpha, M, method)
    # Omega == 0 puts every gamma_n at a gap endpoint with |beta_n| = 1,
    # which forces a symmetric potential
    pot = _finish(q, not np.any(omega[: gamma.size]))
    if return_info:
        return pot, {"workspace": ws, "alpha": alpha, "ddot": ddot, "Delta": Delta, "condition6": c6}
    return pot
