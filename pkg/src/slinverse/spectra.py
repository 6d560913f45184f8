"""Eigenvalues of the Dirichlet, periodic and Robin-coupled problems.

Dirichlet eigenvalues (and the zeros of theta(pi, .)) are isolated with the
oscillation count: the solution S(., lam) has exactly as many zeros in
(0, pi) as there are Dirichlet eigenvalues below lam.  Periodic data come
from the Hill discriminant Delta: its zeros interlace with the Dirichlet
spectrum, each gap a_n contains gamma_n, and Delta' vanishes exactly once in
every gap.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonSymmetricError, SolverError
from .odecore import count_zeros, eval_solution, integrate_fundamental
from .roots import bracket_root, safeguarded_newton
from .tolerances import DEFAULT


@dataclass(frozen=True)
class DirichletSpectralData:
    gamma: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    ddot: np.ndarray

    def weight_residual(self):
        """|alpha_n beta_n + ddot_n| / |ddot_n|."""
        return np.abs(self.alpha * self.beta + self.ddot) / np.abs(self.ddot)


@dataclass(frozen=True)
class Gap:
    n: int
    left: float
    right: float
    cls: str
    gamma_side: str = None

    @property
    def length(self):
        return self.right - self.left

    @property
    def closed(self):
        return self.cls == "closed"

    @property
    def level(self):
        """Value of Delta at the gap endpoints."""
        return 1.0 if self.n % 2 == 0 else -1.0


@dataclass(frozen=True)
class BandSpectrum:
    lam: np.ndarray
    lam_plus: np.ndarray
    gaps: tuple
    gamma: np.ndarray
    omega: np.ndarray
    eps: np.ndarray = None
    centers: np.ndarray = None


@dataclass(frozen=True)
class BvpBSpectrum:
    a: float
    b: float
    h: float
    mu: np.ndarray
    nu: np.ndarray
    eta: np.ndarray
    multiplicity: np.ndarray = field(default=None)

    def Q(self, n):
        """Interval Q_n: [mu_2n, mu_2n+1] for b > 0, [mu_2n-1, mu_2n] for b < 0."""
        if self.b > 0:
            return self.mu[2 * n], self.mu[2 * n + 1]
        if n < 1:
            raise IndexError("Q_n starts at n = 1 when b < 0")
        return self.mu[2 * n - 1], self.mu[2 * n]


# ---------------------------------------------------------------------------
# oscillation-count eigenvalue search
# ---------------------------------------------------------------------------


def _check_resolution(q, lam):
    rho = math.sqrt(max(lam - q.min, 0.0))
    if rho * q.h >= 0.5 * math.pi:
        raise SolverError(
            f"grid too coarse for lambda={lam:.6g}: rho*h = {rho * q.h:.3f}; resample the potential",
            lam=lam,
        )


def _eigs_by_count(q, N, y0, yp0, charfn, lower, scheme):
    def count(lam):
        return int(count_zeros(q, lam, y0, yp0, scheme)[0])

    L = float(lower)
    for _ in range(80):
        if count(L) == 0:
            break
        L -= max(1.0, abs(L))
    else:
        raise SolverError("could not find a lower bound for the spectrum", lam=L)
    span = (N + 2.0) ** 2 + max(0.0, q.max - L) + 10.0
    for _ in range(40):
        U = L + span
        _check_resolution(q, U)
        if count(U) >= N:
            break
        span *= 1.5
    else:
        raise SolverError("could not bracket the requested eigenvalues", lam=L + span)
    s = np.arange(0.0, math.sqrt(U - L) + 0.25, 0.25)
    grid = L + s * s
    counts = count_zeros(q, grid, y0, yp0, scheme)
    roots = np.empty(N)
    for j in range(N):
        above = np.nonzero(counts > j)[0]
        i = int(above[0])
        a, b = grid[i - 1], grid[i]
        ca, cb = int(counts[i - 1]), int(counts[i])
        while not (ca == j and cb == j + 1):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                raise SolverError(f"cannot isolate eigenvalue index {j}", lam=a, index=j)
            cm = count(mid)
            if cm > j:
                b, cb = mid, cm
            else:
                a, ca = mid, cm
        roots[j] = safeguarded_newton(charfn, a, b)
    return roots


def _dirichlet_lower(q):
    return q.min - 1.0


def _robin_lower(q, a):
    return q.min - 4.0 * a * a - abs(a) - 1.0


def dirichlet_spectrum(q, N, scheme="magnus4"):
    """First N Dirichlet eigenvalues gamma_1 < ... < gamma_N."""
    if N < 1:
        raise ValueError("N must be >= 1")

    def charfn(lam):
        e = integrate_fundamental(q, lam, scheme)
        return e.S_pi, e.dS_pi

    return _eigs_by_count(q, N, 0.0, 1.0, charfn, _dirichlet_lower(q), scheme)


def robin_dirichlet_spectrum(q, a, N, scheme="magnus4"):
    """First N zeros nu_0 < nu_1 < ... of theta(pi, lam), theta(0)=1, theta'(0)=a."""

    def charfn(lam):
        e = integrate_fundamental(q, lam, scheme)
        return e.C_pi + a * e.S_pi, e.dC_pi + a * e.dS_pi

    return _eigs_by_count(q, N, 1.0, float(a), charfn, _robin_lower(q, a), scheme)


def oscillation_index(q, lam, scheme="magnus4"):
    """Zeros of S(., lam) in (0, pi)."""
    return int(count_zeros(q, lam, 0.0, 1.0, scheme)[0])


# ---------------------------------------------------------------------------
# weight numbers, beta, omega
# ---------------------------------------------------------------------------


def _weight_quadrature(q, lam, scheme):
    sol = eval_solution(q, lam, "S", scheme=scheme)
    y, yp, x = sol.y, sol.yprime, sol.x
    f = y * y
    h = q.h
    integral = h * (f.sum() - 0.5 * (f[0] + f[-1]))
    # Euler-Maclaurin end corrections with f' = 2 y y', f''' = 8(q-lam) y y' + 2 q' y^2
    dq = q._spline.derivative()(x[[0, -1]])
    qv = q.values[[0, -1]]
    f1 = 2.0 * y[[0, -1]] * yp[[0, -1]]
    f3 = 8.0 * (qv - lam) * y[[0, -1]] * yp[[0, -1]] + 2.0 * dq * y[[0, -1]] ** 2
    integral -= h * h / 12.0 * (f1[1] - f1[0])
    integral += h ** 4 / 720.0 * (f3[1] - f3[0])
    return integral


def weight_numbers(q, gamma, tol=DEFAULT, scheme="magnus4"):
    """alpha_n = int_0^pi S(x, gamma_n)^2 dx, cross-checked against ddot * S'(pi)."""
    gamma = np.asarray(gamma, dtype=float)
    alpha = np.array([_weight_quadrature(q, g, scheme) for g in gamma])
    e = integrate_fundamental(q, gamma, scheme)
    formula = e.dS_pi * e.Sprime_pi
    rel = np.abs(alpha - formula) / np.abs(formula)
    if np.any(rel > tol.weights_rtol):
        k = int(np.argmax(rel))
        raise SolverError(
            f"weight number cross-check failed at n={k + 1}: rel. diff {rel[k]:.2e}; gamma inaccurate?",
            lam=float(gamma[k]),
            index=k + 1,
        )
    if np.any(alpha <= 0):
        raise SolverError("non-positive weight number", index=int(np.argmin(alpha)) + 1)
    return alpha


def beta_sequence(q, gamma, scheme="magnus4"):
    """beta_n with psi(x, gamma_n) = beta_n S(x, gamma_n); equals -1/S'(pi, gamma_n)."""
    gamma = np.asarray(gamma, dtype=float)
    sp = np.atleast_1d(integrate_fundamental(q, gamma, scheme).Sprime_pi)
    if np.any(np.abs(sp) < 1e-12):
        k = int(np.argmin(np.abs(sp)))
        raise SolverError(f"S'(pi, gamma_{k + 1}) vanishes; not a Dirichlet eigenvalue", lam=float(gamma[k]))
    return -1.0 / sp


def dirichlet_data(q, N, tol=DEFAULT, scheme="magnus4"):
    gamma = dirichlet_spectrum(q, N, scheme)
    alpha = weight_numbers(q, gamma, tol, scheme)
    beta = beta_sequence(q, gamma, scheme)
    ddot = np.atleast_1d(integrate_fundamental(q, gamma, scheme).dS_pi)
    return DirichletSpectralData(gamma, alpha, beta, ddot)


def _deadzone_sign(values, width):
    values = np.asarray(values, dtype=float)
    out = np.sign(values).astype(int)
    out[np.abs(values) <= width] = 0
    return out


def omega_sequence(q, gamma, tol=DEFAULT, scheme="magnus4"):
    """omega_n = sign delta(gamma_n), zero inside the dead-zone."""
    gamma = np.asarray(gamma, dtype=float)
    delta = np.atleast_1d(integrate_fundamental(q, gamma, scheme).delta)
    width = np.array([tol.scaled("omega", n) for n in range(1, gamma.size + 1)])
    return _deadzone_sign(delta, width)


# ---------------------------------------------------------------------------
# periodic problem
# ---------------------------------------------------------------------------


def _side(gamma_n, left, right, closed, n, tol):
    if gamma_n is None:
        return None
    if closed:
        # a collapsed gap may hide a true width up to the gap-length tolerance
        width = 0.5 * tol.scaled("gap_length", n) + tol.scaled("deadzone", n)
        return "none" if abs(gamma_n - left) <= width else None
    dl, dr = abs(gamma_n - left), abs(gamma_n - right)
    width = tol.scaled("deadzone", n)
    if dr <= width and dr <= dl:
        return "right"
    if dl <= width:
        return "left"
    return None


def gaps(lam, lam_plus, gamma=None, tol=DEFAULT):
    """Gaps a_1, a_2, ... from the zeros of p (lam) and of p - 2 (lam_plus).

    a_2n = [lam_2n-1, lam_2n] and a_2n-1 = [lam+_2n-1, lam+_2n].  When
    ``gamma`` is supplied each gap records which endpoint carries gamma_n.
    """
    lam = np.asarray(lam, dtype=float)
    lam_plus = np.asarray(lam_plus, dtype=float)
    n_even = (lam.size - 1) // 2
    n_odd = lam_plus.size // 2
    out = []
    n = 1
    while True:
        if n % 2:
            k = (n + 1) // 2
            if k > n_odd:
                break
            left, right = lam_plus[2 * k - 2], lam_plus[2 * k - 1]
        else:
            k = n // 2
            if k > n_even:
                break
            left, right = lam[2 * k - 1], lam[2 * k]
        closed = right - left <= tol.scaled("gap_length", n)
        g = None if gamma is None or n > len(gamma) else float(gamma[n - 1])
        out.append(Gap(n, float(left), float(right), "closed" if closed else "open", _side(g, left, right, closed, n, tol)))
        n += 1
    return out


def e_sequence(gamma, gap_list, tol=DEFAULT):
    """epsilon_n: 0 on closed gaps, +1/-1 when gamma_n is the right/left endpoint.

    Raises ``NonSymmetricError`` when gamma_n is interior to an open gap
    (or away from a closed gap), which cannot happen for a symmetric potential.
    """
    eps = []
    for gap in gap_list:
        if gap.n > len(gamma):
            break
        side = _side(float(gamma[gap.n - 1]), gap.left, gap.right, gap.closed, gap.n, tol)
        if side is None:
            raise NonSymmetricError(
                f"gamma_{gap.n} = {gamma[gap.n - 1]:.10g} is not at an endpoint of "
                f"a_{gap.n} = [{gap.left:.10g}, {gap.right:.10g}]",
                index=gap.n,
            )
        eps.append({"right": 1, "left": -1, "none": 0}[side])
    return np.array(eps, dtype=int)


def periodic_spectrum(q, N, gamma=None, tol=DEFAULT, scheme="magnus4"):
    """Zeros of p = 1 - Delta and of p - 2, organised into the gaps a_1..a_N.

    Returns a ``BandSpectrum`` whose ``lam`` holds lam_0..lam_{2*floor(N/2)}
    and ``lam_plus`` holds lam+_1..lam+_{2*ceil(N/2)}.  Gaps whose length is
    within ``tol.gap_length`` are emitted as exact double roots.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if gamma is None or len(gamma) < N + 1:
        gamma = dirichlet_spectrum(q, N + 1, scheme)
    gamma = np.asarray(gamma, dtype=float)

    def D(lam):
        return integrate_fundamental(q, lam, scheme).Delta

    def dD(lam):
        return integrate_fundamental(q, lam, scheme).dDelta

    def D_fdf(level):
        def f(lam):
            e = integrate_fundamental(q, lam, scheme)
            return e.Delta - level, e.dDelta

        return f

    L = q.min - 1.0
    while D(L) <= 1.0:
        L -= max(1.0, abs(L))
    z = np.empty(N + 1)
    left = L
    for n in range(1, N + 2):
        z[n - 1] = bracket_root(D, left, gamma[n - 1])
        left = gamma[n - 1]

    lam0 = safeguarded_newton(D_fdf(1.0), L, z[0])
    lam = [lam0]
    lam_plus = []
    gap_list = []
    centers = np.empty(N)
    for n in range(1, N + 1):
        level = 1.0 if n % 2 == 0 else -1.0
        m = bracket_root(dD, z[n - 1], z[n])
        centers[n - 1] = m
        g = level * D(m) - 1.0
        if g <= tol.scaled("gap_value", n):
            lo = hi = m
        else:
            fdf = D_fdf(level)
            lo = safeguarded_newton(fdf, z[n - 1], m)
            hi = safeguarded_newton(fdf, m, z[n])
            if hi - lo <= tol.scaled("gap_length", n):
                lo = hi = m
        closed = lo == hi
        side = _side(float(gamma[n - 1]), lo, hi, closed, n, tol)
        gap_list.append(Gap(n, lo, hi, "closed" if closed else "open", side))
        (lam if n % 2 == 0 else lam_plus).extend([lo, hi])

    omega = omega_sequence(q, gamma[:N], tol, scheme)
    eps = None
    if all(gp.gamma_side is not None for gp in gap_list):
        eps = e_sequence(gamma, gap_list, tol)
    return BandSpectrum(
        np.array(lam), np.array(lam_plus), tuple(gap_list), gamma[:N], omega, eps, centers
    )


# ---------------------------------------------------------------------------
# Robin-coupled problem (a, b)
# ---------------------------------------------------------------------------


def _bvpb_lower(q, a, b):
    c = abs(a) + abs(b)
    return q.min - 4.0 * c * c - 4.0 * c / math.pi - 1.0


def bvpb_spectrum(q, a, b, N, tol=DEFAULT, scheme="magnus4", check_symmetric=True):
    """Eigenvalues mu_0..mu_N, zeros nu_0..nu_N of theta(pi, .) and the eta-sequence.

    Boundary conditions: y'(0) - a y(0) + b y(pi) = 0, y'(pi) + a y(pi) - b y(0) = 0.
    """
    a, b = float(a), float(b)
    if b == 0.0:
        raise ValueError("b must be nonzero")
    if check_symmetric and not q.symmetric:
        raise ValueError("the Robin-coupled problem is posed for symmetric potentials")

    def rfun(lam):
        e = integrate_fundamental(q, lam, scheme)
        return e.r(a, b), e.dr(a, b)

    def drfun(lam):
        return integrate_fundamental(q, lam, scheme).dr(a, b)

    L = _bvpb_lower(q, a, b)
    while rfun(L)[0] >= 0.0:
        L -= max(1.0, abs(L))
    s_max = math.sqrt(max(N + 3.0, 4.0) ** 2 + abs(q.max) + 4.0 * abs(b) + 4.0 * abs(a) + 10.0 - L)
    mu, mult = [], []
    for _ in range(20):
        _check_resolution(q, L + s_max * s_max)
        s = np.arange(0.0, s_max, 0.02)
        grid = L + s * s
        e = integrate_fundamental(q, grid, scheme)
        dr = e.dr(a, b)
        crit = [
            bracket_root(drfun, grid[i], grid[i + 1])
            for i in np.nonzero(np.sign(dr[:-1]) * np.sign(dr[1:]) < 0)[0]
        ]
        pts = [grid[0]] + crit + [grid[-1]]
        vals = [rfun(x)[0] for x in pts]
        double = [False] + [abs(v) <= tol.gap_value * (1.0 + abs(x)) for x, v in zip(crit, vals[1:-1])] + [False]
        vals = [0.0 if dbl else v for v, dbl in zip(vals, double)]
        mu, mult = [], []
        for k in range(len(pts) - 1):
            if double[k]:
                mu.append(pts[k])
                mult.append(2)
            if vals[k] * vals[k + 1] < 0.0:
                mu.append(safeguarded_newton(rfun, pts[k], pts[k + 1], vals[k], vals[k + 1]))
                mult.append(1)
        # expand doubles so mu_n is indexed with multiplicity
        mu = np.repeat(mu, mult)
        mult = np.repeat(mult, mult)
        if mu.size >= N + 1:
            break
        s_max *= 1.3
    else:
        raise SolverError("could not bracket the requested Robin-coupled eigenvalues")
    mu, mult = mu[: N + 1], mult[: N + 1]

    h = 4.0 * a + math.pi * q.mean
    n = np.arange(mu.size)
    model = n * n + (h + np.where(n % 2 == 1, 4.0 * b, -4.0 * b)) / math.pi
    tail = n >= max(2, mu.size // 2)
    if np.any(np.abs(mu - model)[tail] > np.maximum(n[tail], 10)):
        raise SolverError("root count does not match the asymptotic distribution of mu_n")

    nu = robin_dirichlet_spectrum(q, a, N + 1, scheme)
    thp = np.atleast_1d(integrate_fundamental(q, nu, scheme).theta_prime(a))
    width = np.array([tol.scaled("deadzone", k) for k in range(nu.size)])
    eta = _deadzone_sign(np.abs(thp) - abs(b), width)
    return BvpBSpectrum(a, b, h, mu, nu, eta, mult)
