"""Scalar root finding and maximisation on brackets."""

import math

from scipy.optimize import brentq

from .errors import SolverError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def safeguarded_newton(fdf, a, b, fa=None, fb=None, xtol=None, maxiter=100):
    """Root of f in [a, b] given f(a) f(b) <= 0.

    ``fdf(x)`` returns ``(f(x), f'(x))``.  Newton steps are taken from the
    current best point and replaced by bisection whenever they leave the
    bracket or fail to halve it.
    """
    if fa is None:
        fa = fdf(a)[0]
    if fb is None:
        fb = fdf(b)[0]
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise SolverError(f"no sign change on [{a!r}, {b!r}]", lam=a)
    if xtol is None:
        xtol = 4e-16 * max(1.0, abs(a), abs(b))
    lo, hi = (a, b) if fa < 0.0 else (b, a)
    x = 0.5 * (a + b)
    dx_old = abs(b - a)
    dx = dx_old
    f, df = fdf(x)
    for _ in range(maxiter):
        if f == 0.0:
            return x
        if f < 0.0:
            lo = x
        else:
            hi = x
        newton_ok = df != 0.0
        if newton_ok:
            step = f / df
            xn = x - step
            newton_ok = (min(lo, hi) < xn < max(lo, hi)) and abs(2.0 * step) <= dx_old
        if newton_ok:
            dx_old, dx = dx, abs(step)
            x = xn
        else:
            dx_old = dx
            x = 0.5 * (lo + hi)
            dx = 0.5 * abs(hi - lo)
        if dx <= xtol or abs(hi - lo) <= xtol:
            return x
        f, df = fdf(x)
    raise SolverError(f"safeguarded Newton did not converge near {x!r}", lam=x)


def bracket_root(f, a, b, xtol=None):
    """Derivative-free root on a sign-change bracket (Brent)."""
    if xtol is None:
        xtol = 1e-15 * max(1.0, abs(a), abs(b))
    return brentq(f, a, b, xtol=xtol, rtol=1e-15, maxiter=200)


def golden_max(f, a, b, tol=1e-10, maxiter=200):
    """Maximise a unimodal f on [a, b]; returns (argmax, max)."""
    if b < a:
        a, b = b, a
    if b - a <= tol:
        x = 0.5 * (a + b) if b > a else a
        return x, f(x)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    # endpoints are included so a monotone f returns its boundary maximum
    cands = [(fc, c), (fd, d), (f(a), a), (f(b), b)]
    fbest, xbest = max(cands)
    return xbest, fbest
