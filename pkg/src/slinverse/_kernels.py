"""Transfer-matrix kernels for -y'' + q y = lam y on a uniform grid.

Each cell [x_i, x_i + h] is advanced with the fourth-order Magnus
exponential built from the potential at the two Gauss-Legendre points
(``qa`` and ``qb``).  Passing ``qa == qb`` (the midpoint value) gives the
second-order piecewise-constant scheme.  The cell exponent is traceless,

    Omega = [[k, h], [h * v, -k]],   k = sqrt(3)/12 h^2 (qa - qb),
                                     v = (qa + qb)/2 - lam,

so ``exp(Omega) = c(z) I + s(z) Omega`` with ``z = k^2 + h^2 v`` and
``c = cosh(sqrt z)``, ``s = sinh(sqrt z)/sqrt z`` (trigonometric for z < 0).

Two implementations live here: numba ``@njit`` loops and a pure-numpy path
vectorised over ``lam``.  ``SLINVERSE_BACKEND=numpy`` forces the latter.
"""

import math
import os

import numpy as np

SQRT3_12 = math.sqrt(3.0) / 12.0
_SERIES_Z = 1e-3

try:  # pragma: no cover - exercised implicitly by the backend switch
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def _select_backend():
    want = os.environ.get("SLINVERSE_BACKEND", "").strip().lower()
    if want == "numpy":
        return "numpy"
    if want == "numba" and not _HAVE_NUMBA:
        raise ImportError("SLINVERSE_BACKEND=numba but numba is not installed")
    return "numba" if _HAVE_NUMBA else "numpy"


BACKEND = _select_backend()


# ---------------------------------------------------------------------------
# numpy path
# ---------------------------------------------------------------------------


def _coeffs_np(z):
    """c(z), s(z) and their z-derivatives, elementwise."""
    z = np.asarray(z, dtype=float)
    c = np.empty_like(z)
    s = np.empty_like(z)
    ds = np.empty_like(z)
    pos = z > _SERIES_Z
    neg = z < -_SERIES_Z
    mid = ~(pos | neg)
    if pos.any():
        r = np.sqrt(z[pos])
        c[pos] = np.cosh(r)
        s[pos] = np.sinh(r) / r
    if neg.any():
        r = np.sqrt(-z[neg])
        c[neg] = np.cos(r)
        s[neg] = np.sin(r) / r
    big = pos | neg
    if big.any():
        ds[big] = (c[big] - s[big]) / (2.0 * z[big])
    if mid.any():
        t = z[mid]
        c[mid] = 1.0 + t * (0.5 + t * (1.0 / 24 + t * (1.0 / 720 + t / 40320.0)))
        s[mid] = 1.0 + t * (1.0 / 6 + t * (1.0 / 120 + t * (1.0 / 5040 + t / 362880.0)))
        ds[mid] = 1.0 / 6 + t * (1.0 / 60 + t * (1.0 / 1680 + t / 90720.0))
    return c, s, 0.5 * s, ds


def _cells_np(qa, qb, h, lam):
    """Cell matrices and their lam-derivatives, shape (ncell, nlam) each entry."""
    qa = np.asarray(qa, dtype=float)[:, None]
    qb = np.asarray(qb, dtype=float)[:, None]
    lam = np.asarray(lam, dtype=float)[None, :]
    kap = SQRT3_12 * h * h * (qa - qb)
    v = 0.5 * (qa + qb) - lam
    z = kap * kap + h * h * v
    c, s, dc, ds = _coeffs_np(z)
    h2 = h * h
    e00 = c + s * kap
    e01 = s * h
    e10 = s * h * v
    e11 = c - s * kap
    d00 = -(dc + ds * kap) * h2
    d01 = -ds * h * h2
    d10 = -ds * h * v * h2 - s * h
    d11 = -(dc - ds * kap) * h2
    return (e00, e01, e10, e11), (d00, d01, d10, d11)


def _mul(a, b):
    a00, a01, a10, a11 = a
    b00, b01, b10, b11 = b
    return (
        a00 * b00 + a01 * b10,
        a00 * b01 + a01 * b11,
        a10 * b00 + a11 * b10,
        a10 * b01 + a11 * b11,
    )


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def transfer_numpy(qa, qb, h, lam):
    """Fundamental matrix at x = pi and its lam-derivative.

    Returns an array of shape (nlam, 8): C, S, C', S', dC, dS, dC', dS'.
    Cells are combined by pairwise (tree) reduction so the Python loop is
    only log2(ncell) deep.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty((lam.size, 8))
    for start in range(0, lam.size, 256):
        chunk = lam[start:start + 256]
        e, d = _cells_np(qa, qb, h, chunk)
        while e[0].shape[0] > 1:
            m = e[0].shape[0]
            odd = m % 2
            lo = tuple(x[0:m - odd:2] for x in e)
            hi = tuple(x[1:m:2] for x in e)
            dlo = tuple(x[0:m - odd:2] for x in d)
            dhi = tuple(x[1:m:2] for x in d)
            ne = _mul(hi, lo)
            nd = _add(_mul(dhi, lo), _mul(hi, dlo))
            if odd:
                ne = tuple(np.concatenate([x, y[-1:]]) for x, y in zip(ne, e))
                nd = tuple(np.concatenate([x, y[-1:]]) for x, y in zip(nd, d))
            e, d = ne, nd
        # columns: [C, S; C', S'] and derivatives
        out[start:start + chunk.size] = np.stack(
            [e[0][0], e[1][0], e[2][0], e[3][0], d[0][0], d[1][0], d[2][0], d[3][0]],
            axis=1,
        )
    return out


def trajectory_numpy(qa, qb, h, lam, y0, yp0, reverse):
    (e00, e01, e10, e11), _ = _cells_np(qa, qb, h, [lam])
    e00, e01, e10, e11 = e00[:, 0], e01[:, 0], e10[:, 0], e11[:, 0]
    m = e00.size
    y = np.empty(m + 1)
    yp = np.empty(m + 1)
    if not reverse:
        y[0], yp[0] = y0, yp0
        for i in range(m):
            y[i + 1] = e00[i] * y[i] + e01[i] * yp[i]
            yp[i + 1] = e10[i] * y[i] + e11[i] * yp[i]
    else:
        # inverse of a unimodular 2x2 matrix
        y[m], yp[m] = y0, yp0
        for i in range(m - 1, -1, -1):
            y[i] = e11[i] * y[i + 1] - e01[i] * yp[i + 1]
            yp[i] = -e10[i] * y[i + 1] + e00[i] * yp[i + 1]
    return y, yp


def count_zeros_numpy(qa, qb, h, lam, y0, yp0):
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    (e00, e01, e10, e11), _ = _cells_np(qa, qb, h, lam)
    m = e00.shape[0]
    y = np.full(lam.size, float(y0))
    yp = np.full(lam.size, float(yp0))
    sgn = np.sign(y0) if y0 != 0.0 else np.sign(yp0)
    last = np.full(lam.size, sgn)
    count = np.zeros(lam.size, dtype=np.int64)
    for i in range(m):
        y, yp = e00[i] * y + e01[i] * yp, e10[i] * y + e11[i] * yp
        s = np.sign(y)
        flip = (s != 0) & (s != last)
        count += flip
        last = np.where(s != 0, s, last)
    return count


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _coeffs_nb(z):
        if z > _SERIES_Z:
            r = math.sqrt(z)
            c = math.cosh(r)
            s = math.sinh(r) / r
            ds = (c - s) / (2.0 * z)
        elif z < -_SERIES_Z:
            r = math.sqrt(-z)
            c = math.cos(r)
            s = math.sin(r) / r
            ds = (c - s) / (2.0 * z)
        else:
            c = 1.0 + z * (0.5 + z * (1.0 / 24 + z * (1.0 / 720 + z / 40320.0)))
            s = 1.0 + z * (1.0 / 6 + z * (1.0 / 120 + z * (1.0 / 5040 + z / 362880.0)))
            ds = 1.0 / 6 + z * (1.0 / 60 + z * (1.0 / 1680 + z / 90720.0))
        return c, s, 0.5 * s, ds

    @numba.njit(cache=True)
    def transfer_numba(qa, qb, h, lam):
        nl = lam.size
        m = qa.size
        out = np.empty((nl, 8))
        h2 = h * h
        for j in range(nl):
            p00, p01, p10, p11 = 1.0, 0.0, 0.0, 1.0
            d00, d01, d10, d11 = 0.0, 0.0, 0.0, 0.0
            lj = lam[j]
            for i in range(m):
                kap = SQRT3_12 * h2 * (qa[i] - qb[i])
                v = 0.5 * (qa[i] + qb[i]) - lj
                z = kap * kap + h2 * v
                c, s, dc, ds = _coeffs_nb(z)
                e00 = c + s * kap
                e01 = s * h
                e10 = s * h * v
                e11 = c - s * kap
                f00 = -(dc + ds * kap) * h2
                f01 = -ds * h * h2
                f10 = -ds * h * v * h2 - s * h
                f11 = -(dc - ds * kap) * h2
                n00 = f00 * p00 + f01 * p10 + e00 * d00 + e01 * d10
                n01 = f00 * p01 + f01 * p11 + e00 * d01 + e01 * d11
                n10 = f10 * p00 + f11 * p10 + e10 * d00 + e11 * d10
                n11 = f10 * p01 + f11 * p11 + e10 * d01 + e11 * d11
                d00, d01, d10, d11 = n00, n01, n10, n11
                n00 = e00 * p00 + e01 * p10
                n01 = e00 * p01 + e01 * p11
                n10 = e10 * p00 + e11 * p10
                n11 = e10 * p01 + e11 * p11
                p00, p01, p10, p11 = n00, n01, n10, n11
            out[j, 0] = p00
            out[j, 1] = p01
            out[j, 2] = p10
            out[j, 3] = p11
            out[j, 4] = d00
            out[j, 5] = d01
            out[j, 6] = d10
            out[j, 7] = d11
        return out

    @numba.njit(cache=True)
    def trajectory_numba(qa, qb, h, lam, y0, yp0, reverse):
        m = qa.size
        y = np.empty(m + 1)
        yp = np.empty(m + 1)
        h2 = h * h
        if not reverse:
            y[0] = y0
            yp[0] = yp0
            for i in range(m):
                kap = SQRT3_12 * h2 * (qa[i] - qb[i])
                v = 0.5 * (qa[i] + qb[i]) - lam
                c, s, dc, ds = _coeffs_nb(kap * kap + h2 * v)
                y[i + 1] = (c + s * kap) * y[i] + s * h * yp[i]
                yp[i + 1] = s * h * v * y[i] + (c - s * kap) * yp[i]
        else:
            y[m] = y0
            yp[m] = yp0
            for i in range(m - 1, -1, -1):
                kap = SQRT3_12 * h2 * (qa[i] - qb[i])
                v = 0.5 * (qa[i] + qb[i]) - lam
                c, s, dc, ds = _coeffs_nb(kap * kap + h2 * v)
                y[i] = (c - s * kap) * y[i + 1] - s * h * yp[i + 1]
                yp[i] = -s * h * v * y[i + 1] + (c + s * kap) * yp[i + 1]
        return y, yp

    @numba.njit(cache=True)
    def count_zeros_numba(qa, qb, h, lam, y0, yp0):
        nl = lam.size
        m = qa.size
        h2 = h * h
        out = np.zeros(nl, dtype=np.int64)
        if y0 != 0.0:
            sgn0 = 1.0 if y0 > 0 else -1.0
        else:
            sgn0 = 1.0 if yp0 > 0 else -1.0
        for j in range(nl):
            y = y0
            yp = yp0
            last = sgn0
            cnt = 0
            for i in range(m):
                kap = SQRT3_12 * h2 * (qa[i] - qb[i])
                v = 0.5 * (qa[i] + qb[i]) - lam[j]
                c, s, dc, ds = _coeffs_nb(kap * kap + h2 * v)
                ny = (c + s * kap) * y + s * h * yp
                yp = s * h * v * y + (c - s * kap) * yp
                y = ny
                if y > 0.0:
                    if last < 0.0:
                        cnt += 1
                    last = 1.0
                elif y < 0.0:
                    if last > 0.0:
                        cnt += 1
                    last = -1.0
            out[j] = cnt
        return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def transfer(qa, qb, h, lam, backend=None):
    backend = backend or BACKEND
    lam = np.ascontiguousarray(np.atleast_1d(lam), dtype=float)
    if backend == "numba":
        return transfer_numba(qa, qb, float(h), lam)
    return transfer_numpy(qa, qb, h, lam)


def trajectory(qa, qb, h, lam, y0, yp0, reverse=False, backend=None):
    backend = backend or BACKEND
    if backend == "numba":
        return trajectory_numba(qa, qb, float(h), float(lam), float(y0), float(yp0), bool(reverse))
    return trajectory_numpy(qa, qb, h, lam, y0, yp0, reverse)


def count_zeros(qa, qb, h, lam, y0, yp0, backend=None):
    """Sign changes of the solution over the nodes x_1..x_M (zeros in (0, pi))."""
    backend = backend or BACKEND
    lam = np.ascontiguousarray(np.atleast_1d(lam), dtype=float)
    if backend == "numba":
        return count_zeros_numba(qa, qb, float(h), lam, float(y0), float(yp0))
    return count_zeros_numpy(qa, qb, h, lam, y0, yp0)
