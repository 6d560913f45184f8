"""Fundamental solutions C, S, psi, theta and the endpoint quantities.

C and S solve -y'' + q y = lam y with C(0)=1, C'(0)=0 and S(0)=0, S'(0)=1;
psi is normalised at the right end, psi(pi)=0, psi'(pi)=-1; theta carries a
Robin parameter, theta(0)=1, theta'(0)=a.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import SolverError


@dataclass(frozen=True)
class EndpointData:
    """Values of C, S and their x-derivatives at x = pi.

    Fields may be scalars or arrays (one entry per lam).  The ``d*`` fields
    hold lam-derivatives, e.g. ``dS_pi`` is the derivative of S(pi, lam).
    """

    lam: object
    C_pi: object
    Cprime_pi: object
    S_pi: object
    Sprime_pi: object
    dC_pi: object = None
    dCprime_pi: object = None
    dS_pi: object = None
    dSprime_pi: object = None

    @property
    def Delta(self):
        return 0.5 * (self.C_pi + self.Sprime_pi)

    @property
    def delta(self):
        return 0.5 * (self.C_pi - self.Sprime_pi)

    @property
    def p(self):
        return 1.0 - self.Delta

    @property
    def p_plus(self):
        return self.p - 2.0

    @property
    def d(self):
        return self.S_pi

    @property
    def d1(self):
        return self.Cprime_pi

    @property
    def dDelta(self):
        return 0.5 * (self.dC_pi + self.dSprime_pi)

    @property
    def ddot(self):
        """lam-derivative of d(lam) = S(pi, lam)."""
        return self.dS_pi

    def wronskian(self):
        return self.C_pi * self.Sprime_pi - self.Cprime_pi * self.S_pi

    def wronskian_residual(self):
        return np.abs(self.wronskian() - 1.0)

    def discriminant_residual(self):
        D, dl = self.Delta, self.delta
        return np.abs(D * D - dl * dl - self.d * self.d1 - 1.0)

    # theta = C + a S
    def theta(self, a):
        return self.C_pi + a * self.S_pi

    def theta_prime(self, a):
        return self.Cprime_pi + a * self.Sprime_pi

    def r(self, a, b):
        """Characteristic function of the Robin-coupled problem with (a, b)."""
        return -self.theta_prime(a) - a * self.theta(a) + b * b * self.S_pi + 2.0 * b

    def dr(self, a, b):
        dth = self.dC_pi + a * self.dS_pi
        dthp = self.dCprime_pi + a * self.dSprime_pi
        return -dthp - a * dth + b * b * self.dS_pi


@dataclass(frozen=True)
class SolutionSample:
    x: np.ndarray
    y: np.ndarray
    yprime: np.ndarray
    kind: str
    lam: float
    robin_a: float = None


def integrate_fundamental(q, lam, scheme="magnus4"):
    """Propagate C and S from 0 to pi.

    ``lam`` may be a scalar or an array; the returned fields match its shape.
    lam-derivatives are propagated alongside (exact derivatives of the
    discrete scheme).
    """
    scalar = np.ndim(lam) == 0
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    if not np.all(np.isfinite(lam_arr)):
        raise SolverError("lambda must be finite", lam=lam)
    qa, qb = q.cell_values(scheme)
    out = _kernels.transfer(qa, qb, q.h, lam_arr)
    if not np.all(np.isfinite(out)):
        bad = lam_arr[~np.all(np.isfinite(out), axis=1)]
        raise SolverError(f"transfer matrix overflow at lambda={bad[0]!r}", lam=float(bad[0]))
    cols = [out[:, k] for k in range(8)]
    if scalar:
        cols = [float(c[0]) for c in cols]
        lam_out = float(lam_arr[0])
    else:
        lam_out = lam_arr
    return EndpointData(lam_out, cols[0], cols[2], cols[1], cols[3], cols[4], cols[6], cols[5], cols[7])


_INITIAL = {"C": (1.0, 0.0), "S": (0.0, 1.0), "psi": (0.0, -1.0)}


def eval_solution(q, lam, kind, robin_a=None, scheme="magnus4"):
    """Sample one of C, S, psi, theta on the potential's grid."""
    if kind == "theta":
        if robin_a is None:
            raise ValueError("kind='theta' needs robin_a")
        init = (1.0, float(robin_a))
    else:
        if robin_a is not None:
            raise ValueError("robin_a is only used with kind='theta'")
        if kind not in _INITIAL:
            raise ValueError(f"unknown solution kind {kind!r}")
        init = _INITIAL[kind]
    qa, qb = q.cell_values(scheme)
    y, yp = _kernels.trajectory(qa, qb, q.h, float(lam), init[0], init[1], reverse=(kind == "psi"))
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(yp))):
        raise SolverError(f"solution overflow at lambda={lam!r}", lam=lam)
    return SolutionSample(q.grid, y, yp, kind, float(lam), robin_a)


def wronskian_residual(q, lam, scheme="magnus4"):
    """|<C, S>(pi) - 1|."""
    return integrate_fundamental(q, lam, scheme).wronskian_residual()


def count_zeros(q, lam, y0, yp0, scheme="magnus4"):
    """Number of zeros in (0, pi) of the solution with y(0)=y0, y'(0)=yp0."""
    qa, qb = q.cell_values(scheme)
    return _kernels.count_zeros(qa, qb, q.h, lam, y0, yp0)
