"""Finite-difference matrix eigenvalues, independent of the shooting solver.

Second-order central differences (equivalently, linear finite elements with a
lumped mass matrix) on a uniform mesh, followed by Richardson extrapolation
(4 E_2M - E_M) / 3.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import eigsh

from .errors import SolverError

CONDITIONS = ("dirichlet", "periodic", "antiperiodic_like", "bvpb")


@dataclass(frozen=True)
class DiscretizedOperator:
    condition: str
    M: int
    h: float
    matrix: sp.csr_matrix
    mass: np.ndarray
    lower: float


def _sample(q, x):
    return np.asarray(q(x), dtype=float) * np.ones_like(x)


def discretize(q, condition, M, a=0.0, b=0.0):
    """Symmetric matrix whose eigenvalues approximate the requested spectrum."""
    if condition not in CONDITIONS:
        raise ValueError(f"condition must be one of {CONDITIONS}")
    h = math.pi / M
    x = np.linspace(0.0, math.pi, M + 1)
    qx = _sample(q, x)
    inv = 1.0 / (h * h)
    if condition == "dirichlet":
        diag = 2.0 * inv + qx[1:-1]
        off = np.full(M - 2, -inv)
        A = sp.diags([off, diag, off], [-1, 0, 1], format="csr")
        mass = np.ones(M - 1)
    elif condition in ("periodic", "antiperiodic_like"):
        # nodes x_0..x_{M-1}; x_M is identified with x_0 (sign flip for the
        # antiperiodic coupling).  The node at 0 = pi carries the mean of the
        # one-sided values, which keeps second order if q(0) != q(pi).
        qn = qx[:-1].copy()
        qn[0] = 0.5 * (qx[0] + qx[-1])
        sign = 1.0 if condition == "periodic" else -1.0
        diag = 2.0 * inv + qn
        off = np.full(M - 1, -inv)
        A = sp.diags([off, diag, off], [-1, 0, 1], format="lil")
        A[0, M - 1] = -sign * inv
        A[M - 1, 0] = -sign * inv
        A = A.tocsr()
        mass = np.ones(M)
    else:
        # weak form: int y'v' + q y v + a (y0 v0 + yM vM) - b (y0 vM + yM v0)
        mass = np.full(M + 1, h)
        mass[0] = mass[-1] = 0.5 * h
        diag = np.full(M + 1, 2.0 / h) + qx * mass
        diag[0] = 1.0 / h + qx[0] * mass[0] + a
        diag[-1] = 1.0 / h + qx[-1] * mass[-1] + a
        off = np.full(M, -1.0 / h)
        A = sp.diags([off, diag, off], [-1, 0, 1], format="lil")
        A[0, M] = -b
        A[M, 0] = -b
        scale = 1.0 / np.sqrt(mass)
        A = sp.diags(scale) @ A.tocsr() @ sp.diags(scale)
        A = (0.5 * (A + A.T)).tocsr()
    c = abs(a) + abs(b)
    lower = float(qx.min()) - 4.0 * c * c - 4.0 * c / math.pi - 1.0
    return DiscretizedOperator(condition, M, h, A, mass, lower)


def _lowest(op, N):
    size = op.matrix.shape[0]
    if N > size - 2:
        raise SolverError(f"mesh too small for {N} eigenvalues")
    if op.condition == "dirichlet":
        d = op.matrix.diagonal()
        e = op.matrix.diagonal(1)
        return eigh_tridiagonal(d, e, select="i", select_range=(0, N - 1))[0]
    try:
        vals = eigsh(op.matrix, k=N, sigma=op.lower - 1.0, which="LM", v0=np.ones(size), return_eigenvectors=False)
    except Exception as exc:  # ARPACK failures surface as several exception types
        raise SolverError(f"eigen-decomposition failed: {exc}") from exc
    return np.sort(vals)


def matrix_spectrum(q, condition, M=2000, N=10, a=0.0, b=0.0, extrapolate=True):
    """Lowest N eigenvalues; Richardson-extrapolated from meshes M and 2M.

    ``q`` is a Potential or any callable on [0, pi].  For ``bvpb`` the
    coupling parameters ``a`` and ``b`` enter the boundary rows.
    """
    if M < 16 * N:
        raise ValueError(f"M must be >= 16 N (got M={M}, N={N})")
    coarse = _lowest(discretize(q, condition, M, a, b), N)
    if not extrapolate:
        return coarse
    fine = _lowest(discretize(q, condition, 2 * M, a, b), N)
    return (4.0 * fine - coarse) / 3.0
