"""Potentials sampled on a uniform grid of [0, pi]."""

import json
import math

import numpy as np
from scipy.interpolate import CubicSpline

from .tolerances import DEFAULT

_GAUSS_OFFSET = math.sqrt(3.0) / 6.0


class Potential:
    """Real potential q on (0, pi) given by samples at M+1 uniform nodes.

    Between nodes the potential is the not-a-knot cubic spline through the
    samples; the spline is symmetric whenever the samples are.  Instances are
    immutable.

    Parameters
    ----------
    values : array_like
        Samples q(x_i), x_i = i*pi/M, i = 0..M, with M >= 8.
    symmetric : bool
        Claim that q(x) = q(pi - x).  The claim is certified against
        ``tol.symmetry`` and a ``ValueError`` is raised if it fails.
    """

    __slots__ = ("values", "M", "grid", "h", "mean", "symmetric", "_spline", "_qa", "_qb", "_qmid")

    def __init__(self, values, symmetric=False, tol=DEFAULT):
        values = np.array(values, dtype=float)
        if values.ndim != 1:
            raise ValueError("potential values must be one-dimensional")
        M = values.size - 1
        if M < 8:
            raise ValueError(f"need at least 9 samples (M >= 8), got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("potential values must be finite")
        values.setflags(write=False)
        grid = np.linspace(0.0, math.pi, M + 1)
        grid.setflags(write=False)
        h = math.pi / M
        set_ = object.__setattr__
        set_(self, "values", values)
        set_(self, "M", M)
        set_(self, "grid", grid)
        set_(self, "h", h)
        set_(self, "mean", float(np.trapezoid(values, grid) / math.pi))
        if symmetric and not symmetry_defect(values) <= tol.symmetry * (1.0 + np.max(np.abs(values))):
            raise ValueError(
                f"values are not symmetric: defect {symmetry_defect(values):.3e}"
            )
        set_(self, "symmetric", bool(symmetric))
        spline = CubicSpline(grid, values)
        set_(self, "_spline", spline)
        left = grid[:-1]
        qa = spline(left + h * (0.5 - _GAUSS_OFFSET))
        qb = spline(left + h * (0.5 + _GAUSS_OFFSET))
        qmid = spline(left + 0.5 * h)
        for arr in (qa, qb, qmid):
            arr.setflags(write=False)
        set_(self, "_qa", qa)
        set_(self, "_qb", qb)
        set_(self, "_qmid", qmid)

    def __setattr__(self, name, value):
        raise AttributeError("Potential is immutable")

    def __repr__(self):
        return f"Potential(M={self.M}, mean={self.mean:.6g}, symmetric={self.symmetric})"

    @classmethod
    def from_function(cls, f, M=1024, symmetric=None, tol=DEFAULT):
        """Sample ``f`` on the grid.  ``symmetric=None`` certifies automatically."""
        x = np.linspace(0.0, math.pi, M + 1)
        values = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
        if symmetric is None:
            symmetric = is_symmetric(values, tol)
        return cls(values, symmetric=symmetric, tol=tol)

    @classmethod
    def constant(cls, c, M=1024):
        return cls(np.full(M + 1, float(c)), symmetric=True)

    def __call__(self, x):
        return self._spline(x)

    def cell_values(self, scheme="magnus4"):
        """Potential values used by the transfer-matrix scheme on each cell."""
        if scheme == "magnus4":
            return self._qa, self._qb
        if scheme == "midpoint":
            return self._qmid, self._qmid
        raise ValueError(f"unknown scheme {scheme!r}")

    @property
    def min(self):
        return float(min(self.values.min(), self._qa.min(), self._qb.min()))

    @property
    def max(self):
        return float(max(self.values.max(), self._qa.max(), self._qb.max()))

    def symmetrized(self):
        return Potential(0.5 * (self.values + self.values[::-1]), symmetric=True)

    def resample(self, M):
        x = np.linspace(0.0, math.pi, M + 1)
        vals = self(x)
        if self.symmetric:
            vals = 0.5 * (vals + vals[::-1])
        return Potential(vals, symmetric=self.symmetric)

    def l2_distance(self, other, n=8193):
        """L2(0, pi) norm of self - other (other: Potential or callable)."""
        x = np.linspace(0.0, math.pi, n)
        diff = self(x) - (other(x) if callable(other) else other)
        return float(math.sqrt(np.trapezoid(diff * diff, x)))

    # -- JSON ------------------------------------------------------------

    def to_dict(self):
        return {"M": self.M, "values": [float(v) for v in self.values], "symmetric": self.symmetric}

    @classmethod
    def from_dict(cls, data, tol=DEFAULT):
        try:
            M = int(data["M"])
            values = data["values"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"potential file is missing field {exc}") from None
        if len(values) != M + 1:
            raise ValueError(f"potential file has {len(values)} values, expected M+1 = {M + 1}")
        return cls(values, symmetric=bool(data.get("symmetric", False)), tol=tol)

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path, tol=DEFAULT):
        with open(path) as fh:
            return cls.from_dict(json.load(fh), tol=tol)


def symmetry_defect(values):
    values = np.asarray(values, dtype=float)
    return float(np.max(np.abs(values - values[::-1])))


def is_symmetric(values, tol=DEFAULT):
    values = np.asarray(values, dtype=float)
    return symmetry_defect(values) <= tol.symmetry * (1.0 + np.max(np.abs(values)))
