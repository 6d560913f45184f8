"""Characteristic functions rebuilt from their zeros.

Each product is evaluated as a ratio against the constant potential q = s,
whose characteristic function is known in closed form:

    d_s(lam) = sin(rho pi) / rho
    p_s(lam) = 2 sin^2(rho pi / 2)
    r_s(lam) = rho sin(rho pi)          (a = 0, b = 0 limit)

with rho^2 = lam - s.  Retained factors become (z_k - lam) / (z0_k - lam),
which tend to one, so truncation only loses the small remainders of the
zeros beyond the last retained one.  The shift s is fitted from the upper
half of the zeros.
"""

import math
from dataclasses import dataclass

import numpy as np

from .roots import golden_max

KINDS = ("p", "d", "r")
MODELS = ("eq4", "eq8", "eq9", "eq12", "eq26")


def _sinc_sq_arg(w):
    """sin(pi sqrt(w)) / (pi sqrt(w)), continued to w < 0 as sinh."""
    if w >= 0.0:
        return float(np.sinc(math.sqrt(w)))
    x = math.pi * math.sqrt(-w)
    return math.sinh(x) / x


@dataclass(frozen=True)
class AsymptoticFit:
    model: str
    params: dict
    index: np.ndarray
    kappa: np.ndarray
    decay_ratio: float
    diverging: bool


def _decay(index, kappa):
    """Mean |kappa_2n| / mean |kappa_n| over the indices where both exist."""
    pos = {int(n): abs(k) for n, k in zip(index, kappa)}
    pairs = [(pos[n], pos[2 * n]) for n in pos if 2 * n in pos and n > 0]
    if not pairs:
        return float("nan")
    a, b = np.array(pairs).T
    base = a.mean()
    if base < 1e-9:  # remainders already at rounding level
        return 0.0
    return float(b.mean() / base)


def asymptotic_fit(seq, model):
    """Least-squares fit of an asymptotic model; returns constants and remainders.

    eq4   lambda_0..lambda_2N  ~ (2n)^2 + alpha      (pairs 2n-1, 2n)
    eq8   lambda+_1..lambda+_2N ~ (2n-1)^2 + alpha   (pairs 2n-1, 2n)
    eq9   gamma_1..gamma_N ~ n^2 + alpha
    eq12  alpha_1..alpha_N ~ c pi/(2 n^2) (1 + kappa_n / n)
    eq26  mu_0..mu_N ~ n^2 + (h + (-1)^(n+1) 4b)/pi

    Only the upper half of the indices enters the fit.
    """
    seq = np.asarray(seq, dtype=float)
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if seq.size < 16:
        raise ValueError("asymptotic fit needs at least 16 terms")
    if model == "eq4":
        index = np.arange(1, seq.size)
        base = (2.0 * ((index + 1) // 2)) ** 2
        resid = seq[1:] - base
    elif model == "eq8":
        index = np.arange(1, seq.size + 1)
        base = (2.0 * ((index + 1) // 2) - 1.0) ** 2
        resid = seq - base
    elif model == "eq9":
        index = np.arange(1, seq.size + 1)
        resid = seq - index.astype(float) ** 2
    elif model == "eq12":
        index = np.arange(1, seq.size + 1)
        scaled = seq * 2.0 * index ** 2 / math.pi
        upper = index > index.size // 2
        c = float(scaled[upper].mean())
        kappa = index * (scaled / c - 1.0)
        ratio = _decay(index, kappa)
        return AsymptoticFit(model, {"scale": c}, index, kappa, ratio, bool(ratio > 1.0))
    else:
        index = np.arange(seq.size)
        resid = seq - index.astype(float) ** 2
        upper = index >= index.size // 2
        alt = np.where(index % 2 == 1, 1.0, -1.0)
        A = np.column_stack([np.ones(upper.sum()), alt[upper]])
        (c0, c1), *_ = np.linalg.lstsq(A, resid[upper], rcond=None)
        kappa = resid - c0 - c1 * alt
        ratio = _decay(index, kappa)
        params = {"h": float(math.pi * c0), "b": float(math.pi * c1 / 4.0), "shift": float(c0), "alt": float(c1)}
        return AsymptoticFit(model, params, index, kappa, ratio, bool(ratio > 1.0))
    upper = index > index.max() // 2
    alpha = float(resid[upper].mean())
    kappa = resid - alpha
    ratio = _decay(index, kappa)
    return AsymptoticFit(model, {"alpha": alpha}, index, kappa, ratio, bool(ratio > 1.0))


def _shift_fit(kref, resid, alternating):
    """Fit resid ~ s + c2/k^2 + c4/k^4 (+ (-1)^(k+1) beta) over the upper half.

    Returns (s, (c2, c4), beta).
    """
    upper = np.arange(kref.size) >= kref.size // 2
    kk = kref[upper] ** 2
    cols = [np.ones(upper.sum()), 1.0 / kk, 1.0 / kk ** 2]
    k = np.arange(1, kref.size + 1)[upper]
    if alternating:
        cols.append(np.where(k % 2 == 1, 1.0, -1.0))
    coef, *_ = np.linalg.lstsq(np.column_stack(cols), resid[upper], rcond=None)
    return float(coef[0]), (float(coef[1]), float(coef[2])), float(coef[3]) if alternating else 0.0


class ProductEvaluator:
    """Evaluate p, d or r from its zeros.

    kind "d": zeros gamma_1, gamma_2, ...
    kind "p": zeros lambda_0, lambda_1, ... (lambda_2k-1, lambda_2k near (2k)^2)
    kind "r": zeros mu_0, mu_1, ...
    ``n_terms`` counts retained zeros (lambda_0 and mu_0 included).
    """

    def __init__(self, kind, zeros, n_terms=200, shift=None, tail_terms=20000):
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        zeros = np.asarray(zeros, dtype=float)
        if np.any(np.diff(zeros) < 0):
            raise ValueError("zeros must be sorted")
        n_terms = min(int(n_terms), zeros.size)
        if kind == "p" and n_terms % 2 == 0:
            n_terms -= 1
        if n_terms < 16:
            raise ValueError("at least 16 zeros are required")
        self.kind = kind
        self.zeros = zeros[:n_terms].copy()
        self.n_terms = n_terms
        self.alt = 0.0
        if kind == "d":
            self._z = self.zeros[:, None]
            self._k = np.arange(1, n_terms + 1)
            self._step = 1
            self._lead = None
        elif kind == "p":
            self._z = np.column_stack([self.zeros[1::2], self.zeros[2::2]])
            self._k = np.arange(1, self._z.shape[0] + 1)
            self._step = 2
            self._lead = self.zeros[0]
        else:
            self._z = self.zeros[1:, None]
            self._k = np.arange(1, n_terms)
            self._step = 1
            self._lead = self.zeros[0]
            self.alt = 1.0
        kref = (self._step * self._k).astype(float)
        resid = self._z.mean(axis=1) - kref ** 2
        s_fit, self.curv, alt_fit = _shift_fit(kref, resid, self.alt != 0.0)
        if kind == "r":
            self.alt = alt_fit
        self.shift = float(s_fit if shift is None else shift)
        self._z0 = kref ** 2 + self.shift
        self._mult = self._z.shape[1]
        self.last_zero = float(self.zeros[-1])
        kmax = int(self._k[-1])
        self.validated_max = float((self._step * max(4, kmax // 4)) ** 2 + self.shift)
        # a quarter of the way to the next reference zero is still well defined
        self.eval_limit = self.last_zero + 0.25 * self._step ** 2 * (2 * kmax + 1)
        self._tail_k = np.arange(kmax + 1, kmax + 1 + tail_terms, dtype=float)

    # base function divided by the reference factor(s) at index k (0 = none)
    def _reduced(self, lam, k):
        w = lam - self.shift
        if self.kind == "p":
            base = 0.5 * math.pi ** 2 * _sinc_sq_arg(w / 4.0) ** 2
        else:
            base = math.pi * _sinc_sq_arg(w)
        if k == 0:
            return base
        z0 = float(self._step * k) ** 2
        if w <= 0.25 * z0:
            return base / (z0 - w) ** self._mult
        rho = math.sqrt(w)
        m = self._step * k
        u = (w - z0) / (rho + m)
        if self.kind == "p":
            return 0.5 * math.pi ** 2 * float(np.sinc(u / 2.0)) ** 2 / (rho * (m + rho)) ** 2
        return -((-1) ** m) * math.pi * float(np.sinc(u)) / (rho * (m + rho))

    def _nearest(self, lam):
        w = lam - self.shift
        if w <= 0:
            return 0
        k = int(round(math.sqrt(w) / self._step))
        return k if 1 <= k <= self._k[-1] else 0

    def _factors(self, lam, skip):
        num = np.prod(self._z - lam, axis=1)
        den = (self._z0 - lam) ** self._mult
        if skip:
            num = num.copy()
            den = den.copy()
            num[skip - 1] = 1.0
            den[skip - 1] = 1.0
        return float(np.prod(num / den))

    def _tail(self, lam):
        # zeros beyond the last retained one follow the fitted model
        k = self._tail_k
        kk = (self._step * k) ** 2
        m = self.curv[0] / kk + self.curv[1] / kk ** 2
        if self.alt:
            m = m + np.where(k % 2 == 1, self.alt, -self.alt)
        return float(np.exp(self._mult * np.sum(np.log1p(m / (kk + self.shift - lam)))))

    def _check(self, lam):
        if not np.isfinite(lam):
            raise ValueError("lambda must be finite")
        if lam > self.eval_limit:
            raise ValueError(
                f"lambda={lam:.6g} too far beyond the last retained zero {self.last_zero:.6g}"
            )

    def eval(self, lam):
        """Product value at a real lambda (scalar or array)."""
        if np.ndim(lam):
            return np.array([self.eval(float(x)) for x in np.ravel(lam)]).reshape(np.shape(lam))
        lam = float(lam)
        self._check(lam)
        k = self._nearest(lam)
        val = self._reduced(lam, k) * self._factors(lam, k) * self._tail(lam)
        if k:
            val *= float(np.prod(self._z[k - 1] - lam))
        if self._lead is not None:
            val *= lam - self._lead
        return val

    __call__ = eval

    def d_dot(self, n):
        """Derivative of d at gamma_n (one-factor-removed product)."""
        if self.kind != "d":
            raise ValueError("d_dot requires kind='d'")
        if not 1 <= n <= self._k[-1]:
            raise IndexError(n)
        g = float(self.zeros[n - 1])
        others = np.delete(self.zeros, n - 1)
        if np.any(others == g):
            raise ValueError(f"repeated gamma_{n}")
        return -self._reduced(g, n) * self._factors(g, n) * self._tail(g)

    def d_dot_all(self, count=None):
        count = self._k[-1] if count is None else count
        return np.array([self.d_dot(n) for n in range(1, count + 1)])


@dataclass(frozen=True)
class ConditionReport:
    name: str
    index: np.ndarray
    maxima: np.ndarray
    margins: np.ndarray
    threshold: float
    passed: bool

    @property
    def worst(self):
        return float(self.margins.min()) if self.margins.size else float("inf")


def check_condition6(lambda_seq, n_terms=200, tol=1e-6, ev=None):
    """max of p over [lambda_2n, lambda_2n+1] must reach 2, for n in the validated range."""
    ev = ev or ProductEvaluator("p", lambda_seq, n_terms)
    lam = ev.zeros
    idx, maxima = [], []
    n = 0
    while 2 * n + 1 < lam.size and lam[2 * n + 1] <= ev.validated_max:
        _, m = golden_max(ev.eval, lam[2 * n], lam[2 * n + 1])
        idx.append(n)
        maxima.append(m)
        n += 1
    maxima = np.array(maxima)
    margins = maxima - 2.0
    return ConditionReport("6", np.array(idx), maxima, margins, -tol, bool(np.all(margins >= -tol)))


def q_intervals(mu, b):
    """Endpoints of Q_n: [mu_2n, mu_2n+1] for b > 0, [mu_2n-1, mu_2n] for b < 0."""
    mu = np.asarray(mu)
    out = []
    n = 0 if b > 0 else 1
    while True:
        lo, hi = (2 * n, 2 * n + 1) if b > 0 else (2 * n - 1, 2 * n)
        if hi >= mu.size:
            break
        out.append((n, lo, hi))
        n += 1
    return out


def check_condition28(mu_seq, b, n_terms=200, tol=1e-6, ev=None):
    """max of |r| over Q_n must reach |4b|."""
    ev = ev or ProductEvaluator("r", mu_seq, n_terms)
    mu = ev.zeros
    idx, maxima = [], []
    for n, lo, hi in q_intervals(mu, b):
        if mu[hi] > ev.validated_max:
            break
        _, m = golden_max(lambda x: abs(ev.eval(x)), mu[lo], mu[hi])
        idx.append(n)
        maxima.append(m)
    maxima = np.array(maxima)
    margins = maxima - abs(4.0 * b)
    return ConditionReport("28", np.array(idx), maxima, margins, -tol, bool(np.all(margins >= -tol)))
