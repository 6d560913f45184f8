"""Command-line front end: forward, inverse, verify, roundtrip.

Every command writes one JSON record per check to stdout and a short human
summary to stderr.  Exit codes: 0 ok, 1 a verify check failed, 2 bad input,
3 solver failure, 4 characterization failure, 5 roundtrip or re-verification
tolerance exceeded.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import CharacterizationError, SolverError
from .inverse import solve_ip1, solve_ip2, solve_ip3, solve_ip4
from .potential import Potential
from .products import asymptotic_fit, check_condition28, check_condition6
from .spectra import bvpb_spectrum, dirichlet_data, gaps, periodic_spectrum
from .tolerances import DEFAULT
from .witnesses import witness

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_SOLVER, EXIT_CHAR, EXIT_ROUNDTRIP = 0, 1, 2, 3, 4, 5

PROBLEMS = ("dirichlet", "periodic", "ip1", "ip2", "ip3", "ip4", "bvpb")
INVERSE_PROBLEMS = ("ip1", "ip2", "ip3", "ip4")
# forward variant that produces the data each problem consumes
FORWARD_OF = {"ip1": "dirichlet", "ip3": "dirichlet", "ip2": "periodic", "ip4": "periodic"}
SPECTRUM_TOL = 1e-4


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    problem: str = "periodic"
    M: int = 512
    N: int = 40
    terms: int = 200
    a: float = 0.0
    b: float = 1.0
    potential: str = None
    spectrum: str = None
    out: str = None
    tol: object = field(default=DEFAULT)

    def __post_init__(self):
        for name in ("M", "N", "terms"):
            if getattr(self, name) <= 0:
                raise InputError(f"--{name} must be positive")


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------


class Reporter:
    def __init__(self, stream=None):
        self.stream = stream or sys.stdout
        self.failed = []

    def emit(self, check, passed=None, **data):
        rec = {"check": check}
        if passed is not None:
            rec["passed"] = bool(passed)
            if not passed:
                self.failed.append(check)
        rec.update({k: _jsonable(v) for k, v in data.items()})
        self.stream.write(json.dumps(rec, sort_keys=True) + "\n")


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def info(msg):
    print(msg, file=sys.stderr)


def load_potential(src, tol=DEFAULT):
    if src is None:
        raise InputError("--potential is required")
    if src.startswith("witness:"):
        return witness(src[len("witness:"):])
    try:
        return Potential.load(src, tol=tol)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read potential {src}: {exc}") from None


def load_spectrum(path):
    if path is None:
        raise InputError("--spectrum is required")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read spectrum {path}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("spectrum file must hold a JSON object")
    return data


def write_json(path, data):
    with open(path, "w") as fh:
        json.dump(_jsonable(data), fh, sort_keys=True)
        fh.write("\n")


def _field(spec, name, dtype=float):
    if name not in spec or spec[name] is None:
        raise InputError(f"spectrum file lacks field {name!r}")
    try:
        arr = np.asarray(spec[name], dtype=dtype)
    except (TypeError, ValueError):
        raise InputError(f"spectrum field {name!r} is not numeric") from None
    if arr.ndim != 1:
        raise InputError(f"spectrum field {name!r} must be a list")
    return arr


# ---------------------------------------------------------------------------
# forward
# ---------------------------------------------------------------------------


def forward_spectrum(q, variant, cfg):
    """Spectrum dict for ``variant`` plus diagnostics for the report."""
    tol = cfg.tol
    N = cfg.N
    out, diag = {"problem": variant}, {}
    if variant in ("dirichlet", "periodic"):
        dd = dirichlet_data(q, N + 1, tol)
        out.update(gamma=dd.gamma[:N], alpha=dd.alpha[:N], beta=dd.beta[:N], ddot=dd.ddot[:N])
        diag["weight_residual"] = float(dd.weight_residual()[:N].max())
        if variant == "periodic":
            bs = periodic_spectrum(q, N, gamma=dd.gamma, tol=tol)
            out.update(**{"lambda": bs.lam, "lambda_plus": bs.lam_plus, "omega": bs.omega})
            out["eps"] = None if bs.eps is None else bs.eps
            diag["open_gaps"] = [g.n for g in bs.gaps if not g.closed]
    elif variant == "bvpb":
        bb = bvpb_spectrum(q, cfg.a, cfg.b, N, tol)
        out.update(a=bb.a, b=bb.b, h=bb.h, mu=bb.mu, nu=bb.nu, eta=bb.eta, multiplicity=bb.multiplicity)
    else:
        raise InputError(f"no forward variant {variant!r}")
    return out, diag


def _fits(spec):
    out = {}
    for key, model in (("gamma", "eq9"), ("lambda", "eq4"), ("lambda_plus", "eq8"), ("alpha", "eq12"), ("mu", "eq26")):
        seq = spec.get(key)
        if seq is None or len(seq) < 16:
            continue
        fit = asymptotic_fit(seq, model)
        out[model] = (fit.params, fit.decay_ratio)
    return out


def _residuals(q, spec):
    from .odecore import integrate_fundamental

    lams = []
    for key in ("gamma", "lambda", "lambda_plus", "mu"):
        if spec.get(key) is not None:
            lams.extend(np.asarray(spec[key], dtype=float).tolist())
    e = integrate_fundamental(q, np.array(sorted(lams)))
    return float(np.max(e.wronskian_residual())), float(np.max(e.discriminant_residual()))


def cmd_forward(cfg, rep):
    q = load_potential(cfg.potential, cfg.tol)
    variant = FORWARD_OF.get(cfg.problem, cfg.problem)
    spec, diag = forward_spectrum(q, variant, cfg)
    spec["mean"] = q.mean
    wr, i16 = _residuals(q, spec)
    rep.emit("wronskian", wr <= 1e-9, residual=wr)
    rep.emit("discriminant_identity", i16 <= 1e-9, residual=i16)
    if "weight_residual" in diag:
        r = diag["weight_residual"]
        rep.emit("weight_identity", r <= cfg.tol.weights_rtol, residual=r)
    for model, (params, ratio) in _fits(spec).items():
        rep.emit(f"fit_{model}", None, params=params, decay_ratio=ratio)
    if "open_gaps" in diag:
        rep.emit("gaps", None, open=diag["open_gaps"], eps_defined=spec["eps"] is not None)
    if cfg.out:
        write_json(cfg.out, spec)
    info(f"forward {variant}: N={cfg.N}, mean={q.mean:.6g}, wronskian {wr:.1e}" + (f" -> {cfg.out}" if cfg.out else ""))
    return EXIT_OK if not rep.failed else EXIT_SOLVER


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _fit_check(rep, seq, model, cond):
    if len(seq) < 16:
        rep.emit(cond, None, skipped="fewer than 16 terms")
        return
    fit = asymptotic_fit(seq, model)
    # remainders of a valid sequence are bounded and do not grow
    bounded = bool(np.max(np.abs(fit.kappa[len(fit.kappa) // 2:])) <= max(1.0, 0.25 * len(seq)))
    rep.emit(cond, bounded and not fit.diverging, params=fit.params, decay_ratio=fit.decay_ratio)


def verify_spectrum(spec, cfg, rep):
    tol = cfg.tol
    margin = tol.condition_margin
    lam = spec.get("lambda")
    lamp = spec.get("lambda_plus")
    gamma = spec.get("gamma")
    if lam is not None:
        lam = _field(spec, "lambda")
        d = np.diff(lam)
        ordered = bool(np.all(d[0::2] > 0) and np.all(d[1::2] >= 0))
        rep.emit("3", ordered, detail="lambda_0 < lambda_1 <= lambda_2 < ...")
        _fit_check(rep, lam, "eq4", "4")
        if not ordered:
            rep.emit("6", None, skipped="lambda is not ordered")
        elif lam.size >= 17:
            c6 = check_condition6(lam, n_terms=cfg.terms, tol=margin)
            rep.emit("6", c6.passed, worst_margin=c6.worst, checked=int(c6.index.size), threshold=-margin)
    if lamp is not None:
        lamp = _field(spec, "lambda_plus")
        ok = bool(np.all(np.diff(lamp)[1::2] > 0) and np.all(np.diff(lamp)[0::2] >= 0))
        if lam is not None:
            # lambda_0 < l+_1 <= l+_2 < lambda_1 <= lambda_2 < l+_3 <= ...
            merged = [lam[0]]
            for k in range(min(lamp.size // 2, (lam.size - 1) // 2)):
                merged += [lamp[2 * k], lamp[2 * k + 1], lam[2 * k + 1], lam[2 * k + 2]]
            merged = np.array(merged)
            dm = np.diff(merged)
            ok = ok and bool(np.all(dm[0::2] > 0) and np.all(dm >= 0))
        rep.emit("7", ok, detail="interlacing of lambda and lambda_plus")
        _fit_check(rep, lamp, "eq8", "8")
    if gamma is not None:
        gamma = _field(spec, "gamma")
        rep.emit("9", bool(np.all(np.diff(gamma) > 0)), detail="gamma strictly increasing")
        _fit_check(rep, gamma, "eq9", "9_asymptotics")
        if lam is not None and lamp is not None:
            gl = gaps(lam, lamp, tol=tol)
            dist = []
            for g in gl[: gamma.size]:
                x = gamma[g.n - 1]
                slack = 0.5 * tol.scaled("gap_length", g.n) + tol.scaled("deadzone", g.n)
                dist.append(max(g.left - slack - x, x - g.right - slack, 0.0))
            rep.emit("J", bool(np.max(dist) == 0.0), worst_outside=float(np.max(dist)))
            if spec.get("eps") is not None:
                eps = _field(spec, "eps", int)
                bad = [g.n for g in gl[: eps.size] if (eps[g.n - 1] == 0) != g.closed]
                rep.emit("J1", not bad, mismatched=bad)
    if spec.get("alpha") is not None:
        alpha = _field(spec, "alpha")
        rep.emit("12", bool(np.all(alpha > 0)), detail="alpha_n > 0")
        if alpha.size >= 16:
            fit = asymptotic_fit(alpha, "eq12")
            rep.emit("12_asymptotics", abs(fit.params["scale"] - 1.0) < 0.5 and not fit.diverging,
                     params=fit.params, decay_ratio=fit.decay_ratio)
    if spec.get("mu") is not None:
        mu = _field(spec, "mu")
        b = float(spec.get("b", cfg.b))
        ok = bool(np.all(np.diff(mu) >= 0) and np.all(mu[2:] - mu[:-2] > 0))
        rep.emit("26", ok, detail="mu_n <= mu_n+1, mu_n < mu_n+2")
        _fit_check(rep, mu, "eq26", "26_asymptotics")
        if mu.size >= 16:
            c28 = check_condition28(mu, b, n_terms=cfg.terms, tol=margin)
            rep.emit("28", c28.passed, worst_margin=c28.worst, checked=int(c28.index.size), threshold=-margin)


def cmd_verify(cfg, rep):
    spec = load_spectrum(cfg.spectrum)
    verify_spectrum(spec, cfg, rep)
    info("verify: " + ("all checks pass" if not rep.failed else "FAILED " + ", ".join(rep.failed)))
    return EXIT_OK if not rep.failed else EXIT_CHECK


# ---------------------------------------------------------------------------
# inverse
# ---------------------------------------------------------------------------


def run_inverse(spec, problem, cfg):
    tol = cfg.tol
    if problem == "ip1":
        return solve_ip1(_field(spec, "gamma"), _field(spec, "alpha"), M=cfg.M)
    if problem == "ip3":
        return solve_ip3(_field(spec, "gamma"), M=cfg.M)
    if problem == "ip4":
        if spec.get("eps") is None:
            raise InputError("spectrum has no E-sequence (eps)")
        q, extra = solve_ip4(_field(spec, "lambda"), _field(spec, "eps", int), M=cfg.M, tol=tol, return_info=True)
        # gamma is an output of the gap placement, not an input, for this problem
        spec["gamma"] = extra["gamma"]
        return q
    if problem == "ip2":
        gamma = _field(spec, "gamma")
        return solve_ip2(_field(spec, "lambda"), gamma, _field(spec, "omega", int)[: gamma.size], M=cfg.M, tol=tol)
    raise InputError(f"--problem must be one of {INVERSE_PROBLEMS} for this command")


def _closed_gaps(ref, tol):
    if ref.get("eps") is not None:
        return {n for n, e in enumerate(ref["eps"], 1) if e == 0}
    if ref.get("lambda") is None or ref.get("lambda_plus") is None:
        return set()
    return {g.n for g in gaps(ref["lambda"], ref["lambda_plus"], tol=tol) if g.closed}


def _spectrum_deviation(ref, new, problem, N, tol):
    """Worst deviation/allowance ratio over the first N/2 entries of each sequence.

    Eigenvalues on a gap classified as closed are only known up to half the
    closed-gap width, so that much is added to their allowance.
    """
    keys = ("gamma",) if problem in ("ip1", "ip3") else ("lambda", "gamma")
    closed = _closed_gaps(ref, tol)
    dev, ratio = {}, {}
    for key in keys:
        a, b = np.asarray(ref[key], dtype=float), np.asarray(new[key], dtype=float)
        m = min(a.size, b.size, N // 2 + (1 if key == "lambda" else 0))
        err = np.abs(a[:m] - b[:m])
        # gap index of each entry: gamma_n -> a_n, lambda_2k-1, lambda_2k -> a_2k
        i = np.arange(m)
        gap = i + 1 if key == "gamma" else 2 * ((i + 1) // 2)
        slack = np.array([0.5 * tol.scaled("gap_length", n) if n in closed else 0.0 for n in gap])
        dev[key] = float(err.max())
        ratio[key] = float(np.max(err / (SPECTRUM_TOL + slack)))
    return dev, ratio


def _sequence_check(ref, new, problem):
    key = {"ip4": "eps", "ip2": "omega"}.get(problem)
    if key is None or ref.get(key) is None:
        return None, None
    a = np.asarray(ref[key], dtype=int)
    b = new.get(key)
    if b is None:
        return key, False
    b = np.asarray(b, dtype=int)
    m = min(a.size, b.size)
    return key, bool(np.array_equal(a[:m], b[:m]))


def reverify(q, spec, problem, cfg, rep):
    """Forward re-computation of the reconstruction; returns True when it matches."""
    sub = RunConfig("forward", FORWARD_OF[problem], cfg.M, _count(spec, problem), cfg.terms, cfg.a, cfg.b, tol=cfg.tol)
    new, _ = forward_spectrum(q, FORWARD_OF[problem], sub)
    dev, ratio = _spectrum_deviation(spec, new, problem, sub.N, cfg.tol)
    ok = all(v <= 1.0 for v in ratio.values())
    rep.emit("reverify_spectra", ok, deviation=dev, tolerance=SPECTRUM_TOL, worst_ratio=ratio)
    key, same = _sequence_check(spec, new, problem)
    if key is not None:
        rep.emit(f"reverify_{key}", same)
        # Omega flips sign freely where |delta| sits near its dead-zone; only E is binding
        ok = ok and (same or key == "omega")
    return ok, new


def _count(spec, problem):
    if problem in ("ip1", "ip3"):
        return len(spec["gamma"])
    return len(spec["lambda"]) - 1


def cmd_inverse(cfg, rep):
    spec = load_spectrum(cfg.spectrum)
    problem = cfg.problem
    if problem not in INVERSE_PROBLEMS:
        raise InputError(f"--problem must be one of {INVERSE_PROBLEMS} for inverse")
    q = run_inverse(spec, problem, cfg)
    rep.emit("reconstruct", True, problem=problem, M=q.M, mean=q.mean, symmetric=q.symmetric)
    ok, new = reverify(q, spec, problem, cfg, rep)
    sub = RunConfig("verify", terms=cfg.terms, tol=cfg.tol)
    verify_spectrum(new, sub, rep)
    if cfg.out:
        q.save(cfg.out)
    info(f"inverse {problem}: mean={q.mean:.6g}, re-verification " + ("ok" if ok and not rep.failed else "FAILED"))
    return EXIT_OK if ok and not rep.failed else EXIT_ROUNDTRIP


# ---------------------------------------------------------------------------
# roundtrip
# ---------------------------------------------------------------------------


def cmd_roundtrip(cfg, rep):
    if cfg.problem not in INVERSE_PROBLEMS:
        raise InputError(f"--problem must be one of {INVERSE_PROBLEMS} for roundtrip")
    q = load_potential(cfg.potential, cfg.tol)
    t0 = time.perf_counter()
    spec, _ = forward_spectrum(q, FORWARD_OF[cfg.problem], cfg)
    if cfg.problem == "ip4" and spec.get("eps") is None:
        raise CharacterizationError("the potential has no E-sequence (it is not symmetric)", "J1")
    rec = run_inverse(spec, cfg.problem, cfg)
    l2 = rec.l2_distance(q)
    rep.emit("l2", l2 <= cfg.tol.roundtrip_l2, l2=l2, tolerance=cfg.tol.roundtrip_l2)
    ok, new = reverify(rec, spec, cfg.problem, cfg, rep)
    if cfg.out:
        rec.save(cfg.out)
    info(f"roundtrip {cfg.problem}: L2 = {l2:.3e}, {time.perf_counter() - t0:.1f} s, " + ("ok" if not rep.failed else "FAILED"))
    return EXIT_OK if not rep.failed else EXIT_ROUNDTRIP


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

COMMANDS = {"forward": cmd_forward, "inverse": cmd_inverse, "verify": cmd_verify, "roundtrip": cmd_roundtrip}


def build_parser():
    p = argparse.ArgumentParser(prog="slinverse", description="Forward and inverse Sturm-Liouville spectral problems on (0, pi).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--potential", help="potential JSON file or witness:NAME[:M] (zero, const, mathieu, abs, x, xsin)")
    p.add_argument("--spectrum", help="spectrum JSON file")
    p.add_argument("--out", help="output file (spectrum for forward, potential otherwise)")
    p.add_argument("--problem", choices=PROBLEMS, default=None)
    p.add_argument("--M", type=int, default=512, help="grid size of reconstructed potentials (default 512)")
    p.add_argument("--N", type=int, default=40, help="eigenvalue / gap count (default 40)")
    p.add_argument("--terms", type=int, default=200, help="product terms for condition checks (default 200)")
    p.add_argument("--a", type=float, default=0.0, help="Robin parameter a (bvpb)")
    p.add_argument("--b", type=float, default=1.0, help="coupling parameter b != 0 (bvpb)")
    p.add_argument("--tol", action="append", default=[], metavar="KEY=VAL", help="tolerance override, repeatable")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    rep = Reporter()
    try:
        tol = DEFAULT.override(args.tol)
        problem = args.problem or {"forward": "periodic", "verify": "periodic"}.get(args.command, "ip4")
        cfg = RunConfig(args.command, problem, args.M, args.N, args.terms, args.a, args.b,
                        args.potential, args.spectrum, args.out, tol)
        code = COMMANDS[args.command](cfg, rep)
    except CharacterizationError as exc:
        rep.emit("characterization", False, condition=exc.condition, index=exc.index, message=str(exc))
        info(f"error: condition ({exc.condition}) violated: {exc}")
        code = EXIT_CHAR
    except SolverError as exc:
        rep.emit("solver", False, message=str(exc), lam=exc.lam)
        info(f"error: solver failure: {exc}")
        code = EXIT_SOLVER
    except (InputError, ValueError, KeyError) as exc:
        rep.emit("input", False, message=str(exc))
        info(f"error: {exc}")
        code = EXIT_INPUT
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
