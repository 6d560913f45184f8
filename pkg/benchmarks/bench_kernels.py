"""Compare the numba and numpy transfer-matrix backends.

Times the raw kernels (transfer over a batch of lambdas, zero counting) and a
full forward Dirichlet + periodic computation with each backend forced, and
checks that both backends agree.

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --M 2048 --batch 400 --repeat 5
"""

import argparse
import json
import time

import numpy as np

from slinverse import _kernels, dirichlet_data, periodic_spectrum, witness


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(q, batch, repeat):
    qa, qb = q.cell_values()
    lam = np.linspace(-5.0, 1600.0, batch)
    rows = []
    ref = {}
    for backend in ("numba", "numpy"):
        if backend == "numba" and not _kernels._HAVE_NUMBA:
            continue
        # warm-up triggers JIT compilation, excluded from the timings
        ref[backend] = _kernels.transfer(qa, qb, q.h, lam, backend=backend)
        _kernels.count_zeros(qa, qb, q.h, lam, 0.0, 1.0, backend=backend)
        t_tr = best_of(lambda: _kernels.transfer(qa, qb, q.h, lam, backend=backend), repeat)
        t_cz = best_of(lambda: _kernels.count_zeros(qa, qb, q.h, lam, 0.0, 1.0, backend=backend), repeat)
        t_one = best_of(lambda: _kernels.transfer(qa, qb, q.h, lam[:1], backend=backend), repeat * 20)
        rows.append({"backend": backend, "transfer_batch_s": t_tr, "count_zeros_batch_s": t_cz, "transfer_single_s": t_one})
    diff = None
    if len(ref) == 2:
        scale = np.maximum(1.0, np.abs(ref["numpy"]))
        diff = float(np.max(np.abs(ref["numba"] - ref["numpy"]) / scale))
    return rows, diff


def bench_forward(q, N, repeat):
    rows = []
    saved = _kernels.BACKEND
    try:
        for backend in ("numba", "numpy"):
            if backend == "numba" and not _kernels._HAVE_NUMBA:
                continue
            _kernels.BACKEND = backend

            def run():
                dd = dirichlet_data(q, N + 1)
                return periodic_spectrum(q, N, gamma=dd.gamma)

            bs = run()
            rows.append({"backend": backend, "forward_s": best_of(run, repeat), "lam_last": float(bs.lam[-1])})
    finally:
        _kernels.BACKEND = saved
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=1024, help="grid cells")
    ap.add_argument("--batch", type=int, default=200, help="lambdas per kernel call")
    ap.add_argument("--N", type=int, default=20, help="gap count for the forward run")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args()

    q = witness("mathieu", M=args.M)
    kern, diff = bench_kernels(q, args.batch, args.repeat)
    fwd = bench_forward(q, args.N, max(1, args.repeat - 2))

    print(f"M={args.M}, batch={args.batch}, N={args.N}")
    print(f"{'backend':8s} {'transfer':>10s} {'count':>10s} {'single':>10s} {'forward':>10s}")
    by = {r["backend"]: r for r in fwd}
    for r in kern:
        f = by.get(r["backend"], {}).get("forward_s", float("nan"))
        print(f"{r['backend']:8s} {r['transfer_batch_s']:10.4f} {r['count_zeros_batch_s']:10.4f} "
              f"{r['transfer_single_s'] * 1e3:8.3f}ms {f:10.3f}")
    if diff is not None:
        print(f"max relative backend difference: {diff:.2e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"kernels": kern, "forward": fwd, "backend_diff": diff}, fh, indent=1, sort_keys=True)


if __name__ == "__main__":
    main()
