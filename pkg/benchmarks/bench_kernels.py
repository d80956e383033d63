"""Compare the numba kernels with the pure-numpy fallback.

Times the adaptive panel engine and the midpoint oracle on the same batch
of requests, checks that both backends agree, and prints a small table.

    python3 benchmarks/bench_kernels.py --points 2000 --repeat 3
"""
import argparse
import time

import numpy as np

from oscimax import _kernels
from oscimax._backend import BACKEND


def _batch(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, n)
    t = rng.uniform(0.0, 0.05, n)
    return np.ascontiguousarray(x), np.ascontiguousarray(t)


def _profile_arrays(lam):
    lo = np.array([0.0, 0.5 * lam])
    hi = np.array([0.25 * lam, lam])
    amp = np.array([1.0, 0.5])
    zeros = np.zeros(2)
    return lo, hi, amp, zeros, zeros.copy(), np.full(2, 2.0)


def _time(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--lam", type=float, default=200.0)
    ap.add_argument("--m", type=float, default=1.5)
    ap.add_argument("--oracle-n", type=int, default=1 << 12)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if BACKEND != "numba":
        print("numba is disabled (OSCIMAX_BACKEND=numpy); only the fallback is timed")
    x, t = _batch(args.points, args.seed)
    lo, hi, amp, lin, coef, pw = _profile_arrays(args.lam)
    gx, gw = _kernels.GL_NODES, _kernels.GL_WEIGHTS

    def panel(fn):
        return lambda: fn(lo, hi, amp, lin, coef, pw, _kernels.AMP_CONST, x, t, args.m,
                          1e-10, 1 << 22, gx, gw)[0]

    def oracle(fn):
        return lambda: fn(lo, hi, amp, lin, coef, pw, x, t, args.m, args.oracle_n)

    cases = [("panel", panel, _kernels.bands_1d_np, _kernels.bands_1d_nb),
             ("oracle", oracle, _kernels.oracle_1d_np, _kernels.oracle_1d_nb)]
    print(f"{'kernel':8s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s} {'max diff':>10s}")
    for name, wrap, np_fn, nb_fn in cases:
        t_np, v_np = _time(wrap(np_fn), args.repeat)
        if nb_fn is None:
            print(f"{name:8s} {t_np:11.4f} {'-':>11s} {'-':>8s} {'-':>10s}")
            continue
        wrap(nb_fn)()  # compile outside the timing loop
        t_nb, v_nb = _time(wrap(nb_fn), args.repeat)
        diff = float(np.max(np.abs(v_np - v_nb)))
        print(f"{name:8s} {t_np:11.4f} {t_nb:11.4f} {t_np / t_nb:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
