"""Compare the compiled and pure-Python kernels on oracle-sized matrices.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

import numpy as np

from scrollsys import _kernels_py
from scrollsys.lattice import parse_spec
from scrollsys.oracle import DEFAULT_PRIME, basis, sample_points

try:
    from scrollsys import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None

CASES = ["L1(0,4,2^5)", "L6(0,4,3^11)", "L5(12,8,3^12)", "L3(20,10,3^30)"]


def inputs(spec, p):
    s = parse_spec(spec)
    B = basis(s.n, s.a, s.b)
    pts = sample_points(s.r, p, random.Random(0))
    return (
        np.array([i for i, _ in B.exponents], dtype=np.int64),
        np.array([k for _, k in B.exponents], dtype=np.int64),
        np.array([x for x, _ in pts], dtype=np.uint64),
        np.array([y for _, y in pts], dtype=np.uint64),
        np.array(s.mults, dtype=np.int64),
    )


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    p = np.uint64(DEFAULT_PRIME)
    print(f"{'system':18s} {'shape':>11s} {'python (s)':>11s} {'compiled (s)':>13s} {'speed-up':>9s}")
    for spec in CASES:
        ins = inputs(spec, int(p))
        run_py = lambda: _kernels_py.rank_mod_p(_kernels_py.condition_matrix(*ins, p), p)
        t_py, rank_py = timed(run_py, args.repeat)
        shape = _kernels_py.condition_matrix(*ins, p).shape
        if compiled is None:
            print(f"{spec:18s} {str(shape):>11s} {t_py:11.4f} {'n/a':>13s}")
            continue
        run_c = lambda: compiled.rank_mod_p(compiled.condition_matrix(*ins, p), p)
        t_c, rank_c = timed(run_c, args.repeat)
        assert rank_c == rank_py, (spec, rank_c, rank_py)
        print(f"{spec:18s} {str(shape):>11s} {t_py:11.4f} {t_c:13.5f} {t_py / t_c:8.0f}x")


if __name__ == "__main__":
    main()
