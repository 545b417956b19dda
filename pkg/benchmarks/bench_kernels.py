"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--levels 6 8 10] [--repeat 3]

Both backends are imported directly, so the result does not depend on
NIMTRANSPORT_PURE_PYTHON.  Outputs are compared before timing.
"""

import argparse
import time

from nimtransport import _pykernels

try:
    from nimtransport import _kernels
except ImportError:
    _kernels = None

KERNELS = ("potential_table", "potential_grid_sum", "xor_moment_sum", "carry_free_count")


def best_of(fn, arg, repeat):
    best = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(arg)
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best, out


def _same(a, b):
    if hasattr(a, "tolist"):
        a = a.tolist()
    if isinstance(b, list) and b and not isinstance(b[0], int):
        b = [list(row) for row in b]
    return a == b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--levels", type=int, nargs="+", default=[6, 8, 10])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return
    print(f"{'kernel':<20}{'level':>6}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for name in KERNELS:
        for n in args.levels:
            if n > getattr(_kernels, "MAX_TABLE_LEVEL" if name == "potential_table" else "MAX_SUM_LEVEL"):
                continue
            tp, op = best_of(getattr(_pykernels, name), n, args.repeat)
            tc, oc = best_of(getattr(_kernels, name), n, args.repeat)
            if not _same(oc, op):
                raise SystemExit(f"{name}({n}): backends disagree")
            print(f"{name:<20}{n:>6}{tp:>12.4f}{tc:>12.4f}{tp / max(tc, 1e-9):>9.1f}x")


if __name__ == "__main__":
    main()
