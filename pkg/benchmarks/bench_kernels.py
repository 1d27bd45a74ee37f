"""Time the numba kernels against the numpy fallbacks.

    python benchmarks/bench_kernels.py [--sizes 6 64 1024] [--repeat 2000]

Small sizes are what the law suites use; large ones show where
compilation pays off.  Also times one functoriality report per backend
by re-running it in a subprocess with RELENT_DISABLE_NUMBA set.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from relent import kernels


def make_inputs(n: int, rng):
    m = max(1, n // 3)
    image = np.sort(np.concatenate([np.arange(m), rng.integers(0, m, n - m)])).astype(np.int64)
    q = rng.exponential(size=n)
    q /= q.sum()
    p = rng.exponential(size=n)
    p /= p.sum()
    s = np.zeros((n, m))
    for y in range(m):
        fiber = np.flatnonzero(image == y)
        w = rng.exponential(size=len(fiber))
        s[fiber, y] = w / w.sum()
    r = np.bincount(image, weights=q, minlength=m)
    return {
        "re_sum": (q, p),
        "fiber_sums": (image, q, m),
        "prior": (image, s, r),
        "off_fiber_max": (image, s),
        "section_defect": (image, s, m),
    }


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        inputs = make_inputs(n, rng)
        for name, args in inputs.items():
            row = {"kernel": name, "n": n}
            for backend, ns in (("numpy", kernels.numpy_kernels), ("numba", kernels.numba_kernels)):
                if ns is None:
                    row[backend] = float("nan")
                    continue
                fn = getattr(ns, name)
                fn(*args)  # compile / warm caches
                row[backend] = min(timeit.repeat(lambda: fn(*args), number=repeat, repeat=3)) / repeat
            rows.append(row)
    return rows


SUITE = (
    "import time; from relent import kernels; kernels.warmup(); "
    "from relent.harness import GenConfig, check_functoriality; from relent.entropy import RE; "
    "t = time.perf_counter(); check_functoriality(RE, GenConfig(trials=1000)); "
    "print(time.perf_counter() - t)"
)


def bench_suite(disable: bool) -> float:
    env = dict(os.environ)
    if disable:
        env["RELENT_DISABLE_NUMBA"] = "1"
    else:
        env.pop("RELENT_DISABLE_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", SUITE], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[6, 64, 1024])
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--no-suite", action="store_true")
    args = ap.parse_args()

    print(f"{'kernel':<16}{'n':>6}{'numpy us':>12}{'numba us':>12}{'speedup':>9}")
    for row in bench_kernels(args.sizes, args.repeat):
        a, b = row["numpy"] * 1e6, row["numba"] * 1e6
        print(f"{row['kernel']:<16}{row['n']:>6}{a:>12.2f}{b:>12.2f}{a / b:>8.1f}x")
    if not args.no_suite and kernels.HAS_NUMBA:
        fast, slow = bench_suite(False), bench_suite(True)
        print(f"\nfunctoriality, 1000 trials: numba {fast:.2f} s, numpy {slow:.2f} s")


if __name__ == "__main__":
    main()
