"""Time the numba kernels against the pure-numpy fallback.

The backend is chosen at import time from NORMGEN_NO_NUMBA, so the
comparison re-runs this script in two subprocesses, one per backend,
and prints a table of medians.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --sizes 8,64,256 --repeats 7
"""

import argparse
import json
import math
import os
import statistics
import subprocess
import sys
import time

import numpy as np


def _time(fn, repeats):
    fn()  # warm-up: JIT compile / cache touch
    out = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


def run_worker(sizes, grid, repeats):
    from normgen import _kernels
    from normgen import CircleSpectrum, UnitaryRep, projective_profile

    phases = np.linspace(-math.pi, math.pi, grid, endpoint=False)
    rows = []
    for n in sizes:
        rng = np.random.default_rng(n)
        angles = np.sort(rng.uniform(-math.pi, math.pi, size=n))
        u = UnitaryRep(np.diag(np.exp(1j * angles)))
        rows.append(
            {
                "n": n,
                "profile_scan": _time(
                    lambda: _kernels.profile_scan(angles, phases), repeats
                ),
                "sorted_grid_matrix": _time(
                    lambda: _kernels.sorted_grid_matrix(angles, phases),
                    repeats,
                ),
                "mean_curve": _time(
                    lambda: _kernels.mean_curve(angles, phases), repeats
                ),
                "projective_profile": _time(
                    lambda: projective_profile(u), repeats
                ),
            }
        )
    json.dump({"backend": _kernels.BACKEND, "rows": rows}, sys.stdout)


def run_compare(sizes, grid, repeats):
    results = {}
    for label, no_numba in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, NORMGEN_NO_NUMBA=no_numba)
        cmd = [
            sys.executable,
            os.path.abspath(__file__),
            "--worker",
            "--sizes",
            ",".join(str(s) for s in sizes),
            "--grid",
            str(grid),
            "--repeats",
            str(repeats),
        ]
        out = subprocess.run(
            cmd, env=env, capture_output=True, text=True, check=True
        )
        payload = json.loads(out.stdout)
        results[label] = payload
        if label == "numba" and payload["backend"] != "numba":
            print("note: numba unavailable, both columns use numpy")
    kernels = ["profile_scan", "sorted_grid_matrix", "mean_curve", "projective_profile"]
    print(f"grid={grid} repeats={repeats} (median seconds)")
    header = f"{'kernel':>20} {'n':>5} {'numba':>10} {'numpy':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for k in kernels:
        for ra, rb in zip(results["numba"]["rows"], results["numpy"]["rows"]):
            a, b = ra[k], rb[k]
            print(
                f"{k:>20} {ra['n']:>5} {a:>10.2e} {b:>10.2e} {b / a:>7.1f}x"
            )
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,32,128")
    ap.add_argument("--grid", type=int, default=4096)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    sizes = [int(tok) for tok in args.sizes.split(",") if tok]
    if args.worker:
        run_worker(sizes, args.grid, args.repeats)
        return 0
    return run_compare(sizes, args.grid, args.repeats)


if __name__ == "__main__":
    sys.exit(main())
