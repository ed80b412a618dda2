"""Compare the compiled kernel extension against the pure-NumPy fallback.

Runs each hot kernel on representative workloads under both implementations
(the fallback is selected in a subprocess via QGALLERY_PURE_PYTHON=1) and
prints a timing table plus the maximum cross-implementation deviation.

Usage: python benchmarks/benchmark_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

WORKLOADS = {
    "airy_ai (1e6 pts, [-60, 10])": (
        "airy_ai",
        lambda rng: (np.linspace(-60.0, 10.0, 1_000_000),),
    ),
    "airy_bi_scaled (1e6 pts, [0, 80])": (
        "airy_bi_scaled",
        lambda rng: (np.linspace(0.0, 80.0, 1_000_000),),
    ),
    "superpose_intensity (40 states x 2e5 times)": (
        "superpose_intensity",
        lambda rng: (
            rng.standard_normal(40) + 1j * rng.standard_normal(40),
            -1j * rng.uniform(1e3, 1e5, 40) - rng.uniform(0.1, 10.0, 40),
            np.linspace(0.0, 1e-3, 200_000),
        ),
    ),
    "superpose_fields (40 states x 1e5 grid)": (
        "superpose_fields",
        lambda rng: (
            rng.standard_normal(40) + 1j * rng.standard_normal(40),
            rng.standard_normal((40, 100_000)),
            np.exp(1j * rng.uniform(0.0, 6.28, 40)),
        ),
    ),
}


def run_suite(repeat: int) -> dict:
    from qgallery import kernels

    rng = np.random.default_rng(7)
    results = {"implementation": kernels.IMPLEMENTATION, "timings": {}, "checksums": {}}
    for label, (name, make_args) in WORKLOADS.items():
        func = getattr(kernels, name)
        args = make_args(rng)
        func(*args)  # warm up
        best = min(timeit.repeat(lambda: func(*args), number=1, repeat=repeat))
        out = np.asarray(func(*args))
        results["timings"][label] = best
        results["checksums"][label] = [
            float(np.abs(out).sum()),
            float(np.abs(out).max()),
        ]
    return results


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    args = parser.parse_args()

    if os.environ.get("_QGALLERY_BENCH_CHILD") == "1":
        print(json.dumps(run_suite(args.repeat)))
        return 0

    here = run_suite(args.repeat)
    env = dict(os.environ, QGALLERY_PURE_PYTHON="1", _QGALLERY_BENCH_CHILD="1")
    child = subprocess.run(
        [sys.executable, __file__, "--repeat", str(args.repeat)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    other = json.loads(child.stdout)

    if here["implementation"] == other["implementation"]:
        print(
            "warning: compiled extension unavailable; comparing the NumPy "
            "fallback against itself"
        )
    if args.json:
        print(json.dumps({"primary": here, "fallback": other}, indent=2))
        return 0

    width = max(len(k) for k in WORKLOADS)
    print(
        f"{'kernel':<{width}}  {here['implementation']:>10}  "
        f"{other['implementation']:>10}  speedup"
    )
    for label in WORKLOADS:
        t1 = here["timings"][label]
        t2 = other["timings"][label]
        print(f"{label:<{width}}  {t1:>9.4f}s  {t2:>9.4f}s  {t2 / t1:>6.2f}x")
        c1, c2 = here["checksums"][label], other["checksums"][label]
        rel = abs(c1[0] - c2[0]) / max(c1[0], 1e-300)
        if rel > 1e-9:
            print(f"  checksum mismatch: relative {rel:.2e}")
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
