"""Benchmark the JIT-compiled kernels against the numpy fallback path.

The package selects its kernel path once at import from the
``SIGDECOMP_NO_NUMBA`` environment flag, so this script re-executes itself
in a subprocess per path and prints a side-by-side table.  Timed items are
the three hot kernels (extrema search, natural-spline envelope
evaluation, ridge walking) plus one end-to-end sifting decomposition,
which is dominated by them.

Usage: python benchmarks/kernel_benchmark.py
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import time

import numpy as np


def time_call(fn, *args, repeat: int = 5) -> float:
    fn(*args)  # warm (and JIT-compile on the accelerated path)
    best = float("inf")
    for _ in range(repeat):
        tic = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - tic)
    return best


def run_measurements() -> dict[str, float]:
    from sigdecomp import _kernels
    from sigdecomp._accel import NUMBA_ENABLED
    from sigdecomp.core import Signal
    from sigdecomp.emd import emd_decompose

    gen = np.random.Generator(np.random.Philox(0))
    t = np.arange(20_000) / 1000.0
    wave = np.sin(2 * np.pi * 40 * t) + 0.5 * np.sin(2 * np.pi * 3 * t) + 0.05 * gen.normal(size=t.size)

    results: dict[str, float] = {"numba": float(NUMBA_ENABLED)}

    results["extrema_20k"] = time_call(_kernels.find_extrema_arrays, wave)

    max_idx, _ = _kernels.find_extrema_arrays(wave)
    knots_t = max_idx.astype(np.float64)
    knots_v = wave[max_idx]
    query = np.arange(wave.size, dtype=np.float64)
    results["spline_envelope_20k"] = time_call(_kernels.natural_spline, knots_t, knots_v, query)

    energy = gen.random((600, 2000))
    energy[300, :] += 20.0
    results["ridge_walk_600x2000"] = time_call(_kernels.walk_ridge, energy, 300, 1000, 10, 1e-6, 32)

    two_tone = Signal(
        np.sin(2 * np.pi * 50 * np.arange(2560) / 256.0)
        + np.sin(2 * np.pi * 2 * np.arange(2560) / 256.0),
        256.0,
    )
    results["emd_two_tone_2560"] = time_call(lambda: emd_decompose(two_tone), repeat=3)
    return results


def main() -> int:
    if os.environ.get("_SIGDECOMP_BENCH_CHILD"):
        print(json.dumps(run_measurements()))
        return 0

    rows: dict[str, dict[str, float]] = {}
    for label, no_numba in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, _SIGDECOMP_BENCH_CHILD="1", SIGDECOMP_NO_NUMBA=no_numba)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__)], env=env, capture_output=True, text=True
        )
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return 1
        rows[label] = json.loads(proc.stdout.strip().splitlines()[-1])

    names = [k for k in rows["numba"] if k != "numba"]
    width = max(len(n) for n in names)
    print(f"{'kernel':<{width}}  {'numba':>12}  {'numpy':>12}  {'speedup':>8}")
    for name in names:
        fast = rows["numba"][name]
        slow = rows["numpy"][name]
        print(f"{name:<{width}}  {fast * 1e3:>10.2f}ms  {slow * 1e3:>10.2f}ms  {slow / fast:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
