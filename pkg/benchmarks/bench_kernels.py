"""Timing comparison of the two kernel backends.

Runs each hot kernel on representative sizes under the numba path (when
available) and the numpy fallback, plus one end-to-end max_modulus call.
The fallback is selected per-process via WVLAB_NO_NUMBA=1, so this
script re-executes itself once with the flag set and merges the tables.

Usage: python3 benchmarks/bench_kernels.py [--inner-only]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _bench_kernels() -> dict:
    from wvlab import accel

    accel.warm_up()
    rng = np.random.default_rng(7)
    out = {"backend": accel.backend_name()}

    shifted = rng.uniform(-80.0, 0.0, size=2_000_000)
    t0 = time.perf_counter()
    for _ in range(5):
        accel.kahan_exp_sum(shifted)
    out["kahan_exp_sum_2e6_ms"] = (time.perf_counter() - t0) / 5 * 1e3

    t0 = time.perf_counter()
    for _ in range(5):
        accel.kahan_exp_moments(shifted, 3.0)
    out["kahan_exp_moments_2e6_ms"] = (time.perf_counter() - t0) / 5 * 1e3

    mag = rng.uniform(0.0, 1.0, size=500_000)
    phase = rng.uniform(0.0, 6.28, size=500_000)
    t0 = time.perf_counter()
    for _ in range(5):
        accel.cexp_dot(mag, phase)
    out["cexp_dot_5e5_ms"] = (time.perf_counter() - t0) / 5 * 1e3

    dre = rng.normal(size=1_000_000)
    dim = rng.normal(size=1_000_000)
    x = rng.uniform(-1.0, 1.0, size=1_000_000)
    t0 = time.perf_counter()
    for _ in range(3):
        accel.scaled_moments(dre, dim, x, 16)
    out["scaled_moments_1e6_ms"] = (time.perf_counter() - t0) / 3 * 1e3

    # end to end: one rotated maximum modulus at a mid-depth radius
    import random

    from wvlab import Radius, gen_geometric, max_modulus, sample_u, sqrt_exp, suggest_bits

    seq = sqrt_exp()
    th = gen_geometric(2, 40_000)
    u = sample_u(random.Random(1), suggest_bits(th, 40_000))
    rad = Radius.from_log_r(-0.005)
    t0 = time.perf_counter()
    res = max_modulus(seq, th, u, rad)
    out["max_modulus_lnr_5e-3_ms"] = (time.perf_counter() - t0) * 1e3
    out["max_modulus_log_M"] = res.log_M
    return out


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--inner-only", action="store_true",
                    help="print one backend's table as JSON and exit")
    args = ap.parse_args()

    if args.inner_only:
        json.dump(_bench_kernels(), sys.stdout)
        return 0

    tables = [_bench_kernels()]
    if tables[0]["backend"] == "numba":
        env = dict(os.environ, WVLAB_NO_NUMBA="1")
        raw = subprocess.run(
            [sys.executable, __file__, "--inner-only"],
            env=env, capture_output=True, text=True, check=True,
        ).stdout
        tables.append(json.loads(raw))

    keys = [k for k in tables[0] if k.endswith("_ms")]
    width = max(len(k) for k in keys)
    header = f"{'kernel':<{width}}  " + "  ".join(
        f"{t['backend']:>12}" for t in tables)
    print(header)
    print("-" * len(header))
    for k in keys:
        row = f"{k:<{width}}  " + "  ".join(f"{t[k]:>12.2f}" for t in tables)
        print(row)
    if len(tables) == 2:
        logm = [t["max_modulus_log_M"] for t in tables]
        print(f"\nmax_modulus log_M agreement: {abs(logm[0] - logm[1]):.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
