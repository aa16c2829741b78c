#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Runs the two raw kernels on representative shapes and one end-to-end
workload (hom-space solving between simple objects), with the backend
forced via BREUILMOD_PURE.  Invoke from a checkout:

    python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np  # noqa: E402


def bench_raw(kernels, reps=20):
    rng = np.random.default_rng(0)
    out = {}
    mat = rng.integers(0, 7, size=(600, 350))
    t0 = time.perf_counter()
    for _ in range(reps):
        kernels.rref_mod(mat, 7)
    out["rref_600x350_mod7"] = (time.perf_counter() - t0) / reps
    a = rng.integers(0, 7, size=(4, 4, 231))
    b = rng.integers(0, 7, size=(4, 4, 231))
    t0 = time.perf_counter()
    for _ in range(200):
        kernels.poly_matmul(a, b, 7)
    out["poly_matmul_4x4x231_mod7"] = (time.perf_counter() - t0) / 200
    return out


def bench_end_to_end():
    from breuilmod import GlobalParams, hom
    from breuilmod.simples import enumerate_simples, make_simple

    params = GlobalParams(7, 3, 1, 1)
    classes = enumerate_simples(params, 3)[:8]
    mods = [make_simple(d) for d in classes]
    t0 = time.perf_counter()
    n = 0
    for X in mods:
        for Y in mods:
            hom(X, Y)
            n += 1
    return (time.perf_counter() - t0) / n


def run_in_subprocess(pure: bool):
    env = dict(os.environ)
    if pure:
        env["BREUILMOD_PURE"] = "1"
    else:
        env.pop("BREUILMOD_PURE", None)
    code = (
        "import sys, json; sys.path.insert(0, %r);"
        "from breuilmod import _accel;"
        "import benchmarks.bench_kernels as B;"
        "print(json.dumps({'backend': _accel.BACKEND,"
        " 'raw': B.bench_raw(_accel), 'hom_avg_s': B.bench_end_to_end()}))"
        % str(Path(__file__).resolve().parents[1] / "src")
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True, text=True, env=env,
        cwd=str(Path(__file__).resolve().parents[1]))
    if proc.returncode != 0:
        raise RuntimeError(proc.stderr)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    results = [run_in_subprocess(pure=True)]
    fast = run_in_subprocess(pure=False)
    if fast["backend"] != "python":
        results.append(fast)
    else:
        print("compiled kernels not built; showing the fallback only")
    for res in results:
        print(f"backend: {res['backend']}")
        for name, secs in res["raw"].items():
            print(f"  {name:<28} {secs * 1e3:9.3f} ms")
        print(f"  {'hom(simple, simple) avg':<28} {res['hom_avg_s'] * 1e3:9.3f} ms")
    if len(results) == 2:
        py, c = results
        for name in py["raw"]:
            ratio = py["raw"][name] / c["raw"][name]
            print(f"speedup {name}: {ratio:.1f}x")
        print(f"speedup hom end-to-end: {py['hom_avg_s'] / c['hom_avg_s']:.1f}x")


if __name__ == "__main__":
    main()
