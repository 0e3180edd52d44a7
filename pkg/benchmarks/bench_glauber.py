"""Benchmark the Glauber sampling kernel: numba JIT vs pure-numpy fallback.

Run:  python benchmarks/bench_glauber.py
The fallback path is forced in a subprocess via LIPHOM_NO_NUMBA=1; both paths
must produce identical bytes, which is asserted here as well.
"""

from __future__ import annotations

import hashlib
import json
import os
import subprocess
import sys
import time

CASES = [
    {"n": 64, "d": 4, "steps": 200_000},
    {"n": 512, "d": 8, "steps": 200_000},
    {"n": 4096, "d": 8, "steps": 200_000},
]


def run_case(n: int, d: int, steps: int) -> dict:
    import liphom as lh
    from liphom import _kernels

    g = lh.gen_random_regular(n, d, seed=42)
    burnin = steps // 2
    thin = 10
    n_samples = (steps - burnin) // thin
    # warm-up triggers JIT compilation so it is not timed
    lh.mcmc_sample_array(g, 0, "lipschitz", M=1, burnin=10, thin=1, n_samples=5, seed=0)
    t0 = time.perf_counter()
    arr = lh.mcmc_sample_array(
        g, 0, "lipschitz", M=1, burnin=burnin, thin=thin, n_samples=n_samples, seed=7
    )
    elapsed = time.perf_counter() - t0
    return {
        "backend": "numba" if _kernels.NUMBA_ENABLED else "fallback",
        "n": n,
        "d": d,
        "steps": steps,
        "seconds": elapsed,
        "steps_per_second": steps / elapsed,
        "sha1": hashlib.sha1(arr.tobytes()).hexdigest(),
    }


def main() -> int:
    if os.environ.get("_BENCH_CHILD"):
        results = [run_case(**c) for c in CASES]
        print(json.dumps(results))
        return 0

    env_jit = {**os.environ}
    env_jit.pop("LIPHOM_NO_NUMBA", None)
    env_jit["_BENCH_CHILD"] = "1"
    env_fb = {**env_jit, "LIPHOM_NO_NUMBA": "1"}

    out = {}
    for label, env in (("numba", env_jit), ("fallback", env_fb)):
        proc = subprocess.run(
            [sys.executable, __file__], env=env, capture_output=True, text=True
        )
        if proc.returncode != 0:
            sys.stderr.write(proc.stderr)
            return 1
        out[label] = json.loads(proc.stdout.strip().splitlines()[-1])

    print(f"{'case':>14} {'numba s':>10} {'fallback s':>11} {'speedup':>8}  identical")
    for a, b in zip(out["numba"], out["fallback"]):
        assert a["sha1"] == b["sha1"], "backends disagree"
        case = f"n={a['n']},d={a['d']}"
        print(
            f"{case:>14} {a['seconds']:>10.3f} {b['seconds']:>11.3f} "
            f"{b['seconds'] / a['seconds']:>7.1f}x  yes"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
