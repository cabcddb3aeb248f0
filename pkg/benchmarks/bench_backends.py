#!/usr/bin/env python3
"""Benchmark the pure-Python tick loop against the compiled kernel.

Both backends consume identical pre-drawn workload arrays and must
produce bit-identical outputs; this script reports wall time per
backend (best of N), the workload-generation baseline they share, and
verifies the equality claim on the run it just timed.

Example:
    python3 benchmarks/bench_backends.py --rps 1000 --repeats 5
"""

import argparse
import time

import numpy as np

from fogbid import SimulationConfig
from fogbid.engine import available_backends, generate_arrays, simulate_raw

COMPARED_FIELDS = (
    "served_idx",
    "payment_cents",
    "latency",
    "hops",
    "overflow",
    "node_execs",
    "node_rev_cents",
)


def best_of(repeats, fn):
    times = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rps", type=int, default=500, help="requests per second per edge")
    parser.add_argument("--duration-ms", type=int, default=120_000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--repeats", type=int, default=3, help="take the best of N timings")
    args = parser.parse_args()

    cfg = SimulationConfig().with_overrides(
        {
            "requests_per_second_per_edge": args.rps,
            "duration_ms": args.duration_ms,
            "seed": args.seed,
        }
    )
    _, arrays = generate_arrays(cfg)
    print(f"workload: {len(arrays)} requests over {cfg.duration_ms} ms (seed {cfg.seed})")

    gen_time, _ = best_of(args.repeats, lambda: generate_arrays(cfg))
    print(f"workload generation alone: {gen_time * 1000:8.1f} ms")

    runs = {}
    for backend in available_backends():
        elapsed, raw = best_of(args.repeats, lambda b=backend: simulate_raw(cfg, backend=b))
        runs[backend] = (elapsed, raw)
        loop_ms = (elapsed - gen_time) * 1000
        print(f"{backend:>9}: {elapsed * 1000:8.1f} ms total, ~{loop_ms:8.1f} ms loop")

    if len(runs) == 2:
        fast, slow = runs["compiled"][0], runs["pure"][0]
        print(f"speedup: {slow / fast:.1f}x total, "
              f"{(slow - gen_time) / max(fast - gen_time, 1e-9):.1f}x loop-only")
        pure_raw, compiled_raw = runs["pure"][1], runs["compiled"][1]
        identical = all(
            np.array_equal(getattr(pure_raw, f), getattr(compiled_raw, f))
            for f in COMPARED_FIELDS
        )
        print(f"outputs identical: {identical}")
        return 0 if identical else 1
    print("compiled kernel not built; nothing to compare")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
