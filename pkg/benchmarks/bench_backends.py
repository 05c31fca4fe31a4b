#!/usr/bin/env python3
"""Compare the compiled and pure-NumPy backends on the two hot kernels.

Workloads:
  orbit  -- generator BFS over injective n-tuples of a wreath truncation
  masks  -- labelled hereditary-class counting over edge masks

Usage:
  python3 benchmarks/bench_backends.py            # small scale
  python3 benchmarks/bench_backends.py --scale large --repeat 5
"""
from __future__ import annotations

import argparse
import statistics
import time

from growthlab import ClassSpec, HAS_NUMBA, count_labelled, count_orbits_injective
from growthlab import half_graph, parse_expr, truncate_expr

SCALES = {
    "small": {"orbit_expr": "(wr (wr (finite 2)))", "orbit_n": 4, "half_t": 7, "mask_n": 5},
    "large": {"orbit_expr": "(wr (wr (finite 3)))", "orbit_n": 4, "half_t": 8, "mask_n": 6},
}


def time_call(fn, repeat: int) -> tuple[float, object]:
    samples = []
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), value


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scale", choices=sorted(SCALES), default="small")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cfg = SCALES[args.scale]

    backends = ["numpy"]
    if HAS_NUMBA:
        backends.insert(0, "numba")
    else:
        print("numba not importable; timing the numpy backend only")

    group = truncate_expr(parse_expr(cfg["orbit_expr"]), 4)
    spec = ClassSpec("generators", (half_graph(cfg["half_t"]),))

    workloads = {
        f"orbit deg={group.degree} n={cfg['orbit_n']}": lambda b: count_orbits_injective(
            group, cfg["orbit_n"], budget=200_000_000, backend=b
        ).count,
        f"masks H_{cfg['half_t']} n={cfg['mask_n']}": lambda b: count_labelled(
            spec, cfg["mask_n"], backend=b
        ),
    }

    width = max(len(k) for k in workloads)
    header = f"{'workload':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in workloads.items():
        times = {}
        results = {}
        for b in backends:
            if HAS_NUMBA and b == "numba":
                fn(b)  # warm the compile cache outside the timed region
            times[b], results[b] = time_call(lambda: fn(b), args.repeat)
        if len(set(results.values())) != 1:
            raise SystemExit(f"backend results disagree on {name}: {results}")
        line = f"{name:<{width}}  " + "".join(f"{times[b]:>11.3f}s" for b in backends)
        if len(backends) == 2:
            line += f"{times['numpy'] / times['numba']:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
