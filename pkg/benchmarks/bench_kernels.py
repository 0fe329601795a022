"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--q 997] [--repeat 5] [--json]

Each line reports the best of ``repeat`` runs per backend and the speedup.
Results from the two backends are compared before timing.
"""

import argparse
import json
import time

import numpy as np

from burgess import kernels
from burgess.characters import build_group, enumerate_characters
from burgess.prng import SplitMix64


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def workloads(q, seed):
    chars = [c for c in enumerate_characters(build_group(q)) if c.primitive]
    chi = chars[len(chars) // 2]
    t = np.ascontiguousarray(chi.log_table)
    m = chi.order
    vals = chi.values()
    n_max = int(q ** (5 / 8))
    B = max(1, int(q**0.5) - 1)
    shifts = SplitMix64(seed).below(q, 800).reshape(-1, 4).astype(np.int64)
    units = np.array([a for a in range(1, q + 1) if np.gcd(a, q) == 1][: max(1, q // 10)], dtype=np.int64)
    return {
        "window_maxima": lambda k: k.window_maxima(vals, n_max),
        "fourth_moment": lambda k: k.fourth_moment(t, m, B),
        "polynomial_sums": lambda k: k.polynomial_sums(t, m, shifts),
        "v_counts": lambda k: k.v_counts(q, 0, n_max, units),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--q", type=int, default=997)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--json", action="store_true", help="one JSON object per line")
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the python backend is available")
    for name, work in workloads(args.q, args.seed).items():
        res = {b: work(mod) for b, mod in backends.items()}
        if len(res) == 2:
            assert np.allclose(res["python"], res["cython"]), name
        times = {b: best_time(lambda mod=mod: work(mod), args.repeat) for b, mod in backends.items()}
        row = {"kernel": name, "q": args.q, **{f"{b}_s": round(s, 6) for b, s in times.items()}}
        if len(times) == 2:
            row["speedup"] = round(times["python"] / times["cython"], 2)
        if args.json:
            print(json.dumps(row))
        else:
            line = f"{name:16s} " + "  ".join(f"{b} {s * 1e3:9.3f} ms" for b, s in times.items())
            if "speedup" in row:
                line += f"  x{row['speedup']}"
            print(line)


if __name__ == "__main__":
    main()
