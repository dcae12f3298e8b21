"""Compare the numba kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Same numbers as ``signlink bench``, printed as a table.
"""

import argparse

from signlink.bench import run_benchmark


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    res = run_benchmark(repeat=args.repeat, seed=args.seed)
    print(f"active backend: {res['active_backend']}")
    print(f"{'kernel':<20}{'n':>4}{'m':>5}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}  agree")
    for row in res["kernels"]:
        nb = row.get("numba_s")
        sp = row.get("speedup")
        print(
            f"{row['kernel']:<20}{row['n']:>4}{row['m']:>5}{row['numpy_s'] * 1e3:>12.3f}"
            f"{'-' if nb is None else format(nb * 1e3, '.3f'):>12}{'-' if sp is None else format(sp, '.1f'):>10}  {row.get('agree', '-')}"
        )


if __name__ == "__main__":
    main()
