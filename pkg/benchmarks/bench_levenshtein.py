"""Compare the JIT-compiled edit-distance kernel against the pure-numpy
fallback on realistic tag-sequence workloads.

The fallback is selected the same way the library selects it: via the
LISTPAGE_NUMBA environment variable, which must be set before import. This
script therefore re-executes itself once per backend.

Usage: python3 benchmarks/bench_levenshtein.py [--pairs N] [--maxlen L]
"""

import argparse
import json
import os
import statistics
import subprocess
import sys
import time


def run_backend(n_pairs, max_len, repeats):
    import numpy as np

    from listpage import _kernels

    rng = np.random.default_rng(12345)
    pairs = []
    for _ in range(n_pairs):
        la, lb = rng.integers(1, max_len + 1, size=2)
        pairs.append(
            (
                rng.integers(0, 40, size=la).astype(np.int64),
                rng.integers(0, 40, size=lb).astype(np.int64),
            )
        )
    # warm up (includes JIT compilation when numba is active)
    _kernels.levenshtein(pairs[0][0], pairs[0][1])

    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        total = 0
        for a, b in pairs:
            total += _kernels.levenshtein(a, b)
        times.append(time.perf_counter() - start)
    return {
        "backend": "numba" if _kernels.USE_NUMBA else "numpy",
        "pairs": n_pairs,
        "max_len": max_len,
        "checksum": int(total),
        "best_s": min(times),
        "median_s": statistics.median(times),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--maxlen", type=int, default=60)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--_backend", choices=["0", "1"], help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args._backend is not None:
        print(json.dumps(run_backend(args.pairs, args.maxlen, args.repeats)))
        return

    results = []
    for flag in ("1", "0"):
        env = dict(os.environ, LISTPAGE_NUMBA=flag)
        out = subprocess.run(
            [
                sys.executable,
                os.path.abspath(__file__),
                "--pairs",
                str(args.pairs),
                "--maxlen",
                str(args.maxlen),
                "--repeats",
                str(args.repeats),
                "--_backend",
                flag,
            ],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        results.append(json.loads(out.stdout.strip().splitlines()[-1]))

    assert results[0]["checksum"] == results[1]["checksum"], "backends disagree"
    print(f"{args.pairs} pairs, sequence length 1..{args.maxlen}, "
          f"best of {args.repeats} runs\n")
    print(f"{'backend':8} {'best':>10} {'median':>10}")
    for r in results:
        print(f"{r['backend']:8} {r['best_s']*1e3:8.1f}ms {r['median_s']*1e3:8.1f}ms")
    speedup = results[1]["best_s"] / results[0]["best_s"]
    print(f"\nspeedup (numba vs numpy): {speedup:.1f}x; "
          f"identical checksum {results[0]['checksum']}")


if __name__ == "__main__":
    main()
