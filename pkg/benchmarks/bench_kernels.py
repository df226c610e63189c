"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each row is the best of ``--repeat`` runs; both backends get identical inputs
and their outputs are checked for equality before timing.
"""

import argparse
import time

import numpy as np

from senslat import _kernels
from senslat import boolfn as bf
from senslat.constructions import rubinstein_f, slice_coloring


def best_of(fn, repeat, first=None):
    """Best wall time; a first run slower than 2 s is not repeated."""
    times = [] if first is None else [first]
    if first is not None and first > 2.0:
        return first
    for _ in range(repeat - len(times)):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    for n in (10, 16, 20):
        bits = rng.integers(0, 2, size=1 << n, dtype=np.uint8)
        yield f"sensitivity_counts n={n}", "sensitivity_counts", (bits, n)

    f = rubinstein_f(4)
    masks = bf.candidate_masks(f.n, 4)
    yield "block_profile rubinstein n=16 l<=4", "block_profile", (f.bits, f.n, masks, 4, 1 << 16)

    bits = rng.integers(0, 2, size=1 << 10, dtype=np.uint8)
    masks = bf.candidate_masks(10, 5)
    yield "block_profile random n=10 l<=5", "block_profile", (bits, 10, masks, 5, 1 << 16)

    minimal = bf.minimal_blocks_at(f, 0, 4)
    yield f"max_packing {minimal.size} blocks", "max_packing", (minimal,)

    c = slice_coloring(3)
    pts = rng.integers(-1, 5, size=(200_000, c.d))
    yield "sliced_blue 200k points d=15", "sliced_blue", (pts, c._axes, c._cs, c._zptr, c._zidx)


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.compiled is None:
        raise SystemExit("compiled extension not built; run: pip install -e . --no-build-isolation")
    print(f"{'kernel':40s} {'cython (s)':>12s} {'python (s)':>12s} {'speedup':>8s}", flush=True)
    for label, name, inputs in cases():
        fast = getattr(_kernels.compiled, name)
        slow = getattr(_kernels.pure, name)
        t = time.perf_counter()
        want = slow(*inputs)
        first = time.perf_counter() - t
        if not same(fast(*inputs), want):
            raise SystemExit(f"backends disagree on {label}")
        tf = best_of(lambda: fast(*inputs), args.repeat)
        ts = best_of(lambda: slow(*inputs), args.repeat, first)
        print(f"{label:40s} {tf:12.5f} {ts:12.5f} {ts / tf:8.1f}x", flush=True)


if __name__ == "__main__":
    main()
