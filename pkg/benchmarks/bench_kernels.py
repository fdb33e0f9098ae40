"""Compare the compiled and pure-Python cyclotomic multiplication kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints per-field timings and the speed-up; results are checked for equality.
"""

from __future__ import annotations

import argparse
import random
import time

from exclusion_hopf.kernels import COMPILED, MulKernel, PyMulKernel
from exclusion_hopf.scalar import _field

FIELD_ORDERS = (16, 24, 40, 64, 96, 160)


def _operands(n: int, count: int, rng: random.Random) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    def vec():
        return tuple(rng.randint(-50, 50) for _ in range(n))

    return [(vec(), vec()) for _ in range(count)]


def _time(kernel, pairs, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for a, b in pairs:
            kernel.mul(a, b)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--pairs", type=int, default=2000)
    args = ap.parse_args()
    rng = random.Random(0)
    print(f"compiled kernel available: {COMPILED}")
    print(f"{'m':>5} {'deg':>4} {'python ms':>10} {'compiled ms':>12} {'speed-up':>9}")
    for m in FIELD_ORDERS:
        f = _field(m)
        rows = f.power_rows[f.n : 2 * f.n - 1]
        py, fast = PyMulKernel(rows, f.n), MulKernel(rows, f.n)
        pairs = _operands(f.n, args.pairs, rng)
        for a, b in pairs[:50]:
            assert py.mul(a, b) == tuple(fast.mul(a, b))
        t_py = _time(py, pairs, args.repeat)
        t_c = _time(fast, pairs, args.repeat)
        print(f"{m:>5} {f.n:>4} {1e3 * t_py:>10.2f} {1e3 * t_c:>12.2f} {t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
