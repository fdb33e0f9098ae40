"""Pure-Python reference kernels for cyclotomic multiplication.

These mirror the compiled ``_kernels`` extension exactly and are used when
the extension is unavailable or when ``EXCLUSION_HOPF_PURE_PYTHON`` is set.
"""

from __future__ import annotations

from typing import Sequence


def mulmod_py(
    a: Sequence[int],
    b: Sequence[int],
    sparse_rows: Sequence[Sequence[tuple[int, int]]],
    n: int,
) -> tuple[int, ...]:
    """Multiply two integer coefficient vectors modulo a monic polynomial.

    ``sparse_rows[e]`` holds the nonzero entries of ``x**(n + e)`` reduced
    modulo the modulus, as ``(index, value)`` pairs.
    """
    conv = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    conv[i + j] += x * y
    out = conv[:n]
    for e in range(n, 2 * n - 1):
        c = conv[e]
        if c:
            for i, v in sparse_rows[e - n]:
                out[i] += c * v
    return tuple(out)


class MulKernel:
    """Multiplication in Z[x]/(f) for a fixed monic ``f`` of degree ``n``."""

    compiled = False

    def __init__(self, high_rows: Sequence[Sequence[int]], n: int) -> None:
        self.n = n
        self._sparse = [
            tuple((i, v) for i, v in enumerate(row) if v) for row in high_rows
        ]

    def mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return mulmod_py(a, b, self._sparse, self.n)
