"""Compensated nested-sum scan kernel.

The nested sum over `1 <= k_1 < ... < k_d <= N` of a product of per-position
factors `f_i(k_i)` is computed with a single left-to-right pass over k.
Position accumulators satisfy

    A_i(k) = sum_{k_i <= k} f_i(k_i) * A_{i-1}(k_i - 1),   A_0 = 1,

so updating A_d, A_{d-1}, ..., A_1 in that order at each k uses the
previous-k value of A_{i-1} exactly as the strict inequality requires.

Each accumulator carries a Neumaier compensation term: for `t = a + x` the
rounding error is recovered as `(a - t) + x` when `|a| >= |x|` and
`(x - t) + a` otherwise, and summed separately.  `fastmath` must stay off:
it would license the compiler to simplify the compensation away.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency, but keep a fallback
    njit = None


def _scan_block_impl(factors: np.ndarray, acc: np.ndarray, comp: np.ndarray) -> None:
    d, width = factors.shape
    for b in range(width):
        for i in range(d - 1, -1, -1):
            if i == 0:
                term = factors[0, b]
            else:
                term = factors[i, b] * (acc[i - 1] + comp[i - 1])
            t = acc[i] + term
            if abs(acc[i]) >= abs(term):
                comp[i] += (acc[i] - t) + term
            else:
                comp[i] += (term - t) + acc[i]
            acc[i] = t


if njit is not None:
    scan_block = njit(cache=True, nogil=True)(_scan_block_impl)
else:  # pragma: no cover
    scan_block = _scan_block_impl
