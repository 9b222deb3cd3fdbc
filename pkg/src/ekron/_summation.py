"""Compensated prefix sums over sorted sparse sequences."""
from __future__ import annotations

import math

import numpy as np


def fsum(values) -> float:
    """Correctly rounded sum of a float array."""
    if isinstance(values, np.ndarray):
        values = values.tolist()
    return math.fsum(values)


def prefix_sums(n: np.ndarray, w: np.ndarray, xs) -> list[float]:
    """sum(w[n <= x]) for every x in the increasing sequence ``xs``.

    Each segment between consecutive cut points is summed exactly rounded
    and the running total is kept as an fsum over segment sums, so the
    value at x_k is the same whether or not earlier cut points were asked
    for (up to one rounding per segment).
    """
    cuts = np.searchsorted(n, np.asarray(xs, dtype=float), side="right")
    segments = []
    out = []
    start = 0
    for c in cuts:
        if c < start:
            raise ValueError("cut points must be increasing")
        segments.append(fsum(w[start:c]))
        out.append(math.fsum(segments))
        start = c
    return out
