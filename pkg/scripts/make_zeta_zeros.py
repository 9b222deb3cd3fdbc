"""Tabulate ordinates of the nontrivial zeros of the Riemann zeta function.

Zeros are bracketed by sign changes of Hardy's Z(t) on a fine grid, using a
vectorised Riemann-Siegel evaluation, and each bracket is then polished with
mpmath's ``siegelz``. The total count below ``T`` is checked against
``mpmath.nzeros`` so that no zero is silently dropped.

Usage::

    python scripts/make_zeta_zeros.py 10000 src/ekron/data/zeta_zeros.txt
"""
import math
import sys

import mpmath
import numpy as np


def theta(t):
    t = np.asarray(t, dtype=float)
    return (t / 2 * np.log(t / (2 * np.pi)) - t / 2 - np.pi / 8
            + 1 / (48 * t) + 7 / (5760 * t**3))


def hardy_z(t):
    """Riemann-Siegel main sum plus the first correction term."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = np.sqrt(t / (2 * np.pi))
    N = np.floor(a).astype(int)
    p = a - N
    th = theta(t)
    out = np.zeros_like(t)
    for n in range(1, N.max() + 1):
        m = N >= n
        out[m] += np.cos(th[m] - t[m] * math.log(n)) / math.sqrt(n)
    out *= 2
    c = np.cos(2 * np.pi * p)
    c = np.where(np.abs(c) < 1e-9, 1e-9, c)
    c0 = np.cos(2 * np.pi * (p * p - p - 1 / 16)) / c
    out += (-1.0) ** (N - 1) * (t / (2 * np.pi)) ** -0.25 * c0
    return out


def refine_brackets(a, b, iters=60):
    """Illinois false position on every bracket at once."""
    fa, fb = hardy_z(a), hardy_z(b)
    side = np.zeros(a.shape, dtype=int)
    for _ in range(iters):
        c = (a * fb - b * fa) / (fb - fa)
        fc = hardy_z(c)
        left = np.sign(fc) == np.sign(fa)
        # root in [c, b]
        a, fa = np.where(left, c, a), np.where(left, fc, fa)
        fb = np.where(left & (side == 1), fb / 2, fb)
        # root in [a, c]
        b, fb = np.where(~left, c, b), np.where(~left, fc, fb)
        fa = np.where(~left & (side == -1), fa / 2, fa)
        side = np.where(left, 1, -1)
        if np.all(b - a < 1e-11):
            break
    return (a * fb - b * fa) / (fb - fa)


def polish(t0, steps=2, h=1e-6):
    """Secant steps on mpmath's siegelz starting from the approximate root."""
    x0, x1 = mpmath.mpf(t0), mpmath.mpf(t0) + h
    f0, f1 = mpmath.siegelz(x0), mpmath.siegelz(x1)
    for _ in range(steps):
        if f1 == f0:
            break
        x0, x1, f0 = x1, x1 - f1 * (x1 - x0) / (f1 - f0), f1
        f1 = mpmath.siegelz(x1)
    return float(x1)


def zero_ordinates(T, step=0.01):
    first = [float(mpmath.zetazero(k).imag) for k in range(1, 31)]
    lo = first[-1] + 0.5
    grid = np.arange(lo, T, step)
    z = hardy_z(grid)
    idx = np.flatnonzero(np.sign(z[:-1]) != np.sign(z[1:]))
    approx = refine_brackets(grid[idx], grid[idx + 1])
    zeros = first + [polish(t) for t in approx]
    zeros.sort()
    expected = int(mpmath.nzeros(T))
    if len(zeros) != expected:
        raise RuntimeError(f"found {len(zeros)} zeros below {T}, expected {expected}")
    return zeros


def main():
    T = float(sys.argv[1])
    out = sys.argv[2]
    mpmath.mp.dps = 18
    zeros = zero_ordinates(T)
    with open(out, "w") as fh:
        fh.write(f"# ordinates of nontrivial zeros of zeta(s) with 0 < t < {T:g}\n")
        fh.write(f"# count {len(zeros)}; computed by scripts/make_zeta_zeros.py\n")
        for z in zeros:
            fh.write(f"{z:.12f}\n")


if __name__ == "__main__":
    main()
