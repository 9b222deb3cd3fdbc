"""Laurent coefficients at s=1 from the Dirichlet coefficients of a series.

For -L'/L(s) = sum b_n n^-s = C/(s-1) + C_0 + sum_r (-1)^r C_r/r! (s-1)^r,

    C_r = lim_x ( sum_{n<=x} b_n (log n)^r / n - C (log x)^(r+1)/(r+1) ).

The same limit applied to L itself gives its own Laurent coefficients,
which is how the Dedekind Stieltjes constants are obtained.

Convergence is slow and oscillatory. Exactly,

    C_r = partial(x) - E(x) (log x)^r / x + int_x^oo (log^r t - r log^(r-1) t) E(t)/t^2 dt

with E(x) = sum_{n<=x} b_n - C x. ``corrected_partial`` removes the
boundary term, which is known exactly at x, and leaves only the averaged
tail integral. ``extrapolate`` then fits the tail model
c + alpha (log x)^(r+1)/sqrt(x) over a set of checkpoints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._summation import prefix_sums
from .arithmetic_stream import CoeffStream
from .special_functions import R_MAX

__all__ = [
    "TAIL_MODEL",
    "LaurentRequest",
    "EKEstimate",
    "default_checkpoints",
    "coeff_partial",
    "coeff_partials",
    "corrected_partials",
    "extrapolate",
    "integral_route",
    "integral_partials",
]

TAIL_MODEL = "c + alpha*(log x)^(r+1)/sqrt(x), least squares weighted by 1/g (GRH-shaped)"


def default_checkpoints(x_max: float, count: int = 8, decades: float = 2.0) -> list[float]:
    """``count`` geometric points from x_max/10^decades up to x_max (never below 2)."""
    lo = max(2.0, x_max / 10.0**decades)
    if count == 1 or lo >= x_max:
        return [float(x_max)]
    return [float(v) for v in np.geomspace(lo, x_max, count)]


@dataclass(frozen=True)
class LaurentRequest:
    stream: CoeffStream
    residue: float = 1.0
    r: int = 0
    checkpoints: Sequence[float] = ()

    def __post_init__(self):
        if not 0 <= self.r <= R_MAX:
            raise ValueError(f"r must lie in [0, {R_MAX}], got {self.r}")
        given = self.checkpoints if self.checkpoints is not None and len(self.checkpoints) else None
        cps = tuple(float(x) for x in (given if given is not None else default_checkpoints(self.stream.x_max)))
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if cps[0] < 2 or math.floor(cps[-1]) > self.stream.x_max:
            raise ValueError(f"checkpoints must lie in [2, {self.stream.x_max}]")
        object.__setattr__(self, "checkpoints", cps)


@dataclass(frozen=True)
class EKEstimate:
    """A computed gamma_{K,r}.

    ``raw_partial`` is the un-extrapolated value of the route's formula at
    ``x_used``; ``error_bar`` models the unknown tail and is not a rigorous
    bound.
    """

    value: float
    route: str
    x_used: float
    error_bar: float
    raw_partial: float
    r: int
    field_label: str
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def converged(self) -> bool:
        return "unconverged" not in self.metadata.get("flags", ())


def _weights(stream: CoeffStream, r: int) -> np.ndarray:
    n = stream.n.astype(float)
    w = stream.values.astype(float) / n
    if r:
        w = w * np.log(n) ** r
    return w


def coeff_partials(req: LaurentRequest, xs: Sequence[float] | None = None) -> list[float]:
    """Raw partials sum_{n<=x} b_n log^r n / n - C log^(r+1) x/(r+1) at each x."""
    xs = req.checkpoints if xs is None else xs
    for x in xs:
        if not 2 <= x or math.floor(x) > req.stream.x_max:
            raise ValueError(f"x={x} outside [2, {req.stream.x_max}]")
    sums = prefix_sums(req.stream.n, _weights(req.stream, req.r), xs)
    r = req.r
    return [math.fsum([s, -req.residue * math.log(x) ** (r + 1) / (r + 1)]) for s, x in zip(sums, xs)]


def coeff_partial(req: LaurentRequest, x: float) -> float:
    return coeff_partials(req, [x])[0]


def corrected_partials(req: LaurentRequest, xs: Sequence[float] | None = None) -> list[float]:
    """Raw partials minus the exact boundary term E(x) (log x)^r / x."""
    xs = req.checkpoints if xs is None else xs
    raw = coeff_partials(req, xs)
    B = prefix_sums(req.stream.n, req.stream.values.astype(float), xs)
    out = []
    for p, b, x in zip(raw, B, xs):
        E = math.fsum([b, -req.residue * x])
        out.append(p - E * math.log(x) ** req.r / x)
    return out


def extrapolate(req: LaurentRequest, partials: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Fit value(x) = c + alpha (log x)^(r+1)/sqrt(x); return (c, error_bar).

    Residuals are weighted by 1/g(x), g the tail shape, because the
    oscillating tail shrinks like g; unweighted, the earliest checkpoints
    dominate the slope. The error bar is max(largest fit residual,
    |last partial - c|).
    """
    if len(partials) < 3:
        raise ValueError(f"extrapolation needs at least 3 checkpoints, got {len(partials)}")
    xs = np.array([p[0] for p in partials], dtype=float)
    vs = np.array([p[1] for p in partials], dtype=float)
    if np.all(xs == xs[0]):
        raise ValueError("degenerate fit: all checkpoints coincide")
    if xs.max() < 10 * xs.min():
        raise ValueError("checkpoints must span at least one decade")
    g = np.log(xs) ** (req.r + 1) / np.sqrt(xs)
    if np.ptp(g) == 0.0:
        raise ValueError("degenerate fit: tail model is constant on the checkpoints")
    # minimise sum ((v - c - alpha g)/g)^2, shifted by v[0] to keep the scale small
    design = np.column_stack([1.0 / g, np.ones_like(g)])
    (c0, alpha), *_ = np.linalg.lstsq(design, (vs - vs[0]) / g, rcond=None)
    c = vs[0] + float(c0)
    resid = vs - (c + alpha * g)
    bar = max(float(np.abs(resid).max()), abs(vs[-1] - c))
    return float(c), bar


def integral_partials(stream: CoeffStream, r: int, xs: Sequence[float]) -> list[float]:
    """((-1)^(r+1)/r!) int_1^x (log^r t - r log^(r-1) t) Delta(t)/t^2 dt at each x.

    The weight is the derivative of -log^r(t)/t, and Delta(t) = S(t) - t with
    S a step function, so the integral is exact: summation by parts gives
    -S(x) log^r(x)/x + sum_{n<=x} b_n log^r(n)/n - log^(r+1)(x)/(r+1) + log^r(x).
    """
    if r < 1:
        raise ValueError("the integral route is defined for r >= 1 only")
    if stream.kind != "von_mangoldt":
        raise ValueError("the integral route needs a von_mangoldt stream")
    for x in xs:
        if math.floor(x) > stream.x_max:
            raise ValueError(f"x={x} exceeds x_max={stream.x_max}")
    inner = prefix_sums(stream.n, _weights(stream, r), xs)
    S = prefix_sums(stream.n, stream.values.astype(float), xs)
    scale = (-1) ** (r + 1) / math.factorial(r)
    out = []
    for s_in, s, x in zip(inner, S, xs):
        lx = math.log(x)
        val = math.fsum([-s * lx**r / x, s_in, -lx ** (r + 1) / (r + 1), lx**r])
        out.append(scale * val)
    return out


def integral_route(stream: CoeffStream, r: int, x_max: float | None = None) -> float:
    """Truncation at x_max of the Delta-integral formula for gamma_{K,r}, r >= 1."""
    x = stream.x_max if x_max is None else x_max
    return integral_partials(stream, r, [x])[0]
