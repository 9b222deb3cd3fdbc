"""Euler-Kronecker constants gamma_{K,r} by several independent routes.

Routes
------
dirichlet
    gamma_{K,r} = (-1)^(r+1)/r! lim (sum Lambda_K(n) log^r n / n - log^(r+1) x/(r+1)).
ihara
    gamma_{K,r} + (-1)^r = (-1)^(r+1)/r! lim (Phi_K(r, x) - f(r, x)).
integral
    gamma_{K,r} = (-1)^(r+1)/r! int_1^oo (log^r t - r log^(r-1) t) Delta_K(t)/t^2 dt, r >= 1.
zero_sum
    gamma_{K,r} = (-1)^(r+1) + sum_rho (-1)^r/(1-rho)^(r+1) - Gamma~_K^(r)(1)/r!, r >= 1,
    with every tabulated zero taken on the critical line.

Derived quantities: Li coefficients, Dedekind Stieltjes constants and the
explicit main terms of the GRH and unconditional bounds.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._summation import fsum, prefix_sums
from .arithmetic_stream import CoeffStream, ideal_count_stream, lambda_stream, phi_sums
from .laurent_engine import (
    TAIL_MODEL,
    EKEstimate,
    LaurentRequest,
    coeff_partials,
    corrected_partials,
    default_checkpoints,
    extrapolate,
    integral_partials,
)
from .number_fields import FieldSpec
from .special_functions import R_MAX, f_recursive, gamma_tilde_deriv, polygamma_at

__all__ = [
    "MIN_CONVERGED_X",
    "ZeroTable",
    "ZeroTableError",
    "LiCoefficient",
    "DedekindStieltjes",
    "BoundReport",
    "load_zero_table",
    "bundled_zeta_zeros",
    "ek_dirichlet",
    "ek_ihara",
    "ek_integral",
    "ek_zero_sum",
    "li_coefficient",
    "stieltjes_dedekind",
    "estimate_residue",
    "grh_main_term",
    "uncond_scale",
    "grh_bound",
]

# below this truncation point estimates are always flagged unconverged
MIN_CONVERGED_X = 1e3


class ZeroTableError(ValueError):
    pass


def _check_r(r: int, lowest: int = 0) -> None:
    if not lowest <= r <= R_MAX:
        raise ValueError(f"r must lie in [{lowest}, {R_MAX}], got {r}")


def _summarise(route, field_label, r, pairs, raw, scale, shift, x_max, extra=None) -> EKEstimate:
    """Turn (x, partial) pairs into an estimate of scale * lim + shift."""
    flags = []
    xs = [x for x, _ in pairs]
    try:
        c, bar = extrapolate(_FitR(r), pairs)
    except ValueError:
        flags.append("unconverged")
        vals = [v for _, v in pairs]
        c = vals[-1]
        bar = max(abs(v - c) for v in vals) if len(vals) > 1 else abs(c)
    if x_max < MIN_CONVERGED_X and "unconverged" not in flags:
        flags.append("unconverged")
    meta = {
        "tail_model": TAIL_MODEL,
        "checkpoints": xs,
        "last_partial": scale * pairs[-1][1] + shift,
        "flags": flags,
    }
    if extra:
        meta.update(extra)
    return EKEstimate(
        value=scale * c + shift,
        route=route,
        x_used=float(xs[-1]),
        error_bar=abs(scale) * bar,
        raw_partial=scale * raw + shift,
        r=r,
        field_label=field_label,
        metadata=meta,
    )


def _checkpoints(checkpoints, x_max) -> list[float]:
    if checkpoints is None or len(checkpoints) == 0:
        return default_checkpoints(x_max)
    return [float(x) for x in checkpoints]


@dataclass(frozen=True)
class _FitR:
    """Minimal stand-in carrying ``r`` for ``extrapolate``."""

    r: int


def _stream_for(field: FieldSpec, x_max: float, stream: CoeffStream | None, threads: int) -> CoeffStream:
    if stream is not None:
        if stream.kind != "von_mangoldt":
            raise ValueError("expected a von_mangoldt stream")
        if stream.x_max < math.floor(x_max):
            raise ValueError(f"stream covers only x <= {stream.x_max}, need {x_max}")
        return stream
    return lambda_stream(field, int(x_max), threads=threads)


def ek_dirichlet(
    field: FieldSpec,
    r: int,
    x_max: float,
    *,
    checkpoints: Sequence[float] | None = None,
    stream: CoeffStream | None = None,
    threads: int = 1,
) -> EKEstimate:
    _check_r(r)
    x_max = int(x_max)
    stream = _stream_for(field, x_max, stream, threads)
    cps = _checkpoints(checkpoints, x_max)
    req = LaurentRequest(stream, 1.0, r, cps)
    raw = coeff_partials(req)
    corr = corrected_partials(req)
    scale = (-1) ** (r + 1) / math.factorial(r)
    return _summarise("dirichlet", field.label, r, list(zip(cps, corr)), raw[-1], scale, 0.0, x_max,
                      {"boundary_corrected": True})


def _ihara_partials(stream: CoeffStream, r: int, xs: Sequence[float]) -> list[float]:
    out = []
    for x, (A, B, _) in zip(xs, phi_sums(stream.records, r, xs)):
        phi_val = math.fsum([x * A, -B]) / (x - 1.0)
        out.append(phi_val - f_recursive(r, float(x)))
    return out


def ek_ihara(
    field: FieldSpec,
    r: int,
    x_max: float,
    *,
    checkpoints: Sequence[float] | None = None,
    stream: CoeffStream | None = None,
    threads: int = 1,
) -> EKEstimate:
    _check_r(r)
    cps = _checkpoints(checkpoints, x_max)
    if any(x <= 1 for x in cps):
        raise ValueError("Phi_K(r, x) needs x > 1")
    stream = _stream_for(field, max(2, math.floor(max(cps))), stream, threads)
    vals = _ihara_partials(stream, r, cps)
    scale = (-1) ** (r + 1) / math.factorial(r)
    return _summarise("ihara", field.label, r, list(zip(cps, vals)), vals[-1], scale, -((-1) ** r), cps[-1])


def ek_integral(
    field: FieldSpec,
    r: int,
    x_max: float,
    *,
    checkpoints: Sequence[float] | None = None,
    stream: CoeffStream | None = None,
    threads: int = 1,
) -> EKEstimate:
    _check_r(r, lowest=1)
    x_max = int(x_max)
    stream = _stream_for(field, x_max, stream, threads)
    cps = _checkpoints(checkpoints, x_max)
    vals = integral_partials(stream, r, cps)
    return _summarise("integral", field.label, r, list(zip(cps, vals)), vals[-1], 1.0, 0.0, x_max)


# ---------------------------------------------------------------------------
# zero sums


@dataclass(frozen=True)
class ZeroTable:
    """Positive ordinates of nontrivial zeros, each taken as 1/2 + i*t.

    Repeated ordinates stand for zeros of higher multiplicity.
    """

    ordinates: np.ndarray
    source_label: str = ""

    def __len__(self):
        return len(self.ordinates)


def load_zero_table(source, min_first: float = 6.0, label: str | None = None) -> ZeroTable:
    """Read one ordinate per line; '#' starts a comment."""
    if isinstance(source, (bytes, bytearray)):
        text, name = source.decode("utf-8"), label or "<bytes>"
    elif hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        name = label or getattr(source, "name", "<stream>")
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
        name = label or str(source)
    vals = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            t = float(line)
        except ValueError:
            raise ZeroTableError(f"{name}:{lineno}: not a number: {line!r}") from None
        if not t > 0 or not math.isfinite(t):
            raise ZeroTableError(f"{name}:{lineno}: ordinates must be positive and finite")
        if vals and t < vals[-1]:
            raise ZeroTableError(f"{name}:{lineno}: ordinates must be increasing ({t} after {vals[-1]})")
        vals.append(t)
    if vals and vals[0] <= min_first:
        raise ZeroTableError(f"{name}: first ordinate {vals[0]} is not above the sanity threshold {min_first}")
    return ZeroTable(np.array(vals, dtype=float), name)


def bundled_zeta_zeros() -> ZeroTable:
    """Ordinates of the zeros of the Riemann zeta function below 10^4."""
    ref = resources.files("ekron") / "data" / "zeta_zeros.txt"
    with ref.open("rb") as fh:
        return load_zero_table(fh, label="zeta zeros 0<t<1e4")


def zero_tail_bound(field: FieldSpec, r: int, T: float, density_constant: float = 1.0) -> float:
    """c * int_T^oo (n_K log t + log|d_K|) t^-(r+1) dt."""
    logd = math.log(abs(field.disc))
    return density_constant * T**-r * (field.degree * (math.log(T) / r + 1.0 / r**2) + logd / r)


def ek_zero_sum(field: FieldSpec, r: int, zeros: ZeroTable, density_constant: float = 1.0) -> EKEstimate:
    if r == 0:
        raise ValueError("the zero sum converges only conditionally for r = 0; use r >= 1")
    _check_r(r, lowest=1)
    if len(zeros) == 0:
        raise ZeroTableError("zero table is empty")
    w = (0.5 - 1j * zeros.ordinates) ** -(r + 1)
    pair_sum = (-1) ** r * 2.0 * fsum(w.real)
    gt = gamma_tilde_deriv(field, r).value / math.factorial(r)
    value = math.fsum([(-1) ** (r + 1), pair_sum, -gt])
    T = float(zeros.ordinates[-1])
    return EKEstimate(
        value=value,
        route="zero_sum",
        x_used=T,
        error_bar=zero_tail_bound(field, r, T, density_constant),
        raw_partial=value,
        r=r,
        field_label=field.label,
        metadata={
            "tail_model": f"zero-density tail, constant {density_constant:g} (heuristic)",
            "zeros": len(zeros),
            "zero_source": zeros.source_label,
            "flags": [],
        },
    )


# ---------------------------------------------------------------------------
# Li coefficients


@dataclass(frozen=True)
class LiCoefficient:
    n: int
    value: float
    inputs_x: float
    error_bar: float = 0.0


def _log_xi_taylor(field: FieldSpec, gammas: Mapping[int, float], order: int) -> list[float]:
    """Taylor coefficients a_1..a_order of log xi_K at s = 1 (a_0 is never needed)."""
    logA = 0.5 * math.log(abs(field.disc)) - field.r2 * math.log(2) - field.degree / 2 * math.log(math.pi)
    a = [0.0]
    for j in range(order):
        c = [(-1) ** j, gammas[j]]
        if j == 0:
            c.append(logA)
        c.append(field.r1 / 2 * polygamma_at(0.5, j) / (math.factorial(j) * 2**j))
        c.append(field.r2 * polygamma_at(1, j) / math.factorial(j))
        a.append(math.fsum(c) / (j + 1))
    return a


def li_coefficient(field: FieldSpec, n: int, ek_inputs: Iterable[EKEstimate]) -> LiCoefficient:
    """lambda_n = n sum_{k=0}^{n-1} C(n-1, k) a_{n-k} with a_j the Taylor coefficients of log xi_K."""
    if not 1 <= n <= R_MAX:
        raise ValueError(f"n must lie in [1, {R_MAX}], got {n}")
    by_r = {e.r: e for e in ek_inputs}
    missing = [r for r in range(n) if r not in by_r]
    if missing:
        raise ValueError(f"missing gamma_(K,r) inputs for r = {missing}")
    a = _log_xi_taylor(field, {r: by_r[r].value for r in range(n)}, n)
    value = n * math.fsum(math.comb(n - 1, k) * a[n - k] for k in range(n))
    bar = n * sum(math.comb(n - 1, k) * by_r[n - k - 1].error_bar / (n - k) for k in range(n))
    return LiCoefficient(n, value, min(by_r[r].x_used for r in range(n)), bar)


# ---------------------------------------------------------------------------
# Dedekind Stieltjes constants


@dataclass(frozen=True)
class DedekindStieltjes:
    n: int
    value: float
    error_bar: float
    residue: float
    residue_estimated: bool
    x_used: float
    raw_partial: float
    field_label: str
    flags: tuple[str, ...] = ()


def estimate_residue(stream: CoeffStream, decades: float = 2.0, points: int = 64) -> float:
    """Slope through the origin of sum_{n<=x} a_K(n) against x over the last decades."""
    if stream.kind != "ideal_count":
        raise ValueError("residue estimation needs an ideal_count stream")
    if stream.x_max < MIN_CONVERGED_X:
        raise ValueError(f"x_max={stream.x_max} is too small to estimate the residue")
    xs = np.geomspace(stream.x_max / 10**decades, stream.x_max, points)
    counts = np.cumsum(stream.values)
    A = counts[np.floor(xs).astype(np.int64) - 1].astype(float)
    return float(A @ xs / (xs @ xs))


def stieltjes_dedekind(
    field: FieldSpec,
    n: int,
    x_max: float,
    residue: float | None = None,
    *,
    checkpoints: Sequence[float] | None = None,
    stream: CoeffStream | None = None,
) -> DedekindStieltjes:
    """Laurent coefficient s_{K,n} of zeta_K at s=1 from the ideal-count limit formula.

    For n = 0 the residue is added to the limit, as in the displayed n = 0
    formula.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    _check_r(n)
    scale = (-1) ** n / math.factorial(n)
    shift_n0 = 1.0 if n == 0 else 0.0
    if x_max < 2:
        if residue is None:
            raise ValueError("x_max too small for residue estimation")
        x = float(x_max)
        inner = -residue * math.log(x) ** (n + 1) / (n + 1)
        v = scale * inner + shift_n0 * residue
        return DedekindStieltjes(n, v, abs(v), residue, False, x, v, field.label, ("unconverged",))
    x_max = int(x_max)
    if stream is None:
        stream = ideal_count_stream(field, x_max)
    estimated = residue is None
    if estimated:
        residue = estimate_residue(stream)
    cps = _checkpoints(checkpoints, x_max)
    req = LaurentRequest(stream, residue, n, cps)
    raw = coeff_partials(req)
    corr = corrected_partials(req)
    flags = ["estimated residue"] if estimated else []
    try:
        c, bar = extrapolate(req, list(zip(cps, corr)))
    except ValueError:
        c, bar = corr[-1], abs(corr[-1] - corr[0]) if len(corr) > 1 else abs(corr[-1])
        flags.append("unconverged")
    return DedekindStieltjes(
        n=n,
        value=scale * c + shift_n0 * residue,
        error_bar=abs(scale) * bar,
        residue=residue,
        residue_estimated=estimated,
        x_used=float(cps[-1]),
        raw_partial=scale * raw[-1] + shift_n0 * residue,
        field_label=field.label,
        flags=tuple(flags),
    )


# ---------------------------------------------------------------------------
# bound diagnostics


@dataclass(frozen=True)
class BoundReport:
    r: int
    field_label: str
    gamma_value: float
    grh_main_term: float
    uncond_scale: float
    ratio: float

    @property
    def grh_ratio(self) -> float:
        return self.gamma_value / self.grh_main_term


def _abs_disc(field: FieldSpec) -> int:
    d = abs(field.disc)
    if d < 3:
        raise ValueError(f"|d_K| = {d} < 3: iterated logarithms are undefined")
    return d


def grh_main_term(field: FieldSpec, r: int, abs_disc: float | None = None) -> float:
    """(2^(r+1)/r!) (log r + log_2|d| + 2 log_3|d|)^(r+1) (-/+ 1/(r+1)), sign - for odd r."""
    if r < 1:
        raise ValueError("bounds are stated for r >= 1")
    d = float(abs_disc) if abs_disc is not None else _abs_disc(field)
    l2 = math.log(math.log(d))
    base = math.log(r) + l2 + 2 * math.log(l2)
    sign = -1.0 if r % 2 else 1.0
    return 2 ** (r + 1) / math.factorial(r) * base ** (r + 1) * sign / (r + 1)


def uncond_scale(field: FieldSpec, r: int) -> float:
    """(4 log|d_K|)^(r+2)."""
    if r < 1:
        raise ValueError("bounds are stated for r >= 1")
    return (4 * math.log(_abs_disc(field))) ** (r + 2)


def grh_bound(
    field: FieldSpec, r: int, gamma_value: float | EKEstimate | None = None, x_max: float = 1e6
) -> BoundReport:
    """Explicit main terms next to a computed gamma_{K,r}; a report, not a check."""
    scale = uncond_scale(field, r)
    main = grh_main_term(field, r)
    if gamma_value is None:
        gamma_value = ek_dirichlet(field, r, x_max)
    if isinstance(gamma_value, EKEstimate):
        gamma_value = gamma_value.value
    return BoundReport(r, field.label, float(gamma_value), main, scale, abs(gamma_value) / scale)
