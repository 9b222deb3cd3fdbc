"""Dirichlet coefficient streams of a Dedekind zeta function.

``lambda_stream`` produces the von Mangoldt coefficients Lambda_K(n) of
-zeta_K'/zeta_K by a segmented sieve over rational primes, keeping for each
prime-ideal power P^k its provenance (p, log N(P), k, multiplicity).
``ideal_count_stream`` produces a_K(n), the number of integral ideals of
norm n, as a dense integer array.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterator

import numpy as np

from ._summation import fsum
from .number_fields import (
    FieldSpec,
    LocalSplitting,
    residue_splitting,
    split_known_prime,
)

__all__ = [
    "DEFAULT_BLOCK_SIZE",
    "MAX_INDEX",
    "PrimePowerRecords",
    "CoeffStream",
    "PhiValue",
    "primes_up_to",
    "prime_blocks",
    "lambda_stream",
    "ideal_count_stream",
    "delta",
    "phi",
    "export_stream_csv",
]

DEFAULT_BLOCK_SIZE = 1 << 20
MAX_INDEX = 1 << 62


def primes_up_to(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _sieve_block(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi) given all primes up to sqrt(hi)."""
    mask = np.ones(hi - lo, dtype=bool)
    if lo <= 1:
        mask[: 2 - lo] = False
    for p in base.tolist():
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        mask[start - lo :: p] = False
    return lo + np.flatnonzero(mask).astype(np.int64)


def prime_blocks(x_max: int, block_size: int = DEFAULT_BLOCK_SIZE) -> Iterator[tuple[int, int]]:
    lo = 2
    while lo <= x_max:
        hi = min(lo + block_size, x_max + 1)
        yield lo, hi
        lo = hi


@dataclass(frozen=True)
class PrimePowerRecords:
    """One row per (shape of prime ideal P above p, exponent k) with N(P)^k <= x_max.

    ``mult`` counts the prime ideals above ``p`` sharing the residue degree,
    so a row stands for ``mult`` identical pairs (P, k).
    """

    norm: np.ndarray
    p: np.ndarray
    log_norm: np.ndarray
    k: np.ndarray
    mult: np.ndarray

    def __len__(self):
        return len(self.norm)

    @classmethod
    def concatenate(cls, parts: list["PrimePowerRecords"]) -> "PrimePowerRecords":
        if not parts:
            z = np.zeros(0, dtype=np.int64)
            return cls(z, z, np.zeros(0), z, z)
        norm = np.concatenate([q.norm for q in parts])
        p = np.concatenate([q.p for q in parts])
        log_norm = np.concatenate([q.log_norm for q in parts])
        k = np.concatenate([q.k for q in parts])
        mult = np.concatenate([q.mult for q in parts])
        order = np.lexsort((log_norm, p, norm))
        return cls(norm[order], p[order], log_norm[order], k[order], mult[order])


def _records_for_shape(primes: np.ndarray, f: int, g: int, x_max: int) -> PrimePowerRecords:
    parts = []
    logp = np.log(primes.astype(float))
    logx = math.log(x_max)
    k = 1
    while True:
        cand = (f * k) * logp <= logx + 1e-9
        if not cand.any():
            break
        ps = primes[cand]
        # the log filter keeps p^(fk) below 2^63
        pw = ps ** (f * k)
        keep = pw <= x_max
        ps = ps[keep]
        if len(ps):
            parts.append(
                PrimePowerRecords(
                    norm=pw[keep],
                    p=ps,
                    log_norm=f * np.log(ps.astype(float)),
                    k=np.full(len(ps), k, dtype=np.int64),
                    mult=np.full(len(ps), g, dtype=np.int64),
                )
            )
        k += 1
    return PrimePowerRecords.concatenate(parts) if parts else PrimePowerRecords.concatenate([])


def _block_records(field: FieldSpec, primes: np.ndarray, x_max: int) -> PrimePowerRecords:
    parts = []
    if field.kind == "custom":
        shapes: dict[tuple[int, int], list[int]] = {}
        for q in primes.tolist():
            for f, g in split_known_prime(field, q).ideals():
                shapes.setdefault((f, g), []).append(q)
        for (f, g), qs in shapes.items():
            parts.append(_records_for_shape(np.array(qs, dtype=np.int64), f, g, x_max))
        return PrimePowerRecords.concatenate(parts)

    m = field.conductor
    residues = primes % m if m > 1 else np.zeros(len(primes), dtype=np.int64)
    special = np.gcd(primes, m) != 1 if m > 1 else np.zeros(len(primes), dtype=bool)
    for q in primes[special].tolist():
        loc: LocalSplitting = split_known_prime(field, q)
        for f, g in loc.ideals():
            parts.append(_records_for_shape(np.array([q], dtype=np.int64), f, g, x_max))
    ordinary = ~special
    for c in np.unique(residues[ordinary]).tolist():
        sel = primes[ordinary & (residues == c)]
        for _, f, g in residue_splitting(field, c if m > 1 else 1):
            parts.append(_records_for_shape(sel, f, g, x_max))
    return PrimePowerRecords.concatenate(parts)


def prime_power_records(
    field: FieldSpec, x_max: int, block_size: int = DEFAULT_BLOCK_SIZE, threads: int = 1
) -> PrimePowerRecords:
    if x_max < 2:
        raise ValueError(f"x_max must be >= 2, got {x_max}")
    if x_max >= MAX_INDEX:
        raise OverflowError(f"x_max={x_max} exceeds the supported index range {MAX_INDEX}")
    base = primes_up_to(math.isqrt(x_max) + 1)

    def work(bounds):
        lo, hi = bounds
        return _block_records(field, _sieve_block(lo, hi, base), x_max)

    blocks = list(prime_blocks(x_max, block_size))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    return PrimePowerRecords.concatenate(parts)


@dataclass(frozen=True)
class CoeffStream:
    """Dirichlet coefficients b_n for n <= x_max, stored as sorted (n, value) pairs.

    For ``von_mangoldt`` streams only prime-power indices are stored and
    ``records`` keeps the prime-ideal provenance of each value. For
    ``ideal_count`` streams ``n`` is 1..x_max and ``values`` are integers.
    """

    x_max: int
    kind: str
    n: np.ndarray
    values: np.ndarray
    field_label: str
    field: FieldSpec | None = dc_field(default=None, compare=False, repr=False)
    records: PrimePowerRecords | None = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("von_mangoldt", "ideal_count"):
            raise ValueError(f"unknown stream kind {self.kind!r}")

    def value_at(self, n: int) -> float:
        i = np.searchsorted(self.n, n)
        if i < len(self.n) and self.n[i] == n:
            return self.values[i].item()
        if not 1 <= n <= self.x_max:
            raise IndexError(f"n={n} outside 1..{self.x_max}")
        return 0


def lambda_stream(
    field: FieldSpec, x_max: int, block_size: int = DEFAULT_BLOCK_SIZE, threads: int = 1
) -> CoeffStream:
    """Lambda_K(n) for n <= x_max.

    Each factor (e, f, g) of p contributes g * f * log p at n = p^(f k).
    """
    x_max = int(x_max)
    rec = prime_power_records(field, x_max, block_size, threads)
    if len(rec) == 0:
        z = np.zeros(0, dtype=np.int64)
        return CoeffStream(x_max, "von_mangoldt", z, np.zeros(0), field.label, field, rec)
    w = rec.mult * rec.log_norm
    starts = np.flatnonzero(np.r_[True, rec.norm[1:] != rec.norm[:-1]])
    n = rec.norm[starts]
    vals = np.add.reduceat(w, starts)
    return CoeffStream(x_max, "von_mangoldt", n, vals, field.label, field, rec)


def _local_counts(loc: LocalSplitting, p: int, J: int) -> list[int]:
    """Number of ideals of norm p^j above p for j = 0..J."""
    c = [1] + [0] * J
    for f, g in loc.ideals():
        for _ in range(g):
            for j in range(f, J + 1):
                c[j] += c[j - f]
    return c


def ideal_count_stream(field: FieldSpec, x_max: int, block_size: int = DEFAULT_BLOCK_SIZE) -> CoeffStream:
    """a_K(n) for 1 <= n <= x_max, assembled multiplicatively from local factors."""
    x_max = int(x_max)
    if x_max < 2:
        raise ValueError(f"x_max must be >= 2, got {x_max}")
    if x_max >= MAX_INDEX:
        raise OverflowError(f"x_max={x_max} exceeds the supported index range")
    a = np.ones(x_max + 1, dtype=np.int64)
    a[0] = 0
    root = math.isqrt(x_max)
    base = primes_up_to(root + 1)
    for lo, hi in prime_blocks(x_max, block_size):
        for p in _sieve_block(lo, hi, base).tolist():
            loc = split_known_prime(field, p)
            if p <= root:
                J = int(math.log(x_max) / math.log(p)) + 1
                while p**J > x_max:
                    J -= 1
                c = np.array(_local_counts(loc, p, J), dtype=np.int64)
                idx = np.arange(p, x_max + 1, p)
                v = np.ones(len(idx), dtype=np.int64)
                q = idx // p
                while True:
                    hit = q % p == 0
                    if not hit.any():
                        break
                    v[hit] += 1
                    q[hit] //= p
                a[idx] *= c[v]
            else:
                c1 = sum(g for _, f, g in loc.factors if f == 1)
                if c1 != 1:
                    a[p::p] *= c1
    n = np.arange(1, x_max + 1, dtype=np.int64)
    return CoeffStream(x_max, "ideal_count", n, a[1:], field.label, field)


def delta(stream: CoeffStream, x: float) -> float:
    """Delta_K(x) = sum_{n <= x} Lambda_K(n) - x."""
    if stream.kind != "von_mangoldt":
        raise ValueError("delta needs a von_mangoldt stream")
    if x > stream.x_max:
        raise ValueError(f"x={x} exceeds the stream range x_max={stream.x_max}")
    i = np.searchsorted(stream.n, x, side="right")
    return math.fsum([fsum(stream.values[:i]), -float(x)])


@dataclass(frozen=True)
class PhiValue:
    r: int
    x: float
    value: float
    term_count: int


def phi_sums(records: PrimePowerRecords, r: int, xs) -> list[tuple[float, float, int]]:
    """Prefix sums (sum w/N, sum w, count) at each x, w = mult k^r (log N(P))^(r+1)."""
    from ._summation import prefix_sums

    w = records.mult * records.k.astype(float) ** r * records.log_norm ** (r + 1)
    A = prefix_sums(records.norm, w / records.norm, xs)
    B = prefix_sums(records.norm, w, xs)
    counts = np.searchsorted(records.norm, np.asarray(xs, dtype=float), side="right")
    return [(a, b, int(c)) for a, b, c in zip(A, B, counts)]


def phi(field: FieldSpec, r: int, x: float, stream: CoeffStream | None = None) -> PhiValue:
    """Phi_K(r, x) = 1/(x-1) sum_{N(P)^k <= x} (x/N(P)^k - 1) k^r (log N(P))^(r+1)."""
    if not x > 1:
        raise ValueError(f"phi needs x > 1, got {x}")
    if r < 0:
        raise ValueError("r must be nonnegative")
    if stream is None:
        stream = lambda_stream(field, max(2, math.floor(x)))
    if stream.records is None:
        raise ValueError("phi needs a von_mangoldt stream carrying prime-ideal records")
    if math.floor(x) > stream.x_max:
        raise ValueError(f"x={x} exceeds the stream range x_max={stream.x_max}")
    rec = stream.records
    i = np.searchsorted(rec.norm, x, side="right")
    N = rec.norm[:i].astype(float)
    terms = (x / N - 1.0) * rec.mult[:i] * rec.k[:i].astype(float) ** r * rec.log_norm[:i] ** (r + 1)
    return PhiValue(r, float(x), fsum(terms) / (x - 1.0), int(i))


def export_stream_csv(stream: CoeffStream, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "value"])
        for n, v in zip(stream.n.tolist(), stream.values.tolist()):
            w.writerow([n, format(v, ".17g") if isinstance(v, float) else v])
