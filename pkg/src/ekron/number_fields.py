"""Analytic descriptions of number fields and rational-prime splitting.

Built-in families are the rationals, quadratic fields (stored by their
fundamental discriminant) and cyclotomic fields. Anything else is a
``custom`` field whose splitting data comes from a CSV table.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = [
    "FieldSpec",
    "LocalSplitting",
    "SplittingTable",
    "SplittingDataError",
    "field_rational",
    "field_from_quadratic",
    "field_from_fundamental_discriminant",
    "field_from_cyclotomic",
    "field_from_table",
    "split_prime",
    "load_splitting_table",
    "kronecker_symbol",
    "is_fundamental_discriminant",
    "is_squarefree",
    "euler_phi",
    "multiplicative_order",
]


class SplittingDataError(ValueError):
    """Splitting information is missing or inconsistent."""


# ---------------------------------------------------------------------------
# elementary arithmetic


def factorize(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def euler_phi(m: int) -> int:
    out = m
    for p in factorize(m):
        out = out // p * (p - 1)
    return out


def multiplicative_order(a: int, m: int) -> int:
    """Order of ``a`` in (Z/mZ)^x; ``m == 1`` gives 1."""
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    a %= m
    k, x = 1, a
    while x != 1:
        x = x * a % m
        k += 1
    return k


def kronecker_symbol(a: int, n: int) -> int:
    """The Kronecker symbol (a/n) for arbitrary integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class LocalSplitting:
    """Factorisation shape of p O_K as (e, f, g) triples.

    Each triple says that ``g`` prime ideals above ``p`` have ramification
    index ``e`` and residue degree ``f``.
    """

    p: int
    factors: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(tuple(int(v) for v in t) for t in self.factors))
        for e, f, g in self.factors:
            if e < 1 or f < 1 or g < 1:
                raise SplittingDataError(f"p={self.p}: factor {(e, f, g)} has a non-positive entry")

    @property
    def degree(self) -> int:
        return sum(e * f * g for e, f, g in self.factors)

    @property
    def ramified(self) -> bool:
        return any(e > 1 for e, _, _ in self.factors)

    def ideals(self) -> Iterable[tuple[int, int]]:
        """Yield ``(f, g)`` for every factor shape, ignoring ramification."""
        for _, f, g in self.factors:
            yield f, g


@dataclass(frozen=True)
class SplittingTable:
    entries: Mapping[int, LocalSplitting] = dc_field(default_factory=dict)
    default_rule: str | None = None
    n_K: int | None = None
    r1: int | None = None
    r2: int | None = None
    disc: int | None = None

    def lookup(self, p: int, n_K: int) -> LocalSplitting:
        if p in self.entries:
            return self.entries[p]
        if self.default_rule == "split":
            return LocalSplitting(p, ((1, 1, n_K),))
        if self.default_rule == "inert":
            return LocalSplitting(p, ((1, n_K, 1),))
        raise SplittingDataError(
            f"insufficient splitting data: prime {p} is not in the table and no default rule is set"
        )

    @property
    def max_prime(self) -> int:
        return max(self.entries, default=1)


_DEFAULT_RULES = ("split", "inert")


@dataclass(frozen=True)
class FieldSpec:
    """Degree, signature and discriminant of a number field.

    ``param`` holds the defining parameter of built-in families: the
    fundamental discriminant for ``quadratic`` and the conductor for
    ``cyclotomic``.
    """

    kind: str
    degree: int
    r1: int
    r2: int
    disc: int
    label: str
    param: int | None = None
    table: SplittingTable | None = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("rational", "quadratic", "cyclotomic", "custom"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.degree < 1 or self.r1 < 0 or self.r2 < 0:
            raise ValueError("degree must be positive and the signature nonnegative")
        if self.degree != self.r1 + 2 * self.r2:
            raise ValueError(f"signature ({self.r1}, {self.r2}) does not match degree {self.degree}")
        if self.disc == 0:
            raise ValueError("discriminant must be nonzero")

    @property
    def conductor(self) -> int:
        """Modulus determining the splitting of unramified primes (1 for Q, |D|, m)."""
        if self.kind == "quadratic":
            return abs(self.param)
        if self.kind == "cyclotomic":
            return self.param
        return 1


def field_rational() -> FieldSpec:
    return FieldSpec("rational", 1, 1, 0, 1, "Q")


def field_from_fundamental_discriminant(D: int) -> FieldSpec:
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    d = D if D % 4 == 1 else D // 4
    r1, r2 = (2, 0) if D > 0 else (0, 1)
    return FieldSpec("quadratic", 2, r1, r2, D, f"Q(sqrt({d}))", param=D)


def field_from_quadratic(d: int) -> FieldSpec:
    """Quadratic field Q(sqrt(d)) for a squarefree integer d not in {0, 1}."""
    if d in (0, 1):
        raise ValueError(f"d={d} does not define a quadratic field")
    if not is_squarefree(d):
        sq = {p: e for p, e in factorize(d).items() if e > 1}
        raise ValueError(
            f"d={d} is not squarefree (divisible by {', '.join(f'{p}^2' for p in sq)}); "
            "pass the squarefree part instead"
        )
    D = d if d % 4 == 1 else 4 * d
    return field_from_fundamental_discriminant(D)


def cyclotomic_discriminant(m: int) -> int:
    phi = euler_phi(m)
    den = 1
    for p in factorize(m):
        den *= p ** (phi // (p - 1))
    sign = -1 if (phi // 2) % 2 else 1
    return sign * m**phi // den


def field_from_cyclotomic(m: int) -> FieldSpec:
    if m <= 2 or m % 4 == 2:
        hint = f"; use conductor {m // 2} instead" if m > 2 and m % 4 == 2 else ""
        raise ValueError(f"cyclotomic conductor must be >= 3 and not 2 mod 4, got {m}{hint}")
    phi = euler_phi(m)
    return FieldSpec("cyclotomic", phi, 0, phi // 2, cyclotomic_discriminant(m), f"Q(zeta_{m})", param=m)


def field_from_table(table: SplittingTable, label: str = "custom") -> FieldSpec:
    if None in (table.n_K, table.r1, table.r2, table.disc):
        raise SplittingDataError("custom fields need n_K, r1, r2 and disc in the table header")
    return FieldSpec("custom", table.n_K, table.r1, table.r2, table.disc, label, table=table)


# ---------------------------------------------------------------------------
# splitting


@lru_cache(maxsize=None)
def _cyclotomic_unramified(m: int, residue: int) -> tuple[tuple[int, int, int], ...]:
    f = multiplicative_order(residue, m)
    return ((1, f, euler_phi(m) // f),)


def residue_splitting(field: FieldSpec, residue: int) -> tuple[tuple[int, int, int], ...]:
    """Factor shapes shared by all unramified primes congruent to ``residue``."""
    if field.kind == "rational":
        return ((1, 1, 1),)
    if field.kind == "quadratic":
        chi = kronecker_symbol(field.param, residue)
        if chi == 1:
            return ((1, 1, 2),)
        if chi == -1:
            return ((1, 2, 1),)
        raise ValueError(f"residue {residue} is not coprime to {field.param}")
    if field.kind == "cyclotomic":
        return _cyclotomic_unramified(field.param, residue % field.param)
    raise ValueError("custom fields have no residue-class splitting law")


def split_prime(field: FieldSpec, p: int) -> LocalSplitting:
    """How the rational prime ``p`` factors in ``field``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return split_known_prime(field, p)


def split_known_prime(field: FieldSpec, p: int) -> LocalSplitting:
    """``split_prime`` without the primality check, for sieved primes."""
    if field.kind == "custom":
        loc = field.table.lookup(p, field.degree)
        if loc.degree != field.degree:
            raise SplittingDataError(f"p={p}: sum of e*f*g is {loc.degree}, expected {field.degree}")
        return loc
    if field.kind == "rational":
        return LocalSplitting(p, ((1, 1, 1),))
    if field.kind == "quadratic":
        chi = kronecker_symbol(field.param, p)
        shape = {1: (1, 1, 2), -1: (1, 2, 1), 0: (2, 1, 1)}[chi]
        return LocalSplitting(p, (shape,))
    m = field.param
    if m % p:
        return LocalSplitting(p, _cyclotomic_unramified(m, p % m))
    a, mp = 0, m
    while mp % p == 0:
        mp //= p
        a += 1
    e = p ** (a - 1) * (p - 1)
    f = multiplicative_order(p, mp)
    return LocalSplitting(p, ((e, f, euler_phi(mp) // f),))


# ---------------------------------------------------------------------------
# CSV ingestion


def _parse_header(text: str, lineno: int) -> dict[str, str]:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise SplittingDataError(f"line {lineno}: malformed header item {part!r}")
        key, val = (s.strip() for s in part.split("=", 1))
        out[key] = val
    return out


def load_splitting_table(source) -> SplittingTable:
    """Parse a splitting table from bytes, text, or a binary/text stream.

    The header comment ``# n_K=2, r1=0, r2=1, disc=-4`` declares the field;
    an optional ``default=split`` or ``default=inert`` item covers primes
    missing from the table. Data lines are ``p,e,f,g`` and a prime may
    repeat to list several factor shapes.
    """
    if isinstance(source, (bytes, bytearray)):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw

    header: dict[str, str] = {}
    rows: dict[int, list[tuple[int, int, int]]] = {}
    first_line: dict[int, int] = {}
    closed: set[int] = set()
    last_p = None
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                header.update(_parse_header(body, lineno))
            continue
        parts = [s.strip() for s in line.split(",")]
        if len(parts) != 4:
            raise SplittingDataError(f"line {lineno}: expected 'p,e,f,g', got {line!r}")
        try:
            p, e, f, g = (int(s) for s in parts)
        except ValueError:
            raise SplittingDataError(f"line {lineno}: non-integer field in {line!r}") from None
        if not is_prime(p):
            raise SplittingDataError(f"line {lineno}: {p} is not prime")
        if min(e, f, g) < 1:
            raise SplittingDataError(f"line {lineno}: e, f, g must be positive")
        if p != last_p and p in closed:
            raise SplittingDataError(f"line {lineno}: duplicate prime {p} (first listed on line {first_line[p]})")
        if last_p is not None and p != last_p:
            closed.add(last_p)
        rows.setdefault(p, []).append((e, f, g))
        first_line.setdefault(p, lineno)
        last_p = p

    ints = {}
    for key in ("n_K", "r1", "r2", "disc"):
        if key in header:
            try:
                ints[key] = int(header[key])
            except ValueError:
                raise SplittingDataError(f"header: {key}={header[key]!r} is not an integer") from None
    default = header.get("default")
    if default is not None and default not in _DEFAULT_RULES:
        raise SplittingDataError(f"header: unknown default rule {default!r}")
    n_K = ints.get("n_K")
    if rows and n_K is None:
        raise SplittingDataError("table has data rows but no declared n_K header")

    entries = {}
    for p, factors in rows.items():
        loc = LocalSplitting(p, tuple(factors))
        if loc.degree != n_K:
            raise SplittingDataError(
                f"line {first_line[p]}: prime {p} has sum e*f*g = {loc.degree}, expected n_K={n_K}"
            )
        entries[p] = loc
    return SplittingTable(
        entries=entries,
        default_rule=default,
        n_K=n_K,
        r1=ints.get("r1"),
        r2=ints.get("r2"),
        disc=ints.get("disc"),
    )
