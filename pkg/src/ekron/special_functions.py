"""Zeta values, polygamma values at 1 and 1/2, gamma-factor derivatives
and the f(r, x) main-term recursion used by the Ihara-type limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .number_fields import FieldSpec

__all__ = [
    "EULER_GAMMA",
    "R_MAX",
    "GammaTildeValue",
    "zeta_value",
    "odd_zeta_sum",
    "polygamma_at",
    "gamma_tilde_deriv",
    "f_recursive",
]

# Euler's constant. Reproduced in the tests by H_n - log n with the
# Euler-Maclaurin correction 1/(2n) - 1/(12n^2) + 1/(120n^4) - ...
EULER_GAMMA = 0.57721566490153286060651209008240243

R_MAX = 10


def _bernoulli_even(k: int) -> list[Fraction]:
    """B_2, B_4, ..., B_2k as exact fractions."""
    B = [Fraction(1)]
    for m in range(1, 2 * k + 1):
        B.append(-sum(math.comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return [B[2 * i] for i in range(1, k + 1)]


_B2K = [float(b) for b in _bernoulli_even(8)]


@lru_cache(maxsize=None)
def zeta_value(m: int) -> float:
    """zeta(m) for integer m >= 2.

    Direct sum to N - 1 plus the Euler-Maclaurin tail
    N^(1-m)/(m-1) + N^-m/2 + sum_k B_2k/(2k)! * m(m+1)...(m+2k-2) N^(-m-2k+1).
    """
    if m < 2:
        raise ValueError(f"zeta_value needs m >= 2, got {m}")
    N = 20
    terms = [n ** -m for n in range(1, N)]
    terms.append(N ** (1 - m) / (m - 1))
    terms.append(0.5 * N**-m)
    rising = 1.0
    for k, b in enumerate(_B2K, start=1):
        rising = m if k == 1 else rising * (m + 2 * k - 3) * (m + 2 * k - 2)
        terms.append(b / math.factorial(2 * k) * rising * N ** (-m - 2 * k + 1))
    return math.fsum(terms)


def odd_zeta_sum(m: int) -> float:
    """sum_{k>=0} (2k+1)^(-m) = (1 - 2^-m) zeta(m)."""
    return (1.0 - 2.0**-m) * zeta_value(m)


def polygamma_at(point, r: int) -> float:
    """psi^(r)(point) for point in {1, 1/2} and 0 <= r <= R_MAX."""
    if not 0 <= r <= R_MAX:
        raise ValueError(f"polygamma order must lie in [0, {R_MAX}], got {r}")
    if point == 1:
        if r == 0:
            return -EULER_GAMMA
        return (-1) ** (r + 1) * math.factorial(r) * zeta_value(r + 1)
    if point == 0.5:
        if r == 0:
            return -EULER_GAMMA - 2.0 * math.log(2.0)
        return (-1) ** (r + 1) * math.factorial(r) * 2.0 ** (r + 1) * odd_zeta_sum(r + 1)
    raise ValueError(f"polygamma_at supports only the points 1 and 1/2, got {point!r}")


@dataclass(frozen=True)
class GammaTildeValue:
    """r-th derivative at s=1 of the normalised archimedean factor."""

    r: int
    value: float
    field_label: str
    r1: int = 0
    r2: int = 0

    @property
    def beta(self) -> float:
        """Constant -(r1/2 (gamma + log 4pi) + r2 (gamma + log 2pi)). Display only."""
        return -(self.r1 / 2 * (EULER_GAMMA + math.log(4 * math.pi))
                 + self.r2 * (EULER_GAMMA + math.log(2 * math.pi)))


def gamma_tilde_deriv(field: FieldSpec, r: int) -> GammaTildeValue:
    if not 0 <= r <= R_MAX:
        raise ValueError(f"r must lie in [0, {R_MAX}], got {r}")
    if r == 0:
        value = 0.0
    else:
        z = zeta_value(r + 1)
        value = (-1) ** (r + 1) * math.factorial(r) * (field.r1 * (1.0 - 2.0 ** -(r + 1)) * z + field.r2 * z)
        check = field.r1 / 2 ** (r + 1) * polygamma_at(0.5, r) + field.r2 * polygamma_at(1, r)
        assert math.isclose(value, check, rel_tol=1e-12, abs_tol=1e-300)
    return GammaTildeValue(r, value, field.label, field.r1, field.r2)


@lru_cache(maxsize=4096)
def f_recursive(r: int, x: float) -> float:
    """Main term f(r, x) of the Ihara-type limit (x > 1).

    f(0,x) = log x, f(1,x) = 2 + (1+x)/(1-x) log x + (log x)^2/2 and
    f(r,x) = (log x)^(r+1)/(r+1) + (1+x)/(1-x) (log x)^r + r(r-1) f(r-2,x).
    """
    if not x > 1:
        raise ValueError(f"f_recursive needs x > 1, got {x}")
    if not 0 <= r <= R_MAX:
        raise ValueError(f"r must lie in [0, {R_MAX}], got {r}")
    L = math.log(x)
    q = (1 + x) / (1 - x)
    if r == 0:
        return L
    if r == 1:
        return 2 + q * L + 0.5 * L * L
    return L ** (r + 1) / (r + 1) + q * L**r + r * (r - 1) * f_recursive(r - 2, x)
