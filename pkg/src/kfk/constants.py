"""Closed-form constants and the two Euler-product identities behind the
mod-3 bias of the divisor count.

Working precision is binary64 throughout. zeta(3) comes from the fast
alternating central-binomial series, summed exactly in rationals and checked
against the 20-digit literature value; zeta(2) is pi^2/6. The character-series
L(s, chi3) is summed in consecutive (k == 1, k == 2 mod 3) pairs so the
remainder is controlled like an alternating series.

Two independent evaluation routes exist for each Dirichlet series: a truncated
Euler product over primes and a direct sum over qualifying integers (fed by
the sieve). Tests require three-way agreement with the closed forms.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .mod3 import exp1_count
from .primes import primes_upto
from .sieve import SieveConfig, stream_factors

ZETA3_LITERATURE = 1.2020569031595942854
DEFAULT_CUTOFF = 10**6


def zeta3() -> float:
    """zeta(3) via the alternating series (5/2) * sum (-1)^(n-1) / (n^3 C(2n,n)).

    Terms are summed exactly as rationals; 40 terms leave an alternating-series
    remainder below 1e-18, far under binary64 resolution. The result must match
    the literature value to float precision or something is badly wrong.
    """
    total = Fraction(0)
    for n in range(1, 41):
        term = Fraction(1, n**3 * math.comb(2 * n, n))
        total += term if n % 2 == 1 else -term
    value = float(Fraction(5, 2) * total)
    if abs(value - ZETA3_LITERATURE) > 1e-15:
        raise AssertionError(f"zeta(3) series drifted: {value!r}")
    return value


@dataclass(frozen=True)
class ConstantCatalog:
    zeta2: float
    zeta3: float
    c_mod3: float  # limiting density of k with 3 | k + tau(k)
    k_density: float  # limiting density of k coprime to 3 with 3 not | tau(k)
    t0_density: float  # limiting density of the k == 0 (mod 3) contribution
    phi_mean: float  # limit of (sum of phi over [1, x]) / x^2
    phi_upper: float  # 1 - 3/(4 pi^2), coverage ceiling for k + phi(k)

    def as_dict(self) -> dict[str, float]:
        return {
            "zeta2": self.zeta2,
            "zeta3": self.zeta3,
            "c_mod3": self.c_mod3,
            "k_density": self.k_density,
            "t0_density": self.t0_density,
            "phi_mean": self.phi_mean,
            "phi_upper": self.phi_upper,
        }


def catalog() -> ConstantCatalog:
    z2 = math.pi**2 / 6.0
    z3 = zeta3()
    return ConstantCatalog(
        zeta2=z2,
        zeta3=z3,
        c_mod3=1.0 / 3.0 + z3 / (12.0 * z2),
        k_density=13.0 * z3 / (18.0 * z2),
        t0_density=1.0 / 3.0 - 5.0 * z3 / (18.0 * z2),
        phi_mean=3.0 / math.pi**2,
        phi_upper=1.0 - 3.0 / (4.0 * math.pi**2),
    )


def _require_s(s: float) -> None:
    if s <= 1:
        raise ValueError(f"series diverges for s <= 1, got s = {s}")


def l_chi3(s: float, pair_count: int = 2 * 10**6) -> float:
    """L(s, chi3) = sum chi3(k) / k^s by paired terms.

    Pair j contributes (3j+1)^-s - (3j+2)^-s > 0, decreasing in j, so the
    truncation error is below the first omitted pair (~3^-s * N^-s).
    """
    _require_s(s)
    j = np.arange(pair_count, dtype=np.float64)
    return float(((3 * j + 1) ** -s - (3 * j + 2) ** -s).sum())


def euler_product_counting(s: float, prime_cutoff: int = DEFAULT_CUTOFF) -> float:
    """Truncated Euler product of the series counting k coprime to 3 with
    tau(k) not divisible by 3.

    Per-prime factor for p != 3: sum of p^(-v*s) over v >= 0, v != 2 (mod 3),
    which telescopes to (1 + u) / (1 - u^3) with u = p^-s; the factor at p = 3
    is 1. Factors exceed 1, so the product increases monotonically toward
    zeta(s) zeta(3s) / zeta(2s) * (1 - 27^-s) / (1 + 3^-s).
    """
    _require_s(s)
    if prime_cutoff < 2:
        raise ValueError("prime_cutoff must be >= 2")
    product = 1.0
    for p in primes_upto(prime_cutoff):
        p = int(p)
        if p == 3:
            continue
        u = p**-s
        product *= (1.0 + u) / (1.0 - u**3)
    return product


def closed_form_counting(s: float) -> float:
    """zeta(s) zeta(3s) / zeta(2s) * (1 - 27^-s) / (1 + 3^-s)."""
    _require_s(s)
    import mpmath

    z = lambda t: float(mpmath.zeta(t))
    return z(s) * z(3 * s) / z(2 * s) * (1.0 - 27.0**-s) / (1.0 + 3.0**-s)


def euler_product_twisted(s: float, prime_cutoff: int = DEFAULT_CUTOFF) -> float:
    """Truncated Euler product of the chi3-and-sign twisted series.

    Per-prime factors (p = 3 contributes 1):
        p == 1 (mod 3):  1 + (-u + u^3) / (1 - u^3)
        p == 2 (mod 3):  1 + ( u - u^3) / (1 + u^3)
    with u = p^-s. Combining all primes recovers L(3s, chi3) / L(s, chi3).
    """
    _require_s(s)
    if prime_cutoff < 2:
        raise ValueError("prime_cutoff must be >= 2")
    product = 1.0
    for p in primes_upto(prime_cutoff):
        p = int(p)
        if p % 3 == 0:
            continue
        u = p**-s
        if p % 3 == 1:
            product *= 1.0 + (-u + u**3) / (1.0 - u**3)
        else:
            product *= 1.0 + (u - u**3) / (1.0 + u**3)
    return product


def closed_form_twisted(s: float) -> float:
    """L(3s, chi3) / L(s, chi3)."""
    _require_s(s)
    return l_chi3(3 * s) / l_chi3(s)


def dirichlet_sum_counting(
    s: float, k_max: int = DEFAULT_CUTOFF, config: Optional[SieveConfig] = None
) -> float:
    """Direct sum of k^-s over k <= k_max with gcd(k,3) = 1, 3 not | tau(k)."""
    _require_s(s)
    total = 0.0
    for block in stream_factors(1, k_max + 1, config):
        k = np.arange(block.lo, block.hi, dtype=np.int64)
        mask = (k % 3 != 0) & (block.tau % 3 != 0)
        total += float((k[mask].astype(np.float64) ** -s).sum())
    return total


def dirichlet_sum_twisted(
    s: float, k_max: int = DEFAULT_CUTOFF, config: Optional[SieveConfig] = None
) -> float:
    """Direct sum of chi3(k) (-1)^exp1_count(k) k^-s over the same k."""
    _require_s(s)
    total = 0.0
    for block in stream_factors(1, k_max + 1, config):
        k = np.arange(block.lo, block.hi, dtype=np.int64)
        kmod = k % 3
        mask = (kmod != 0) & (block.tau % 3 != 0)
        signs = np.where(kmod == 1, 1.0, -1.0) * (1 - 2 * (block.exp1 & 1))
        total += float((signs[mask] * k[mask].astype(np.float64) ** -s).sum())
    return total


def mersenne_sigma_moment(r_max: int) -> float:
    """Mean of (sigma(2^r - 1) / (2^r - 1))^2 over r = 1..r_max.

    Stays O(1) as r_max grows; r_max is capped at 50 so each 2^r - 1 factors
    by 64-bit trial division.
    """
    if r_max < 1:
        raise ValueError(f"r_max must be >= 1, got {r_max}")
    if r_max > 50:
        raise ValueError(f"r_max must be <= 50 for trial-division factoring, got {r_max}")
    total = 0.0
    for r in range(1, r_max + 1):
        m = 2**r - 1
        sigma = 1
        rem = m
        d = 2
        while d * d <= rem:
            if rem % d == 0:
                e = 0
                while rem % d == 0:
                    rem //= d
                    e += 1
                sigma *= (d ** (e + 1) - 1) // (d - 1)
            d += 1
        if rem > 1:
            sigma *= rem + 1
        total += (sigma / m) ** 2
    return total / r_max


# exp1_count is re-exported for the twisted direct sum's scalar cross-checks
__all__ = [
    "ConstantCatalog",
    "catalog",
    "zeta3",
    "l_chi3",
    "euler_product_counting",
    "closed_form_counting",
    "euler_product_twisted",
    "closed_form_twisted",
    "dirichlet_sum_counting",
    "dirichlet_sum_twisted",
    "mersenne_sigma_moment",
    "exp1_count",
    "ZETA3_LITERATURE",
]
