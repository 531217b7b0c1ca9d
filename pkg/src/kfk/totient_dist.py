"""Empirical distribution of phi(k)/k and the coverage bound built on it.

The empirical CDF at a rational grid point a/b counts k <= x with
phi(k) * b <= a * k, so every value is an exact fraction with denominator x.
The integral of CDF(t)/(1+t)^2 over [0,1] is bracketed by Riemann sums that
exploit monotonicity of both factors, giving certified lower/upper bounds
without any derivative estimates; 1/2 plus the upper bracket bounds the
coverage density of k -> k + phi(k) from above.

The partition count is the exact finite-x form of the complementary bound:
any k > lambda*x with phi(k)/k > (1-lambda)/lambda has k + phi(k) > x, so the
banded count never exceeds #{k <= x : k + phi(k) > x}.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .representability import count_image
from .sieve import SieveConfig, stream_factors, tabulate

GridSpec = Union[int, Sequence[Fraction]]
DEFAULT_GRID = 1000


@dataclass(frozen=True)
class EmpiricalCDF:
    """CDF of phi(k)/k over k <= x, evaluated on an ascending rational grid."""

    x: int
    grid: tuple[Fraction, ...]
    counts: tuple[int, ...]  # counts[i] = #{k <= x : phi(k)/k <= grid[i]}

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.x) for c in self.counts)

    def as_floats(self) -> np.ndarray:
        return np.array([c / self.x for c in self.counts])


def _normalize_grid(grid: Optional[GridSpec]) -> tuple[Fraction, ...]:
    if grid is None:
        grid = DEFAULT_GRID
    if isinstance(grid, int):
        if grid < 1:
            raise ValueError("uniform grid size must be >= 1")
        return tuple(Fraction(j, grid) for j in range(grid + 1))
    pts = tuple(Fraction(g) for g in grid)
    if not pts:
        raise ValueError("grid must be nonempty")
    if any(p < 0 or p > 1 for p in pts):
        raise ValueError("grid points must lie in [0, 1]")
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise ValueError("grid must be strictly ascending")
    return pts


def _uniform_size(pts: tuple[Fraction, ...]) -> Optional[int]:
    g = len(pts) - 1
    if g >= 1 and all(pts[j] == Fraction(j, g) for j in range(g + 1)):
        return g
    return None


def empirical_cdf(
    x: int, grid: Optional[GridSpec] = None, config: Optional[SieveConfig] = None
) -> EmpiricalCDF:
    """Evaluate the CDF of phi(k)/k on a rational grid, exactly.

    `grid` is either a uniform size G (points j/G, the default is G=1000) or
    an explicit ascending sequence of Fractions in [0, 1]. Comparisons use
    integer cross-multiplication; no floats touch the counts.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    pts = _normalize_grid(grid)
    counts = np.zeros(len(pts), dtype=np.int64)
    g = _uniform_size(pts)

    if g is not None:
        if g * x > 2**62:
            raise ValueError("grid too fine for exact comparison at this x")
        # bucket by the least j with phi(k)*g <= j*k, then prefix-sum
        buckets = np.zeros(g + 2, dtype=np.int64)
        for block in stream_factors(1, x + 1, config):
            k = np.arange(block.lo, block.hi, dtype=np.int64)
            j = (block.phi * g + k - 1) // k
            buckets += np.bincount(j, minlength=g + 2)
        counts += np.cumsum(buckets)[: g + 1]
    else:
        nums = np.array([p.numerator for p in pts], dtype=np.int64)
        dens = np.array([p.denominator for p in pts], dtype=np.int64)
        if int(dens.max()) * x > 2**62:
            raise ValueError("grid denominators too large for exact comparison")
        for block in stream_factors(1, x + 1, config):
            k = np.arange(block.lo, block.hi, dtype=np.int64)
            for i in range(len(pts)):
                counts[i] += int(
                    np.count_nonzero(block.phi * dens[i] <= nums[i] * k)
                )

    return EmpiricalCDF(x=x, grid=pts, counts=tuple(int(c) for c in counts))


@dataclass(frozen=True)
class IntegralBound:
    """Certified brackets of the integral of CDF(t)/(1+t)^2 over [0, 1]."""

    x: int
    grid_size: int
    lower: float
    upper: float
    bound: float  # 1/2 + upper, a coverage-density ceiling for k + phi(k)


def integral_bound(
    x: int, grid_size: int = DEFAULT_GRID, config: Optional[SieveConfig] = None
) -> IntegralBound:
    """Bracket the CDF integral with monotone Riemann sums.

    On each cell both the CDF (nondecreasing) and 1/(1+t)^2 (decreasing) are
    bounded by their endpoint values: the upper sum pairs the right CDF value
    with the left weight, the lower sum the reverse. Sums are accumulated as
    exact rationals before conversion.
    """
    if grid_size < 10:
        raise ValueError(f"grid_size must be >= 10, got {grid_size}")
    cdf = empirical_cdf(x, grid_size, config)
    values = cdf.values
    g = grid_size
    weights = [Fraction(g * g, (g + j) ** 2) for j in range(g + 1)]
    step = Fraction(1, g)
    upper = sum((values[j + 1] * weights[j] for j in range(g)), Fraction(0)) * step
    lower = sum((values[j] * weights[j + 1] for j in range(g)), Fraction(0)) * step
    return IntegralBound(
        x=x,
        grid_size=g,
        lower=float(lower),
        upper=float(upper),
        bound=float(Fraction(1, 2) + upper),
    )


@dataclass(frozen=True)
class PartitionBound:
    """Banded count of k with k + phi(k) > x, against the exact quantities.

    partition_sum <= out_of_range always; out_of_range and nonrepresentable
    are the two finite-x readings of "not covered", reported side by side.
    """

    x: int
    bands: int
    partition_sum: int
    out_of_range: int  # #{k <= x : k + phi(k) > x}
    nonrepresentable: int  # #{n <= x : n != k + phi(k) for all k}


def partition_lower_bound(
    x: int,
    r: int,
    lambdas: Optional[Sequence[Fraction]] = None,
    config: Optional[SieveConfig] = None,
) -> PartitionBound:
    """Count k in bands (l_{i-1} x, l_i x] with phi(k)/k > (1 - l_{i-1})/l_{i-1}.

    Band edges default to l_i = 1/2 + i/(2r + 2) for i = 1..r; a custom
    ascending sequence inside (1/2, 1) may be supplied. Every counted k
    satisfies k + phi(k) > x, which the report pairs with the exact
    out-of-range and non-representable counts.
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if lambdas is None:
        lams = [Fraction(1, 2) + Fraction(i, 2 * r + 2) for i in range(1, r + 1)]
    else:
        lams = [Fraction(v) for v in lambdas]
        if len(lams) < 2:
            raise ValueError("need at least two band edges")
        if any(v <= Fraction(1, 2) or v >= 1 for v in lams):
            raise ValueError("band edges must lie strictly inside (1/2, 1)")
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise ValueError("band edges must be strictly ascending")

    phi_table = tabulate("phi", (1, x + 1), config)
    phi = phi_table.signed()

    partition_sum = 0
    for i in range(1, len(lams)):
        lam_prev, lam_cur = lams[i - 1], lams[i]
        k_lo = (lam_prev.numerator * x) // lam_prev.denominator + 1
        k_hi = (lam_cur.numerator * x) // lam_cur.denominator
        if k_hi > x:
            k_hi = x
        if k_lo > k_hi:
            continue
        k = np.arange(k_lo, k_hi + 1, dtype=np.int64)
        seg = phi[k_lo - 1 : k_hi]
        # phi(k)/k > (1-l)/l  <=>  phi(k) * l_num > k * (l_den - l_num)
        a, b = lam_prev.numerator, lam_prev.denominator
        partition_sum += int(np.count_nonzero(seg * a > k * (b - a)))

    report = count_image(phi_table, x)
    return PartitionBound(
        x=x,
        bands=len(lams) - 1,
        partition_sum=partition_sum,
        out_of_range=x - report.in_range_preimages,
        nonrepresentable=x - report.n_plus,
    )
