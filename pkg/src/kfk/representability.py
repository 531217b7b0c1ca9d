"""Image statistics of the maps k -> k + f(k).

Counts how much of [1, x] the map covers, the multiplicity histogram of the
covered values, and the mean-value lower bound on the uncovered part. All
identity checks are exact: histograms are integer counts and the bound
comparison uses rationals, never floats.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .sieve import (
    MAX_N,
    FunctionTable,
    SieveConfig,
    stream_factors,
)

FKinds = Union[str, FunctionTable]
_STREAM_KINDS = ("omega", "tau", "phi")


def exact_sum(arr: np.ndarray) -> int:
    """Overflow-safe integer sum of an int64/uint64 array."""
    total = 0
    for start in range(0, len(arr), 1 << 20):
        total += int(arr[start : start + (1 << 20)].sum(dtype=np.int64))
    return total


@dataclass(frozen=True)
class RepReport:
    """Coverage report for one map over [1, x].

    histogram[s] counts the n <= x with exactly s preimages; s = 0 is always
    present, other entries only when positive.
    """

    x: int
    f_kind: str
    n_plus: int
    histogram: dict[int, int]
    in_range_preimages: int

    @property
    def density(self) -> Fraction:
        return Fraction(self.n_plus, self.x)


@dataclass(frozen=True)
class BoundCheck:
    """Mean-value lower bound on the uncovered count, as exact rationals."""

    x: int
    c: Fraction
    sum_f: int
    bound: Fraction
    actual: int

    @property
    def holds(self) -> bool:
        return Fraction(self.actual) >= self.bound


@dataclass(frozen=True)
class DensityPoint:
    x: int
    f_kind: str
    n_plus: int
    density: Fraction = field(repr=False)


def _check_anchor(f_table: FunctionTable, x: int) -> np.ndarray:
    if f_table.interval.lo != 1:
        raise ValueError("function table must be anchored at 1")
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if f_table.interval.hi <= x:
        raise ValueError(
            f"table covers [1, {f_table.interval.hi}) but x = {x} requires f up to x"
        )
    return f_table.signed()[:x]


def count_image(f_table: FunctionTable, x: Optional[int] = None) -> RepReport:
    """Count the image of k -> k + f(k) inside [1, x] with multiplicities.

    Requires f >= 0 (so every n <= x in the image has its witness k <= x) and
    x + max f(k) inside 64 bits; both hold for u64 tables below the budget.
    """
    if x is None:
        x = f_table.interval.hi - 1
    f = _check_anchor(f_table, x)
    k = np.arange(1, x + 1, dtype=np.int64)
    vals = k + f
    in_range = vals <= x
    preimages = int(np.count_nonzero(in_range))
    per_n = np.bincount(vals[in_range], minlength=x + 1)
    mult = np.bincount(per_n[1:])
    histogram = {0: int(mult[0])}
    for s in range(1, len(mult)):
        if mult[s]:
            histogram[s] = int(mult[s])
    return RepReport(
        x=x,
        f_kind=f_table.kind,
        n_plus=x - int(mult[0]),
        histogram=histogram,
        in_range_preimages=preimages,
    )


def density_sweep(
    f: FKinds,
    x_grid: Sequence[int],
    config: Optional[SieveConfig] = None,
) -> list[DensityPoint]:
    """Coverage density at each grid point, in one incremental pass.

    `f` is a built-in kind name (streamed segment by segment) or a
    FunctionTable anchored at 1. The grid must be ascending positive.
    """
    grid = [int(g) for g in x_grid]
    if not grid:
        raise ValueError("x_grid must be nonempty")
    if any(g < 1 for g in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("x_grid must be strictly ascending and >= 1")
    if grid[-1] > MAX_N:
        raise OverflowError(f"grid reaches {grid[-1]}, beyond the cap of {MAX_N}")
    x_max = grid[-1]

    covered = np.zeros(x_max + 1, dtype=bool)
    points: list[DensityPoint] = []
    pending = list(grid)

    def flush(upto: int, kind_name: str) -> None:
        while pending and pending[0] <= upto:
            g = pending.pop(0)
            n_plus = int(np.count_nonzero(covered[1 : g + 1]))
            points.append(DensityPoint(g, kind_name, n_plus, Fraction(n_plus, g)))

    if isinstance(f, FunctionTable):
        fv = _check_anchor(f, x_max)
        kind_name = f.kind
        vals = np.arange(1, x_max + 1, dtype=np.int64) + fv
        vals = vals[vals <= x_max]
        covered[vals] = True
        flush(x_max, kind_name)
        return points

    if f not in _STREAM_KINDS:
        raise ValueError(f"f must be one of {_STREAM_KINDS} or a FunctionTable")
    for block in stream_factors(1, x_max + 1, config, cuts=[g + 1 for g in grid]):
        fv = getattr(block, f)
        vals = np.arange(block.lo, block.hi, dtype=np.int64) + fv
        vals = vals[vals <= x_max]
        covered[vals] = True
        flush(block.hi - 1, f)
    return points


def nonrepresentable_lower_bound(
    f_table: FunctionTable, x: Optional[int] = None, c: Union[int, str, Fraction] = 1
) -> BoundCheck:
    """Certified lower bound on #{n <= x not of the form k + f(k)}.

    Valid whenever 0 <= f(k) <= c*k on [1, x]; the precondition is checked and
    the first violation reported. Both sides are exact rationals:
    actual = x - n_plus, bound = (sum of f over [1, x]) / ((2c + 2) x).
    """
    if x is None:
        x = f_table.interval.hi - 1
    c = Fraction(c)
    if c < 0:
        raise ValueError("c must be nonnegative")
    f = _check_anchor(f_table, x)
    k = np.arange(1, x + 1, dtype=np.int64)
    if max(c.numerator, c.denominator) > 2**62 // (6 * MAX_N):
        raise ValueError(f"c = {c} is too extreme for exact 64-bit screening")
    bad = f * c.denominator > k * c.numerator
    if np.any(bad):
        k0 = int(np.flatnonzero(bad)[0]) + 1
        raise ValueError(
            f"precondition 0 <= f(k) <= c*k fails at k={k0}: f={int(f[k0 - 1])}, c={c}"
        )
    sum_f = exact_sum(f)
    bound = Fraction(sum_f, 1) / ((2 * c + 2) * x)
    actual = x - count_image(f_table, x).n_plus
    return BoundCheck(x=x, c=c, sum_f=sum_f, bound=bound, actual=actual)


@dataclass(frozen=True)
class TotientMeanCheck:
    x: int
    phi_sum: int
    lhs: float  # (sum of phi over [1, x]) / x^2
    target: float  # 3 / pi^2


def totient_mean_check(x: int, config: Optional[SieveConfig] = None) -> TotientMeanCheck:
    """Compare the normalized totient sum against its limit 3/pi^2."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    total = 0
    for block in stream_factors(1, x + 1, config):
        total += exact_sum(block.phi)
    return TotientMeanCheck(
        x=x, phi_sum=total, lhs=total / (x * x), target=3.0 / np.pi**2
    )
