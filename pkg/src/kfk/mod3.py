"""Residue statistics of k + tau(k), with the mod-3 machinery.

The divisor count tau(k) avoids multiples of 3 exactly when no prime's exact
exponent in k is == 2 (mod 3), and in that case tau(k) == 2^u (mod 3) where u
counts the primes with exact exponent == 1 (mod 3). That structure drives the
bias of k + tau(k) toward the residue 0 (mod 3); this module counts everything
exactly so the limiting constants can be compared against the catalog in
`constants`.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .sieve import FunctionTable, SieveConfig, stream_factors

FKinds = Union[str, FunctionTable]
_STREAM_KINDS = ("omega", "tau", "phi")


@dataclass(frozen=True)
class ResidueReport:
    """Counts of k <= x by residue of k + f(k); for modulus 3 and f = tau the
    zero class splits as t_split[i] = #{k == i (mod 3), tau(k) == -i (mod 3)}."""

    x: int
    modulus: int
    counts: tuple[int, ...]
    t_split: Optional[tuple[int, int, int]] = None


def residue_counts(
    x: int,
    modulus: int = 3,
    f: FKinds = "tau",
    config: Optional[SieveConfig] = None,
) -> ResidueReport:
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")

    counts = np.zeros(modulus, dtype=np.int64)
    want_split = modulus == 3 and f == "tau"
    split = np.zeros(3, dtype=np.int64)

    def accumulate(k: np.ndarray, fv: np.ndarray) -> None:
        np.add(counts, np.bincount((k + fv) % modulus, minlength=modulus), out=counts)
        if want_split:
            for i in range(3):
                split[i] += int(
                    np.count_nonzero((k % 3 == i) & (fv % 3 == (3 - i) % 3))
                )

    if isinstance(f, FunctionTable):
        if f.interval.lo != 1 or f.interval.hi <= x:
            raise ValueError("function table must cover [1, x]")
        k = np.arange(1, x + 1, dtype=np.int64)
        accumulate(k, f.signed()[:x])
    else:
        if f not in _STREAM_KINDS:
            raise ValueError(f"f must be one of {_STREAM_KINDS} or a FunctionTable")
        for block in stream_factors(1, x + 1, config):
            k = np.arange(block.lo, block.hi, dtype=np.int64)
            accumulate(k, getattr(block, f))

    return ResidueReport(
        x=x,
        modulus=modulus,
        counts=tuple(int(c) for c in counts),
        t_split=tuple(int(s) for s in split) if want_split else None,
    )


def tau_nonzero_mod3_count(y: int, config: Optional[SieveConfig] = None) -> int:
    """#{k <= y : gcd(k, 3) = 1 and tau(k) not divisible by 3}.

    The normalized count converges to 13*zeta(3) / (18*zeta(2)) = 0.527773...
    """
    if y < 1:
        raise ValueError(f"y must be >= 1, got {y}")
    total = 0
    for block in stream_factors(1, y + 1, config):
        k = np.arange(block.lo, block.hi, dtype=np.int64)
        total += int(np.count_nonzero((k % 3 != 0) & (block.tau % 3 != 0)))
    return total


def exp1_count(k: int) -> int:
    """Number of primes whose exact exponent in k is == 1 (mod 3)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    count = 0
    d = 2
    while d * d <= k:
        if k % d == 0:
            e = 0
            while k % d == 0:
                k //= d
                e += 1
            if e % 3 == 1:
                count += 1
        d += 1
    if k > 1:
        count += 1
    return count


def tau_mod3_check(x: int, config: Optional[SieveConfig] = None) -> int:
    """Exhaustively verify the mod-3 structure of tau over [1, x].

    Checks, for every k <= x, that tau(k) is off the residue 0 (mod 3) exactly
    when no exact exponent is == 2 (mod 3), and that in that case
    tau(k) == 2^(number of exact exponents == 1 mod 3) (mod 3). Returns the
    number of violations; 0 means the structure holds everywhere.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    violations = 0
    for block in stream_factors(1, x + 1, config):
        tmod = block.tau % 3
        nonzero = tmod != 0
        violations += int(np.count_nonzero(nonzero != (block.exp2 == 0)))
        expected = np.where(block.exp1 % 2 == 0, 1, 2)
        violations += int(np.count_nonzero(nonzero & (tmod != expected)))
    return violations


def twisted_sum(x: int, config: Optional[SieveConfig] = None) -> int:
    """Exact signed sum of chi3(k) * (-1)^exp1_count(k) over the k <= x with
    gcd(k, 3) = 1 and tau(k) not divisible by 3.

    chi3 is the nontrivial character mod 3: +1 on k == 1, -1 on k == 2 (mod 3).
    """
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    total = 0
    if x == 0:
        return total
    for block in stream_factors(1, x + 1, config):
        k = np.arange(block.lo, block.hi, dtype=np.int64)
        kmod = k % 3
        mask = (kmod != 0) & (block.tau % 3 != 0)
        chi = np.where(kmod == 1, 1, -1)
        sign = 1 - 2 * (block.exp1 & 1)
        total += int((chi[mask] * sign[mask]).sum(dtype=np.int64))
    return total


def twisted_sum_probe(
    x_grid: Sequence[int], config: Optional[SieveConfig] = None
) -> list[tuple[int, int, float]]:
    """(x, signed sum, |sum|/x) along an ascending grid, in one pass.

    The normalized magnitude is expected to shrink along the grid; it is
    reported, not asserted.
    """
    grid = [int(g) for g in x_grid]
    if not grid:
        raise ValueError("x_grid must be nonempty")
    if any(g < 1 for g in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("x_grid must be strictly ascending and >= 1")

    out: list[tuple[int, int, float]] = []
    pending = list(grid)
    total = 0
    for block in stream_factors(1, grid[-1] + 1, config, cuts=[g + 1 for g in grid]):
        k = np.arange(block.lo, block.hi, dtype=np.int64)
        kmod = k % 3
        mask = (kmod != 0) & (block.tau % 3 != 0)
        chi = np.where(kmod == 1, 1, -1)
        sign = 1 - 2 * (block.exp1 & 1)
        total += int((chi[mask] * sign[mask]).sum(dtype=np.int64))
        while pending and pending[0] <= block.hi - 1:
            g = pending.pop(0)
            out.append((g, total, abs(total) / g))
    return out
