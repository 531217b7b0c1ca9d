"""Collision energy of k -> k + f(k) on structured index sets.

The lower-bound machinery needs sets A whose elements n = l * p pair a small
squarefree part l with a large prime p; few collisions of n + f(n) on such a
set force a large image, via the exact integer inequality
image_size * energy >= |A|^2 (Cauchy-Schwarz). Energy is computed by sorting
and run-length counting the mapped values, which keeps it deterministic and
O(|A| log |A|).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .primes import icbrt_ceil, primes_upto
from .sieve import FunctionTable, SieveConfig, tabulate

PARITIES = ("any", "odd")


@dataclass(frozen=True)
class ProofSetSpec:
    """Recipe for the structured set: n = l * p <= x with l <= y = ceil(x^(1/3))
    squarefree (odd if parity='odd'), the prime count of l inside the window
    loglog x +- width * sqrt(loglog x), and p prime in (y, x/l]."""

    x: int
    width: float = 2.0
    parity: str = "any"

    def __post_init__(self):
        if self.x < 16:
            raise ValueError(f"x must be >= 16 so log log x > 0, got {self.x}")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        if self.width <= 0:
            raise ValueError("width must be positive")

    @property
    def y(self) -> int:
        return icbrt_ceil(self.x)

    @property
    def omega_window(self) -> tuple[float, float]:
        llx = math.log(math.log(self.x))
        half = self.width * math.sqrt(llx)
        return (llx - half, llx + half)


@dataclass(frozen=True)
class ProofSet:
    """The constructed set, sorted by n; each n = l * p with p its largest
    prime factor, so the decomposition is unique."""

    spec: ProofSetSpec
    n: np.ndarray
    l: np.ndarray
    p: np.ndarray

    @property
    def size(self) -> int:
        return len(self.n)

    @property
    def density(self) -> float:
        return self.size / self.spec.x


def build_proof_set(spec: ProofSetSpec, config: Optional[SieveConfig] = None) -> ProofSet:
    """Enumerate the set deterministically (ascending n).

    Feasible at desk scale (x <= 1e8 recommended: one prime sieve of [2, x]).
    """
    x, y = spec.x, spec.y
    lo_w, hi_w = spec.omega_window

    small = tabulate("omega", (1, y + 1), config).signed()
    sqfree = tabulate("squarefree_flag", (1, y + 1), config).signed()
    ps = primes_upto(x)

    parts_n, parts_l, parts_p = [], [], []
    for l in range(1, y + 1):
        if spec.parity == "odd" and l % 2 == 0:
            continue
        if not sqfree[l - 1]:
            continue
        w = small[l - 1]
        if w < lo_w or w > hi_w:
            continue
        start = int(np.searchsorted(ps, y, side="right"))
        stop = int(np.searchsorted(ps, x // l, side="right"))
        if stop <= start:
            continue
        p_slice = ps[start:stop]
        parts_p.append(p_slice)
        parts_l.append(np.full(len(p_slice), l, dtype=np.int64))
        parts_n.append(p_slice * l)

    if parts_n:
        n = np.concatenate(parts_n)
        lv = np.concatenate(parts_l)
        pv = np.concatenate(parts_p)
        order = np.argsort(n, kind="stable")
        n, lv, pv = n[order], lv[order], pv[order]
    else:
        n = lv = pv = np.empty(0, dtype=np.int64)
    return ProofSet(spec=spec, n=n, l=lv, p=pv)


@dataclass(frozen=True)
class EnergyReport:
    """Collision census of n -> n + f(n) on an index set.

    energy counts ordered pairs with equal mapped values; the diagonal
    contributes set_size, the rest in symmetric pairs (so off_diagonal is
    even), and image_size * energy >= set_size^2 exactly."""

    set_size: int
    energy: int
    diagonal: int
    off_diagonal: int
    image_size: int
    cs_bound: int  # ceil(set_size^2 / energy)


def _mapped_values(index_set: np.ndarray, f_table: FunctionTable) -> np.ndarray:
    idx = np.asarray(index_set, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("index set must be nonempty")
    lo, hi = f_table.interval.lo, f_table.interval.hi
    if int(idx.min()) < lo or int(idx.max()) >= hi:
        raise ValueError("index set leaves the function table's interval")
    return idx + f_table.signed()[idx - lo]


def additive_energy(index_set: np.ndarray, f_table: FunctionTable) -> EnergyReport:
    """Group equal mapped values (sort + run lengths) and sum squared sizes."""
    vals = np.sort(_mapped_values(index_set, f_table), kind="stable")
    boundaries = np.flatnonzero(np.diff(vals)) + 1
    starts = np.concatenate(([0], boundaries, [len(vals)]))
    runs = np.diff(starts)
    size = len(vals)
    energy = int(np.sum(runs * runs, dtype=np.int64))
    return EnergyReport(
        set_size=size,
        energy=energy,
        diagonal=size,
        off_diagonal=energy - size,
        image_size=len(runs),
        cs_bound=-(-size * size // energy),
    )


@dataclass(frozen=True)
class ImageReport:
    """Image split at x, with the exact Cauchy-Schwarz verification.

    The image lives in [1, x + max_shift]; in_range counts values <= x and
    tail the rest. cs_holds records image_size * energy >= set_size^2,
    checked in exact integers."""

    x: int
    set_size: int
    energy: int
    image_size: int
    in_range: int
    tail: int
    max_shift: int
    cs_holds: bool


def image_lower_bound(
    index_set: np.ndarray, f_table: FunctionTable, x: int
) -> ImageReport:
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if f_table.interval.lo != 1 or f_table.interval.hi <= x:
        raise ValueError("function table must cover [1, x]")
    report = additive_energy(index_set, f_table)
    vals = np.unique(_mapped_values(index_set, f_table))
    max_shift = int(f_table.signed()[:x].max())
    in_range = int(np.count_nonzero(vals <= x))
    tail = int(np.count_nonzero((vals > x) & (vals <= x + max_shift)))
    return ImageReport(
        x=x,
        set_size=report.set_size,
        energy=report.energy,
        image_size=report.image_size,
        in_range=in_range,
        tail=tail,
        max_shift=max_shift,
        cs_holds=report.image_size * report.energy >= report.set_size**2,
    )
