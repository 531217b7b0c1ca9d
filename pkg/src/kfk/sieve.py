"""Segmented tabulation of arithmetic functions.

One kernel pass fully factors a segment [lo, hi) and yields omega, tau, phi,
sigma, largest prime factor, a squarefree flag, and the two exponent-class
counts used by the mod-3 analysis. `tabulate` materializes one function as a
FunctionTable; `stream_factors` feeds the counting modules without holding a
whole range in memory.

Determinism contract: results are bit-identical for any segment_length and
worker_count. Segments are disjoint, workers write disjoint outputs, and
merges happen in ascending segment order.
"""

import math
import struct
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

import numpy as np

from .kernels import factor_segment
from .primes import base_primes_for, primes_upto

MAX_N = 10**10  # sigma(n) < 6n keeps every table entry inside 64 bits
MAX_TABLE_LEN = 2**28  # 2 GiB of u64 per materialized table
DEFAULT_SEGMENT = 2**22

KINDS = ("omega", "tau", "phi", "sigma", "lpf", "squarefree_flag")
KIND_CODES = {k: i for i, k in enumerate(KINDS)}
_KIND_FIELD = {
    "omega": "omega",
    "tau": "tau",
    "phi": "phi",
    "sigma": "sigma",
    "lpf": "lpf",
    "squarefree_flag": "squarefree",
}

_CACHE_MAGIC = b"KFKT"
_CACHE_VERSION = 1
_CACHE_HEADER = struct.Struct("<4sHBQQ")


@dataclass(frozen=True)
class Interval:
    """Half-open integer range [lo, hi), 1 <= lo < hi, hi - 1 <= 10^10."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 1:
            raise ValueError(f"interval lo must be >= 1, got {self.lo}")
        if self.hi <= self.lo:
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi})")
        if self.hi - 1 > MAX_N:
            raise OverflowError(
                f"interval reaches {self.hi - 1}, beyond the sieve budget of {MAX_N}"
            )

    def __len__(self) -> int:
        return self.hi - self.lo


@dataclass(frozen=True)
class SieveConfig:
    segment_length: int = DEFAULT_SEGMENT
    worker_count: int = 1

    def __post_init__(self):
        if self.segment_length < 64:
            raise ValueError("segment_length must be >= 64")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")


@dataclass(frozen=True)
class FunctionTable:
    """Dense values of one arithmetic function on an interval.

    values[n - interval.lo] is the function at n, stored as uint64 and
    frozen read-only after construction.
    """

    interval: Interval
    kind: str
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != len(self.interval):
            raise ValueError("value array does not match the interval length")

    def signed(self) -> np.ndarray:
        """int64 view of the values (all entries fit in 63 bits)."""
        return self.values.view(np.int64)


class FactorBlock(NamedTuple):
    lo: int
    hi: int
    omega: np.ndarray
    tau: np.ndarray
    phi: np.ndarray
    sigma: np.ndarray
    lpf: np.ndarray
    squarefree: np.ndarray
    exp1: np.ndarray  # primes with exact exponent == 1 (mod 3)
    exp2: np.ndarray  # primes with exact exponent == 2 (mod 3)


def _as_interval(interval: Union[Interval, Sequence[int]]) -> Interval:
    if isinstance(interval, Interval):
        return interval
    lo, hi = interval
    return Interval(int(lo), int(hi))


def _segment_bounds(
    lo: int, hi: int, segment_length: int, cuts: Iterable[int] = ()
) -> list[tuple[int, int]]:
    """Split [lo, hi) into segments of at most segment_length, also cutting
    at every interior point in `cuts` (used to align with report grids)."""
    cut_points = sorted(c for c in set(cuts) if lo < c < hi)
    bounds = []
    cur = lo
    ci = 0
    while cur < hi:
        nxt = min(cur + segment_length, hi)
        while ci < len(cut_points) and cut_points[ci] <= cur:
            ci += 1
        if ci < len(cut_points) and cut_points[ci] < nxt:
            nxt = cut_points[ci]
        bounds.append((cur, nxt))
        cur = nxt
    return bounds


def stream_factors(
    lo: int,
    hi: int,
    config: Optional[SieveConfig] = None,
    cuts: Iterable[int] = (),
) -> Iterator[FactorBlock]:
    """Yield FactorBlocks covering [lo, hi) in ascending order.

    With worker_count > 1 segments are sieved concurrently (the jitted kernel
    releases the GIL) but are still yielded in order, with a bounded number in
    flight.
    """
    interval = Interval(lo, hi)
    cfg = config or SieveConfig()
    all_primes = base_primes_for(interval.hi)
    segments = _segment_bounds(interval.lo, interval.hi, cfg.segment_length, cuts)

    def run(seg: tuple[int, int]) -> FactorBlock:
        s_lo, s_hi = seg
        n_primes = int(
            np.searchsorted(all_primes, math.isqrt(s_hi - 1), side="right")
        )
        return FactorBlock(s_lo, s_hi, *factor_segment(s_lo, s_hi, all_primes[:n_primes]))

    if cfg.worker_count == 1 or len(segments) == 1:
        for seg in segments:
            yield run(seg)
        return

    with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
        pending: deque = deque()
        seg_iter = iter(segments)
        for seg in segments[: cfg.worker_count + 1]:
            next(seg_iter)
            pending.append(pool.submit(run, seg))
        while pending:
            block = pending.popleft().result()
            nxt = next(seg_iter, None)
            if nxt is not None:
                pending.append(pool.submit(run, nxt))
            yield block


def tabulate(
    kind: str,
    interval: Union[Interval, Sequence[int]],
    config: Optional[SieveConfig] = None,
) -> FunctionTable:
    """Tabulate one arithmetic function over an interval.

    Bit-identical output for any segment_length / worker_count.
    """
    if kind not in KIND_CODES:
        raise ValueError(f"unknown function kind {kind!r}; choose from {KINDS}")
    iv = _as_interval(interval)
    if len(iv) > MAX_TABLE_LEN:
        raise ValueError(
            f"interval length {len(iv)} exceeds the table budget of {MAX_TABLE_LEN}; "
            "use stream_factors for longer ranges"
        )
    field = _KIND_FIELD[kind]
    out = np.empty(len(iv), dtype=np.int64)
    for block in stream_factors(iv.lo, iv.hi, config):
        out[block.lo - iv.lo : block.hi - iv.lo] = getattr(block, field)
    values = out.view(np.uint64)
    values.flags.writeable = False
    return FunctionTable(iv, kind, values)


def table_from_values(
    values: Sequence[int], lo: int = 1, kind: str = "user"
) -> FunctionTable:
    """Wrap explicit nonnegative values as a FunctionTable anchored at lo."""
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("values must be a nonempty 1-D sequence")
    signed = arr.astype(np.int64)
    if np.any(signed < 0):
        k = int(np.flatnonzero(signed < 0)[0]) + lo
        raise ValueError(f"negative value at k={k}; the maps require f(k) >= 0")
    out = signed.view(np.uint64)
    out.flags.writeable = False
    return FunctionTable(Interval(lo, lo + arr.size), kind, out)


def smooth_part(m: int, y: float) -> int:
    """Largest divisor of m whose prime factors are all <= y.

    Convention: y < 2 gives 1 (no primes qualify).
    """
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if y < 2:
        return 1
    d = 1
    for p in primes_upto(int(y)):
        p = int(p)
        while m % p == 0:
            m //= p
            d *= p
        if m == 1:
            break
    return d


def _smooth_part_array(limit: int, y: float) -> np.ndarray:
    """smooth_part(n, y) for every n in [0, limit] (index 0 unused)."""
    d = np.ones(limit + 1, dtype=np.int64)
    if y >= 2:
        for p in primes_upto(int(y)):
            p = int(p)
            pk = p
            while pk <= limit:
                d[pk::pk] *= p
                pk *= p
    return d


@dataclass(frozen=True)
class SmoothnessDiagnostics:
    """Failure fractions over m <= x for the smooth-part heuristics.

    Each field is the fraction of m in [1, x] violating the named property;
    all are expected to be small but are reported, not asserted.
    """

    x: int
    y: float
    smooth_part_large: float  # smooth part of m exceeds log x
    phi_square_divisibility: float  # some t = p^a <= y with t^2 not dividing phi(m)
    gcd_not_smooth: float  # gcd(m, phi(m)) has a prime factor > y
    large_prime_power: float  # divisible by p^a > y for some prime p <= y
    smooth_shift_changed: float  # smooth parts of m and m + phi(m) differ
    reciprocal_sum_large: float  # sum of 1/p over p | phi(m), p > log log x exceeds 1


def default_smoothness_y(x: int) -> float:
    """Default y = max(2, log log x / log log log x), natural logarithms."""
    llx = math.log(math.log(x))
    lllx = math.log(llx) if llx > 0 else 0.0
    if lllx <= 0:
        return 2.0
    return max(2.0, llx / lllx)


def smoothness_diagnostics(
    x: int, y: Optional[float] = None, config: Optional[SieveConfig] = None
) -> SmoothnessDiagnostics:
    """Measure how often m <= x violates the smooth-part properties.

    Requires x >= 16 so that log log x is positive. Desk-scale operation:
    x is bounded by the table budget.
    """
    if x < 16:
        raise ValueError(f"x must be >= 16, got {x}")
    if y is None:
        y = default_smoothness_y(x)

    phi = tabulate("phi", (1, x + 1), config).signed()
    m = np.arange(1, x + 1, dtype=np.int64)
    smooth = _smooth_part_array(2 * x, y)

    fail_a = int(np.count_nonzero(smooth[1 : x + 1] > math.log(x)))

    fail_p1 = np.zeros(x, dtype=bool)
    fail_p3 = np.zeros(x, dtype=bool)
    for p in primes_upto(int(y)):
        p = int(p)
        t = p
        while t * p <= y:
            t *= p
        fail_p1 |= (phi % (t * t)) != 0
        fail_p3 |= (m % (t * p)) == 0

    g = np.gcd(m, phi)
    fail_p2 = smooth[g] != g

    fail_p4 = smooth[m + phi] != smooth[m]

    cutoff = math.log(math.log(x))
    recip = np.zeros(x + 1, dtype=np.float64)
    for p in primes_upto(x):
        p = int(p)
        if p > cutoff:
            recip[p::p] += 1.0 / p
    fail_c = int(np.count_nonzero(recip[phi] > 1.0))

    return SmoothnessDiagnostics(
        x=x,
        y=float(y),
        smooth_part_large=fail_a / x,
        phi_square_divisibility=int(np.count_nonzero(fail_p1)) / x,
        gcd_not_smooth=int(np.count_nonzero(fail_p2)) / x,
        large_prime_power=int(np.count_nonzero(fail_p3)) / x,
        smooth_shift_changed=int(np.count_nonzero(fail_p4)) / x,
        reciprocal_sum_large=fail_c / x,
    )


def write_table(table: FunctionTable, path) -> None:
    """Binary cache: magic KFKT, version u16, kind u8, lo u64, hi u64, then
    little-endian u64 values."""
    if table.kind not in KIND_CODES:
        raise ValueError(f"kind {table.kind!r} has no cache code")
    header = _CACHE_HEADER.pack(
        _CACHE_MAGIC,
        _CACHE_VERSION,
        KIND_CODES[table.kind],
        table.interval.lo,
        table.interval.hi,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(table.values, dtype="<u8").tobytes())


def read_table(path) -> FunctionTable:
    with open(path, "rb") as fh:
        raw = fh.read(_CACHE_HEADER.size)
        if len(raw) != _CACHE_HEADER.size:
            raise ValueError(f"{path}: truncated table header")
        magic, version, code, lo, hi = _CACHE_HEADER.unpack(raw)
        if magic != _CACHE_MAGIC:
            raise ValueError(f"{path}: not a table cache (bad magic)")
        if version != _CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        kinds = {v: k for k, v in KIND_CODES.items()}
        if code not in kinds:
            raise ValueError(f"{path}: unknown kind code {code}")
        body = fh.read()
    values = np.frombuffer(body, dtype="<u8")
    if len(values) != hi - lo:
        raise ValueError(
            f"{path}: expected {hi - lo} values, found {len(values)}"
        )
    out = values.astype(np.uint64)
    out.flags.writeable = False
    return FunctionTable(Interval(lo, hi), kinds[code], out)
