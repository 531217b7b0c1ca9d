"""Prime generation helpers shared by the sieve backends."""

import math

import numpy as np


def primes_upto(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (Eratosthenes, vectorized)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def base_primes_for(hi: int) -> np.ndarray:
    """Primes sufficient to factor every n < hi, i.e. primes <= sqrt(hi - 1)."""
    if hi <= 2:
        return np.empty(0, dtype=np.int64)
    return primes_upto(math.isqrt(hi - 1))


def icbrt_ceil(x: int) -> int:
    """Smallest integer y with y**3 >= x, computed without float error."""
    if x <= 0:
        return 0
    y = round(x ** (1.0 / 3.0))
    while y**3 < x:
        y += 1
    while y >= 1 and (y - 1) ** 3 >= x:
        y -= 1
    return y
