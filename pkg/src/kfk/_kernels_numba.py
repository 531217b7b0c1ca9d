"""Numba-jitted factorization kernel (default backend).

See _kernels_numpy for the output contract; the two backends must agree
bit-for-bit. nogil=True lets segment workers run in parallel threads;
cache=True persists the compiled kernel across processes.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def factor_segment(lo: int, hi: int, base_primes: np.ndarray):
    n = hi - lo
    omega = np.zeros(n, dtype=np.int64)
    tau = np.ones(n, dtype=np.int64)
    phi = np.empty(n, dtype=np.int64)
    sigma = np.ones(n, dtype=np.int64)
    lpf = np.ones(n, dtype=np.int64)
    squarefree = np.ones(n, dtype=np.int64)
    exp1 = np.zeros(n, dtype=np.int64)
    exp2 = np.zeros(n, dtype=np.int64)
    rem = np.empty(n, dtype=np.int64)
    for i in range(n):
        phi[i] = lo + i
        rem[i] = lo + i

    for idx in range(base_primes.size):
        p = base_primes[idx]
        first = ((lo + p - 1) // p) * p
        for m in range(first, hi, p):
            i = m - lo
            e = 0
            r = rem[i]
            while r % p == 0:
                r //= p
                e += 1
            rem[i] = r
            omega[i] += 1
            tau[i] *= e + 1
            phi[i] -= phi[i] // p
            pw = 1
            geo = 1
            for _ in range(e):
                pw *= p
                geo += pw
            sigma[i] *= geo
            lpf[i] = p
            if e >= 2:
                squarefree[i] = 0
            em = e % 3
            if em == 1:
                exp1[i] += 1
            elif em == 2:
                exp2[i] += 1

    for i in range(n):
        r = rem[i]
        if r > 1:
            omega[i] += 1
            tau[i] *= 2
            phi[i] = phi[i] // r * (r - 1)
            sigma[i] *= r + 1
            lpf[i] = r
            exp1[i] += 1
    return omega, tau, phi, sigma, lpf, squarefree, exp1, exp2
