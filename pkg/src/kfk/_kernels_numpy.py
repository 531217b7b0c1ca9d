"""Pure-numpy factorization kernel (fallback backend).

Same contract as the numba backend: `factor_segment` fully factors every
integer in [lo, hi) against the supplied base primes (all primes <= sqrt(hi-1))
and returns eight int64 arrays, exact in integer arithmetic:

    omega       distinct prime divisors
    tau         divisor count
    phi         Euler totient
    sigma       divisor sum
    lpf         largest prime factor (1 for n = 1)
    squarefree  0/1 flag
    exp1        number of primes whose exact exponent is == 1 (mod 3)
    exp2        number of primes whose exact exponent is == 2 (mod 3)

Results must be bit-identical to the numba backend; the test suite asserts it.
"""

import numpy as np


def factor_segment(lo: int, hi: int, base_primes: np.ndarray):
    n = hi - lo
    values = np.arange(lo, hi, dtype=np.int64)
    rem = values.copy()
    omega = np.zeros(n, dtype=np.int64)
    tau = np.ones(n, dtype=np.int64)
    phi = values.copy()
    sigma = np.ones(n, dtype=np.int64)
    lpf = np.ones(n, dtype=np.int64)
    squarefree = np.ones(n, dtype=np.int64)
    exp1 = np.zeros(n, dtype=np.int64)
    exp2 = np.zeros(n, dtype=np.int64)
    # scratch exponent array, reset on the touched stride after each prime
    exp = np.zeros(n, dtype=np.int64)

    for p in base_primes:
        p = int(p)
        first = ((lo + p - 1) // p) * p
        if first >= hi:
            continue
        pk = p
        while pk < hi:
            start = ((lo + pk - 1) // pk) * pk
            if start >= hi:
                break
            exp[start - lo :: pk] += 1
            pk *= p
        sl = slice(first - lo, None, p)
        e = exp[sl]
        omega[sl] += 1
        tau[sl] *= e + 1
        phi[sl] -= phi[sl] // p
        # sigma factor: 1 + p + ... + p^e = (p^(e+1) - 1) // (p - 1)
        sigma[sl] *= (np.power(p, e + 1) - 1) // (p - 1)
        lpf[sl] = p
        squarefree[sl] *= e < 2
        emod = e % 3
        exp1[sl] += emod == 1
        exp2[sl] += emod == 2
        rem[sl] //= np.power(p, e)
        exp[sl] = 0

    # whatever remains is a single prime > sqrt(hi - 1)
    big = rem > 1
    r = rem[big]
    omega[big] += 1
    tau[big] *= 2
    phi[big] = phi[big] // r * (r - 1)
    sigma[big] *= r + 1
    lpf[big] = r
    exp1[big] += 1
    return omega, tau, phi, sigma, lpf, squarefree, exp1, exp2
