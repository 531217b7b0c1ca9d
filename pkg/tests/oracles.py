"""Independent trial-division oracles for the test suite.

Deliberately naive: these factor one integer at a time and never touch the
sieve kernels, so agreement with the tabulated arrays is a real check.
"""

from fractions import Fraction


def factorize(n: int) -> dict[int, int]:
    assert n >= 1
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def omega(n: int) -> int:
    return len(factorize(n))


def tau(n: int) -> int:
    t = 1
    for e in factorize(n).values():
        t *= e + 1
    return t


def phi(n: int) -> int:
    r = 1
    for p, e in factorize(n).items():
        r *= (p - 1) * p ** (e - 1)
    return r


def sigma(n: int) -> int:
    r = 1
    for p, e in factorize(n).items():
        r *= (p ** (e + 1) - 1) // (p - 1)
    return r


def lpf(n: int) -> int:
    f = factorize(n)
    return max(f) if f else 1


def squarefree(n: int) -> int:
    return int(all(e == 1 for e in factorize(n).values()))


def exp1_mod3(n: int) -> int:
    return sum(1 for e in factorize(n).values() if e % 3 == 1)


def exp2_mod3(n: int) -> int:
    return sum(1 for e in factorize(n).values() if e % 3 == 2)


ORACLES = {
    "omega": omega,
    "tau": tau,
    "phi": phi,
    "sigma": sigma,
    "lpf": lpf,
    "squarefree_flag": squarefree,
}


def image_counts(f_values: list[int], x: int) -> dict[int, int]:
    """Map n -> multiplicity via a plain dict; f_values[k-1] = f(k)."""
    hits: dict[int, int] = {}
    for k in range(1, x + 1):
        v = k + f_values[k - 1]
        if v <= x:
            hits[v] = hits.get(v, 0) + 1
    return hits


def smooth_part_ref(m: int, y: float) -> int:
    d = 1
    for p, e in factorize(m).items():
        if p <= y:
            d *= p**e
    return d


def cdf_count(phi_values: list[int], x: int, lam: Fraction) -> int:
    return sum(
        1 for k in range(1, x + 1) if Fraction(phi_values[k - 1], k) <= lam
    )
