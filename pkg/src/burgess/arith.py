"""Factorization and the multiplicative functions built on it.

Everything here works on exact Python integers.  The sieve helpers at the
bottom produce the same quantities for every n up to a limit at once and
are what the exhaustive sweeps use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .constants import (
    APPENDIX_DIVISOR_EXPONENT,
    APPENDIX_OMEGA_CONSTANT,
    APPENDIX_PHI_CONSTANT,
    EULER_GAMMA,
)

__all__ = [
    "ArithProfile",
    "AppendixCheck",
    "CoprimeCount",
    "Factorization",
    "check_appendix_bounds",
    "coprime_count",
    "divisors",
    "factorize",
    "is_prime",
    "profile",
    "sieve_profiles",
    "squarefree_divisors",
]

MAX_N = 2**63 - 1
TRIAL_LIMIT = 10**6
# Bases sufficient for a deterministic answer below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    mask = np.ones(TRIAL_LIMIT + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return tuple(int(p) for p in np.flatnonzero(mask))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Return a nontrivial factor of the odd composite n (Brent's variant)."""
    if n % 2 == 0:
        return 2
    # Deterministic sequence of polynomial constants; no randomness.
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"pollard rho failed on {n}")  # pragma: no cover


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    f = _pollard_rho(n)
    _split(f, out)
    _split(n // f, out)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Prime-power decomposition of 1 <= n <= 2**63 - 1.

    Trial division by the primes below 10**6, then Pollard rho with a
    deterministic Miller-Rabin test on whatever cofactor remains.
    """
    n = int(n)
    if n <= 0:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    if n > MAX_N:
        raise ValueError(f"{n} exceeds the 64-bit range")
    found: dict[int, int] = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m <= TRIAL_LIMIT**2:
            # No prime factor below min(10**6, sqrt(m)) remains, so m is prime.
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    return Factorization(n, tuple(sorted(found.items())))


def divisors(n: int) -> list[int]:
    """All positive divisors of n in increasing order."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def squarefree_divisors(n: int) -> list[tuple[int, int]]:
    """Pairs (d, mu(d)) over the squarefree divisors of n."""
    out = [(1, 1)]
    for p in factorize(n).primes:
        out += [(d * p, -mu) for d, mu in out]
    return out


@dataclass(frozen=True)
class ArithProfile:
    n: int
    omega: int
    d: int
    phi: int
    mu: int


def profile(n: int) -> ArithProfile:
    fac = factorize(n)
    d = 1
    phi = 1
    squarefree = True
    for p, e in fac:
        d *= e + 1
        phi *= p ** (e - 1) * (p - 1)
        squarefree &= e == 1
    mu = (-1) ** len(fac) if squarefree else 0
    return ArithProfile(n=n, omega=len(fac), d=d, phi=phi, mu=mu)


@dataclass(frozen=True)
class CoprimeCount:
    """How many of 1..A are coprime to q, and the deviation from A*phi(q)/q.

    ``error`` is the exact rational ``count - A*phi(q)/q``.
    """

    A: int
    q: int
    count: int
    error: Fraction
    omega: int

    @property
    def bound(self) -> Fraction:
        return Fraction(2**self.omega, 2)

    @property
    def within_bound(self) -> bool:
        # Fraction comparison is exact cross-multiplication.
        return abs(self.error) < self.bound


def coprime_count(A: int, q: int) -> CoprimeCount:
    """Count 1 <= n <= A with gcd(n, q) = 1 by Moebius inclusion-exclusion."""
    if q < 1 or A < 1:
        raise ValueError("A and q must be positive")
    if A > q:
        raise ValueError(f"coprime_count requires A <= q, got A={A}, q={q}")
    count = sum(mu * (A // d) for d, mu in squarefree_divisors(q))
    prof = profile(q)
    error = Fraction(count * q - A * prof.phi, q)
    return CoprimeCount(A=A, q=q, count=count, error=error, omega=prof.omega)


@dataclass(frozen=True)
class AppendixCheck:
    """Slack > 0 means the inequality holds; slack = bound - actual."""

    n: int
    phi_holds: bool
    phi_slack: float
    divisor_holds: bool
    divisor_slack: float
    omega_holds: bool
    omega_slack: float

    @property
    def all_hold(self) -> bool:
        return self.phi_holds and self.divisor_holds and self.omega_holds


def phi_lower_bound(n):
    """n / (e^gamma log log n + 3 / log log n); accepts scalars or arrays."""
    ll = np.log(np.log(n))
    return n / (math.exp(EULER_GAMMA) * ll + APPENDIX_PHI_CONSTANT / ll)


def divisor_upper_bound(n):
    """n ** (1.066 / log log n)."""
    ll = np.log(np.log(n))
    return np.exp(np.log(n) * APPENDIX_DIVISOR_EXPONENT / ll)


def omega_upper_bound(n):
    """log n / log log n + 1.45743 log n / (log log n)^2."""
    ln = np.log(n)
    ll = np.log(ln)
    return ln / ll + APPENDIX_OMEGA_CONSTANT * ln / ll**2


def check_appendix_bounds(n: int) -> AppendixCheck:
    if n < 3:
        raise ValueError(f"appendix bounds are stated for n >= 3, got {n}")
    prof = profile(n)
    phi_slack = float(prof.phi - phi_lower_bound(float(n)))
    div_slack = float(divisor_upper_bound(float(n)) - prof.d)
    om_slack = float(omega_upper_bound(float(n)) - prof.omega)
    return AppendixCheck(
        n=n,
        phi_holds=phi_slack > 0,
        phi_slack=phi_slack,
        divisor_holds=div_slack >= 0,
        divisor_slack=div_slack,
        omega_holds=om_slack >= 0,
        omega_slack=om_slack,
    )


def sieve_profiles(limit: int) -> dict[str, np.ndarray]:
    """omega, d, phi and mu for every 0 <= n <= limit (index 0 is junk).

    Linear-ish numpy sieve; returns int64 arrays keyed by name.
    """
    size = limit + 1
    phi = np.arange(size, dtype=np.int64)
    omega = np.zeros(size, dtype=np.int64)
    d = np.ones(size, dtype=np.int64)
    mu = np.ones(size, dtype=np.int64)
    exp = np.zeros(size, dtype=np.int64)
    is_prime_mask = np.ones(size, dtype=bool)
    is_prime_mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime_mask[p]:
            is_prime_mask[p * p :: p] = False
    for p in np.flatnonzero(is_prime_mask).tolist():
        sl = slice(p, size, p)
        phi[sl] -= phi[sl] // p
        omega[sl] += 1
        mu[sl] = -mu[sl]
        pk = p
        while pk < size:
            exp[pk::pk] += 1
            pk *= p
        if p * p < size:
            mu[p * p :: p * p] = 0
        d[sl] *= exp[sl] + 1
        exp[sl] = 0
    return {"omega": omega, "d": d, "phi": phi, "mu": mu}
