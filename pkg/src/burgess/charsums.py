"""Character sums: intervals, the maximal function, moments, v(l) counts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .arith import coprime_count, profile
from .characters import DirichletCharacter

__all__ = [
    "FourthMomentReport",
    "IntervalSum",
    "PolynomialSumReport",
    "VStats",
    "fourth_moment",
    "fourth_moment_rhs",
    "interval_sum",
    "max_interval_sum",
    "maximal_function",
    "polynomial_complete_sum",
    "v_statistics",
]

#: Absolute slack for float inequality checks on quantities of size <= q**2.
TOLERANCE = 1e-6


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class IntervalSum:
    M: int
    N: int
    value: complex

    @property
    def abs(self) -> float:
        return abs(self.value)


def interval_sum(chi: DirichletCharacter, M: int, N: int) -> IntervalSum:
    """S(M, N) = chi(M+1) + ... + chi(M+N)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return IntervalSum(M, 0, 0j)
    q = chi.q
    vals = chi.values()
    periods, rest = divmod(N, q)
    total = 0j
    if periods:
        total += periods * complex(vals.sum())
    if rest:
        idx = np.arange(M + 1, M + rest + 1) % q
        total += complex(vals[idx].sum())
    return IntervalSum(M, N, total)


def max_interval_sum(chi: DirichletCharacter, y: int) -> tuple[float, int, int]:
    """Max of |S(M, N)| over 0 <= M < q, 1 <= N <= y, with its witness.

    Ties (within 1e-9) go to the smallest M, then the smallest N.
    """
    if y < 1:
        raise ValueError("y must be at least 1")
    q = chi.q
    vals = chi.values()
    ext = vals[np.arange(1, q + y + 1) % q]
    pre = np.concatenate(([0j], np.cumsum(ext)))
    # grid[M, N-1] = |S(M, N)|
    ends = np.arange(q)[:, None] + np.arange(1, y + 1)[None, :]
    grid = np.abs(pre[ends] - pre[:q, None])
    best = float(grid.max())
    cand = np.argwhere(grid >= best - 1e-9)
    M, n_idx = min(map(tuple, cand))
    return best, int(M), int(n_idx) + 1


def maximal_function(chi: DirichletCharacter, y: int) -> np.ndarray:
    """The maximal function at every y' = 1..y, via the active kernel backend."""
    per_length = kernels.window_maxima(chi.values(), y)
    return np.maximum.accumulate(per_length)


def fourth_moment_rhs(q: int, B: int) -> float:
    prof = profile(q)
    return (7 * B * B - 6 * B) * q + 4 * 8**prof.omega * math.sqrt(q) * B**4 * prof.d**3


@dataclass(frozen=True)
class FourthMomentReport:
    q: int
    B: int
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + TOLERANCE


def fourth_moment(chi: DirichletCharacter, B: int, *, require_primitive: bool = True) -> FourthMomentReport:
    """Sum over l mod q of |chi(l+1) + ... + chi(l+B)|^4 against its bound."""
    q = chi.q
    if B < 1 or B * B >= q:
        raise PreconditionError(f"need 1 <= B < sqrt(q); got B={B}, q={q}")
    if require_primitive and not chi.primitive:
        raise PreconditionError("fourth-moment bound needs a primitive character")
    lhs = kernels.fourth_moment(chi.log_table, chi.order, B)
    return FourthMomentReport(q=q, B=B, lhs=lhs, rhs=fourth_moment_rhs(q, B))


def _shift_products(m: tuple[int, int, int, int]) -> list[int]:
    return [math.prod(m[i] - m[j] for j in range(4) if j != i) for i in range(4)]


@dataclass(frozen=True)
class PolynomialSumReport:
    q: int
    shifts: tuple[int, int, int, int]
    abs: float
    bound: float
    min_bound: float

    @property
    def holds(self) -> bool:
        return self.abs <= self.bound + TOLERANCE

    @property
    def holds_min(self) -> bool:
        """Whether the smallest admissible gcd would also have sufficed."""
        return self.abs <= self.min_bound + TOLERANCE

    @property
    def margin(self) -> float:
        return self.bound - self.abs


def polynomial_bound(q: int, shifts) -> tuple[float, float]:
    """8^omega(q) sqrt(q) times the max and the min of gcd(q, A_i) over A_i != 0."""
    gcds = [math.gcd(q, a) for a in _shift_products(tuple(shifts)) if a != 0]
    scale = 8 ** profile(q).omega * math.sqrt(q)
    return scale * max(gcds), scale * min(gcds)


def check_shifts(q: int, shifts) -> tuple[int, int, int, int]:
    shifts = tuple(int(s) % q for s in shifts)
    if len(shifts) != 4:
        raise PreconditionError("exactly four shifts are needed")
    if len(set(shifts)) < 3:
        raise PreconditionError(f"at least three of the shifts must be distinct mod {q}: {shifts}")
    return shifts


def polynomial_complete_sum(
    chi: DirichletCharacter, shifts, *, require_primitive: bool = True
) -> PolynomialSumReport:
    """|sum_{x=1}^{q} chi((x-m1)(x-m2)) conj(chi((x-m3)(x-m4)))| and its bound.

    Raising chi to the power phi(q)-1 is the same as conjugating on units and
    zero elsewhere, which is how the second factor is evaluated.
    """
    q = chi.q
    shifts = check_shifts(q, shifts)
    if require_primitive and not chi.primitive:
        raise PreconditionError("complete-sum bound needs a primitive character")
    value = float(kernels.polynomial_sums(chi.log_table, chi.order, [shifts])[0])
    hi, lo = polynomial_bound(q, shifts)
    return PolynomialSumReport(q=q, shifts=shifts, abs=value, bound=hi, min_bound=lo)


@dataclass(frozen=True)
class VStats:
    q: int
    M: int
    N: int
    A: int
    A_q: int
    sum_v: int
    sum_v2: int

    @property
    def moment_bound(self) -> float:
        return self.A_q**2 + 2 * self.A * self.N * math.log(2 * self.A_q)

    @property
    def holds(self) -> bool:
        return self.sum_v2 <= self.moment_bound


def v_counts(q: int, M: int, N: int, A: int) -> np.ndarray:
    """v(l) for l = 0..q (entry 0 unused): pairs (a, n) with n = a*l mod q."""
    units = [a for a in range(1, A + 1) if math.gcd(a, q) == 1]
    return kernels.v_counts(q, M, N, units)


def v_statistics(q: int, M: int, N: int, A: int) -> VStats:
    if not 1 <= A <= q:
        raise ValueError(f"need 1 <= A <= q, got A={A}, q={q}")
    if N < 1:
        raise ValueError("N must be positive")
    v = v_counts(q, M, N, A)[1:]
    a_q = coprime_count(A, q).count
    sum_v = int(v.sum())
    if sum_v != a_q * N:
        raise AssertionError(f"sum of v(l) = {sum_v} but A_q * N = {a_q * N}")
    return VStats(q=q, M=M, N=N, A=A, A_q=a_q, sum_v=sum_v, sum_v2=int((v * v).sum()))
