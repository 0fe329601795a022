"""Dirichlet characters modulo q, evaluated exactly.

The unit group (Z/q)* is split over the prime powers of q into cyclic
factors: one per odd prime power (generated by its smallest primitive
root), order 2 for 4, and orders 2 and 2^(e-2) for 2^e with e >= 3
(generated by -1 and 5).  Each generator is lifted to a residue mod q
that is 1 modulo the other prime powers, so a character is an exponent
vector on those generators.

Values are kept as turn fractions k/m standing for exp(2*pi*i*k/m);
complex numbers only appear when sums are accumulated.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .arith import divisors, factorize

__all__ = [
    "CharacterGroup",
    "DirichletCharacter",
    "UnitRootValue",
    "build_group",
    "conductor",
    "enumerate_characters",
    "evaluate",
    "induce",
]

MAX_MODULUS = 10**7


@dataclass(frozen=True)
class UnitRootValue:
    """Zero, or the root of unity exp(2*pi*i*turn)."""

    zero: bool
    turn: Fraction = Fraction(0)

    @classmethod
    def of_turn(cls, turn: Fraction) -> "UnitRootValue":
        return cls(False, turn % 1)

    def __mul__(self, other: "UnitRootValue") -> "UnitRootValue":
        if self.zero or other.zero:
            return ZERO
        return UnitRootValue.of_turn(self.turn + other.turn)

    def conjugate(self) -> "UnitRootValue":
        return self if self.zero else UnitRootValue.of_turn(-self.turn)

    def __complex__(self) -> complex:
        if self.zero:
            return 0j
        # Exact values at the quarter turns keep |value| == 1 exactly.
        quarter = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}
        if (self.turn * 4).denominator == 1:
            return quarter[int(self.turn * 4)]
        return cmath.exp(2j * math.pi * self.turn.numerator / self.turn.denominator)

    def __abs__(self) -> int:
        return 0 if self.zero else 1


ZERO = UnitRootValue(True)
ONE = UnitRootValue(False, Fraction(0))


def _primitive_root(p: int, e: int) -> int:
    """Smallest primitive root modulo the odd prime power p**e."""
    pe = p**e
    phi = pe // p * (p - 1)
    tests = [phi // r for r in factorize(phi).primes]
    for g in range(2, pe):
        if g % p == 0:
            continue
        if all(pow(g, t, pe) != 1 for t in tests):
            return g
    raise ArithmeticError(f"no primitive root mod {pe}")  # pragma: no cover


@dataclass(frozen=True)
class _LocalFactor:
    """Cyclic pieces contributed by one prime power p**e of q."""

    p: int
    e: int
    modulus: int
    generators: tuple[int, ...]  # residues mod p**e
    orders: tuple[int, ...]
    # logs[r, j] = discrete log of residue r mod p**e on generator j, -1 if p | r.
    logs: np.ndarray = field(repr=False, compare=False)


def _local_factor(p: int, e: int) -> _LocalFactor:
    pe = p**e
    if p != 2:
        g = _primitive_root(p, e)
        order = pe // p * (p - 1)
        logs = np.full((pe, 1), -1, dtype=np.int64)
        x = 1
        for k in range(order):
            logs[x, 0] = k
            x = x * g % pe
        return _LocalFactor(p, e, pe, (g,), (order,), logs)
    if e == 1:
        logs = np.zeros((2, 0), dtype=np.int64)
        return _LocalFactor(2, 1, 2, (), (), logs)
    if e == 2:
        logs = np.full((4, 1), -1, dtype=np.int64)
        logs[1, 0] = 0
        logs[3, 0] = 1
        return _LocalFactor(2, 2, 4, (3,), (2,), logs)
    half = pe // 4
    logs = np.full((pe, 2), -1, dtype=np.int64)
    x = 1
    for k in range(half):
        logs[x] = (0, k)
        logs[pe - x] = (1, k)
        x = x * 5 % pe
    return _LocalFactor(2, e, pe, (pe - 1, 5), (2, half), logs)


class CharacterGroup:
    """(Z/q)* as a product of cyclic groups with discrete-log tables."""

    def __init__(self, q: int):
        if q < 1:
            raise ValueError(f"modulus must be positive, got {q}")
        if q > MAX_MODULUS:
            raise OverflowError(f"modulus {q} exceeds the table bound {MAX_MODULUS}")
        self.q = q
        self._locals = tuple(_local_factor(p, e) for p, e in factorize(q))
        gens: list[int] = []
        orders: list[int] = []
        for loc in self._locals:
            rest = q // loc.modulus
            for g, order in zip(loc.generators, loc.orders):
                gens.append(_crt_lift(g, loc.modulus, rest))
                orders.append(order)
        self.generators = tuple(gens)
        self.orders = tuple(orders)
        self.exponent = math.lcm(*orders) if orders else 1

    @property
    def components(self) -> list[tuple[int, int]]:
        return list(zip(self.generators, self.orders))

    @cached_property
    def phi(self) -> int:
        return math.prod(self.orders)

    def __repr__(self) -> str:
        return f"CharacterGroup(q={self.q}, components={self.components})"

    def dlog(self, a: int) -> tuple[int, ...] | None:
        """Exponent vector of a on the generators, or None if gcd(a, q) > 1."""
        if math.gcd(a, self.q) != 1:
            return None
        out: list[int] = []
        for loc in self._locals:
            out.extend(int(v) for v in loc.logs[a % loc.modulus])
        return tuple(out)

    @cached_property
    def dlog_matrix(self) -> np.ndarray:
        """(q, ncomponents) int64 array of discrete logs; -1 rows mark non-units."""
        n = np.arange(self.q)
        cols = []
        unit = np.ones(self.q, dtype=bool)
        for loc in self._locals:
            block = loc.logs[n % loc.modulus]
            unit &= np.gcd(n, loc.p) == 1
            cols.append(block)
        mat = np.concatenate(cols, axis=1) if cols else np.zeros((self.q, 0), np.int64)
        mat = mat.copy()
        mat[~unit] = -1
        if self.q == 1:
            mat = np.zeros((1, 0), dtype=np.int64)
        return mat

    @cached_property
    def unit_mask(self) -> np.ndarray:
        n = np.arange(self.q)
        return np.gcd(n, self.q) == 1

    def characters(self) -> list["DirichletCharacter"]:
        return enumerate_characters(self)

    def log_table_matrix(self, chars: list["DirichletCharacter"] | None = None) -> np.ndarray:
        """(q, len(chars)) values as numerators over ``self.exponent``; -1 on non-units."""
        if chars is None:
            chars = enumerate_characters(self)
        e = self.exponent
        weights = np.array(
            [[c * (e // o) for c, o in zip(ch.exponents, self.orders)] for ch in chars],
            dtype=np.int64,
        ).reshape(len(chars), len(self.orders))
        dl = np.where(self.dlog_matrix < 0, 0, self.dlog_matrix)
        out = (dl @ weights.T) % e
        out[~self.unit_mask] = -1
        return out

    def conductors(self, chars: list["DirichletCharacter"] | None = None) -> np.ndarray:
        """Conductor of every character by the definitional divisor test, batched."""
        if chars is None:
            chars = enumerate_characters(self)
        table = self.log_table_matrix(chars)
        result = np.zeros(len(chars), dtype=np.int64)
        pending = np.ones(len(chars), dtype=bool)
        for d in divisors(self.q):
            rows = np.arange(1, self.q + 1, d) % self.q
            rows = rows[self.unit_mask[rows]]
            trivial = (table[rows] == 0).all(axis=0)
            hit = pending & trivial
            result[hit] = d
            pending &= ~hit
            if not pending.any():
                break
        return result


def _crt_lift(g: int, m: int, rest: int) -> int:
    """Residue mod m*rest that is g mod m and 1 mod rest."""
    if rest == 1:
        return g % m
    t = (g - 1) * pow(rest, -1, m) % m
    return (1 + rest * t) % (m * rest)


def build_group(q: int) -> CharacterGroup:
    return CharacterGroup(q)


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    group: CharacterGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != len(self.group.orders):
            raise ValueError("exponent vector length does not match the group")
        for c, o in zip(self.exponents, self.group.orders):
            if not 0 <= c < o:
                raise ValueError(f"exponent {c} out of range for a factor of order {o}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and self.q == other.q
            and self.exponents == other.exponents
        )

    def __hash__(self) -> int:
        return hash((self.q, self.exponents))

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.q}, exponents={self.exponents})"

    @property
    def q(self) -> int:
        return self.group.q

    @cached_property
    def order(self) -> int:
        return math.lcm(
            1, *(o // math.gcd(o, c) for c, o in zip(self.exponents, self.group.orders))
        )

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @cached_property
    def conductor(self) -> int:
        return conductor(self)

    @property
    def primitive(self) -> bool:
        return self.conductor == self.q

    def __call__(self, n: int) -> UnitRootValue:
        return evaluate(self, n)

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        m = self.order
        return tuple(c * m // o for c, o in zip(self.exponents, self.group.orders))

    @cached_property
    def log_table(self) -> np.ndarray:
        """int64 array t of length q: chi(n) = exp(2*pi*i*t[n]/order), t[n] = -1 if chi(n) = 0."""
        g = self.group
        w = np.array(self._weights, dtype=np.int64)
        dl = np.where(g.dlog_matrix < 0, 0, g.dlog_matrix)
        out = (dl @ w) % self.order if len(w) else np.zeros(g.q, dtype=np.int64)
        out = out.astype(np.int64)
        out[~g.unit_mask] = -1
        return out

    def values(self) -> np.ndarray:
        """complex128 array of chi(n) for n = 0..q-1."""
        return unit_roots(self.order)[self.log_table] * (self.log_table >= 0)


def unit_roots(m: int) -> np.ndarray:
    """exp(2*pi*i*k/m) for k = 0..m-1, with the quarter turns exact.

    Indexing with -1 picks the last entry; callers mask non-units.
    """
    k = np.arange(m)
    roots = np.exp(2j * np.pi * k / m)
    if m % 4 == 0:
        roots[k == 0] = 1
        roots[k == m // 4] = 1j
        roots[k == m // 2] = -1
        roots[k == 3 * m // 4] = -1j
    elif m % 2 == 0:
        roots[0] = 1
        roots[m // 2] = -1
    else:
        roots[0] = 1
    return roots


def enumerate_characters(group: CharacterGroup) -> list[DirichletCharacter]:
    """All phi(q) characters; the principal character comes first."""
    return [
        DirichletCharacter(group, tuple(exps))
        for exps in itertools.product(*(range(o) for o in group.orders))
    ]


def evaluate(chi: DirichletCharacter, n: int) -> UnitRootValue:
    logs = chi.group.dlog(n % chi.q)
    if logs is None:
        return ZERO
    turn = sum(
        (Fraction(c * k, o) for c, k, o in zip(chi.exponents, logs, chi.group.orders)),
        Fraction(0),
    )
    return UnitRootValue.of_turn(turn)


def conductor(chi: DirichletCharacter) -> int:
    """Smallest d | q with chi(n) = 1 for every unit n = 1 (mod d)."""
    q = chi.q
    table = chi.log_table
    units = chi.group.unit_mask
    for d in divisors(q):
        rows = np.arange(1, q + 1, d) % q
        rows = rows[units[rows]]
        if (table[rows] == 0).all():
            return d
    return q  # pragma: no cover - d = q always passes


def induce(chi_d: DirichletCharacter, q: int) -> DirichletCharacter:
    """The character mod q agreeing with chi_d on units mod q."""
    d = chi_d.q
    if q < 1 or q % d:
        raise ValueError(f"cannot induce from modulus {d} to {q}: {d} does not divide {q}")
    target = CharacterGroup(q)
    # Solve for the exponent on each generator of the larger group.
    exps = []
    for g, o in zip(target.generators, target.orders):
        val = evaluate(chi_d, g)
        # chi_d(g)^o = 1, so the turn is a multiple of 1/o.
        exps.append(int(val.turn * o) % o)
    return DirichletCharacter(target, tuple(exps))
