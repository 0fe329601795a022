"""Explicit bounds evaluated in the log domain.

The moduli the main estimate is stated for have thousands of digits, so
every bound here is built from :class:`LogReal` values (a nonnegative real
held as its natural log).  Constant checks that need more than double
precision go through mpmath at ``HP_DPS`` digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import total_ordering
from typing import Union

import mpmath

from .constants import (
    APPENDIX_DIVISOR_EXPONENT,
    APPENDIX_OMEGA_CONSTANT,
    APPENDIX_PHI_CONSTANT,
    COROLLARY_CONSTANT,
    COROLLARY_LOGLOG_CONSTANT,
    EULER_GAMMA,
    HP_DPS,
    LAMBDA2_CONSTANT,
    LN2,
    LOGLOG_THRESHOLD,
    SQRT10,
    THEOREM_CONSTANT,
    hp,
)

__all__ = [
    "BoundReport",
    "LogReal",
    "QConditions",
    "aq_ratio_floor",
    "burgess_bound_corollary",
    "burgess_bound_theorem",
    "check_q_conditions",
    "classic_bounds",
    "constant_chain",
    "lambda2_prime",
    "recursion_unroll",
    "threshold_facts",
    "trivial_bound_suffices",
]

LOG_Q_THRESHOLD = math.exp(LOGLOG_THRESHOLD)
GEOMETRIC_RATIO = 2 / SQRT10


class DomainError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class LogReal:
    """A nonnegative real x stored as ln x; zero is ln x = -inf."""

    log_value: float

    def __post_init__(self):
        if math.isnan(self.log_value) or self.log_value == math.inf:
            raise DomainError(f"invalid log value {self.log_value}")

    @classmethod
    def of(cls, x: Union[float, int, Fraction, "LogReal"]) -> "LogReal":
        if isinstance(x, LogReal):
            return x
        if x < 0:
            raise DomainError(f"LogReal holds nonnegative reals, got {x}")
        if x == 0:
            return cls.zero()
        return cls(math.log(x))

    @classmethod
    def zero(cls) -> "LogReal":
        return cls(-math.inf)

    @property
    def neg_infinity(self) -> bool:
        return self.log_value == -math.inf

    is_zero = neg_infinity

    def __add__(self, other) -> "LogReal":
        other = LogReal.of(other)
        a, b = self.log_value, other.log_value
        if a < b:
            a, b = b, a
        if b == -math.inf:
            return LogReal(a)
        return LogReal(a + math.log1p(math.exp(b - a)))

    __radd__ = __add__

    def __sub__(self, other) -> "LogReal":
        other = LogReal.of(other)
        a, b = self.log_value, other.log_value
        if b > a:
            raise DomainError("LogReal subtraction would go negative")
        if b == -math.inf:
            return self
        if b == a:
            return LogReal.zero()
        return LogReal(a + math.log1p(-math.exp(b - a)))

    def __mul__(self, other) -> "LogReal":
        other = LogReal.of(other)
        if self.neg_infinity or other.neg_infinity:
            return LogReal.zero()
        return LogReal(self.log_value + other.log_value)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogReal":
        other = LogReal.of(other)
        if other.neg_infinity:
            raise ZeroDivisionError("division by the zero LogReal")
        if self.neg_infinity:
            return self
        return LogReal(self.log_value - other.log_value)

    def __pow__(self, p: float) -> "LogReal":
        p = float(p)
        if not math.isfinite(p):
            raise DomainError("exponent must be finite")
        if self.neg_infinity:
            if p <= 0:
                raise DomainError("0 ** p is undefined for p <= 0")
            return self
        return LogReal(self.log_value * p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogReal):
            try:
                other = LogReal.of(other)
            except (TypeError, DomainError):
                return NotImplemented
        return self.log_value == other.log_value

    def __lt__(self, other) -> bool:
        return self.log_value < LogReal.of(other).log_value

    def __hash__(self) -> int:
        return hash(self.log_value)

    def __float__(self) -> float:
        if self.log_value > 709.78:
            return math.inf
        return math.exp(self.log_value)

    @property
    def log10(self) -> float:
        return self.log_value / math.log(10)

    def scientific(self, digits: int = 6) -> str:
        """Render as 'm.mmmmme+EEEE' even when the value overflows a double."""
        if self.neg_infinity:
            return "0"
        with mpmath.workdps(HP_DPS):
            l10 = mpmath.mpf(self.log_value) / mpmath.log(10)
            expo = int(mpmath.floor(l10))
            mant = mpmath.power(10, l10 - expo)
            return f"{mpmath.nstr(mant, digits)}e{expo:+d}"


Number = Union[float, int, Fraction, LogReal]


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: LogReal
    inputs: dict = field(default_factory=dict)
    in_hypothesis: bool = True
    holds_vs: bool | None = None
    measured: float | None = None

    def against(self, measured: Number) -> "BoundReport":
        m = LogReal.of(measured)
        return replace(self, holds_vs=bool(m <= self.value), measured=float(m))

    @property
    def ratio(self) -> float | None:
        """measured / bound, or None if nothing was compared."""
        if self.measured is None:
            return None
        if self.measured == 0:
            return 0.0
        return math.exp(math.log(self.measured) - self.value.log_value)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "log_value": self.value.log_value,
            "value": float(self.value),
            "scientific": self.value.scientific(),
            "in_hypothesis": self.in_hypothesis,
            "inputs": self.inputs,
        }


def _ratio(x: Number) -> LogReal:
    if isinstance(x, LogReal):
        return x
    if isinstance(x, Fraction):
        return LogReal(math.log(x.numerator) - math.log(x.denominator))
    return LogReal.of(x)


def classic_bounds(log_q: float, log_N: float) -> tuple[LogReal, LogReal]:
    """The trivial bound N and the shape sqrt(q) log q (implied constant 1)."""
    if log_q <= 0:
        raise DomainError("log q must be positive")
    if log_N < 0:
        raise DomainError("log N must be nonnegative")
    return LogReal(log_N), LogReal(0.5 * log_q + math.log(log_q))


def _common_factor(log_q: float, log_N: float, omega: int, d: Number) -> LogReal:
    """sqrt(N) q^(3/16) log(q)^(1/4) (2^omega d)^(3/4)."""
    two_omega_d = LogReal(omega * LN2) * _ratio(d)
    return (
        LogReal(0.5 * log_N)
        * LogReal(3 / 16 * log_q)
        * LogReal.of(log_q) ** 0.25
        * two_omega_d**0.75
    )


def _check_length(log_q: float, log_N: float) -> None:
    # A hair of relative slack so N = floor(q^(5/8)) is never rejected by rounding.
    if log_N > 5 / 8 * log_q * (1 + 1e-12):
        raise DomainError("the bound is stated for N <= q^(5/8)")
    if log_N < 0:
        raise DomainError("log N must be nonnegative")


def burgess_bound_theorem(
    log_q: float,
    log_N: float,
    omega: int,
    d: Number,
    phi_ratio: Number,
    *,
    relaxed: bool = False,
) -> BoundReport:
    """sqrt(N) q^(3/16) 9.07 log(q)^(1/4) (2^omega d)^(3/4) (q/phi(q))^(1/2).

    ``relaxed`` allows q below e^(e^9.594); the report is then flagged as
    outside the hypothesis.
    """
    in_hyp = log_q >= LOG_Q_THRESHOLD
    if not in_hyp and not relaxed:
        raise DomainError(f"needs log q >= e^{LOGLOG_THRESHOLD} (pass relaxed=True for sweeps)")
    if log_q <= 0:
        raise DomainError("log q must be positive")
    _check_length(log_q, log_N)
    ratio = _ratio(phi_ratio)
    if ratio < 1:
        raise DomainError("q/phi(q) is at least 1")
    value = _common_factor(log_q, log_N, omega, d) * THEOREM_CONSTANT * ratio**0.5
    inputs = {
        "log_q": log_q,
        "log_N": log_N,
        "omega": omega,
        "d": _echo(d),
        "phi_ratio": _echo(phi_ratio),
    }
    return BoundReport("theorem", value, inputs, in_hyp)


def _echo(x: Number):
    if isinstance(x, LogReal):
        return {"log": x.log_value}
    if isinstance(x, Fraction):
        return str(x)
    return x


def burgess_bound_corollary(
    loglog_q: float,
    log_N: float,
    omega: int,
    d: Number,
    *,
    relaxed: bool = False,
) -> BoundReport:
    """Same shape with (q/phi(q))^(1/2) traded for (loglog q + 1.69/loglog q)^(1/2)."""
    in_hyp = loglog_q >= LOGLOG_THRESHOLD
    if not in_hyp and not relaxed:
        raise DomainError(f"needs log log q >= {LOGLOG_THRESHOLD}")
    if loglog_q <= 0:
        raise DomainError("log log q must be positive")
    log_q = math.exp(loglog_q)
    _check_length(log_q, log_N)
    tail = LogReal.of(loglog_q + COROLLARY_LOGLOG_CONSTANT / loglog_q)
    value = _common_factor(log_q, log_N, omega, d) * COROLLARY_CONSTANT * tail**0.5
    inputs = {"loglog_q": loglog_q, "log_N": log_N, "omega": omega, "d": _echo(d)}
    return BoundReport("corollary", value, inputs, in_hyp)


def appendix_phi_ratio_ceiling(loglog_q: float) -> float:
    """Upper bound for q/phi(q): e^gamma loglog q + 3/loglog q."""
    return math.exp(EULER_GAMMA) * loglog_q + APPENDIX_PHI_CONSTANT / loglog_q


def appendix_log_divisor_ceiling(loglog_q: float) -> float:
    """log of the ceiling q^(1.066/loglog q) for d(q) (and hence 2^omega(q))."""
    return APPENDIX_DIVISOR_EXPONENT * math.exp(loglog_q) / loglog_q


def appendix_omega_ceiling(loglog_q: float) -> int:
    lq = math.exp(loglog_q)
    return math.floor(lq / loglog_q + APPENDIX_OMEGA_CONSTANT * lq / loglog_q**2)


def lambda2_prime(log_q: float, omega: int, d: Number, phi_ratio: Number) -> LogReal:
    """3.3325 log(q)^(1/4) (q/phi(q))^(1/2) (2^omega d)^(3/4)."""
    if log_q <= 1:
        raise DomainError("needs log q > 1")
    two_omega_d = LogReal(omega * LN2) * _ratio(d)
    return (
        LogReal.of(LAMBDA2_CONSTANT)
        * LogReal.of(log_q) ** 0.25
        * _ratio(phi_ratio) ** 0.5
        * two_omega_d**0.75
    )


def trivial_bound_suffices(log_q: float, log_N: float, lam: Number) -> bool:
    """True when N <= lam^2 q^(3/8), where |S| <= N already gives the estimate."""
    return log_N <= 2 * LogReal.of(lam).log_value + 3 / 8 * log_q


@dataclass(frozen=True)
class QConditions:
    """Each ``margin_*`` is log(lhs) - log(rhs); the condition holds iff it is >= 0.

    size: q^(1/8) >= 10 (2^omega (q/phi) / (2C) + 1) with the given omega, q/phi.
    half: the same at C = 1/2, which yields A_q/A >= phi(q)/(2q).
    ceiling: the size condition with both factors replaced by their ceilings.
    simplified: q^(1/8) >= 10 (q^(1/9) (e^gamma loglog q + 1/(3*1.066)) + 1).
    """

    loglog_q: float
    C: float
    margin_size: float
    margin_half: float
    margin_ceiling: float
    margin_simplified: float

    @property
    def cond_size(self) -> bool:
        return self.margin_size >= 0

    @property
    def cond_half(self) -> bool:
        return self.margin_half >= 0

    @property
    def cond_ceiling(self) -> bool:
        return self.margin_ceiling >= 0

    @property
    def cond_simplified(self) -> bool:
        return self.margin_simplified >= 0

    def as_dict(self) -> dict:
        out = {"loglog_q": self.loglog_q, "C": self.C}
        for tag in ("size", "half", "ceiling", "simplified"):
            out[f"cond_{tag}"] = getattr(self, f"cond_{tag}")
            out[f"margin_{tag}"] = getattr(self, f"margin_{tag}")
        return out


def _size_condition(log_q: float, two_omega: LogReal, ratio: LogReal, C: float) -> float:
    # q^(1/8) >= 10 (2^omega (q/phi) / (2C) + 1)
    rhs = (two_omega * ratio / (2 * C) + 1) * 10
    return log_q / 8 - rhs.log_value


def check_q_conditions(
    loglog_q: float,
    C: float = 0.5,
    *,
    omega: int | None = None,
    phi_ratio: Number | None = None,
) -> QConditions:
    """Size conditions on q, evaluated in the log domain.

    Without ``omega``/``phi_ratio`` the appendix ceilings stand in for
    2^omega(q) and q/phi(q).  The last condition has C = 1/2 built in.
    """
    if loglog_q <= 0:
        raise DomainError("log log q must be positive")
    if not 0 < C < 1:
        raise DomainError("C must lie in (0, 1)")
    L = loglog_q
    log_q = math.exp(L)
    ceil_ratio = LogReal.of(appendix_phi_ratio_ceiling(L))
    ceil_two_omega = LogReal(appendix_log_divisor_ceiling(L))
    two_omega = LogReal(omega * LN2) if omega is not None else ceil_two_omega
    ratio = _ratio(phi_ratio) if phi_ratio is not None else ceil_ratio

    m_size = _size_condition(log_q, two_omega, ratio, C)
    # A_q/A >= phi(q)/(2q) is what the first condition gives at C = 1/2.
    m_half = _size_condition(log_q, two_omega, ratio, 0.5)
    m_ceil = _size_condition(log_q, ceil_two_omega, ceil_ratio, C)
    tail = LogReal.of(math.exp(EULER_GAMMA) * L + 1 / (3 * APPENDIX_DIVISOR_EXPONENT))
    rhs_simple = (LogReal(log_q / 9) * tail + 1) * 10
    m_simple = log_q / 8 - rhs_simple.log_value
    return QConditions(L, C, m_size, m_half, m_ceil, m_simple)


def aq_ratio_floor(loglog_q: float, *, relaxed: bool = False) -> LogReal:
    """(1/2) / (e^gamma loglog q + 3/loglog q), the floor for A_q/A."""
    if loglog_q < LOGLOG_THRESHOLD and not relaxed:
        raise DomainError(f"needs log log q >= {LOGLOG_THRESHOLD}")
    if loglog_q <= 0:
        raise DomainError("log log q must be positive")
    return LogReal.of(0.5) / appendix_phi_ratio_ceiling(loglog_q)


def recursion_unroll(
    lam: Number, log_q: float, log_N: float, K: int
) -> tuple[list[LogReal], LogReal]:
    """Partial bounds after unrolling the maximal-function recursion K times.

    partial[k] = lam sqrt(N) q^(3/16) sum_{j<=k} (2/sqrt 10)^j + N / 5^(k+1)
    for k = 0..K; the second value is the K -> infinity limit.
    """
    if K < 0:
        raise DomainError("K must be nonnegative")
    main = LogReal.of(lam) * LogReal(0.5 * log_N + 3 / 16 * log_q)
    ratio = LogReal.of(GEOMETRIC_RATIO)
    partials = []
    series = LogReal.zero()
    term = main
    for k in range(K + 1):
        series = series + term
        term = term * ratio
        partials.append(series + LogReal(log_N - (k + 1) * math.log(5)))
    limit = main * (SQRT10 / (SQRT10 - 2))
    return partials, limit


def threshold_facts() -> dict:
    """Log-domain facts about q = e^(e^9.594), at HP_DPS digits."""
    with mpmath.workdps(HP_DPS):
        L = hp("loglog_threshold")
        log_q = mpmath.exp(L)
        log10_q = log_q / hp("ln10")
        expo = int(mpmath.floor(log10_q))
        mantissa = mpmath.power(10, log10_q - expo)
        mant6 = float(mpmath.nstr(mantissa, 6))

        # (1/10) q^(1/8) against 5 * 10^795
        lhs_b = log10_q / 8 - 1
        rhs_b = mpmath.log10(5) + 795

        # Lemma cutoff N <= e^((3/8) e^9.594) is N <= q^(3/8) at the threshold.
        cutoff_exp = mpmath.mpf(3) / 8 * mpmath.exp(L)
        q38_exp = mpmath.mpf(3) / 8 * log_q

        return {
            "log_q": float(log_q),
            "log10_q": float(log10_q),
            "mantissa": float(mantissa),
            "exponent10": expo,
            "matches_8.03104e6373": mant6 == 8.03104 and expo == 6373,
            "a_bound_log10": float(lhs_b),
            "a_bound_target_log10": float(rhs_b),
            "a_bound_holds": bool(lhs_b > rhs_b),
            "cutoff_exponent": float(cutoff_exp),
            "cutoff_consistent": bool(cutoff_exp == q38_exp),
        }


def constant_chain() -> dict:
    """The numeric constants that link the lemmas to the final bounds, at HP_DPS digits."""
    with mpmath.workdps(HP_DPS):
        s10 = hp("sqrt10")
        gamma = hp("euler_gamma")
        geo_limit = s10 / (s10 - 2)
        geo_sum = mpmath.nsum(lambda k: (2 / s10) ** k, [0, mpmath.inf])
        final = geo_limit * mpmath.mpf("3.3325")
        corollary = mpmath.mpf("9.07") * mpmath.exp(gamma / 2)
        loglog_const = 3 * mpmath.exp(-gamma)
        lam_const = (
            mpmath.mpf("1.0001")
            * (4 + mpmath.mpf(7) / 64) ** mpmath.mpf("0.25")
            * mpmath.mpf(30) ** mpmath.mpf("0.25")
        )
        return {
            "geometric_limit": geo_limit,
            "geometric_sum": geo_sum,
            "geometric_error": abs(geo_sum - geo_limit),
            "final_constant": final,
            "corollary_constant": corollary,
            "corollary_loglog_constant": loglog_const,
            "lambda2_constant_derived": lam_const,
        }
