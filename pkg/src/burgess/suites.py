"""Verification suites: each checks one statement over a parameter range.

Every suite returns a list of :class:`VerificationRecord` in a fixed order
(ascending q, then character index, then instance), whatever the number of
worker processes.  Per-q work is a module-level function so it can be
shipped to a process pool.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable

import numpy as np

from . import kernels
from .arith import profile, sieve_profiles, squarefree_divisors
from .arith import divisor_upper_bound, omega_upper_bound, phi_lower_bound
from .bounds import (
    burgess_bound_theorem,
    check_q_conditions,
    classic_bounds,
    constant_chain,
    threshold_facts,
)
from .characters import build_group, enumerate_characters, unit_roots
from .charsums import TOLERANCE, fourth_moment_rhs
from .prng import SplitMix64, derive_seed

__all__ = [
    "SweepRow",
    "VerificationRecord",
    "run_sharded",
    "summarize",
    "sweep_bounds",
    "verify_appendix",
    "verify_constants",
    "verify_lemma31",
    "verify_lemma32",
    "verify_prop21",
    "verify_thresholds",
    "verify_vstats",
]


@dataclass(frozen=True)
class VerificationRecord:
    statement: str
    instance: dict
    lhs: float
    rhs: float
    holds: bool
    extra: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def run_sharded(fn: Callable[[int], list], qs: Iterable[int], workers: int = 1) -> list:
    """Apply fn to each q and concatenate the results in q order."""
    qs = list(qs)
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(qs) <= 1:
        chunks = [fn(q) for q in qs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(fn, qs, chunksize=max(1, len(qs) // (8 * workers))))
    return [rec for chunk in chunks for rec in chunk]


def summarize(records: list[VerificationRecord]) -> dict:
    failed = sum(not r.holds for r in records)
    margins = [r.margin for r in records]
    return {
        "records": len(records),
        "held": len(records) - failed,
        "failed": failed,
        "min_margin": min(margins) if margins else None,
    }


# -- coprime counting ---------------------------------------------------------


def _prop21_q(q: int) -> list[VerificationRecord]:
    prof = profile(q)
    A = np.arange(1, q + 1, dtype=np.int64)
    count = np.zeros(q, dtype=np.int64)
    for d, mu in squarefree_divisors(q):
        count += mu * (A // d)
    direct = np.cumsum(np.gcd(A, q) == 1)
    # 2 |count*q - A*phi| < 2^omega * q, all in integers.
    dev = np.abs(count * q - A * prof.phi)
    ok = 2 * dev < (1 << prof.omega) * q
    worst = int(np.argmax(dev))
    holds = bool(ok.all() and (count == direct).all())
    return [
        VerificationRecord(
            "Prop2.1",
            {"q": q, "A": worst + 1, "checked": q},
            lhs=float(dev[worst]) / q,
            rhs=2.0 ** (prof.omega - 1),
            holds=holds,
            extra={"failures": int((~ok).sum()), "count_mismatch": int((count != direct).sum())},
        )
    ]


def verify_prop21(q_lo: int, q_hi: int, workers: int = 1) -> list[VerificationRecord]:
    """Coprime-count error below 2^(omega(q)-1) for every 1 <= A <= q.

    One record per q, carrying the A with the largest |error|.
    """
    return run_sharded(_prop21_q, range(max(1, q_lo), q_hi + 1), workers)


# -- characters ---------------------------------------------------------------


def _primitive_tables(q: int):
    """(index, log table over the group exponent, exponent) for each primitive character."""
    group = build_group(q)
    chars = enumerate_characters(group)
    cond = group.conductors(chars)
    table = group.log_table_matrix(chars)
    idx = [i for i in range(len(chars)) if cond[i] == q]
    return group, [(i, np.ascontiguousarray(table[:, i])) for i in idx], group.exponent


def _lemma32_q(q: int) -> list[VerificationRecord]:
    out = []
    _, prims, e = _primitive_tables(q)
    b_max = math.isqrt(q - 1) if q > 1 else 0  # largest B with B*B < q
    for i, t in prims:
        for B in range(1, b_max + 1):
            lhs = kernels.fourth_moment(t, e, B)
            rhs = fourth_moment_rhs(q, B)
            out.append(
                VerificationRecord("Lemma3.2", {"q": q, "chi": i, "B": B}, lhs, rhs, lhs <= rhs + TOLERANCE)
            )
    return out


def verify_lemma32(q_lo: int, q_hi: int, workers: int = 1) -> list[VerificationRecord]:
    """Fourth moment against its bound for every primitive character and B < sqrt(q)."""
    return run_sharded(_lemma32_q, range(max(1, q_lo), q_hi + 1), workers)


def draw_shift_tuples(q: int, samples: int, rng: SplitMix64) -> np.ndarray:
    """``samples`` rows of four residues mod q, at least three distinct."""
    rows: list[np.ndarray] = []
    have = 0
    while have < samples:
        block = rng.below(q, 4 * (samples - have + 4)).reshape(-1, 4)
        s = np.sort(block, axis=1)
        distinct = 1 + (np.diff(s, axis=1) != 0).sum(axis=1)
        block = block[distinct >= 3][: samples - have]
        rows.append(block)
        have += len(block)
    return np.concatenate(rows)


def polynomial_bounds(q: int, shifts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`charsums.polynomial_bound` over rows of shifts."""
    m = shifts.astype(np.int64)
    prods = np.ones_like(m)
    for i in range(4):
        for j in range(4):
            if i != j:
                prods[:, i] *= m[:, i] - m[:, j]
    g = np.gcd(prods, q)
    nz = prods != 0
    scale = 8 ** profile(q).omega * math.sqrt(q)
    hi = np.where(nz, g, 0).max(axis=1) * scale
    lo = np.where(nz, g, q + 1).min(axis=1) * scale
    return hi, lo


def _lemma31_q(q: int, seed: int, samples: int, detail: bool) -> list[VerificationRecord]:
    if q < 3:
        return []
    out = []
    _, prims, e = _primitive_tables(q)
    for i, t in prims:
        rng = SplitMix64(derive_seed(seed, q, i))
        shifts = draw_shift_tuples(q, samples, rng)
        sums = kernels.polynomial_sums(t, e, shifts)
        hi, lo = polynomial_bounds(q, shifts)
        ok = sums <= hi + TOLERANCE
        if detail:
            for k, row in enumerate(shifts.tolist()):
                out.append(
                    VerificationRecord(
                        "Lemma3.1",
                        {"q": q, "chi": i, "m": row},
                        float(sums[k]),
                        float(hi[k]),
                        bool(ok[k]),
                        {"min_bound_holds": bool(sums[k] <= lo[k] + TOLERANCE)},
                    )
                )
            continue
        k = int(np.argmin(hi - sums))
        out.append(
            VerificationRecord(
                "Lemma3.1",
                {"q": q, "chi": i, "m": shifts[k].tolist(), "samples": samples},
                float(sums[k]),
                float(hi[k]),
                bool(ok.all()),
                {
                    "failures": int((~ok).sum()),
                    "min_bound_holds": int((sums <= lo + TOLERANCE).sum()),
                },
            )
        )
    return out


def verify_lemma31(
    q_lo: int, q_hi: int, seed: int, samples: int = 200, workers: int = 1, detail: bool = False
) -> list[VerificationRecord]:
    """Complete sums of chi(f1) conj(chi(f2)) against 8^omega sqrt(q) max gcd(q, A_i).

    Each primitive character gets its own ``samples`` seeded shift tuples.
    Without ``detail`` one record per character carries the tightest tuple.
    """
    fn = partial(_lemma31_q, seed=seed, samples=samples, detail=detail)
    return run_sharded(fn, range(max(1, q_lo), q_hi + 1), workers)


# -- v(l) statistics ----------------------------------------------------------


def _iroot4(n: int) -> int:
    r = math.isqrt(math.isqrt(n))
    while (r + 1) ** 4 <= n:
        r += 1
    while r**4 > n:
        r -= 1
    return r


def block_length_A(q: int, N: int) -> int:
    """floor(N q^(-1/4) / 10) in exact integer arithmetic."""
    return _iroot4(N**4 // (10**4 * q))


def admissible_lengths(q: int) -> list[int]:
    """N with N <= q^(5/8) and floor(N q^(-1/4)/10) >= 1."""
    out = []
    N = 1
    while N**8 <= q**5:
        if N**4 >= 10**4 * q:
            out.append(N)
        N += 1
    return out


def verify_vstats(q_lo: int, q_hi: int, seed: int, samples: int) -> list[VerificationRecord]:
    """sum v(l) = A_q N exactly and sum v(l)^2 <= A_q^2 + 2AN log(2A_q), on seeded tuples."""
    from .charsums import v_statistics

    pool = [(q, N) for q in range(max(1, q_lo), q_hi + 1) for N in admissible_lengths(q)]
    if not pool:
        return []
    rng = SplitMix64(derive_seed(seed, 0x5653))
    picks = rng.below(len(pool), samples)
    out = []
    for k, j in enumerate(picks.tolist()):
        q, N = pool[j]
        M = int(rng.below(q, 1)[0])
        A = block_length_A(q, N)
        st = v_statistics(q, M, N, A)
        out.append(
            VerificationRecord(
                "Sec4.vl",
                {"sample": k, "q": q, "M": M, "N": N, "A": A},
                float(st.sum_v2),
                st.moment_bound,
                st.holds and st.sum_v == st.A_q * N,
                {"A_q": st.A_q, "sum_v": st.sum_v},
            )
        )
    out.sort(key=lambda r: (r.instance["q"], r.instance["sample"]))
    return out


# -- appendix bounds ----------------------------------------------------------


def verify_appendix(n_lo: int, n_hi: int, block: int = 10000) -> list[VerificationRecord]:
    """phi, d and omega bounds for n_lo <= n <= n_hi (n >= 3).

    One record per theorem per block of ``block`` consecutive n, carrying
    the n with the smallest slack.
    """
    n_lo = max(3, n_lo)
    if n_hi < n_lo:
        return []
    prof = sieve_profiles(n_hi)
    n = np.arange(n_lo, n_hi + 1)
    nf = n.astype(np.float64)
    checks = {
        # (lhs, rhs, strict): holds iff lhs < rhs (strict) or lhs <= rhs
        "ThmA.1": (phi_lower_bound(nf), prof["phi"][n_lo:].astype(np.float64), True),
        "ThmA.2": (prof["d"][n_lo:].astype(np.float64), divisor_upper_bound(nf), False),
        "ThmA.3": (prof["omega"][n_lo:].astype(np.float64), omega_upper_bound(nf), False),
    }
    out = []
    for start in range(0, len(n), block):
        sl = slice(start, start + block)
        for name, (lhs, rhs, strict) in checks.items():
            lb, rb = lhs[sl], rhs[sl]
            ok = lb < rb if strict else lb <= rb
            k = int(np.argmin(rb - lb))
            out.append(
                VerificationRecord(
                    name,
                    {"n_lo": int(n[sl][0]), "n_hi": int(n[sl][-1]), "n": int(n[sl][k])},
                    float(lb[k]),
                    float(rb[k]),
                    bool(ok.all()),
                    {"failures": int((~ok).sum())},
                )
            )
    return out


# -- constants and thresholds -------------------------------------------------


def verify_constants() -> list[VerificationRecord]:
    c = constant_chain()
    return [
        VerificationRecord(
            "Const.final", {"expr": "sqrt10/(sqrt10-2)*3.3325"}, float(c["final_constant"]), 9.07,
            bool(9.066 <= c["final_constant"] <= 9.07),
        ),
        VerificationRecord(
            "Const.corollary", {"expr": "9.07*exp(gamma/2)"}, float(c["corollary_constant"]), 12.11,
            bool(12.10 <= c["corollary_constant"] <= 12.11),
        ),
        VerificationRecord(
            "Const.loglog", {"expr": "3*exp(-gamma)"}, float(c["corollary_loglog_constant"]), 1.69,
            bool(1.684 <= c["corollary_loglog_constant"] <= 1.69),
        ),
        VerificationRecord(
            "Const.geometric", {"expr": "sum (2/sqrt10)^k - sqrt10/(sqrt10-2)"},
            float(c["geometric_error"]), 1e-25, bool(c["geometric_error"] <= 1e-25),
        ),
        VerificationRecord(
            "Const.lambda2", {"expr": "1.0001*(4+7/64)^(1/4)*30^(1/4)"},
            float(c["lambda2_constant_derived"]), 3.3325,
            bool(c["lambda2_constant_derived"] <= 3.3325),
        ),
    ]


def verify_thresholds() -> list[VerificationRecord]:
    f = threshold_facts()
    at = check_q_conditions(9.594, 0.5)
    low = check_q_conditions(2.0, 0.5)
    return [
        VerificationRecord(
            "Thr.q_digits", {"expect": "8.03104e6373"}, f["mantissa"], 8.03104,
            f["matches_8.03104e6373"], {"exponent10": f["exponent10"]},
        ),
        VerificationRecord(
            "Thr.A_size", {"expect": "q^(1/8)/10 > 5e795", "unit": "log10"},
            f["a_bound_target_log10"], f["a_bound_log10"], f["a_bound_holds"],
        ),
        VerificationRecord(
            "Thr.lemma_cutoff", {"expect": "(3/8)e^9.594 = log q^(3/8)"},
            f["cutoff_exponent"], f["cutoff_exponent"], f["cutoff_consistent"],
        ),
        VerificationRecord(
            "Cond.simplified.holds", {"loglog_q": 9.594, "unit": "log margin"}, 0.0, at.margin_simplified, at.cond_simplified,
        ),
        VerificationRecord(
            "Cond.simplified.fails", {"loglog_q": 2.0, "unit": "log margin"}, low.margin_simplified, 0.0, not low.cond_simplified,
        ),
    ]


# -- bound sweep --------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SweepRow:
    q: int
    chi: int
    N: int
    measured: float
    trivial: float
    pv_shape: float
    theorem: float

    @property
    def ratio(self) -> float:
        return self.measured / self.theorem

    @property
    def holds(self) -> bool:
        return self.measured <= self.theorem + TOLERANCE


SWEEP_COLUMNS = ("q", "chi", "N", "measured", "trivial", "pv_shape", "theorem", "ratio")


def length_grid(n_max: int, per_decade: int = 8) -> list[int]:
    """Log-spaced window lengths 1..n_max, always including both ends."""
    if n_max < 1:
        return []
    k = max(2, int(math.ceil(per_decade * math.log10(max(n_max, 2)))) + 1)
    pts = np.unique(np.rint(np.geomspace(1, n_max, k)).astype(int))
    return [int(x) for x in pts]


def _sweep_q(q: int) -> list[SweepRow]:
    if q < 3:
        return []
    n_max = math.floor(q ** (5 / 8))
    while (n_max + 1) ** 8 <= q**5:
        n_max += 1
    while n_max**8 > q**5:
        n_max -= 1
    grid = length_grid(n_max)
    prof = profile(q)
    log_q = math.log(q)
    rhs = {}
    for N in grid:
        thm = burgess_bound_theorem(
            log_q, math.log(N), prof.omega, prof.d, q / prof.phi, relaxed=True
        )
        triv, pv = classic_bounds(log_q, math.log(N))
        rhs[N] = (float(triv), float(pv), float(thm.value))
    _, prims, e = _primitive_tables(q)
    roots = unit_roots(e)
    rows = []
    for i, t in prims:
        vals = roots[t] * (t >= 0)
        maxfn = np.maximum.accumulate(kernels.window_maxima(vals, n_max))
        for N in grid:
            triv, pv, thm = rhs[N]
            rows.append(SweepRow(q, i, N, float(maxfn[N - 1]), triv, pv, thm))
    return rows


def sweep_bounds(q_lo: int, q_hi: int, workers: int = 1) -> list[SweepRow]:
    """Measured maximal function against the trivial, Polya-Vinogradov-shape and
    relaxed main bound, for every primitive character mod q and N up to q^(5/8).
    """
    return run_sharded(_sweep_q, range(max(1, q_lo), q_hi + 1), workers)
