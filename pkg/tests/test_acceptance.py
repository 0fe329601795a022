"""One test per acceptance criterion, at the stated scale and tolerance."""

import math
import time

import mpmath
import numpy as np
import pytest

from burgess.arith import divisors, profile
from burgess.bounds import check_q_conditions, constant_chain, threshold_facts
from burgess.characters import build_group, enumerate_characters, induce, unit_roots
from burgess.suites import (
    summarize,
    sweep_bounds,
    verify_appendix,
    verify_lemma31,
    verify_lemma32,
    verify_prop21,
    verify_vstats,
)
from conftest import ACCEPTANCE

SEED = 2024


def report(n, ok, text):
    ACCEPTANCE[n] = (bool(ok), text)
    assert ok, text


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def test_criterion_1_prop21_exhaustive():
    recs, secs = timed(verify_prop21, 1, 3000)
    s = summarize(recs)
    checked = sum(r.instance["checked"] for r in recs)
    ok = s["failed"] == 0 and len(recs) == 3000 and checked == 3000 * 3001 // 2 and secs <= 120
    report(1, ok, f"{checked} (A, q) pairs, {s['failed']} failures, {secs:.1f}s")


def test_criterion_2_lemma32_exhaustive():
    recs, secs = timed(verify_lemma32, 1, 200)
    s = summarize(recs)
    ok = s["failed"] == 0 and secs <= 600 and s["min_margin"] >= -1e-6
    report(2, ok, f"{s['records']} (q, chi, B) cases, {s['failed']} failures, min margin {s['min_margin']:.4g}, {secs:.1f}s")


def test_criterion_3_lemma31_sampled():
    recs, secs = timed(verify_lemma31, 1, 300, seed=SEED, samples=200)
    s = summarize(recs)
    total = sum(r.instance["samples"] for r in recs)
    prims = sum(
        1 for q in range(3, 301) for c in build_group(q).conductors() if c == q
    )
    ok = s["failed"] == 0 and len(recs) == prims and total == 200 * prims
    report(3, ok, f"{prims} primitive characters x 200 tuples, {s['failed']} failures, {secs:.1f}s")


def test_criterion_4_vl_moment_bound():
    recs, secs = timed(verify_vstats, 1, 500, seed=SEED, samples=10000)
    s = summarize(recs)
    exact = all(r.extra["sum_v"] == r.extra["A_q"] * r.instance["N"] for r in recs)
    admissible = all(
        r.instance["N"] ** 8 <= r.instance["q"] ** 5 and r.instance["A"] >= 1 and r.instance["q"] <= 500
        for r in recs
    )
    ok = len(recs) >= 10**4 and s["failed"] == 0 and exact and admissible
    report(4, ok, f"{len(recs)} tuples, {s['failed']} failures, {secs:.1f}s")


def test_criterion_5_constant_chain():
    c = constant_chain()
    with mpmath.workdps(40):
        s10 = mpmath.sqrt(10)
        closed = s10 / (s10 - 2)
        series = mpmath.nsum(lambda k: (2 / s10) ** k, [0, mpmath.inf])
        checks = [
            9.066 <= c["final_constant"] <= 9.07,
            12.10 <= c["corollary_constant"] <= 12.11,
            1.684 <= c["corollary_loglog_constant"] <= 1.69,
            abs(series - closed) < mpmath.mpf("1e-25"),
            c["geometric_error"] < mpmath.mpf("1e-25"),
        ]
    report(
        5,
        all(checks),
        f"{mpmath.nstr(c['final_constant'], 8)}, {mpmath.nstr(c['corollary_constant'], 8)}, "
        f"{mpmath.nstr(c['corollary_loglog_constant'], 8)}, series error {mpmath.nstr(c['geometric_error'], 3)}",
    )


def test_criterion_6_threshold_facts():
    f = threshold_facts()
    hi = check_q_conditions(9.594, 0.5)
    lo = check_q_conditions(2.0, 0.5)
    ok = f["matches_8.03104e6373"] and f["a_bound_holds"] and hi.cond_simplified and not lo.cond_simplified
    report(
        6,
        ok,
        f"q = {f['mantissa']:.6f}e{f['exponent10']}, log10(q^(1/8)/10) = {f['a_bound_log10']:.3f} "
        f"> {f['a_bound_target_log10']:.3f}, size condition {hi.cond_simplified} at 9.594, {lo.cond_simplified} at 2",
    )


def test_criterion_7_appendix_bounds():
    recs, secs = timed(verify_appendix, 3, 10**6)
    s = summarize(recs)
    failures = sum(r.extra["failures"] for r in recs)
    ok = s["failed"] == 0 and failures == 0 and secs <= 60
    report(7, ok, f"3 <= n <= 10^6, three bounds, {failures} failures, {secs:.1f}s")


def _mobius_primitive_count(q):
    return sum(profile(q // d).mu * profile(d).phi for d in divisors(q))


def _scaled_tables(q):
    g = build_group(q)
    chars = enumerate_characters(g)
    return g, chars, g.log_table_matrix(chars), g.conductors(chars)


def test_criterion_8_character_infrastructure():
    worst_orth = 0.0
    bad_counts = []
    bad_roundtrip = []
    cache = {}
    for q in range(1, 1001):
        g, chars, T, cond = _scaled_tables(q)
        cache[q] = (g, T, cond)
        e = g.exponent
        V = unit_roots(e)[T] * (T >= 0)
        col = np.abs(V[:, 1:].sum(axis=0))
        if col.size:
            worst_orth = max(worst_orth, float(col.max()))
        if int((cond == q).sum()) != _mobius_primitive_count(q):
            bad_counts.append(q)
        # Conductor/induce round trip: the characters of conductor d mod q are
        # exactly the primitive characters mod d read on the units mod q.
        units = np.flatnonzero(g.unit_mask)
        for d in divisors(q):
            gd, Td, cd = cache[d]
            prim = Td[:, cd == d]
            lifted = prim[units % d] * (e // gd.exponent)
            mine = T[units][:, cond == d]
            a = {c.tobytes() for c in lifted.T}
            b = {c.tobytes() for c in mine.T}
            if a != b or len(a) != prim.shape[1]:
                bad_roundtrip.append((q, d))
    # the induce() function itself, exhaustively on a smaller range
    for q in range(1, 121):
        for d in divisors(q):
            for chi in enumerate_characters(build_group(d)):
                if chi.primitive:
                    psi = induce(chi, q)
                    if psi.conductor != d:
                        bad_roundtrip.append(("induce", q, d))
    ok = worst_orth <= 1e-9 and not bad_counts and not bad_roundtrip
    report(
        8,
        ok,
        f"q <= 1000: max |sum chi| = {worst_orth:.2e}, count mismatches {len(bad_counts)}, "
        f"round-trip mismatches {len(bad_roundtrip)}",
    )


def test_criterion_9_relaxed_sweep():
    rows, secs = timed(sweep_bounds, 1, 1000)
    failed = sum(not r.holds for r in rows)
    ratio = min(rows, key=lambda r: r.ratio)
    worst = max(rows, key=lambda r: r.ratio)
    q_count = len({r.q for r in rows})
    ok = failed == 0 and rows and all(r.N ** 8 <= r.q**5 for r in rows)
    report(
        9,
        ok,
        f"{len(rows)} rows over {q_count} moduli, {failed} violations, ratio min {ratio.ratio:.3g} "
        f"max {worst.ratio:.3g} (q={worst.q}, N={worst.N}), {secs:.1f}s",
    )
