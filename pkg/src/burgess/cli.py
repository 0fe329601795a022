"""Command-line harness: verification suites, the bound sweep, tables.

Exit status is 0 when every record holds, 1 when any fails (after all
records have been written) and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__, kernels, suites
from .bounds import (
    DomainError,
    LogReal,
    burgess_bound_corollary,
    burgess_bound_theorem,
    classic_bounds,
)
from .characters import build_group, enumerate_characters

RECORD_COLUMNS = ("statement", "instance", "lhs", "rhs", "margin", "holds", "extra")
SWEEP_COLUMNS = suites.SWEEP_COLUMNS + ("holds",)
CHAR_COLUMNS = ("q", "chi", "exponents", "order", "conductor", "primitive", "principal", "values")

MAX_SWEEP_Q = 5000

SUITES = {
    "verify-prop21": (
        "Coprime counting: |A_q - A phi(q)/q| < 2^(omega(q)-1) for every 1 <= A <= q, "
        "checked in exact integers. One record per q holding the worst A.",
        (1, 3000),
    ),
    "verify-lemma32": (
        "Fourth moment: sum over l mod q of |chi(l+1)+...+chi(l+B)|^4 <= "
        "(7B^2-6B)q + 4 8^omega(q) sqrt(q) B^4 d(q)^3 for each primitive chi and 1 <= B < sqrt(q).",
        (1, 200),
    ),
    "verify-lemma31": (
        "Complete sums: |sum_x chi((x-m1)(x-m2)) conj(chi((x-m3)(x-m4)))| <= "
        "8^omega(q) sqrt(q) max gcd(q, A_i) over seeded shift tuples with at least three "
        "distinct m_i. One record per primitive chi holding its tightest tuple.",
        (1, 300),
    ),
    "verify-vstats": (
        "Multiplicative energy: sum v(l) = A_q N exactly and sum v(l)^2 <= "
        "A_q^2 + 2AN log(2A_q) on seeded (q, M, N) with N <= q^(5/8), A = floor(N q^(-1/4)/10) >= 1.",
        (1, 500),
    ),
    "verify-appendix": (
        "Explicit bounds for phi(n), d(n), omega(n) at every n in the range (n >= 3). "
        "--q-range is read as the n range. One record per bound per block of 10^4 n.",
        (3, 10**6),
    ),
    "verify-constants": (
        "Constant chain at 40 digits: sqrt10/(sqrt10-2)*3.3325 <= 9.07, 9.07 e^(gamma/2) <= 12.11, "
        "3 e^(-gamma) <= 1.69, and the geometric series identity.",
        None,
    ),
    "verify-thresholds": (
        "Threshold facts in log domain: e^(e^9.594) = 8.03104e6373, q^(1/8)/10 > 5e795 there, "
        "and the size condition holding at log log q = 9.594 but failing at 2.",
        None,
    ),
}


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _jsonable(x):
    """Plain JSON types only; non-finite floats become strings."""
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if hasattr(x, "item"):  # numpy scalars
        return _jsonable(x.item())
    return x


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=1, allow_nan=False) + "\n"


def _compact(d) -> str:
    return json.dumps(_jsonable(d), sort_keys=True, separators=(",", ":"))


def record_row(r: suites.VerificationRecord) -> list[str]:
    return [
        r.statement,
        _compact(r.instance),
        _fmt(float(r.lhs)),
        _fmt(float(r.rhs)),
        _fmt(float(r.margin)),
        _fmt(bool(r.holds)),
        _compact(r.extra),
    ]


def record_dict(r: suites.VerificationRecord) -> dict:
    return {
        "statement": r.statement,
        "instance": r.instance,
        "lhs": float(r.lhs),
        "rhs": float(r.rhs),
        "margin": float(r.margin),
        "holds": bool(r.holds),
        "extra": r.extra,
    }


def sweep_row(r: suites.SweepRow) -> list[str]:
    return [
        str(r.q), str(r.chi), str(r.N), _fmt(r.measured), _fmt(r.trivial),
        _fmt(r.pv_shape), _fmt(r.theorem), _fmt(r.ratio), _fmt(r.holds),
    ]


def sweep_dict(r: suites.SweepRow) -> dict:
    return {
        "q": r.q, "chi": r.chi, "N": r.N, "measured": r.measured, "trivial": r.trivial,
        "pv_shape": r.pv_shape, "theorem": r.theorem, "ratio": r.ratio, "holds": r.holds,
    }


def char_rows(q: int) -> list[dict]:
    group = build_group(q)
    chars = enumerate_characters(group)
    conds = group.conductors(chars)
    rows = []
    for i, chi in enumerate(chars):
        t = chi.log_table
        m = chi.order
        vals = ["0" if k < 0 else str(Fraction(int(k), m)) for k in t]
        rows.append({
            "q": q,
            "chi": i,
            "exponents": " ".join(map(str, chi.exponents)),
            "order": m,
            "conductor": int(conds[i]),
            "primitive": bool(conds[i] == q),
            "principal": chi.is_principal,
            "values": " ".join(vals),
        })
    return rows


def parse_range(text: str) -> tuple[int, int]:
    try:
        lo, sep, hi = text.partition("..")
        if not sep:
            lo = hi = text
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or nonpositive range {text!r}")
    return lo, hi


def parse_number(text: str):
    """An int, a fraction like 997/996, or a float."""
    try:
        if "/" in text:
            return Fraction(text)
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _add_run_options(p: argparse.ArgumentParser, default_range, seeded: bool, samples=None):
    if default_range is not None:
        p.add_argument(
            "--q-range", type=parse_range, default=default_range,
            help=f"inclusive range a..b (default {default_range[0]}..{default_range[1]})",
        )
    if seeded:
        p.add_argument("--seed", type=int, default=2024, help="64-bit seed (default 2024)")
    if samples is not None:
        p.add_argument("--samples", type=int, default=samples, help=f"samples (default {samples})")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-", help="file path, or - for stdout")
    p.add_argument(
        "--parallelism", "--jobs", "-j", dest="jobs", type=int, default=1,
        help="worker processes sharded by q (0 = one per core)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burgess",
        description="Numerical verification of an explicit Burgess bound for composite moduli.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "CSV columns for verify-* commands: " + ", ".join(RECORD_COLUMNS) + ".\n"
            "instance and extra are compact JSON; floats carry 17 significant digits.\n"
            "JSON output is one object {meta, records, summary}.\n"
            "Exit status: 0 all hold, 1 some record failed, 2 usage error.\n"
            "The summary line goes to stderr; set NO_COLOR to disable colour."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    defaults = {
        "verify-prop21": dict(seeded=False),
        "verify-lemma32": dict(seeded=False),
        "verify-lemma31": dict(seeded=True, samples=200),
        "verify-vstats": dict(seeded=True, samples=10000),
        "verify-appendix": dict(seeded=False),
        "verify-constants": dict(seeded=False),
        "verify-thresholds": dict(seeded=False),
    }
    for name, (doc, rng) in SUITES.items():
        p = sub.add_parser(name, help=doc, description=doc)
        _add_run_options(p, rng, **defaults[name])
        if name == "verify-lemma31":
            p.add_argument("--detail", action="store_true", help="one record per tuple")

    doc = (
        "Measured max |S(M,N')| over N' <= N against the trivial bound N, the shape "
        "sqrt(q) log q and the main bound evaluated below its hypothesis, for each primitive "
        "chi mod q and N on a log grid up to floor(q^(5/8)). Columns: "
        + ", ".join(SWEEP_COLUMNS) + "."
    )
    p = sub.add_parser("sweep-bounds", help=doc, description=doc)
    _add_run_options(p, (1, 1000), seeded=True)
    p.add_argument("--max-q", type=int, default=MAX_SWEEP_Q, help=f"refuse q above this (default {MAX_SWEEP_Q})")

    doc = "All Dirichlet characters mod q. Columns: " + ", ".join(CHAR_COLUMNS) + "; values are turns k/m."
    p = sub.add_parser("char-table", help=doc, description=doc)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-")

    doc = "Evaluate the main bound, its corollary form, the trivial bound and sqrt(q) log q; prints JSON."
    p = sub.add_parser("bound", help=doc, description=doc)
    p.add_argument("--log-q", type=float, required=True, help="natural log of q")
    p.add_argument("--log-n", type=float, required=True, help="natural log of N")
    p.add_argument("--omega", type=int, required=True, help="number of distinct primes of q")
    p.add_argument("--d", type=parse_number, required=True, help="divisor count of q")
    p.add_argument("--phi-ratio", type=parse_number, required=True, help="q/phi(q), e.g. 997/996")
    p.add_argument("--relaxed", action="store_true", help="allow q below the hypothesis threshold")
    p.add_argument("--output", "-o", default="-")
    return parser


def _open(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _summary_line(command: str, summary: dict) -> str:
    ok = summary["failed"] == 0
    mm = summary["min_margin"]
    text = (
        f"{command}: {summary['records']} records, {summary['held']} held, "
        f"{summary['failed']} failed, min margin {'n/a' if mm is None else format(mm, '.6g')}"
    )
    if "min_ratio" in summary:
        text += f", min ratio {summary['min_ratio']:.6g}, max ratio {summary['max_ratio']:.6g}"
    if os.environ.get("NO_COLOR") or not sys.stderr.isatty():
        return ("PASS " if ok else "FAIL ") + text
    colour = "\033[32mPASS\033[0m " if ok else "\033[31mFAIL\033[0m "
    return colour + text


def _run_suite(args):
    c = args.command
    lo, hi = getattr(args, "q_range", (None, None))
    jobs = args.jobs
    if c == "verify-prop21":
        recs = suites.verify_prop21(lo, hi, jobs)
    elif c == "verify-lemma32":
        recs = suites.verify_lemma32(lo, hi, jobs)
    elif c == "verify-lemma31":
        recs = suites.verify_lemma31(lo, hi, args.seed, args.samples, jobs, args.detail)
    elif c == "verify-vstats":
        recs = suites.verify_vstats(lo, hi, args.seed, args.samples)
    elif c == "verify-appendix":
        recs = suites.verify_appendix(lo, hi)
    elif c == "verify-constants":
        recs = suites.verify_constants()
    elif c == "verify-thresholds":
        recs = suites.verify_thresholds()
    else:
        raise AssertionError(c)
    return recs, suites.summarize(recs), RECORD_COLUMNS, record_row, record_dict


def _run_sweep(args):
    lo, hi = args.q_range
    rows = suites.sweep_bounds(lo, hi, args.jobs)
    failed = sum(not r.holds for r in rows)
    ratios = [r.ratio for r in rows]
    summary = {
        "records": len(rows),
        "held": len(rows) - failed,
        "failed": failed,
        "min_margin": min((r.theorem - r.measured for r in rows), default=None),
        "min_ratio": min(ratios, default=0.0),
        "max_ratio": max(ratios, default=0.0),
    }
    return rows, summary, SWEEP_COLUMNS, sweep_row, sweep_dict


def _meta(args) -> dict:
    meta = {"command": args.command, "version": __version__, "backend": kernels.BACKEND}
    for key in ("q_range", "seed", "samples", "detail"):
        if hasattr(args, key):
            v = getattr(args, key)
            meta[key] = list(v) if isinstance(v, tuple) else v
    return meta


def _emit(args, records, summary, columns, to_row, to_dict) -> None:
    out, close = _open(args.output)
    try:
        if args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(columns)
            for r in records:
                w.writerow(to_row(r))
        else:
            doc = {"meta": _meta(args), "records": [to_dict(r) for r in records], "summary": summary}
            out.write(dump_json(doc))
        out.flush()
    finally:
        if close:
            out.close()


def _cmd_char_table(args) -> int:
    rows = char_rows(args.q)
    out, close = _open(args.output)
    try:
        if args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(CHAR_COLUMNS)
            for r in rows:
                w.writerow([_fmt(r[c]) for c in CHAR_COLUMNS])
        else:
            prims = sum(r["primitive"] for r in rows)
            out.write(dump_json({
                "meta": {"command": "char-table", "q": args.q, "version": __version__},
                "records": rows,
                "summary": {"characters": len(rows), "primitive": prims},
            }))
    finally:
        if close:
            out.close()
    return 0


def _cmd_bound(args) -> int:
    theorem = burgess_bound_theorem(
        args.log_q, args.log_n, args.omega, args.d, args.phi_ratio, relaxed=args.relaxed
    )
    corollary = burgess_bound_corollary(
        math.log(args.log_q), args.log_n, args.omega, args.d, relaxed=args.relaxed
    )
    trivial, pv = classic_bounds(args.log_q, args.log_n)

    def show(v: LogReal) -> dict:
        return {"log_value": v.log_value, "value": float(v), "scientific": v.scientific()}

    doc = {
        "theorem": theorem.as_dict(),
        "corollary": corollary.as_dict(),
        "trivial": show(trivial),
        "pv_shape": show(pv),
    }
    out, close = _open(args.output)
    try:
        out.write(dump_json(doc))
    finally:
        if close:
            out.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "char-table":
            if args.q < 1:
                parser.error("--q must be positive")
            return _cmd_char_table(args)
        if args.command == "bound":
            return _cmd_bound(args)
        if getattr(args, "jobs", 1) < 0:
            parser.error("--parallelism must be >= 0")
        if getattr(args, "samples", 1) < 1:
            parser.error("--samples must be positive")
        if args.command == "sweep-bounds":
            if args.q_range[1] > args.max_q:
                parser.error(f"q above {args.max_q} is outside desk scale (raise --max-q)")
            result = _run_sweep(args)
        else:
            result = _run_suite(args)
    except (DomainError, OverflowError) as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    summary = result[1]
    _emit(args, *result)
    print(_summary_line(args.command, summary), file=sys.stderr)
    return 0 if summary["failed"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
