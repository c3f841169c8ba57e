"""Command-line interface.

Exit status: 0 success, 1 verification failure, 2 usage or input error,
3 budget exhausted before an exact answer.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import __version__
from .matrix import BinaryMatrix, MatrixFormatError, parse_matrix, serialize_matrix

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def _read_matrix(path: str) -> BinaryMatrix:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_matrix(text)
    except MatrixFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _append(args, record) -> None:
    if args.no_cache:
        return
    from .cache import cache_append

    cache_append(args.cache, record)


def _check_cached(args, kind: str, params: dict, value: int | None) -> bool:
    """False when an earlier exact record disagrees with ``value``."""
    if args.no_cache or value is None:
        return True
    from .cache import cache_lookup

    old = cache_lookup(args.cache, kind, params)
    if old is not None and old.status == "exact" and old.value != value:
        print(f"error: cached exact value {old.value} differs from recomputed {value}", file=sys.stderr)
        return False
    return True


# ---------------------------------------------------------------- commands


def cmd_solve2d(args) -> int:
    from .cache import CacheRecord, store_certificate
    from .solver import enumerate_optima, solve_alpha

    if not 1 <= args.k <= args.n:
        raise UsageError("need 1 <= k <= n")
    res = solve_alpha(args.k, args.n, budget=args.budget, threads=args.threads)
    params = {"k": args.k, "n": args.n}
    if not res.exact:
        print(f"alpha({args.k},{args.n}): budget exhausted; bounds [{res.lower}, {res.upper}]")
        _append(args, CacheRecord("alpha2d", params, None, runtime_ms=res.stats.runtime_ms,
                                  status="bounds-only", lower=res.lower, upper=res.upper))
        return EXIT_BUDGET
    print(f"alpha({args.k},{args.n}) = {res.value}")
    print(f"refuted t <= {res.stats.refuted_up_to}; nodes {res.stats.nodes_expanded}; "
          f"{res.stats.runtime_ms:.1f} ms")
    text = serialize_matrix(res.certificate)
    print(text, end="")
    ok = _check_cached(args, "alpha2d", params, res.value)
    cert = None if args.no_cache else store_certificate(args.cache, "alpha2d", params, text, ".txt")
    _append(args, CacheRecord("alpha2d", params, res.value, certificate_path=cert,
                              runtime_ms=res.stats.runtime_ms, lower=res.value, upper=res.value,
                              extra={"nodes": res.stats.nodes_expanded}))
    status = EXIT_OK if ok else EXIT_FAIL
    if args.enumerate:
        en = enumerate_optima(args.k, args.n, res.value, budget=args.budget, threads=args.threads)
        flag = "complete" if en.complete else "incomplete"
        print(f"classes: {len(en.forms)} ({flag}; {en.raw_count} orderly matrices)")
        for i, f in enumerate(en.forms):
            print(f"# class {i} sha256 {f.digest}")
            print(f.text, end="")
        _append(args, CacheRecord("enumerate", {**params, "value": res.value}, res.value,
                                  class_count=len(en.forms), runtime_ms=en.stats.runtime_ms,
                                  status="exact" if en.complete else "bounds-only"))
        if not en.complete:
            return EXIT_BUDGET
    return status


def cmd_solve3d(args) -> int:
    from .cache import CacheRecord, store_certificate
    from .lattice3d import enumerate_min_marks_3d, solve_min_marks_3d
    from .verify import SizeError

    try:
        res = solve_min_marks_3d(args.n, budget=args.budget)
    except SizeError as exc:
        raise UsageError(str(exc)) from exc
    params = {"N": args.n}
    if not res.exact:
        print(f"N={args.n}: budget exhausted; bounds [{res.lower}, {res.upper}]")
        _append(args, CacheRecord("marks3d", params, None, runtime_ms=res.runtime_ms,
                                  status="bounds-only", lower=res.lower, upper=res.upper))
        return EXIT_BUDGET
    print(f"N={args.n}: min marks {res.value}, order {res.order}")
    cert_json = json.dumps(res.certificate.to_json())
    print(cert_json)
    ok = _check_cached(args, "marks3d", params, res.value)
    cert = None if args.no_cache else store_certificate(args.cache, "marks3d", params, cert_json + "\n", ".json")
    _append(args, CacheRecord("marks3d", params, res.value, certificate_path=cert,
                              runtime_ms=res.runtime_ms, lower=res.value, upper=res.value))
    if args.enumerate:
        forms, complete = enumerate_min_marks_3d(args.n, res.value, budget=args.budget)
        print(f"classes: {len(forms)} ({'complete' if complete else 'incomplete'})")
        _append(args, CacheRecord("enumerate", {**params, "value": res.value}, res.value,
                                  class_count=len(forms), status="exact" if complete else "bounds-only"))
        if not complete:
            return EXIT_BUDGET
    return EXIT_OK if ok else EXIT_FAIL


def cmd_construct(args) -> int:
    from .cache import CacheRecord, store_certificate
    from .constructions import ConstructionError, ConstructionId, Family, build
    from .verify import has_zero_minor

    family = Family(args.family)
    if family is Family.DIAGONAL and args.n is None:
        raise UsageError("the diagonal family needs --n")
    if family is Family.GENERAL and args.a is None:
        raise UsageError("the general family needs --a")
    cid = ConstructionId(family, args.k, n=args.n if family is Family.DIAGONAL else None,
                         a=args.a if family is Family.GENERAL else None)
    try:
        bm = build(cid)
    except ConstructionError as exc:
        raise UsageError(str(exc)) from exc
    verified = bm.matrix.ones_count == bm.claimed_ones and not has_zero_minor(bm.matrix, args.k)
    sidecar = {"schema": 1, "family": family.value, "k": args.k, "a": cid.a,
               "ones": bm.claimed_ones, "verified": verified}
    text = serialize_matrix(bm.matrix)
    if args.out:
        out = Path(args.out)
        out.write_text(text, encoding="utf-8")
        out.with_suffix(".json").write_text(json.dumps(sidecar, sort_keys=True) + "\n", encoding="utf-8")
        print(f"wrote {out} and {out.with_suffix('.json')}")
    else:
        print(text, end="")
        print(json.dumps(sidecar, sort_keys=True))
    params = {"family": family.value, "k": args.k}
    if cid.n is not None:
        params["n"] = cid.n
    if cid.a is not None:
        params["a"] = cid.a
    cert = None if args.no_cache else store_certificate(args.cache, "construct-verify", params, text, ".txt")
    _append(args, CacheRecord("construct-verify", params, bm.claimed_ones, certificate_path=cert,
                              status="exact", extra={"verified": verified}))
    return EXIT_OK if verified else EXIT_FAIL


def cmd_verify(args) -> int:
    from .verify import find_zero_minor

    a = _read_matrix(args.file)
    k = args.k
    if not 1 <= k <= min(a.n_rows, a.n_cols):
        raise UsageError(f"k must lie in [1, {min(a.n_rows, a.n_cols)}]")
    w = find_zero_minor(a, k)
    if w is None:
        print(f"no zero {k}×{k} minor; ones={a.ones_count}")
        return EXIT_OK
    print(f"zero {k}×{k} minor at rows {list(w.rows)} cols {list(w.cols)}; ones={a.ones_count}")
    return EXIT_FAIL


def cmd_canon(args) -> int:
    from .canonical import canonical_form
    from .verify import SizeError

    a = _read_matrix(args.file)
    if args.transpose and a.n_rows != a.n_cols:
        raise UsageError("--transpose needs a square matrix")
    try:
        f = canonical_form(a, with_transpose=args.transpose)
    except SizeError as exc:
        raise UsageError(str(exc)) from exc
    print(f.text, end="")
    print(f"sha256 {f.digest}")
    return EXIT_OK


def _fuzz(seed: int, samples: int) -> int:
    """Verifier against brute force on random matrices; returns disagreements."""
    from .verify import brute_force_zero_minor, find_zero_minor

    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        n = rng.randint(4, 7)
        k = rng.randint(2, n)
        dens = rng.random()
        a = BinaryMatrix(n, n, tuple(sum(1 << j for j in range(n) if rng.random() < dens) for _ in range(n)))
        if (find_zero_minor(a, k) is None) != (brute_force_zero_minor(a, k) is None):
            bad += 1
    return bad


def cmd_table(args) -> int:
    from .solver import verify_table

    if args.fuzz:
        bad = _fuzz(args.seed, args.samples)
        print(f"fuzz seed={args.seed} samples={args.samples} disagreements={bad}")
        if bad:
            return EXIT_FAIL
    cells = verify_table(max_n=args.max_n, min_n=args.min_n, budget=args.budget, threads=args.threads)
    print(f"{'n':>3} {'k':>3} {'table':>6} {'solved':>7} {'ms':>9}  status")
    worst = EXIT_OK
    for c in cells:
        got = c.result.value if c.result.exact else f"[{c.result.lower},{c.result.upper}]"
        print(f"{c.n:>3} {c.k:>3} {c.expected:>6} {str(got):>7} {c.result.stats.runtime_ms:>9.1f}  {c.status}")
        if c.status == "MISMATCH":
            worst = EXIT_FAIL
        elif c.status == "BUDGET" and worst == EXIT_OK:
            worst = EXIT_BUDGET
    n_match = sum(c.status == "MATCH" for c in cells)
    print(f"{n_match}/{len(cells)} cells match")
    return worst


def cmd_bounds(args) -> int:
    from .bounds import crossover_scan, upper_bound_report

    if args.k is None and args.scan is None:
        raise UsageError("give --k K or --scan K_MAX")
    if args.k is not None:
        if args.k < 1:
            raise UsageError("k must be positive")
        r = upper_bound_report(args.k)
        print(f"k={r.k} n={2 * r.k + 1}")
        for fam, v in r.values.items():
            mark = "" if r.applicable[fam] else "  (below min_k)"
            print(f"  {fam:<13} {v:>6}{mark}")
        print(f"  best upper    {r.best_upper:>6}  ({', '.join(r.best_families)})")
    if args.scan is not None:
        if args.scan < 1:
            raise UsageError("scan limit must be positive")
        print(f"{'k':>4} {'4k+5':>6} {'7k/2':>6} {'10k/3':>6} {'best':>6}  family")
        for k in range(1, args.scan + 1):
            r = upper_bound_report(k)
            v = r.values
            ten = str(v["ten-thirds"]) if r.applicable["ten-thirds"] else "-"
            print(f"{k:>4} {v['band-4k5']:>6} {v['seven-halves']:>6} {ten:>6} {r.best_upper:>6}  {r.best_family}")
        changes = crossover_scan(args.scan)
        for k, old, new in changes:
            print(f"change at k={k}: {old} -> {new}")
        if not changes:
            print("no family change")
    return EXIT_OK


def cmd_cache(args) -> int:
    from .cache import read_records, verify_record

    recs = read_records(args.cache)
    failed = 0
    for r in recs:
        ok = verify_record(args.cache, r)
        failed += not ok
        params = ",".join(f"{k}={v}" for k, v in sorted(r.params.items()))
        val = r.value if r.value is not None else f"[{r.lower},{r.upper}]"
        extra = f" classes={r.class_count}" if r.class_count is not None else ""
        print(f"{r.kind:<16} {params:<32} value={val}{extra} {r.status} cert={'ok' if ok else 'FAILED'}")
    print(f"{len(recs)} records, {failed} failed re-verification")
    return EXIT_FAIL if failed else EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=float, default=300.0, help="time limit in seconds (default 300)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes (default: machine parallelism)")
    common.add_argument("--cache", default="./results.jsonl", help="JSONL result cache (default ./results.jsonl)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--seed", type=int, default=0, help="seed for table --fuzz sampling")

    p = argparse.ArgumentParser(prog="boxfree", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve2d", parents=[common], help="exact alpha(k, n) with a certificate")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--enumerate", action="store_true", help="also list all optimal classes")
    s.set_defaults(func=cmd_solve2d)

    s = sub.add_parser("solve3d", parents=[common], help="fewest marks hitting every box of the N^3 grid")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--enumerate", action="store_true")
    s.set_defaults(func=cmd_solve3d)

    s = sub.add_parser("construct", parents=[common], help="build a family member and verify it")
    s.add_argument("--family", required=True,
                   choices=["diagonal", "even-middle", "band-4k5", "seven-halves", "ten-thirds", "general"])
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, help="matrix size (diagonal family)")
    s.add_argument("--a", type=int, help="group width (general family)")
    s.add_argument("--out", help="write matrix text here and the JSON sidecar next to it")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="look for an all-zero k x k minor")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--file", required=True, help="matrix-text file, or - for stdin")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("canon", parents=[common], help="canonical form under row/column permutations")
    s.add_argument("--file", required=True)
    s.add_argument("--transpose", action="store_true", help="also allow transposition")
    s.set_defaults(func=cmd_canon)

    s = sub.add_parser("table", parents=[common], help="solve the filled table cells and compare")
    s.add_argument("--max-n", type=int, default=7)
    s.add_argument("--min-n", type=int, default=1)
    s.add_argument("--fuzz", action="store_true", help="first cross-check the verifier on random matrices")
    s.add_argument("--samples", type=int, default=500)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("bounds", parents=[common], help="closed-form upper bounds for alpha(k, 2k+1)")
    s.add_argument("--k", type=int)
    s.add_argument("--scan", type=int, metavar="K_MAX")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("cache", parents=[common], help="list cache records and re-verify certificates")
    s.set_defaults(func=cmd_cache)
    return p


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
