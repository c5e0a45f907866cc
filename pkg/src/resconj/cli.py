"""Command line entry point ``resconj``."""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

from .cache import Cache
from .certify import verify_certificate_file
from .runner import (
    ENGINES,
    EXIT_CHECK_FAILED,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_OPEN,
    cmd_dump,
    cmd_kappa,
    cmd_table,
    cmd_verify_result12,
    default_jobs,
    exit_code,
    format_dump,
    format_table,
    result12_ok,
)
from .selftest import run_selftest


def _m_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo < 2 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad m range {text!r}")
    return list(range(lo, hi + 1))


def _primes(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="resconj", description="Radical membership of H_ij(m) in <D(m,0), ..., D(m,i)>.")
    ap.add_argument("--cache-dir", help="cache directory (default $RESCONJ_CACHE_DIR or ~/.cache/resconj)")
    ap.add_argument("--no-cache", action="store_true", help="ignore and do not write the cache")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dump", help="print the matrices and the D/H families")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--json", action="store_true")

    def search_opts(p):
        p.add_argument("--kappa-max", type=int, default=8)
        p.add_argument("--engine", choices=ENGINES, default="groebner")
        p.add_argument("--primes", type=_primes, help="comma separated primes for the modular stages")
        p.add_argument("--heuristic", action="store_true", help="modular evidence only, no certificates")
        p.add_argument("--budget", type=float, help="seconds per cell")
        p.add_argument("--jobs", type=int, default=default_jobs())
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("kappa", help="minimal kappa for H_ij(m)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--certificate", help="certificate output directory")
    search_opts(p)

    p = sub.add_parser("table", help="minimal kappa table over a range of m")
    p.add_argument("--m", type=_m_range, required=True, help="A..B")
    p.add_argument("--certificate", help="certificate output directory")
    search_opts(p)

    p = sub.add_parser("verify-result12", help="check the published m=4 identity and its term-count claims")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify-certificate", help="re-verify a certificate file by plain arithmetic")
    p.add_argument("path")

    sub.add_parser("selftest", help="run the invariant suites")
    return ap


def _search_kw(args) -> dict:
    return dict(
        kappa_max=args.kappa_max,
        engine=args.engine,
        primes=args.primes,
        heuristic=args.heuristic,
        budget_seconds=args.budget,
        cert_dir=args.certificate,
    )


def _print_reports(reports, as_json: bool) -> None:
    if as_json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
        return
    for r in reports:
        k = r.kappa if r.kappa is not None else "-"
        extra = f" lower bound {r.lower_bound}" if r.lower_bound else ""
        cert = f" certificate {r.certificate}" if r.certificate else ""
        print(f"m={r.m} i={r.i} j={r.j}: {r.verdict} kappa={k}{extra} refuted={r.refuted} engines={','.join(r.engines)}{cert}")
        if r.note:
            print(f"    {r.note}")


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cache = Cache(args.cache_dir, enabled=not args.no_cache)
    cmd = args.command
    if cmd == "dump":
        d = cmd_dump(args.m)
        print(json.dumps(d, indent=2) if args.json else format_dump(d))
        return EXIT_OK
    if cmd == "kappa":
        reports = cmd_kappa(args.m, args.i, args.j, jobs=args.jobs, cache=cache, **_search_kw(args))
        _print_reports(reports, args.json)
        return exit_code(reports)
    if cmd == "table":
        rows, reports = cmd_table(args.m, jobs=args.jobs, cache=cache, **_search_kw(args))
        if args.json:
            print(json.dumps({"schema": 1, "rows": [r.__dict__ for r in rows], "cells": [r.to_json() for r in reports]}, indent=2, default=str))
        else:
            print(format_table(rows))
        code = exit_code(reports)
        if code == EXIT_OK and any(r.status == "open" for r in rows):
            code = EXIT_OPEN
        return code
    if cmd == "verify-result12":
        clauses = cmd_verify_result12()
        if args.json:
            print(json.dumps([c.__dict__ for c in clauses], indent=2))
        else:
            for c in clauses:
                tag = ("PASS" if c.ok else "FAIL") + ("" if c.gating else " (informational)")
                print(f"{tag}  {c.name}: {c.detail}")
        return EXIT_OK if result12_ok(clauses) else EXIT_CHECK_FAILED
    if cmd == "verify-certificate":
        ok, msg = verify_certificate_file(Path(args.path))
        print(("OK  " if ok else "FAIL  ") + msg)
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    if cmd == "selftest":
        results = run_selftest(echo=print)
        return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK_FAILED
    raise AssertionError(cmd)


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
