"""Command-line front end: check, batch, witt.

Exit codes: 0 = analyzed, 2 = input error; `witt identity` exits 1 when the
verification fails (which would indicate an arithmetic bug, not bad input).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .config import ConfigError, resolve_config
from .criteria import ZeroInputError
from .localcoh import SocleSurvivesError
from .report import (
    CatalogEntry,
    CatalogError,
    Report,
    infer_variables,
    load_catalog,
    parse_doublecover,
    parse_hypersurface,
    run_entry,
    summarize,
)
from .ring import ExponentOverflowError, PolyParseError, PolyRing
from .witt import WittVector, delta_carry, eval_at_teichmuller


class InputError(ValueError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfsplit",
        description="Decide F-splitness and 2-quasi-F-splitness of hypersurface singularities.",
    )
    parser.add_argument("--version", action="version", version=f"qfsplit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="analyze a single polynomial")
    check.add_argument("--p", type=int, required=True, help="prime characteristic")
    check.add_argument(
        "--kind", choices=("hypersurface", "doublecover"), default="hypersurface"
    )
    check.add_argument("--max-n", type=int, default=2, choices=(1, 2))
    check.add_argument("--vars", help="comma-separated variables (hypersurface only)")
    check.add_argument("--json", action="store_true", help="emit the JSON report")
    check.add_argument("--explain", action="store_true", help="include intermediates")
    check.add_argument("--timings", action="store_true", help="include timing_ms")
    check.add_argument("--slack", type=int, help="membership candidate-bound slack")
    check.add_argument("--config", help="config file path")
    check.add_argument("poly", help="polynomial text (f, or g for a double cover)")

    batch = sub.add_parser("batch", help="analyze a JSON Lines catalog")
    batch.add_argument("catalog", help="catalog path (JSON Lines of entries)")
    batch.add_argument("-o", "--output", help="report path (default: stdout)")
    batch.add_argument("--jobs", type=int, default=1, help="parallel analyses")
    batch.add_argument("--explain", action="store_true")
    batch.add_argument("--timings", action="store_true")
    batch.add_argument("--slack", type=int)
    batch.add_argument("--config", help="config file path")

    witt = sub.add_parser("witt", help="Witt vector calculator")
    witt.add_argument(
        "subcommand", choices=("add", "mul", "teich", "delta", "identity")
    )
    witt.add_argument("--p", type=int, required=True)
    witt.add_argument("--n", type=int, help="Witt length (default 2)")
    witt.add_argument("--config", help="config file path")
    witt.add_argument("operands", nargs="+", help="polynomials, [f] lifts, or (a0; a1) vectors")
    return parser


def _ring_for(p: int, texts: list[str], declared: str | None = None) -> PolyRing:
    if declared:
        names = tuple(v.strip() for v in declared.split(",") if v.strip())
    else:
        seen = []
        for text in texts:
            for name in infer_variables(text):
                if name not in seen:
                    seen.append(name)
        names = tuple(sorted(seen))
    if not names:
        names = ("x",)  # constant operands still need a ring context
    return PolyRing(p, names)


def _parse_witt_operand(text: str, ring: PolyRing, n: int, cap: int) -> WittVector:
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        return WittVector.teichmuller(ring.parse(text[1:-1]), n)
    if text.startswith("(") and text.endswith(")"):
        parts = text[1:-1].split(";")
        comps = [ring.parse(part) for part in parts]
        return WittVector(ring, comps, length_cap=cap)
    raise InputError(f"Witt operand must be [poly] or (a0; a1; ...): {text!r}")


def _strip_witt_brackets(text: str) -> str:
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        return text[1:-1]
    if text.startswith("(") and text.endswith(")"):
        return text[1:-1]
    return text


def _cmd_check(args) -> int:
    config = resolve_config(args.config)
    slack = args.slack if args.slack is not None else config.candidate_slack
    entry = CatalogEntry(
        name="cli", p=args.p, kind=args.kind, poly=args.poly, tags=()
    )
    # surface input errors before reporting, matching the exit-code contract
    if args.kind == "hypersurface":
        names = None
        if args.vars:
            names = tuple(v.strip() for v in args.vars.split(",") if v.strip())
        parse_hypersurface(args.p, args.poly, names)
    else:
        parse_doublecover(args.p, args.poly)
    report = run_entry(entry, explain=args.explain, max_n=args.max_n, slack=slack)
    if report.error is not None:
        print(f"error: {report.error}", file=sys.stderr)
        return 1
    if args.json:
        print(report.to_json(include_timing=args.timings))
    else:
        print(report.summary())
        if args.explain and report.intermediates:
            print(json.dumps(report.intermediates, sort_keys=True, indent=2))
    return 0


def _cmd_batch(args) -> int:
    config = resolve_config(args.config)
    slack = args.slack if args.slack is not None else config.candidate_slack
    entries = load_catalog(args.catalog)
    jobs = max(1, args.jobs)

    def work(entry: CatalogEntry) -> Report:
        return run_entry(entry, explain=args.explain, slack=slack)

    if jobs == 1 or len(entries) <= 1:
        reports = [work(entry) for entry in entries]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(work, entries))  # input order preserved

    lines = [r.to_json(include_timing=args.timings) for r in reports]
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            for line in lines:
                handle.write(line + "\n")
    else:
        for line in lines:
            print(line)
    print(summarize(reports), file=sys.stderr if not args.output else sys.stdout)
    return 0


def _cmd_witt(args) -> int:
    config = resolve_config(args.config)
    cap = config.witt_length_cap
    sub = args.subcommand
    operands = args.operands

    if sub in ("add", "mul"):
        if len(operands) != 2:
            raise InputError(f"witt {sub} takes exactly two operands")
        texts = [_strip_witt_brackets(t) for t in operands]
        ring = _ring_for(args.p, texts)
        n = args.n
        for text in operands:
            text = text.strip()
            if text.startswith("("):
                count = len(text[1:-1].split(";"))
                if n is None:
                    n = count
                elif n != count:
                    raise InputError(f"operand {text!r} has length {count}, expected {n}")
        n = n or 2
        u = _parse_witt_operand(operands[0], ring, n, cap)
        v = _parse_witt_operand(operands[1], ring, n, cap)
        result = u + v if sub == "add" else u * v
        print(result.render())
        return 0

    if len(operands) != 1:
        raise InputError(f"witt {sub} takes exactly one operand")
    text = _strip_witt_brackets(operands[0])
    ring = _ring_for(args.p, [text])
    f = ring.parse(text)

    if sub == "teich":
        print(WittVector.teichmuller(f, args.n or 2).render())
        return 0
    if sub == "delta":
        print(delta_carry(f).render())
        return 0
    # identity: verify [f] = f([x]) + V(delta(f)) in W_2 and show both sides
    lhs = WittVector.teichmuller(f, 2)
    carry = delta_carry(f)
    rhs = eval_at_teichmuller(f, 2) + WittVector(ring, [ring.zero(), carry])
    status = "PASS" if lhs == rhs else "FAIL"
    print(f"[f]            = {lhs.render()}")
    print(f"f([x]) + V(d)  = {rhs.render()}")
    print(status)
    return 0 if status == "PASS" else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "batch":
            return _cmd_batch(args)
        return _cmd_witt(args)
    except (
        InputError,
        CatalogError,
        ConfigError,
        PolyParseError,
        ExponentOverflowError,
        ZeroInputError,
        SocleSurvivesError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
