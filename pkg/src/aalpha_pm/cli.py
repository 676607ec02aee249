"""Command-line interface: ``aalpha-pm <subcommand> ...``.

Exit status: 0 success, 1 usage or input error, 2 verification violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Sequence

from .graph import GraphFormatError, extremal_graph, parse_graph6, read_graph6_file, to_graph6
from .thresholds import (
    ADJACENCY_N6_THRESHOLD,
    HypothesisError,
    adjacency_cubic,
    largest_real_root,
    theorem_cubic,
    threshold,
)
from .verifier import (
    DEFAULT_ALPHAS,
    DEFAULT_ORDERS,
    ClaimReport,
    certify,
    emit_report,
    exhaustive_verify,
    format_float,
    random_claim1_specs,
    random_claim2_params,
    random_connected_graphs,
    sweep,
    sweep_table,
    verify_claim1,
    verify_claim2,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_alpha(text: str) -> Fraction:
    """``"0.3"`` or ``"11/16"`` as an exact fraction in [0, 1)."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}: use a decimal or p/q") from None
    if not 0 <= value < 1:
        raise argparse.ArgumentTypeError(f"alpha {text!r} outside [0, 1)")
    return value


def _parse_orders(text: str) -> list[int]:
    """``"10,12,14"`` or ``"10:40:2"`` (inclusive stop)."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 2
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid order list {text!r}") from None


def _parse_alphas(text: str) -> list[Fraction]:
    return [parse_alpha(tok) for tok in text.split(",") if tok.strip()]


def _fmt(x) -> str:
    v = format_float(x)
    return "nan" if v is None else repr(v)


def _build_parser() -> _Parser:
    parser = _Parser(prog="aalpha-pm", description="A_alpha spectral radius perfect-matching certifier")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("certify", help="certify perfect matchings of graph6 inputs")
    p.add_argument("--alpha", type=parse_alpha, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph6", metavar="STR")
    src.add_argument("--file", metavar="PATH")
    p.add_argument("--oracle", action="store_true", help="record an exact perfect-matching check")
    p.add_argument("--threshold-override", type=float, default=None)

    p = sub.add_parser("threshold", help="threshold cubic and its largest root")
    p.add_argument("--alpha", type=parse_alpha, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--force", action="store_true", help="compute even when n < f(alpha) or n is odd")

    p = sub.add_parser("extremal", help="print the extremal graph K1+(K_{n-3} u 2K1)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g6", action="store_true", help="print graph6 instead of an edge list")

    p = sub.add_parser("sweep", help="largest G5^s roots over s and their argmax")
    p.add_argument("--alpha", type=parse_alpha, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("jsonl", "csv"), default="csv")

    p = sub.add_parser("verify-claims", help="check the split-family orderings on a grid")
    p.add_argument("--alphas", type=_parse_alphas, default=list(DEFAULT_ALPHAS))
    p.add_argument("--ns", type=_parse_orders, default=list(DEFAULT_ORDERS))
    p.add_argument("--samples", type=int, default=100, help="random instances per ordering check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("jsonl", "csv"), default="csv")

    p = sub.add_parser("verify", help="soundness check against an exact matching oracle")
    p.add_argument("--alpha", type=parse_alpha, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--internal", type=int, metavar="N", help="all labeled graphs of order N (N <= 7)")
    src.add_argument("--corpus", metavar="PATH", help="graph6 file, one graph per line")
    src.add_argument("--random", type=int, metavar="COUNT", help="random connected graphs of order --n")
    p.add_argument("--n", type=int, help="order for --random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold-override", metavar="X",
                   help="float, 'n6' for (1+sqrt 33)/2, or 'theta' for the adjacency cubic root at this order")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    return parser


def _cmd_certify(args, out) -> int:
    if args.graph6 is not None:
        try:
            graphs = [parse_graph6(args.graph6)]
        except GraphFormatError as exc:
            raise UsageError(f"malformed graph6 {args.graph6!r}: {exc}") from None
    else:
        graphs = []
        try:
            for lineno, item in read_graph6_file(args.file):
                if isinstance(item, GraphFormatError):
                    raise UsageError(f"{args.file}:{lineno}: malformed graph6: {item}")
                graphs.append(item)
        except OSError as exc:
            raise UsageError(f"cannot read {args.file!r}: {exc.strerror}") from None
    status = EXIT_OK
    for g in graphs:
        cert = certify(g, args.alpha, oracle=args.oracle, threshold_override=args.threshold_override)
        print(json.dumps(cert.record()), file=out)
        if cert.verdict.value == "PM_GUARANTEED" and cert.oracle_pm is False:
            status = EXIT_VIOLATION
    return status


def _cmd_threshold(args, out) -> int:
    try:
        root = threshold(args.n, args.alpha, force=args.force)
    except HypothesisError as exc:
        raise UsageError(str(exc).replace("force=True", "--force")) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    p = theorem_cubic(args.n, args.alpha)
    print("cubic: " + " ".join(_fmt(c) for c in p.coeffs), file=out)
    print(f"threshold: {_fmt(root)}", file=out)
    return EXIT_OK


def _cmd_extremal(args, out) -> int:
    try:
        g = extremal_graph(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.g6:
        print(to_graph6(g), file=out)
    else:
        print(f"n={g.n} m={g.num_edges}", file=out)
        for u, v in g.edges():
            print(f"{u} {v}", file=out)
    return EXIT_OK


def _cmd_sweep(args, out) -> int:
    try:
        rows = sweep_table(args.n, args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print("s largest_root", file=out)
    for r in rows:
        print(f"{r.s} {_fmt(r.largest_root)}{' *' if r.is_argmax else ''}", file=out)
    best = next(r.s for r in rows if r.is_argmax)
    print(f"argmax s={best}", file=out)
    if args.out:
        report = sweep([args.n], [args.alpha], with_claim3=False)
        emit_report(report, args.format, args.out)
    return EXIT_OK


def _cmd_verify_claims(args, out) -> int:
    report = ClaimReport()
    if args.samples < 0 or not args.alphas:
        raise UsageError("need --samples >= 0 and at least one alpha")
    # random instances cycle through the alpha list
    for i, spec in enumerate(random_claim1_specs(args.samples, args.seed)):
        report.checks.extend(verify_claim1([spec], args.alphas[i % len(args.alphas)]))
    for i, (n, s, q) in enumerate(random_claim2_params(args.samples, args.seed)):
        report.checks.append(verify_claim2(n, s, q, args.alphas[i % len(args.alphas)]))
    grid = sweep(args.ns, args.alphas)
    report.checks.extend(grid.claim_checks)

    by_claim: dict[str, list] = {}
    for c in report.checks:
        by_claim.setdefault(c.claim, []).append(c)
    for name, checks in sorted(by_claim.items()):
        inside = [c for c in checks if c.in_hypothesis and c.passed is not None]
        ok = sum(1 for c in inside if c.passed)
        print(f"{name}: {ok}/{len(inside)} passed", file=out)
    off = grid.off_dichotomy
    print(f"argmax outside {{1, n/2-1}}: {len(off)}", file=out)
    for n, a, s in off:
        print(f"  n={n} alpha={_fmt(a)} argmax s={s}", file=out)
    if args.out:
        emit_report(report, args.format, args.out)
    return EXIT_VIOLATION if report.failures else EXIT_OK


def _resolve_override(text: str | None, order: int | None) -> float | None:
    if text is None:
        return None
    if text == "n6":
        return ADJACENCY_N6_THRESHOLD
    if text == "theta":
        if order is None:
            raise UsageError("--threshold-override theta needs a fixed order (--internal N or --n N)")
        p = adjacency_cubic(order)
        return largest_real_root(p, -float(order), float(order))
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"invalid --threshold-override {text!r}") from None


def _cmd_verify(args, out) -> int:
    if args.internal is not None:
        source, order = args.internal, args.internal
    elif args.corpus is not None:
        source, order = args.corpus, args.n
    else:
        if args.n is None:
            raise UsageError("--random needs --n")
        source, order = random_connected_graphs(args.n, args.random, args.seed), args.n
    override = _resolve_override(args.threshold_override, order)
    try:
        report = exhaustive_verify(source, args.alpha, threshold_override=override)
    except OSError as exc:
        raise UsageError(f"cannot read {args.corpus!r}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    emit_report(report, args.format, args.out)
    for key, value in report.summary().items():
        print(f"{key}: {value}", file=out)
    for lineno, msg in report.parse_errors[:20]:
        print(f"parse error line {lineno}: {msg}", file=out)
    return EXIT_VIOLATION if report.counts["violations"] else EXIT_OK


_COMMANDS = {
    "certify": _cmd_certify,
    "threshold": _cmd_threshold,
    "extremal": _cmd_extremal,
    "sweep": _cmd_sweep,
    "verify-claims": _cmd_verify_claims,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"aalpha-pm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"aalpha-pm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
