"""Command-line interface: graph generation, analysis, verification.

Exit codes: 0 success, 1 invariant failure (verify), 2 input error,
3 internal consistency error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .analysis import analyze_graph, build_report, verification_checks
from .errors import ConsistencyError
from .graphs import Graph, encode_graph6, gen_dual_polar, gen_hamming, parse_graph6

EXIT_OK = 0
EXIT_INVARIANT_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def _round_floats(obj, digits: int = 12):
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v, digits) for v in obj]
    return obj


def report_to_json(report: dict) -> str:
    return json.dumps(_round_floats(report), sort_keys=True, indent=2)


def _resolve_source(tokens: list[str]) -> tuple[Graph, str, tuple | None]:
    """Turn CLI source tokens into (graph, source string, hamming params)."""
    if not tokens:
        raise ValueError("missing graph source")
    head = tokens[0]
    if head == "hamming":
        if len(tokens) != 3:
            raise ValueError("usage: hamming D N")
        D, N = int(tokens[1]), int(tokens[2])
        return gen_hamming(D, N), f"hamming {D} {N}", (D, N)
    if head == "dualpolar":
        if len(tokens) != 3:
            raise ValueError("usage: dualpolar D q")
        D, q = int(tokens[1]), int(tokens[2])
        return gen_dual_polar(D, q), f"dualpolar {D} {q}", None
    if head.startswith("file:"):
        if len(tokens) != 1:
            raise ValueError("file source takes no extra parameters")
        path = head[len("file:") :]
        text = Path(path).read_text(encoding="ascii")
        line = text.strip().splitlines()[0]
        return parse_graph6(line), f"file:{path}", None
    raise ValueError(
        f"unknown source {head!r}; expected hamming, dualpolar, or file:PATH"
    )


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _emit_error(kind: str, exc: Exception) -> None:
    payload = {"error": {"kind": kind, "message": str(exc)}}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def cmd_gen(args) -> int:
    if args.family == "hamming":
        graph = gen_hamming(args.p1, args.p2)
    else:
        graph = gen_dual_polar(args.p1, args.p2)
    _write_output(encode_graph6(graph), args.output)
    return EXIT_OK


def _bases_for(args, graph: Graph) -> list[int]:
    if getattr(args, "all_bases", False):
        return list(range(graph.n))
    return [args.base]


def cmd_analyze(args) -> int:
    graph, source, _ = _resolve_source(args.source)
    reports = []
    for base in _bases_for(args, graph):
        start = time.perf_counter()
        result = analyze_graph(
            graph,
            base=base,
            seed=args.seed,
            unital_q=not args.no_unital_q,
        )
        reports.append(
            build_report(result, source, time.perf_counter() - start)
        )
    text = (
        report_to_json(reports[0])
        if len(reports) == 1
        else report_to_json({"reports": reports})
    )
    _write_output(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    graph, source, hamming_params = _resolve_source(args.source)
    failures = 0
    for base in _bases_for(args, graph):
        result = analyze_graph(graph, base=base, seed=args.seed)
        checks = verification_checks(result, hamming_params=hamming_params)
        for name, passed, detail in checks:
            status = "pass" if passed else "fail"
            suffix = f" [{detail}]" if detail and not passed else ""
            print(f"{source} base {base} | {name}: {status}{suffix}")
            if not passed:
                failures += 1
    return EXIT_OK if failures == 0 else EXIT_INVARIANT_FAILURE


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subconst",
        description=(
            "Construct the subconstituent algebra T and quantum adjacency "
            "algebra Q of a rooted graph, decompose the standard module, "
            "and decide Q = T."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a graph and print graph6")
    gen.add_argument("family", choices=["hamming", "dualpolar"])
    gen.add_argument("p1", type=int, help="D")
    gen.add_argument("p2", type=int, help="N (hamming) or q (dualpolar)")
    gen.add_argument("-o", "--output", default=None)
    gen.set_defaults(func=cmd_gen)

    def add_common(p):
        p.add_argument(
            "source",
            nargs="+",
            help="'hamming D N', 'dualpolar D q', or 'file:PATH'",
        )
        p.add_argument("--base", type=int, default=0)
        p.add_argument("--seed", type=int, default=1)
        p.add_argument(
            "--all-bases",
            action="store_true",
            help="run once per base vertex",
        )

    analyze = sub.add_parser("analyze", help="full analysis to JSON")
    add_common(analyze)
    analyze.add_argument("-o", "--output", default=None)
    analyze.add_argument(
        "--no-unital-q",
        action="store_true",
        help="use the closure of {L, F, R} without adjoining the identity",
    )
    analyze.set_defaults(func=cmd_analyze)

    verify = sub.add_parser("verify", help="run the invariant suite")
    add_common(verify)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        _emit_error("input", exc)
        return EXIT_INPUT_ERROR
    except ConsistencyError as exc:
        _emit_error("internal", exc)
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
