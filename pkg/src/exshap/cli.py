"""Command line front end.

Subcommands:

    eval      compute extended values for a rule file
    convert   rewrite a rule file as hybrid or embedded rules
    graph     emit the incompatibility graphs of a rule file
    hardness  run a counting pipeline on a plain graph and cross-check it
    selftest  exercise the library against its frozen reference results

Exit codes: 0 success, 1 usage, 2 parse or conversion failure, 3 size cap
exceeded, 4 cross-check mismatch. The environment variable EXSHAP_CAP
supplies a default for --cap where that flag is accepted.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .combinatorics import CapExceededError
from .core import ValueKind, esv_bruteforce
from .graphs import (
    LabeledGraph,
    NonBipartiteError,
    build_graph,
    make_graph,
    parse_graph,
    render_graph,
    to_dot,
)
from .hardness import REDUCTIONS, CrossCheckError, ReductionReport
from .rules import (
    EmbeddedRule,
    HybridRule,
    McRule,
    ParseError,
    RuleFile,
    game_of_rules,
    parse_rule_file,
    render_rule_file,
)
from .transforms import StarViolationError, to_embedded, to_hybrid
from .values import ef_poly, esv_colorings, mq_poly

__all__ = ["EvalRequest", "MismatchError", "evaluate", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4

_KINDS = {kind.value: kind for kind in ValueKind}


class UsageError(Exception):
    """Bad request that argparse could not catch on its own."""


class MismatchError(RuntimeError):
    """Two evaluation routes disagreed."""


@dataclass(frozen=True)
class EvalRequest:
    rules: RuleFile
    kinds: tuple[ValueKind, ...]
    method: str
    cap: int | None = None


def _poly_value(request: EvalRequest, kind: ValueKind) -> list[Fraction] | None:
    """Closed-form route, or None when the rule set does not admit one."""
    rf = request.rules
    if kind is ValueKind.MQ:
        hybrids = [h for rule in rf.rules for h in to_hybrid(rule, rf.n)]
        return [
            sum((mq_poly(h, i) for h in hybrids), Fraction(0))
            for i in range(1, rf.n + 1)
        ]
    if kind is ValueKind.EF and all(
        isinstance(rule, (McRule, EmbeddedRule)) for rule in rf.rules
    ):
        return [
            sum((ef_poly(rule, i, rf.n) for rule in rf.rules), Fraction(0))
            for i in range(1, rf.n + 1)
        ]
    return None


def _route_values(
    request: EvalRequest, kind: ValueKind, method: str
) -> list[Fraction]:
    rf = request.rules
    if method == "brute":
        game = game_of_rules(rf.rules, rf.n, cap=request.cap)
        return [
            esv_bruteforce(game, kind, i, cap=request.cap)
            for i in range(1, rf.n + 1)
        ]
    if method == "colorings":
        hybrids = [h for rule in rf.rules for h in to_hybrid(rule, rf.n)]
        return [
            sum((esv_colorings(h, kind, i, cap=request.cap) for h in hybrids), Fraction(0))
            for i in range(1, rf.n + 1)
        ]
    assert method == "poly"
    values = _poly_value(request, kind)
    if values is None:
        if kind is ValueKind.EF:
            raise UsageError(
                "method 'poly' for value 'ef' needs a file of mc or embedded "
                "rules only"
            )
        raise UsageError(
            f"method 'poly' is not available for value '{kind.value}'; "
            "closed forms cover mq (any rules) and ef (mc or embedded rules)"
        )
    return values


def evaluate(request: EvalRequest) -> dict[str, list[Fraction]]:
    """Per-player value lists keyed by scheme name.

    Method "cross" runs every route that applies to each scheme and raises
    MismatchError unless they all agree.
    """
    out: dict[str, list[Fraction]] = {}
    for kind in request.kinds:
        if request.method != "cross":
            out[kind.value] = _route_values(request, kind, request.method)
            continue
        routes = {
            "brute": _route_values(request, kind, "brute"),
            "colorings": _route_values(request, kind, "colorings"),
        }
        poly = _poly_value(request, kind)
        if poly is not None:
            routes["poly"] = poly
        names = list(routes)
        first = routes[names[0]]
        for name in names[1:]:
            if routes[name] != first:
                raise MismatchError(
                    f"value '{kind.value}': methods {names[0]} and {name} "
                    f"disagree ({first} vs {routes[name]})"
                )
        out[kind.value] = first
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: ANN201 - argparse interface
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="exshap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )

    pe = sub.add_parser("eval", help="compute extended values for a rule file")
    pe.add_argument("--rules", required=True, help="rule file to read")
    pe.add_argument(
        "--value",
        default="all",
        choices=[*_KINDS, "all"],
        help="value scheme (default: all)",
    )
    pe.add_argument(
        "--player",
        default="all",
        help="restrict table and csv rows to one player (default: all)",
    )
    pe.add_argument(
        "--method",
        default="colorings",
        choices=["brute", "colorings", "poly", "cross"],
        help="evaluation route (default: colorings)",
    )
    pe.add_argument(
        "--format",
        default="table",
        choices=["table", "json", "csv"],
        help="output format (default: table)",
    )
    pe.add_argument("--cap", type=int, help="enumeration size cap")
    pe.add_argument(
        "--decimal",
        action="store_true",
        help="print float approximations instead of exact rationals",
    )
    pe.add_argument("--figure", help="also write a bar chart PNG to this path")
    pe.set_defaults(func=_run_eval)

    pc = sub.add_parser("convert", help="rewrite rules as hybrid or embedded")
    pc.add_argument("--rules", required=True, help="rule file to read")
    pc.add_argument(
        "--emit",
        default="hybrid",
        choices=["hybrid", "embedded"],
        help="target representation (default: hybrid)",
    )
    pc.add_argument(
        "--format",
        default="text",
        choices=["text", "json"],
        help="output format (default: text)",
    )
    pc.set_defaults(func=_run_convert)

    pg = sub.add_parser("graph", help="emit incompatibility graphs")
    pg.add_argument("--rules", required=True, help="rule file to read")
    pg.add_argument(
        "--emit",
        default="text",
        choices=["text", "dot", "png"],
        help="output form (default: text)",
    )
    pg.add_argument(
        "--out",
        help="output path for --emit png (default: graph.png; numbered when "
        "several rules apply)",
    )
    pg.set_defaults(func=_run_graph)

    ph = sub.add_parser(
        "hardness", help="run a counting pipeline on a graph file"
    )
    ph.add_argument(
        "kind",
        choices=sorted(REDUCTIONS),
        help="which quantity to count",
    )
    ph.add_argument("graph", help="graph file to read")
    ph.add_argument(
        "--format",
        default="table",
        choices=["table", "json", "csv"],
        help="output format (default: table)",
    )
    ph.add_argument("--cap", type=int, help="enumeration size cap")
    ph.add_argument("--figure", help="also write a bar chart PNG to this path")
    ph.set_defaults(func=_run_hardness)

    ps = sub.add_parser(
        "selftest", help="check the library against frozen reference results"
    )
    ps.set_defaults(func=_run_selftest)

    return parser


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _cap_from(args: argparse.Namespace) -> int | None:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("EXSHAP_CAP")
    if env is None or not env.strip():
        return None
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"EXSHAP_CAP must be an integer, got {env!r}") from None


def _fmt(value: Fraction, decimal: bool) -> str:
    if decimal:
        return f"{float(value):.10g}"
    return str(value)


def _print_eval(
    values: dict[str, list[Fraction]],
    n: int,
    players: Sequence[int],
    fmt: str,
    decimal: bool,
) -> None:
    kinds = list(values)
    if fmt == "json":
        payload: dict[str, object] = {"players": n}
        body: dict[str, object] = {}
        for kind in kinds:
            if decimal:
                body[kind] = [float(v) for v in values[kind]]
            else:
                body[kind] = [str(v) for v in values[kind]]
        payload["values"] = body
        print(json.dumps(payload, indent=2))
        return
    rows = [
        [str(i)] + [_fmt(values[kind][i - 1], decimal) for kind in kinds]
        for i in players
    ]
    header = ["player", *kinds]
    if fmt == "csv":
        for row in [header, *rows]:
            print(",".join(row))
        return
    widths = [
        max(len(header[c]), *(len(row[c]) for row in rows)) if rows else len(header[c])
        for c in range(len(header))
    ]
    for row in [header, *rows]:
        print("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip())


def _run_eval(args: argparse.Namespace) -> int:
    rf = parse_rule_file(_read(args.rules))
    if args.value == "all":
        kinds = tuple(ValueKind)
    else:
        kinds = (_KINDS[args.value],)
    if args.player == "all":
        players: tuple[int, ...] = tuple(range(1, rf.n + 1))
    else:
        try:
            chosen = int(args.player)
        except ValueError:
            raise UsageError(
                f"--player expects an integer or 'all', got {args.player!r}"
            ) from None
        if not 1 <= chosen <= rf.n:
            raise UsageError(f"player {chosen} out of range 1..{rf.n}")
        players = (chosen,)
    request = EvalRequest(
        rules=rf, kinds=kinds, method=args.method, cap=_cap_from(args)
    )
    values = evaluate(request)
    _print_eval(values, rf.n, players, args.format, args.decimal)
    if args.figure:
        from .figures import render_values_figure

        render_values_figure(values, args.figure)
        print(f"wrote {args.figure}")
    return EXIT_OK


def _run_convert(args: argparse.Namespace) -> int:
    rf = parse_rule_file(_read(args.rules))
    if args.emit == "hybrid":
        converted: tuple[HybridRule | EmbeddedRule, ...] = tuple(
            h for rule in rf.rules for h in to_hybrid(rule, rf.n)
        )
    else:
        converted = tuple(e for rule in rf.rules for e in to_embedded(rule, rf.n))
    out = RuleFile(n=rf.n, rules=converted)
    if args.format == "json":
        payload = {
            "players": out.n,
            "rules": [line for line in render_rule_file(out).splitlines()[1:]],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(render_rule_file(out), end="")
    return EXIT_OK


def _run_graph(args: argparse.Namespace) -> int:
    rf = parse_rule_file(_read(args.rules))
    hybrids = [h for rule in rf.rules for h in to_hybrid(rule, rf.n)]
    graphs = [build_graph(h) for h in hybrids]
    if not graphs:
        print("no rules to draw", file=sys.stderr)
        return EXIT_OK
    many = len(graphs) > 1
    if args.emit == "png":
        from .figures import render_graph_figure

        base = args.out or "graph.png"
        for idx, graph in enumerate(graphs, start=1):
            if many:
                stem, dot, ext = base.rpartition(".")
                path = f"{stem}-{idx}{dot}{ext}" if dot else f"{base}-{idx}"
            else:
                path = base
            render_graph_figure(graph, path)
            print(f"wrote {path}")
        return EXIT_OK
    chunks = []
    for idx, graph in enumerate(graphs, start=1):
        head = ""
        if many:
            marker = "//" if args.emit == "dot" else "#"
            head = f"{marker} rule {idx}\n"
        body = to_dot(graph) if args.emit == "dot" else render_graph(graph)
        chunks.append(head + body)
    print("".join(chunks), end="")
    return EXIT_OK


def _print_report(report: ReductionReport, fmt: str) -> None:
    if fmt == "json":
        payload = {
            "target": report.target,
            "recovered": [str(v) for v in report.recovered],
            "direct": list(report.direct),
            "values": [str(v) for v in report.values],
            "matrix": [[str(v) for v in row] for row in report.matrix.rows],
            "ok": report.ok,
        }
        print(json.dumps(payload, indent=2))
        return
    rows = [
        [str(idx), str(rec), str(direct)]
        for idx, (rec, direct) in enumerate(zip(report.recovered, report.direct))
    ]
    header = ["index", "recovered", "direct"]
    if fmt == "csv":
        for row in [header, *rows]:
            print(",".join(row))
        return
    print(f"target: {report.target}")
    widths = [
        max(len(header[c]), *(len(row[c]) for row in rows))
        for c in range(len(header))
    ]
    for row in [header, *rows]:
        print("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip())
    print(f"status: {'ok' if report.ok else 'MISMATCH'}")


def _run_hardness(args: argparse.Namespace) -> int:
    graph = parse_graph(_read(args.graph))
    report = REDUCTIONS[args.kind](graph, cap=_cap_from(args))
    _print_report(report, args.format)
    if args.figure:
        from .figures import render_hardness_figure

        render_hardness_figure(report, args.figure)
        print(f"wrote {args.figure}")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _selftest_checks() -> list[tuple[str, Callable[[], None]]]:
    from .core import weight_from_shape

    def table_grid() -> None:
        # n=6, |S|=2, i in S, frozen one-column-per-shape reference grid.
        shapes = [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
        grids = {
            ValueKind.MQ: [Fraction(x, 30) for x in (1, 0, 0, 0, 0)],
            ValueKind.EF: [Fraction(x, 30) for x in (0, 0, 0, 0, 1)],
            ValueKind.HY: [Fraction(x, 6090) for x in (5, 10, 10, 17, 26)],
            ValueKind.SS: [Fraction(x, 720) for x in (6, 2, 1, 1, 1)],
            ValueKind.MY: [Fraction(x, 30) for x in (10, -6, -5, 9, -24)],
        }
        for kind, expected in grids.items():
            got = [
                weight_from_shape(kind, 6, 2, True, shape) for shape in shapes
            ]
            if got != expected:
                raise AssertionError(f"{kind.value} weight grid: {got}")

    def reference_rule() -> None:
        text = (
            "players: 6\n"
            "hybrid: (1 !2 -> 1) (2 !1 !3 -> 0) (3 !2 -> 0) "
            "(4 6 !5 -> 0) (5 !4 !6 -> 0)\n"
        )
        rf = parse_rule_file(text)
        (rule,) = rf.rules
        expected = {
            ValueKind.MQ: Fraction(1, 30),
            ValueKind.EF: Fraction(1, 30),
            ValueKind.HY: Fraction(206, 3045),
            ValueKind.SS: Fraction(11, 180),
            ValueKind.MY: Fraction(0),
        }
        for kind, want in expected.items():
            got = esv_colorings(rule, kind, 1)
            if got != want:
                raise AssertionError(f"{kind.value} on reference rule: {got}")
        if mq_poly(rule, 1) != Fraction(1, 30):
            raise AssertionError("mq closed form on reference rule")

    def random_agreement() -> None:
        rng = random.Random(20240)
        for _ in range(4):
            n = rng.randrange(3, 6)
            blocks: list[list[int]] = []
            for p in rng.sample(range(1, n + 1), n):
                if blocks and rng.random() < 0.5:
                    rng.choice(blocks).append(p)
                else:
                    blocks.append([p])
            exprs = []
            for idx, block in enumerate(blocks):
                neg = 0
                for other in range(len(blocks)):
                    if other != idx and rng.random() < 0.6:
                        for p in blocks[other]:
                            neg |= 1 << (p - 1)
                pos = 0
                for p in block:
                    pos |= 1 << (p - 1)
                exprs.append((pos, neg))
            from .rules import BoolExpr

            rule = HybridRule(
                n=n,
                exprs=tuple(
                    BoolExpr(positives=p, negatives=q) for p, q in exprs
                ),
                weight=Fraction(rng.randrange(1, 5), rng.randrange(1, 3)),
            )
            game = game_of_rules((rule,), n)
            for kind in ValueKind:
                for i in range(1, n + 1):
                    brute = esv_bruteforce(game, kind, i)
                    fast = esv_colorings(rule, kind, i)
                    if brute != fast:
                        raise AssertionError(
                            f"{kind.value} player {i}: {brute} vs {fast}"
                        )

    def pipelines() -> None:
        triangle = make_graph(3, edges=[(1, 2), (1, 3), (2, 3)])
        path2 = make_graph(3, edges=[(1, 2), (2, 3)])
        for name, graph in [
            ("independent-sets", triangle),
            ("chromatic", triangle),
            ("hosoya", path2),
            ("matchings", path2),
        ]:
            report = REDUCTIONS[name](graph)
            if not report.ok:
                raise AssertionError(f"{name}: {report.recovered} vs {report.direct}")

    return [
        ("weight grid", table_grid),
        ("reference rule values", reference_rule),
        ("random agreement", random_agreement),
        ("counting pipelines", pipelines),
    ]


def _run_selftest(args: argparse.Namespace) -> int:
    failed = False
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as exc:  # noqa: BLE001 - report and keep going
            failed = True
            print(f"FAIL - {name}: {exc}")
        else:
            print(f"ok - {name}")
    if failed:
        return EXIT_MISMATCH
    print("selftest: ok")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"exshap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"exshap: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StarViolationError as exc:
        print(f"exshap: conversion error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NonBipartiteError as exc:
        print(f"exshap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"exshap: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (CrossCheckError, MismatchError) as exc:
        print(f"exshap: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        print(f"exshap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
