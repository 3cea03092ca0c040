"""
Command-line entry point: ``python -m rackbench <command> ...``.

Machine output (``--format json``, the default) goes to stdout as JSON; logs
go to stderr. Exit codes: 0 success, 1 domain error, 2 unparseable input.
"""
import argparse
import json
import logging
import sys
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from rackbench.config import get_settings
from rackbench.errors import InputParseError, RackbenchError
from rackbench.models import CayleyMode, OutputFormat
from rackbench.services.census import census_service
from rackbench.services.fixtures import fixtures_service
from rackbench.utils.algebra import FiniteMagma, RightQuasigroup, check_report
from rackbench.utils.cayley import (
    cayley_digraph,
    cayley_graph,
    is_marking,
    marking_condition_digraph,
    marking_condition_graph,
    marking_of,
)
from rackbench.utils.excel import generate_csv_report, render_table1
from rackbench.utils.graphs import AnyGraph, automorphism_group
from rackbench.utils.io import (
    FAMILIES,
    family_graph,
    graph_from_json,
    load_json,
    load_labeled,
    magma_from_json,
    parse_subset,
    render_edges,
    render_magma,
    render_perm,
)
from rackbench.utils.labeled import classify, labeled_cayley

logger = logging.getLogger("rackbench")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_PARSE = 2


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    common.add_argument("--zero-based", action="store_true", default=None,
                        help="show 0-based indices in table output")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    return common


def _graph_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("graph", nargs="?", help="graph JSON file or inline JSON")
    parser.add_argument("--family", choices=FAMILIES)
    parser.add_argument("--n", type=int, help="number of vertices for --family")


def _magma_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("magma", nargs="?", help="magma JSON file or inline JSON")
    parser.add_argument("--example", help="bundled worked example by name")


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="rackbench",
        description="Racks, quandles, Cayley graphs and marking censuses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    census = sub.add_parser("census", parents=[common], help="count rack/quandle markings of a graph")
    _graph_options(census)
    census.add_argument("--budget-seconds", type=float, default=None)
    census.add_argument("--budget-nodes", type=int, default=None)
    census.add_argument("--jobs", type=int, default=None)
    census.add_argument("--no-prune", action="store_true", help="unpruned reference search")
    census.add_argument("--quandles-only", action="store_true", help="search q-markings only")

    cls = sub.add_parser("classify", parents=[common], help="classify a labeled digraph")
    cls.add_argument("labeled", nargs="?", help="labeled digraph JSON, .txt edge list, or inline JSON")
    cls.add_argument("--example", help="bundled labeled example by name")

    cay = sub.add_parser("cayley", parents=[common], help="Cayley (di)graph of a magma")
    _magma_options(cay)
    cay.add_argument("--subset", default=None, help="connection set, e.g. 0,2 (default: all vertices)")
    cay.add_argument("--mode", choices=[m.value for m in CayleyMode], default=CayleyMode.DIRECTED.value)

    aut = sub.add_parser("aut", parents=[common], help="automorphism group of a graph")
    _graph_options(aut)

    check = sub.add_parser("check", parents=[common], help="every axiom predicate for a magma")
    _magma_options(check)

    refl = sub.add_parser("reflections", parents=[common], help="reflection markings of the cycle C_n")
    refl.add_argument("n", type=int)

    table = sub.add_parser("table1", parents=[common], help="reproduce the marking-count table")
    table.add_argument("--max-complete", type=int, default=None)
    table.add_argument("--max-star", type=int, default=None)
    table.add_argument("--max-cycle", type=int, default=None)
    table.add_argument("--columns", type=int, default=None)
    table.add_argument("--budget-seconds", type=float, default=None, help="budget per cell")
    table.add_argument("--jobs", type=int, default=None)
    table.add_argument("--csv", action="store_true", help="write CSV instead of JSON or text")

    serve = sub.add_parser("serve", parents=[common], help="run the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _emit(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _emit_rows(rows: Sequence[tuple[str, Any]]) -> None:
    width = max((len(k) for k, _ in rows), default=0)
    for key, value in rows:
        sys.stdout.write(f"{key.ljust(width)}  {value}\n")


def _load_graph(args: argparse.Namespace) -> AnyGraph:
    if args.family:
        if args.n is None:
            raise InputParseError("--family needs --n")
        return family_graph(args.family, args.n)
    if not args.graph:
        raise InputParseError("give a graph file or --family/--n")
    return graph_from_json(load_json(args.graph))


def _load_magma(args: argparse.Namespace) -> FiniteMagma:
    if args.example:
        return fixtures_service.magma(args.example)
    if not args.magma:
        raise InputParseError("give a magma file or --example")
    return magma_from_json(load_json(args.magma))


def cmd_census(args: argparse.Namespace, table: bool, zero_based: bool) -> int:
    graph = _load_graph(args)
    result = census_service.mu_census(
        graph,
        budget_seconds=args.budget_seconds,
        budget_nodes=args.budget_nodes,
        jobs=args.jobs,
        prune=not args.no_prune,
        quandles_only=args.quandles_only,
    )
    if table:
        _emit_rows([(k, "-" if v is None else v) for k, v in result.to_json().items()])
    else:
        _emit(result.to_json())
    return EXIT_OK


def cmd_classify(args: argparse.Namespace, table: bool, zero_based: bool) -> int:
    if args.example:
        g = fixtures_service.labeled(args.example)
    elif args.labeled:
        g = load_labeled(args.labeled)
    else:
        raise InputParseError("give a labeled digraph or --example")
    report = classify(g)
    if table:
        flags = report.model_dump(exclude={"realizes", "reasons"})
        rows = [(k, str(v).lower()) for k, v in flags.items()]
        rows.append(("realizes", ", ".join(v.value for v in report.realizes) or "-"))
        rows.extend(("reason", r) for r in report.reasons)
        _emit_rows(rows)
    else:
        _emit(report.model_dump(mode="json"))
    return EXIT_OK


def cmd_cayley(args: argparse.Namespace, table: bool, zero_based: bool) -> int:
    magma = _load_magma(args)
    subset = parse_subset(args.subset) if args.subset is not None else list(range(magma.order))
    mode = CayleyMode(args.mode)
    payload: dict[str, Any] = {"mode": mode.value, "subset": subset}

    if mode == CayleyMode.LABELED:
        graph = labeled_cayley(magma, subset)
    else:
        directed = mode == CayleyMode.DIRECTED
        graph = cayley_digraph(magma, subset) if directed else cayley_graph(magma, subset)
        if isinstance(magma, RightQuasigroup):
            condition = marking_condition_digraph if directed else marking_condition_graph
            payload["is_marking"] = is_marking(marking_of(magma, subset, directed=directed))
            payload["marking_condition"] = condition(magma, subset)
    payload["graph"] = graph.to_json()

    if table:
        sys.stdout.write(render_edges(graph, zero_based) + "\n")
        for key in ("is_marking", "marking_condition"):
            if key in payload:
                sys.stdout.write(f"{key}: {str(payload[key]).lower()}\n")
    else:
        _emit(payload)
    return EXIT_OK


def cmd_aut(args: argparse.Namespace, table: bool, zero_based: bool) -> int:
    graph = _load_graph(args)
    group = automorphism_group(graph)
    if table:
        sys.stdout.write(f"order {group.order()}\n")
        for p in group.elements():
            sys.stdout.write(render_perm(p, zero_based) + "\n")
    else:
        _emit({
            "degree": group.degree,
            "order": group.order(),
            "elements": [list(p.images) for p in group.elements()],
        })
    return EXIT_OK


def cmd_check(args: argparse.Namespace, table: bool, zero_based: bool) -> int:
    magma = _load_magma(args)
    report = check_report(magma)
    if table:
        sys.stdout.write(render_magma(magma, zero_based) + "\n")
        _emit_rows([(k, str(v).lower()) for k, v in report.items()])
    else:
        _emit({"order": magma.order, **report})
    return EXIT_OK


def cmd_reflections(args: argparse.Namespace, table: bool, zero_based: bool) -> int:
    markings = census_service.reflection_markings(args.n)
    if table:
        for i, m in enumerate(markings):
            shown = " ".join(render_perm(p, zero_based) for p in m.assignment)
            sys.stdout.write(f"{i:>3}  {shown}\n")
    else:
        _emit({
            "n": args.n,
            "count": len(markings),
            "markings": [[list(p.images) for p in m.assignment] for m in markings],
        })
    return EXIT_OK


def cmd_table1(args: argparse.Namespace, table: bool, zero_based: bool) -> int:
    max_orders = {
        family: value
        for family, value in (
            ("complete", args.max_complete),
            ("star", args.max_star),
            ("cycle", args.max_cycle),
        )
        if value is not None
    }
    result = census_service.census_table1(
        max_orders=max_orders,
        columns=args.columns,
        cell_seconds=args.budget_seconds,
        jobs=args.jobs,
    )
    if args.csv:
        sys.stdout.write(generate_csv_report(result))
    elif table:
        sys.stdout.write(render_table1(result))
    else:
        _emit(result.model_dump(mode="json"))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace, table: bool, zero_based: bool) -> int:
    import uvicorn

    uvicorn.run("rackbench.main:app", host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {
    "census": cmd_census,
    "classify": cmd_classify,
    "cayley": cmd_cayley,
    "aut": cmd_aut,
    "check": cmd_check,
    "reflections": cmd_reflections,
    "table1": cmd_table1,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    settings = get_settings()
    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    table = args.format == OutputFormat.TABLE.value
    zero_based = settings.zero_based if args.zero_based is None else args.zero_based

    try:
        return COMMANDS[args.command](args, table, zero_based)
    except InputParseError as e:
        logger.error("%s", e.detail)
        return EXIT_PARSE
    except ValidationError as e:
        logger.error("invalid input: %s", e.errors()[0]["msg"])
        return EXIT_PARSE
    except RackbenchError as e:
        logger.error("%s: %s", e.error_code, e.detail)
        return EXIT_DOMAIN
    except Exception:
        logger.exception("unexpected failure in %s", args.command)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
