"""The ``equinet`` command line.

``equinet run --config <path>`` executes the whole pipeline;
``equinet validate --config <path>`` checks a configuration without
running.  The per-stage subcommands (``graph``, ``metrics``,
``communities``, ``layout``, ``regress``) consume prior-stage output files
directly.  Exit codes: 0 success, 1 configuration error, 2 stage failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .community import class_census, louvain, significant_classes
from .errors import ConfigInvalid, EquinetError
from .gexf import export_gexf
from .graph import (
    assemble_graph,
    build_type1,
    build_type2,
    build_type3,
    connection_summary,
    listed_firms,
    read_edge_list,
    read_node_list,
    write_edge_list,
    write_node_list,
)
from .layout import LayoutParams, forceatlas2, write_positions
from .metrics import compute_node_metrics, graph_metrics
from .pipeline import (
    read_node_metrics,
    read_observations,
    read_partition,
    run,
    validate_config,
    write_histogram,
    write_node_metrics,
    write_partition,
    write_regression_csv,
)
from .records import (
    LegalRepRecord,
    ShareholderRecord,
    parse_records,
    parse_window_spec,
    read_alias_table,
    window_slice,
)
from .regression import bp_test, parse_model_spec, reset_test, run_model
from .reports import (
    ConnectionRow,
    StatColumn,
    format_census_table,
    format_connection_table,
    format_diagnostics,
    format_graph_stats_table,
    format_regression_table,
)


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (config/usage error) instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser():
    parser = _Parser(prog="equinet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input_overrides(p):
        p.add_argument("--shareholders", help="override the config's shareholders path")
        p.add_argument("--legal-reps", dest="legal_reps")
        p.add_argument("--market")
        p.add_argument("--financials")
        p.add_argument("--aliases")
        p.add_argument("--delimiter")
        p.add_argument("--windows", action="append", metavar="LABEL:START:END",
                       help="replace the config's windows (repeatable)")

    p_run = sub.add_parser("run", help="execute the full pipeline from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--resume", action="store_true",
                       help="reuse cached stage outputs when inputs are unchanged")
    add_input_overrides(p_run)

    p_val = sub.add_parser("validate", help="check a config file and report all problems")
    p_val.add_argument("--config", required=True)
    add_input_overrides(p_val)

    p_graph = sub.add_parser("graph", help="build per-window graphs from record files")
    p_graph.add_argument("--shareholders", required=True)
    p_graph.add_argument("--legal-reps", required=True)
    p_graph.add_argument("--aliases")
    p_graph.add_argument("--windows", action="append", required=True,
                         metavar="LABEL:START:END")
    p_graph.add_argument("--delimiter", default=",")
    p_graph.add_argument("--skip-bad-rows", action="store_true")
    p_graph.add_argument("--output-dir", required=True)

    p_metrics = sub.add_parser("metrics", help="topology statistics from an edge list")
    p_metrics.add_argument("--edges", required=True)
    p_metrics.add_argument("--nodes", required=True)
    p_metrics.add_argument("--window", default="window")
    p_metrics.add_argument("--closeness", default="reachable-over-distance",
                           choices=["reachable-over-distance", "mean-distance"])
    p_metrics.add_argument("--output-dir", required=True)

    p_comm = sub.add_parser("communities", help="modularity classes from an edge list")
    p_comm.add_argument("--edges", required=True)
    p_comm.add_argument("--nodes", required=True)
    p_comm.add_argument("--window", default="window")
    p_comm.add_argument("--seed", type=int, default=0)
    p_comm.add_argument("--resolution", type=float, default=1.0)
    p_comm.add_argument("--class-threshold", type=float, default=0.05)
    p_comm.add_argument("--output-dir", required=True)

    p_layout = sub.add_parser("layout", help="ForceAtlas2 positions and GEXF export")
    p_layout.add_argument("--edges", required=True)
    p_layout.add_argument("--nodes", required=True)
    p_layout.add_argument("--window", default="window")
    p_layout.add_argument("--partition")
    p_layout.add_argument("--node-metrics")
    p_layout.add_argument("--layout-iters", type=int, default=100)
    p_layout.add_argument("--layout-seed", type=int, default=0)
    p_layout.add_argument("--output-dir", required=True)

    p_reg = sub.add_parser("regress", help="estimate a model on an observations file")
    p_reg.add_argument("--observations", required=True)
    p_reg.add_argument("--model-spec", required=True)
    p_reg.add_argument("--output-dir", required=True)
    return parser


def _load_graph(args):
    nodes = read_node_list(args.nodes)
    edges = read_edge_list(args.edges, args.window)
    return assemble_graph(nodes, edges, args.window)


def _overrides(args):
    return {
        "shareholders": args.shareholders,
        "legal_reps": args.legal_reps,
        "market": args.market,
        "financials": args.financials,
        "aliases": args.aliases,
        "delimiter": args.delimiter,
        "windows": args.windows,
    }


def _cmd_run(args) -> int:
    try:
        config = validate_config(args.config, overrides=_overrides(args))
    except ConfigInvalid as exc:
        print(exc, file=sys.stderr)
        return 1
    try:
        bundle = run(config, resume=args.resume)
    except ConfigInvalid as exc:
        print(exc, file=sys.stderr)
        return 1
    except EquinetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(bundle.files)} files to {bundle.output_dir}")
    return 0


def _cmd_validate(args) -> int:
    try:
        validate_config(args.config, overrides=_overrides(args))
    except ConfigInvalid as exc:
        print(exc, file=sys.stderr)
        return 1
    print("config ok")
    return 0


def _cmd_graph(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    shareholders = parse_records(
        args.shareholders, ShareholderRecord,
        delimiter=args.delimiter, skip_bad_rows=args.skip_bad_rows,
    )
    legal_reps = parse_records(
        args.legal_reps, LegalRepRecord,
        delimiter=args.delimiter, skip_bad_rows=args.skip_bad_rows,
    )
    aliases = read_alias_table(args.aliases, delimiter=args.delimiter) if args.aliases else {}
    rows = []
    for spec in args.windows:
        window = parse_window_spec(spec)
        sh = window_slice(shareholders, window, "report_date")
        lr = window_slice(legal_reps, window, "report_date")
        listed = listed_firms(sh)
        edges = (
            build_type1(sh, listed, aliases, window.label)
            + build_type2(sh, lr, window.label, listed=listed)
            + build_type3(sh, window.label)
        )
        graph = assemble_graph(listed, edges, window.label)
        wdir = out / window.label
        wdir.mkdir(parents=True, exist_ok=True)
        write_node_list(wdir / "nodes.txt", graph)
        write_edge_list(wdir / "edges.csv", graph)
        summary = connection_summary(graph)
        rows.append(ConnectionRow(window.label, summary.type1, summary.type2, summary.type3))
    print(format_connection_table(rows), end="")
    return 0


def _cmd_metrics(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    graph = _load_graph(args)
    node_metrics = compute_node_metrics(graph, closeness_mode=args.closeness)
    gm = graph_metrics(graph, closeness_mode=args.closeness)
    write_node_metrics(out / "node_metrics.csv", node_metrics)
    for kind in ("in", "out", "total"):
        write_histogram(out / f"degree_hist_{kind}.csv", gm.degree_histogram[kind])
    column = StatColumn(
        label=args.window, node_count=gm.node_count, edge_count=gm.edge_count,
        diameter=gm.diameter, average_clustering=gm.average_clustering,
        average_path_length=gm.average_path_length,
    )
    print(format_graph_stats_table([column]), end="")
    return 0


def _cmd_communities(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    graph = _load_graph(args)
    partition = louvain(graph, seed=args.seed, resolution=args.resolution)
    write_partition(out / "partition.csv", partition)
    census = class_census(partition)
    (out / "census.txt").write_text(
        format_census_table(census, label=args.window), encoding="utf-8"
    )
    significant = significant_classes(partition, args.class_threshold)
    print(f"modularity {partition.modularity:.3f}, "
          f"{partition.class_count} classes, {len(significant)} significant")
    return 0


def _cmd_layout(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    graph = _load_graph(args)
    params = LayoutParams(iterations=args.layout_iters, seed=args.layout_seed)
    positions = forceatlas2(graph, params)
    write_positions(out / "positions.csv", positions)
    partition = None
    node_metrics = None
    if args.partition:
        partition = read_partition(args.partition, graph)
    if args.node_metrics:
        node_metrics = read_node_metrics(args.node_metrics)
    export_gexf(out / "network.gexf", graph, positions,
                partition=partition, node_metrics=node_metrics)
    print(f"wrote {out / 'positions.csv'} and {out / 'network.gexf'}")
    return 0


def _cmd_regress(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cross = read_observations(args.observations)
    spec = parse_model_spec(Path(args.model_spec).read_text(encoding="utf-8"))
    name = Path(args.model_spec).stem
    result = run_model(cross, spec)
    write_regression_csv(out / f"regress_{name}.csv", result)
    table = format_regression_table({name: result})
    (out / f"regress_{name}.txt").write_text(table, encoding="utf-8")
    if spec.instruments is None:
        diag = format_diagnostics(
            bp_fitted=bp_test(result, variant="fitted"),
            bp_regressors=bp_test(result, variant="regressors"),
            reset=reset_test(result, variant="fitted"),
        )
        (out / f"diagnostics_{name}.txt").write_text(diag, encoding="utf-8")
    print(table, end="")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "validate": _cmd_validate,
    "graph": _cmd_graph,
    "metrics": _cmd_metrics,
    "communities": _cmd_communities,
    "layout": _cmd_layout,
    "regress": _cmd_regress,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigInvalid as exc:
        print(exc, file=sys.stderr)
        return 1
    except EquinetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
