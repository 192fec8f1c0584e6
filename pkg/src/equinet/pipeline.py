"""Run-configuration handling and the ingest-to-report pipeline.

The config is flat ``key = value`` text with repeatable keys (``window``,
``model_spec``) plus optional ``[model NAME]`` blocks holding inline model
definitions.  Relative paths resolve against the config file's directory
so a bundle is reproducible from any working directory.  All randomness
flows from the named seeds; a re-run of the same config over the same
inputs yields a byte-identical bundle.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .community import class_census, louvain, significant_classes
from .errors import ConfigInvalid, StageError
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
from .metrics import NodeMetrics, compute_node_metrics, graph_metrics
from .records import (
    FinancialRecord,
    LegalRepRecord,
    MarketRecord,
    ShareholderRecord,
    check_windows,
    parse_records_with_report,
    parse_window_spec,
    quarterly_average,
    read_alias_table,
    window_slice,
)
from .regression import (
    CrossSection,
    FirmObservation,
    ModelSpec,
    bp_test,
    build_cross_section,
    correlation_matrix,
    dwh_test,
    design_matrix,
    parse_model_spec,
    reset_test,
    run_model,
    turning_point,
)
from .reports import (
    ConnectionRow,
    StatColumn,
    format_census_table,
    format_connection_table,
    format_correlation_table,
    format_diagnostics,
    format_estimator_comparison,
    format_graph_stats_table,
    format_regression_table,
)

__all__ = ["RunConfig", "ReportBundle", "validate_config", "run"]

OUTPUT_DIR_ENV = "EQUINET_OUTPUT_DIR"


@dataclass
class RunConfig:
    shareholders: Path
    legal_reps: Path
    market: Path
    financials: Path
    windows: list
    model_specs: list                 # (name, ModelSpec) pairs
    output_dir: Path
    aliases: Path | None = None
    delimiter: str = ","
    skip_bad_rows: bool = False
    louvain_seed: int = 0
    layout_seed: int = 0
    mc_seed: int = 0
    resolution: float = 1.0
    class_threshold: float = 0.05
    rank_tolerance: float = 1e-10
    layout_iterations: int = 100
    layout_gravity: float = 1.0
    layout_scaling: float = 2.0
    layout_theta: float = 1.0
    layout_jitter: float = 1.0
    closeness_mode: str = "reachable-over-distance"
    raw_text: str = ""


@dataclass
class ReportBundle:
    output_dir: Path
    files: list = field(default_factory=list)
    per_window: dict = field(default_factory=dict)


_PATH_KEYS = {"shareholders", "legal_reps", "market", "financials", "aliases"}
_INT_KEYS = {"louvain_seed", "layout_seed", "mc_seed", "layout_iterations"}
_FLOAT_KEYS = {
    "resolution", "class_threshold", "rank_tolerance",
    "layout_gravity", "layout_scaling", "layout_theta", "layout_jitter",
}


def _parse_config_text(text, base_dir, problems):
    """First pass: raw keys, window lines, model blocks."""
    values = {}
    windows = []
    model_files = []
    inline_models = {}
    section = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            inner = line[1:-1].strip()
            parts = inner.split(None, 1)
            if len(parts) == 2 and parts[0] == "model":
                section = parts[1].strip()
                inline_models.setdefault(section, [])
            else:
                problems.append(f"line {number}: unknown section {inner!r}")
                section = None
            continue
        if section is not None:
            inline_models[section].append(line)
            continue
        key, sep, value = line.partition("=")
        if not sep:
            problems.append(f"line {number}: expected key = value, got {line!r}")
            continue
        key = key.strip()
        value = value.strip()
        if key == "window":
            try:
                windows.append(parse_window_spec(value))
            except ValueError as exc:
                problems.append(f"line {number}: {exc}")
        elif key == "model_spec":
            model_files.append((number, base_dir / value))
        elif key in _PATH_KEYS:
            values[key] = base_dir / value
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                problems.append(f"line {number}: {key} must be an integer, got {value!r}")
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                problems.append(f"line {number}: {key} must be a number, got {value!r}")
        elif key == "skip_bad_rows":
            values[key] = value.lower() in ("1", "true", "yes", "on")
        elif key in ("output_dir", "delimiter", "closeness_mode"):
            values[key] = value
        else:
            problems.append(f"line {number}: unknown key {key!r}")
    return values, windows, model_files, inline_models


def _check_model_fields(name, spec) -> list[str]:
    """Model-spec fields must name FirmObservation columns."""
    import dataclasses

    valid = {f.name for f in dataclasses.fields(FirmObservation)} - {"firm_id", "class_dummies"}
    selectable = valid | {"class_dummies"}
    problems = []
    if spec.dependent not in valid:
        problems.append(f"model {name!r}: unknown dependent {spec.dependent!r}")
    for regressor in spec.regressors:
        if regressor not in selectable:
            problems.append(f"model {name!r}: unknown regressor {regressor!r}")
    if spec.weights is not None and spec.weights not in valid:
        problems.append(f"model {name!r}: unknown weights field {spec.weights!r}")
    if spec.instruments is not None:
        endog, ivs = spec.instruments
        if endog not in valid:
            problems.append(f"model {name!r}: unknown endogenous field {endog!r}")
        for iv in ivs:
            if iv not in valid:
                problems.append(f"model {name!r}: unknown instrument field {iv!r}")
    return problems


def validate_config(path, overrides=None) -> RunConfig:
    """Parse and validate; raises ConfigInvalid carrying every problem found.

    ``overrides`` maps config keys to command-line values: the four input
    paths, ``aliases``, ``delimiter`` (resolved against the working
    directory) and ``windows`` (a list of ``label:start:end`` strings that
    replaces the config's window set).
    """
    path = Path(path)
    problems = []
    if not path.exists():
        raise ConfigInvalid([f"config file not found: {path}"])
    text = path.read_text(encoding="utf-8")
    base_dir = path.parent
    values, windows, model_files, inline_models = _parse_config_text(text, base_dir, problems)

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "windows":
            windows = []
            for spec in value:
                try:
                    windows.append(parse_window_spec(spec))
                except ValueError as exc:
                    problems.append(f"--windows: {exc}")
        elif key in _PATH_KEYS:
            values[key] = Path(value)
        elif key == "delimiter":
            values[key] = value
        else:
            problems.append(f"unknown override {key!r}")

    for key in ("shareholders", "legal_reps", "market", "financials"):
        if key not in values:
            problems.append(f"missing required key {key!r}")
        elif not values[key].exists():
            problems.append(f"{key}: input file not found: {values[key]}")
    if values.get("aliases") is not None and not values["aliases"].exists():
        problems.append(f"aliases: input file not found: {values['aliases']}")

    if not windows:
        problems.append("at least one window is required")
    problems.extend(check_windows(windows))

    model_specs = []
    for number, spec_path in model_files:
        if not spec_path.exists():
            problems.append(f"line {number}: model spec file not found: {spec_path}")
            continue
        try:
            model_specs.append((spec_path.stem, parse_model_spec(spec_path.read_text(encoding="utf-8"))))
        except ValueError as exc:
            problems.append(f"model spec {spec_path}: {exc}")
    for name, lines in inline_models.items():
        try:
            model_specs.append((name, parse_model_spec("\n".join(lines))))
        except ValueError as exc:
            problems.append(f"model {name!r}: {exc}")
    if not model_specs and not problems:
        problems.append("at least one model spec is required")
    for name, spec in model_specs:
        problems.extend(_check_model_fields(name, spec))

    output_dir = os.environ.get(OUTPUT_DIR_ENV) or values.get("output_dir")
    if not output_dir:
        problems.append("missing required key 'output_dir'")

    if problems:
        raise ConfigInvalid(problems)

    known = {k: v for k, v in values.items() if k not in ("output_dir",)}
    return RunConfig(
        windows=windows,
        model_specs=model_specs,
        output_dir=(base_dir / output_dir) if not Path(output_dir).is_absolute() else Path(output_dir),
        raw_text=text,
        **known,
    )


# --- intermediate artifact readers/writers ---------------------------------

_NODE_METRIC_COLUMNS = [
    "firm_id", "in_degree", "out_degree", "degree", "clustering_coefficient",
    "betweenness", "closeness", "eigenvector", "eccentricity",
]


def write_node_metrics(path, node_metrics):
    # repr keeps exact doubles so downstream stages reproduce the pipeline
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(_NODE_METRIC_COLUMNS)
        for firm_id in sorted(node_metrics):
            m = node_metrics[firm_id]
            writer.writerow([
                m.firm_id, m.in_degree, m.out_degree, m.degree,
                repr(m.clustering_coefficient), repr(m.betweenness),
                repr(m.closeness), repr(m.eigenvector), m.eccentricity,
            ])


def read_node_metrics(path):
    out = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            out[row["firm_id"]] = NodeMetrics(
                firm_id=row["firm_id"],
                in_degree=int(row["in_degree"]),
                out_degree=int(row["out_degree"]),
                degree=int(row["degree"]),
                clustering_coefficient=float(row["clustering_coefficient"]),
                betweenness=float(row["betweenness"]),
                closeness=float(row["closeness"]),
                eigenvector=float(row["eigenvector"]),
                eccentricity=int(row["eccentricity"]),
            )
    return out


def write_partition(path, partition):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["firm_id", "class"])
        for firm_id in sorted(partition.assignment):
            writer.writerow([firm_id, partition.assignment[firm_id]])


def read_partition(path, graph, seed=0, resolution=1.0):
    """Restore a partition from its export; Q is recomputed from the graph."""
    from .community import CommunityPartition, modularity

    assignment = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            assignment[row["firm_id"]] = int(row["class"])
    sizes = {}
    for c in assignment.values():
        sizes[c] = sizes.get(c, 0) + 1
    return CommunityPartition(
        assignment=assignment,
        modularity=modularity(graph, assignment, resolution),
        class_sizes=dict(sorted(sizes.items())),
        seed=seed,
        resolution=resolution,
    )


def write_histogram(path, histogram):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["degree", "count"])
        for degree, count in sorted(histogram.items()):
            writer.writerow([degree, count])


_OBSERVATION_COLUMNS = [
    "firm_id", "y", "log_v", "log_npp", "npf_d", "npf_d_sq", "trading_amount",
    "degree", "betweenness", "clustering_coefficient", "eigenvector",
    "closeness", "eccentricity",
]


def write_observations(path, cross_section: CrossSection):
    dummy_names = [f"dummy_{c}" for c in cross_section.dummy_classes]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(_OBSERVATION_COLUMNS + dummy_names)
        for o in cross_section.observations:
            row = [o.firm_id] + [
                repr(float(getattr(o, c))) for c in _OBSERVATION_COLUMNS[1:]
            ] + [str(v) for v in o.class_dummies]
            writer.writerow(row)


def read_observations(path) -> CrossSection:
    """Rebuild a CrossSection from the per-window observations file."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        dummy_names = [h for h in header if h.startswith("dummy_")]
        dummy_classes = [int(h.split("_", 1)[1]) for h in dummy_names]
        index = {h: i for i, h in enumerate(header)}
        observations = []
        for row in reader:
            if not row:
                continue
            kwargs = {"firm_id": row[index["firm_id"]]}
            for column in _OBSERVATION_COLUMNS[1:]:
                kwargs[column] = float(row[index[column]])
            kwargs["class_dummies"] = tuple(int(row[index[d]]) for d in dummy_names)
            observations.append(FirmObservation(**kwargs))
    return CrossSection(observations, dummy_classes, baseline_class=-1, drops={})


def write_regression_csv(path, result):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["name", "coefficient", "std_error", "t_stat", "p_value"])
        for i, name in enumerate(result.names):
            writer.writerow([
                name,
                f"{result.coefficients[i]:.10g}",
                f"{result.standard_errors[i]:.10g}",
                f"{result.t_stats[i]:.10g}",
                f"{result.p_values[i]:.10g}",
            ])


# --- pipeline stages --------------------------------------------------------


class _Tracker:
    """Remembers files written in this run so a failed stage can clean up."""

    def __init__(self):
        self.files = []

    def path(self, p):
        p = Path(p)
        self.files.append(p)
        return p

    def cleanup(self):
        for p in self.files:
            try:
                p.unlink()
            except OSError:
                pass


def _stage_key(*parts) -> str:
    digest = hashlib.sha256()
    for part in parts:
        if isinstance(part, Path):
            digest.update(part.read_bytes())
        else:
            digest.update(str(part).encode("utf-8"))
        digest.update(b"\x1f")
    return digest.hexdigest()


class _Cache:
    def __init__(self, root, enabled):
        self.dir = root / ".cache"
        self.enabled = enabled
        if enabled:
            self.dir.mkdir(parents=True, exist_ok=True)

    def fresh(self, name, key, outputs) -> bool:
        if not self.enabled:
            return False
        key_file = self.dir / f"{name}.key"
        return (
            key_file.exists()
            and key_file.read_text(encoding="utf-8") == key
            and all(Path(p).exists() for p in outputs)
        )

    def store(self, name, key):
        if self.enabled:
            (self.dir / f"{name}.key").write_text(key, encoding="utf-8")


def _ingest(config: RunConfig):
    kw = {"delimiter": config.delimiter, "skip_bad_rows": config.skip_bad_rows}
    shareholders, skipped_s = parse_records_with_report(config.shareholders, ShareholderRecord, **kw)
    legal_reps, skipped_l = parse_records_with_report(config.legal_reps, LegalRepRecord, **kw)
    market, skipped_m = parse_records_with_report(config.market, MarketRecord, **kw)
    financials, skipped_f = parse_records_with_report(config.financials, FinancialRecord, **kw)
    aliases = read_alias_table(config.aliases, delimiter=config.delimiter) if config.aliases else {}
    skips = {
        "shareholders": skipped_s, "legal_reps": skipped_l,
        "market": skipped_m, "financials": skipped_f,
    }
    return shareholders, legal_reps, market, financials, aliases, skips


def _build_window_graph(config, window, shareholders, legal_reps, aliases):
    sh = window_slice(shareholders, window, "report_date")
    lr = window_slice(legal_reps, window, "report_date")
    listed = listed_firms(sh)
    edges = (
        build_type1(sh, listed, aliases, window.label)
        + build_type2(sh, lr, window.label, listed=listed)
        + build_type3(sh, window.label)
    )
    return assemble_graph(listed, edges, window.label)


def run(config: RunConfig, resume=False) -> ReportBundle:
    """Execute every stage for every window and write the report bundle."""
    out_root = Path(config.output_dir)
    try:
        out_root.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigInvalid([f"output directory not writable: {out_root} ({exc})"])
    cache = _Cache(out_root, resume)
    bundle = ReportBundle(output_dir=out_root)
    tracker = _Tracker()

    def _fail(stage, window, exc):
        tracker.cleanup()
        raise StageError(stage, window, exc) from exc

    try:
        shareholders, legal_reps, market, financials, aliases, skips = _ingest(config)
    except Exception as exc:
        _fail("ingest", None, exc)

    layout_params = LayoutParams(
        iterations=config.layout_iterations,
        gravity=config.layout_gravity,
        scaling=config.layout_scaling,
        barnes_hut_theta=config.layout_theta,
        jitter_tolerance=config.layout_jitter,
        seed=config.layout_seed,
    )

    input_key = _stage_key(
        config.shareholders, config.legal_reps, config.market, config.financials,
        config.aliases if config.aliases else "no-aliases",
        config.delimiter, config.skip_bad_rows,
    )

    for window in config.windows:
        wdir = out_root / window.label
        wdir.mkdir(parents=True, exist_ok=True)
        files = {}
        window_key = _stage_key(input_key, window.label, window.start, window.end)

        # --- graph stage
        graph_outputs = [wdir / "nodes.txt", wdir / "edges.csv",
                         wdir / "connections.txt", wdir / "connections.csv"]
        graph_key = _stage_key(window_key, "graph")
        try:
            if cache.fresh(f"{window.label}_graph", graph_key, graph_outputs):
                nodes = read_node_list(wdir / "nodes.txt")
                raw = read_edge_list(wdir / "edges.csv", window.label)
                graph = assemble_graph(nodes, raw, window.label)
            else:
                graph = _build_window_graph(config, window, shareholders, legal_reps, aliases)
                write_node_list(tracker.path(wdir / "nodes.txt"), graph)
                write_edge_list(tracker.path(wdir / "edges.csv"), graph)
                summary = connection_summary(graph)
                row = ConnectionRow(window.label, summary.type1, summary.type2, summary.type3)
                (tracker.path(wdir / "connections.txt")).write_text(
                    format_connection_table([row]), encoding="utf-8"
                )
                with open(tracker.path(wdir / "connections.csv"), "w", newline="",
                          encoding="utf-8") as handle:
                    writer = csv.writer(handle, lineterminator="\n")
                    writer.writerow(["window", "total", "type1", "type2", "type3"])
                    writer.writerow([window.label, summary.total, summary.type1,
                                     summary.type2, summary.type3])
                cache.store(f"{window.label}_graph", graph_key)
        except Exception as exc:
            _fail("graph", window.label, exc)

        # --- metrics stage
        metric_outputs = [wdir / "node_metrics.csv"] + [
            wdir / f"degree_hist_{kind}.csv" for kind in ("in", "out", "total")
        ]
        metrics_key = _stage_key(graph_key, "metrics", config.closeness_mode)
        try:
            if cache.fresh(f"{window.label}_metrics", metrics_key, metric_outputs):
                node_metrics = read_node_metrics(wdir / "node_metrics.csv")
            else:
                node_metrics = compute_node_metrics(graph, closeness_mode=config.closeness_mode)
                gm = graph_metrics(graph, closeness_mode=config.closeness_mode)
                write_node_metrics(tracker.path(wdir / "node_metrics.csv"), node_metrics)
                for kind in ("in", "out", "total"):
                    write_histogram(
                        tracker.path(wdir / f"degree_hist_{kind}.csv"),
                        gm.degree_histogram[kind],
                    )
                cache.store(f"{window.label}_metrics", metrics_key)
        except Exception as exc:
            _fail("metrics", window.label, exc)

        # --- community stage
        community_key = _stage_key(
            graph_key, "community", config.louvain_seed, config.resolution,
            config.class_threshold,
        )
        community_outputs = [wdir / "partition.csv", wdir / "census.txt",
                             wdir / "census.csv", wdir / "graph_stats.txt"]
        try:
            if cache.fresh(f"{window.label}_community", community_key, community_outputs):
                partition = read_partition(
                    wdir / "partition.csv", graph,
                    seed=config.louvain_seed, resolution=config.resolution,
                )
            else:
                partition = louvain(graph, seed=config.louvain_seed,
                                    resolution=config.resolution)
                gm = graph_metrics(graph, closeness_mode=config.closeness_mode)
                write_partition(tracker.path(wdir / "partition.csv"), partition)
                census = class_census(partition)
                (tracker.path(wdir / "census.txt")).write_text(
                    format_census_table(census, label=window.label), encoding="utf-8"
                )
                with open(tracker.path(wdir / "census.csv"), "w", newline="",
                          encoding="utf-8") as handle:
                    writer = csv.writer(handle, lineterminator="\n")
                    writer.writerow(["class", "count", "percent"])
                    for r in census:
                        writer.writerow([r.class_index, r.count, f"{r.percent:.2f}"])
                column = StatColumn(
                    label=window.label,
                    node_count=gm.node_count,
                    edge_count=gm.edge_count,
                    diameter=gm.diameter,
                    average_clustering=gm.average_clustering,
                    average_path_length=gm.average_path_length,
                    modularity=partition.modularity,
                    significant_classes=len(
                        significant_classes(partition, config.class_threshold)
                    ),
                )
                (tracker.path(wdir / "graph_stats.txt")).write_text(
                    format_graph_stats_table([column]), encoding="utf-8"
                )
                cache.store(f"{window.label}_community", community_key)
        except Exception as exc:
            _fail("community", window.label, exc)

        # --- layout stage
        layout_key = _stage_key(
            graph_key, community_key, "layout",
            layout_params.iterations, layout_params.gravity, layout_params.scaling,
            layout_params.barnes_hut_theta, layout_params.jitter_tolerance,
            layout_params.seed,
        )
        layout_outputs = [wdir / "positions.csv", wdir / "network.gexf"]
        try:
            if not cache.fresh(f"{window.label}_layout", layout_key, layout_outputs):
                positions = forceatlas2(graph, layout_params)
                write_positions(tracker.path(wdir / "positions.csv"), positions)
                export_gexf(
                    tracker.path(wdir / "network.gexf"), graph, positions,
                    partition=partition, node_metrics=node_metrics,
                )
                cache.store(f"{window.label}_layout", layout_key)
        except Exception as exc:
            _fail("layout", window.label, exc)

        # --- econometrics stage
        model_key = _stage_key(
            metrics_key, community_key, "models", config.rank_tolerance,
            *(f"{name}:{spec}" for name, spec in config.model_specs),
        )
        model_outputs = [wdir / "observations.csv", wdir / "drops.txt"]
        for name, _ in config.model_specs:
            model_outputs += [
                wdir / f"regress_{name}.txt", wdir / f"regress_{name}.csv",
                wdir / f"diagnostics_{name}.txt",
                wdir / f"correlation_{name}.txt", wdir / f"correlation_{name}.csv",
            ]
        try:
            if not cache.fresh(f"{window.label}_models", model_key, model_outputs):
                averages = quarterly_average(market, window)
                fins = window_slice(financials, window, "quarter")
                cross = build_cross_section(averages, fins, node_metrics, partition, window)
                write_observations(tracker.path(wdir / "observations.csv"), cross)
                drop_lines = [
                    f"{reason}: {count}" for reason, count in sorted(cross.drops.items())
                ]
                drop_lines.append(f"observations retained: {len(cross.observations)}")
                (tracker.path(wdir / "drops.txt")).write_text(
                    "\n".join(drop_lines) + "\n", encoding="utf-8"
                )
                for name, spec in config.model_specs:
                    _run_one_model(wdir, tracker, name, spec, cross, config)
                cache.store(f"{window.label}_models", model_key)
        except Exception as exc:
            _fail("econometrics", window.label, exc)

        files["dir"] = wdir
        bundle.per_window[window.label] = files

    manifest = io.StringIO()
    manifest.write(f"equinet {__version__}\n")
    manifest.write(
        f"seeds: louvain={config.louvain_seed} layout={config.layout_seed} "
        f"monte_carlo={config.mc_seed}\n"
    )
    for source, skipped in sorted(skips.items()):
        if skipped:
            manifest.write(f"skipped rows ({source}): {len(skipped)}\n")
    manifest.write("config:\n")
    for line in config.raw_text.splitlines():
        manifest.write(f"  {line}\n")
    (out_root / "manifest.txt").write_text(manifest.getvalue(), encoding="utf-8")

    bundle.files = sorted(
        p.relative_to(out_root).as_posix()
        for p in out_root.rglob("*")
        if p.is_file() and ".cache" not in p.parts
    )
    return bundle


def _run_one_model(wdir, tracker, name, spec, cross, config):
    result = run_model(cross, spec, rank_tol=config.rank_tolerance)
    write_regression_csv(tracker.path(wdir / f"regress_{name}.csv"), result)

    diagnostics = {}
    if spec.instruments is not None:
        X, y, names = design_matrix(cross, spec)
        comparison_spec = ModelSpec(
            dependent=spec.dependent, regressors=spec.regressors,
            intercept=spec.intercept, se_type=spec.se_type,
        )
        ols_result = run_model(cross, comparison_spec, rank_tol=config.rank_tolerance)
        table = format_estimator_comparison(ols_result, result)
        endog, iv_fields = spec.instruments
        Z = [[float(getattr(o, f)) for f in iv_fields] for o in cross.observations]
        diagnostics["dwh"] = dwh_test(X, y, endog, Z, names=names,
                                      rank_tol=config.rank_tolerance)
    else:
        table = format_regression_table({name: result})
        diagnostics["bp_fitted"] = bp_test(result, variant="fitted")
        diagnostics["bp_regressors"] = bp_test(result, variant="regressors")
        diagnostics["reset"] = reset_test(result, variant="fitted")

    turning = None
    if "npf_d" in result.names and "npf_d_sq" in result.names:
        quad = result.coefficient("npf_d_sq")
        if quad != 0:
            turning = turning_point(result.coefficient("npf_d"), quad)

    (tracker.path(wdir / f"regress_{name}.txt")).write_text(table, encoding="utf-8")

    columns = {"y": [o.y for o in cross.observations]}
    for column in ("log_npp", "log_v", "npf_d", "trading_amount", "degree",
                   "eigenvector", "closeness", "betweenness", "eccentricity",
                   "clustering_coefficient"):
        columns[column] = [getattr(o, column) for o in cross.observations]
    columns["residual"] = list(result.residuals)
    corr_names, corr = correlation_matrix(columns)
    (tracker.path(wdir / f"correlation_{name}.txt")).write_text(
        format_correlation_table(corr_names, corr), encoding="utf-8"
    )
    with open(tracker.path(wdir / f"correlation_{name}.csv"), "w", newline="",
              encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([""] + corr_names)
        for i, corr_name in enumerate(corr_names):
            writer.writerow([corr_name] + [f"{corr[i, j]:.10g}" for j in range(len(corr_names))])

    residual_correlations = [
        (corr_name, corr[corr_names.index("residual"), i])
        for i, corr_name in enumerate(corr_names)
        if corr_name != "residual"
    ]
    (tracker.path(wdir / f"diagnostics_{name}.txt")).write_text(
        format_diagnostics(
            bp_fitted=diagnostics.get("bp_fitted"),
            bp_regressors=diagnostics.get("bp_regressors"),
            reset=diagnostics.get("reset"),
            dwh=diagnostics.get("dwh"),
            turning=turning,
            residual_correlations=residual_correlations,
        ),
        encoding="utf-8",
    )
