"""Plain-text and delimited report tables for the pipeline bundle.

The formatters accept printed counts as well as computed objects, so the
same code renders both fixture runs and published figures.  Layout mirrors
the usual journal tables: network censuses, whole-graph statistics,
coefficient columns with standard errors beneath in parentheses, and
significance stars at the 1/5/10 percent levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "stars",
    "format_number",
    "ConnectionRow",
    "format_connection_table",
    "StatColumn",
    "format_graph_stats_table",
    "format_census_table",
    "format_regression_table",
    "format_estimator_comparison",
    "format_correlation_table",
    "format_diagnostics",
]


def stars(p_value: float) -> str:
    """Significance stars: *** p<.01, ** p<.05, * p<.1."""
    if p_value < 0.01:
        return "***"
    if p_value < 0.05:
        return "**"
    if p_value < 0.1:
        return "*"
    return ""


def format_number(value, sig=6) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return "."
    if isinstance(value, (int,)) or (isinstance(value, float) and value.is_integer() and abs(value) < 1e15):
        return str(int(value))
    return f"{value:.{sig}g}"


def _table(rows, header=None) -> str:
    """Align columns on width; first column left, the rest right."""
    all_rows = ([header] if header else []) + [list(map(str, r)) for r in rows]
    widths = [max(len(r[i]) for r in all_rows) for i in range(len(all_rows[0]))]
    lines = []
    for r in all_rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    if header:
        lines.insert(1, "-" * max(len(line) for line in lines))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class ConnectionRow:
    label: str
    type1: int
    type2: int
    type3: int

    @property
    def total(self) -> int:
        return self.type1 + self.type2 + self.type3


def format_connection_table(rows) -> str:
    """Connections census: the total column is always the row sum."""
    body = [
        [r.label, str(r.total), str(r.type1), str(r.type2), str(r.type3)]
        for r in rows
    ]
    return _table(body, header=["Group", "Total connections", "Type 1", "Type 2", "Type 3"])


@dataclass(frozen=True, slots=True)
class StatColumn:
    """One graph-statistics column; feed printed counts or computed values."""

    label: str
    node_count: int
    edge_count: int
    diameter: int | None = None
    average_clustering: float | None = None
    average_path_length: float | None = None
    modularity: float | None = None
    significant_classes: int | None = None

    @property
    def average_degree(self) -> float:
        return self.edge_count / self.node_count


def format_graph_stats_table(columns) -> str:
    """Whole-graph statistics; average degree is edge count / node count."""
    def fmt3(v):
        return "" if v is None else f"{v:.3f}"

    names = [c.label for c in columns]
    rows = [
        ["Node"] + [str(c.node_count) for c in columns],
        ["Edge"] + [str(c.edge_count) for c in columns],
        ["Average degree"] + [f"{c.average_degree:.3f}" for c in columns],
        ["Network diameter"] + ["" if c.diameter is None else str(c.diameter) for c in columns],
        ["Average clustering coefficient"] + [fmt3(c.average_clustering) for c in columns],
        ["Average path length"] + [fmt3(c.average_path_length) for c in columns],
        ["Modularity coefficient"] + [fmt3(c.modularity) for c in columns],
        ["Modularity class (>5%)"]
        + ["" if c.significant_classes is None else str(c.significant_classes) for c in columns],
        ["Algorithm"] + ["ForceAtlas2" for _ in columns],
    ]
    return _table(rows, header=[""] + names)


def format_census_table(census, label="") -> str:
    """Share of nodes per modularity class, percentages to 2 d.p."""
    rows = [[str(r.class_index), str(r.count), f"{r.percent:.2f}"] for r in census]
    header = ["Modularity class", "Nodes", f"% of total{(' ' + label) if label else ''}"]
    return _table(rows, header=header)


def _coefficient_cell(result, name):
    if result is None or name not in result.names:
        return "", ""
    i = result.names.index(name)
    coef = f"{result.coefficients[i]:.6g}{stars(float(result.p_values[i]))}"
    se = f"({result.standard_errors[i]:.6g})"
    return coef, se


def format_regression_table(results: dict, regressor_order=None) -> str:
    """Coefficient table with one column per model result.

    ``results`` maps column labels to ModelResult objects; rows follow
    ``regressor_order`` (defaults to the union of names in first-seen
    order, dummies last, intercept right before them).
    """
    labels = list(results)
    if regressor_order is None:
        seen = []
        for r in results.values():
            for name in r.names:
                if name not in seen:
                    seen.append(name)
        plain = [n for n in seen if n != "const" and not n.startswith("dummy_")]
        dummies = sorted(
            (n for n in seen if n.startswith("dummy_")),
            key=lambda n: int(n.split("_", 1)[1]),
        )
        regressor_order = plain + (["const"] if "const" in seen else []) + dummies
    rows = []
    dummy_header_done = False
    for name in regressor_order:
        if name.startswith("dummy_") and not dummy_header_done:
            rows.append(["Modularity class"] + ["" for _ in labels])
            dummy_header_done = True
        coef_cells = []
        se_cells = []
        for label in labels:
            coef, se = _coefficient_cell(results[label], name)
            coef_cells.append(coef)
            se_cells.append(se)
        display = name.split("_", 1)[1] if name.startswith("dummy_") else name
        rows.append([display] + coef_cells)
        rows.append([""] + se_cells)
    rows.append(["R-Square"] + [f"{results[l].r_squared:.4f}" for l in labels])
    f_cells = []
    for label in labels:
        r = results[label]
        if r.wald_chi2 is not None:
            f_cells.append(f"Wald chi2({r.wald_dof}) = {r.wald_chi2:.4g}")
        elif r.f_stat is not None:
            f_cells.append(f"F({r.f_dof[0]}, {r.f_dof[1]}) = {r.f_stat:.4g}")
        else:
            f_cells.append("")
    rows.append(["F-value"] + f_cells)
    rows.append(["Sample size"] + [str(results[l].n) for l in labels])
    table = _table(rows, header=[""] + labels)
    return table + "Standard errors in parentheses. *** p<.01, ** p<.05, * p<.1\n"


def format_estimator_comparison(ols_result, tsls_result) -> str:
    """Side-by-side OLS vs 2SLS columns with first-stage and Wald lines."""
    text = format_regression_table({"OLS": ols_result, "2SLS": tsls_result})
    lines = [text.rstrip("\n")]
    if tsls_result.first_stage_r2 is not None:
        lines.append(f"First-stage R-Square: {tsls_result.first_stage_r2:.4f}")
    if tsls_result.first_stage_f is not None:
        d1, d2 = tsls_result.first_stage_f_dof
        lines.append(
            f"First-stage partial F({d1}, {d2}) = {tsls_result.first_stage_f:.4g}"
        )
    return "\n".join(lines) + "\n"


def format_correlation_table(names, matrix) -> str:
    """Lower-triangle pairwise correlation layout."""
    rows = []
    for i, name in enumerate(names):
        cells = []
        for j in range(len(names)):
            if j > i:
                cells.append("")
            else:
                v = matrix[i][j] if not hasattr(matrix, "shape") else matrix[i, j]
                cells.append("." if isinstance(v, float) and math.isnan(v) else f"{v:.4f}")
        rows.append([name] + cells)
    return _table(rows, header=[""] + list(names))


def format_diagnostics(bp_fitted=None, bp_regressors=None, reset=None, dwh=None,
                       turning=None, residual_correlations=None) -> str:
    """One line per diagnostic, mirroring the published reporting style."""
    lines = []
    if bp_fitted is not None:
        lines.append(
            f"BP test on fitted values: chi2({bp_fitted.dof[0]}) = "
            f"{bp_fitted.statistic:.4g} (p = {bp_fitted.p_value:.4f})"
        )
    if bp_regressors is not None:
        lines.append(
            f"BP test on regressors: chi2({bp_regressors.dof[0]}) = "
            f"{bp_regressors.statistic:.4g} (p = {bp_regressors.p_value:.4f})"
        )
    if reset is not None:
        lines.append(
            f"RESET test: F({reset.dof[0]}, {reset.dof[1]}) = "
            f"{reset.statistic:.4g} (p = {reset.p_value:.4f})"
        )
    if dwh is not None:
        lines.append(
            f"DWH robust score chi2({dwh.score_dof}) = {dwh.score_chi2:.4f} "
            f"(p = {dwh.score_p:.4f})"
        )
        lines.append(
            f"DWH robust regression F({dwh.f_dof[0]}, {dwh.f_dof[1]}) = "
            f"{dwh.f_stat:.4f} (p = {dwh.f_p:.4f})"
        )
    if turning is not None:
        lines.append(f"Quadratic turning point: {turning:.3f}")
    if residual_correlations:
        for name, value in residual_correlations:
            lines.append(f"corr(residual, {name}) = {value:.4f}")
    return "\n".join(lines) + "\n"
