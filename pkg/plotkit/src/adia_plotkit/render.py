"""Read v1 sweep CSVs and render error vs run-time figures.

Rendering is read-only over its inputs and deterministic: the same
spec and CSVs produce byte-identical image files.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import SchemaMismatch
from .spec import FigureSpec, PanelSpec

CSV_VERSION_LINE = "# adia-tradeoff csv v1"
EXPECTED_COLUMNS = [
    "N", "schedule", "p", "C", "T", "eps_numeric", "eps_leading", "eps_upper",
    "eps_lower", "T_val", "eps_tilde", "jansen", "roland_T", "flags",
]

# column(s) each curve needs, and how it is drawn
CURVE_COLUMNS = {
    "numeric": ("T", "eps_numeric"),
    "leading": ("T", "eps_leading"),
    "upper": ("T", "eps_upper"),
    "lower": ("T", "eps_lower"),
    "jansen": ("T", "jansen"),
    "roland": ("roland_T", "eps_upper"),
}
CURVE_STYLE = {
    "numeric": dict(color="black", linestyle="-", linewidth=1.2),
    "leading": dict(color="0.6", linestyle="-", linewidth=1.0),
    "upper": dict(color="black", linestyle="--", linewidth=1.0),
    "lower": dict(color="0.4", linestyle=":", linewidth=1.0),
    "jansen": dict(color="tab:red", linestyle="-.", linewidth=1.0),
    "roland": dict(color="tab:green", linestyle="-.", linewidth=1.0),
}


@dataclass(frozen=True)
class SweepData:
    rows: tuple
    columns: tuple

    def numbers(self, column: str, where=None) -> list:
        out = []
        for row in self.rows:
            if where is not None and not where(row):
                continue
            cell = row[column]
            out.append(float(cell) if cell != "" else float("nan"))
        return out


def read_sweep_csv(path: str) -> SweepData:
    """Parse one v1 sweep CSV; raises SchemaMismatch with a column diff."""
    try:
        with open(path, newline="") as fh:
            first = fh.readline().rstrip("\n")
            if first != CSV_VERSION_LINE:
                raise SchemaMismatch(
                    f"{path}: expected version line {CSV_VERSION_LINE!r}, got {first!r}"
                )
            reader = csv.DictReader(fh)
            columns = list(reader.fieldnames or [])
            if columns != EXPECTED_COLUMNS:
                missing = [c for c in EXPECTED_COLUMNS if c not in columns]
                extra = [c for c in columns if c not in EXPECTED_COLUMNS]
                raise SchemaMismatch(
                    f"{path}: header mismatch (missing {missing}, unexpected {extra})"
                )
            rows = tuple(reader)
    except OSError as exc:
        raise SchemaMismatch(f"cannot read {path!r}: {exc}") from None
    if not rows:
        raise SchemaMismatch(f"{path}: no data rows")
    return SweepData(rows=rows, columns=tuple(columns))


def _legend_label(data: SweepData, curve: str) -> str:
    row = data.rows[0]
    tag = row["schedule"]
    if row["p"] not in ("", "0"):
        tag += f" p={row['p']}"
    names = {
        "numeric": "numeric",
        "leading": "leading order",
        "upper": "upper bound",
        "lower": "lower bound",
        "jansen": "general bound (literature)",
        "roland": "local-condition time (literature)",
    }
    return f"{names[curve]}, {tag} N={row['N']}"


def _draw_panel(ax, panel: PanelSpec, scale: str) -> None:
    data = read_sweep_csv(panel.csv_path)
    clamp = panel.clamp_oscillating_above
    positive_only = scale in ("loglog", "semilogy")
    for curve in panel.selection.curves:
        x_col, y_col = CURVE_COLUMNS[curve]
        where = None
        if clamp is not None and curve in ("numeric", "leading"):
            where = lambda row: float(row["T"]) <= clamp  # noqa: E731
        xs = data.numbers(x_col, where)
        ys = data.numbers(y_col, where)
        pairs = [
            (x, y)
            for x, y in zip(xs, ys)
            if x == x and y == y and not (positive_only and y <= 0.0)
        ]
        if not pairs:
            continue
        pairs.sort()
        ax.plot(*zip(*pairs), label=_legend_label(data, curve), **CURVE_STYLE[curve])
    if "T_val" in panel.selection.markers:
        ax.axvline(float(data.rows[0]["T_val"]), color="0.3", linewidth=0.8, linestyle=":")
    if "eps_tilde" in panel.selection.markers:
        ax.axhline(float(data.rows[0]["eps_tilde"]), color="0.3", linewidth=0.8, linestyle=":")
    if scale == "loglog":
        ax.set_xscale("log")
        ax.set_yscale("log")
    elif scale == "semilogx":
        ax.set_xscale("log")
    elif scale == "semilogy":
        ax.set_yscale("log")
    ax.set_xlabel("run time T")
    ax.set_ylabel("error")
    if panel.title:
        ax.set_title(panel.title)
    ax.legend(fontsize=7)


def render(spec: FigureSpec) -> list:
    """Render the figure; returns the list of files written."""
    n_panels = len(spec.panels)
    fig, axes = plt.subplots(
        1, n_panels, figsize=(5.0 * n_panels, 3.8), squeeze=False
    )
    for ax, panel in zip(axes[0], spec.panels):
        _draw_panel(ax, panel, spec.scale)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    written = []
    for path in spec.outputs:
        fig.savefig(path, dpi=150, metadata=_strip_metadata(path))
        written.append(path)
    plt.close(fig)
    return written


def _strip_metadata(path: str):
    # keep output byte-identical across re-renders
    if path.endswith(".svg"):
        return {"Date": None}
    if path.endswith(".pdf"):
        return {"CreationDate": None}
    if path.endswith(".png"):
        return {"Software": None}
    return None
