"""Render the figure families from the CLI's CSV outputs.

Each figure id maps to a required-column schema; a CSV that is empty or is
missing columns fails loudly with a diagnostic listing what was expected.
Rendering is pure: identical CSV input produces identical SVG/PNG output
(fixed style, no timestamps embedded).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "spinclone"

import matplotlib.pyplot as plt  # noqa: E402

REQUIRED_COLUMNS = {
    "fig2": ("theta", "F_xy", "F_heisenberg"),
    "fig3": ("M", "F_xy", "F_heisenberg", "F_pcc"),
    "fig4": ("epsilon", "mu", "mean_F", "stderr"),
    "fig6": ("delta", "target", "mean_F", "stderr"),
    "fig7": ("alpha", "M", "F_network", "F_gates"),
    "fig8": ("alpha", "M", "F_network", "F_gates"),
    "fig12": ("ratio", "F_max"),
}


class SchemaError(ValueError):
    """CSV does not carry the columns the figure needs."""


@dataclass(frozen=True)
class FigureJob:
    """One rendering task: figure id, input CSVs, output image stem."""

    figure: str
    csv_paths: tuple[str, ...]
    out_stem: str
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure not in REQUIRED_COLUMNS:
            raise SchemaError(f"unknown figure id {self.figure!r}")
        if not self.csv_paths:
            raise SchemaError("at least one CSV path is required")


def load_table(path: str, required: tuple[str, ...]) -> dict[str, list]:
    """Read a CSV into per-column lists, checking the schema first."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file (no header row)")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise SchemaError(
                f"{path}: missing columns {missing}; "
                f"found {reader.fieldnames}, figure needs {list(required)}"
            )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    out: dict[str, list] = {c: [] for c in reader.fieldnames}
    for row in rows:
        for c in reader.fieldnames:
            value = row[c]
            try:
                out[c].append(float(value))
            except (TypeError, ValueError):
                out[c].append(value)
    return out


def _group(table: dict[str, list], key: str) -> dict:
    groups: dict = {}
    for i, value in enumerate(table[key]):
        groups.setdefault(value, []).append(i)
    return groups


def _pick(table, column, idx):
    return [table[column][i] for i in idx]


def _draw_fig2(ax, table):
    ax.plot(table["theta"], table["F_xy"], "-", color="C0", label="XY")
    ax.plot(table["theta"], table["F_heisenberg"], "--", color="C1",
            label="Heisenberg")
    ax.set_xlabel(r"$\vartheta$")
    ax.set_ylabel("F")


def _draw_fig3(ax, table):
    ax.plot(table["M"], table["F_pcc"], "o", mfc="none", color="C2",
            label="optimal bound")
    ax.plot(table["M"], table["F_xy"], "D", color="C0", label="XY")
    ax.plot(table["M"], table["F_heisenberg"], "^", color="C1",
            label="Heisenberg")
    ax.set_xlabel("M")
    ax.set_ylabel("F")


def _draw_fig4(ax, table):
    for mu, idx in sorted(_group(table, "mu").items()):
        ax.errorbar(_pick(table, "epsilon", idx), _pick(table, "mean_F", idx),
                    yerr=_pick(table, "stderr", idx), marker="o",
                    label=rf"$\mu$ = {mu:g}")
    ax.set_xlabel(r"$\varepsilon$")
    ax.set_ylabel("mean F")


def _draw_fig6(ax, table):
    styles = {"J": "-", "B": "--"}
    for target, idx in sorted(_group(table, "target").items()):
        order = sorted(idx, key=lambda i: table["delta"][i])
        ax.errorbar(_pick(table, "delta", order), _pick(table, "mean_F", order),
                    yerr=_pick(table, "stderr", order),
                    linestyle=styles.get(target, "-"),
                    label=f"fluctuating {target}")
    ax.set_xlabel(r"$\Delta$")
    ax.set_ylabel("mean F")


def _draw_redfield(ax, table, m_value):
    groups = _group(table, "M")
    if m_value not in groups:
        raise SchemaError(
            f"no rows with M = {m_value:g}; present: {sorted(groups)}")
    idx = sorted(groups[m_value], key=lambda i: table["alpha"][i])
    ax.semilogx(_pick(table, "alpha", idx), _pick(table, "F_network", idx),
                "o-", label="network")
    ax.semilogx(_pick(table, "alpha", idx), _pick(table, "F_gates", idx),
                "s--", label="gates")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("F")
    ax.set_title(f"M = {m_value:g}")


def _draw_fig12(ax, table):
    order = sorted(range(len(table["ratio"])), key=lambda i: table["ratio"][i])
    ax.plot(_pick(table, "ratio", order), _pick(table, "F_max", order), "o-")
    ax.set_xlabel(r"$E_K / J_K$")
    ax.set_ylabel(r"$F_{max}$")


def render(job: FigureJob) -> list[str]:
    """Render one figure job; returns the written image paths."""
    required = REQUIRED_COLUMNS[job.figure]
    table = load_table(job.csv_paths[0], required)
    for extra in job.csv_paths[1:]:
        more = load_table(extra, required)
        for c in table:
            if c in more:
                table[c].extend(more[c])
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    if job.figure == "fig2":
        _draw_fig2(ax, table)
    elif job.figure == "fig3":
        _draw_fig3(ax, table)
    elif job.figure == "fig4":
        _draw_fig4(ax, table)
    elif job.figure == "fig6":
        _draw_fig6(ax, table)
    elif job.figure == "fig7":
        _draw_redfield(ax, table, 2.0)
    elif job.figure == "fig8":
        _draw_redfield(ax, table, 3.0)
    elif job.figure == "fig12":
        _draw_fig12(ax, table)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    written = []
    for ext in ("svg", "png"):
        path = f"{job.out_stem}.{ext}"
        fig.savefig(path, metadata=_clean_metadata(ext), dpi=150)
        written.append(path)
    plt.close(fig)
    return written


def _clean_metadata(ext: str):
    # strip creation dates so reruns are byte-identical
    if ext == "svg":
        return {"Date": None}
    if ext == "png":
        return {"Software": None}
    return None
