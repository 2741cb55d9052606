"""Tables, CSV emission and matplotlib rendering."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__

FLOAT_FMT = "{:.12g}"


@dataclass
class Table:
    """Named columns plus '#' metadata lines; ``x`` names the abscissa column."""

    name: str
    columns: list
    data: np.ndarray
    meta: list = field(default_factory=list)
    x: str = "tau"
    title: str = ""

    def column(self, name):
        return self.data[:, self.columns.index(name)]


def series_table(name, series, meta=(), title=""):
    cols = ["tau", "value_re"]
    arrays = [series.tau, np.real(series.values)]
    if series.is_complex:
        cols.append("value_im")
        arrays.append(np.imag(series.values))
    return Table(name, cols, np.column_stack(arrays), list(meta), "tau", title)


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT.format(float(v))
    return str(v)


def csv_text(table):
    buf = io.StringIO()
    buf.write(f"# tcfield {__version__}\n")
    for key, val in table.meta:
        buf.write(f"# {key}: {_fmt(val)}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.data:
        buf.write(",".join(FLOAT_FMT.format(float(v)) for v in row) + "\n")
    return buf.getvalue()


def write_csv(table, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_text(table))


def render(tables, path, title=""):
    """Draw one panel per table and save to ``path`` (format from the extension)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    n = len(tables)
    ncols = 1 if n == 1 else 2
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.5 * ncols, 3.4 * nrows), squeeze=False)
    for ax, tab in zip(axes.ravel(), tables):
        xs = tab.column(tab.x)
        for col in tab.columns:
            if col == tab.x:
                continue
            style = "--" if col.endswith("_im") or col == "afa" else "-"
            ax.plot(xs, tab.column(col), style, lw=0.8, label=col)
        ax.set_xlabel(r"$\tau$" if tab.x == "tau" else tab.x)
        ax.set_title(tab.title or tab.name, fontsize=9)
        if len(tab.columns) > 2:
            ax.legend(fontsize=7, loc="best")
    for ax in axes.ravel()[n:]:
        ax.set_visible(False)
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
