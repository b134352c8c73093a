"""Plot output for histogram centroids: a CSV table and a rendered figure."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def histogram_table(inputs, right, left, symmetrized):
    """Rows ``(bin, input_1..input_n, right, left, symmetrized)`` with a header row."""
    inputs = [np.asarray(h, dtype=float) for h in inputs]
    header = ["bin"] + [f"input_{i + 1}" for i in range(len(inputs))] + ["right", "left", "symmetrized"]
    rows = [header]
    for b in range(len(right)):
        rows.append([b] + [float(h[b]) for h in inputs] + [float(right[b]), float(left[b]),
                                                           float(symmetrized[b])])
    return rows


def write_table(rows, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return path


def figure_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".png")


def render_histogram_figure(rows, path, title=None) -> Path:
    """Draw inputs (thin grey) and the three centroids over the bin index."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    header, body = rows[0], np.array(rows[1:], dtype=float)
    bins = body[:, 0]
    fig, ax = plt.subplots(figsize=(7, 4))
    n_inputs = len(header) - 4
    for j in range(1, 1 + n_inputs):
        ax.plot(bins, body[:, j], color="0.6", lw=0.8, label="inputs" if j == 1 else None)
    styles = {"right": ("tab:red", "-"), "left": ("tab:blue", "-"), "symmetrized": ("tab:purple", "--")}
    for j, name in enumerate(header[-3:], start=len(header) - 3):
        color, ls = styles[name]
        ax.plot(bins, body[:, j], color=color, ls=ls, lw=1.5, label=name)
    ax.set_xlabel("bin")
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
