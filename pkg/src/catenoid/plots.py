"""Figure rendering for deviation reports.

Each report becomes one PNG next to its data file: scaled error against
dimension on a log axis, one series per (quantity, scaling) pair.  Figures
are a convenience view of the emitted rows; the delimited files remain the
authoritative output.
"""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from catenoid.asymptotics import DeviationReport


def render_report_figure(report: DeviationReport, path) -> None:
    """Render one deviation report to ``path`` (format from the suffix)."""
    series = defaultdict(list)
    for row in report.rows:
        series[(row.quantity, row.scaling)].append((row.n, row.scaled_error))

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for (quantity, scaling), points in sorted(series.items()):
        points.sort()
        ns = [p[0] for p in points]
        errs = [p[1] for p in points]
        ax.plot(ns, errs, marker="o", markersize=3.5, linewidth=1.0,
                label=f"{quantity}: {scaling}")
    ax.set_xscale("log")
    ax.axhline(0.0, color="0.6", linewidth=0.7)
    ax.set_xlabel("dimension n")
    ax.set_ylabel("scaled error")
    ax.set_title(f"deviation report: {report.kind}")
    ax.legend(fontsize=8, loc="best")
    ax.grid(True, which="both", alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
