"""Matplotlib rendering of sweep and rejection-curve reports.

Figures are drawn from already-serialized report rows, so plotting never
changes the numbers that went into the CSV. The output format follows the
file extension (.svg, .png, .pdf); SVG is the conventional choice here.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .entropy import SweepReport
from .maskfilter import RejectionCurve


def plot_sweep(report: SweepReport, path: str) -> None:
    """One information-content curve per window length, over the start bit."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    lengths = sorted({row.window_len for row in report.rows})
    for m in lengths:
        series = [(row.start_bit, row.info_bits) for row in report.rows if row.window_len == m]
        ax.plot([s for s, _ in series], [v for _, v in series],
                marker=".", markersize=3, linewidth=1, label=f"m={m}")
    ax.set_xlabel("Window start bit")
    ax.set_ylabel("Information (bits)")
    ax.set_title(f"Information in {report.scheme} bit windows")
    ax.legend(fontsize=8, ncol=2)
    ax.grid(True, linewidth=0.3, alpha=0.5)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def plot_rejection_curve(curve: RejectionCurve, path: str) -> None:
    """One rejection-rate curve per mask size, over the wanted-address count."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    sizes = sorted({row.mask_size for row in curve.rows})
    for size in sizes:
        series = [(row.wanted_count, row.rate) for row in curve.rows if row.mask_size == size]
        ax.plot([k for k, _ in series], [r for _, r in series],
                linewidth=1, label=f"M={size}")
    ax.set_xlabel("Wanted addresses")
    ax.set_ylabel("Unwanted-rejection rate")
    ax.set_ylim(0.0, 1.02)
    ax.set_title(f"Rejection rate by mask size ({curve.model} model)")
    ax.legend(fontsize=8, ncol=2)
    ax.grid(True, linewidth=0.3, alpha=0.5)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
