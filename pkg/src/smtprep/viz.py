"""Matplotlib figure rendering for report outputs.

Figures are written as PNG with pinned metadata so repeated runs produce
byte-identical files (the pipeline's determinism contract covers them).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bleu import BleuReport  # noqa: E402

_PNG_METADATA = {"Software": "smtprep"}


def _save(fig, path):
    fig.savefig(path, format="png", metadata=_PNG_METADATA)
    plt.close(fig)


def _bleu_axes(ax, report: BleuReport):
    labels = [f"p{n}" for n in range(1, len(report.precisions) + 1)] + ["BP", "BLEU"]
    values = [100.0 * p for p in report.precisions] + [
        100.0 * report.brevity_penalty, 100.0 * report.score,
    ]
    colors = ["#4878a8"] * len(report.precisions) + ["#b0a160", "#a85454"]
    ax.bar(labels, values, color=colors)
    ax.set_ylim(0, 105)
    ax.set_ylabel("percent")
    ax.set_title(f"BLEU = {100.0 * report.score:.2f}")


def render_bleu_figure(path, report: BleuReport):
    fig, ax = plt.subplots(figsize=(5, 3.5), constrained_layout=True)
    _bleu_axes(ax, report)
    _save(fig, path)


def render_report_figure(path, *, bleu: BleuReport | None,
                         crossing_before: float | None,
                         crossing_after: float | None,
                         counts: list[tuple[str, int]]):
    """One figure for a pipeline run: BLEU bars, reordering quality, stage counts."""
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.8), constrained_layout=True)

    if bleu is not None:
        _bleu_axes(axes[0], bleu)
    else:
        axes[0].set_axis_off()
        axes[0].set_title("no BLEU input")

    ax = axes[1]
    if crossing_before is not None and crossing_after is not None:
        ax.bar(["before", "after"], [crossing_before, crossing_after],
               color=["#a85454", "#548a54"])
        ax.set_ylabel("mean crossing score")
        ax.set_title("alignment crossings vs. reordering")
    else:
        ax.set_axis_off()

    ax = axes[2]
    if counts:
        names = [name for name, _ in counts]
        values = [value for _, value in counts]
        ax.barh(range(len(names)), values, color="#4878a8")
        ax.set_yticks(range(len(names)))
        ax.set_yticklabels(names)
        ax.invert_yaxis()
        ax.set_title("stage counts")
    else:
        ax.set_axis_off()

    _save(fig, path)
