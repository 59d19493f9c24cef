"""SVG figures: grouped accuracy bars and per-run learning curves.

Output is byte-stable for identical inputs (fixed hash salt, no date
metadata), so figures can sit alongside the other deterministic artifacts.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "svg.hashsalt": "qlass",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
}
BASELINE_COLOR = "#4C72B0"
DQN_COLOR = "#DD8452"


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def bar_id(name: str) -> str:
    return "bar-" + "".join(ch if ch.isalnum() else "-" for ch in name)


def accuracy_bars(rows, path) -> None:
    """One bar per row; DQN runs (name contains 'DQN') drawn in a second color.

    Each bar carries an SVG id from :func:`bar_id` so tests can count them.
    """
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 1.1 * len(rows)), 3.2))
        x = np.arange(len(rows))
        colors = [DQN_COLOR if "dqn" in r.model.lower() else BASELINE_COLOR for r in rows]
        bars = ax.bar(x, [r.accuracy for r in rows], color=colors, width=0.7)
        for bar, row in zip(bars, rows):
            bar.set_gid(bar_id(row.model))
            ax.annotate(f"{row.accuracy:.2f}", (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                        ha="center", va="bottom", fontsize=7)
        ax.set_xticks(x, [r.model for r in rows], rotation=20, ha="right")
        ax.set_ylim(0, 1.08)
        ax.set_ylabel("test accuracy")
        ax.set_title("Accuracy by model")
        fig.tight_layout()
        _save(fig, path)


def learning_curve(log, path, title: str = "", baseline_accuracy: float | None = None) -> None:
    """Per-episode train accuracy with epsilon overlaid on a twin axis."""
    episodes = [r.episode for r in log.records]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.2))
        ax.plot(episodes, [r.accuracy for r in log.records], color=DQN_COLOR, marker=".", label="train accuracy")
        if baseline_accuracy is not None:
            ax.axhline(baseline_accuracy, color=BASELINE_COLOR, linestyle="--", label="baseline test accuracy")
        ax.set_xlabel("episode")
        ax.set_ylabel("accuracy")
        ax.set_ylim(0, 1.05)
        eps_ax = ax.twinx()
        eps_ax.plot(episodes, [r.epsilon for r in log.records], color="0.5", linewidth=0.8, label="epsilon")
        eps_ax.set_ylabel("epsilon")
        eps_ax.set_ylim(0, 1.05)
        eps_ax.grid(False)
        handles = ax.get_legend_handles_labels()
        extra = eps_ax.get_legend_handles_labels()
        ax.legend(handles[0] + extra[0], handles[1] + extra[1], loc="lower right", fontsize=7)
        ax.set_title(title or "Accuracy per episode")
        fig.tight_layout()
        _save(fig, path)
