"""Figure rendering for evaluation reports.

Every delimited report (sweep CSV, ablation CSV) gets a PNG rendered next
to it. Uses the Agg backend so headless runs work.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def render_sweep(rows: list[dict], out_png: str | Path) -> Path:
    """Accuracy (left axis) and per-variable time (right axis) over the
    swept parameter values."""
    out = Path(out_png)
    values = [row["value"] for row in rows]
    accuracy = [row["accuracy"] for row in rows]
    times = [row["per_var_ms"] for row in rows]
    parameter = rows[0]["parameter"] if rows else "value"

    fig, ax = plt.subplots(figsize=(6, 3.6))
    ax.plot(values, accuracy, marker="o", color="tab:blue", label="accuracy")
    ax.set_xlabel(parameter)
    ax.set_ylabel("accuracy", color="tab:blue")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)

    twin = ax.twinx()
    twin.plot(values, times, marker="s", linestyle="--", color="tab:red",
              label="ms/variable")
    twin.set_ylabel("ms per variable", color="tab:red")

    fig.suptitle(f"sensitivity: {parameter}")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def render_ablation(rows: list[dict], out_png: str | Path) -> Path:
    """Accuracy per context combination as a horizontal bar chart."""
    out = Path(out_png)
    labels = [row["contexts"] for row in rows]
    accuracy = [row["accuracy"] for row in rows]

    fig, ax = plt.subplots(figsize=(6, 3.2))
    bars = ax.barh(labels, accuracy, color="tab:blue")
    ax.set_xlim(0.0, 1.0)
    ax.set_xlabel("accuracy")
    ax.bar_label(bars, fmt="%.3f", padding=3)
    ax.invert_yaxis()
    fig.suptitle("context combinations")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
