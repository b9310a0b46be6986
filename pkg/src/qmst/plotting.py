"""Matplotlib rendering of convergence curves and basis-state distributions."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

MST_COLOR = "#2a9d34"
OTHER_COLOR = "#6d7aa8"


def save_convergence_plot(path, series, *, e_min: float | None = None) -> None:
    """Overlay energy-per-layer curves; series is (label, layers, energies)."""
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    for label, layers, energies in series:
        ax.plot(layers, energies, linewidth=1.4, label=label)
    if e_min is not None:
        ax.axhline(e_min, color="black", linestyle="--", linewidth=0.9, label="ground energy")
    ax.set_xlabel("layer")
    ax.set_ylabel("energy expectation")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_distribution_plot(path, rows, *, title: str = "") -> None:
    """Bar chart of the most probable bitstrings; tree decodings highlighted."""
    fig, ax = plt.subplots(figsize=(max(6.0, 0.45 * len(rows)), 4.2))
    xs = range(len(rows))
    colors = [MST_COLOR if r.decodes_to_mst else OTHER_COLOR for r in rows]
    ax.bar(xs, [r.probability for r in rows], color=colors)
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r.bitstring for r in rows], rotation=90, fontsize=7, family="monospace")
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title)
    if any(r.decodes_to_mst for r in rows):
        ax.bar([], [], color=MST_COLOR, label="decodes to MST")
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
