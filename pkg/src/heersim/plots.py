"""Figure rendering for run and comparison reports.

Renders the alive-node and throughput curves to PNG files next to the CSV
output. Uses the Agg backend so runs work headless.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_run_figures(result, outdir):
    """Alive-node and cumulative-throughput curves for a single run."""
    rounds = [m.round for m in result.per_round]
    alive = [m.alive_count for m in result.per_round]
    to_ch = np.cumsum([m.packets_to_ch for m in result.per_round])
    to_bs = np.cumsum([m.packets_to_bs for m in result.per_round])
    label = result.config.protocol.value

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(rounds, alive, lw=1.2)
    ax.set_xlabel("round")
    ax.set_ylabel("alive nodes")
    ax.set_title(f"Alive nodes per round ({label})")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    alive_path = outdir / "alive_nodes.png"
    fig.savefig(alive_path, dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(rounds, to_ch, lw=1.2, label="packets to CH")
    ax.plot(rounds, to_bs, lw=1.2, label="packets to BS")
    ax.set_xlabel("round")
    ax.set_ylabel("cumulative packets")
    ax.set_title(f"Throughput ({label})")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    tp_path = outdir / "throughput.png"
    fig.savefig(tp_path, dpi=120)
    plt.close(fig)
    return [alive_path, tp_path]


def save_comparison_figures(stats, outdir):
    """Per-protocol alive curves (first seed) and summary bars for a batch."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for entry in stats:
        first = entry.runs[0]
        rounds = [m.round for m in first.per_round]
        alive = [m.alive_count for m in first.per_round]
        ax.plot(rounds, alive, lw=1.2, label=entry.config.protocol.value)
    ax.set_xlabel("round")
    ax.set_ylabel("alive nodes")
    ax.set_title("Alive nodes per round (first seed)")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    alive_path = outdir / "comparison_alive.png"
    fig.savefig(alive_path, dpi=120)
    plt.close(fig)

    labels = [entry.config.protocol.value for entry in stats]
    x = np.arange(len(labels))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar(x - 0.2, [e.stability_mean for e in stats], width=0.4,
           yerr=[e.stability_sd for e in stats], capsize=3, label="stability")
    ax.bar(x + 0.2, [e.lifetime_mean for e in stats], width=0.4,
           yerr=[e.lifetime_sd for e in stats], capsize=3, label="lifetime")
    ax.set_xticks(x, labels)
    ax.set_ylabel("rounds")
    ax.set_title("Stability period and network lifetime (mean over seeds)")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    bars_path = outdir / "comparison_summary.png"
    fig.savefig(bars_path, dpi=120)
    plt.close(fig)
    return [alive_path, bars_path]
