"""Figures rendered next to report files.

Everything goes through the Agg backend so runs are headless-safe, and
every figure is a pure function of the outcome it draws.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _save(fig, outdir: str, name: str) -> str:
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return name


def detection_figure(outcome, outdir: str) -> list[str]:
    """Coset-graph and language growth across detection stages."""
    stats = list(outcome.stats)
    if not stats:
        return []
    stages = [st.stage for st in stats]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(stages, [st.graph_vertices for st in stats], marker="o", label="coset vertices")
    ax.plot(stages, [st.language_states for st in stats], marker="s", label="candidate states")
    ax.plot(stages, [st.stable_count for st in stats], marker="^", label="stable multipliers")
    ax.set_xlabel("stage")
    ax.set_ylabel("count")
    ax.set_title("detection progress" + (" (found)" if outcome.found else " (exhausted)"))
    ax.legend()
    ax.grid(True, alpha=0.3)
    return [_save(fig, outdir, "stages.png")]


def qc_figure(outcome, outdir: str) -> list[str]:
    """Words scanned per verification round, or the constant trace."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if outcome.halted:
        bounds = [b for b, _ in outcome.words_checked]
        counts = [c for _, c in outcome.words_checked]
        ax.bar(range(len(counts)), counts, color="#4878a8")
        ax.set_xticks(range(len(counts)))
        ax.set_xticklabels(["<=%d" % b for b in bounds])
        ax.set_xlabel("word length bound per round")
        ax.set_ylabel("geodesic words scanned")
        ax.set_title("certified at stage %d" % outcome.stage)
    else:
        trace = [float(f) for f in outcome.lam_trace]
        ax.plot(range(1, len(trace) + 1), trace, marker="o")
        ax.set_xlabel("stage")
        ax.set_ylabel("quasigeodesity constant")
        ax.set_title("exhausted: %s" % outcome.reason)
    ax.grid(True, alpha=0.3)
    return [_save(fig, outdir, "quasigeodesity.png")]


def tc_figure(counts: list[int], complete: bool, outdir: str) -> list[str]:
    """Live coset counts as enumeration proceeds."""
    if not counts:
        return []
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(1, len(counts) + 1), counts, marker="o")
    ax.set_xlabel("stage")
    ax.set_ylabel("live cosets")
    ax.set_title("coset enumeration" + (" (complete)" if complete else " (capped)"))
    ax.grid(True, alpha=0.3)
    return [_save(fig, outdir, "cosets.png")]
