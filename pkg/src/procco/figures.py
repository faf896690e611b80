"""Chart rendering for the report paths.

Renders small summary figures next to the delimited output when the CLI is
given ``--figures``: entity/edge counts for ``stats`` and findings per code
for ``validate``/``lint``. Files are written into the given directory,
which is created if needed.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .graph import InstanceGraph  # noqa: E402
from .validator import ValidationReport  # noqa: E402


def _bar_chart(counts: dict[str, int], title: str, path: Path) -> Path:
    labels = sorted(counts)
    values = [counts[k] for k in labels]
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(labels) + 2), 3.2))
    if labels:
        ax.bar(range(len(labels)), values, color="#4878a8")
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    else:
        ax.text(0.5, 0.5, "empty", ha="center", va="center", transform=ax.transAxes)
    ax.set_title(title)
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_stats_figures(graph: InstanceGraph, out_dir: str | Path,
                       stem: str = "stats") -> list[Path]:
    """Write entity-per-kind and edge-per-relationship bar charts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entity_counts = Counter(e.kind for e in graph.entities.values())
    edge_counts = Counter(e.rel for e in graph.relations)
    edge_counts.update(e.flavor for e in graph.composition)
    return [
        _bar_chart(dict(entity_counts), "entities per kind", out / f"{stem}_entities.png"),
        _bar_chart(dict(edge_counts), "edges per relationship", out / f"{stem}_edges.png"),
    ]


def save_findings_figure(report: ValidationReport, out_dir: str | Path,
                         stem: str = "findings") -> Path:
    """Write a findings-per-code bar chart for a validation report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _bar_chart(dict(report.counts), f"findings per code ({report.mode.value})",
                      out / f"{stem}.png")
