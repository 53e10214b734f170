"""File-based report rendering for mined patterns.

Writes the graph view and a score chart as PNG files next to tab-separated
tables of the ranked edges and the supporting documents, so a query result
can be reviewed or shared without running the web client.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .pattern import DocumentRecord, NarrativePattern
from .vocabulary import TYPE_COLORS

LAYOUT_SEED = 7


def render_pattern_figure(pattern: NarrativePattern, out_path: str | Path) -> Path:
    """Draw the pattern graph: searched entities as squares with larger
    labels, neighbors as circles, fills from the shared type color table.
    The layout seed is fixed so re-rendering reproduces the same image."""
    out_path = Path(out_path)
    graph = nx.Graph()
    for node in pattern.nodes:
        graph.add_node(node.entity_id, info=node)
    for es in pattern.edges:
        graph.add_edge(es.edge.subject_id, es.edge.object_id, weight=es.fscore)

    fig, ax = plt.subplots(figsize=(9, 7))
    if graph.number_of_nodes() == 0:
        ax.text(0.5, 0.5, "empty pattern", ha="center", va="center")
        ax.set_axis_off()
        fig.savefig(out_path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        return out_path

    pos = nx.spring_layout(graph, seed=LAYOUT_SEED)
    searched = [n for n in graph if graph.nodes[n]["info"].is_searched]
    others = [n for n in graph if not graph.nodes[n]["info"].is_searched]

    def fills(nodes):
        return [TYPE_COLORS[graph.nodes[n]["info"].entity_type] for n in nodes]

    max_f = max((es.fscore for es in pattern.edges), default=1.0) or 1.0
    widths = [1.0 + 3.0 * (graph.edges[e]["weight"] / max_f) for e in graph.edges]
    nx.draw_networkx_edges(graph, pos, ax=ax, width=widths, edge_color="#777777")
    nx.draw_networkx_nodes(
        graph, pos, nodelist=others, node_color=fills(others), node_shape="o",
        node_size=900, ax=ax, edgecolors="#333333",
    )
    nx.draw_networkx_nodes(
        graph, pos, nodelist=searched, node_color=fills(searched), node_shape="s",
        node_size=1600, ax=ax, edgecolors="#111111", linewidths=2.0,
    )
    nx.draw_networkx_labels(
        graph, pos, ax=ax, font_size=8,
        labels={n: graph.nodes[n]["info"].display_name for n in others},
    )
    nx.draw_networkx_labels(
        graph, pos, ax=ax, font_size=11,
        labels={n: graph.nodes[n]["info"].display_name for n in searched},
    )
    ax.set_axis_off()
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path


def render_score_chart(pattern: NarrativePattern, out_path: str | Path) -> Path:
    """Horizontal bar chart of the ranked edge scores."""
    out_path = Path(out_path)
    labels = [
        f"{es.edge.subject_id} - {es.edge.object_id}" for es in pattern.edges
    ]
    values = [es.fscore for es in pattern.edges]
    height = max(2.0, 0.4 * len(labels) + 1.0)
    fig, ax = plt.subplots(figsize=(8, height))
    if labels:
        y = range(len(labels))
        ax.barh(y, values, color="#2b83ba")
        ax.set_yticks(list(y))
        ax.set_yticklabels(labels, fontsize=8)
        ax.invert_yaxis()
        ax.set_xlabel("summed edge score")
    else:
        ax.text(0.5, 0.5, "no edges", ha="center", va="center")
        ax.set_axis_off()
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path


def write_edges_tsv(pattern: NarrativePattern, out_path: str | Path) -> Path:
    out_path = Path(out_path)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(
            ["rank", "subject", "predicate", "object", "fscore", "supporting_docs"]
        )
        for rank, es in enumerate(pattern.edges, start=1):
            writer.writerow(
                [
                    rank,
                    es.edge.subject_id,
                    es.edge.predicate,
                    es.edge.object_id,
                    f"{es.fscore:.6f}",
                    len(es.supporting_docs),
                ]
            )
    return out_path


def write_documents_tsv(records: list[DocumentRecord], out_path: str | Path) -> Path:
    out_path = Path(out_path)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["source", "doc_id", "publication_date", "title"])
        for r in records:
            writer.writerow(
                [
                    r.source,
                    r.doc_id,
                    r.publication_date.isoformat() if r.publication_date else "",
                    r.title,
                ]
            )
    return out_path
