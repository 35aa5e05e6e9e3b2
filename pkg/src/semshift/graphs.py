"""Layered semantic graphs (word root -> sense centroids -> neighbor words)
with 2-D PCA coordinates, serialized as JSON or DOT.

All panels of one figure share a single PCA projection so positions stay
comparable; joining graphs therefore recomputes every node's coordinates.
Node ids are namespaced ``lang_period_layer_idx`` and byte output is
deterministic for a fixed input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .clustering import ClusterSet
from .detection import ChangeReport
from .similarity import NeighborSet
from .store import DataError, SliceId
from .xlingual import XlingComparison

LAYER_ROOT, LAYER_SENSE, LAYER_NEIGHBOR = 0, 1, 2

STATUS_UNCHANGED = "unchanged"
STATUS_GAINED = "gained"
STATUS_LOST = "lost"
STATUS_CONSISTENT = "consistent_xling"

EDGE_TREE, EDGE_TIME, EDGE_LANGUAGE = "tree", "time", "language"

# DOT attributes per node status: gained senses blue, lost gray-dashed,
# cross-lingually consistent senses keep their color but get an orange label.
_DOT_NODE_STYLE = {
    STATUS_UNCHANGED: 'color="black"',
    STATUS_GAINED: 'color="blue"',
    STATUS_LOST: 'color="gray", style="dashed"',
    STATUS_CONSISTENT: 'color="blue", fontcolor="orange"',
}
_DOT_EDGE_STYLE = {
    EDGE_TREE: 'style="solid"',
    EDGE_TIME: 'style="solid", penwidth="2"',
    EDGE_LANGUAGE: 'style="dotted"',
}


@dataclass(frozen=True)
class GraphNode:
    id: str
    label: str
    layer: int
    x: float
    y: float
    status: str
    language: str
    period: str
    embedding: np.ndarray = field(compare=False, repr=False, default=None)


@dataclass(frozen=True)
class SemanticGraph:
    kind: str  # tree, temporal or spatiotemporal
    nodes: tuple[GraphNode, ...]
    edges: tuple[tuple[str, str, str], ...]  # (from id, to id, style)

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}

    def senses(self, slice_id: SliceId) -> list[GraphNode]:
        return [n for n in self.nodes
                if n.layer == LAYER_SENSE
                and n.language == slice_id.language and n.period == slice_id.period]


def pca2(vectors) -> np.ndarray:
    """Project onto the top-2 principal directions (centered, SVD based).

    Component signs are fixed so each component's largest-magnitude loading
    is positive, making the output deterministic.
    """
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise DataError("pca2 needs at least 2 vectors")
    centered = x - x.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    comps = vt[:2]
    if comps.shape[0] < 2:
        comps = np.vstack([comps, np.zeros((2 - comps.shape[0], x.shape[1]))])
    comps = comps.copy()
    for r in range(2):
        j = int(np.argmax(np.abs(comps[r])))
        if comps[r, j] < 0:
            comps[r] = -comps[r]
    return centered @ comps.T


def _with_joint_coords(kind: str, nodes: list[GraphNode],
                       edges: tuple) -> SemanticGraph:
    coords = pca2(np.stack([n.embedding for n in nodes]))
    placed = tuple(
        replace(n, x=float(coords[i, 0]), y=float(coords[i, 1]))
        for i, n in enumerate(nodes)
    )
    return SemanticGraph(kind, placed, edges)


def build_tree(word: str, root_embedding: np.ndarray, clusters: ClusterSet,
               neighbor_sets: list[NeighborSet], slice_id: SliceId) -> SemanticGraph:
    """Three-layer tree: word root, one node per sense, k neighbor words per sense."""
    if not clusters.clusters:
        raise DataError("cannot build a tree from an empty cluster set")
    if len(neighbor_sets) != len(clusters.clusters):
        raise DataError("one neighbor set per sense is required")
    lang, period = slice_id.language, slice_id.period

    def nid(layer, idx):
        return f"{lang}_{period}_{layer}_{idx}"

    nodes = [GraphNode(nid(LAYER_ROOT, 0), word, LAYER_ROOT, 0.0, 0.0,
                       STATUS_UNCHANGED, lang, period,
                       np.asarray(root_embedding, dtype=np.float64))]
    edges = []
    neighbor_idx = 0
    for si, (cluster, nbrs) in enumerate(zip(clusters.clusters, neighbor_sets)):
        sense_id = nid(LAYER_SENSE, si)
        nodes.append(GraphNode(sense_id, f"{word}/sense{si}", LAYER_SENSE,
                               0.0, 0.0, STATUS_UNCHANGED, lang, period,
                               np.asarray(cluster.centroid, dtype=np.float64)))
        edges.append((nodes[0].id, sense_id, EDGE_TREE))
        for nw, ne in nbrs.neighbors:
            node_id = nid(LAYER_NEIGHBOR, neighbor_idx)
            neighbor_idx += 1
            nodes.append(GraphNode(node_id, nw, LAYER_NEIGHBOR, 0.0, 0.0,
                                   STATUS_UNCHANGED, lang, period,
                                   np.asarray(ne, dtype=np.float64)))
            edges.append((sense_id, node_id, EDGE_TREE))
    return _with_joint_coords("tree", nodes, tuple(edges))


def _restatus(nodes: list[GraphNode], slice_id: SliceId, sense_status: dict[int, str]):
    out = []
    for n in nodes:
        if (n.layer == LAYER_SENSE and n.language == slice_id.language
                and n.period == slice_id.period):
            idx = int(n.id.rsplit("_", 1)[1])
            if idx in sense_status:
                n = replace(n, status=sense_status[idx])
        out.append(n)
    return out


def _slice_of(tree: SemanticGraph) -> SliceId:
    root = next(n for n in tree.nodes if n.layer == LAYER_ROOT)
    return SliceId(root.language, root.period)


def build_temporal(word: str, tree_t0: SemanticGraph, tree_t1: SemanticGraph,
                   report: ChangeReport) -> SemanticGraph:
    """Join the two slices' trees with a time edge and mark lost/gained senses."""
    s0, s1 = _slice_of(tree_t0), _slice_of(tree_t1)
    if s0 == s1:
        raise DataError("temporal graphs need trees from two distinct slices")
    n_senses0 = len(tree_t0.senses(s0))
    n_senses1 = len(tree_t1.senses(s1))
    if any(i >= n_senses0 for i in report.lost) or \
       any(j >= n_senses1 for j in report.gained):
        raise DataError("change report indices exceed the trees' sense counts")
    nodes = _restatus(list(tree_t0.nodes), s0, {i: STATUS_LOST for i in report.lost})
    nodes += _restatus(list(tree_t1.nodes), s1, {j: STATUS_GAINED for j in report.gained})
    root0 = f"{s0.language}_{s0.period}_{LAYER_ROOT}_0"
    root1 = f"{s1.language}_{s1.period}_{LAYER_ROOT}_0"
    edges = tree_t0.edges + tree_t1.edges + ((root0, root1, EDGE_TIME),)
    return _with_joint_coords("temporal", nodes, edges)


def build_spatiotemporal(pair: tuple[str, str], temporal_l1: SemanticGraph,
                         temporal_l2: SemanticGraph,
                         cmp: XlingComparison) -> SemanticGraph:
    """Join two languages' temporal graphs with a language edge and mark
    cross-lingually consistent senses."""
    slices_l1 = sorted({(n.language, n.period) for n in temporal_l1.nodes})
    slices_l2 = sorted({(n.language, n.period) for n in temporal_l2.nodes})
    if len(slices_l1) != 2 or len(slices_l2) != 2:
        raise DataError("spatiotemporal graphs join two temporal graphs")
    if {s[0] for s in slices_l1} & {s[0] for s in slices_l2}:
        raise DataError("spatiotemporal graphs need two distinct languages")
    # period order within each language follows the temporal graph's time edge
    def periods(graph):
        time_edge = next(e for e in graph.edges if e[2] == EDGE_TIME)
        early = time_edge[0].split("_")[1]
        late = time_edge[1].split("_")[1]
        lang = graph.nodes[0].language
        return SliceId(lang, early), SliceId(lang, late)

    l1_early, l1_late = periods(temporal_l1)
    l2_early, l2_late = periods(temporal_l2)

    def bounds_ok(items, g, s):
        return all(i < len(g.senses(s)) for i in items)

    if not (bounds_ok([i for i, _, _ in cmp.consistent_gains], temporal_l1, l1_late)
            and bounds_ok([j for _, j, _ in cmp.consistent_gains], temporal_l2, l2_late)
            and bounds_ok([i for i, _, _ in cmp.consistent_losses], temporal_l1, l1_early)
            and bounds_ok([j for _, j, _ in cmp.consistent_losses], temporal_l2, l2_early)):
        raise DataError("comparison indices exceed the trees' sense counts")

    nodes = list(temporal_l1.nodes)
    nodes = _restatus(nodes, l1_late,
                      {i: STATUS_CONSISTENT for i, _, _ in cmp.consistent_gains})
    nodes = _restatus(nodes, l1_early,
                      {i: STATUS_CONSISTENT for i, _, _ in cmp.consistent_losses})
    nodes2 = list(temporal_l2.nodes)
    nodes2 = _restatus(nodes2, l2_late,
                       {j: STATUS_CONSISTENT for _, j, _ in cmp.consistent_gains})
    nodes2 = _restatus(nodes2, l2_early,
                       {j: STATUS_CONSISTENT for _, j, _ in cmp.consistent_losses})
    root_l1 = f"{l1_late.language}_{l1_late.period}_{LAYER_ROOT}_0"
    root_l2 = f"{l2_late.language}_{l2_late.period}_{LAYER_ROOT}_0"
    edges = temporal_l1.edges + temporal_l2.edges + ((root_l1, root_l2, EDGE_LANGUAGE),)
    return _with_joint_coords("spatiotemporal", nodes + nodes2, edges)


def emit(graph: SemanticGraph, format: str = "json") -> bytes:
    """Serialize a graph to UTF-8 JSON or DOT bytes (stable for a fixed input)."""
    if format == "json":
        payload = {
            "kind": graph.kind,
            "nodes": [
                {"id": n.id, "label": n.label, "layer": n.layer,
                 "x": n.x, "y": n.y, "status": n.status,
                 "language": n.language, "period": n.period}
                for n in graph.nodes
            ],
            "edges": [{"from": a, "to": b, "style": s} for a, b, s in graph.edges],
        }
        return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if format == "dot":
        lines = [f"digraph {graph.kind} {{"]
        for n in graph.nodes:
            label = n.label.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(
                f'  "{n.id}" [label="{label}", {_DOT_NODE_STYLE[n.status]}, '
                f'pos="{n.x:.6f},{n.y:.6f}"];')
        for a, b, style in graph.edges:
            lines.append(f'  "{a}" -> "{b}" [{_DOT_EDGE_STYLE[style]}];')
        lines.append("}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise DataError(f"unknown graph format {format!r}")
