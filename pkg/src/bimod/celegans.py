"""End-to-end connectome analysis: load, decompose, cluster, report.

The entry point run_celegans() chains the lower modules over a labeled edge
list (neuron names) and optional per-neuron metadata, and returns an
AnalysisReport holding one JSON-ready document: graph summary, signed
spectrum, the leading (u1, v1) node embedding, ranked bicommunities with the
top three flagged, and, when metadata is present, neuron-type composition
and anterior-posterior position histograms per bicommunity.

Everything is deterministic for a fixed seed; rendering the report twice
gives byte-identical JSON.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import connected_components

from .bicommunity import (bicommunity_record, build_edge_features, cluster_edges,
                          extract_bicommunities)
from .graph import DirectedGraph, load_edge_list, load_node_metadata
from .modularity import build_modularity
from .spectral import classify_component, decompose

SCHEMA_VERSION = 1
TOP_RANKED = 3
POSITION_BINS = 10


@dataclass(frozen=True)
class AnalysisReport:
    """Finished analysis: the JSON document plus the objects behind it."""

    data: dict
    graph: DirectedGraph
    decomposition: object
    bicommunities: list

    def to_json(self):
        return json.dumps(self.data, indent=2) + "\n"

    def write(self, out_dir):
        """Write report.json, embedding.csv and cluster_edges.csv.

        Returns the list of paths written.
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        g, dec = self.graph, self.decomposition
        paths = []

        report_path = out_dir / "report.json"
        with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json())
        paths.append(report_path)

        n_comp = len(dec)
        emb_path = out_dir / "embedding.csv"
        with open(emb_path, "w", encoding="utf-8", newline="\n") as fh:
            heads = [f"u_{k + 1}" for k in range(n_comp)] + \
                    [f"v_{k + 1}" for k in range(n_comp)]
            fh.write("node,label," + ",".join(heads) + "\n")
            for i in range(g.n_nodes):
                vals = [repr(float(dec[k].u[i])) for k in range(n_comp)] + \
                       [repr(float(dec[k].v[i])) for k in range(n_comp)]
                fh.write(f"{i},{g.label_of(i)}," + ",".join(vals) + "\n")
        paths.append(emb_path)

        edges_path = out_dir / "cluster_edges.csv"
        with open(edges_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("rank,cluster_id,src,dst,src_label,dst_label\n")
            for rank, bc in enumerate(self.bicommunities):
                for e in sorted(bc.edge_ids):
                    i, j = int(g.src[e]), int(g.dst[e])
                    fh.write(f"{rank},{bc.cluster_id},{i},{j},"
                             f"{g.label_of(i)},{g.label_of(j)}\n")
        paths.append(edges_path)
        return paths


def _position_histogram(values, lo, hi, bins=POSITION_BINS):
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return {"counts": [int(c) for c in counts],
            "bin_edges": [float(e) for e in edges]}


def run_celegans(edge_file, metadata_file=None, n_components=5, n_clusters=5,
                 seed=42, binarize=True):
    """Full analysis of a directed wiring diagram.

    Args:
        edge_file: edge list (neuron labels or integer ids).
        metadata_file: optional CSV of label,category[,position] rows.
        n_components: spectral components to keep (embedding width is twice
            this).
        n_clusters: requested edge clusters.
        seed: clustering seed.
        binarize: collapse synapse multiplicities to unweighted edges, the
            convention under which the published connection counts hold.

    Returns:
        AnalysisReport.
    """
    g = load_edge_list(edge_file)
    if binarize:
        g = g.binarized()
    metadata = None
    if metadata_file is not None:
        metadata = load_node_metadata(metadata_file, g)

    n_weak, _ = connected_components(g.adjacency(), directed=True, connection="weak")
    if n_weak > 1:
        warnings.warn(f"graph has {n_weak} weakly connected components; "
                      "analysis proceeds on the whole graph", stacklevel=2)

    op = build_modularity(g)
    dec = decompose(op, n_components)
    embedding = build_edge_features(g, dec, n_components)
    assignment = cluster_edges(embedding, n_clusters, seed=seed)
    bicoms = extract_bicommunities(g, op, assignment)

    spectrum = [{"index": c.index,
                 "singular_value": float(c.singular_value),
                 "signed_value": float(c.signed_value),
                 "kind": classify_component(c)} for c in dec]
    leading = [{"node": i,
                "label": g.label_of(i),
                "u1": float(dec[0].u[i]),
                "v1": float(dec[0].v[i])} for i in range(g.n_nodes)]
    records = [bicommunity_record(bc, g) for bc in bicoms]

    data = {
        "schema_version": SCHEMA_VERSION,
        "parameters": {"n_components": n_components, "n_clusters": n_clusters,
                       "seed": seed, "binarized": bool(binarize)},
        "graph": {"n_nodes": g.n_nodes,
                  "n_edges": g.n_edges,
                  "total_weight": g.total_weight,
                  "self_loops": g.self_loop_count,
                  "reciprocated_edges": g.reciprocated_edge_count(),
                  "weakly_connected": n_weak == 1},
        "spectrum": spectrum,
        "leading_embedding": leading,
        "top_clusters": [bc.cluster_id for bc in bicoms[:TOP_RANKED]],
        "bicommunities": records,
    }

    if metadata is not None:
        composition = {}
        for bc in bicoms:
            sides = {}
            for side, nodes in (("sending", bc.sending_nodes),
                                ("receiving", bc.receiving_nodes)):
                counts = {}
                for node in nodes:
                    meta = metadata.get(node)
                    cat = meta.category if meta is not None else "other"
                    counts[cat] = counts.get(cat, 0) + 1
                sides[side] = {k: counts[k] for k in sorted(counts)}
            composition[str(bc.cluster_id)] = sides
        data["composition"] = composition

        all_pos = [m.position for m in metadata.values() if m.position is not None]
        if all_pos:
            lo, hi = float(min(all_pos)), float(max(all_pos))
            if lo == hi:
                hi = lo + 1.0
            histograms = {}
            for bc in bicoms:
                sides = {}
                for side, nodes in (("sending", bc.sending_nodes),
                                    ("receiving", bc.receiving_nodes)):
                    vals = sorted(metadata[n].position for n in nodes
                                  if n in metadata and metadata[n].position is not None)
                    entry = _position_histogram(vals, lo, hi)
                    entry["positions"] = [float(v) for v in vals]
                    sides[side] = entry
                histograms[str(bc.cluster_id)] = sides
            data["position_histograms"] = histograms

    return AnalysisReport(data=data, graph=g, decomposition=dec,
                          bicommunities=bicoms)
