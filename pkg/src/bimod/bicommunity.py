"""Edge embedding, edge clustering, and bicommunity extraction.

Each edge (i, j) is embedded by the values its endpoints take in the leading
singular vectors, source through the left ones and target through the right
ones, every coordinate scaled by its singular value.  Clustering the edge
cloud partitions the edge set; a cluster's sources form the sending side of
a bicommunity and its targets the receiving side.  Edge clusters never
overlap, but the node sets of different bicommunities may.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kmeans import kmeans_fit
from .errors import ValidationError
from .graph import DirectedGraph
from .modularity import ModularityOperator, community_bimodularity

N_RESTARTS_DEFAULT = 50
SEED_DEFAULT = 42


@dataclass(frozen=True)
class EdgeEmbedding:
    """Feature rows for every edge of a graph.

    ``features`` is (m_edges, 2 n_components): row e for edge (i, j) reads
    (mu_1 u_1[i], mu_1 v_1[j], ..., mu_N u_N[i], mu_N v_N[j]).
    ``edge_index`` holds the (source, target) pair of each row.
    """

    edge_index: tuple
    features: np.ndarray
    n_components: int

    def __post_init__(self):
        if self.features.shape != (len(self.edge_index), 2 * self.n_components):
            raise ValidationError("feature matrix shape does not match edge count")

    @property
    def n_edges(self):
        return len(self.edge_index)


def build_edge_features(g: DirectedGraph, components, n_components):
    """Embed every edge using the first ``n_components`` singular triplets.

    ``components`` is a SpectralDecomposition or any sequence of
    SpectralComponent.  Scaling by the (nonnegative) singular values keeps
    noisy trailing components from dominating the geometry.
    """
    n_components = int(n_components)
    if n_components < 1:
        raise ValidationError("need at least one component to embed edges")
    if n_components > len(components):
        raise ValidationError(
            f"asked for {n_components} components, only {len(components)} available")
    feats = np.empty((g.n_edges, 2 * n_components), dtype=np.float64)
    for k in range(n_components):
        comp = components[k]
        feats[:, 2 * k] = comp.singular_value * comp.u[g.src]
        feats[:, 2 * k + 1] = comp.singular_value * comp.v[g.dst]
    feats.setflags(write=False)
    edge_index = tuple(zip(g.src.tolist(), g.dst.tolist()))
    return EdgeEmbedding(edge_index=edge_index, features=feats,
                         n_components=n_components)


def cluster_edges(embedding: EdgeEmbedding, n_clusters, seed=SEED_DEFAULT,
                  n_restarts=N_RESTARTS_DEFAULT):
    """K-way k-means partition of the edge feature rows.

    Rows are brought into canonical (source, target) order before the seeded
    restarts so the assignment is equivariant under permutations of the input
    row order, then mapped back.  Returns one cluster id per input row.
    """
    m = embedding.n_edges
    if m == 0:
        raise ValidationError("cannot cluster an empty embedding")
    n_clusters = int(n_clusters)
    if not 1 <= n_clusters <= m:
        raise ValidationError(f"cluster count must be in [1, {m}], got {n_clusters}")
    src = np.fromiter((e[0] for e in embedding.edge_index), count=m, dtype=np.int64)
    dst = np.fromiter((e[1] for e in embedding.edge_index), count=m, dtype=np.int64)
    order = np.lexsort((dst, src))
    labels_sorted, _, _ = kmeans_fit(embedding.features[order], n_clusters,
                                     seed=seed, n_restarts=n_restarts)
    labels = np.empty(m, dtype=np.int64)
    labels[order] = labels_sorted
    return labels


@dataclass(frozen=True)
class Bicommunity:
    """An edge cluster read as a sending-to-receiving mapping.

    ``edge_ids`` indexes the graph's canonical edge arrays.  ``score`` is
    the cluster's share of the bimodularity.  ``node_roles`` tags every
    involved node 'send', 'recv', or 'both'.
    """

    cluster_id: int
    edge_ids: frozenset
    sending_nodes: frozenset
    receiving_nodes: frozenset
    score: float
    node_roles: dict


def extract_bicommunities(g: DirectedGraph, operator: ModularityOperator, assignment):
    """Turn an edge-cluster assignment into scored, ranked bicommunities.

    One Bicommunity per non-empty cluster (requested clusters that came out
    empty simply do not appear).  Sorted by score descending, cluster id
    ascending on ties.
    """
    assignment = np.asarray(assignment)
    if assignment.shape != (g.n_edges,):
        raise ValidationError("assignment must label every edge exactly once")
    out = []
    for cluster_id in np.unique(assignment):
        ids = np.flatnonzero(assignment == cluster_id)
        senders = frozenset(g.src[ids].tolist())
        receivers = frozenset(g.dst[ids].tolist())
        roles = {}
        for node in senders | receivers:
            if node in senders and node in receivers:
                roles[node] = "both"
            elif node in senders:
                roles[node] = "send"
            else:
                roles[node] = "recv"
        out.append(Bicommunity(
            cluster_id=int(cluster_id),
            edge_ids=frozenset(ids.tolist()),
            sending_nodes=senders,
            receiving_nodes=receivers,
            score=community_bimodularity(operator, ids),
            node_roles=roles,
        ))
    out.sort(key=lambda bc: (-bc.score, bc.cluster_id))
    return out


def node_role_summary(bc: Bicommunity, g: DirectedGraph):
    """Per involved node, the fraction of its cluster edges it sends vs
    receives.

    A node with s outgoing and r incoming cluster edges maps to
    (s/(s+r), r/(s+r)); a self-loop counts once on each side.  The
    difference of the two drives report coloring.
    """
    ids = np.fromiter(sorted(bc.edge_ids), dtype=np.int64, count=len(bc.edge_ids))
    send_counts = np.bincount(g.src[ids], minlength=g.n_nodes)
    recv_counts = np.bincount(g.dst[ids], minlength=g.n_nodes)
    summary = {}
    for node in sorted(bc.sending_nodes | bc.receiving_nodes):
        s, r = int(send_counts[node]), int(recv_counts[node])
        summary[node] = (s / (s + r), r / (s + r))
    return summary


def bicommunity_record(bc: Bicommunity, g: DirectedGraph):
    """JSON-ready dict for one bicommunity.

    Fields: cluster_id, score, edges as [src, dst] pairs, sorted sending and
    receiving node lists, and per-node roles keyed by node id.
    """
    ids = sorted(bc.edge_ids)
    return {
        "cluster_id": bc.cluster_id,
        "score": bc.score,
        "edges": [[int(g.src[e]), int(g.dst[e])] for e in ids],
        "sending": sorted(int(x) for x in bc.sending_nodes),
        "receiving": sorted(int(x) for x in bc.receiving_nodes),
        "roles": {str(node): bc.node_roles[node]
                  for node in sorted(bc.node_roles)},
    }
