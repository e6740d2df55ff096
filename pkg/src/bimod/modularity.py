"""Directed modularity operator and the bimodularity objective.

The operator is B = A - k_out k_in^T / m, the adjacency minus the expected
adjacency under the degree-preserving null model.  Both its row sums and its
column sums vanish, so any constant vector is in its null space on either
side.  Small graphs materialize B densely; past ``dense_cap`` nodes only the
action x -> Bx is kept, through the sparse adjacency and a rank-one
correction, which never forms the n x n matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .graph import DirectedGraph

DENSE_CAP_DEFAULT = 4096


class ModularityOperator:
    """Action of the directed modularity matrix of a graph.

    ``mode`` is 'dense' or 'implicit'.  Dense mode stores B outright and
    multiplies with it; implicit mode applies A through the CSR adjacency and
    subtracts the rank-one term.  Both accept vectors or (n, k) blocks.
    """

    def __init__(self, graph: DirectedGraph, mode="auto", dense_cap=DENSE_CAP_DEFAULT):
        if graph.total_weight <= 0:
            raise ValidationError("modularity operator needs positive total weight")
        if mode == "auto":
            mode = "dense" if graph.n_nodes <= dense_cap else "implicit"
        if mode not in ("dense", "implicit"):
            raise ValidationError(f"unknown operator mode {mode!r}")
        self.graph = graph
        self.mode = mode
        self.n = graph.n_nodes
        self.m = graph.total_weight
        self.k_out = graph.out_degree
        self.k_in = graph.in_degree
        self._adj = graph.adjacency()
        self._adj_t = self._adj.T.tocsr()
        self._dense = None
        if mode == "dense":
            self._dense = self._adj.toarray() - np.outer(self.k_out, self.k_in) / self.m

    @property
    def shape(self):
        return (self.n, self.n)

    def matvec(self, x):
        """B x for a vector x, or B X column-wise for an (n, k) block."""
        x = np.asarray(x, dtype=np.float64)
        if self._dense is not None:
            return self._dense @ x
        if x.ndim == 1:
            return self._adj @ x - self.k_out * (self.k_in @ x / self.m)
        return self._adj @ x - np.outer(self.k_out, self.k_in @ x) / self.m

    def rmatvec(self, y):
        """B^T y, the adjoint action (vector or block)."""
        y = np.asarray(y, dtype=np.float64)
        if self._dense is not None:
            return self._dense.T @ y
        if y.ndim == 1:
            return self._adj_t @ y - self.k_in * (self.k_out @ y / self.m)
        return self._adj_t @ y - np.outer(self.k_in, self.k_out @ y) / self.m

    def dense(self):
        """Materialize B as an ndarray (cached in dense mode)."""
        if self._dense is not None:
            return self._dense
        return self._adj.toarray() - np.outer(self.k_out, self.k_in) / self.m

    def row_col_sum_residual(self):
        """Max absolute row sum and column sum of B.

        Exactly zero in infinite precision; in floats, bounded by roundoff in
        the degree accumulations.  Computed through the operator action on the
        all-ones vector so dense and implicit modes are checked identically.
        """
        ones = np.ones(self.n)
        row = float(np.max(np.abs(self.matvec(ones))))
        col = float(np.max(np.abs(self.rmatvec(ones))))
        return row, col


def build_modularity(graph: DirectedGraph, mode="auto", dense_cap=DENSE_CAP_DEFAULT):
    """Construct the modularity operator for a graph."""
    return ModularityOperator(graph, mode=mode, dense_cap=dense_cap)


def export_dense_matrix(op: ModularityOperator, path):
    """Dump B in Matrix Market array format, column-major, for debugging."""
    mat = op.dense()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix array real general\n")
        fh.write(f"{op.n} {op.n}\n")
        for j in range(op.n):
            for i in range(op.n):
                fh.write(f"{float(mat[i, j])!r}\n")


@dataclass(frozen=True)
class PartitionPair:
    """A sending/receiving assignment pair (s_out, s_in).

    Discrete pairs have entries exactly +1 or -1 and assign every node a side
    in each of the two roles.  Relaxed pairs are the continuous surrogate,
    unit vectors as produced by the singular value decomposition.
    """

    s_out: np.ndarray
    s_in: np.ndarray
    kind: str = "discrete"

    def __post_init__(self):
        s_out = np.asarray(self.s_out, dtype=np.float64)
        s_in = np.asarray(self.s_in, dtype=np.float64)
        if s_out.ndim != 1 or s_out.shape != s_in.shape:
            raise ValidationError("s_out and s_in must be 1-D and equally long")
        if self.kind == "discrete":
            if not (np.all(np.abs(s_out) == 1.0) and np.all(np.abs(s_in) == 1.0)):
                raise ValidationError("discrete partition entries must be +1 or -1")
        elif self.kind == "relaxed":
            for name, v in (("s_out", s_out), ("s_in", s_in)):
                norm = float(np.linalg.norm(v))
                if abs(norm - 1.0) > 1e-12:
                    raise ValidationError(
                        f"relaxed {name} must be unit-norm, got |v| = {norm:.15g}")
        else:
            raise ValidationError(f"unknown partition kind {self.kind!r}")
        object.__setattr__(self, "s_out", s_out)
        object.__setattr__(self, "s_in", s_in)
        self.s_out.setflags(write=False)
        self.s_in.setflags(write=False)

    @property
    def n_nodes(self):
        return int(self.s_out.shape[0])


def bimodularity_index(graph: DirectedGraph, s_out, s_in=None):
    """Quality of a sending/receiving split: s_out^T B s_in / (2m).

    Accepts either a PartitionPair or two arrays.  The quadratic form is
    evaluated edge-wise, sum_e w_e s_out[i_e] s_in[j_e] minus the null-model
    term (k_out . s_out)(k_in . s_in)/m, so no matrix is built.
    """
    if isinstance(s_out, PartitionPair):
        if s_in is not None:
            raise ValidationError("pass a PartitionPair or two arrays, not both")
        pair = s_out
        s_out, s_in = pair.s_out, pair.s_in
    s_out = np.asarray(s_out, dtype=np.float64)
    s_in = np.asarray(s_in, dtype=np.float64)
    if s_out.shape != (graph.n_nodes,) or s_in.shape != (graph.n_nodes,):
        raise ValidationError("partition vectors must have one entry per node")
    m = graph.total_weight
    adj_term = float(np.sum(graph.weight * s_out[graph.src] * s_in[graph.dst]))
    null_term = float((graph.out_degree @ s_out) * (graph.in_degree @ s_in)) / m
    return (adj_term - null_term) / (2.0 * m)


def community_bimodularity(operator, edge_ids):
    """Contribution of an edge subset to the bimodularity: (1/m) sum B_ij.

    The sum runs over the realized edges in ``edge_ids`` (indices into the
    graph's canonical edge arrays), so scores are additive over disjoint
    subsets and a full edge partition reproduces the total over all edges.
    Null-model mass on node pairs without an edge is deliberately not
    attributed to any cluster.
    """
    g = operator.graph if isinstance(operator, ModularityOperator) else operator
    ids = np.asarray(sorted(edge_ids), dtype=np.int64)
    if ids.size == 0:
        return 0.0
    if ids.min() < 0 or ids.max() >= g.n_edges:
        raise ValidationError("edge id out of range")
    i, j, w = g.src[ids], g.dst[ids], g.weight[ids]
    m = g.total_weight
    return float(np.sum(w - g.out_degree[i] * g.in_degree[j] / m)) / m


def undirected_modularity(g: DirectedGraph, labels):
    """Newman modularity of a node partition on a symmetric graph.

    The graph must hold both directions of every undirected edge, so its
    total weight W already equals the 2m of the usual formula:
    Q = (1/W) sum_ij (A_ij - k_i k_j / W) delta(c_i, c_j).
    """
    if not g.is_symmetric():
        raise ValidationError("undirected modularity needs a symmetric graph")
    labels = np.asarray(labels)
    if labels.shape != (g.n_nodes,):
        raise ValidationError("labels must assign every node a community")
    _, dense = np.unique(labels, return_inverse=True)
    w_tot = g.total_weight
    within = float(np.sum(g.weight * (dense[g.src] == dense[g.dst])))
    comm_degree = np.bincount(dense, weights=g.out_degree)
    return (within - float(np.sum(comm_degree ** 2)) / w_tot) / w_tot
