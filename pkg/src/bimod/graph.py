"""Directed graph data model and edge-list ingestion.

Graphs are immutable once constructed: edges live in three parallel arrays
(source, target, weight) sorted by (source, target), duplicates merged by
weight summation, and in/out degree sequences cached.  Node ids are dense
``0..n_nodes-1``; files with string identifiers carry a label table mapping
ids back to the original names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import MetadataJoinError, ParseError, ValidationError

DEFAULT_NEURON_CATEGORIES = ("sensory", "inter", "motor", "sex-specific")

_NODES_DIRECTIVE = re.compile(r"^#\s*nodes:\s*(\d+)\s*$")
_LABEL_DIRECTIVE = re.compile(r"^#\s*label:\s*(\d+)\s+(.+?)\s*$")


class DirectedGraph:
    """Weighted directed graph with cached degree sequences.

    Attributes:
        n_nodes: number of nodes.
        src, dst: int64 edge endpoint arrays, sorted by (src, dst).
        weight: float64 edge weights (nonnegative; duplicates pre-merged).
        node_labels: optional list of string names, one per node.
        out_degree: weighted out-degrees, ``out_degree[i] = sum_j A[i, j]``.
        in_degree: weighted in-degrees, ``in_degree[j] = sum_i A[i, j]``.
        total_weight: ``m = sum_ij A[i, j]``.
    """

    def __init__(self, n_nodes, src, dst, weight=None, node_labels=None,
                 merge_duplicates=True):
        n_nodes = int(n_nodes)
        if n_nodes < 1:
            raise ValidationError("graph needs at least one node")
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if src.shape != dst.shape or src.ndim != 1:
            raise ValidationError("src and dst must be 1-D arrays of equal length")
        if weight is None:
            weight = np.ones(src.shape[0], dtype=np.float64)
        else:
            weight = np.asarray(weight, dtype=np.float64)
            if weight.shape != src.shape:
                raise ValidationError("weight must match the edge arrays in length")
        if src.size:
            if src.min(initial=0) < 0 or dst.min(initial=0) < 0:
                raise ValidationError("node ids must be nonnegative")
            if src.max(initial=0) >= n_nodes or dst.max(initial=0) >= n_nodes:
                raise ValidationError("node id out of range for n_nodes")
        if not np.all(np.isfinite(weight)):
            raise ValidationError("edge weights must be finite")
        if np.any(weight < 0):
            raise ValidationError("edge weights must be nonnegative")
        if node_labels is not None:
            node_labels = [str(x) for x in node_labels]
            if len(node_labels) != n_nodes:
                raise ValidationError("node_labels must have one entry per node")

        # Canonical edge order, duplicates merged by weight summation.
        order = np.lexsort((dst, src))
        src, dst, weight = src[order], dst[order], weight[order]
        if merge_duplicates and src.size:
            first = np.ones(src.size, dtype=bool)
            first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            starts = np.flatnonzero(first)
            src, dst = src[starts], dst[starts]
            weight = np.add.reduceat(weight, starts)

        self.n_nodes = n_nodes
        self.src = src
        self.dst = dst
        self.weight = weight
        self.node_labels = node_labels
        self.out_degree = np.bincount(src, weights=weight, minlength=n_nodes)
        self.in_degree = np.bincount(dst, weights=weight, minlength=n_nodes)
        self.total_weight = float(np.sum(weight))
        for arr in (self.src, self.dst, self.weight, self.out_degree, self.in_degree):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, n_nodes, edges, node_labels=None):
        """Build a graph from an iterable of (src, dst[, weight]) tuples."""
        rows = list(edges)
        src = [e[0] for e in rows]
        dst = [e[1] for e in rows]
        weight = [e[2] if len(e) > 2 else 1.0 for e in rows]
        return cls(n_nodes, src, dst, weight, node_labels=node_labels)

    @property
    def n_edges(self):
        return int(self.src.size)

    @property
    def self_loop_count(self):
        return int(np.count_nonzero(self.src == self.dst))

    def adjacency(self, dense=False):
        """Adjacency matrix as CSR (default) or a dense ndarray."""
        a = sp.csr_array((self.weight, (self.src, self.dst)),
                         shape=(self.n_nodes, self.n_nodes))
        return a.toarray() if dense else a

    def symmetrized(self):
        """Graph of A + A^T (self-loop weights double)."""
        return DirectedGraph(
            self.n_nodes,
            np.concatenate([self.src, self.dst]),
            np.concatenate([self.dst, self.src]),
            np.concatenate([self.weight, self.weight]),
            node_labels=self.node_labels,
        )

    def without_self_loops(self):
        keep = self.src != self.dst
        return DirectedGraph(self.n_nodes, self.src[keep], self.dst[keep],
                             self.weight[keep], node_labels=self.node_labels)

    def binarized(self):
        """Same edges, all weights set to 1."""
        return DirectedGraph(self.n_nodes, self.src, self.dst,
                             np.ones(self.n_edges), node_labels=self.node_labels)

    def is_symmetric(self):
        a = self.adjacency()
        return (a != a.T).nnz == 0

    def reciprocated_edge_count(self):
        """Number of edges whose reverse edge also exists.

        A self-loop is its own reverse and therefore counts as reciprocated.
        """
        keys = self.src * self.n_nodes + self.dst
        rev = self.dst * self.n_nodes + self.src
        return int(np.count_nonzero(np.isin(rev, keys)))

    def label_of(self, node):
        if self.node_labels is not None:
            return self.node_labels[node]
        return str(node)

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self.n_nodes == other.n_nodes
                and self.node_labels == other.node_labels
                and np.array_equal(self.src, other.src)
                and np.array_equal(self.dst, other.dst)
                and np.array_equal(self.weight, other.weight))

    def __repr__(self):
        return (f"DirectedGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges}, "
                f"m={self.total_weight:g})")


def degree_sequences(g: DirectedGraph):
    """Return (out_degree, in_degree, m) for a graph.

    Both degree vectors are accumulated from the same canonical edge array,
    so their sums agree with ``m`` exactly whenever the weights are exactly
    summable (integers, dyadic rationals); otherwise to roundoff.
    """
    return g.out_degree, g.in_degree, g.total_weight


# ---------------------------------------------------------------------------
# Edge-list ingestion

def _detect_format(path, fmt):
    if fmt != "auto":
        if fmt in ("tsv", "csv", "matrix-market"):
            return fmt
        if fmt == "mtx":
            return "matrix-market"
        raise ValidationError(f"unknown edge-list format {fmt!r}")
    suffix = Path(path).suffix.lower()
    if suffix in (".mtx", ".mm"):
        return "matrix-market"
    if suffix == ".csv":
        return "csv"
    return "tsv"


def _parse_weight(token, path, lineno):
    try:
        w = float(token)
    except ValueError:
        raise ParseError(f"bad weight {token!r}", path, lineno) from None
    if not np.isfinite(w):
        raise ParseError(f"non-finite weight {token!r}", path, lineno)
    if w < 0:
        raise ValidationError(f"{path}:{lineno}: negative weight {w:g}")
    return w


def _read_delimited(path, delimiter):
    """Parse 'src dst [weight]' rows; returns raw string tokens plus directives."""
    rows = []
    declared_nodes = None
    label_table = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                m = _NODES_DIRECTIVE.match(stripped)
                if m:
                    declared_nodes = int(m.group(1))
                    continue
                m = _LABEL_DIRECTIVE.match(stripped)
                if m:
                    label_table[m.group(2)] = int(m.group(1))
                continue
            body = stripped.split("#", 1)[0].strip()
            if not body:
                continue
            if delimiter is None:
                fields = body.split()
            else:
                fields = [f.strip() for f in body.split(delimiter)]
                fields = [f for f in fields if f != ""]
            if len(fields) not in (2, 3):
                raise ParseError(
                    f"expected 'src dst [weight]', got {len(fields)} fields", path, lineno)
            w = _parse_weight(fields[2], path, lineno) if len(fields) == 3 else 1.0
            rows.append((fields[0], fields[1], w, lineno))
    return rows, declared_nodes, label_table


def _resolve_ids(rows, declared_nodes, label_table, path):
    """Map raw id tokens to dense node ids.

    Integer tokens are used directly (n = max id + 1, so gaps become isolated
    nodes); string tokens get dense ids in first-appearance order, persisted
    as the label table.  A label table read back from a saved file is
    authoritative, which makes load -> save -> load idempotent.
    """
    if label_table:
        n = max(label_table.values()) + 1
        if declared_nodes is not None:
            n = max(n, declared_nodes)
        src, dst = [], []
        for a, b, _, lineno in rows:
            try:
                src.append(label_table[a])
                dst.append(label_table[b])
            except KeyError as exc:
                raise ParseError(f"label {exc.args[0]!r} missing from label table",
                                 path, lineno) from None
        labels = [""] * n
        for name, idx in label_table.items():
            labels[idx] = name
        for idx in range(n):
            if labels[idx] == "":
                labels[idx] = str(idx)
        return n, src, dst, labels

    def _as_int(token):
        try:
            value = int(token)
        except ValueError:
            return None
        return value if value >= 0 else None

    ints = [(_as_int(a), _as_int(b)) for a, b, _, _ in rows]
    if all(a is not None and b is not None for a, b in ints):
        src = [a for a, _ in ints]
        dst = [b for _, b in ints]
        n = max(max(src), max(dst)) + 1 if src else 0
        if declared_nodes is not None:
            if declared_nodes < n:
                raise ParseError(f"'# nodes: {declared_nodes}' is smaller than max id", path)
            n = declared_nodes
        return n, src, dst, None

    mapping = {}
    src, dst = [], []
    for a, b, _, _ in rows:
        for tok in (a, b):
            if tok not in mapping:
                mapping[tok] = len(mapping)
        src.append(mapping[a])
        dst.append(mapping[b])
    labels = [""] * len(mapping)
    for name, idx in mapping.items():
        labels[idx] = name
    return len(mapping), src, dst, labels


def _read_matrix_market(path):
    """Parse Matrix Market coordinate files (real/integer/pattern, general or
    symmetric); returns (n, src, dst, weight)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines:
        raise ParseError("empty file", path)
    header = lines[0].strip().split()
    if len(header) < 5 or header[0].lower() != "%%matrixmarket":
        raise ParseError("missing '%%MatrixMarket' header", path, 1)
    _, obj, fmt, field, symmetry = [h.lower() for h in header[:5]]
    if obj != "matrix" or fmt != "coordinate":
        raise ParseError(f"unsupported MatrixMarket type '{obj} {fmt}'", path, 1)
    if field not in ("real", "integer", "pattern"):
        raise ParseError(f"unsupported MatrixMarket field {field!r}", path, 1)
    if symmetry not in ("general", "symmetric"):
        raise ParseError(f"unsupported MatrixMarket symmetry {symmetry!r}", path, 1)

    dims = None
    src, dst, weight = [], [], []
    for lineno, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        fields = stripped.split()
        if dims is None:
            if len(fields) != 3:
                raise ParseError("expected 'rows cols nnz' size line", path, lineno)
            try:
                dims = tuple(int(f) for f in fields)
            except ValueError:
                raise ParseError("bad size line", path, lineno) from None
            if dims[0] != dims[1]:
                raise ValidationError(
                    f"{path}: adjacency matrix must be square, got {dims[0]}x{dims[1]}")
            continue
        expected = 2 if field == "pattern" else 3
        if len(fields) != expected:
            raise ParseError(f"expected {expected} fields per entry", path, lineno)
        try:
            i, j = int(fields[0]) - 1, int(fields[1]) - 1
        except ValueError:
            raise ParseError("bad coordinate indices", path, lineno) from None
        if not (0 <= i < dims[0] and 0 <= j < dims[1]):
            raise ParseError("coordinate out of declared bounds", path, lineno)
        w = _parse_weight(fields[2], path, lineno) if field != "pattern" else 1.0
        src.append(i)
        dst.append(j)
        weight.append(w)
        if symmetry == "symmetric" and i != j:
            src.append(j)
            dst.append(i)
            weight.append(w)
    if dims is None:
        raise ParseError("missing size line", path)
    return dims[0], src, dst, weight


def load_edge_list(path, fmt="auto", symmetrize=False, drop_self_loops=False):
    """Load a directed graph from an edge-list or Matrix Market file.

    Args:
        path: input file.
        fmt: 'tsv' (whitespace), 'csv', 'matrix-market', or 'auto' (by
            extension; '.mtx'/'.mm' -> matrix-market, '.csv' -> csv).
        symmetrize: return the graph of A + A^T instead of A (used only for
            undirected baselines).
        drop_self_loops: remove i -> i edges after loading.

    Returns:
        DirectedGraph with duplicate edges merged by weight summation.

    Raises:
        ParseError: malformed line (message carries path and line number).
        ValidationError: negative weight, or empty graph (m = 0).
    """
    fmt = _detect_format(path, fmt)
    try:
        if fmt == "matrix-market":
            n, src, dst, weight = _read_matrix_market(path)
            labels = None
        else:
            delimiter = "," if fmt == "csv" else None
            rows, declared_nodes, label_table = _read_delimited(path, delimiter)
            n, src, dst, labels = _resolve_ids(rows, declared_nodes, label_table, path)
            weight = [r[2] for r in rows]
    except OSError as exc:
        raise ParseError(str(exc), path) from exc

    if n == 0 or not src:
        raise ValidationError(f"{path}: empty graph (no edges)")
    g = DirectedGraph(n, src, dst, weight, node_labels=labels)
    if drop_self_loops:
        g = g.without_self_loops()
    if symmetrize:
        g = g.symmetrized()
    if g.total_weight == 0:
        raise ValidationError(f"{path}: graph has zero total weight")
    return g


def save_edge_list(g: DirectedGraph, path, fmt="auto"):
    """Write a graph back to disk.

    The tsv/csv writers emit '# nodes:' and '# label:' directives so that a
    reload reproduces the graph exactly (isolated nodes and label-to-id
    assignment included).  Matrix Market output keeps dimensions but drops
    labels.
    """
    fmt = _detect_format(path, fmt)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if fmt == "matrix-market":
            fh.write("%%MatrixMarket matrix coordinate real general\n")
            fh.write(f"{g.n_nodes} {g.n_nodes} {g.n_edges}\n")
            for i, j, w in zip(g.src, g.dst, g.weight):
                fh.write(f"{i + 1} {j + 1} {float(w)!r}\n")
            return
        sep = "," if fmt == "csv" else "\t"
        fh.write(f"# nodes: {g.n_nodes}\n")
        if g.node_labels is not None:
            for idx, name in enumerate(g.node_labels):
                fh.write(f"# label: {idx} {name}\n")
        for i, j, w in zip(g.src, g.dst, g.weight):
            fh.write(f"{g.label_of(i)}{sep}{g.label_of(j)}{sep}{float(w)!r}\n")


# ---------------------------------------------------------------------------
# Node metadata

@dataclass(frozen=True)
class NodeMetadata:
    """Category (and optionally an anterior-posterior position) for one node."""

    node: int
    category: str
    position: Optional[float] = None


def load_node_metadata(path, graph: DirectedGraph,
                       categories: Sequence[str] = DEFAULT_NEURON_CATEGORIES):
    """Load per-node metadata from a CSV of 'label,category[,position]' rows.

    Labels are joined against the graph's label table (or parsed as node ids
    when the graph is unlabeled).  Categories outside ``categories`` pass
    through as 'other'.  Unmatched labels raise MetadataJoinError listing
    every mismatch.

    Returns:
        dict mapping node id -> NodeMetadata.
    """
    if graph.node_labels is not None:
        ids = {name: idx for idx, name in enumerate(graph.node_labels)}
    else:
        ids = None
    categories = set(categories)

    out = {}
    missing = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = [f.strip() for f in stripped.split(",")]
            # header row: a name column plus a literal 'category' column
            if lineno == 1 and (
                    fields[0].lower() in ("label", "neuron", "node", "name", "id")
                    or (len(fields) > 1 and fields[1].lower() == "category")):
                continue
            if len(fields) not in (2, 3):
                raise ParseError("expected 'label,category[,position]'", path, lineno)
            label, category = fields[0], fields[1]
            if ids is not None:
                node = ids.get(label)
            else:
                try:
                    node = int(label)
                except ValueError:
                    node = None
                if node is not None and not (0 <= node < graph.n_nodes):
                    node = None
            if node is None:
                missing.append(label)
                continue
            position = None
            if len(fields) == 3 and fields[2] != "":
                try:
                    position = float(fields[2])
                except ValueError:
                    raise ParseError(f"bad position {fields[2]!r}", path, lineno) from None
            if category not in categories:
                category = "other"
            out[node] = NodeMetadata(node, category, position)
    if missing:
        raise MetadataJoinError(missing)
    return out
