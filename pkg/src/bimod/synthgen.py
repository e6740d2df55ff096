"""Stochastic block-cycle generator with edge-level ground truth.

Blocks of nodes are wired internally like a directed Erdos-Renyi graph: each
unordered pair gets an edge with probability p_self, and the edge then gets
exactly one direction (i -> j with probability p_dir, else j -> i).  Blocks
connected in the structure get cross edges the same way with probability
p_con, except the direction is fixed by the structure.  Because every
unordered pair is drawn at most once and receives at most one direction, the
output never contains a reciprocal pair.

Randomness comes from Philox streams keyed per block pair off the spec seed,
so the draws inside block 2 do not change when block 7 is added or the pairs
are generated in another order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from .errors import ConfigError, ValidationError
from .graph import DirectedGraph

try:
    import tomllib
except ModuleNotFoundError:            # Python 3.10
    import tomli as tomllib


@dataclass(frozen=True)
class BlockCycleSpec:
    """Parameters of the block-cycle model.

    structure is either the string 'cycle', wiring block b to block
    (b - 1) mod n_blocks (counter-clockwise when blocks are drawn on a
    circle), or an explicit tuple of directed (from_block, to_block) pairs.
    Listing a block pair in both directions would permit reciprocal edges,
    so only the first orientation of each unordered pair is kept.
    """

    n_blocks: int
    nodes_per_block: int
    p_self: float
    p_con: float
    p_dir: float = 0.5
    structure: Union[str, Tuple[Tuple[int, int], ...]] = "cycle"
    seed: int = 0

    def __post_init__(self):
        if self.n_blocks < 1 or self.nodes_per_block < 1:
            raise ValidationError("n_blocks and nodes_per_block must be >= 1")
        for name in ("p_self", "p_con", "p_dir"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {p}")
        if isinstance(self.structure, str):
            if self.structure != "cycle":
                raise ValidationError(f"unknown structure {self.structure!r}")
        else:
            pairs = tuple((int(a), int(b)) for a, b in self.structure)
            for a, b in pairs:
                if not (0 <= a < self.n_blocks and 0 <= b < self.n_blocks):
                    raise ValidationError(f"structure pair ({a}, {b}) out of range")
            object.__setattr__(self, "structure", pairs)

    @property
    def n_nodes(self):
        return self.n_blocks * self.nodes_per_block


def resolve_structure(spec: BlockCycleSpec):
    """Concrete directed block pairs, one per unordered pair, self pairs
    dropped.  For 'cycle' this is [(b, b-1 mod n)] minus duplicates, so a
    2-block cycle collapses to the single pair (0, 1) and a 1-block cycle to
    nothing (which turns the generator into a plain directed ER model)."""
    if spec.structure == "cycle":
        raw = [(b, (b - 1) % spec.n_blocks) for b in range(spec.n_blocks)]
    else:
        raw = list(spec.structure)
    seen = set()
    pairs = []
    for a, b in raw:
        if a == b or frozenset((a, b)) in seen:
            continue
        seen.add(frozenset((a, b)))
        pairs.append((a, b))
    return pairs


def _pair_rng(seed, key):
    """Philox generator on a stream derived from (seed, key)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def generate(spec: BlockCycleSpec):
    """Draw one graph from the model.

    Returns:
        (graph, edge_blocks, node_blocks) where edge_blocks[e] is the
        ground-truth cluster of edge e aligned with the graph's canonical
        edge order (within-block clusters are labeled 0..n_blocks-1, cross
        clusters n_blocks, n_blocks+1, ... in structure order) and
        node_blocks[i] is the block of node i.
    """
    npb = spec.nodes_per_block
    src_parts, dst_parts, lab_parts = [], [], []

    local_i, local_j = np.triu_indices(npb, k=1)
    for b in range(spec.n_blocks):
        rng = _pair_rng(spec.seed, (0, b))
        exists = rng.random(local_i.size) < spec.p_self
        forward = rng.random(local_i.size) < spec.p_dir
        base = b * npb
        i = np.where(forward, local_i, local_j)[exists] + base
        j = np.where(forward, local_j, local_i)[exists] + base
        src_parts.append(i)
        dst_parts.append(j)
        lab_parts.append(np.full(i.size, b, dtype=np.int64))

    cross_i, cross_j = np.meshgrid(np.arange(npb), np.arange(npb), indexing="ij")
    cross_i, cross_j = cross_i.ravel(), cross_j.ravel()
    for p, (a, b) in enumerate(resolve_structure(spec)):
        rng = _pair_rng(spec.seed, (1, min(a, b), max(a, b)))
        exists = rng.random(cross_i.size) < spec.p_con
        i = cross_i[exists] + a * npb
        j = cross_j[exists] + b * npb
        src_parts.append(i)
        dst_parts.append(j)
        lab_parts.append(np.full(i.size, spec.n_blocks + p, dtype=np.int64))

    src = np.concatenate(src_parts) if src_parts else np.empty(0, dtype=np.int64)
    dst = np.concatenate(dst_parts) if dst_parts else np.empty(0, dtype=np.int64)
    labels = np.concatenate(lab_parts) if lab_parts else np.empty(0, dtype=np.int64)

    order = np.lexsort((dst, src))
    src, dst, labels = src[order], dst[order], labels[order]
    g = DirectedGraph(spec.n_nodes, src, dst)
    if g.n_edges != labels.size:
        raise AssertionError("generator produced duplicate ordered pairs")
    node_blocks = np.repeat(np.arange(spec.n_blocks), npb)
    labels.setflags(write=False)
    node_blocks.setflags(write=False)
    return g, labels, node_blocks


def load_spec(path):
    """Read a BlockCycleSpec from a TOML or JSON config file.

    Keys mirror the dataclass fields; structure may be 'cycle' or a list of
    [from_block, to_block] pairs.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(raw.decode("utf-8"))
        else:
            data = tomllib.loads(raw.decode("utf-8"))
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a table of spec fields")
    known = {"n_blocks", "nodes_per_block", "p_self", "p_con", "p_dir",
             "structure", "seed"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "structure" in data and not isinstance(data["structure"], str):
        data["structure"] = tuple(tuple(p) for p in data["structure"])
    try:
        return BlockCycleSpec(**data)
    except (TypeError, ValidationError) as exc:
        raise ConfigError(f"bad spec in {path}: {exc}") from exc
