"""Partition comparison metrics for evaluating recovered edge clusters."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def _comb2(x):
    return x * (x - 1.0) / 2.0


def adjusted_rand_index(labels_a, labels_b):
    """Chance-adjusted agreement of two labelings of the same items.

    Standard pair-counting form: 1 for identical partitions (relabeling
    ignored), about 0 for independent ones.  Degenerate cases where the
    expected index equals the maximum (both partitions trivial) return 1.0.
    """
    labels_a = np.asarray(labels_a).ravel()
    labels_b = np.asarray(labels_b).ravel()
    if labels_a.shape != labels_b.shape or labels_a.size == 0:
        raise ValidationError("need two equal-length nonempty labelings")
    _, ai = np.unique(labels_a, return_inverse=True)
    _, bi = np.unique(labels_b, return_inverse=True)
    n_a, n_b = int(ai.max()) + 1, int(bi.max()) + 1
    contingency = np.bincount(ai * n_b + bi, minlength=n_a * n_b).reshape(n_a, n_b)
    sum_cells = float(np.sum(_comb2(contingency)))
    sum_rows = float(np.sum(_comb2(contingency.sum(axis=1))))
    sum_cols = float(np.sum(_comb2(contingency.sum(axis=0))))
    total = _comb2(float(labels_a.size))
    expected = sum_rows * sum_cols / total if total else 0.0
    maximum = 0.5 * (sum_rows + sum_cols)
    if maximum == expected:
        return 1.0
    return (sum_cells - expected) / (maximum - expected)


def jaccard(set_a, set_b):
    """|A intersect B| / |A union B|; 1.0 for two empty sets."""
    set_a, set_b = set(set_a), set(set_b)
    union = set_a | set_b
    if not union:
        return 1.0
    return len(set_a & set_b) / len(union)


def best_match_jaccard(node_sets, truth_blocks):
    """For each candidate node set, its best Jaccard against any truth block.

    Returns the list of per-set maxima; the mean is a convenient scalar for
    reports.  Empty candidate list yields an empty list.
    """
    if not truth_blocks:
        raise ValidationError("need at least one ground-truth block")
    return [max(jaccard(s, t) for t in truth_blocks) for s in node_sets]
