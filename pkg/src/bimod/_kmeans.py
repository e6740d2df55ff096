"""Seeded k-means with k-means++ initialization.

Written in-house rather than taken from a library for one reason:
the clustering must be bit-for-bit reproducible for a fixed seed on any
machine and any thread count.  To that end every restart draws from its own
child of a single SeedSequence, distance work uses fixed-order numpy
reductions, and BLAS is pinned to one thread for the duration of a fit.
Ties (equidistant centers, equal restart inertias) break toward the lowest
index.
"""

from __future__ import annotations

import numpy as np

from ._threads import single_threaded_blas
from .errors import ValidationError


def _sq_dist_to_centers(points, centers):
    """Squared Euclidean distance matrix, (n_points, n_centers).

    Expanded form ||x||^2 - 2 x.c + ||c||^2 clipped at zero; cheaper than
    pairwise subtraction for many centers and deterministic under a pinned
    single BLAS thread.
    """
    xx = np.einsum("ij,ij->i", points, points)
    cc = np.einsum("ij,ij->i", centers, centers)
    d = xx[:, None] - 2.0 * (points @ centers.T) + cc[None, :]
    np.maximum(d, 0.0, out=d)
    return d


def _plus_plus_init(points, k, rng):
    """k-means++ seeding (greedy D^2 sampling, one candidate per step)."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centers[0] = points[first]
    closest = _sq_dist_to_centers(points, centers[:1])[:, 0]
    for c in range(1, k):
        total = float(np.sum(closest))
        if total <= 0.0:
            # All points coincide with an existing center; duplicate one.
            idx = int(rng.integers(n))
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(closest), r, side="right"))
            idx = min(idx, n - 1)
        centers[c] = points[idx]
        d_new = _sq_dist_to_centers(points, centers[c:c + 1])[:, 0]
        np.minimum(closest, d_new, out=closest)
    return centers


def _lloyd(points, centers, max_iter, tol):
    """Lloyd iterations from given centers; empty clusters are reseeded with
    the point farthest from its center."""
    k = centers.shape[0]
    labels = None
    for _ in range(max_iter):
        d = _sq_dist_to_centers(points, centers)
        new_labels = np.argmin(d, axis=1)
        counts = np.bincount(new_labels, minlength=k)
        empties = np.flatnonzero(counts == 0)
        if empties.size:
            per_point = d[np.arange(points.shape[0]), new_labels].copy()
            for e in empties:
                far = int(np.argmax(per_point))
                if per_point[far] == -np.inf:
                    break    # fewer distinct points than clusters; leave it dead
                centers[e] = points[far]
                new_labels[far] = e
                per_point[far] = -np.inf
            counts = np.bincount(new_labels, minlength=k)
        sums = np.zeros_like(centers)
        np.add.at(sums, new_labels, points)
        new_centers = sums / np.maximum(counts, 1)[:, None]
        dead = counts == 0
        if np.any(dead):
            new_centers[dead] = centers[dead]
        shift = float(np.max(np.abs(new_centers - centers)))
        centers = new_centers
        if labels is not None and np.array_equal(labels, new_labels):
            labels = new_labels
            break
        labels = new_labels
        if shift <= tol:
            break
    d = _sq_dist_to_centers(points, centers)
    labels = np.argmin(d, axis=1)
    inertia = float(np.sum(d[np.arange(points.shape[0]), labels]))
    return labels, centers, inertia


def kmeans_fit(points, k, seed=42, n_restarts=50, max_iter=300, tol=1e-9):
    """Best-of-n_restarts k-means.

    Parameters follow the usual convention; restarts are seeded from
    np.random.SeedSequence(seed).spawn(n_restarts) so restart r is the same
    stream no matter how many restarts run or in what order.  The winner is
    the restart with strictly smallest inertia, earliest restart on ties.

    Returns (labels, centers, inertia).
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValidationError("k-means needs a nonempty 2-D point array")
    k = int(k)
    if not 1 <= k <= points.shape[0]:
        raise ValidationError(f"k must be in [1, {points.shape[0]}], got {k}")
    children = np.random.SeedSequence(seed).spawn(n_restarts)
    # Tolerance scales with the data so that rescaling all points by c > 0
    # replays the identical restart-by-restart decision sequence.
    tol_eff = tol * float(np.max(np.abs(points)))
    best = None
    with single_threaded_blas():
        for child in children:
            rng = np.random.Generator(np.random.Philox(child))
            centers = _plus_plus_init(points, k, rng)
            labels, centers, inertia = _lloyd(points, centers, max_iter, tol_eff)
            if best is None or inertia < best[2]:
                best = (labels, centers, inertia)
    return best
