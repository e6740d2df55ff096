"""Singular value decomposition of the modularity operator.

The leading singular triplets (mu_k, u_k, v_k) are the relaxed optimizers of
the bimodularity objective: u_k^T B v_k = mu_k, and no unit pair does better
within the span of the discarded components.  Dense operators go through
LAPACK; implicit ones through randomized subspace iteration, which only ever
touches the operator via block products.

All linear algebra here runs with BLAS pinned to one thread.  Multithreaded
GEMM reductions reorder floating-point sums with the core count, and the
decomposition must be bit-identical on any machine for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._threads import single_threaded_blas
from .errors import ConvergenceError, ValidationError
from .graph import DirectedGraph
from .modularity import ModularityOperator, build_modularity

OVERSAMPLE_DEFAULT = 10


@dataclass(frozen=True)
class SpectralComponent:
    """One singular triplet of the modularity operator.

    Parameters
    ----------
    index : int
        Rank of the component, 0 for the largest singular value.
    singular_value : float
        mu_k >= 0.
    u, v : ndarray
        Unit-norm sending and receiving vectors.  Oriented so the largest
        |u| entry is positive (first such entry on ties).
    assort_sign : int
        +1 when u and v point the same way (u . v >= 0): the component pairs
        senders with receivers in the same group.  -1 when they oppose, the
        flow-like case where one group feeds another.
    """

    index: int
    singular_value: float
    u: np.ndarray
    v: np.ndarray
    assort_sign: int

    @property
    def signed_value(self):
        """Singular value carrying the assortativity sign."""
        return self.assort_sign * self.singular_value

    def quality(self, total_weight):
        """Bimodularity of the relaxed pair (u, v): mu_k / (2m)."""
        return self.singular_value / (2.0 * total_weight)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ordered components plus how they were obtained.

    ``mode`` is 'dense', 'implicit', or 'symmetrized'; ``iterations`` and
    ``residual`` describe the subspace iteration (zero for direct solves).
    """

    components: tuple
    mode: str
    iterations: int = 0
    residual: float = 0.0

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, k):
        return self.components[k]

    @property
    def singular_values(self):
        return np.array([c.singular_value for c in self.components])

    @property
    def signed_values(self):
        return np.array([c.signed_value for c in self.components])


def _orient(u, v):
    """Flip (u, v) together so the largest-magnitude entry of u is positive.

    np.argmax takes the first maximum, which settles ties at the lowest
    index.  A zero u is left untouched.
    """
    idx = int(np.argmax(np.abs(u)))
    if u[idx] < 0:
        return -u, -v
    return u, v


def _component(index, mu, u, v):
    u, v = _orient(u, v)
    dot = float(u @ v)
    sign = -1 if dot < 0 else 1
    u.setflags(write=False)
    v.setflags(write=False)
    return SpectralComponent(index=index, singular_value=float(mu), u=u, v=v,
                             assort_sign=sign)


def _dense_svd(op, n_components):
    with single_threaded_blas():
        umat, svals, vtmat = scipy.linalg.svd(op.dense(), full_matrices=False)
    comps = tuple(_component(k, svals[k], umat[:, k].copy(), vtmat[k, :].copy())
                  for k in range(n_components))
    return SpectralDecomposition(comps, mode="dense")


def _randomized_svd(op, n_components, tol, max_iter, seed, oversample):
    """Subspace iteration on B with QR re-orthonormalization.

    Iterates Q <- orth(B orth(B^T Q)) from a Gaussian start and reads the
    triplets off the small SVD of Q^T B.  Convergence is declared when the
    leading ``n_components`` singular values move by less than ``tol``
    relative to the largest one.
    """
    n = op.shape[0]
    width = min(n, n_components + oversample)
    rng = np.random.default_rng(seed)
    with single_threaded_blas():
        sketch = rng.standard_normal((n, width))
        q_block, _ = np.linalg.qr(op.matvec(sketch))
        prev = None
        residual = None
        for iteration in range(1, max_iter + 1):
            w_block, _ = np.linalg.qr(op.rmatvec(q_block))
            q_block, _ = np.linalg.qr(op.matvec(w_block))
            projected = op.rmatvec(q_block).T          # Q^T B, (width, n)
            u_small, svals, vtmat = scipy.linalg.svd(projected, full_matrices=False)
            head = svals[:n_components]
            scale = max(float(head[0]), 1e-300)
            if float(head[0]) < 1e-14:
                residual = 0.0
                break
            if prev is not None:
                residual = float(np.max(np.abs(head - prev)) / scale)
                if residual <= tol:
                    break
            prev = head.copy()
        else:
            raise ConvergenceError(
                f"subspace iteration did not reach tol={tol:g}",
                residual=residual, iterations=max_iter)
        u_full = q_block @ u_small
    comps = tuple(_component(k, svals[k], u_full[:, k].copy(), vtmat[k, :].copy())
                  for k in range(n_components))
    return SpectralDecomposition(comps, mode="implicit",
                                 iterations=iteration, residual=residual)


def decompose(operator, n_components, tol=1e-10, max_iter=1000, seed=0,
              oversample=OVERSAMPLE_DEFAULT):
    """Leading singular triplets of the modularity operator.

    Parameters
    ----------
    operator : ModularityOperator or DirectedGraph
        A graph is wrapped with build_modularity() first.
    n_components : int
        Number of triplets, 1 <= n_components <= n_nodes.
    tol, max_iter : float, int
        Stopping rule for the implicit route; ignored by the dense one.
    seed : int
        Seed for the Gaussian sketch of the implicit route.
    oversample : int
        Extra subspace columns beyond n_components.

    Returns
    -------
    SpectralDecomposition
        Components in descending singular-value order.

    Raises
    ------
    ConvergenceError
        If the implicit route exhausts max_iter, with the last residual.
    """
    if isinstance(operator, DirectedGraph):
        operator = build_modularity(operator)
    if not isinstance(operator, ModularityOperator):
        raise ValidationError("decompose expects a ModularityOperator or DirectedGraph")
    n_components = int(n_components)
    if not 1 <= n_components <= operator.shape[0]:
        raise ValidationError(
            f"n_components must be in [1, {operator.shape[0]}], got {n_components}")
    if operator.mode == "dense":
        return _dense_svd(operator, n_components)
    return _randomized_svd(operator, n_components, tol, max_iter, seed, oversample)


def classify_component(component: SpectralComponent):
    """'assortative' when u and v agree in direction (u . v >= 0), else
    'dissortative'.  The boundary u . v = 0 counts as assortative."""
    return "assortative" if component.assort_sign > 0 else "dissortative"


def baseline_symmetrized(graph: DirectedGraph, n_components):
    """Eigendecomposition of the symmetrized operator (B + B^T)/2.

    This is what single-partition modularity methods effectively optimize on
    a directed graph; comparing its spectrum with the singular spectrum of B
    shows what symmetrizing discards.  Components are ordered by algebraic
    eigenvalue, largest first, with u the oriented eigenvector and
    v = sign(lambda) u so that u^T M v equals the stored singular_value.

    Returns
    -------
    SpectralDecomposition
        mode='symmetrized'; signed_value of each component is the eigenvalue.
    """
    n_components = int(n_components)
    if not 1 <= n_components <= graph.n_nodes:
        raise ValidationError(
            f"n_components must be in [1, {graph.n_nodes}], got {n_components}")
    op = build_modularity(graph, mode="dense", dense_cap=graph.n_nodes)
    sym = 0.5 * (op.dense() + op.dense().T)
    with single_threaded_blas():
        evals, evecs = scipy.linalg.eigh(sym)
    order = np.argsort(-evals, kind="stable")[:n_components]
    comps = []
    for rank, idx in enumerate(order):
        lam = float(evals[idx])
        u = evecs[:, idx].copy()
        v = u if lam >= 0 else -u
        comp = _component(rank, abs(lam), u, v.copy())
        comps.append(comp)
    return SpectralDecomposition(tuple(comps), mode="symmetrized")
