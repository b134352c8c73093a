"""Hard Bregman k-means with sided or symmetrized cluster centers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import centroids as _c
from ._parallel import fixed_sum, ordered_map
from .core import Generator, bregman_divergence


class ClusteringError(ValueError):
    pass


@dataclass
class ClusteringResult:
    assignments: np.ndarray
    centers: List[np.ndarray]
    loss_trace: List[float] = field(default_factory=list)
    iterations: int = 0

    @property
    def loss(self) -> float:
        return self.loss_trace[-1] if self.loss_trace else float("nan")


def _divergence_fn(gen, side):
    if side == "right":
        return lambda p, c: bregman_divergence(gen, p, c)
    if side == "left":
        return lambda p, c: bregman_divergence(gen, c, p)
    return lambda p, c: 0.5 * (bregman_divergence(gen, p, c) + bregman_divergence(gen, c, p))


def bregman_kmeans(gen: Generator, points, k: int, side: str = "right", seed: int = 0,
                   max_rounds: int = 100, tol: float = 1e-12, **tolerances) -> ClusteringResult:
    """Lloyd iterations under ``D_F``.

    Orientation follows ``side``: points are assigned by ``D(p||c)`` for
    ``right``, ``D(c||p)`` for ``left`` and the half-sum for ``symmetrized``,
    and each center is the matching centroid of its cluster. The loss is the
    total divergence of points to their centers, recorded after every center
    update. Initial centers are ``k`` distinct input points drawn with
    ``numpy.random.default_rng(seed)``. Ties go to the lowest cluster index.
    An empty cluster is refilled with the point farthest from its center.
    """
    side = _c.normalize_side(side)
    ps = _c.as_point_set(gen, points)
    pts = ps.points
    n = pts.shape[0]
    if not (int(k) == k and k >= 1):
        raise ClusteringError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    if k > n:
        raise ClusteringError(f"k = {k} exceeds the number of points n = {n}")

    div = _divergence_fn(gen, side)
    rng = np.random.default_rng(seed)
    centers = [pts[i].copy() for i in rng.choice(n, size=k, replace=False)]

    def assign(centers):
        rows = ordered_map(lambda p: [div(p, c) for c in centers], pts)
        dist = np.array(rows)
        labels = np.argmin(dist, axis=1)
        best = dist[np.arange(n), labels]
        for j in range(k):
            if np.any(labels == j):
                continue
            counts = np.bincount(labels, minlength=k)
            movable = np.flatnonzero(counts[labels] > 1)
            i = int(movable[np.argmax(best[movable])])
            labels[i] = j
            best[i] = 0.0
            centers[j] = pts[i].copy()
        return labels

    def update(labels):
        out = []
        for j in range(k):
            members = pts[labels == j]
            out.append(_c.centroid(gen, members, side, **tolerances).centroid)
        return out

    def total_loss(labels, centers):
        return fixed_sum(div(p, centers[j]) for p, j in zip(pts, labels))

    trace: List[float] = []
    labels = None
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        new_labels = assign(centers)
        centers = update(new_labels)
        trace.append(total_loss(new_labels, centers))
        stable = labels is not None and np.array_equal(labels, new_labels)
        labels = new_labels
        if stable or (len(trace) > 1 and trace[-2] - trace[-1] < tol):
            break
    return ClusteringResult(assignments=labels, centers=centers, loss_trace=trace, iterations=rounds)
