"""Histograms (points of the open probability simplex) as multinomials.

A histogram ``q`` with ``d`` bins has natural parameters
``theta_i = log(q_i / q_d)`` for ``i < d``; the last bin is the reference.
With the multinomial log-normalizer ``F``,
``KL(p||q) = D_F(theta_q||theta_p)``.

Centroid sides in this module follow the KL convention used for
histograms: the ``right`` centroid minimizes ``sum_i w_i KL(p_i||c)``
and is the arithmetic mean of the histograms; the ``left`` centroid
minimizes ``sum_i w_i KL(c||p_i)`` and is their normalized geometric mean.
In natural coordinates these are respectively the Bregman-left and
Bregman-right centroids.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from . import centroids as _c
from ._parallel import fixed_sum
from .errors import DomainError, ShapeError
from .generators import make_multinomial

DEFAULT_EPS_FRACTION = 1e-10
SUM_TOL = 1e-12


def check_histogram(q, label: str = "histogram") -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.ndim != 1 or q.shape[0] < 2:
        raise ShapeError(f"{label}: expected a vector with at least 2 bins, got shape {q.shape}")
    bad = np.flatnonzero(~(q > 0) | ~np.isfinite(q))
    if bad.size:
        i = int(bad[0])
        raise DomainError(f"{label}: bin {i} = {q[i]!r} is not > 0")
    total = fixed_sum(q)
    if abs(total - 1.0) > SUM_TOL:
        raise DomainError(f"{label}: bins sum to {total!r}, not 1")
    return q


def smooth_histogram(counts, eps_fraction: float = DEFAULT_EPS_FRACTION) -> np.ndarray:
    """Add ``eps = eps_fraction * sum(counts) / d`` to every bin and normalize."""
    counts = np.asarray(counts, dtype=float)
    if counts.ndim != 1 or counts.shape[0] < 2:
        raise ShapeError(f"counts must be a vector with at least 2 bins, got shape {counts.shape}")
    if not np.all(np.isfinite(counts)) or np.any(counts < 0):
        raise ValueError("counts must be finite and nonnegative")
    if not eps_fraction > 0:
        raise ValueError("eps_fraction must be > 0")
    total = fixed_sum(counts)
    if total <= 0:
        raise ValueError("counts are all zero")
    shifted = counts + eps_fraction * total / counts.shape[0]
    return shifted / fixed_sum(shifted)


def histogram_to_natural(q) -> np.ndarray:
    q = check_histogram(q)
    logs = np.log(q)
    return logs[:-1] - logs[-1]


def natural_to_histogram(theta) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.ndim != 1 or not np.all(np.isfinite(theta)):
        raise ValueError("theta must be a finite vector")
    full = np.concatenate([theta, [0.0]])
    return np.exp(full - logsumexp(full))


def discrete_kl(p, q) -> float:
    """Relative entropy ``sum_i p_i log(p_i / q_i)`` in nats."""
    p = check_histogram(p, "p")
    q = check_histogram(q, "q")
    if p.shape != q.shape:
        raise ShapeError(f"histograms have {p.shape[0]} and {q.shape[0]} bins")
    return max(fixed_sum(p * (np.log(p) - np.log(q))), 0.0)


_SIDES = {
    "right": "right",
    "left": "left",
    "sym": "symmetrized",
    "symmetrized": "symmetrized",
    "kl-right": "right",
    "kl-left": "left",
}


@dataclass(frozen=True)
class HistogramCentroid:
    """Centroid histogram together with both sided centroids.

    ``result`` is the computation in natural coordinates;
    ``arithmetic``/``geometric`` are the KL-right/KL-left centroid histograms
    and ``natural_right``/``natural_left`` the Bregman-sided centroids in
    natural coordinates (the images of ``geometric``/``arithmetic``).
    """

    histogram: np.ndarray
    result: _c.CentroidResult
    arithmetic: np.ndarray
    geometric: np.ndarray
    natural_right: np.ndarray
    natural_left: np.ndarray


def histogram_centroid(histograms: Sequence, side: str = "sym", weights=None,
                       **tolerances) -> HistogramCentroid:
    try:
        side = _SIDES[side]
    except KeyError:
        raise ValueError(f"unknown side {side!r}; choose from {sorted(_SIDES)}") from None
    if len(histograms) == 0:
        raise ValueError("need at least one histogram")
    hs = [check_histogram(h, f"histogram {i}") for i, h in enumerate(histograms)]
    d = hs[0].shape[0]
    if any(h.shape[0] != d for h in hs):
        raise ShapeError("histograms have different numbers of bins")

    gen = make_multinomial(d)
    ps = _c.as_point_set(gen, np.array([histogram_to_natural(h) for h in hs]), weights)
    bregman_right = _c.right_centroid(gen, ps)
    bregman_left = _c.left_centroid(gen, ps)
    if side == "right":
        result = bregman_left
    elif side == "left":
        result = bregman_right
    else:
        result = _c.symmetrized_centroid(gen, ps, **tolerances)

    # the Bregman-left centroid is grad_inv of the mean of expectation parameters,
    # i.e. the arithmetic mean of the histograms
    return HistogramCentroid(
        histogram=natural_to_histogram(result.centroid),
        result=result,
        arithmetic=natural_to_histogram(bregman_left.centroid),
        geometric=natural_to_histogram(bregman_right.centroid),
        natural_right=bregman_right.centroid,
        natural_left=bregman_left.centroid,
    )


def histogram_skl_centroid(histograms: Sequence, weights=None, **tolerances) -> HistogramCentroid:
    """Symmetrized-KL centroid of histograms (geodesic walk in natural coordinates)."""
    return histogram_centroid(histograms, "sym", weights, **tolerances)
