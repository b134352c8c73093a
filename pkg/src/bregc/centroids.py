"""Sided and symmetrized Bregman centroids of weighted point sets.

The right-sided centroid minimizes ``sum_i w_i D(p_i||c)`` and is always the
weighted arithmetic mean. The left-sided centroid minimizes
``sum_i w_i D(c||p_i)`` and is the quasi-arithmetic mean for ``grad F``.
The symmetrized centroid is located by bisection on the dual-linear geodesic
joining the two, using the sign of the mixed-type bisector function
``D(c_R||q) - D(q||c_L)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._parallel import fixed_sum, ordered_map
from .core import IDENTITY_TOL, Generator, bregman_divergence
from .errors import ConvergenceError, ShapeError

log = logging.getLogger(__name__)

WEIGHT_TOL = 1e-12
DEFAULT_TOL_LAMBDA = 1e-12
DEFAULT_MAX_ITER = 200

SIDES = ("right", "left", "symmetrized")
_SIDE_ALIASES = {"right": "right", "left": "left", "symmetrized": "symmetrized", "sym": "symmetrized"}


def normalize_side(side: str) -> str:
    try:
        return _SIDE_ALIASES[side]
    except KeyError:
        raise ValueError(f"side must be one of right, left, sym; got {side!r}") from None


@dataclass(frozen=True)
class WeightedPointSet:
    """Points ``p_1..p_n`` (rows of ``points``) with a unit weight vector."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("a point set needs at least one point")
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (pts.shape[0],):
            raise ShapeError(f"{pts.shape[0]} points but {w.size} weights")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        if abs(fixed_sum(w) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {fixed_sum(w)!r}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, points) -> "WeightedPointSet":
        pts = np.asarray(points, dtype=float)
        n = pts.shape[0] if pts.ndim else 0
        return cls(pts, np.full(n, 1.0 / n) if n else np.empty(0))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class CentroidResult:
    """Outcome of a centroid computation.

    ``information_radius`` is the optimal value of the problem that was
    solved: the Jensen difference for right centroids, the average left
    divergence for left centroids and the average symmetrized divergence for
    the symmetrized one. ``symmetrized_average`` is always the average
    symmetrized divergence at ``centroid``, which makes radii of different
    sides comparable.
    """

    centroid: np.ndarray
    side: str
    information_radius: float
    symmetrized_average: float
    lambda_star: Optional[float] = None
    bisector_gap: Optional[float] = None
    iterations: int = 0


def as_point_set(gen: Generator, ps, weights=None) -> WeightedPointSet:
    """Coerce ``ps`` (array or WeightedPointSet) and check every point against ``gen``."""
    if not isinstance(ps, WeightedPointSet):
        pts = np.asarray(ps, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None] if gen.dimension == 1 else pts[None, :]
        ps = WeightedPointSet.uniform(pts) if weights is None else WeightedPointSet(pts, weights)
    elif weights is not None:
        ps = WeightedPointSet(ps.points, weights)
    if ps.dimension != gen.dimension:
        raise ShapeError(f"points have dimension {ps.dimension}, generator expects {gen.dimension}")
    for i, p in enumerate(ps.points):
        gen.check(p, f"point {i}")
    return ps


def _weighted_mean(w, rows):
    rows = np.asarray(rows, dtype=float)
    return np.array([fixed_sum(w * rows[:, j]) for j in range(rows.shape[1])])


def _right(ps):
    return _weighted_mean(ps.weights, ps.points)


def _left(gen, ps):
    grads = np.array([gen.grad(p) for p in ps.points])
    mean = gen.check_dual(_weighted_mean(ps.weights, grads), "mean of gradients")
    return gen.check(gen.grad_inv(mean), "left centroid")


def information_radius(gen: Generator, ps, weights=None) -> float:
    """Jensen difference ``sum_i w_i F(p_i) - F(sum_i w_i p_i)``."""
    ps = as_point_set(gen, ps, weights)
    values = [w * gen.F(p) for w, p in zip(ps.weights, ps.points)]
    return max(fixed_sum(values) - gen.F(_right(ps)), 0.0)


def dual_information_radius(gen: Generator, ps, weights=None) -> float:
    """Jensen difference of ``F_conj`` on the gradient points.

    This is the optimal value of the left-sided problem; it coincides with
    :func:`information_radius` only for quadratic generators.
    """
    ps = as_point_set(gen, ps, weights)
    grads = np.array([gen.grad(p) for p in ps.points])
    values = [w * gen.F_conj(g) for w, g in zip(ps.weights, grads)]
    return max(fixed_sum(values) - gen.F_conj(_weighted_mean(ps.weights, grads)), 0.0)


def average_divergence(gen: Generator, ps, c, side: str = "right", weights=None) -> float:
    """Weighted average divergence between the set and ``c``.

    ``right``: sum w_i D(p_i||c); ``left``: sum w_i D(c||p_i);
    ``symmetrized``: sum w_i (D(p_i||c) + D(c||p_i)) / 2.
    """
    side = normalize_side(side)
    ps = as_point_set(gen, ps, weights)
    c = gen.check(c, "c")

    if side == "right":
        term = lambda p: bregman_divergence(gen, p, c)
    elif side == "left":
        term = lambda p: bregman_divergence(gen, c, p)
    else:
        term = lambda p: 0.5 * (bregman_divergence(gen, p, c) + bregman_divergence(gen, c, p))
    terms = ordered_map(term, ps.points)
    return fixed_sum(w * t for w, t in zip(ps.weights, terms))


def right_centroid(gen: Generator, ps, weights=None) -> CentroidResult:
    ps = as_point_set(gen, ps, weights)
    c = gen.check(_right(ps), "right centroid")
    return CentroidResult(
        centroid=c,
        side="right",
        information_radius=information_radius(gen, ps),
        symmetrized_average=average_divergence(gen, ps, c, "symmetrized"),
    )


def left_centroid(gen: Generator, ps, weights=None) -> CentroidResult:
    ps = as_point_set(gen, ps, weights)
    c = _left(gen, ps)
    return CentroidResult(
        centroid=c,
        side="left",
        information_radius=average_divergence(gen, ps, c, "left"),
        symmetrized_average=average_divergence(gen, ps, c, "symmetrized"),
    )


def geodesic_point(gen: Generator, a, b, lam: float) -> np.ndarray:
    """``grad_inv((1 - lam) grad F(a) + lam grad F(b))``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam!r}")
    a = gen.check(a, "a")
    b = gen.check(b, "b")
    if lam == 0.0:
        return a.copy()
    if lam == 1.0:
        return b.copy()
    return _geodesic(gen, gen.grad(a), gen.grad(b), lam)


def _geodesic(gen, ga, gb, lam):
    y = gen.check_dual((1.0 - lam) * ga + lam * gb, "geodesic gradient point")
    return gen.grad_inv(y)


def bisector_gap(gen: Generator, cR, cL, q) -> float:
    """``D(cR||q) - D(q||cL)``; zero on the mixed-type bisector of (cR, cL)."""
    return bregman_divergence(gen, cR, q) - bregman_divergence(gen, q, cL)


def symmetrized_average_bounds(gen: Generator, ps, weights=None) -> tuple:
    """The pair ``(JS_F(P), D_F(c_R||c_L))``.

    These are the Jensen difference and the divergence between the sided
    centroids. The average symmetrized divergence at the symmetrized centroid
    is *not* always inside this interval; see :func:`exact_symmetrized_bounds`.
    """
    ps = as_point_set(gen, ps, weights)
    cR, cL = _right(ps), _left(gen, ps)
    return information_radius(gen, ps), bregman_divergence(gen, cR, cL)


def exact_symmetrized_bounds(gen: Generator, ps, weights=None) -> tuple:
    """Bounds that always bracket the average symmetrized divergence on the geodesic.

    Up to the constant ``(JS_F + JS_F*) / 2`` the average symmetrized
    divergence at q equals ``(D(c_R||q) + D(q||c_L)) / 2``, which is
    nonnegative and at most ``D(c_R||c_L) / 2`` at either endpoint.
    """
    ps = as_point_set(gen, ps, weights)
    base = 0.5 * (information_radius(gen, ps) + dual_information_radius(gen, ps))
    cR, cL = _right(ps), _left(gen, ps)
    return base, base + 0.5 * bregman_divergence(gen, cR, cL)


def symmetrized_centroid(gen: Generator, ps, weights=None, tol_lambda: float = DEFAULT_TOL_LAMBDA,
                         tol_gap: Optional[float] = None,
                         max_iter: int = DEFAULT_MAX_ITER) -> CentroidResult:
    """Symmetrized centroid by bisection on the geodesic between the sided centroids.

    Each step evaluates the geodesic point ``q_h`` at the midpoint ``h`` of
    the current lambda interval and keeps the half on which the bisector
    function ``D(c_R||q) - D(q||c_L)`` changes sign. The returned point is the
    last ``q_h``; iteration stops once ``|gap| <= tol_gap`` or the interval
    is no wider than ``tol_lambda``.

    ``tol_gap`` defaults to ``1e-10 * (1 + D(c_R||c_L))``. Raises
    :class:`ConvergenceError` (with ``best`` set) after ``max_iter`` steps.
    """
    if not (tol_lambda > 0):
        raise ValueError("tol_lambda must be > 0")
    if tol_gap is not None and not (tol_gap > 0):
        raise ValueError("tol_gap must be > 0")
    ps = as_point_set(gen, ps, weights)
    cR, cL = _right(ps), _left(gen, ps)

    if gen.is_symmetric or np.max(np.abs(cR - cL)) <= IDENTITY_TOL:
        return CentroidResult(
            centroid=cR,
            side="symmetrized",
            information_radius=average_divergence(gen, ps, cR, "symmetrized"),
            symmetrized_average=average_divergence(gen, ps, cR, "symmetrized"),
            lambda_star=0.0,
            bisector_gap=0.0,
            iterations=0,
        )

    gR, gL = gen.grad(cR), gen.grad(cL)
    if tol_gap is None:
        tol_gap = 1e-10 * (1.0 + bregman_divergence(gen, cR, cL))

    def finish(q, h, gap, iterations):
        radius = average_divergence(gen, ps, q, "symmetrized")
        return CentroidResult(
            centroid=q,
            side="symmetrized",
            information_radius=radius,
            symmetrized_average=radius,
            lambda_star=h,
            bisector_gap=gap,
            iterations=iterations,
        )

    lo, hi = 0.0, 1.0
    best = None
    previous = None
    for it in range(1, max_iter + 1):
        h = 0.5 * (lo + hi)
        q = _geodesic(gen, gR, gL, h)
        gap = bisector_gap(gen, cR, cL, q)
        if best is None or abs(gap) < abs(best[2]):
            best = (q, h, gap)
        if previous is not None and abs(gap) > abs(previous):
            log.debug("bisector gap grew from %g to %g at iteration %d", previous, gap, it)
        previous = gap
        if abs(gap) <= tol_gap:
            return finish(q, h, gap, it)
        if gap < 0:
            lo = h
        else:
            hi = h
        if hi - lo <= tol_lambda:
            return finish(q, h, gap, it)

    raise ConvergenceError(
        f"no convergence after {max_iter} iterations "
        f"(interval {hi - lo:g}, best gap {best[2]:g})",
        best=finish(best[0], best[1], best[2], max_iter),
    )


def centroid(gen: Generator, ps, side: str, weights=None, **tolerances) -> CentroidResult:
    """Dispatch on ``side`` (right, left, sym/symmetrized)."""
    side = normalize_side(side)
    if side == "right":
        return right_centroid(gen, ps, weights)
    if side == "left":
        return left_centroid(gen, ps, weights)
    return symmetrized_centroid(gen, ps, weights, **tolerances)
