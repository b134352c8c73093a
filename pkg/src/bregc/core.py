"""Bregman generators, divergences and Legendre duality.

A :class:`Generator` bundles a strictly convex function ``F`` with its
gradient, the inverse of the gradient and the convex conjugate ``F_conj``.
Everything else in the package is written against this interface.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, ShapeError

IDENTITY_TOL = 1e-12
ROUNDTRIP_TOL = 1e-10

Vector = np.ndarray


@dataclass(frozen=True)
class Generator:
    """A Bregman generator on an open convex domain of R^dimension.

    ``bad_coordinate`` returns ``None`` for an admissible point, otherwise a
    short description of the first offending coordinate. ``bad_dual`` does the
    same for points of the gradient space. ``metric`` holds per-coordinate
    weights of the inner product (``None`` means the plain dot product).
    """

    name: str
    dimension: int
    F: Callable[[Vector], float]
    grad: Callable[[Vector], Vector]
    grad_inv: Callable[[Vector], Vector]
    F_conj: Callable[[Vector], float]
    bad_coordinate: Callable[[Vector], Optional[str]]
    bad_dual: Callable[[Vector], Optional[str]]
    is_symmetric: bool = False
    metric: Optional[Vector] = None

    def inner(self, a: Vector, b: Vector) -> float:
        if self.metric is None:
            return float(np.dot(a, b))
        return float(np.dot(self.metric * a, b))

    def domain(self, x) -> bool:
        """Domain predicate."""
        x = np.asarray(x, dtype=float)
        return x.shape == (self.dimension,) and bool(np.all(np.isfinite(x))) \
            and self.bad_coordinate(x) is None

    def check(self, x, label: str = "point") -> Vector:
        """Coerce ``x`` to a float vector and raise unless it is admissible."""
        x = _vector(x, self.dimension, label)
        if not np.all(np.isfinite(x)):
            i = int(np.flatnonzero(~np.isfinite(x))[0])
            raise DomainError(f"{label}: coordinate {i} is not finite ({x[i]!r})")
        why = self.bad_coordinate(x)
        if why is not None:
            raise DomainError(f"{label}: {why} (outside the domain of {self.name})")
        return x

    def check_dual(self, y, label: str = "gradient point") -> Vector:
        y = _vector(y, self.dimension, label)
        if not np.all(np.isfinite(y)):
            raise DomainError(f"{label}: non-finite entry")
        why = self.bad_dual(y)
        if why is not None:
            raise DomainError(f"{label}: {why} (outside the gradient space of {self.name})")
        return y


def _vector(x, dimension: int, label: str) -> Vector:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1 or x.shape[0] != dimension:
        raise ShapeError(f"{label}: expected a vector of length {dimension}, got shape {x.shape}")
    return x


def validate_domain(gen: Generator, p) -> bool:
    """Return True iff ``p`` is admissible for ``gen``.

    Raises :class:`ShapeError` on a dimension mismatch.
    """
    p = _vector(p, gen.dimension, "point")
    return gen.domain(p)


def bregman_divergence(gen: Generator, p, q, tol: float = IDENTITY_TOL) -> float:
    """D_F(p||q) = F(p) - F(q) - <p - q, grad F(q)>.

    Points closer than ``tol`` in the max-norm are treated as equal and give
    exactly 0. Negative round-off is clipped to 0.
    """
    p = gen.check(p, "p")
    q = gen.check(q, "q")
    if np.max(np.abs(p - q)) <= tol:
        return 0.0
    d = gen.F(p) - gen.F(q) - gen.inner(p - q, gen.grad(q))
    return max(float(d), 0.0)


def conjugate_divergence(gen: Generator, a, b) -> float:
    """D_{F*}(a||b) for gradient-space points, evaluated through ``F_conj``."""
    a = gen.check_dual(a, "a")
    b = gen.check_dual(b, "b")
    d = gen.F_conj(a) - gen.F_conj(b) - gen.inner(a - b, gen.grad_inv(b))
    return float(d)


def dual_divergence_gap(gen: Generator, p, q) -> float:
    """|D_F(p||q) - D_{F*}(grad F(q)||grad F(p))|; zero up to round-off."""
    p = gen.check(p, "p")
    q = gen.check(q, "q")
    primal = gen.F(p) - gen.F(q) - gen.inner(p - q, gen.grad(q))
    dual = conjugate_divergence(gen, gen.grad(q), gen.grad(p))
    return abs(float(primal) - dual)
