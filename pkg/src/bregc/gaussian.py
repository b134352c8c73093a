"""Multivariate normals as a Bregman geometry.

Three coordinate systems describe N(mu, Sigma):

* source       (mu, Sigma)
* natural      (theta, Theta) = (Sigma^-1 mu, Sigma^-1 / 2)
* expectation  (eta, H)       = (mu, -(Sigma + mu mu^T))

The log-normalizer ``F`` acts on natural coordinates and its gradient maps
them to expectation coordinates. Pairs (vector, symmetric matrix) are
flattened into one vector (the matrix as its packed upper triangle) and the
inner product weighs off-diagonal entries twice, so that
``<x, y> = <v, v'> + Tr(M M'^T)``.

KL(N_p||N_q) is the Bregman divergence with the arguments swapped,
``D_F(Theta_q||Theta_p)``. As a consequence a KL-right centroid
(``min sum KL(N_i||c)``) is the Bregman-left centroid in natural coordinates
and vice versa. Sides named ``right``/``left`` here follow the Bregman
convention; ``kl-right``/``kl-left`` are accepted as aliases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from . import centroids as _c
from .core import Generator, bregman_divergence
from .errors import DomainError, ShapeError

SYMMETRY_TOL = 1e-12


def _cholesky(m, what):
    try:
        return cho_factor(m, lower=True, check_finite=True)
    except (LinAlgError, ValueError):
        raise DomainError(f"{what} is not positive definite") from None


def _logdet(factor):
    return 2.0 * float(np.sum(np.log(np.diag(factor[0]))))


def _spd_inverse(m, what):
    f = _cholesky(m, what)
    inv = cho_solve(f, np.eye(m.shape[0]))
    return 0.5 * (inv + inv.T)


def _symmetric(m, what):
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"{what} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError(f"{what} has non-finite entries")
    if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
        raise DomainError(f"{what} is not symmetric")
    return 0.5 * (m + m.T)


def _pair(vec, mat, vname, mname):
    vec = np.atleast_1d(np.asarray(vec, dtype=float))
    mat = _symmetric(mat, mname)
    if vec.shape != (mat.shape[0],):
        raise ShapeError(f"{vname} has length {vec.size} but {mname} is {mat.shape[0]}x{mat.shape[0]}")
    return vec, mat


@dataclass(frozen=True)
class GaussianSource:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean, cov = _pair(self.mean, self.cov, "mean", "covariance")
        _cholesky(cov, "covariance")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dimension(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class GaussianNatural:
    theta: np.ndarray
    Theta: np.ndarray

    def __post_init__(self):
        theta, Theta = _pair(self.theta, self.Theta, "theta", "Theta")
        _cholesky(Theta, "Theta")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "Theta", Theta)


@dataclass(frozen=True)
class GaussianExpectation:
    eta: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        eta, H = _pair(self.eta, self.H, "eta", "H")
        _cholesky(-(H + np.outer(eta, eta)), "-(H + eta eta^T)")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "H", H)


def source_to_natural(g: GaussianSource) -> GaussianNatural:
    f = _cholesky(g.cov, "covariance")
    precision = cho_solve(f, np.eye(g.dimension))
    precision = 0.5 * (precision + precision.T)
    return GaussianNatural(cho_solve(f, g.mean), 0.5 * precision)


def natural_to_source(g: GaussianNatural) -> GaussianSource:
    cov = 0.5 * _spd_inverse(g.Theta, "Theta")
    return GaussianSource(cov @ g.theta, cov)


def natural_to_expectation(g: GaussianNatural) -> GaussianExpectation:
    # eta = Theta^-1 theta / 2, H = -Theta^-1 / 2 - (Theta^-1 theta)(Theta^-1 theta)^T / 4
    inv = _spd_inverse(g.Theta, "Theta")
    v = inv @ g.theta
    return GaussianExpectation(0.5 * v, -0.5 * inv - 0.25 * np.outer(v, v))


def expectation_to_natural(g: GaussianExpectation) -> GaussianNatural:
    # theta = -(H + eta eta^T)^-1 eta, Theta = -(H + eta eta^T)^-1 / 2
    precision = _spd_inverse(-(g.H + np.outer(g.eta, g.eta)), "-(H + eta eta^T)")
    return GaussianNatural(precision @ g.eta, 0.5 * precision)


def expectation_to_source(g: GaussianExpectation) -> GaussianSource:
    return GaussianSource(g.eta, -(g.H + np.outer(g.eta, g.eta)))


def source_to_expectation(g: GaussianSource) -> GaussianExpectation:
    return GaussianExpectation(g.mean, -(g.cov + np.outer(g.mean, g.mean)))


# ---------------------------------------------------------------------------
# flattening

def packed_dimension(d: int) -> int:
    return d * (d + 3) // 2


def _dimension_from_packed(n: int) -> int:
    d = int(round((-3 + math.sqrt(9 + 8 * n)) / 2))
    if packed_dimension(d) != n:
        raise ShapeError(f"length {n} is not d(d+3)/2 for any d")
    return d


def pack(vec, mat) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    return np.concatenate([np.asarray(vec, dtype=float), mat[np.triu_indices(mat.shape[0])]])


def unpack(x, d: Optional[int] = None):
    x = np.asarray(x, dtype=float)
    if d is None:
        d = _dimension_from_packed(x.shape[0])
    if x.shape != (packed_dimension(d),):
        raise ShapeError(f"expected a packed vector of length {packed_dimension(d)}, got {x.shape}")
    mat = np.zeros((d, d))
    iu = np.triu_indices(d)
    mat[iu] = x[d:]
    mat[(iu[1], iu[0])] = x[d:]
    return x[:d].copy(), mat


def composite_metric(d: int) -> np.ndarray:
    iu = np.triu_indices(d)
    return np.concatenate([np.ones(d), np.where(iu[0] == iu[1], 1.0, 2.0)])


def composite_inner(a, b) -> float:
    """``<v, v'> + Tr(M M'^T)`` for two (vector, matrix) pairs."""
    (v, m), (w, n) = a, b
    return float(np.dot(v, w) + np.trace(np.asarray(m) @ np.asarray(n).T))


def natural_vector(g: GaussianSource) -> np.ndarray:
    n = source_to_natural(g)
    return pack(n.theta, n.Theta)


def source_from_vector(x, d: Optional[int] = None) -> GaussianSource:
    theta, Theta = unpack(x, d)
    return natural_to_source(GaussianNatural(theta, Theta))


def gaussian_generator(d: int) -> Generator:
    """Log-normalizer of d-variate normals over packed natural coordinates."""
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {d!r}")
    d = int(d)
    log_pi = 0.5 * d * math.log(math.pi)
    log_2pie = 0.5 * d * math.log(2 * math.pi * math.e)

    def F(x):
        theta, Theta = unpack(x, d)
        f = _cholesky(Theta, "Theta")
        return 0.25 * float(theta @ cho_solve(f, theta)) - 0.5 * _logdet(f) + log_pi

    def grad(x):
        e = natural_to_expectation(GaussianNatural(*unpack(x, d)))
        return pack(e.eta, e.H)

    def grad_inv(y):
        n = expectation_to_natural(GaussianExpectation(*unpack(y, d)))
        return pack(n.theta, n.Theta)

    def F_conj(y):
        eta, H = unpack(y, d)
        f = _cholesky(-H, "-H")
        s = float(eta @ cho_solve(f, eta))  # -eta^T H^-1 eta
        return -0.5 * math.log1p(-s) - 0.5 * _logdet(f) - log_2pie

    def bad_coordinate(x):
        _, Theta = unpack(x, d)
        try:
            _cholesky(Theta, "Theta")
        except DomainError as exc:
            return str(exc)
        return None

    def bad_dual(y):
        eta, H = unpack(y, d)
        try:
            _cholesky(-(H + np.outer(eta, eta)), "-(H + eta eta^T)")
        except DomainError as exc:
            return str(exc)
        return None

    return Generator(
        name="gaussian",
        dimension=packed_dimension(d),
        F=F,
        grad=grad,
        grad_inv=grad_inv,
        F_conj=F_conj,
        bad_coordinate=bad_coordinate,
        bad_dual=bad_dual,
        metric=composite_metric(d),
    )


def gaussian_kl(p: GaussianSource, q: GaussianSource) -> float:
    """KL(N_p||N_q) as the Bregman divergence D_F(Theta_q||Theta_p)."""
    if p.dimension != q.dimension:
        raise ShapeError("normals of different dimension")
    gen = gaussian_generator(p.dimension)
    return bregman_divergence(gen, natural_vector(q), natural_vector(p))


# ---------------------------------------------------------------------------
# centroids

_GAUSSIAN_SIDES = {
    "right": "right",
    "left": "left",
    "sym": "symmetrized",
    "symmetrized": "symmetrized",
    "midpoint": "midpoint",
    "kl-right": "left",
    "kl-left": "right",
}


@dataclass(frozen=True)
class GaussianCentroid:
    """A centroid normal plus the underlying computation in natural coordinates.

    ``information_radius`` is the average symmetrized KL divergence from the
    inputs to ``normal``, the quantity that makes all sides comparable.
    For the symmetrized side the lambda = 1/2 geodesic point is reported as
    ``midpoint`` with its own radius.
    """

    normal: GaussianSource
    result: _c.CentroidResult
    midpoint: Optional[GaussianSource] = None
    midpoint_radius: Optional[float] = None

    @property
    def information_radius(self) -> float:
        return self.result.symmetrized_average


def gaussian_centroids(normals: Sequence[GaussianSource], weights=None, side: str = "sym",
                       **tolerances) -> GaussianCentroid:
    if not normals:
        raise ValueError("need at least one normal")
    try:
        side = _GAUSSIAN_SIDES[side]
    except KeyError:
        raise ValueError(f"unknown side {side!r}; choose from {sorted(_GAUSSIAN_SIDES)}") from None
    d = normals[0].dimension
    if any(g.dimension != d for g in normals):
        raise ShapeError("normals of different dimension")
    gen = gaussian_generator(d)
    ps = _c.as_point_set(gen, np.array([natural_vector(g) for g in normals]), weights)

    if side == "midpoint":
        result = _midpoint(gen, ps)
        return GaussianCentroid(source_from_vector(result.centroid, d), result)

    result = _c.centroid(gen, ps, side, **tolerances)
    normal = source_from_vector(result.centroid, d)
    if side != "symmetrized":
        return GaussianCentroid(normal, result)
    mid = _midpoint(gen, ps)
    return GaussianCentroid(normal, result, source_from_vector(mid.centroid, d),
                            mid.symmetrized_average)


def _midpoint(gen, ps) -> _c.CentroidResult:
    cR = _c.right_centroid(gen, ps).centroid
    cL = _c.left_centroid(gen, ps).centroid
    q = _c.geodesic_point(gen, cR, cL, 0.5)
    radius = _c.average_divergence(gen, ps, q, "symmetrized")
    return _c.CentroidResult(
        centroid=q,
        side="midpoint",
        information_radius=radius,
        symmetrized_average=radius,
        lambda_star=0.5,
        bisector_gap=_c.bisector_gap(gen, cR, cL, q),
    )
