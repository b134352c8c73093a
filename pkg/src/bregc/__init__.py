"""Bregman centroids: sided centroids as generalized means, symmetrized
centroids by a geodesic bisection walk, and Bregman k-means."""

from .centroids import (
    CentroidResult,
    WeightedPointSet,
    average_divergence,
    bisector_gap,
    centroid,
    dual_information_radius,
    exact_symmetrized_bounds,
    geodesic_point,
    information_radius,
    left_centroid,
    right_centroid,
    symmetrized_average_bounds,
    symmetrized_centroid,
)
from .clustering import ClusteringResult, bregman_kmeans
from .core import Generator, bregman_divergence, dual_divergence_gap, validate_domain
from .errors import ConvergenceError, DomainError, ShapeError
from .generators import (
    make_bit_entropy,
    make_extended_kl,
    make_generator,
    make_itakura_saito,
    make_multinomial,
    make_squared_euclidean,
)

__version__ = "0.1.0"
