"""Concrete Bregman generators.

Each constructor fixes the canonical affine representative of its generator,
so that ``grad`` is literally the function whose quasi-arithmetic mean gives
the left-sided centroid:

============== ====================== ================= ===============
name           F                      grad F            left centroid
============== ====================== ================= ===============
sqeuclid       x^2 / 2                x                 arithmetic mean
extkl          x log x - x            log x             geometric mean
itakura-saito  -log x                 -1/x              harmonic mean
bit-entropy    x log x + (1-x)log(1-x) logit x          --
multinomial    log(1 + sum exp theta) softmax tail      --
============== ====================== ================= ===============
"""
from __future__ import annotations

import numpy as np
from scipy.special import expit, logit, logsumexp, xlogy

from .core import Generator
from .errors import DomainError


def _positive(x):
    bad = np.flatnonzero(~(x > 0))
    if bad.size:
        i = int(bad[0])
        return f"coordinate {i} = {x[i]!r} is not > 0"
    return None


def _negative(y):
    bad = np.flatnonzero(~(y < 0))
    if bad.size:
        i = int(bad[0])
        return f"coordinate {i} = {y[i]!r} is not < 0"
    return None


def _unit_interval(x):
    bad = np.flatnonzero(~((x > 0) & (x < 1)))
    if bad.size:
        i = int(bad[0])
        return f"coordinate {i} = {x[i]!r} is not in (0, 1)"
    return None


def _anywhere(x):
    return None


def _check_dimension(d, minimum=1):
    if int(d) != d or d < minimum:
        raise ValueError(f"dimension must be an integer >= {minimum}, got {d!r}")
    return int(d)


def make_squared_euclidean(d: int) -> Generator:
    d = _check_dimension(d)
    return Generator(
        name="sqeuclid",
        dimension=d,
        F=lambda x: 0.5 * float(np.dot(x, x)),
        grad=lambda x: np.array(x, dtype=float),
        grad_inv=lambda y: np.array(y, dtype=float),
        F_conj=lambda y: 0.5 * float(np.dot(y, y)),
        bad_coordinate=_anywhere,
        bad_dual=_anywhere,
        is_symmetric=True,
    )


def make_extended_kl(d: int) -> Generator:
    d = _check_dimension(d)
    return Generator(
        name="extkl",
        dimension=d,
        F=lambda x: float(np.sum(xlogy(x, x) - x)),
        grad=np.log,
        grad_inv=np.exp,
        F_conj=lambda y: float(np.sum(np.exp(y))),
        bad_coordinate=_positive,
        bad_dual=_anywhere,
    )


def make_itakura_saito(d: int) -> Generator:
    d = _check_dimension(d)
    return Generator(
        name="itakura-saito",
        dimension=d,
        F=lambda x: -float(np.sum(np.log(x))),
        grad=lambda x: -1.0 / x,
        grad_inv=lambda y: -1.0 / y,
        # <x, y> - F(x) at x = -1/y
        F_conj=lambda y: -len(y) - float(np.sum(np.log(-y))),
        bad_coordinate=_positive,
        bad_dual=_negative,
    )


def make_bit_entropy(d: int) -> Generator:
    d = _check_dimension(d)
    return Generator(
        name="bit-entropy",
        dimension=d,
        F=lambda x: float(np.sum(xlogy(x, x) + xlogy(1 - x, 1 - x))),
        grad=logit,
        grad_inv=expit,
        F_conj=lambda y: float(np.sum(np.logaddexp(0.0, y))),
        bad_coordinate=_unit_interval,
        bad_dual=_anywhere,
    )


def _simplex_interior(eta):
    bad = _positive(eta)
    if bad is not None:
        return bad
    total = float(np.sum(eta))
    if not total < 1:
        return f"coordinates sum to {total!r}, not < 1"
    return None


def _log_partition(theta):
    # log(1 + sum exp theta), shifted by max(0, max theta)
    return float(logsumexp(np.concatenate(([0.0], theta))))


def _softmax_tail(theta):
    m = max(0.0, float(np.max(theta)))
    e = np.exp(theta - m)
    return e / (np.exp(-m) + np.sum(e))


def _softmax_tail_inv(eta):
    return np.log(eta) - np.log1p(-np.sum(eta))


def _dary_entropy(eta):
    rest = 1.0 - float(np.sum(eta))
    return float(np.sum(xlogy(eta, eta)) + xlogy(rest, rest))


def make_multinomial(d: int) -> Generator:
    """Log-normalizer of the multinomial family with ``d`` outcomes.

    The generator lives on R^(d-1) (natural parameters ``log(q_i / q_d)``);
    its gradient space is the open probability simplex without the last bin.
    """
    d = _check_dimension(d, minimum=2)

    def grad_inv(eta):
        why = _simplex_interior(eta)
        if why is not None:
            raise DomainError(f"expectation parameter {why}")
        return _softmax_tail_inv(eta)

    return Generator(
        name="multinomial",
        dimension=d - 1,
        F=_log_partition,
        grad=_softmax_tail,
        grad_inv=grad_inv,
        F_conj=_dary_entropy,
        bad_coordinate=_anywhere,
        bad_dual=_simplex_interior,
    )


GENERATORS = {
    "sqeuclid": make_squared_euclidean,
    "extkl": make_extended_kl,
    "itakura-saito": make_itakura_saito,
    "bit-entropy": make_bit_entropy,
    "multinomial": make_multinomial,
}


def make_generator(name: str, d: int) -> Generator:
    """Build a generator by its CLI name.

    For ``multinomial``, ``d`` is the dimension of the natural parameter
    vector, i.e. the number of bins minus one.
    """
    try:
        factory = GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown divergence {name!r}; choose from {sorted(GENERATORS)}") from None
    return factory(d + 1) if name == "multinomial" else factory(d)
