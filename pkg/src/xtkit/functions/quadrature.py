"""Tensor Gauss-Legendre quadratures on the reference cube ``[0, 1]^d``."""

import functools
import itertools
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quadrature:
    dim: int
    points_per_direction: int
    points: np.ndarray
    weights: np.ndarray

    @property
    def order(self):
        """Maximal per-direction polynomial degree integrated exactly."""
        return 2 * self.points_per_direction - 1

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return zip(self.points, self.weights)


@functools.lru_cache(maxsize=None)
def quadrature_rule(dim, degree):
    """Rule with ``ceil((degree + 1) / 2)`` points per direction, direction 0 running fastest."""
    if degree < 0:
        raise ValueError(f'degree has to be nonnegative, got {degree}')
    n = max(1, -(-(degree + 1) // 2))
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (nodes + 1.)
    weights = 0.5 * weights
    idx = [rev[::-1] for rev in itertools.product(range(n), repeat=dim)]
    points = np.array([[nodes[i] for i in p] for p in idx]).reshape(len(idx), dim)
    w = np.array([np.prod([weights[i] for i in p]) for p in idx])
    points.flags.writeable = False
    w.flags.writeable = False
    return Quadrature(dim, n, points, w)
