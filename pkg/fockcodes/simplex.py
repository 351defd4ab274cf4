# simplex.py - Combinatorics and geometry of the discrete simplex S_{q,N}
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence, Union
import numpy as np

from fockcodes.errors import CapExceededError

logger = logging.getLogger(__name__)

ENUMERATION_CAP = 10 ** 7


@dataclass(frozen=True)
class SimplexShape(object):
    """
     Shape of the simplex S_{q,N}: q modes sharing N excitations.
    """
    q: int
    N: int

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 1:
            raise ValueError("Number of modes q={} must be a positive integer.".format(self.q))
        if int(self.N) != self.N or self.N < 0:
            raise ValueError("Excitation N={} must be a nonnegative integer.".format(self.N))
        object.__setattr__(self, 'q', int(self.q))
        object.__setattr__(self, 'N', int(self.N))

    @classmethod
    def from_alpha(cls, alpha: float, N: int) -> 'SimplexShape':
        """ Shape with q = floor(alpha * N) modes """
        if alpha <= 0:
            raise ValueError("alpha={} must be positive.".format(alpha))
        return cls(max(1, math.floor(alpha * N)), N)

    @property
    def size(self) -> int:
        return simplex_size(self)


@dataclass(frozen=True)
class SimplexPoint(object):
    """
     Occupancy vector n on S_{q,N}. The total excitation N is cached.
    """
    coords: tuple
    N: int = field(init=False)

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        for i, c in enumerate(coords):
            if c < 0:
                raise ValueError("Entry {} of the point is negative ({}).".format(i, c))
        object.__setattr__(self, 'coords', coords)
        object.__setattr__(self, 'N', sum(coords))

    @property
    def q(self) -> int:
        return len(self.coords)

    @property
    def shape(self) -> SimplexShape:
        return SimplexShape(self.q, self.N)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


PointLike = Union[SimplexPoint, Sequence[int], np.ndarray]


def make_point(coords: Sequence[int]) -> SimplexPoint:
    """Builds a validated simplex point
    Parameters
    ----------
    coords : sequence of int
        per-mode photon counts

    Returns
    -------
    point : SimplexPoint
    """
    return SimplexPoint(tuple(coords))


def _as_array(p: PointLike) -> np.ndarray:
    if isinstance(p, SimplexPoint):
        return p.as_array()
    return np.asarray(p, dtype=np.int64)


def l1_distance(a: PointLike, b: PointLike) -> int:
    """Halved l1 distance between two points of the same simplex.
       The diameter of S_{q,N} under this metric is N.
    Parameters
    ----------
    a : SimplexPoint
    b : SimplexPoint

    Returns
    -------
    d : int
        1/2 sum_i |a_i - b_i|
    """
    x, y = _as_array(a), _as_array(b)
    if x.shape != y.shape or x.sum() != y.sum():
        raise ValueError("Points {} and {} lie on different simplices.".format(
            tuple(x.tolist()), tuple(y.tolist())))
    return int(np.abs(x - y).sum()) // 2


def simplex_size(shape: SimplexShape) -> int:
    """ |S_{q,N}| = C(N+q-1, q-1), exact """
    return math.comb(shape.N + shape.q - 1, shape.q - 1)


@lru_cache(maxsize=16)
def _colex_block(q: int, N: int) -> np.ndarray:
    if q == 1:
        return np.array([[N]], dtype=np.int64)
    parts = []
    for last in range(N, -1, -1):
        prefix = _colex_block(q - 1, N - last)
        tail = np.full((prefix.shape[0], 1), last, dtype=np.int64)
        parts.append(np.hstack([prefix, tail]))
    out = np.vstack(parts)
    out.setflags(write=False)
    return out


def simplex_array(shape: SimplexShape, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """All points of S_{q,N} as rows of an int64 array in colex order

    Colex order is the colexicographic order of the separator sets of
    the balls-and-bins picture: the last coordinate decreases slowest.

    Parameters
    ----------
    shape : SimplexShape
    cap : int, optional
        maximum number of points

    Returns
    -------
    points : np.ndarray
        (|S|, q) read-only array
    """
    size = simplex_size(shape)
    if size > cap:
        raise CapExceededError("Simplex S_({},{})".format(shape.q, shape.N), size, cap)
    return _colex_block(shape.q, shape.N)


def enumerate_simplex(shape: SimplexShape, cap: int = ENUMERATION_CAP) -> Iterator[SimplexPoint]:
    """ Yields every point of S_{q,N} once, in colex order """
    for row in simplex_array(shape, cap):
        yield SimplexPoint(tuple(row.tolist()))


def support_size(p: PointLike) -> int:
    """ Number of nonzero entries """
    return int(np.count_nonzero(_as_array(p)))


def inf_norm(p: PointLike) -> int:
    """ Largest entry (0 for the empty point) """
    x = _as_array(p)
    return int(x.max()) if x.size else 0


def ball_volume_bound(center: PointLike, radius: int) -> int:
    """Upper bound on the number of simplex points within `radius` of `center`
    Parameters
    ----------
    center : SimplexPoint
    radius : int
        0 <= radius <= N

    Returns
    -------
    bound : int
        sum_{j<=radius} C(j+m-1, m-1) C(j+q-1, q-1), m the support size
    """
    x = _as_array(center)
    N, q = int(x.sum()), x.size
    if radius < 0 or radius > N:
        raise ValueError("Radius {} outside [0, {}].".format(radius, N))
    m = support_size(x)
    total = 0
    for j in range(radius + 1):
        # removals from an empty support are only possible for j = 0
        removals = math.comb(j + m - 1, m - 1) if m > 0 else int(j == 0)
        total += removals * math.comb(j + q - 1, q - 1)
    return total


def exact_ball_size(center: PointLike, radius: int, cap: int = ENUMERATION_CAP) -> int:
    """ Number of simplex points within `radius` of `center`, by enumeration """
    x = _as_array(center)
    points = simplex_array(SimplexShape(x.size, int(x.sum())), cap)
    return int(np.count_nonzero(np.abs(points - x).sum(axis=1) // 2 <= radius))


def sum_prod_binom(shape: SimplexShape, r: Sequence[int]) -> int:
    """Sum over n in S_{q,N} of prod_i C(n_i, r_i)

    Equals C(N+q-1, |r|+q-1); zero when |r| > N.

    Parameters
    ----------
    shape : SimplexShape
    r : sequence of int
        loss pattern with q entries

    Returns
    -------
    total : int
    """
    r = tuple(getattr(r, 'r', r))
    if len(r) != shape.q:
        raise ValueError("Pattern has {} entries, expected {}.".format(len(r), shape.q))
    if any(ri < 0 for ri in r):
        raise ValueError("Pattern {} has a negative entry.".format(r))
    return math.comb(shape.N + shape.q - 1, sum(r) + shape.q - 1)


def classical_rate(size: int, shape: SimplexShape) -> float:
    """ log2 |C| / log2 |S_{q,N}| """
    if size < 1:
        raise ValueError("Code size {} must be positive.".format(size))
    dim = simplex_size(shape)
    if dim == 1:
        raise ValueError("Simplex S_({},{}) has a single point.".format(shape.q, shape.N))
    return math.log2(size) / math.log2(dim)


def coordinate_tail_probability(shape: SimplexShape, B: int) -> float:
    """ P[X_i >= B] for X uniform on S_{q,N} """
    if B <= 0:
        return 1.0
    if B > shape.N:
        return 0.0
    q, N = shape.q, shape.N
    return math.comb(N - B + q - 1, q - 1) / math.comb(N + q - 1, q - 1)


def inf_norm_tail_bound(shape: SimplexShape, B: int) -> float:
    """ Union bound on P[||X||_inf >= B] for X uniform on S_{q,N} """
    return min(1.0, shape.q * coordinate_tail_probability(shape, B))


def support_fraction_moments(shape: SimplexShape) -> tuple:
    """Mean and variance of |supp(X)|/q for X uniform on S_{q,N}
    Returns
    -------
    mean : float
        N / (N+q-1)
    var : float
        N (q-1) (N-1) / (q (N+q-1)^2 (N+q-2))
    """
    q, N = shape.q, shape.N
    if N == 0:
        return 0.0, 0.0
    a = N + q - 1
    mean = N / a
    if a == 1:
        return mean, 0.0
    var = N * (q - 1) * (N - 1) / (q * a * a * (a - 1))
    return mean, var


def support_tail_bound(shape: SimplexShape, eps: float) -> float:
    """ Chebyshev bound on P[| |supp(X)|/q - mean | >= eps] """
    if eps <= 0:
        raise ValueError("eps={} must be positive.".format(eps))
    _, var = support_fraction_moments(shape)
    return min(1.0, var / eps ** 2)
