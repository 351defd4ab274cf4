# classical_codes.py - Classical l1 codes on the simplex: ensembles, greedy GV, statistics
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
from dataclasses import dataclass
from typing import Iterator, Sequence
import numpy as np

from fockcodes.errors import CapExceededError
from fockcodes.simplex import SimplexShape, SimplexPoint, PointLike, ENUMERATION_CAP, \
    simplex_array, ball_volume_bound
from fockcodes.utils import check_seed, make_rng, read_json, write_json, check_keys

logger = logging.getLogger(__name__)

CODE_ENSEMBLES = ('uniform', 'multinomial', 'greedy_gv', 'explicit')
PAIR_CAP = 10 ** 8
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class TypicalityParams(object):
    """
     Typical set of the GV construction: the support fraction stays within
     N^(-1/2+xi) of alpha/(1+alpha) and the largest entry within
     (1+eps) log_{1+alpha} N.
    """
    alpha: float
    eps: float
    xi: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha={} must be positive.".format(self.alpha))
        if self.eps <= 0:
            raise ValueError("eps={} must be positive.".format(self.eps))
        if not 0.0 < self.xi < 0.5:
            raise ValueError("xi={} must lie in (0, 1/2).".format(self.xi))

    def support_window(self, N: int) -> float:
        return N ** (-0.5 + self.xi)

    def inf_norm_cap(self, N: int) -> float:
        return (1 + self.eps) * math.log(N) / math.log(1 + self.alpha)


class ClassicalCode(object):
    """
     A sequence of simplex points, stored as an (L, q) int64 array,
     together with its ensemble metadata.
     Repeated words are allowed.
    """

    def __init__(self, shape: SimplexShape,
                 words,
                 ensemble: str = 'explicit',
                 seed: int = None,
                 claimed_distance: int = None,
                 alpha: float = None):
        """
        Parameters
        ----------
        shape: SimplexShape
            simplex S_{q,N} holding the words
        words: array_like
            (L, q) integer array or sequence of SimplexPoint
        ensemble: str
            one of 'uniform', 'multinomial', 'greedy_gv', 'explicit'
        seed: int, optional
            seed of the sampler (absent for explicit codes)
        claimed_distance: int, optional
            distance the construction guarantees
        alpha: float, optional
            mode ratio q/N used by the construction
        """
        if shape is None:
            raise ValueError("Shape can't be None.")
        if ensemble not in CODE_ENSEMBLES:
            raise ValueError("Unknown ensemble '{}', expected one of {}.".format(ensemble, CODE_ENSEMBLES))

        self.shape = shape
        rows = [w.coords if isinstance(w, SimplexPoint) else w for w in words]
        self.words = np.array(rows, dtype=np.int64).reshape(-1, shape.q)
        self.ensemble = ensemble
        self.seed = None if seed is None else check_seed(seed)
        self.claimed_distance = None if claimed_distance is None else int(claimed_distance)
        self.alpha = None if alpha is None else float(alpha)
        self.verified_distance = None
        self.check()

    @property
    def q(self) -> int:
        return self.shape.q

    @property
    def N(self) -> int:
        return self.shape.N

    @property
    def distance_verified(self) -> bool:
        return self.verified_distance is not None

    def __len__(self):
        return self.words.shape[0]

    def word(self, i: int) -> SimplexPoint:
        return SimplexPoint(tuple(self.words[i].tolist()))

    def points(self) -> list:
        return [self.word(i) for i in range(len(self))]

    def check(self):
        """ Checks validity of the code """
        if self.words.ndim != 2 or self.words.shape[1] != self.shape.q:
            raise ValueError("Words must have {} entries.".format(self.shape.q))
        if np.any(self.words < 0):
            i = int(np.argwhere(self.words < 0)[0][0])
            raise ValueError("Word {} has a negative entry.".format(i))
        sums = self.words.sum(axis=1)
        if np.any(sums != self.shape.N):
            i = int(np.flatnonzero(sums != self.shape.N)[0])
            raise ValueError("Word {} has excitation {} instead of {}.".format(i, sums[i], self.shape.N))
        if self.ensemble in ('uniform', 'multinomial') and self.seed is None:
            raise ValueError("Ensemble '{}' requires a seed.".format(self.ensemble))
        if self.claimed_distance is not None and self.claimed_distance < 0:
            raise ValueError("Claimed distance can't be negative.")
        if (self.verified_distance is not None and self.claimed_distance is not None
                and self.verified_distance < self.claimed_distance):
            raise ValueError("Verified distance {} is below the claimed distance {}.".format(
                self.verified_distance, self.claimed_distance))
        return True

    def verify_distance(self) -> int:
        """ Computes the minimum distance and checks it against the claim """
        self.verified_distance = min_distance(self)
        self.check()
        return self.verified_distance

    def copy(self):
        """ Returns a copy of the code """
        out = ClassicalCode(self.shape, self.words.copy(), self.ensemble, self.seed,
                            self.claimed_distance, self.alpha)
        out.verified_distance = self.verified_distance
        return out

    def __repr__(self):
        return "ClassicalCode(q={}, N={}, L={}, ensemble='{}')".format(
            self.q, self.N, len(self), self.ensemble)


def uniform_point(rng: np.random.Generator, q: int, N: int) -> np.ndarray:
    if q == 1:
        return np.array([N], dtype=np.int64)
    # q-1 separators among N+q-1 slots; the gaps are the occupancies
    slots = N + q - 1
    separators = np.sort(rng.choice(slots, size=q - 1, replace=False))
    bounds = np.concatenate(([-1], separators, [slots]))
    return np.diff(bounds) - 1


def sample_uniform(shape: SimplexShape, L: int, seed: int) -> ClassicalCode:
    """Samples L independent uniform points of S_{q,N}

    Word i is drawn from the random stream (seed, i).

    Parameters
    ----------
    shape : SimplexShape
    L : int
        number of words, at least 1
    seed : int
        unsigned 64 bit seed

    Returns
    -------
    code : ClassicalCode
    """
    if L < 1:
        raise ValueError("Code size L={} must be at least 1.".format(L))
    seed = check_seed(seed)
    words = np.empty((L, shape.q), dtype=np.int64)
    for i in range(L):
        words[i] = uniform_point(make_rng(seed, i), shape.q, shape.N)
    return ClassicalCode(shape, words, 'uniform', seed, alpha=shape.q / max(shape.N, 1))


def sample_multinomial(shape: SimplexShape, L: int, seed: int) -> ClassicalCode:
    """Samples L independent Multinomial(N; 1/q, ..., 1/q) occupancy vectors

    Word i is drawn from the random stream (seed, i).
    """
    if L < 1:
        raise ValueError("Code size L={} must be at least 1.".format(L))
    seed = check_seed(seed)
    pvals = np.full(shape.q, 1.0 / shape.q)
    words = np.empty((L, shape.q), dtype=np.int64)
    for i in range(L):
        words[i] = make_rng(seed, i).multinomial(shape.N, pvals)
    return ClassicalCode(shape, words, 'multinomial', seed, alpha=shape.q / max(shape.N, 1))


def _words_of(code) -> np.ndarray:
    if isinstance(code, ClassicalCode):
        return code.words
    return np.asarray(code, dtype=np.int64)


def iter_pair_distances(words: np.ndarray) -> Iterator[tuple]:
    """Yields (i, distances to words i+1, ..., L-1) for every row i,
       computed in row chunks to bound memory.
    """
    words = np.asarray(words, dtype=np.int64)
    L, q = words.shape
    rows = max(1, _CHUNK_ELEMENTS // max(1, L * q))
    for start in range(0, L - 1, rows):
        stop = min(L - 1, start + rows)
        block = np.abs(words[start:stop, None, :] - words[None, :, :]).sum(axis=2) // 2
        for k, i in enumerate(range(start, stop)):
            yield i, block[k, i + 1:]


def min_distance(code) -> int:
    """Exact minimum pairwise l1 distance
    Parameters
    ----------
    code : ClassicalCode or array_like
        at least two words

    Returns
    -------
    d : int
        0 when a word is repeated
    """
    words = _words_of(code)
    if words.shape[0] < 2:
        raise ValueError("Minimum distance needs at least 2 words, got {}.".format(words.shape[0]))
    best = None
    for _, d in iter_pair_distances(words):
        m = int(d.min())
        best = m if best is None else min(best, m)
        if best == 0:
            break
    return best


@dataclass(frozen=True)
class DistanceStats(object):
    mean: float
    min: int
    max: int
    normalized_mean: float


def pairwise_distance_stats(code) -> DistanceStats:
    """ Mean, minimum and maximum over all pairs of words """
    words = _words_of(code)
    L = words.shape[0]
    if L < 2:
        raise ValueError("Distance statistics need at least 2 words, got {}.".format(L))
    total, lo, hi = 0, None, None
    for _, d in iter_pair_distances(words):
        total += int(d.sum())
        lo = int(d.min()) if lo is None else min(lo, int(d.min()))
        hi = int(d.max()) if hi is None else max(hi, int(d.max()))
    mean = total / (L * (L - 1) // 2)
    N = int(words[0].sum())
    return DistanceStats(mean, lo, hi, mean / N if N > 0 else 0.0)


def typical_mask(words: np.ndarray, params: TypicalityParams) -> np.ndarray:
    """ Vectorized typicality_check over the rows of `words` """
    words = np.asarray(words, dtype=np.int64)
    N = int(words[0].sum()) if words.shape[0] else 0
    if N < 2:
        raise ValueError("Typicality needs N >= 2, got N={}.".format(N))
    support = np.count_nonzero(words, axis=1) / N
    centre = params.alpha / (1 + params.alpha)
    in_window = np.abs(support - centre) <= params.support_window(N)
    bounded = words.max(axis=1) <= params.inf_norm_cap(N)
    return in_window & bounded


def typicality_check(p: PointLike, params: TypicalityParams) -> bool:
    """True if the point has typical support and a bounded largest entry
    Parameters
    ----------
    p : SimplexPoint
        point with N >= 2
    params : TypicalityParams

    Returns
    -------
    typical : bool
    """
    x = p.as_array() if isinstance(p, SimplexPoint) else np.asarray(p, dtype=np.int64)
    return bool(typical_mask(x[None, :], params)[0])


def _typical_points(shape: SimplexShape, params: TypicalityParams, cap: int) -> np.ndarray:
    try:
        points = simplex_array(shape, cap)
    except CapExceededError as e:
        raise CapExceededError(e.what, e.size, e.cap,
                               "Use sample_greedy or the random ensembles instead.")
    if params is None:
        return points
    return points[typical_mask(points, params)]


def _greedy_scan(candidates: np.ndarray, t: int) -> np.ndarray:
    accepted = np.empty_like(candidates)
    k = 0
    for cand in candidates:
        if k == 0 or (np.abs(accepted[:k] - cand).sum(axis=1) // 2).min() >= t:
            accepted[k] = cand
            k += 1
    return accepted[:k].copy()


def greedy_gv(shape: SimplexShape, t: int, params: TypicalityParams = None,
              order_seed: int = None, cap: int = ENUMERATION_CAP) -> ClassicalCode:
    """Greedy GV code of distance t on the typical set

    Scans the typical points once and keeps every point at distance >= t
    from those already kept. The scan follows a seed-shuffled order, or
    colex order when no seed is given.

    Parameters
    ----------
    shape : SimplexShape
    t : int
        distance target, at least 1
    params : TypicalityParams, optional
        typical set; None scans the whole simplex
    order_seed : int, optional
        seed of the scan order
    cap : int, optional
        enumeration cap

    Returns
    -------
    code : ClassicalCode
        ensemble 'greedy_gv' with claimed distance t
    """
    if t < 1:
        raise ValueError("Distance target t={} must be at least 1.".format(t))
    candidates = _typical_points(shape, params, cap)
    if order_seed is not None:
        candidates = candidates[make_rng(order_seed).permutation(candidates.shape[0])]
    if candidates.shape[0] == 0:
        raise ValueError("The typical set of S_({},{}) is empty.".format(shape.q, shape.N))
    words = _greedy_scan(candidates, t)
    logger.info("Greedy scan kept %d of %d candidate points.", words.shape[0], candidates.shape[0])
    code = ClassicalCode(shape, words, 'greedy_gv', order_seed, claimed_distance=t,
                         alpha=None if params is None else params.alpha)
    if len(code) >= 2:
        code.verify_distance()
    return code


def gv_counting_bound(shape: SimplexShape, t: int, params: TypicalityParams = None,
                      cap: int = ENUMERATION_CAP) -> float:
    """ |typical set| / max over typical n of ball_volume_bound(n, t-1) """
    if t < 1:
        raise ValueError("Distance target t={} must be at least 1.".format(t))
    points = _typical_points(shape, params, cap)
    if points.shape[0] == 0:
        return 0.0
    # the bound depends on the centre only through its support size
    supports = np.unique(np.count_nonzero(points, axis=1))
    largest = 0
    for m in supports:
        centre = np.zeros(shape.q, dtype=np.int64)
        centre[:m] = 1
        centre[0] += shape.N - m
        largest = max(largest, ball_volume_bound(centre, min(t - 1, shape.N)))
    return points.shape[0] / largest


def sample_greedy(shape: SimplexShape, t: int, params: TypicalityParams, L_target: int,
                  seed: int, max_proposals: int = 10 ** 5, pair_cap: int = PAIR_CAP) -> ClassicalCode:
    """Greedy code from uniformly proposed points, for simplices too large to enumerate

    Proposal i is drawn from the random stream (seed, i); typical proposals
    at distance >= t from every kept word are kept until L_target words are
    found or the proposals run out. The distance is verified when the
    number of pairs is below pair_cap.
    """
    if t < 1 or L_target < 1 or max_proposals < 1:
        raise ValueError("Need t, L_target and max_proposals >= 1.")
    seed = check_seed(seed)
    accepted = np.empty((L_target, shape.q), dtype=np.int64)
    k = 0
    for i in range(max_proposals):
        if k == L_target:
            break
        cand = uniform_point(make_rng(seed, i), shape.q, shape.N)
        if params is not None and not typical_mask(cand[None, :], params)[0]:
            continue
        if k == 0 or (np.abs(accepted[:k] - cand).sum(axis=1) // 2).min() >= t:
            accepted[k] = cand
            k += 1
    if k < L_target:
        logger.warning("Sampled greedy construction stopped at %d of %d words.", k, L_target)
    code = ClassicalCode(shape, accepted[:k], 'greedy_gv', seed, claimed_distance=t,
                         alpha=None if params is None else params.alpha)
    if 2 <= k and k * (k - 1) // 2 <= pair_cap:
        code.verify_distance()
    else:
        logger.info("Distance of the sampled greedy code left unverified.")
    return code


@dataclass(frozen=True)
class OccupancyStats(object):
    max_inf_norm: int
    mean_support_fraction: float
    fraction_exceeding: float = None


def occupancy_stats(code, B: float = None) -> OccupancyStats:
    """Occupancy statistics of a code
    Parameters
    ----------
    code : ClassicalCode
    B : float, optional
        threshold for the fraction of words with ||n||_inf > B

    Returns
    -------
    stats : OccupancyStats
        mean_support_fraction is measured as |supp(n)| / N
    """
    words = _words_of(code)
    if words.shape[0] == 0:
        raise ValueError("Occupancy statistics need a nonempty code.")
    N = int(words[0].sum())
    norms = words.max(axis=1)
    support = np.count_nonzero(words, axis=1)
    frac = float(support.mean() / N) if N > 0 else 0.0
    exceeding = None if B is None else float(np.mean(norms > B))
    return OccupancyStats(int(norms.max()), frac, exceeding)


def code_to_dict(code: ClassicalCode) -> dict:
    """ JSON payload of a classical code in canonical field order """
    out = {"q": code.q, "N": code.N}
    if code.alpha is not None:
        out["alpha"] = code.alpha
    out["ensemble"] = code.ensemble
    if code.seed is not None:
        out["seed"] = code.seed
    if code.claimed_distance is not None:
        out["claimed_distance"] = code.claimed_distance
    out["words"] = code.words.tolist()
    return out


CODE_FIELDS = ("q", "N", "ensemble", "words")
CODE_OPTIONAL = ("alpha", "seed", "claimed_distance")


def code_from_dict(payload: dict, extra: Sequence[str] = ()) -> ClassicalCode:
    """ Inverse of code_to_dict; fields listed in `extra` are ignored """
    check_keys(payload, CODE_FIELDS, CODE_OPTIONAL + tuple(extra), 'Code file')
    shape = SimplexShape(payload["q"], payload["N"])
    words = np.array(payload["words"], dtype=np.int64).reshape(-1, shape.q)
    return ClassicalCode(shape, words, payload["ensemble"], payload.get("seed"),
                         payload.get("claimed_distance"), payload.get("alpha"))


def save_code(code: ClassicalCode, path):
    write_json(code_to_dict(code), path)


def load_code(path) -> ClassicalCode:
    return code_from_dict(read_json(path))
