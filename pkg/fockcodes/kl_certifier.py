# kl_certifier.py - Approximate Knill-Laflamme certification against photon loss
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import itertools
import logging
import math
import time
from dataclasses import dataclass, field, asdict
from typing import Sequence
import numpy as np
from scipy.special import gammaln, xlogy

from fockcodes.bounds import kraus_count, loss_probability, eps_to_ad
from fockcodes.bounds import feasibility_check  # noqa: F401  part of the certifier API
from fockcodes.classical_codes import min_distance, iter_pair_distances, uniform_point
from fockcodes.errors import CapExceededError, InconclusiveError, OrthogonalityError
from fockcodes.fock_codes import FockCode
from fockcodes.simplex import SimplexShape
from fockcodes.utils import make_rng, log_binom, write_json

logger = logging.getLogger(__name__)

PATTERN_CAP = 10 ** 7
LAMBDA_MODES = ('analytic_uniform', 'analytic_multinomial', 'empirical_code_mean')
KRAUS_NORMALIZATION = 'A_r/sqrt(p)'
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class LossPattern(object):
    """
     Per-mode photon losses r; labels the Kraus operator A_r.
    """
    r: tuple
    weight: int = field(init=False)

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        if any(x < 0 for x in r):
            raise ValueError("Loss pattern {} has a negative entry.".format(r))
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'weight', sum(r))

    @property
    def q(self) -> int:
        return len(self.r)

    def as_array(self) -> np.ndarray:
        return np.array(self.r, dtype=np.int64)


class PatternTable(object):
    """
     Loss patterns in sparse form. Pattern j is the multiset of lost modes
     modes[j, :weight[j]] listed in decreasing order; occ[j, k] counts the
     earlier copies of modes[j, k]. Unused slots are flagged in `pad`.
    """

    def __init__(self, q: int, modes: np.ndarray, occ: np.ndarray, pad: np.ndarray):
        self.q = int(q)
        self.modes = modes
        self.occ = occ
        self.pad = pad
        self.weights = np.count_nonzero(~pad, axis=1) if pad.size else np.zeros(modes.shape[0], dtype=np.int64)

    def __len__(self):
        return self.modes.shape[0]

    def __getitem__(self, item: slice) -> 'PatternTable':
        return PatternTable(self.q, self.modes[item], self.occ[item], self.pad[item])

    @property
    def width(self) -> int:
        return self.modes.shape[1]

    def dense(self) -> np.ndarray:
        """ (M, q) array of loss counts """
        out = np.zeros((len(self), self.q), dtype=np.int64)
        rows = np.repeat(np.arange(len(self)), self.width).reshape(len(self), self.width)
        np.add.at(out, (rows[~self.pad], self.modes[~self.pad]), 1)
        return out

    def pattern(self, j: int) -> LossPattern:
        return LossPattern(tuple(self.dense_row(j)))

    def dense_row(self, j: int) -> list:
        row = [0] * self.q
        for m in self.modes[j][~self.pad[j]]:
            row[m] += 1
        return row

    @classmethod
    def from_multisets(cls, q: int, multisets: np.ndarray, width: int) -> 'PatternTable':
        """ Builds a table from rows of lost modes sorted in decreasing order """
        M, w = multisets.shape
        modes = np.zeros((M, width), dtype=np.int64)
        modes[:, :w] = multisets
        pad = np.ones((M, width), dtype=bool)
        pad[:, :w] = False
        occ = np.zeros((M, width), dtype=np.int64)
        for k in range(1, w):
            occ[:, k] = np.where(modes[:, k] == modes[:, k - 1], occ[:, k - 1] + 1, 0)
        return cls(q, modes, occ, pad)

    @classmethod
    def from_dense(cls, rows, width: int = None) -> 'PatternTable':
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows[None, :]
        if np.any(rows < 0):
            raise ValueError("Loss patterns can't have negative entries.")
        q = rows.shape[1]
        width = int(rows.sum(axis=1).max()) if width is None else int(width)
        tables = []
        for w in np.unique(rows.sum(axis=1)):
            sel = np.flatnonzero(rows.sum(axis=1) == w)
            multisets = np.array([np.repeat(np.arange(q)[::-1], r[::-1]) for r in rows[sel]],
                                 dtype=np.int64).reshape(sel.size, w)
            tables.append((sel, cls.from_multisets(q, multisets, width)))
        modes = np.zeros((rows.shape[0], width), dtype=np.int64)
        occ = np.zeros_like(modes)
        pad = np.ones((rows.shape[0], width), dtype=bool)
        for sel, table in tables:
            modes[sel], occ[sel], pad[sel] = table.modes, table.occ, table.pad
        return cls(q, modes, occ, pad)


def enumerate_patterns(q: int, t: int, cap: int = PATTERN_CAP) -> PatternTable:
    """All loss patterns of weight at most t on q modes

    Patterns are ordered by weight, then colex within a weight (the order
    of enumerate_simplex on S_{q,w}).

    Parameters
    ----------
    q : int
    t : int
    cap : int, optional
        maximum number of patterns

    Returns
    -------
    table : PatternTable
    """
    M = kraus_count(q, t)
    if M > cap:
        raise CapExceededError("Pattern set of weight <= {} on {} modes".format(t, q), M, cap)
    parts = []
    for w in range(t + 1):
        combos = list(itertools.combinations_with_replacement(range(q - 1, -1, -1), w))
        multisets = np.array(combos, dtype=np.int64).reshape(len(combos), w)
        parts.append(PatternTable.from_multisets(q, multisets, t))
    return PatternTable(q, np.vstack([p.modes for p in parts]), np.vstack([p.occ for p in parts]),
                        np.vstack([p.pad for p in parts]))


def _log_prefactor(weights: np.ndarray, N: int, gamma: float, p: float) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    return xlogy(N - weights, 1.0 - gamma) + xlogy(weights, gamma) - math.log(p)


def _log_binom_products(words: np.ndarray, table: PatternTable) -> np.ndarray:
    """(n_words, n_patterns) array of log prod_i C(n_i, r_i)

    The per-mode terms are sorted before summation, so permuting the modes
    of words and patterns together gives bit-identical results.
    """
    if table.width == 0:
        return np.zeros((words.shape[0], len(table)))
    n = words[:, table.modes]
    with np.errstate(divide='ignore'):
        terms = np.log(np.maximum(n - table.occ, 0).astype(float)) - np.log1p(table.occ.astype(float))
    terms = np.where(table.pad, 0.0, terms)
    return np.sort(terms, axis=-1).sum(axis=-1)


def _iter_chunks(n_words: int, table: PatternTable):
    step = max(1, _CHUNK_ELEMENTS // max(1, n_words * max(1, table.width)))
    for start in range(0, len(table), step):
        yield start, table[start:start + step]


def log_y(words: np.ndarray, table: PatternTable, N: int, gamma: float, p: float) -> np.ndarray:
    """log Y_r(n) = log[(1/p) (1-gamma)^(N-|r|) gamma^|r| prod_i C(n_i, r_i)]
    Parameters
    ----------
    words : np.ndarray
        (n_words, q) occupancy vectors with total N
    table : PatternTable
    N : int
    gamma : float
        loss probability
    p : float
        mass of the truncated channel

    Returns
    -------
    out : np.ndarray
        (n_words, n_patterns), -inf where Y vanishes
    """
    words = np.asarray(words, dtype=np.int64)
    return _log_prefactor(table.weights, N, gamma, p)[None, :] + _log_binom_products(words, table)


def _log_moment(table: PatternTable, shape: SimplexShape, ensemble: str) -> np.ndarray:
    # log E[prod_i C(X_i, r_i)] under the ensemble law
    w = table.weights.astype(float)
    q, N = shape.q, shape.N
    if ensemble == 'uniform':
        return log_binom(N + q - 1, w + q - 1) - log_binom(N + q - 1, q - 1)
    if ensemble == 'multinomial':
        log_fact_r = np.where(table.pad, 0.0, np.log1p(table.occ.astype(float))).sum(axis=1)
        return log_binom(N, w) + gammaln(w + 1) - log_fact_r - w * math.log(q)
    raise ValueError("Unknown ensemble '{}'.".format(ensemble))


def _analytic_lambda(table: PatternTable, shape: SimplexShape, gamma: float, p: float,
                     ensemble: str) -> np.ndarray:
    return np.exp(_log_prefactor(table.weights, shape.N, gamma, p) + _log_moment(table, shape, ensemble))


def _as_table(r, q: int) -> PatternTable:
    if isinstance(r, PatternTable):
        return r
    row = np.asarray(getattr(r, 'r', r), dtype=np.int64)
    if row.size != q:
        raise ValueError("Pattern has {} entries, expected {}.".format(row.size, q))
    return PatternTable.from_dense(row)


def _check_p(p: float):
    if not 0.0 < p <= 1.0:
        raise ValueError("Truncated channel mass p={} must lie in (0, 1].".format(p))


def _block_terms(fc: FockCode, table: PatternTable, gamma: float, p: float):
    """ Yields (start, sub-table, block diagonals (K, m)) over pattern chunks """
    blocks = fc.block_matrix()
    words = fc.classical.words[blocks.reshape(-1)]
    weights2 = fc.amplitudes[blocks] ** 2
    for start, sub in _iter_chunks(words.shape[0], table):
        y = np.exp(log_y(words, sub, fc.N, gamma, p))
        diag = (weights2[:, :, None] * y.reshape(fc.K, fc.T, -1)).sum(axis=1)
        yield start, sub, diag


def diag_expectation(fc: FockCode, i: int, r, gamma: float, p: float) -> float:
    """<c_i| A_r^dag A_r |c_i> / p in closed form
    Parameters
    ----------
    fc : FockCode
    i : int
        block index
    r : LossPattern or sequence of int
    gamma : float
    p : float
        mass of the truncated channel

    Returns
    -------
    value : float
        sum over words n of block i of a_n^2 Y_r(n)
    """
    _check_p(p)
    if not 0 <= i < fc.K:
        raise ValueError("Block {} outside [0, {}).".format(i, fc.K))
    table = _as_table(r, fc.q)
    _, _, diag = next(_block_terms(fc, table, gamma, p))
    return float(diag[i, 0])


def lambda_analytic(r, shape: SimplexShape, gamma: float, p: float, ensemble: str) -> float:
    """ (1/p) (1-gamma)^(N-|r|) gamma^|r| E[prod_i C(X_i, r_i)] over the ensemble law """
    _check_p(p)
    if ensemble not in ('uniform', 'multinomial'):
        raise ValueError("Unknown ensemble '{}', expected 'uniform' or 'multinomial'.".format(ensemble))
    return float(_analytic_lambda(_as_table(r, shape.q), shape, gamma, p, ensemble)[0])


def lambda_empirical(fc: FockCode, r, gamma: float, p: float) -> float:
    """ Mean of the block diagonals <r|r>_i over all K blocks """
    _check_p(p)
    _, _, diag = next(_block_terms(fc, _as_table(r, fc.q), gamma, p))
    return float(diag.mean(axis=0)[0])


def default_lambda_mode(ensemble: str) -> str:
    if ensemble == 'uniform':
        return 'analytic_uniform'
    if ensemble == 'multinomial':
        return 'analytic_multinomial'
    return 'empirical_code_mean'


def _lambda_chunk(mode: str, sub: PatternTable, diag: np.ndarray, shape: SimplexShape,
                  gamma: float, p: float) -> np.ndarray:
    if mode == 'analytic_uniform':
        return _analytic_lambda(sub, shape, gamma, p, 'uniform')
    if mode == 'analytic_multinomial':
        return _analytic_lambda(sub, shape, gamma, p, 'multinomial')
    if mode == 'empirical_code_mean':
        return diag.mean(axis=0)
    raise ValueError("Unknown lambda mode '{}', expected one of {}.".format(mode, LAMBDA_MODES))


@dataclass(frozen=True)
class NondeformationResult(object):
    eps_max: float
    lambda_sum: float
    lambda_mode: str
    M: int
    p_loss: float
    worst_block: int
    worst_pattern: tuple


def _deviation_scan(fc: FockCode, table: PatternTable, gamma: float, p: float, mode: str):
    eps_max, lam_sum, worst = 0.0, 0.0, (0, 0)
    for start, sub, diag in _block_terms(fc, table, gamma, p):
        lam = _lambda_chunk(mode, sub, diag, fc.shape, gamma, p)
        lam_sum += float(lam.sum())
        dev = np.abs(diag - lam[None, :])
        k, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
        if dev[k, j] > eps_max:
            eps_max, worst = float(dev[k, j]), (int(k), start + int(j))
    return eps_max, lam_sum, worst


def nondeformation_eps(fc: FockCode, t: int, gamma: float, lambda_mode: str = None,
                       pattern_cap: int = PATTERN_CAP) -> NondeformationResult:
    """Largest deviation of the block diagonals from lambda

    eps_max = max over blocks i and patterns |r| <= t of
    |<c_i| A_r^dag A_r |c_i>/p - lambda_r|. Orthogonality is not checked.

    Parameters
    ----------
    fc : FockCode
    t : int
        loss budget, at most N
    gamma : float
        loss probability
    lambda_mode : str, optional
        one of LAMBDA_MODES; defaults by ensemble
    pattern_cap : int, optional

    Returns
    -------
    result : NondeformationResult
    """
    if not 0 <= t <= fc.N:
        raise ValueError("Loss budget t={} must lie in [0, N={}].".format(t, fc.N))
    mode = default_lambda_mode(fc.classical.ensemble) if lambda_mode is None else lambda_mode
    if mode not in LAMBDA_MODES:
        raise ValueError("Unknown lambda mode '{}', expected one of {}.".format(mode, LAMBDA_MODES))
    p = loss_probability(fc.N, t, gamma)
    if p == 0.0:
        raise ValueError("The truncated channel has zero mass (gamma={}, t={}).".format(gamma, t))
    table = enumerate_patterns(fc.q, t, pattern_cap)
    eps_max, lam_sum, (k, j) = _deviation_scan(fc, table, gamma, p, mode)
    return NondeformationResult(eps_max, lam_sum, mode, len(table), p, k, tuple(table.dense_row(j)))


def lambda_sum(fc: FockCode, t: int, gamma: float, lambda_mode: str = None,
               pattern_cap: int = PATTERN_CAP) -> float:
    """ Sum of lambda_r over all patterns of weight at most t """
    return nondeformation_eps(fc, t, gamma, lambda_mode, pattern_cap).lambda_sum


def certified_eps(K: int, M: int, eps_max: float) -> float:
    """ sqrt(K M eps_max) """
    if eps_max < 0:
        raise ValueError("eps_max={} must be nonnegative.".format(eps_max))
    return math.sqrt(K * M * eps_max)


@dataclass(frozen=True)
class Witness(object):
    index_a: int
    index_b: int
    n: tuple
    n_prime: tuple
    r: tuple
    r_prime: tuple

    def __str__(self):
        return "words {} and {}: {} - {} = {} - {}".format(
            self.index_a, self.index_b, self.n, self.r, self.n_prime, self.r_prime)


ORTHOGONALITY_STATUSES = ('proved_by_distance', 'brute_force_verified', 'failed')


@dataclass(frozen=True)
class OrthogonalityVerdict(object):
    status: str
    min_distance: int = None
    witness: Witness = None

    @property
    def ok(self) -> bool:
        return self.status != 'failed'


def orthogonality_check(fc: FockCode, t: int, pattern_cap: int = PATTERN_CAP) -> OrthogonalityVerdict:
    """Verifies <c_i| A_r^dag A_r' |c_j> = 0 for i != j or r != r'

    A classical distance of at least t+1 proves it. Otherwise the retained
    words are searched for n != n' and patterns of weight <= t with
    n - r = n' - r'.

    Parameters
    ----------
    fc : FockCode
    t : int
        loss budget
    pattern_cap : int, optional

    Returns
    -------
    verdict : OrthogonalityVerdict
    """
    if t < 0:
        raise ValueError("Loss budget t={} must be nonnegative.".format(t))
    if len(fc.classical) < 2:
        return OrthogonalityVerdict('proved_by_distance')
    d = min_distance(fc.classical)
    if d >= t + 1:
        return OrthogonalityVerdict('proved_by_distance', d)
    M = kraus_count(fc.q, t)
    if M > pattern_cap:
        raise InconclusiveError("Distance {} < t+1 = {} and {} patterns exceed the cap {}.".format(
            d, t + 1, M, pattern_cap))
    retained = fc.partition.retained
    words = fc.classical.words[retained]
    for a, dist in iter_pair_distances(words):
        hits = np.flatnonzero(dist <= t)
        if hits.size == 0:
            continue
        b = a + 1 + int(hits[0])
        # the smallest pair of patterns removes the positive and negative parts of n - n'
        diff = words[a] - words[b]
        witness = Witness(int(retained[a]), int(retained[b]), tuple(words[a].tolist()),
                          tuple(words[b].tolist()), tuple(np.maximum(diff, 0).tolist()),
                          tuple(np.maximum(-diff, 0).tolist()))
        return OrthogonalityVerdict('failed', d, witness)
    return OrthogonalityVerdict('brute_force_verified', d)


@dataclass
class CertReport(object):
    K: int
    T: int
    q: int
    N: int
    t: int
    gamma: float
    M: int
    orthogonality: str
    lambda_mode: str
    lambda_sum: float
    eps_max: float
    eps_certified: float
    p_loss: float
    eps_ad: float
    vacuous: bool
    kraus_normalization: str
    discarded: int
    patterns_enumerated: int
    worst_block: int
    worst_pattern: tuple
    wallclock: float = None

    def as_dict(self, timing: bool = False) -> dict:
        out = asdict(self)
        out['worst_pattern'] = list(self.worst_pattern)
        if not timing:
            out.pop('wallclock')
        return out


def certify(fc: FockCode, t: int, gamma: float, lambda_mode: str = None,
            pattern_cap: int = PATTERN_CAP) -> CertReport:
    """Certifies a Fock code against the loss channel truncated at t losses
    Parameters
    ----------
    fc : FockCode
    t : int
        loss budget
    gamma : float
        loss probability per mode
    lambda_mode : str, optional
        one of LAMBDA_MODES; defaults by ensemble
    pattern_cap : int, optional

    Returns
    -------
    report : CertReport
        eps_certified = sqrt(K M eps_max) for the truncated channel and
        eps_ad for the full loss channel. When eps_certified exceeds 1 the
        guarantee is vacuous and eps_ad is 1.
    """
    start = time.perf_counter()
    if fc.duplicates:
        raise ValueError("Codes with repeated words can't be certified: {}.".format(fc.duplicates))
    verdict = orthogonality_check(fc, t, pattern_cap)
    if not verdict.ok:
        raise OrthogonalityError(verdict.witness)
    M = kraus_count(fc.q, t)
    if M > pattern_cap:
        raise CapExceededError("Pattern set of weight <= {} on {} modes".format(t, fc.q), M, pattern_cap,
                               "Use estimate_eps for a non-certifying lower bound.")
    res = nondeformation_eps(fc, t, gamma, lambda_mode, pattern_cap)
    eps = certified_eps(fc.K, M, res.eps_max)
    report = CertReport(
        K=fc.K, T=fc.T, q=fc.q, N=fc.N, t=t, gamma=gamma, M=M,
        orthogonality=verdict.status, lambda_mode=res.lambda_mode, lambda_sum=res.lambda_sum,
        eps_max=res.eps_max, eps_certified=eps, p_loss=res.p_loss,
        eps_ad=eps_to_ad(min(eps, 1.0), res.p_loss), vacuous=eps >= 1.0,
        kraus_normalization=KRAUS_NORMALIZATION, discarded=int(fc.partition.discarded.size),
        patterns_enumerated=res.M, worst_block=res.worst_block, worst_pattern=res.worst_pattern,
        wallclock=time.perf_counter() - start)
    logger.info("Certified K=%d, t=%d: eps_max=%.3e, eps=%.3e, eps_ad=%.3e.",
                report.K, t, report.eps_max, report.eps_certified, report.eps_ad)
    return report


def save_report(report: CertReport, path, extra: dict = None, timing: bool = False):
    """ Writes a report as JSON, prefixed by the entries of `extra` """
    payload = dict(extra or {})
    payload.update(report.as_dict(timing))
    write_json(payload, path)


@dataclass(frozen=True)
class EpsEstimate(object):
    eps_max_lower_bound: float
    patterns_sampled: int
    distinct_patterns: int
    lambda_mode: str
    certifying: bool = False


def estimate_eps(fc: FockCode, t: int, gamma: float, lambda_mode: str = None,
                 sample_count: int = 1000, seed: int = 0) -> EpsEstimate:
    """Lower bound on eps_max from uniformly sampled loss patterns

    Patterns are drawn uniformly from all patterns of weight at most t.
    The result never certifies a code.
    """
    if sample_count < 1:
        raise ValueError("sample_count={} must be at least 1.".format(sample_count))
    if not 0 <= t <= fc.N:
        raise ValueError("Loss budget t={} must lie in [0, N={}].".format(t, fc.N))
    mode = default_lambda_mode(fc.classical.ensemble) if lambda_mode is None else lambda_mode
    p = loss_probability(fc.N, t, gamma)
    _check_p(p)
    rng = make_rng(seed)
    sizes = np.array([math.comb(w + fc.q - 1, fc.q - 1) for w in range(t + 1)], dtype=float)
    weights = rng.choice(t + 1, size=sample_count, p=sizes / sizes.sum())
    rows = np.array([uniform_point(rng, fc.q, int(w)) for w in weights], dtype=np.int64)
    table = PatternTable.from_dense(rows, width=t)
    eps_max, _, _ = _deviation_scan(fc, table, gamma, p, mode)
    distinct = np.unique(rows, axis=0).shape[0]
    return EpsEstimate(eps_max, sample_count, int(distinct), mode)
