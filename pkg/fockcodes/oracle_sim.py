# oracle_sim.py - Brute-force simulator of the loss channel on small Fock spaces
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
from dataclasses import dataclass, asdict
import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.special import xlogy

from fockcodes.bounds import loss_probability
from fockcodes.errors import CapExceededError, OrthogonalityError, OracleViolation
from fockcodes.fock_codes import FockCode
from fockcodes.kl_certifier import diag_expectation, orthogonality_check, enumerate_patterns
from fockcodes.simplex import SimplexShape, simplex_array
from fockcodes.utils import make_rng, log_binom

logger = logging.getLogger(__name__)

DIMENSION_CAP = 20000
TP_TOL = 1e-10
DIAG_TOL = 1e-10
ORTH_TOL = 1e-12


class GradedBasis(object):
    """
     Fock basis of q modes truncated at total excitation n_max,
     ordered by excitation, then colex.
    """

    def __init__(self, q: int, n_max: int, cap: int = DIMENSION_CAP):
        if q < 1 or n_max < 0:
            raise ValueError("Need q >= 1 and n_max >= 0, got q={}, n_max={}.".format(q, n_max))
        dim = math.comb(n_max + q, q)
        if dim > cap:
            raise CapExceededError("Fock basis with q={}, n_max={}".format(q, n_max), dim, cap)
        self.q = q
        self.n_max = n_max
        self.points = np.vstack([simplex_array(SimplexShape(q, m)) for m in range(n_max + 1)])
        self.offsets = np.concatenate(([0], np.cumsum([math.comb(m + q - 1, q - 1)
                                                       for m in range(n_max + 1)])))
        self.index_of = {tuple(row): i for i, row in enumerate(self.points.tolist())}

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[0]

    def index(self, point) -> int:
        key = tuple(int(x) for x in getattr(point, 'coords', point))
        if key not in self.index_of:
            raise ValueError("Point {} is outside the basis.".format(key))
        return self.index_of[key]

    def excitation_slice(self, m: int) -> slice:
        """ Indices of the states with total excitation m """
        return slice(int(self.offsets[m]), int(self.offsets[m + 1]))


@dataclass
class KrausOperator(object):
    matrix: sparse.csr_matrix
    label: tuple


def build_kraus(basis: GradedBasis, r, gamma: float) -> KrausOperator:
    """Loss operator A_r on the truncated basis
    Parameters
    ----------
    basis : GradedBasis
    r : LossPattern or sequence of int
    gamma : float
        loss probability per mode

    Returns
    -------
    A : KrausOperator
        sparse matrix with <n-r|A_r|n> = prod_i sqrt(C(n_i, r_i)) (1-gamma)^((n_i-r_i)/2) gamma^(r_i/2)
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma={} must lie in [0, 1].".format(gamma))
    r = np.asarray(getattr(r, 'r', r), dtype=np.int64)
    if r.size != basis.q:
        raise ValueError("Pattern has {} entries, expected {}.".format(r.size, basis.q))
    if r.sum() > basis.n_max:
        raise ValueError("Pattern weight {} exceeds n_max={}.".format(r.sum(), basis.n_max))
    cols = np.flatnonzero(np.all(basis.points >= r, axis=1))
    src = basis.points[cols]
    dst = src - r
    log_amp = 0.5 * (log_binom(src, r).sum(axis=1)
                     + xlogy(dst, 1.0 - gamma).sum(axis=1)
                     + xlogy(r, gamma).sum())
    rows = np.array([basis.index_of[tuple(x)] for x in dst.tolist()], dtype=np.int64)
    values = np.exp(log_amp).astype(complex)
    matrix = sparse.coo_matrix((values, (rows, cols)), shape=(basis.dim, basis.dim)).tocsr()
    return KrausOperator(matrix, tuple(r.tolist()))


def all_kraus(basis: GradedBasis, t: int, gamma: float) -> list:
    """ Loss operators of every pattern of weight at most t, weight-major colex order """
    table = enumerate_patterns(basis.q, t)
    return [build_kraus(basis, row, gamma) for row in table.dense()]


def code_basis_matrix(fc: FockCode, basis: GradedBasis = None, amplitude_fault: tuple = None) -> np.ndarray:
    """(dim, K) matrix whose columns are the code states

    `amplitude_fault` = (word index, factor) scales one amplitude without
    renormalizing, to inject a fault.
    """
    basis = GradedBasis(fc.q, fc.N) if basis is None else basis
    amps = fc.amplitudes.astype(complex)
    if amplitude_fault is not None:
        word, factor = amplitude_fault
        amps = amps.copy()
        amps[int(word)] *= factor
    out = np.zeros((basis.dim, fc.K), dtype=complex)
    for i, idx in enumerate(fc.partition.blocks()):
        for w in idx:
            out[basis.index(fc.classical.words[w]), i] += amps[w]
    return out


def bruteforce_inner(fc: FockCode, i: int, j: int, r, r_prime, gamma: float,
                     basis: GradedBasis = None) -> complex:
    """ <c_i| A_r^dag A_r' |c_j> from dense vectors """
    basis = GradedBasis(fc.q, fc.N) if basis is None else basis
    C = code_basis_matrix(fc, basis)
    left = build_kraus(basis, r, gamma).matrix @ C[:, i]
    right = build_kraus(basis, r_prime, gamma).matrix @ C[:, j]
    return complex(np.vdot(left, right))


def _random_states(rng: np.random.Generator, dim: int, trials: int) -> np.ndarray:
    psi = rng.standard_normal((dim, trials)) + 1j * rng.standard_normal((dim, trials))
    return psi / np.linalg.norm(psi, axis=0)


@dataclass(frozen=True)
class TracePreservationReport(object):
    q: int
    N: int
    t: int
    gamma: float
    trials: int
    p_loss: float
    max_deviation: float

    def as_dict(self) -> dict:
        return asdict(self)


def check_trace_preserving(shape: SimplexShape, t: int, gamma: float, trials: int = 100,
                           seed: int = 0, cap: int = DIMENSION_CAP) -> TracePreservationReport:
    """Compares sum_{|r|<=t} <psi|A_r^dag A_r|psi> with p_{N,t} on random states
    Parameters
    ----------
    shape : SimplexShape
    t : int
        loss budget
    gamma : float
    trials : int, optional
        number of random unit states of excitation N
    seed : int, optional
    cap : int, optional
        dimension cap

    Returns
    -------
    report : TracePreservationReport
    """
    if trials < 1:
        raise ValueError("trials={} must be at least 1.".format(trials))
    basis = GradedBasis(shape.q, shape.N, cap)
    sl = basis.excitation_slice(shape.N)
    psi = np.zeros((basis.dim, trials), dtype=complex)
    psi[sl] = _random_states(make_rng(seed), sl.stop - sl.start, trials)
    total = np.zeros(trials)
    for A in all_kraus(basis, min(t, shape.N), gamma):
        total += np.sum(np.abs(A.matrix @ psi) ** 2, axis=0)
    p = loss_probability(shape.N, t, gamma)
    return TracePreservationReport(shape.q, shape.N, t, gamma, trials, p,
                                   float(np.max(np.abs(total - p))))


def check_kraus_completeness(shape: SimplexShape, gamma: float, cap: int = DIMENSION_CAP) -> float:
    """ max |sum_{|r|<=N} A_r^dag A_r - I| on the excitation-N subspace """
    basis = GradedBasis(shape.q, shape.N, cap)
    sl = basis.excitation_slice(shape.N)
    acc = np.zeros((sl.stop - sl.start, sl.stop - sl.start), dtype=complex)
    for A in all_kraus(basis, shape.N, gamma):
        block = A.matrix[:, sl]
        acc += (block.conj().T @ block).toarray()
    return float(np.max(np.abs(acc - np.eye(acc.shape[0]))))


def check_diag_closed_form(fc: FockCode, t: int, gamma: float, basis: GradedBasis = None,
                           amplitude_fault: tuple = None) -> float:
    """Largest relative gap between p * diag_expectation and ||A_r c_i||^2
       over all blocks and patterns of weight at most t
    """
    basis = GradedBasis(fc.q, fc.N) if basis is None else basis
    C = code_basis_matrix(fc, basis, amplitude_fault)
    p = loss_probability(fc.N, t, gamma)
    worst = 0.0
    for A in all_kraus(basis, t, gamma):
        dense = np.sum(np.abs(A.matrix @ C) ** 2, axis=0)
        for i in range(fc.K):
            closed = diag_expectation(fc, i, A.label, gamma, p) * p
            scale = max(abs(closed), abs(dense[i]))
            if scale > 0:
                worst = max(worst, abs(closed - dense[i]) / scale)
    return worst


def check_orthogonality_oracle(fc: FockCode, t: int, gamma: float, basis: GradedBasis = None) -> float:
    """ max |<c_i| A_r^dag A_r' |c_j>| over i != j or r != r', weights <= t """
    basis = GradedBasis(fc.q, fc.N) if basis is None else basis
    C = code_basis_matrix(fc, basis)
    images = np.stack([A.matrix @ C for A in all_kraus(basis, t, gamma)])  # (M, dim, K)
    flat = images.transpose(1, 0, 2).reshape(basis.dim, -1)
    gram = flat.conj().T @ flat
    np.fill_diagonal(gram, 0.0)
    return float(np.max(np.abs(gram))) if gram.size else 0.0


def _branch_images(fc: FockCode, gamma: float, basis: GradedBasis) -> tuple:
    C = code_basis_matrix(fc, basis)
    ops = all_kraus(basis, fc.N, gamma)
    weights = np.array([sum(A.label) for A in ops])
    images = np.stack([A.matrix @ C for A in ops])
    return ops, weights, images


def _sample_categorical(rng: np.random.Generator, probs: np.ndarray) -> np.ndarray:
    probs = np.clip(probs, 0.0, None)
    cum = np.cumsum(probs, axis=1)
    cum /= cum[:, -1:]
    u = rng.random(probs.shape[0])
    return np.minimum((cum <= u[:, None]).sum(axis=1), probs.shape[1] - 1)


@dataclass(frozen=True)
class IdentificationReport(object):
    trials: int
    leq_t_count: int
    correct_id_rate_given_leq_t: float
    empirical_leq_t_fraction: float
    p_loss: float
    binomial_sigma: float

    def as_dict(self) -> dict:
        return asdict(self)


def identification_sim(fc: FockCode, t: int, gamma: float, trials: int = 10000,
                       seed: int = 0) -> IdentificationReport:
    """Simulates the measurement that identifies which loss pattern occurred

    Every trial draws a random code state, a loss branch over all weights
    with probability ||A_r psi||^2, then the outcome of the measurement
    {P_r : |r| <= t} + {P_>t}, P_r projecting onto A_r(code).

    Parameters
    ----------
    fc : FockCode
        code passing orthogonality_check at t
    t : int
    gamma : float
    trials : int, optional
    seed : int, optional

    Returns
    -------
    report : IdentificationReport
    """
    verdict = orthogonality_check(fc, t)
    if not verdict.ok:
        raise OrthogonalityError(verdict.witness)
    if trials < 1:
        raise ValueError("trials={} must be at least 1.".format(trials))
    basis = GradedBasis(fc.q, fc.N)
    ops, weights, images = _branch_images(fc, gamma, basis)
    low = np.flatnonzero(weights <= t)
    ranges = [scipy.linalg.orth(images[k]) for k in low]
    gram = np.einsum('rdi,rdj->rij', images.conj(), images)  # G_r = (A_r C)^dag (A_r C)
    # H[r, s] = (A_r C)^dag P_s (A_r C)
    overlaps = [np.einsum('rdi,dk->rki', images, Q.conj()) for Q in ranges]
    H = np.stack([np.einsum('rki,rkj->rij', o.conj(), o) for o in overlaps], axis=1)

    rng = make_rng(seed)
    v = _random_states(rng, fc.K, trials).T  # (trials, K)
    branch_probs = np.einsum('ti,rij,tj->tr', v.conj(), gram, v).real
    branch = _sample_categorical(rng, branch_probs)
    outcome_probs = np.einsum('ti,tsij,tj->ts', v.conj(), H[branch], v).real
    outcome_probs /= branch_probs[np.arange(trials), branch][:, None]
    residual = np.clip(1.0 - outcome_probs.sum(axis=1), 0.0, None)
    outcome = _sample_categorical(rng, np.hstack([outcome_probs, residual[:, None]]))

    leq = weights[branch] <= t
    position = np.full(len(ops), -1)
    position[low] = np.arange(low.size)
    correct = outcome[leq] == position[branch[leq]]
    count = int(leq.sum())
    p = loss_probability(fc.N, t, gamma)
    return IdentificationReport(trials, count, float(correct.mean()) if count else 1.0,
                                count / trials, p, math.sqrt(p * (1 - p) / trials))


def recovery_fidelity(fc: FockCode, t: int, gamma: float) -> float:
    """Entanglement fidelity of the truncated channel followed by the canonical recovery

    The recovery maps A_r(code) back onto the code through the polar
    isometry of A_r C / sqrt(p), for every pattern of weight at most t.
    The input is the maximally entangled state over the code, so the
    value is an average-case proxy of the worst-case fidelity.

    Parameters
    ----------
    fc : FockCode
        code passing orthogonality_check at t
    t : int
    gamma : float

    Returns
    -------
    fidelity : float
    """
    verdict = orthogonality_check(fc, t)
    if not verdict.ok:
        raise OrthogonalityError(verdict.witness)
    basis = GradedBasis(fc.q, fc.N)
    C = code_basis_matrix(fc, basis)
    p = loss_probability(fc.N, t, gamma)
    if p == 0.0:
        raise ValueError("The truncated channel has zero mass (gamma={}, t={}).".format(gamma, t))
    images = [A.matrix @ C / math.sqrt(p) for A in all_kraus(basis, t, gamma)]
    isometries = []
    for B in images:
        U, s, Vh = np.linalg.svd(B, full_matrices=False)
        keep = s > 1e-12 * max(1.0, s.max()) if s.size else s > 0
        if np.any(keep):
            isometries.append(U[:, keep] @ Vh[keep])
    # tr(C^dag R_k A_r C) = tr(W_k^dag B_r) since C^dag C = I
    total = 0.0
    for W in isometries:
        for B in images:
            total += abs(np.vdot(W, B)) ** 2
    return float(total / fc.K ** 2)


def run_oracle_suite(fc: FockCode, t: int, gamma: float, trials: int = 100, seed: int = 0,
                     id_trials: int = 10000, amplitude_fault: tuple = None,
                     tp_tol: float = TP_TOL, diag_tol: float = DIAG_TOL,
                     orth_tol: float = ORTH_TOL) -> dict:
    """Runs every oracle check on a code and raises OracleViolation on a breach
    Returns
    -------
    report : dict
    """
    shape = fc.shape
    basis = GradedBasis(fc.q, fc.N)
    failures = []
    report = {}

    tp = check_trace_preserving(shape, t, gamma, trials, seed)
    report["trace_preservation"] = tp.as_dict()
    if tp.max_deviation > tp_tol:
        failures.append("trace preservation deviates by {:.3e}".format(tp.max_deviation))

    completeness = check_kraus_completeness(shape, gamma)
    report["kraus_completeness"] = completeness
    if completeness > tp_tol:
        failures.append("Kraus completeness deviates by {:.3e}".format(completeness))

    diag = check_diag_closed_form(fc, t, gamma, basis, amplitude_fault)
    report["diag_closed_form"] = diag
    if diag > diag_tol:
        failures.append("closed-form diagonal deviates by {:.3e}".format(diag))

    verdict = orthogonality_check(fc, t)
    report["orthogonality"] = verdict.status
    if verdict.ok:
        off = check_orthogonality_oracle(fc, t, gamma, basis)
        report["max_off_term"] = off
        if off > orth_tol:
            failures.append("off-diagonal term {:.3e} on an orthogonal code".format(off))
        ident = identification_sim(fc, t, gamma, id_trials, seed)
        report["identification"] = ident.as_dict()
        if ident.correct_id_rate_given_leq_t != 1.0:
            failures.append("identification rate {}".format(ident.correct_id_rate_given_leq_t))
        report["recovery_fidelity"] = recovery_fidelity(fc, t, gamma)

    report["failures"] = failures
    if failures:
        logger.warning("Oracle suite found %d violations.", len(failures))
        raise OracleViolation(failures)
    return report
