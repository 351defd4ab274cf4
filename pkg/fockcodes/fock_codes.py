# fock_codes.py - Constant-excitation Fock state codes built from classical l1 codes
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
import numpy as np

from fockcodes.classical_codes import ClassicalCode, code_to_dict, code_from_dict
from fockcodes.errors import CapExceededError
from fockcodes.simplex import SimplexShape, simplex_size
from fockcodes.utils import make_rng, read_json, write_json, check_keys

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
PARTITION_POLICIES = ('sequential', 'shuffled')
DICKE_CAP = 1 << 20


class Partition(object):
    """
     Split of the word indices of a code into K blocks of T words each.
     Indices left over (L mod K of them) are discarded.
    """

    def __init__(self, block_of, K: int, T: int):
        """
        Parameters
        ----------
        block_of: array_like
            block index of every word, -1 for discarded words
        K: int
            number of blocks
        T: int
            common block size
        """
        self.block_of = np.array(block_of, dtype=np.int64).flatten()
        self.K = int(K)
        self.T = int(T)
        self.check()

    @property
    def L(self) -> int:
        return self.block_of.size

    @property
    def discarded(self) -> np.ndarray:
        return np.flatnonzero(self.block_of < 0)

    @property
    def retained(self) -> np.ndarray:
        return np.flatnonzero(self.block_of >= 0)

    def blocks(self) -> list:
        """ Word indices of every block, in increasing order """
        return [np.flatnonzero(self.block_of == i) for i in range(self.K)]

    def check(self):
        """ Checks that the K blocks are disjoint and all hold T words """
        if self.K < 1:
            raise ValueError("Number of blocks K={} must be at least 1.".format(self.K))
        if self.T < 1:
            raise ValueError("Blocks are empty (T={}).".format(self.T))
        if np.any(self.block_of < -1) or np.any(self.block_of >= self.K):
            raise ValueError("Block indices must lie in [-1, {}).".format(self.K))
        counts = np.bincount(self.block_of[self.block_of >= 0], minlength=self.K)
        if np.any(counts != self.T):
            i = int(np.flatnonzero(counts != self.T)[0])
            raise ValueError("Block {} has {} words instead of {}.".format(i, counts[i], self.T))
        if self.discarded.size != self.L - self.K * self.T:
            raise ValueError("Partition covers {} words, expected {}.".format(
                self.L - self.discarded.size, self.K * self.T))
        return True

    def copy(self):
        return Partition(self.block_of.copy(), self.K, self.T)


def make_partition(code, K: int, policy: str = 'sequential', seed: int = None) -> Partition:
    """Equal-block partition of the words of a code
    Parameters
    ----------
    code : ClassicalCode or int
        code to split (or its length)
    K : int
        number of blocks, 1 <= K <= L
    policy : str, optional
        'sequential' scans indices in order, 'shuffled' in a seeded random order
    seed : int, optional
        seed of the 'shuffled' policy

    Returns
    -------
    partition : Partition
        blocks of T = floor(L/K) words; the last L mod K indices of the scan
        are discarded
    """
    L = code if isinstance(code, (int, np.integer)) else len(code)
    if K < 1:
        raise ValueError("Number of blocks K={} must be at least 1.".format(K))
    if K > L:
        raise ValueError("Number of blocks K={} exceeds the code size L={}.".format(K, L))
    if policy == 'sequential':
        order = np.arange(L)
    elif policy == 'shuffled':
        if seed is None:
            raise ValueError("The shuffled policy requires a seed.")
        order = make_rng(seed).permutation(L)
    else:
        raise ValueError("Unknown policy '{}', expected one of {}.".format(policy, PARTITION_POLICIES))
    T = L // K
    block_of = np.full(L, -1, dtype=np.int64)
    block_of[order[:K * T]] = np.arange(K * T) // T
    if L % K:
        logger.info("Discarding %d of %d words (K=%d does not divide L).", L % K, L, K)
    return Partition(block_of, K, T)


class FockCode(object):
    """
     Fock state code: block i spans the code state
     |c_i> = sum over words n of block i of a_n |n>.
    """

    def __init__(self, classical: ClassicalCode,
                 partition: Partition,
                 amplitudes=None,
                 t_target: int = None,
                 check_duplicates: bool = True):
        """
        Parameters
        ----------
        classical: ClassicalCode
            code providing the Fock basis labels
        partition: Partition
            split of the word indices into blocks
        amplitudes: array_like, optional
            nonnegative amplitude of every word; defaults to 1/sqrt(T) on
            retained words and 0 on discarded ones
        t_target: int, optional
            intended loss budget (not enforced)
        check_duplicates: bool, optional
            reject repeated words among the retained ones. Codes built with
            False are meant for ensemble statistics only
        """
        if classical is None or partition is None:
            raise ValueError("Classical code and partition can't be None.")
        self.classical = classical
        self.partition = partition
        self.t_target = None if t_target is None else int(t_target)
        self.check_duplicates = bool(check_duplicates)
        if amplitudes is None:
            amps = np.where(partition.block_of >= 0, 1.0 / math.sqrt(partition.T), 0.0)
            self.amplitudes_overridden = False
        else:
            amps = np.array(amplitudes, dtype=float).flatten()
            self.amplitudes_overridden = True
        self.amplitudes = amps
        self.duplicates = []
        self.check()

    @property
    def K(self) -> int:
        return self.partition.K

    @property
    def T(self) -> int:
        return self.partition.T

    @property
    def q(self) -> int:
        return self.classical.q

    @property
    def N(self) -> int:
        return self.classical.N

    @property
    def shape(self) -> SimplexShape:
        return self.classical.shape

    def block_indices(self, i: int) -> np.ndarray:
        if not 0 <= i < self.K:
            raise ValueError("Block {} outside [0, {}).".format(i, self.K))
        return np.flatnonzero(self.partition.block_of == i)

    def block_words(self, i: int) -> np.ndarray:
        return self.classical.words[self.block_indices(i)]

    def block_amplitudes(self, i: int) -> np.ndarray:
        return self.amplitudes[self.block_indices(i)]

    def block_matrix(self) -> np.ndarray:
        """ (K, T) word indices, block-major """
        return np.vstack(self.partition.blocks())

    def _find_duplicates(self) -> list:
        retained = self.partition.retained
        _, inverse, counts = np.unique(self.classical.words[retained], axis=0,
                                       return_inverse=True, return_counts=True)
        inverse = np.asarray(inverse).flatten()
        return [retained[inverse == g].tolist() for g in np.flatnonzero(counts > 1)]

    def check(self):
        """ Checks partition consistency, normalization and distinctness """
        self.partition.check()
        if self.partition.L != len(self.classical):
            raise ValueError("Partition covers {} words but the code has {}.".format(
                self.partition.L, len(self.classical)))
        if self.amplitudes.size != len(self.classical):
            raise ValueError("Expected {} amplitudes, got {}.".format(len(self.classical), self.amplitudes.size))
        if np.any(self.amplitudes < 0) or not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("Amplitudes must be finite and nonnegative.")
        if np.any(self.amplitudes[self.partition.discarded] != 0):
            raise ValueError("Discarded words must have zero amplitude.")
        for i, idx in enumerate(self.partition.blocks()):
            norm = float(np.sum(self.amplitudes[idx] ** 2))
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError("Block {} has squared norm {} instead of 1.".format(i, norm))
        self.duplicates = self._find_duplicates()
        if self.duplicates and self.check_duplicates:
            raise ValueError("Repeated words at indices {}.".format(self.duplicates))
        return True

    def copy(self):
        return FockCode(self.classical.copy(), self.partition.copy(),
                        self.amplitudes.copy() if self.amplitudes_overridden else None,
                        self.t_target, self.check_duplicates)

    def __repr__(self):
        return "FockCode(q={}, N={}, K={}, T={})".format(self.q, self.N, self.K, self.T)


def build_fock_code(code: ClassicalCode, partition: Partition, t_target: int = None,
                    amplitudes=None, check_duplicates: bool = True) -> FockCode:
    """Fock code with amplitudes 1/sqrt(T) on every block
    Parameters
    ----------
    code : ClassicalCode
    partition : Partition
    t_target : int, optional
        intended loss budget
    amplitudes : array_like, optional
        per-word override, still normalized per block
    check_duplicates : bool, optional
        reject repeated words (inside or across blocks)

    Returns
    -------
    fc : FockCode
    """
    return FockCode(code, partition, amplitudes, t_target, check_duplicates)


def quantum_rate(K: int, shape: SimplexShape) -> float:
    """ log2 K / log2 |S_{q,N}| """
    if K < 1:
        raise ValueError("Code dimension K={} must be at least 1.".format(K))
    dim = simplex_size(shape)
    if dim == 1:
        raise ValueError("The space H_({},{}) is one dimensional.".format(shape.q, shape.N))
    return math.log2(K) / math.log2(dim)


def local_excitation_overlap(fc: FockCode, B: float) -> float:
    """Guaranteed overlap of any code state with the occupancy <= B subspace

    Minimum over blocks of the squared amplitude carried by words whose
    largest entry is at most B.
    """
    if B < 0:
        raise ValueError("Threshold B={} must be nonnegative.".format(B))
    bounded = fc.classical.words.max(axis=1) <= B
    mass = [float(np.sum(fc.amplitudes[idx][bounded[idx]] ** 2)) for idx in fc.partition.blocks()]
    return min(1.0, min(mass))


PI_KIND = "permutation_invariant"


def pi_descriptor(fc: FockCode) -> dict:
    """ Permutation-invariant description: Fock words become Dicke compositions """
    basis = []
    for i, idx in enumerate(fc.partition.blocks()):
        basis.append({"block": i,
                      "compositions": fc.classical.words[idx].tolist(),
                      "amplitudes": fc.amplitudes[idx].tolist()})
    return {"kind": PI_KIND, "length": fc.N, "alphabet": fc.q, "basis": basis}


def export_pi(fc: FockCode, sink=None) -> dict:
    """Exports the permutation-invariant descriptor of a Fock code

    Word n maps to the Dicke state of length N over an alphabet of q symbols
    with composition n; the normalization C(N; n)^(-1/2) stays implicit in
    the composition.

    Parameters
    ----------
    fc : FockCode
    sink : str or file-like, optional
        where to write the JSON descriptor

    Returns
    -------
    descriptor : dict
    """
    descriptor = pi_descriptor(fc)
    if sink is not None:
        write_json(descriptor, sink)
    return descriptor


def load_pi_descriptor(source) -> dict:
    """ Reads and validates a permutation-invariant descriptor """
    payload = read_json(source)
    check_keys(payload, ("kind", "length", "alphabet", "basis"), what='PI descriptor')
    if payload["kind"] != PI_KIND:
        raise ValueError("Descriptor kind '{}' is not '{}'.".format(payload["kind"], PI_KIND))
    for entry in payload["basis"]:
        check_keys(entry, ("block", "compositions", "amplitudes"), what='PI basis entry')
        for comp in entry["compositions"]:
            if len(comp) != payload["alphabet"] or sum(comp) != payload["length"]:
                raise ValueError("Composition {} does not match length {} and alphabet {}.".format(
                    comp, payload["length"], payload["alphabet"]))
    return payload


def _strings(q: int, N: int) -> np.ndarray:
    if q ** N > DICKE_CAP:
        raise CapExceededError("Space of {}-ary strings of length {}".format(q, N), q ** N, DICKE_CAP)
    # N = 0 leaves the single empty string
    return np.array(list(itertools.product(range(q), repeat=N)), dtype=np.int64).reshape(q ** N, N)


def dicke_vector(composition) -> np.ndarray:
    """Dicke state of a composition as a dense vector over [q]^N

    String s_0 ... s_(N-1) sits at index sum_k s_k q^(N-1-k).
    """
    comp = np.asarray(composition, dtype=np.int64)
    if comp.ndim != 1 or comp.size == 0 or np.any(comp < 0):
        raise ValueError("Composition {} must be a nonempty vector of nonnegative counts.".format(composition))
    q, N = comp.size, int(comp.sum())
    strings = _strings(q, N)
    counts = np.stack([(strings == s).sum(axis=1) for s in range(q)], axis=1)
    match = np.all(counts == comp, axis=1)
    vec = np.zeros(strings.shape[0])
    vec[match] = 1.0 / math.sqrt(np.count_nonzero(match))
    return vec


def pi_code_vectors(descriptor: dict) -> np.ndarray:
    """ (K, q^N) matrix whose rows are the permutation-invariant code states """
    q, N = descriptor["alphabet"], descriptor["length"]
    out = np.zeros((len(descriptor["basis"]), q ** N))
    for row, entry in enumerate(descriptor["basis"]):
        for comp, amp in zip(entry["compositions"], entry["amplitudes"]):
            out[row] += amp * dicke_vector(comp)
    return out


def fock_code_to_dict(fc: FockCode) -> dict:
    out = code_to_dict(fc.classical)
    out["K"] = fc.K
    out["T"] = fc.T
    out["block_of"] = fc.partition.block_of.tolist()
    out["discarded"] = fc.partition.discarded.tolist()
    if fc.t_target is not None:
        out["t_target"] = fc.t_target
    if fc.amplitudes_overridden:
        out["amplitudes"] = fc.amplitudes.tolist()
    return out


FOCK_FIELDS = ("K", "T", "block_of", "discarded", "t_target", "amplitudes")


def save_fock_code(fc: FockCode, path):
    write_json(fock_code_to_dict(fc), path)


def load_fock_code(path) -> FockCode:
    payload = read_json(path)
    for key in ("K", "T", "block_of", "discarded"):
        if key not in payload:
            raise ValueError("Fock code file is missing field '{}'.".format(key))
    code = code_from_dict({k: v for k, v in payload.items() if k not in FOCK_FIELDS})
    partition = Partition(payload["block_of"], payload["K"], payload["T"])
    if sorted(payload["discarded"]) != partition.discarded.tolist():
        raise ValueError("Discarded indices do not match the block assignment.")
    return FockCode(code, partition, payload.get("amplitudes"), payload.get("t_target"))
