# utils.py - Shared helpers: random streams, log binomials, file I/O
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import hashlib
import json
import math
import numpy as np
from scipy.special import gammaln

SEED_BOUND = 2 ** 64


def check_seed(seed: int) -> int:
    """Validates a seed and returns it as a Python int
    Parameters
    ----------
    seed : int
        unsigned 64 bit seed

    Returns
    -------
    seed : int
    """
    if seed is None or isinstance(seed, bool):
        raise ValueError("Seed {} is not an integer.".format(seed))
    try:
        value = int(seed)
    except (TypeError, ValueError):
        raise ValueError("Seed {} is not an integer.".format(seed))
    if value != seed or value < 0 or value >= SEED_BOUND:
        raise ValueError("Seed {} is not an unsigned 64 bit integer.".format(seed))
    return value


def make_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Returns the random stream addressed by (seed, index)

    The stream is a Philox generator keyed by seed + 2**64 * index, so
    stream `index` does not depend on how many other streams were used.

    Parameters
    ----------
    seed : int
        unsigned 64 bit seed
    index : int, optional
        stream index (e.g. word index of a sampled code)

    Returns
    -------
    rng : np.random.Generator
    """
    seed = check_seed(seed)
    index = int(index)
    if index < 0 or index >= SEED_BOUND:
        raise ValueError("Stream index {} out of range.".format(index))
    return np.random.Generator(np.random.Philox(key=seed + SEED_BOUND * index))


def log_binom(n, k) -> np.ndarray:
    """Natural log of the binomial coefficient, -inf where it vanishes
    Parameters
    ----------
    n : array_like
    k : array_like

    Returns
    -------
    out : np.ndarray
        log C(n, k), -inf where k < 0 or k > n
    """
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    valid = (k >= 0) & (k <= n)
    nn = np.where(valid, n, 0.0)
    kk = np.where(valid, k, 0.0)
    out = gammaln(nn + 1) - gammaln(kk + 1) - gammaln(nn - kk + 1)
    return np.where(valid, out, -np.inf)


def log2_binom(n: int, k: int) -> float:
    """ log2 C(n, k) computed through the log-gamma function """
    return float(log_binom(n, k)) / math.log(2)


def file_digest(path: str) -> str:
    """ SHA-256 hex digest of a file """
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            h.update(chunk)
    return h.hexdigest()


def to_builtin(obj):
    """ Recursively converts numpy scalars and arrays into JSON-friendly values """
    if isinstance(obj, dict):
        return {str(k): to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_builtin(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj) -> str:
    """ Canonical JSON text: insertion field order, newline terminated """
    return json.dumps(to_builtin(obj), ensure_ascii=False) + "\n"


def write_json(obj, sink):
    """Writes `obj` as canonical JSON to a path or to an open text file
    Parameters
    ----------
    obj : dict
        JSON-serializable payload
    sink : str or file-like
        destination
    """
    text = dumps_json(obj)
    if hasattr(sink, 'write'):
        sink.write(text)
    else:
        with open(sink, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)


def read_json(source):
    """ Reads JSON from a path or an open text file """
    if hasattr(source, 'read'):
        return json.loads(source.read())
    with open(source, 'r', encoding='utf-8') as f:
        return json.load(f)


def check_keys(payload: dict, required: tuple, optional: tuple = (), what: str = 'payload'):
    """ Rejects missing required keys and unknown keys of a JSON object """
    if not isinstance(payload, dict):
        raise ValueError("{} must be a JSON object.".format(what))
    missing = [k for k in required if k not in payload]
    if missing:
        raise ValueError("{} is missing fields {}.".format(what, missing))
    unknown = [k for k in payload if k not in required and k not in optional]
    if unknown:
        raise ValueError("{} has unknown fields {}.".format(what, unknown))
    return True
