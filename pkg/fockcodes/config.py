# config.py - Job configuration of the command line front end
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

from dataclasses import dataclass, fields, asdict
from typing import Optional, Tuple

from fockcodes.bounds import CURVES, ENSEMBLES
from fockcodes.fock_codes import PARTITION_POLICIES
from fockcodes.kl_certifier import PATTERN_CAP, LAMBDA_MODES
from fockcodes.simplex import ENUMERATION_CAP, SimplexShape
from fockcodes.utils import check_seed


def _positive_int(name: str, value, allow_zero: bool = False):
    if value is None:
        raise ValueError("Parameter {} is required.".format(name))
    if isinstance(value, bool) or int(value) != value or value < (0 if allow_zero else 1):
        raise ValueError("Parameter {}={} must be a {} integer.".format(
            name, value, "nonnegative" if allow_zero else "positive"))


def _in_unit(name: str, value, closed_low: bool = True):
    if value is None:
        raise ValueError("Parameter {} is required.".format(name))
    low_ok = value >= 0.0 if closed_low else value > 0.0
    if not (low_ok and value <= 1.0):
        raise ValueError("Parameter {}={} must lie in {}0, 1].".format(name, value, "[" if closed_low else "("))


@dataclass(frozen=True)
class GlobalConfig(object):
    seed: int = 0
    out: Optional[str] = None
    tol: float = 1e-10
    cap_enum: int = ENUMERATION_CAP
    cap_patterns: int = PATTERN_CAP
    timing: bool = False
    verbose: bool = False

    def __post_init__(self):
        check_seed(self.seed)
        if not self.tol > 0:
            raise ValueError("Tolerance tol={} must be positive.".format(self.tol))
        _positive_int('cap_enum', self.cap_enum)
        _positive_int('cap_patterns', self.cap_patterns)


def resolve_shape(q: Optional[int], N: Optional[int], alpha: Optional[float]) -> SimplexShape:
    """ Shape from q and N, or from alpha and N with q = floor(alpha N) """
    _positive_int('N', N, allow_zero=True)
    if q is not None:
        _positive_int('q', q)
        return SimplexShape(q, N)
    if alpha is None:
        raise ValueError("Either q or alpha is required.")
    return SimplexShape.from_alpha(alpha, N)


@dataclass(frozen=True)
class SampleConfig(object):
    ensemble: str = 'uniform'
    q: Optional[int] = None
    N: Optional[int] = None
    alpha: Optional[float] = None
    L: Optional[int] = None

    def __post_init__(self):
        if self.ensemble not in ENSEMBLES:
            raise ValueError("Unknown ensemble '{}', expected one of {}.".format(self.ensemble, ENSEMBLES))
        _positive_int('L', self.L)
        resolve_shape(self.q, self.N, self.alpha)


@dataclass(frozen=True)
class GreedyConfig(object):
    q: Optional[int] = None
    N: Optional[int] = None
    alpha: Optional[float] = None
    t: Optional[int] = None
    eps: float = 1.0
    xi: float = 0.25
    typical: bool = True
    scan: str = 'shuffled'

    def __post_init__(self):
        _positive_int('t', self.t)
        resolve_shape(self.q, self.N, self.alpha)
        if self.scan not in ('shuffled', 'colex'):
            raise ValueError("Unknown scan order '{}', expected 'shuffled' or 'colex'.".format(self.scan))


@dataclass(frozen=True)
class CertifyConfig(object):
    code: Optional[str] = None
    K: Optional[int] = None
    t: Optional[int] = None
    gamma: Optional[float] = None
    lambda_mode: Optional[str] = None
    partition: str = 'sequential'
    eps: float = 1.0
    alpha: Optional[float] = None

    def __post_init__(self):
        if not self.code:
            raise ValueError("Parameter code (input code file) is required.")
        _positive_int('K', self.K)
        _positive_int('t', self.t, allow_zero=True)
        _in_unit('gamma', self.gamma)
        if self.lambda_mode is not None and self.lambda_mode not in LAMBDA_MODES:
            raise ValueError("Unknown lambda mode '{}', expected one of {}.".format(self.lambda_mode, LAMBDA_MODES))
        if self.partition not in PARTITION_POLICIES:
            raise ValueError("Unknown partition policy '{}'.".format(self.partition))


@dataclass(frozen=True)
class BoundsConfig(object):
    alpha: float = 1.0
    delta_min: float = 0.0
    delta_max: float = 0.25
    points: int = 26
    curves: Tuple[str, ...] = ('rate_gv', 'rate_u')
    ensemble: str = 'uniform'

    def __post_init__(self):
        object.__setattr__(self, 'curves', tuple(self.curves))
        if self.alpha <= 0:
            raise ValueError("alpha={} must be positive.".format(self.alpha))
        if not 0.0 <= self.delta_min <= self.delta_max < 1.0:
            raise ValueError("Need 0 <= delta_min <= delta_max < 1.")
        _positive_int('points', self.points)
        for name in self.curves:
            if name not in CURVES:
                raise ValueError("Unknown curve '{}', expected one of {}.".format(name, CURVES))
        if self.ensemble not in ENSEMBLES:
            raise ValueError("Unknown ensemble '{}'.".format(self.ensemble))


@dataclass(frozen=True)
class OracleConfig(object):
    code: Optional[str] = None
    q: Optional[int] = None
    N: Optional[int] = None
    K: int = 2
    t: Optional[int] = None
    gamma: Optional[float] = None
    trials: int = 100
    id_trials: int = 10000
    fault: Optional[float] = None

    def __post_init__(self):
        _positive_int('t', self.t, allow_zero=True)
        _in_unit('gamma', self.gamma)
        _positive_int('K', self.K)
        _positive_int('trials', self.trials)
        _positive_int('id_trials', self.id_trials)
        if self.code is None:
            resolve_shape(self.q, self.N, None)


COMMAND_CONFIGS = {
    'sample': SampleConfig,
    'greedy': GreedyConfig,
    'certify': CertifyConfig,
    'bounds': BoundsConfig,
    'oracle': OracleConfig,
}


def build_config(command: str, file_values: dict = None, flag_values: dict = None) -> tuple:
    """Merges defaults, config file values and command line flags
    Parameters
    ----------
    command : str
        one of COMMAND_CONFIGS
    file_values : dict, optional
        flat JSON object from the config file
    flag_values : dict, optional
        parsed flags; None means the flag was not given

    Returns
    -------
    config : tuple
        (GlobalConfig, command config)
    """
    if command not in COMMAND_CONFIGS:
        raise ValueError("Unknown command '{}'.".format(command))
    cls = COMMAND_CONFIGS[command]
    global_names = {f.name for f in fields(GlobalConfig)}
    command_names = {f.name for f in fields(cls)}
    file_values = {} if file_values is None else file_values
    if not isinstance(file_values, dict):
        raise ValueError("Config file must hold a JSON object.")
    unknown = sorted(set(file_values) - global_names - command_names)
    if unknown:
        raise ValueError("Unknown config fields for '{}': {}.".format(command, unknown))
    merged = dict(file_values)
    merged.update({k: v for k, v in (flag_values or {}).items() if v is not None})
    unknown = sorted(set(merged) - global_names - command_names)
    if unknown:
        raise ValueError("Unknown parameters for '{}': {}.".format(command, unknown))
    try:
        glob = GlobalConfig(**{k: v for k, v in merged.items() if k in global_names})
        job = cls(**{k: v for k, v in merged.items() if k in command_names})
    except TypeError as e:
        raise ValueError(str(e))
    return glob, job


def config_record(glob: GlobalConfig, job) -> dict:
    """ Parameters echoed into reports; output locations are left out """
    out = {k: v for k, v in asdict(glob).items() if k not in ('out', 'verbose', 'timing')}
    out.update(asdict(job))
    return out
