# bounds.py - Scalar and asymptotic quantities: entropies, rates, tails, conversions
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import csv
import logging
import math
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Callable, Sequence
import numpy as np
from scipy import integrate, optimize, stats
from scipy.special import entr, ive

from fockcodes.errors import ConvergenceError

logger = logging.getLogger(__name__)

QUAD_TOL = 1e-12
LN2 = math.log(2)

# Positivity thresholds of the quantum-rate condition quoted in the
# literature for alpha = 5, keyed by ensemble.
REFERENCE_CROSSINGS = {'uniform': 0.15, 'multinomial': 0.05}

ENSEMBLES = ('uniform', 'multinomial')
EXPONENTS = ('binary', 'modes')


@dataclass(frozen=True)
class ChannelParams(object):
    """
     Amplitude damping parameters: loss probability gamma per mode,
     total excitation N and loss budget t.
    """
    gamma: float
    N: int
    t: int

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma={} must lie in [0, 1].".format(self.gamma))
        if int(self.N) != self.N or self.N < 0:
            raise ValueError("N={} must be a nonnegative integer.".format(self.N))
        if int(self.t) != self.t or self.t < 0:
            raise ValueError("t={} must be a nonnegative integer.".format(self.t))


@dataclass(frozen=True)
class RateCurvePoint(object):
    delta: float
    alpha: float
    value: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta={} must lie in (0, 1).".format(self.delta))


def h2(x):
    """Binary entropy in bits, with 0 log 0 = 0
    Parameters
    ----------
    x : float or np.ndarray
        values in [0, 1]

    Returns
    -------
    h : float or np.ndarray
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("Binary entropy argument {} outside [0, 1].".format(x))
    out = (entr(arr) + entr(1.0 - arr)) / LN2
    return float(out) if out.ndim == 0 else out


def entropy_binom_estimate(n: int, k: int) -> float:
    """ n h2(k/n), the leading-order estimate of log2 C(n, k) """
    if n <= 0 or not 0 <= k <= n:
        raise ValueError("Need 0 <= k <= n and n > 0, got n={}, k={}.".format(n, k))
    return n * h2(k / n)


def p_loss(params: ChannelParams) -> float:
    """Probability that at most t of N photons are lost, P[Bin(N, gamma) <= t]
    Parameters
    ----------
    params : ChannelParams

    Returns
    -------
    p : float
    """
    N, t, gamma = params.N, params.t, params.gamma
    if t >= N or gamma == 0.0:
        return 1.0
    if gamma == 1.0:
        return 0.0
    return float(stats.binom.cdf(t, N, gamma))


def loss_probability(N: int, t: int, gamma: float) -> float:
    """ p_loss(ChannelParams(gamma, N, t)) """
    return p_loss(ChannelParams(gamma, N, t))


def _check_rate_domain(delta: float, alpha: float):
    if alpha <= 0:
        raise ValueError("alpha={} must be positive.".format(alpha))
    if not 0.0 <= delta < 1.0:
        raise ValueError("delta={} must lie in [0, 1).".format(delta))


def rate_gv(delta: float, alpha: float) -> float:
    """ Greedy (GV) rate of balanced l1 codes on the typical set """
    _check_rate_domain(delta, alpha)
    a = alpha
    return ((1 + a) * h2(1 / (1 + a))
            - (a / (1 + a) + delta) * h2(a / (a + (1 + a) * delta))
            - (a + delta) * h2(a / (a + delta)))


def rate_u(delta: float, alpha: float) -> float:
    """ Rate achieved by codes sampled uniformly from the simplex """
    _check_rate_domain(delta, alpha)
    a = alpha
    return (1 + a) / 2 * h2(1 / (1 + a)) - (a + delta) * h2(a / (a + delta))


def delta_alpha(alpha: float, tol: float = QUAD_TOL) -> float:
    """Limiting normalized mean distance of multinomial codewords

    Evaluated by adaptive quadrature of
    (1/pi) int_0^pi exp(-2(1-cos th)/alpha) (1+cos th) dth, the integral
    form of exp(-2/alpha) (I0(2/alpha) + I1(2/alpha)).

    Parameters
    ----------
    alpha : float
        mode ratio q/N
    tol : float, optional
        absolute tolerance on the integral

    Returns
    -------
    delta : float
    """
    if alpha <= 0:
        raise ValueError("alpha={} must be positive.".format(alpha))

    def integrand(theta):
        c = math.cos(theta)
        return math.exp(-2.0 * (1.0 - c) / alpha) * (1.0 + c)

    value, abserr = integrate.quad(integrand, 0.0, math.pi, epsabs=tol / 10, epsrel=0.0, limit=200)
    if abserr > tol:
        raise ConvergenceError("Quadrature of Delta_alpha", abserr, tol)
    return value / math.pi


def delta_alpha_bessel(alpha: float) -> float:
    """ exp(-2/alpha) (I0(2/alpha) + I1(2/alpha)) via exponentially scaled Bessel functions """
    if alpha <= 0:
        raise ValueError("alpha={} must be positive.".format(alpha))
    x = 2.0 / alpha
    return float(ive(0, x) + ive(1, x))


def skellam_mean_abs(alpha: float) -> float:
    """ E|X - Z| for independent X, Z ~ Poisson(1/alpha) """
    return 2.0 * delta_alpha_bessel(alpha) / alpha


def rate_m(delta: float, alpha: float) -> float:
    """Rate of multinomial codes, (Delta_alpha - delta)^2 / (8 ln 2)

    Past delta = Delta_alpha the ensemble no longer reaches the distance and
    the value is returned with a negative sign, so the curve changes sign
    at its root.
    """
    if alpha <= 0:
        raise ValueError("alpha={} must be positive.".format(alpha))
    if delta < 0:
        raise ValueError("delta={} must be nonnegative.".format(delta))
    gap = delta_alpha_bessel(alpha) - delta
    return math.copysign(gap * gap, gap) / (8 * LN2)


def kraus_exponent(delta: float, alpha: float, exponent: str = 'binary') -> float:
    """Growth exponent of the Kraus count, log2 M / N

    'binary' counts patterns on S_{N,r}, giving (1+delta) h2(1/(1+delta));
    'modes' counts them on S_{alpha N, r}, giving (alpha+delta) h2(alpha/(alpha+delta)).
    """
    if exponent == 'binary':
        return (1 + delta) * h2(1 / (1 + delta))
    if exponent == 'modes':
        return (alpha + delta) * h2(alpha / (alpha + delta))
    raise ValueError("Unknown exponent '{}', expected one of {}.".format(exponent, EXPONENTS))


def quantum_rate_bound(delta: float, alpha: float, ensemble: str = 'uniform',
                       exponent: str = 'binary') -> float:
    """Supremum of log2 K / N certifiable for random codes

    R(delta)/3 - (2/3) * kraus_exponent(delta, alpha)
    with R the rate of the chosen ensemble.
    """
    _check_rate_domain(delta, alpha)
    if ensemble == 'uniform':
        rate = rate_u(delta, alpha)
    elif ensemble == 'multinomial':
        rate = rate_m(delta, alpha)
    else:
        raise ValueError("Unknown ensemble '{}', expected one of {}.".format(ensemble, ENSEMBLES))
    return rate / 3 - 2.0 / 3 * kraus_exponent(delta, alpha, exponent)


def exact_quantum_rate(delta: float, alpha: float) -> float:
    """ Rate of exact Fock codes from GV codes and simplex partitions """
    return rate_gv(delta, alpha) - (alpha + delta) * h2(alpha / (alpha + delta))


def kraus_count(q: int, t: int) -> int:
    """ Number of loss patterns of weight at most t on q modes """
    if q < 1 or t < 0:
        raise ValueError("Need q >= 1 and t >= 0, got q={}, t={}.".format(q, t))
    # sum_{r<=t} C(r+q-1, q-1) telescopes to C(t+q, q)
    return math.comb(t + q, q)


def tverberg_dimension(L: int, q: int, t: int) -> int:
    """Dimension K of an exact code built from an l1 code of size L

    Largest K with L >= (K-1) C(t+q-1, t-1) + 1.
    """
    if L < 1 or q < 1 or t < 1:
        raise ValueError("Need L, q, t >= 1, got L={}, q={}, t={}.".format(L, q, t))
    return (L - 1) // math.comb(t + q - 1, t - 1) + 1


def eps_to_ad(eps: float, p: float) -> float:
    """Error of the full loss channel from the error of the truncated one,
       sqrt(1 - (1 - eps^2) p)
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps={} must lie in [0, 1].".format(eps))
    if not 0.0 < p <= 1.0:
        raise ValueError("p={} must lie in (0, 1].".format(p))
    return math.sqrt(max(0.0, 1.0 - (1.0 - eps * eps) * p))


def eps_from_ad(eps: float, p: float) -> float:
    """ Error of the truncated channel from the error of the full one, eps / sqrt(p) """
    if eps < 0.0:
        raise ValueError("eps={} must be nonnegative.".format(eps))
    if not 0.0 < p <= 1.0:
        raise ValueError("p={} must lie in (0, 1].".format(p))
    return eps / math.sqrt(p)


def feasibility_check(L: int, K: int, M: int, epsilon: float) -> bool:
    """Checks K^3 M^2 <= L^(1 - epsilon)

    Compared in the log domain; near ties the comparison is redone with
    integers, reading epsilon as the decimal it prints as.

    Parameters
    ----------
    L : int
        classical code size
    K : int
        code dimension
    M : int
        Kraus count
    epsilon : float
        slack in [0, 1)

    Returns
    -------
    feasible : bool
    """
    for name, value in (('L', L), ('K', K), ('M', M)):
        if int(value) != value or value < 1:
            raise ValueError("{}={} must be a positive integer.".format(name, value))
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("epsilon={} must lie in [0, 1).".format(epsilon))
    L, K, M = int(L), int(K), int(M)
    lhs = 3 * math.log(K) + 2 * math.log(M)
    rhs = (1 - epsilon) * math.log(L)
    if abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs)):
        return lhs < rhs
    power = 1 - Fraction(repr(float(epsilon)))
    if power.denominator > 1000:
        logger.warning("Tie in feasibility_check resolved in floating point (epsilon=%r).", epsilon)
        return lhs <= rhs
    return (K ** 3 * M ** 2) ** power.denominator <= L ** power.numerator


def inf_norm_threshold(N: int, alpha: float, eps: float, ensemble: str = 'uniform') -> float:
    """Local excitation threshold B

    (1+eps) log_{1+alpha} N for the uniform ensemble and GV codes,
    (1+eps) ln N / ln ln N for the multinomial ensemble.
    """
    if N < 2:
        raise ValueError("N={} must be at least 2.".format(N))
    if ensemble in ('uniform', 'greedy_gv', 'explicit'):
        if alpha <= 0:
            raise ValueError("alpha={} must be positive.".format(alpha))
        return (1 + eps) * math.log(N) / math.log(1 + alpha)
    if ensemble == 'multinomial':
        if N < 3:
            raise ValueError("N={} must be at least 3 for the multinomial threshold.".format(N))
        return (1 + eps) * math.log(N) / math.log(math.log(N))
    raise ValueError("Unknown ensemble '{}'.".format(ensemble))


@dataclass(frozen=True)
class RandomCodePlan(object):
    N: int
    q: int
    t: int
    K: int
    L: int
    M: int
    gamma: float
    ensemble: str
    eps: float
    feasible: bool
    code_rate: float
    ensemble_rate: float
    quantum_rate: float
    quantum_rate_bound_binary: float
    quantum_rate_bound_modes: float
    B: float
    p_loss: float
    truncation_meaningful: bool

    def as_dict(self) -> dict:
        return asdict(self)


def random_code_plan(N: int, alpha: float, delta: float, K: int, L: int, gamma: float,
                     ensemble: str = 'uniform', eps: float = 0.1) -> RandomCodePlan:
    """Parameter check for the randomized Fock code construction
    Parameters
    ----------
    N : int
        total excitation
    alpha : float
        modes per excitation, q = floor(alpha N)
    delta : float
        relative loss budget, t = floor(delta N)
    K : int
        code dimension
    L : int
        size of the sampled classical code
    gamma : float
        loss probability per mode
    ensemble : str, optional
        'uniform' or 'multinomial'
    eps : float, optional
        slack of the feasibility condition and of the threshold B

    Returns
    -------
    plan : RandomCodePlan
    """
    if ensemble not in ENSEMBLES:
        raise ValueError("Unknown ensemble '{}', expected one of {}.".format(ensemble, ENSEMBLES))
    q = max(1, math.floor(alpha * N))
    t = math.floor(delta * N)
    M = kraus_count(q, t)
    rate = rate_u(delta, alpha) if ensemble == 'uniform' else rate_m(delta, alpha)
    return RandomCodePlan(
        N=N, q=q, t=t, K=K, L=L, M=M, gamma=gamma, ensemble=ensemble, eps=eps,
        feasible=feasibility_check(L, K, M, eps),
        code_rate=math.log2(L) / N,
        ensemble_rate=rate,
        quantum_rate=math.log2(K) / N,
        quantum_rate_bound_binary=quantum_rate_bound(delta, alpha, ensemble, 'binary'),
        quantum_rate_bound_modes=quantum_rate_bound(delta, alpha, ensemble, 'modes'),
        B=inf_norm_threshold(N, alpha, eps, ensemble),
        p_loss=loss_probability(N, t, gamma),
        truncation_meaningful=delta > gamma)


CURVES = ('rate_gv', 'rate_u', 'rate_m', 'quantum_rate_bound', 'exact_quantum_rate')


@dataclass(frozen=True)
class CurveSpec(object):
    """
     A named rate function of delta with alpha (and ensemble) held fixed.
    """
    name: str
    alpha: float
    ensemble: str = 'uniform'
    exponent: str = 'binary'

    def __post_init__(self):
        if self.name not in CURVES:
            raise ValueError("Unknown curve '{}', expected one of {}.".format(self.name, CURVES))
        if self.alpha <= 0:
            raise ValueError("alpha={} must be positive.".format(self.alpha))

    def __call__(self, delta: float) -> float:
        if self.name == 'rate_gv':
            return rate_gv(delta, self.alpha)
        if self.name == 'rate_u':
            return rate_u(delta, self.alpha)
        if self.name == 'rate_m':
            return rate_m(delta, self.alpha)
        if self.name == 'exact_quantum_rate':
            return exact_quantum_rate(delta, self.alpha)
        return quantum_rate_bound(delta, self.alpha, self.ensemble, self.exponent)

    @property
    def label(self) -> str:
        if self.name == 'quantum_rate_bound':
            return "{}_{}_{}".format(self.name, self.ensemble, self.exponent)
        return self.name


def zero_crossing(curve: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of a rate curve on [lo, hi] by bisection
    Parameters
    ----------
    curve : callable
        function of delta, e.g. a CurveSpec
    lo : float
    hi : float
        bracket with curve(lo) * curve(hi) < 0
    tol : float, optional
        absolute tolerance on the root

    Returns
    -------
    root : float
    """
    f_lo, f_hi = curve(lo), curve(hi)
    if not f_lo * f_hi < 0:
        raise ValueError("No sign change on [{}, {}]: values {} and {}.".format(lo, hi, f_lo, f_hi))
    return float(optimize.bisect(curve, lo, hi, xtol=tol))


def quantum_crossings(alpha: float, ensemble: str = 'uniform', lo: float = 1e-6,
                      hi: float = 0.5, tol: float = 1e-12) -> dict:
    """Zero crossings of the quantum-rate condition for both Kraus exponents.
       Differences to the quoted alpha = 5 thresholds are logged.
    """
    out = {}
    for exponent in EXPONENTS:
        root = zero_crossing(CurveSpec('quantum_rate_bound', alpha, ensemble, exponent), lo, hi, tol)
        out[exponent] = root
    reference = REFERENCE_CROSSINGS.get(ensemble) if alpha == 5 else None
    if reference is not None:
        for exponent, root in out.items():
            if abs(root - reference) > 1e-3:
                logger.info("Crossing for %s ensemble, alpha=%g, %s exponent is %.6f; quoted value %.2f.",
                            ensemble, alpha, exponent, root, reference)
    return out


def emit_curve(curve: Callable[[float], float], deltas: Sequence[float], sink):
    """Writes a curve sampled on `deltas` as CSV with a delta,value header
    Parameters
    ----------
    curve : callable
    deltas : sequence of float
    sink : str or file-like
        path or open text file
    """
    deltas = [float(d) for d in deltas]
    if len(deltas) == 0:
        raise ValueError("Empty delta grid.")
    rows = [(format(d, '.12g'), format(curve(d), '.12g')) for d in deltas]

    def _write(f):
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['delta', 'value'])
        writer.writerows(rows)

    if hasattr(sink, 'write'):
        _write(sink)
    else:
        with open(sink, 'w', encoding='utf-8', newline='') as f:
            _write(f)
