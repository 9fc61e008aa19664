"""Order-alpha Renyi divergence between two Poisson distributions.

This scalar kernel is the pointwise integrand behind every divergence of
intensity measures computed by the library.  Values live in [0, inf] with
the conventions 0/0 = 0 and t/0 = inf for t > 0; in particular the value
is inf exactly when alpha >= 1, s > 0 and t = 0.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import InvalidAlpha, NonConvergent
from .extended import INF

# |alpha - 1| below this switches to the limiting (KL) branch: the
# 1/(1 - alpha) factor is catastrophically cancellative closer in.
_ALPHA_ONE_WINDOW = 1e-9

# s/t inside [1/2, 2] uses a compensated expm1/log1p evaluation.
_RATIO_LO = 0.5
_RATIO_HI = 2.0

_ORACLE_BLOCK = 4096


def _validate(s: float, t: float, alpha: float):
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
        raise InvalidAlpha(f"alpha must be a real number, got {alpha!r}")
    if math.isnan(alpha) or alpha < 0 or math.isinf(alpha):
        raise InvalidAlpha(f"alpha must be finite and nonnegative, got {alpha!r}")
    for name, v in (("s", s), ("t", t)):
        if math.isnan(v) or v < 0 or math.isinf(v):
            raise ValueError(f"{name} must be a finite nonnegative real, got {v!r}")


def _kl_poisson(s: float, t: float) -> float:
    if s == 0.0:
        return t
    if t == 0.0:
        return INF
    x = (s - t) / t
    if -0.5 <= x <= 1.0:
        # s log(s/t) + t - s == t ((1+x) log1p(x) - x), stable near s == t
        return t * ((1.0 + x) * math.log1p(x) - x)
    return s * math.log(s / t) + t - s


def renyi_poisson(s: float, t: float, alpha: float) -> float:
    """Renyi divergence of Poisson(s) from Poisson(t), order ``alpha``.

    Closed form: ``1(s=0) t`` at alpha = 0,
    ``(alpha s + (1-alpha) t - s^alpha t^(1-alpha)) / (1-alpha)`` away from
    0 and 1, and ``s log(s/t) + t - s`` at alpha = 1.  Nonnegative, and
    homogeneous of degree one in ``(s, t)`` jointly.
    """
    s, t = float(s), float(t)
    _validate(s, t, alpha)
    alpha = float(alpha)
    if alpha == 0.0:
        return t if s == 0.0 else 0.0
    if s == t:
        return 0.0
    if abs(alpha - 1.0) < _ALPHA_ONE_WINDOW:
        return _kl_poisson(s, t)
    one_m = 1.0 - alpha
    if s == 0.0:
        return t
    if t == 0.0:
        return alpha / one_m * s if alpha < 1.0 else INF
    if _RATIO_LO <= s / t <= _RATIO_HI:
        x = (s - t) / t
        num = t * (alpha * x - math.expm1(alpha * math.log1p(x)))
    else:
        try:
            cross = math.exp(alpha * math.log(s) + one_m * math.log(t))
        except OverflowError:
            cross = INF
        num = alpha * s + one_m * t - cross
    value = num / one_m
    return value if value > 0.0 else 0.0


def _log_pmf(k: np.ndarray, mean: float) -> np.ndarray:
    return -mean + k * math.log(mean) - gammaln(k + 1.0)


def renyi_poisson_oracle(s: float, t: float, alpha: float,
                         tail_tol: float = 1e-14,
                         max_terms: int = 1_000_000) -> float:
    """Reference value by direct summation over the Poisson pmfs.

    Sums ``sum_k p_s(k)^alpha p_t(k)^(1-alpha)`` (or the pointwise KL sum
    at alpha = 1) until both pmf tails drop below ``tail_tol`` and, for
    alpha > 1, until the summand itself has passed its peak and become
    negligible.  Intended for tests; the closed form above is the
    production path.
    """
    s, t = float(s), float(t)
    _validate(s, t, alpha)
    if not 0.0 < tail_tol < 1.0:
        raise ValueError("tail_tol must lie in (0, 1)")
    alpha = float(alpha)

    if alpha == 0.0:
        # -log p_t(support of p_s): full support for s > 0, {0} for s = 0
        return t if s == 0.0 else 0.0
    if s == 0.0 and t == 0.0:
        return 0.0
    if s == 0.0:
        # only the k = 0 term survives: log e^{-t(1-alpha)} / (alpha - 1) = t
        return t
    if t == 0.0:
        if alpha >= 1.0:
            return INF
        return -alpha * s / (alpha - 1.0)

    if alpha == 1.0:
        return _oracle_kl(s, t, tail_tol, max_terms)
    return _oracle_power(s, t, alpha, tail_tol, max_terms)


def _oracle_kl(s, t, tail_tol, max_terms):
    total = []
    cdf_s = cdf_t = 0.0
    k0 = 0
    while k0 < max_terms:
        k = np.arange(k0, min(k0 + _ORACLE_BLOCK, max_terms), dtype=float)
        lp_s = _log_pmf(k, s)
        lp_t = _log_pmf(k, t)
        p_s = np.exp(lp_s)
        total.append(float(np.sum(p_s * (lp_s - lp_t))))
        cdf_s += float(np.sum(p_s))
        cdf_t += float(np.sum(np.exp(lp_t)))
        k0 += len(k)
        if 1.0 - cdf_s < tail_tol and 1.0 - cdf_t < tail_tol:
            return max(math.fsum(total), 0.0)
    raise NonConvergent(f"KL summation exceeded {max_terms} terms")


def _oracle_power(s, t, alpha, tail_tol, max_terms):
    # The summand is proportional to peak^k / k!, a Poisson-shaped sequence
    # peaking near k = s^alpha t^(1-alpha); for alpha > 1 that peak can sit
    # far beyond both pmf tails and must be summed past explicitly.
    log_peak_mean = alpha * math.log(s) + (1.0 - alpha) * math.log(t)
    peak = math.exp(log_peak_mean) if log_peak_mean < 700 else INF
    if peak > max_terms:
        raise NonConvergent(
            f"summand peaks near k={peak:.3g}, beyond the {max_terms}-term budget")
    log_z = -INF
    cdf_s = cdf_t = 0.0
    k0 = 0
    log_tol = math.log(tail_tol)
    while k0 < max_terms:
        k = np.arange(k0, min(k0 + _ORACLE_BLOCK, max_terms), dtype=float)
        lp_s = _log_pmf(k, s)
        lp_t = _log_pmf(k, t)
        terms = alpha * lp_s + (1.0 - alpha) * lp_t
        log_z = float(logsumexp([log_z, float(logsumexp(terms))]))
        cdf_s += float(np.sum(np.exp(lp_s)))
        cdf_t += float(np.sum(np.exp(lp_t)))
        k0 += len(k)
        tails_done = (1.0 - cdf_s < tail_tol) and (1.0 - cdf_t < tail_tol)
        past_peak = k0 > peak
        block_negligible = float(np.max(terms)) - log_z < log_tol
        if tails_done and past_peak and block_negligible:
            return max(log_z / (alpha - 1.0), 0.0)
    raise NonConvergent(f"summation exceeded {max_terms} terms")
