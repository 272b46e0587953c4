"""The Lobachevsky function  L(t) = -int_0^t log|2 sin u| du.

L is odd and pi-periodic, so arguments are reduced to [-pi/2, pi/2] where
the power series

    L(t) = t - t log(2|t|) + t * sum_{n>=1} zeta(2n) / (n (2n+1)) (t/pi)^(2n)

converges geometrically with ratio at most 1/4.  (This is the series of
-log(sin u / u) integrated term by term.)
"""
from __future__ import annotations

import numpy as np
from scipy.special import zeta

from .errors import OutOfRangeError

__all__ = ["lobachevsky", "lobachevsky_unchecked"]

_N_TERMS = 40
_n = np.arange(1, _N_TERMS + 1)
_COEFFS = zeta(2 * _n) / (_n * (2 * _n + 1))


def lobachevsky_unchecked(theta):
    """Vectorized evaluation for any real input."""
    t = np.asarray(theta, dtype=float)
    r = t - np.pi * np.round(t / np.pi)  # in [-pi/2, pi/2]
    a = np.abs(r)
    x2 = (a / np.pi) ** 2
    series = np.zeros_like(a)
    for c in _COEFFS[::-1]:  # Horner in x2
        series = (series + c) * x2
    with np.errstate(divide="ignore", invalid="ignore"):
        log_term = np.where(a > 0, a * np.log(2 * np.where(a > 0, a, 1.0)), 0.0)
    val = a - log_term + a * series
    out = np.sign(r) * val
    return out if out.ndim else float(out)


def lobachevsky(theta):
    """Lobachevsky function on [0, pi]; raises EOutOfRange outside."""
    t = np.asarray(theta, dtype=float)
    if np.any(t < 0) or np.any(t > np.pi) or np.any(~np.isfinite(t)):
        raise OutOfRangeError("Lobachevsky argument outside [0, pi]")
    return lobachevsky_unchecked(t)
