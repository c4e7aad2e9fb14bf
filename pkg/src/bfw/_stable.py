"""Numerically stable kernels shared by the distribution and likelihood code.

All functions accept scalars or arrays and never raise on extreme inputs;
they return the correct IEEE limit instead.
"""

from __future__ import annotations

import numpy as np

# exp(w) overflows just above 709; exp(exp(w)) already at w ~ 6.57.
W_CLAMP = 700.0

_LN2 = float(np.log(2.0))


def clamped_exp(w):
    """exp(min(w, W_CLAMP)); keeps products like q*e^w representable."""
    return np.exp(np.minimum(w, W_CLAMP))


def log1mexp(v, log_v=None):
    """ln(1 - exp(-v)) for v > 0.

    Switches between the expm1 and log1p forms at v = ln 2.  When ``log_v``
    is supplied it is used for the v -> 0 asymptote, extending the range to
    values of v that underflow to zero.
    """
    v = np.asarray(v, dtype=float)
    tiny = v < 1e-8
    small = v < _LN2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            small,
            np.log(-np.expm1(-np.where(small, v, 1.0))),
            np.log1p(-np.exp(-np.where(small, 1.0, v))),
        )
        if log_v is not None:
            lv = np.asarray(log_v, dtype=float)
            out = np.where(tiny, lv + np.log1p(-0.5 * np.where(tiny, v, 0.0)), out)
    return out


def u_over_expm1(u):
    """u / (e^u - 1) for u >= 0; -> 1 as u -> 0 and -> 0 as u -> inf."""
    u = np.asarray(u, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(u > 0, u / np.expm1(np.where(u > 0, u, 1.0)), 1.0)
    return out


def expm1_curvature(u):
    """u (e^u (1 - u) - 1) / (e^u - 1)^2, the derivative u d/du [u/(e^u-1)].

    Series around zero avoids the cancellation in the direct form; the
    e^{-u} rearrangement keeps the large-u branch overflow-free.
    """
    u = np.asarray(u, dtype=float)
    small = u < 1e-2
    us = np.where(small, u, 0.0)
    series = -us / 2.0 + us**2 / 6.0 - us**4 / 180.0 + us**6 / 5040.0
    ub = np.where(small, 1.0, u)
    em = np.exp(-ub)
    direct = ub * em * ((1.0 - ub) - em) / (1.0 - em) ** 2
    return np.where(small, series, direct)
