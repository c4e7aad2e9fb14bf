"""Special-function kernel used by every other module.

Thin domain-checked wrappers over the scipy implementations, plus the
finite-part ("neutrix") gamma values at non-positive integers that the
moment series needs.  Everything is pure and thread-safe.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .errors import DomainError

__all__ = [
    "EULER_GAMMA",
    "log_gamma",
    "polygamma",
    "digamma",
    "trigamma",
    "reg_inc_beta",
    "inv_reg_inc_beta",
    "log_beta",
    "harmonic",
    "neutrix_gamma",
    "std_normal_quantile",
]

EULER_GAMMA = float(np.euler_gamma)


def _checked(x, name, lower=None, upper=None, open_lower=False, open_upper=False):
    arr = np.asarray(x, dtype=float)
    if arr.size == 0:
        return arr
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if lower is not None:
        ok = arr > lower if open_lower else arr >= lower
        if not np.all(ok):
            raise DomainError(f"{name} must be {'>' if open_lower else '>='} {lower}")
    if upper is not None:
        ok = arr < upper if open_upper else arr <= upper
        if not np.all(ok):
            raise DomainError(f"{name} must be {'<' if open_upper else '<='} {upper}")
    return arr


def _ret(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    return _ret(_sp.gammaln(_checked(x, "x", lower=0.0, open_lower=True)))


def polygamma(order, x):
    """Digamma (order 0) or trigamma (order 1) at x > 0."""
    if order not in (0, 1):
        raise DomainError("polygamma supports orders 0 and 1 only")
    arr = _checked(x, "x", lower=0.0, open_lower=True)
    return _ret(_sp.psi(arr) if order == 0 else _sp.polygamma(1, arr))


def digamma(x):
    return polygamma(0, x)


def trigamma(x):
    return polygamma(1, x)


def log_beta(p, q):
    """ln B(p, q) for p, q > 0."""
    pa = _checked(p, "p", lower=0.0, open_lower=True)
    qa = _checked(q, "q", lower=0.0, open_lower=True)
    return _ret(_sp.gammaln(pa) + _sp.gammaln(qa) - _sp.gammaln(pa + qa))


def reg_inc_beta(y, p, q):
    """Regularized incomplete beta I_y(p, q), the Beta(p, q) CDF at y."""
    ya = _checked(y, "y", lower=0.0, upper=1.0)
    pa = _checked(p, "p", lower=0.0, open_lower=True)
    qa = _checked(q, "q", lower=0.0, open_lower=True)
    return _ret(_sp.betainc(pa, qa, ya))


def inv_reg_inc_beta(u, p, q):
    """Inverse of ``reg_inc_beta`` in its first argument.

    Endpoints map to themselves: u = 0 -> 0 and u = 1 -> 1.
    """
    ua = _checked(u, "u", lower=0.0, upper=1.0)
    pa = _checked(p, "p", lower=0.0, open_lower=True)
    qa = _checked(q, "q", lower=0.0, open_lower=True)
    return _ret(_sp.betaincinv(pa, qa, ua))


def harmonic(r):
    """H_r = sum_{i=1}^{r} 1/i, with H_0 = 0 (empty sum)."""
    if r < 0 or r != int(r):
        raise DomainError("harmonic index must be a non-negative integer")
    return math.fsum(1.0 / i for i in range(1, int(r) + 1))


def neutrix_gamma(m):
    """Finite-part value assigned to Gamma at a non-positive integer m = -r.

    Evaluates ((-1)^r / r!) (H_r - euler_gamma).  This regularization exists
    only to give the moment series a meaning at its gamma poles; it must
    never be used where the ordinary gamma function is defined.
    """
    if isinstance(m, bool) or not isinstance(m, (int, float, np.integer, np.floating)):
        raise DomainError("neutrix_gamma argument must be a number")
    mf = float(m)
    if not mf.is_integer():
        raise DomainError("neutrix_gamma is defined for integer arguments only")
    if mf > 0:
        raise DomainError("neutrix_gamma argument must be a non-positive integer")
    r = int(-mf)
    return ((-1.0) ** r / math.factorial(r)) * (harmonic(r) - EULER_GAMMA)


def std_normal_quantile(u):
    """z with Phi(z) = u, for u in the open interval (0, 1)."""
    ua = _checked(u, "u", lower=0.0, upper=1.0, open_lower=True, open_upper=True)
    return _ret(_sp.ndtri(ua))
