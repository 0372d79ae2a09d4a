"""Overflow-free evaluation of the scaled partial sums ``(e z)^(-n) p_{n-1}(n z)``.

Two convergent representations cover the plane without cancellation:

* the *head* form ``S(z) = (c_n / z) sum_{j<n} prod_{i<=j} (n - i)/(n z)``,
  used for ``|z| > 1``;
* the *tail* form ``T(z) = c_n sum_{j>=0} (n z)^j / ((n+1)...(n+j))``, which
  satisfies ``S = exp(n phi) - T`` and is used for ``|z| <= 1``.

Here ``c_n = e^(-n) n^n / n! = e^(-n) n^(n-1) / (n-1)!``.  Both sums have
terms bounded by one in modulus, so no rescaling is needed.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .branches import phi
from .errors import DomainError

MAX_N = 2000

# Bernoulli terms B_2k / (2k (2k-1)) of the Stirling remainder of ln n!
_BINET = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360)


def stirling_cn(n: int) -> float:
    """``e^(-n) n^n / n!`` to full double accuracy.

    Going through ``lgamma`` would lose about ``n ln n`` ulps to cancellation;
    instead the Stirling remainder is summed directly.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be positive")
    if n < 16:
        return math.exp(-n) * (n ** n / math.factorial(n))
    inv = 1.0 / n
    inv2 = inv * inv
    mu = 0.0
    for b in reversed(_BINET):
        mu = mu * inv2 + b
    mu *= inv
    return math.exp(-mu) / math.sqrt(2.0 * math.pi * n)


class ScaledSum(NamedTuple):
    """``value = (e z)^(-n) p_{n-1}(n z)`` and ``log_derivative = q'/q`` for
    ``q(z) = p_{n-1}(n z)``."""

    value: complex
    log_derivative: complex


def _check(n, z):
    n = int(n)
    if not 1 <= n <= MAX_N:
        raise DomainError(f"n must lie in 1..{MAX_N}, got {n}")
    a = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(a == 0):
        raise DomainError("the scaled partial sum is singular at z = 0")
    if not np.all(np.isfinite(a)):
        raise DomainError("non-finite argument")
    return n, a


def _tail(n: int, z: np.ndarray) -> np.ndarray:
    terms = int(10 * math.sqrt(n) + 30)
    term = np.ones_like(z)
    acc = np.ones_like(z)
    nz = n * z
    for j in range(1, terms + 1):
        term = term * nz / (n + j)
        acc += term
    return stirling_cn(n) * acc


def _head(n: int, z: np.ndarray) -> np.ndarray:
    term = np.ones_like(z)
    acc = np.ones_like(z)
    nz = n * z
    for i in range(1, n):
        term = term * (n - i) / nz
        acc += term
    return stirling_cn(n) / z * acc


def tail_sum(n: int, z):
    """``T(z) = exp(n phi(z)) - S(z)``; for ``|z| <= 1`` this is cheap and exact."""
    n, a = _check(n, z)
    out = _tail(n, a)
    return complex(out[0]) if np.ndim(z) == 0 else out


def _scaled(n: int, a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    inner = np.abs(a) <= 1.0
    if np.any(inner):
        zi = a[inner]
        out[inner] = np.exp(n * np.asarray(phi(zi))) - _tail(n, zi)
    if np.any(~inner):
        out[~inner] = _head(n, a[~inner])
    return out


def partial_sum_scaled(n: int, z) -> ScaledSum:
    """Scaled partial sum and its logarithmic derivative.

    Uses ``d/dz p_{n-1}(n z) = n p_{n-2}(n z)``, which gives
    ``q'/q = n (1 - c_n / (z S))``.

    Raises
    ------
    DomainError
        For ``z = 0`` or ``n`` outside ``1..2000``.
    """
    n, a = _check(n, z)
    s = _scaled(n, a)
    with np.errstate(divide="ignore", invalid="ignore"):
        dlog = n * (1.0 - stirling_cn(n) / (a * s))
    if np.ndim(z) == 0:
        return ScaledSum(complex(s[0]), complex(dlog[0]))
    return ScaledSum(s, dlog)


def scaled_value(n: int, z):
    """Shorthand for ``partial_sum_scaled(n, z).value``."""
    n, a = _check(n, z)
    out = _scaled(n, a)
    return complex(out[0]) if np.ndim(z) == 0 else out


def cauchy_transform(n: int, z, side: str):
    """``F_n(z)`` via the residue identity, evaluated without cancellation.

    ``side`` is ``'interior'`` or ``'exterior'`` relative to the contour; the
    two values differ by exactly ``exp(n phi(z))``.
    """
    if side not in ("interior", "exterior"):
        raise DomainError(f"side must be 'interior' or 'exterior', got {side!r}")
    n, a = _check(n, z)
    small = np.abs(a) <= 1.0
    out = np.empty_like(a)
    if np.any(small):
        t = _tail(n, a[small])
        if side == "exterior":
            t = t - np.exp(n * np.asarray(phi(a[small])))
        out[small] = t
    if np.any(~small):
        s = -_head(n, a[~small])
        if side == "interior":
            s = s + np.exp(n * np.asarray(phi(a[~small])))
        out[~small] = s
    return complex(out[0]) if np.ndim(z) == 0 else out
