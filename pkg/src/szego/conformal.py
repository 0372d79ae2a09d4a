"""The conformal map ``lambda`` with ``phi(lambda(xi)) = xi^2`` near the saddle.

Writing ``z = 1 + u`` and ``rho(u) = 2 phi(1 + u) / u^2`` (analytic, ``rho(0) = 1``),
the inverse map is ``xi = (u / sqrt 2) sqrt(rho(u))`` on the principal square
root.  Its reversion ``u = sum_m a_m (sqrt 2 xi)^m`` has rational ``a_m``, so the
Taylor coefficients of ``lambda`` are ``c_m = a_m 2^(m/2)`` and are computed
exactly by Lagrange inversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .branches import phi
from .errors import DomainError

MAX_ORDER = 30
TRUST_RADIUS = 0.35
DEFAULT_ORDER = 20
# |z - 1| beyond which lambda_inverse is not offered
INVERSE_RADIUS = 0.5
_RHO_SERIES_RADIUS = 0.25
_RHO_TERMS = 40


@dataclass(frozen=True)
class SeriesExpansion:
    """Truncated power series ``sum_m coefficients[m] (x - center)^m``.

    ``exact`` optionally records rational data from which the floating
    coefficients were derived.
    """

    center: complex
    coefficients: tuple[float, ...]
    trust_radius: float
    exact: tuple[Fraction, ...] = ()

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        a = np.asarray(x, dtype=complex) - self.center
        acc = np.zeros_like(a)
        for c in reversed(self.coefficients):
            acc = acc * a + c
        return complex(acc) if acc.ndim == 0 else acc


# -- exact rational series helpers ------------------------------------------

def _rho_series(terms: int) -> list[Fraction]:
    # rho(u) = 2 (u - ln(1+u)) / u^2 = 2 sum_{m>=0} (-1)^m u^m / (m + 2)
    return [Fraction(2 * (-1) ** m, m + 2) for m in range(terms)]


def _series_power(a: list[Fraction], p: Fraction) -> list[Fraction]:
    """``a(u)^p`` for a series with ``a[0] = 1`` (J.C.P. Miller recurrence)."""
    out = [Fraction(1)] + [Fraction(0)] * (len(a) - 1)
    for k in range(1, len(a)):
        acc = Fraction(0)
        for j in range(1, k + 1):
            acc += ((p + 1) * j - k) * a[j] * out[k - j]
        out[k] = acc / k
    return out


@lru_cache(maxsize=None)
def _reversion_rationals(order: int) -> tuple[Fraction, ...]:
    """Rationals ``a_0..a_order`` with ``u = sum a_m t^m``, ``t = u sqrt(rho(u))``."""
    rho = _rho_series(order + 1)
    a = [Fraction(0)]
    for m in range(1, order + 1):
        # Lagrange inversion: a_m = [u^(m-1)] rho^(-m/2) / m
        a.append(_series_power(rho, Fraction(-m, 2))[m - 1] / m)
    return tuple(a)


def lambda_coefficients(order: int = DEFAULT_ORDER) -> SeriesExpansion:
    """Taylor coefficients of ``lambda`` at ``xi = 0`` up to ``xi^order``.

    The branch is fixed by ``c_1 = +sqrt 2``; the first four coefficients are
    ``(1, sqrt 2, 2/3, sqrt 2 / 18)``.
    """
    if not 1 <= order <= MAX_ORDER:
        raise DomainError(f"order must be in 1..{MAX_ORDER}, got {order}")
    a = _reversion_rationals(order)
    coeffs = [1.0] + [float(a[m]) * 2.0 ** (0.5 * m) for m in range(1, order + 1)]
    # keep even powers of sqrt 2 exact in binary
    for m in range(2, order + 1, 2):
        coeffs[m] = float(a[m] * 2 ** (m // 2))
    return SeriesExpansion(0j, tuple(coeffs), TRUST_RADIUS, exact=a)


@lru_cache(maxsize=None)
def _default_series(order: int) -> SeriesExpansion:
    return lambda_coefficients(order)


def lambda_eval(xi, order: int = DEFAULT_ORDER):
    """Evaluate the truncated series of ``lambda`` at ``xi``.

    Raises
    ------
    DomainError
        If ``|xi|`` exceeds the trust radius 0.35.
    """
    a = np.asarray(xi, dtype=complex)
    if np.any(np.abs(a) > TRUST_RADIUS * (1 + 1e-12)):
        raise DomainError(f"|xi| exceeds the trust radius {TRUST_RADIUS}")
    return _default_series(order)(xi)


@lru_cache(maxsize=None)
def _rho_float(terms: int) -> np.ndarray:
    return np.array([float(c) for c in _rho_series(terms)])


def _rho(z):
    u = z - 1.0
    near = np.abs(u) < _RHO_SERIES_RADIUS
    out = np.empty_like(z)
    if np.any(near):
        acc = np.zeros_like(u[near])
        for c in _rho_float(_RHO_TERMS)[::-1]:
            acc = acc * u[near] + c
        out[near] = acc
    far = ~near
    if np.any(far):
        out[far] = 2.0 * np.asarray(phi(z[far])) / (u[far] * u[far])
    return out


def lambda_inverse(z):
    """``xi`` with ``phi(z) = xi^2`` and ``xi ~ (z - 1)/sqrt 2`` near ``z = 1``.

    Raises
    ------
    DomainError
        For ``|z - 1| > 0.5``.
    """
    a = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(a - 1.0) > INVERSE_RADIUS * (1 + 1e-12)):
        raise DomainError(f"lambda_inverse needs |z - 1| <= {INVERSE_RADIUS}")
    out = (a - 1.0) / math.sqrt(2.0) * np.sqrt(_rho(a))
    return complex(out[0]) if np.ndim(z) == 0 else out


def lambda_inverse_reversion(order: int = 8) -> np.ndarray:
    """Taylor coefficients of ``lambda^{-1}`` at ``z = 1`` by reverting ``lambda``.

    Independent of the closed form; used only as a cross-check (order <= 8).
    """
    if not 1 <= order <= 8:
        raise DomainError("series reversion cross-check is limited to order 8")
    c = np.array(lambda_coefficients(order).coefficients)
    # invert lambda(xi) - 1 = sum_{m>=1} c_m xi^m term by term
    b = np.zeros(order + 1)
    b[1] = 1.0 / c[1]
    for m in range(2, order + 1):
        # coefficient of u^m in sum_j c_j (sum_i b_i u^i)^j must vanish
        acc = 0.0
        power = np.zeros(order + 1)
        power[0] = 1.0
        for j in range(1, m + 1):
            power = np.convolve(power, b)[: order + 1]
            if j > 1:
                acc += c[j] * power[m]
        b[m] = -acc / c[1]
    return b


@lru_cache(maxsize=None)
def g0_rationals(order: int = 40) -> tuple[Fraction, ...]:
    """Exact Taylor coefficients of ``g0`` about ``z = 1``.

    ``g0(z) = 1/(sqrt 2 lambda^{-1}(z)) - 1/(z - 1) = (rho^(-1/2) - 1)/(z - 1)``;
    the series starts ``1/3 - (z - 1)/12 + ...``.
    """
    inv_sqrt = _series_power(_rho_series(order + 2), Fraction(-1, 2))
    return tuple(inv_sqrt[1: order + 2])


def g0_coefficients(order: int = 8) -> SeriesExpansion:
    exact = g0_rationals(max(order, 1))[: order + 1]
    return SeriesExpansion(1 + 0j, tuple(float(q) for q in exact), 1.0, exact=exact)


@lru_cache(maxsize=None)
def _g0_series() -> SeriesExpansion:
    return g0_coefficients(40)


def g0(z):
    """Regular part of the local expansion of ``F_n`` at the saddle.

    Closed form ``(rho^(-1/2) - 1)/(z - 1)``, summed from its Taylor series
    for ``|z - 1| < 0.25`` to avoid cancellation.
    """
    a = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(a - 1.0) > INVERSE_RADIUS * (1 + 1e-12)):
        raise DomainError(f"g0 is only provided for |z - 1| <= {INVERSE_RADIUS}")
    u = a - 1.0
    near = np.abs(u) < _RHO_SERIES_RADIUS
    out = np.empty_like(a)
    if np.any(near):
        out[near] = _g0_series()(a[near])
    far = ~near
    if np.any(far):
        out[far] = (1.0 / np.sqrt(_rho(a[far])) - 1.0) / u[far]
    return complex(out[0]) if np.ndim(z) == 0 else out
