"""Branch-correct logarithms and the phase function ``phi(s) = s - 1 - ln s``.

Two branches are used throughout the package:

* ``standard``: principal logarithm, slit along the negative real axis,
  ``Im ln z`` in ``(-pi, pi]``.  The cut itself belongs to the upper side.
* ``tilde``: slit along ``[0, +inf)``, ``Im ln z`` in ``(0, 2pi)``.  It agrees
  with the standard branch in the upper half plane and is shifted by
  ``2 pi i`` in the lower half plane.

All functions accept Python scalars or numpy arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * np.pi

# tol_sign: noise floor for classifying Re(phi)
SIGN_TOL = 1e-12

# below this |z - 1| phi is summed from its Taylor series to avoid cancellation
_SERIES_RADIUS = 0.25
_SERIES_TERMS = 40


class Branch(str, enum.Enum):
    STANDARD = "standard"
    TILDE = "tilde"


class Sign(str, enum.Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"


@dataclass(frozen=True)
class PhaseValue:
    value: complex
    branch: Branch


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite argument")
    return arr


def _unwrap(arr, z):
    return complex(np.asarray(arr).reshape(-1)[0]) if np.ndim(z) == 0 else arr


def ln_std(z):
    """Principal logarithm with the negative real axis mapped to ``Im = pi``."""
    a = _as_complex(z)
    if np.any(a == 0):
        raise DomainError("logarithm of zero")
    out = np.log(a)
    # numpy sends -x - 0j to -i pi; the cut belongs to the upper side
    on_cut = (a.imag == 0) & (a.real < 0)
    out = np.where(on_cut, np.log(np.abs(a)) + 1j * np.pi, out)
    return _unwrap(out, z)


def ln_tilde(z):
    """Logarithm with imaginary part in ``(0, 2 pi)``, slit along ``[0, inf)``."""
    a = _as_complex(z)
    if np.any((a.imag == 0) & (a.real >= 0)):
        raise DomainError("ln_tilde is undefined on the nonnegative real axis")
    out = np.asarray(ln_std(a))
    out = np.where(a.imag < 0, out + TWO_PI * 1j, out)
    return _unwrap(out, z)


def _phi_near_one(u):
    # u - log(1 + u) = sum_{m>=2} (-1)^m u^m / m
    acc = np.zeros_like(u)
    for m in range(_SERIES_TERMS + 1, 1, -1):
        acc = acc * u + ((-1) ** m) / m
    return acc * u * u


def phi(z, branch: Branch | str = Branch.STANDARD):
    """``z - 1 - ln z`` on the selected logarithm branch."""
    branch = Branch(branch)
    a = np.atleast_1d(_as_complex(z))
    if branch is Branch.TILDE:
        if np.any((a.imag == 0) & (a.real >= 0)):
            raise DomainError("phi_tilde is undefined on the nonnegative real axis")
    elif np.any(a == 0):
        raise DomainError("phi is singular at 0")
    u = a - 1.0
    near = np.abs(u) < _SERIES_RADIUS
    out = np.empty_like(a)
    if np.any(near):
        out[near] = _phi_near_one(u[near])
    far = ~near
    if np.any(far):
        out[far] = u[far] - np.asarray(ln_std(a[far]))
    if branch is Branch.TILDE:
        out = np.where(a.imag < 0, out - TWO_PI * 1j, out)
    return _unwrap(out, z)


def phi_tilde(z):
    return phi(z, Branch.TILDE)


def phi_prime(z):
    a = _as_complex(z)
    if np.any(a == 0):
        raise DomainError("phi' is singular at 0")
    return _unwrap(1.0 - 1.0 / a, z)


def phi_second(z):
    a = _as_complex(z)
    if np.any(a == 0):
        raise DomainError("phi'' is singular at 0")
    return _unwrap(1.0 / (a * a), z)


def re_phi(z):
    """``Re phi(z) = Re z - 1 - ln|z|``; identical on both branches."""
    out = np.real(phi(z))
    return float(out) if np.ndim(z) == 0 else out


def re_phi_sign(z, tol: float = SIGN_TOL) -> Sign:
    """Sign of ``Re phi(z)``; equivalently compares ``|z e^(1-z)|`` with 1."""
    value = re_phi(complex(z))
    if abs(value) <= tol:
        return Sign.ZERO
    return Sign.POSITIVE if value > 0 else Sign.NEGATIVE


def szego_modulus(z):
    """``|z e^(1 - z)|``, which equals ``exp(-Re phi(z))``."""
    a = _as_complex(z)
    out = np.abs(a) * np.exp(1.0 - a.real)
    return float(out) if np.ndim(z) == 0 else out
