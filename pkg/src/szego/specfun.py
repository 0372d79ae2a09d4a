"""Scaled complementary error function, the Gaussian Cauchy transform and
the second-quadrant zeros of erfc.

``v(zeta) = exp(zeta^2) erfc(zeta)`` is evaluated through the Faddeeva
function, ``v(zeta) = w(i zeta)``, which scipy computes without overflow.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.special import wofz

from .errors import ConvergenceError, DomainError, JumpLocusError

SQRT_PI = math.sqrt(math.pi)
TWO_PI = 2.0 * math.pi

ERFC_ZERO_TOL = 1e-12


def faddeeva_like_v(zeta):
    """``exp(zeta^2) erfc(zeta)`` for scalar or array ``zeta``."""
    z = np.asarray(zeta, dtype=complex)
    out = wofz(1j * z)
    return complex(out) if z.ndim == 0 else out


def erfc_complex(z):
    """Complementary error function of a complex argument."""
    a = np.asarray(z, dtype=complex)
    out = np.exp(-a * a) * wofz(1j * a)
    return complex(out) if a.ndim == 0 else out


def h_transform(zeta, side: str | None = None):
    """Cauchy transform ``(1/2 pi i) int_R exp(-u^2) / (u - zeta) du``.

    Off the real axis the value is ``v(-i zeta)/2`` in the upper half plane
    and ``-conj(h(conj zeta))`` in the lower one.  ``side`` ('+' or '-')
    selects a boundary value instead: the analytic continuation of the upper
    (``h_+``) or lower (``h_-``) function, valid on and across the real axis.
    """
    z = complex(zeta)
    if side is None:
        if z.imag == 0.0:
            raise JumpLocusError("h is two-valued on the real axis; pass side='+' or '-'")
        if z.imag > 0:
            return 0.5 * faddeeva_like_v(-1j * z)
        return -(0.5 * faddeeva_like_v(-1j * z.conjugate())).conjugate()
    if side == "+":
        if z.imag >= 0:
            return 0.5 * faddeeva_like_v(-1j * z)
        return h_transform(z, "-") + np.exp(-z * z)
    if side == "-":
        if z.imag <= 0:
            return -(0.5 * faddeeva_like_v(-1j * z.conjugate())).conjugate()
        return 0.5 * faddeeva_like_v(-1j * z) - np.exp(-z * z)
    raise DomainError(f"side must be '+', '-' or None, got {side!r}")


def h_asymptotic(zeta: complex, terms: int) -> complex:
    """Large-``zeta`` expansion ``-(1/(2 pi i zeta)) sum_j Gamma(j+1/2) zeta^(-2j)``.

    The sum starts at ``j = 0``, whose term ``Gamma(1/2) = sqrt(pi)`` carries
    the total mass of the Gaussian.
    """
    z = complex(zeta)
    acc = 0j
    for j in range(terms - 1, -1, -1):
        acc = acc / (z * z) + math.gamma(j + 0.5)
    return -acc / (2j * math.pi * z)


@dataclass(frozen=True)
class ErfcZero:
    index: int
    value: complex
    residual: float
    box_half_width: float
    branch_offset: int


def _initial_guess(k: int) -> complex:
    # modulus ~ sqrt(2 pi k) on the diagonal of the second quadrant, sharpened
    # by the fixed point of w^2 = -2 pi i k - ln(-2 sqrt(pi) w)
    w = math.sqrt(TWO_PI * k) * complex(-math.sqrt(0.5), math.sqrt(0.5))
    for _ in range(8):
        w = -np.sqrt(-TWO_PI * 1j * k - np.log(-2.0 * SQRT_PI * w))
    return complex(w)


def _newton_erfc(w: complex, max_iter: int = 100) -> complex:
    # erfc / erfc' = -(sqrt(pi)/2) w_faddeeva(i z): no exponentials needed
    for _ in range(max_iter):
        step = -0.5 * SQRT_PI * complex(wofz(1j * w))
        w = w - step
        if abs(step) <= 1e-15 * abs(w):
            return w
    raise ConvergenceError(f"Newton on erfc did not converge near {w}")


def count_erfc_zeros_in_box(center: complex, half_width: float, per_side: int = 256) -> int:
    """Argument-principle count of erfc zeros inside a square box."""
    h = half_width
    corners = [center + complex(-h, -h), center + complex(h, -h),
               center + complex(h, h), center + complex(-h, h)]
    pts = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        t = np.linspace(0.0, 1.0, per_side, endpoint=False)
        pts.append(a + (b - a) * t)
    z = np.concatenate(pts + [pts[0][:1]])
    # arg erfc = arg exp(-z^2) + arg w(iz); sum the two increments separately
    phase = -np.imag(z * z)
    dphase = np.diff(phase)
    f = wofz(1j * z)
    if np.any(f == 0):
        raise DomainError("erfc vanishes on the box boundary")
    dw = np.angle(f[1:] / f[:-1])
    if np.max(np.abs(dw)) > 1.0:
        return count_erfc_zeros_in_box(center, half_width, 4 * per_side)
    return int(round((dphase.sum() + dw.sum()) / TWO_PI))


def _log_branch_offset(w: complex, k: int) -> tuple[float, int]:
    lhs = w * w + TWO_PI * 1j * k
    principal = complex(np.log(faddeeva_like_v(-w) / 2.0))
    m = int(round((lhs.imag - principal.imag) / TWO_PI))
    return abs(lhs - (principal + TWO_PI * 1j * m)), m


class _ZeroCache:
    def __init__(self):
        self._zeros: list[ErfcZero] = []
        self._lock = threading.Lock()

    def get(self, k: int) -> ErfcZero:
        if k < 1:
            raise DomainError("erfc zeros are indexed from k = 1")
        if k <= len(self._zeros):
            return self._zeros[k - 1]
        with self._lock:
            while len(self._zeros) < k:
                self._zeros.append(self._compute(len(self._zeros) + 1))
        return self._zeros[k - 1]

    def _compute(self, k: int) -> ErfcZero:
        w = _newton_erfc(_initial_guess(k))
        residual = abs(erfc_complex(w))
        # erfc grows like |w| near its zeros, so scale the target accordingly
        if residual > ERFC_ZERO_TOL * max(1.0, abs(w)):
            raise ConvergenceError(f"erfc zero {k}: residual {residual:.2e}")
        if not math.pi / 2 < np.angle(w) < math.pi:
            raise ConvergenceError(f"erfc zero {k} left the second quadrant: {w}")
        prev = self._zeros[-1].value if self._zeros else None
        if prev is not None and not abs(w) > abs(prev):
            raise ConvergenceError(f"erfc zero {k} not beyond zero {k - 1} in modulus")
        # neighbours sit ~ pi/|w| apart; keep the box well inside that spacing
        half = min(0.5, 0.35 * math.pi / abs(w))
        count = count_erfc_zeros_in_box(w, half)
        if count != 1:
            raise ConvergenceError(f"erfc zero {k}: box holds {count} zeros")
        gap, m = _log_branch_offset(w, k)
        if m != 0 or gap > 1e-9:
            raise ConvergenceError(f"erfc zero {k} failed the index relation (offset {m})")
        return ErfcZero(k, w, residual, half, m)

    def clear(self):
        with self._lock:
            self._zeros.clear()


_CACHE = _ZeroCache()


def erfc_zero(k: int) -> ErfcZero:
    """``k``-th zero of erfc in the second quadrant, ordered by modulus.

    Each zero is polished by Newton's method and certified three ways: residual,
    a unit winding count of erfc around a small box, and the index relation
    ``w^2 - ln(v(-w)/2) + 2 pi i k = 0`` holding on the principal branch.
    """
    return _CACHE.get(int(k))


def erfc_zeros(count: int) -> list[ErfcZero]:
    return [erfc_zero(k) for k in range(1, count + 1)]


def log_relation_check(k: int, w: complex | None = None) -> float:
    """Residual of ``w^2 - ln(v(-w)/2) + 2 pi i k``.

    The logarithm branch is the one whose imaginary part is nearest to
    ``Im(w^2 + 2 pi i k)``.  Pass ``w`` to test a perturbed point.
    """
    if w is None:
        w = erfc_zero(k).value
    return _log_branch_offset(complex(w), int(k))[0]
