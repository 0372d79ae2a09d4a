"""Cauchy transform ``F_n(z) = (1/2 pi i) int_gamma exp(n phi(s)) / (s - z) ds``.

Two independent routes are provided: contour quadrature on an admissible
contour, and the residue identity that links ``F_n`` to the scaled partial
sum.  The parametrix and the asymptotic expansions of ``F_n`` live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .branches import phi
from .conformal import g0, g0_coefficients, lambda_inverse
from .curves import ContourSpec, make_admissible_contour
from .errors import (DomainError, JumpLocusError, ProximityError, QuadratureError,
                     UnsupportedOrder)
from .partial_sums import MAX_N, cauchy_transform, stirling_cn
from .quadrature import QuadResult, integrate
from .specfun import h_transform

DELTA_MIN = 0.02
QUAD_ABS_TOL = 1e-13
QUAD_TARGET = 1e-12
MAX_QUAD_N = 400
EPS_LOCAL = 0.1
OUTER_MIN_DIST = 0.1
OUTER_MAX_DIST = 2.0

DEFAULT_CONTOUR = make_admissible_contour()

_SIDES = {"+": "+", "-": "-", "interior": "+", "exterior": "-"}


@dataclass(frozen=True)
class EvalReport:
    """A quantity computed by two independent routes."""

    quantity: str
    value_primary: complex
    value_check: complex
    abs_discrepancy: float
    method_primary: str
    method_check: str
    error_estimate: float = float("nan")
    extras: dict = field(default_factory=dict, compare=False)

    def flagged(self, tol: float) -> bool:
        return not self.abs_discrepancy <= tol


def _segment_breaks(seg, n: int):
    if seg.kind != "descent":
        return ()
    # exp(n phi) is a Gaussian of width ~ 1/sqrt(n) about the saddle at t = 0
    w = 1.0 / math.sqrt(n)
    return (0.0, -4 * w, 4 * w, -8 * w, 8 * w)


def _contour_integral(n: int, weight, c: ContourSpec, abs_tol: float,
                      extra_breaks=None, max_intervals: int = 20000,
                      noise: float | None = None) -> QuadResult:
    """``(1/2 pi i) int_c exp(n phi(s)) weight(s) ds`` summed over segments."""
    total = 0j
    err = 0.0
    used = 0
    share = abs_tol / len(c.segments)
    for i, seg in enumerate(c.segments):
        breaks = list(_segment_breaks(seg, n))
        if extra_breaks and i in extra_breaks:
            breaks.extend(extra_breaks[i])

        def f(t, seg=seg):
            s = seg.z(t)
            return np.exp(n * phi(s)) * weight(s) * seg.dz(t)

        kw = {} if noise is None else {"noise": noise}
        res = integrate(f, seg.t0, seg.t1, breakpoints=breaks, abs_tol=share,
                        max_intervals=max_intervals, **kw)
        total += res.value
        err += res.error
        used += res.intervals
    scale = 1.0 / (2j * math.pi)
    return QuadResult(total * scale, err / (2 * math.pi), used)


def _check_n(n, upper):
    n = int(n)
    if not 1 <= n <= upper:
        raise DomainError(f"n must lie in 1..{upper}, got {n}")
    return n


def fn_quadrature(n: int, z: complex, c: ContourSpec | None = None,
                  delta_min: float = DELTA_MIN, full_output: bool = False):
    """``F_n(z)`` by adaptive Gauss-Kronrod quadrature along ``c``.

    The descent arc is pre-split at ``t = 0, +-4/sqrt(n), +-8/sqrt(n)``.

    Raises
    ------
    ProximityError
        If ``z`` lies within ``delta_min`` of the contour.
    QuadratureError
        If the error estimate exceeds ``1e-12``.
    """
    n = _check_n(n, MAX_QUAD_N)
    c = DEFAULT_CONTOUR if c is None else c
    z = complex(z)
    d = c.distance(z)
    if d < delta_min:
        raise ProximityError(
            f"z={z} is {d:.3g} from the contour (< {delta_min}); use fn_residue")
    res = _contour_integral(n, lambda s: 1.0 / (s - z), c, QUAD_ABS_TOL)
    if res.error > QUAD_TARGET:
        raise QuadratureError(f"quadrature error estimate {res.error:.2e} above target")
    return res if full_output else res.value


def fn_residue(n: int, z, side: str):
    """``F_n(z)`` through the residue identity.

    ``side`` is ``'interior'`` or ``'exterior'`` with respect to the contour:
    ``F_n = -S`` outside and ``F_n = exp(n phi) - S`` inside, where ``S`` is
    the scaled partial sum.  Valid arbitrarily close to the contour.
    """
    return cauchy_transform(n, z, side)


def side_of(z: complex, c: ContourSpec | None = None) -> str:
    c = DEFAULT_CONTOUR if c is None else c
    return "interior" if c.winding_number(complex(z)) == 1 else "exterior"


def stirling_expansion(n: int) -> float:
    """Two-term expansion ``(1 - 1/(12 n)) / sqrt(2 pi n)`` of ``G_n``."""
    return (1.0 - 1.0 / (12.0 * n)) / math.sqrt(2.0 * math.pi * n)


def stirling_integral(n: int, c: ContourSpec | None = None) -> EvalReport:
    """``G_n = (1/2 pi i) int exp(n phi(s)) ds`` by quadrature, checked against
    the closed form ``e^(-n) n^(n-1) / (n-1)!``.

    The closed form is evaluated through the Stirling remainder, so it does
    not overflow for any ``n`` the quadrature supports.
    """
    n = _check_n(n, MAX_N)
    c = DEFAULT_CONTOUR if c is None else c
    res = _contour_integral(n, lambda s: np.ones_like(s), c, QUAD_ABS_TOL * stirling_cn(n))
    check = stirling_cn(n)
    return EvalReport("G_n", res.value, complex(check), abs(res.value - check),
                      "contour quadrature", "closed form", res.error,
                      {"two_term": stirling_expansion(n), "n": n})


# -- parametrix and expansions ---------------------------------------------

def _zeta(n: int, z: complex) -> complex:
    return -1j * math.sqrt(n) * lambda_inverse(z)


def parametrix(n: int, z, side: str | None = None) -> complex:
    """``P_n(z) = h(-i sqrt(n) lambda^{-1}(z))`` near the saddle.

    ``P_n`` jumps by ``exp(n phi)`` across the steepest-descent path.  Pass
    ``side='+'`` (interior, left of the upward path) or ``'-'`` (exterior)
    to select a boundary value or its analytic continuation.

    Raises
    ------
    DomainError
        For ``|z - 1| > 0.5``.
    JumpLocusError
        If ``z`` is on the path (to rounding) and no side is given.
    """
    n = _check_n(n, MAX_N)
    z = complex(z)
    zeta = _zeta(n, z)
    if side is None:
        if abs(zeta.imag) <= 1e-14 * max(1.0, abs(zeta)):
            raise JumpLocusError("z lies on the steepest-descent path; pass side")
        return h_transform(zeta)
    if side not in _SIDES:
        raise DomainError(f"unknown side {side!r}")
    return h_transform(zeta, _SIDES[side])


def fn_expansion_local(n: int, z, r: int = 1, side: str | None = None,
                       g0_terms: int | None = None) -> complex:
    """``P_n(z) + g0(z) / sqrt(2 pi n)``, valid for ``|z - 1| <= 0.1``.

    ``g0_terms=None`` uses the closed form of ``g0``; an integer truncates its
    Taylor series about 1 to that many terms (2 reproduces
    ``1/3 - (z - 1)/12``).

    Raises
    ------
    UnsupportedOrder
        For ``r >= 2``; only the leading correction is available.
    """
    if r != 1:
        raise UnsupportedOrder(f"local expansion order r={r} is not available (r=1 only)")
    z = complex(z)
    if abs(z - 1) > EPS_LOCAL * (1 + 1e-12):
        raise DomainError(f"local expansion needs |z - 1| <= {EPS_LOCAL}")
    if g0_terms is None:
        g = g0(z)
    else:
        g = g0_coefficients(max(g0_terms - 1, 0))(z) if g0_terms > 0 else 0.0
    return parametrix(n, z, side) + g / math.sqrt(2.0 * math.pi * n)


def h1(z):
    """First outer correction ``-(z^2 + 10 z + 1) / 12``."""
    z = np.asarray(z, dtype=complex)
    out = -(z * z + 10.0 * z + 1.0) / 12.0
    return complex(out) if out.ndim == 0 else out


def fn_expansion_outer(n: int, z, r: int = 2, min_dist: float = OUTER_MIN_DIST) -> complex:
    """Expansion of ``F_n`` away from the saddle.

    ``r = 1`` is ``1/(sqrt(2 pi n)(1 - z))``; ``r = 2`` multiplies it by
    ``1 + h1(z) / (n (z - 1)^2)``.  ``min_dist`` may be set to
    ``n^(-a)``, ``0 < a < 1/2``, to work in a shrinking disk.
    """
    if r not in (1, 2):
        raise UnsupportedOrder(f"outer expansion order r={r} is not available (r in 1, 2)")
    n = _check_n(n, MAX_N)
    z = complex(z)
    d = abs(z - 1)
    if not min_dist * (1 - 1e-12) <= d <= OUTER_MAX_DIST:
        raise DomainError(f"outer expansion needs {min_dist} <= |z - 1| <= {OUTER_MAX_DIST}")
    lead = 1.0 / (math.sqrt(2.0 * math.pi * n) * (1.0 - z))
    if r == 1:
        return lead
    return lead * (1.0 + h1(z) / (n * (z - 1) ** 2))


# -- one-sided limits on the contour ----------------------------------------

def _neville_at_zero(h: np.ndarray, y: np.ndarray) -> complex:
    p = np.array(y, dtype=complex)
    m = len(h)
    for k in range(1, m):
        for i in range(m - k):
            p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i])
    return complex(p[0])


def one_sided_limits(n: int, segment: int, t: float, c: ContourSpec | None = None,
                     h0: float = 1e-3, levels: int = 4) -> tuple[complex, complex, complex]:
    """Boundary values ``F_+`` (left/interior) and ``F_-`` at ``s = z(t)``.

    Quadrature values at ``s +- h nu`` (``nu`` the left unit normal) for
    ``h = h0, h0/2, ...`` are extrapolated to ``h = 0``.  Returns
    ``(s, F_+, F_-)``.
    """
    n = _check_n(n, MAX_QUAD_N)
    c = DEFAULT_CONTOUR if c is None else c
    seg = c.segments[segment]
    s = complex(seg.z(np.array([t]))[0])
    ds = complex(seg.dz(np.array([t]))[0])
    nu = 1j * ds / abs(ds)
    hs = h0 / 2.0 ** np.arange(levels)
    plus, minus = [], []
    for h in hs:
        for sign, store in ((1.0, plus), (-1.0, minus)):
            zp = s + sign * h * nu
            # s - zp loses ~eps/h relative accuracy, so the floor is raised
            res = _contour_integral(n, lambda x, zp=zp: 1.0 / (x - zp), c, QUAD_ABS_TOL,
                                    extra_breaks={segment: [t]}, noise=1e-10)
            store.append(res.value)
    return s, _neville_at_zero(hs, plus), _neville_at_zero(hs, minus)


def jump_gap(n: int, segment: int, t: float, c: ContourSpec | None = None) -> float:
    """``|F_+(s) - F_-(s) - exp(n phi(s))|`` from quadrature-based limits."""
    s, fp, fm = one_sided_limits(n, segment, t, c)
    return abs(fp - fm - np.exp(n * phi(s)))
