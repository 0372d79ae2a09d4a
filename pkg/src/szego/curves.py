"""Szego curve, steepest-descent path and admissible integration contours."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .branches import phi, re_phi
from .errors import ConvergenceError, DomainError, ValidationError

HALF_PI = 0.5 * np.pi
# default radius of the neighbourhood of 1 where the contour must follow
# the steepest-descent path
DEFAULT_EPS_HUB = 0.25


@dataclass(frozen=True)
class CurveSample:
    theta: float
    r: float
    z: complex


@dataclass(frozen=True)
class Segment:
    """One smooth piece ``t -> z(t)`` of a contour, ``t`` in ``[t0, t1]``.

    ``kind`` tags the descent arc so that quadrature can pre-split it around
    the saddle at ``t = 0``.
    """

    z: Callable[[np.ndarray], np.ndarray]
    dz: Callable[[np.ndarray], np.ndarray]
    t0: float
    t1: float
    kind: str = "generic"


@dataclass(frozen=True)
class ContourSpec:
    segments: tuple[Segment, ...]
    label: str = ""
    orientation: str = "counterclockwise"
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def sample(self, per_segment: int = 2000) -> np.ndarray:
        """Dense polyline through the contour (closed, first point repeated)."""
        key = ("sample", per_segment)
        if key not in self._cache:
            pts = [seg.z(np.linspace(seg.t0, seg.t1, per_segment)) for seg in self.segments]
            self._cache[key] = np.concatenate(pts + [pts[0][:1]])
        return self._cache[key]

    def distance(self, z: complex, per_segment: int = 2000) -> float:
        pts = self.sample(per_segment)
        a, b = pts[:-1], pts[1:]
        d = b - a
        t = np.clip(np.real((z - a) * np.conj(d)) / np.maximum(np.abs(d) ** 2, 1e-300), 0.0, 1.0)
        return float(np.min(np.abs(a + t * d - z)))

    def winding_number(self, z: complex, per_segment: int = 2000) -> int:
        """Winding number about ``z`` from the accumulated argument increment."""
        w = self.sample(per_segment) - z
        if np.any(w == 0):
            raise DomainError("point lies on the contour")
        turn = np.angle(w[1:] / w[:-1]).sum()
        return int(round(turn / (2 * np.pi)))

    def contains(self, z: complex) -> bool:
        return self.winding_number(z) == 1


def _szego_residual(r: float, theta: float) -> float:
    return abs(r * math.exp(1.0 - r * math.cos(theta)) - 1.0)


def szego_point(theta: float, max_iter: int = 50) -> CurveSample:
    """Point of the Szego curve ``|z e^(1-z)| = 1, |z| <= 1`` at angle ``theta``.

    Solves ``ln r + 1 - r cos(theta) = 0`` on ``(0, 1]`` by Newton's method,
    falling back to bisection whenever a step leaves the current bracket.  The
    function is increasing in ``r`` there, so the bracket ``[1e-8, 1]`` always
    holds exactly one root.
    """
    theta = float(theta)
    if not -np.pi <= theta <= np.pi:
        raise DomainError(f"theta={theta} outside [-pi, pi]")
    if theta == 0.0:
        return CurveSample(0.0, 1.0, 1.0 + 0j)
    c = math.cos(theta)

    def f(r):
        return math.log(r) + 1.0 - r * c

    lo, hi = 1e-8, 1.0
    # r ~ 1 - |theta| near the corner at z = 1, r ~ W(1/e) near theta = pi
    r = min(max(1.0 - abs(theta) * 0.9, 0.25), 1.0 - 1e-16)
    for _ in range(max_iter):
        fr = f(r)
        if abs(fr) <= 4e-16:
            break
        if fr > 0:
            hi = r
        else:
            lo = r
        nxt = r - fr / (1.0 / r - c)
        if abs(nxt - r) <= 1e-15 * r:
            r = nxt
            break
        if not lo <= nxt <= hi:
            nxt = 0.5 * (lo + hi)
        r = nxt
    else:
        raise ConvergenceError(f"Szego radius did not converge at theta={theta}")
    if _szego_residual(r, theta) > 1e-13:
        raise ConvergenceError(f"Szego residual {_szego_residual(r, theta):.2e} at theta={theta}")
    return CurveSample(theta, r, r * complex(math.cos(theta), math.sin(theta)))


def szego_curve(samples: int) -> list[CurveSample]:
    if samples < 2:
        raise DomainError("need at least two samples")
    return [szego_point(t) for t in np.linspace(-np.pi, np.pi, samples)]


def _descent_radius(theta):
    t = np.asarray(theta, dtype=float)
    small = np.abs(t) < 1e-4
    safe = np.where(small, 1.0, t)
    exact = safe / np.sin(safe)
    series = 1.0 + t * t / 6.0 + 7.0 * t ** 4 / 360.0
    return np.where(small, series, exact)


def _descent_radius_prime(theta):
    t = np.asarray(theta, dtype=float)
    small = np.abs(t) < 1e-4
    safe = np.where(small, 1.0, t)
    s = np.sin(safe)
    exact = (s - safe * np.cos(safe)) / (s * s)
    series = t / 3.0 + 7.0 * t ** 3 / 90.0
    return np.where(small, series, exact)


def descent_path(theta):
    """``z(theta) = (theta / sin theta) e^(i theta)`` (vectorized)."""
    t = np.asarray(theta, dtype=float)
    return _descent_radius(t) * np.exp(1j * t)


def descent_path_prime(theta):
    t = np.asarray(theta, dtype=float)
    return (_descent_radius_prime(t) + 1j * _descent_radius(t)) * np.exp(1j * t)


def steepest_descent_point(theta: float) -> CurveSample:
    """Point with ``arg z = Im z`` at angle ``theta``; ``Im phi`` vanishes there."""
    theta = float(theta)
    if not -np.pi < theta < np.pi:
        raise DomainError(f"theta={theta} outside (-pi, pi)")
    r = float(_descent_radius(theta))
    return CurveSample(theta, r, complex(descent_path(theta)))


def make_admissible_contour() -> ContourSpec:
    """Descent arc for ``|theta| <= pi/2`` closed by the circle ``|z| = pi/2``.

    On the left arc ``Re phi = Re z - 1 - ln(pi/2) <= -(1 + ln(2/pi))``.
    """
    descent = Segment(descent_path, descent_path_prime, -HALF_PI, HALF_PI, kind="descent")
    arc = Segment(
        lambda t: HALF_PI * np.exp(1j * np.asarray(t, dtype=float)),
        lambda t: 1j * HALF_PI * np.exp(1j * np.asarray(t, dtype=float)),
        HALF_PI, 3 * HALF_PI, kind="arc")
    return ContourSpec((descent, arc), label="descent+circle(pi/2)")


def circle_contour(radius: float, center: complex = 0j) -> ContourSpec:
    seg = Segment(
        lambda t: center + radius * np.exp(1j * np.asarray(t, dtype=float)),
        lambda t: 1j * radius * np.exp(1j * np.asarray(t, dtype=float)),
        -np.pi, np.pi, kind="circle")
    return ContourSpec((seg,), label=f"circle(r={radius})")


@dataclass(frozen=True)
class ValidationReport:
    winding: int
    delta: float
    hub_deviation: float
    eps_hub: float
    samples: int


def validate_admissible(c: ContourSpec, eps_hub: float = DEFAULT_EPS_HUB,
                        per_segment: int = 4000) -> ValidationReport:
    """Check the admissibility clauses on a dense sample of ``c``.

    (a) closed and winding once counterclockwise about 0;
    (b) ``Re phi <= -delta < 0`` outside ``|z - 1| < eps_hub``;
    (c) inside that disk the contour lies on ``|z| = theta / sin theta``.

    Raises
    ------
    ValidationError
        Naming the first clause that fails.
    """
    for a, b in zip(c.segments, c.segments[1:] + c.segments[:1]):
        gap = abs(complex(a.z(np.array([a.t1]))[0]) - complex(b.z(np.array([b.t0]))[0]))
        if gap > 1e-12:
            raise ValidationError(f"contour not closed (gap {gap:.2e})", clause="a")
    for seg in c.segments:
        t = np.linspace(seg.t0, seg.t1, per_segment)
        if np.min(np.abs(seg.dz(t))) <= 0:
            raise ValidationError("degenerate parametrization", clause="a")
    winding = c.winding_number(0j, per_segment)
    if winding != 1:
        raise ValidationError(f"winding number about 0 is {winding}", clause="a")

    pts = c.sample(per_segment)[:-1]
    near = np.abs(pts - 1.0) < eps_hub
    outside = pts[~near]
    delta = float(-np.max(re_phi(outside))) if outside.size else np.inf
    if not delta > 0:
        raise ValidationError(
            f"Re phi reaches {-delta:.3e} >= 0 away from the saddle", clause="b")

    hub = pts[near]
    deviation = 0.0
    if hub.size:
        theta = np.angle(hub)
        deviation = float(np.max(np.abs(np.abs(hub) - _descent_radius(theta))))
    if hub.size == 0 or deviation > 1e-10:
        raise ValidationError(
            f"contour leaves the steepest-descent path near 1 (deviation {deviation:.2e})",
            clause="c")
    return ValidationReport(winding, delta, deviation, eps_hub, int(pts.size))


def im_phi_on_descent(theta):
    """Diagnostic: ``Im phi`` along the descent path (vanishes analytically)."""
    return np.imag(phi(descent_path(theta)))


@lru_cache(maxsize=4)
def _szego_grid(samples: int) -> tuple[np.ndarray, np.ndarray]:
    theta = np.linspace(-np.pi, np.pi, samples)
    return theta, np.array([szego_point(t).z for t in theta])


def _szego_tangent(theta: float) -> complex:
    # implicit differentiation of ln r + 1 - r cos(theta) = 0
    p = szego_point(theta)
    dr = -p.r * math.sin(theta) / (1.0 / p.r - math.cos(theta))
    return (dr + 1j * p.r) * complex(math.cos(theta), math.sin(theta))


def distance_to_szego(z: complex, samples: int = 4001) -> float:
    """Euclidean distance from ``z`` to the Szego curve.

    A dense sample locates the nearest point, which is then refined by
    solving ``Re((z(theta) - z) conj z'(theta)) = 0`` on the neighbouring
    sample interval.
    """
    z = complex(z)
    theta, pts = _szego_grid(samples)
    i = int(np.argmin(np.abs(pts - z)))
    best = float(abs(pts[i] - z))

    def g(t):
        return ((szego_point(t).z - z) * _szego_tangent(t).conjugate()).real

    for lo, hi in ((theta[i - 1] if i else None, theta[i]),
                   (theta[i], theta[i + 1] if i + 1 < samples else None)):
        # the curve has a corner at theta = 0; skip brackets that touch it
        if lo is None or hi is None or lo <= 0.0 <= hi:
            continue
        glo, ghi = g(lo), g(hi)
        if glo == 0.0 or ghi == 0.0 or (glo < 0) != (ghi < 0):
            t = lo if glo == 0.0 else hi if ghi == 0.0 else brentq(g, lo, hi, xtol=1e-15)
            best = min(best, abs(szego_point(t).z - z))
    return best
