"""Zeros of ``p_{n-1}(n z)``: oracle, approximants, expansions and Newton solver.

Zeros are indexed ``k = 1..n-1``.  Index ``k`` solves

    phi~(z) - (1/n) Ln F_n(z) = -2 pi i k / n,

where ``phi~`` uses the logarithm with imaginary part in ``(0, 2 pi)`` and
``F_n`` is continued from the interior of the contour.  Upper half plane zeros
carry ``k < n/2`` and are ordered by argument; ``z_{n-k} = conj(z_k)``, and for
even ``n`` the real zero is ``k = n/2``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .branches import phi_tilde
from .conformal import TRUST_RADIUS, lambda_eval
from .curves import szego_point
from .errors import (AmbiguityError, CollisionError, ConvergenceError, DomainError,
                     UnsupportedOrder)
from .partial_sums import (ScaledSum, cauchy_transform, partial_sum_scaled,  # noqa: F401
                           scaled_value, stirling_cn)
from .specfun import erfc_zero, faddeeva_like_v

TWO_PI = 2.0 * math.pi
RESIDUAL_TARGET = 1e-12
MAX_ORACLE_N = 500

# seeds come from the small-k expansion while k < C_SWITCH n^(1/3); the
# constant is where the two expansions' errors cross at n = 400
C_SWITCH = 0.35

# error_bound = C_r * (ln n / n)^r * (n / k)^(r - 1/2); twice the largest
# observed ratio over n in {50, 100, 200, 400}, n^(1/3) <= k <= n/2
THM42_BOUND_C = {1: 0.26, 2: 0.035, 3: 0.0026}
# error_bound = C_r * (k / n)^(r / 2); twice the largest observed ratio over
# n in {50, 100, 200, 400}, k <= sqrt(n)
THM41_BOUND_C = {2: 8.1, 3: 3.1, 4: 1.25}

METHODS = ("oracle", "szego_alpha", "refined_alpha", "critical_alpha",
           "thm42_expansion", "thm41_expansion", "newton_solve")


@dataclass(frozen=True)
class ZeroEstimate:
    """One located or predicted zero.

    ``residual`` is ``|(e z)^(-n) p_{n-1}(n z)|`` at ``value``; ``error_bound``
    is an a posteriori (solvers) or fitted a priori (expansions) estimate of
    the distance to the true zero, ``None`` when not available.
    """

    k: int
    n: int
    value: complex
    method: str
    order_r: int = 0
    residual: float = float("nan")
    error_bound: float | None = None
    note: str = field(default="", compare=False)

    def conjugate(self, k: int) -> "ZeroEstimate":
        return replace(self, k=k, value=self.value.conjugate())


class BivariatePoly:
    """Polynomial ``sum c[(i, j)] x^i y^j`` with exact rational coefficients."""

    def __init__(self, coefficients: dict):
        self.coefficients = {key: Fraction(v) for key, v in coefficients.items() if v != 0}

    @property
    def degree_x(self) -> int:
        return max(i for i, _ in self.coefficients)

    @property
    def degree_y(self) -> int:
        return max(j for _, j in self.coefficients)

    def __call__(self, x, y):
        return sum(float(c) * x ** i * y ** j for (i, j), c in self.coefficients.items())

    def __repr__(self):
        return f"BivariatePoly({self.coefficients!r})"


Q1 = BivariatePoly({(0, 1): Fraction(-1, 2)})
Q2 = BivariatePoly({(0, 2): Fraction(-1, 8), (1, 1): Fraction(1, 2), (2, 0): Fraction(-1, 12),
                    (1, 0): Fraction(-10, 12), (0, 0): Fraction(-1, 12)})
_Q = (Q1, Q2)


def q_poly(j: int, x):
    """Coefficients of the small-``k`` expansion in powers of ``n^(-1/2)``."""
    if j == 1:
        return x
    if j == 2:
        return (x * x - 1.0) / 3.0
    if j == 3:
        return (x ** 3 - 7.0 * x) / 36.0
    raise UnsupportedOrder(f"q_{j} is not available")


def _check_nk(n: int, k: int) -> tuple[int, int]:
    n, k = int(n), int(k)
    if n < 2:
        raise DomainError("n must be at least 2")
    if not 1 <= k <= n - 1:
        raise DomainError(f"k must lie in 1..{n - 1}, got {k}")
    return n, k


def _upper(n: int, k: int) -> tuple[int, bool]:
    """Map ``k`` to its upper-half index and whether to conjugate."""
    return (n - k, True) if 2 * k > n else (k, False)


def _residual(n: int, z: complex) -> float:
    return abs(scaled_value(n, z))


# -- approximants on (or near) the Szego curve ------------------------------

def _szego_theta(n: int, k: int) -> float:
    # on the curve Im phi~ = r(theta) sin(theta) - theta, decreasing from 0 to -pi
    target = TWO_PI * k / n

    def g(t):
        return szego_point(t).r * math.sin(t) - t + target

    if g(math.pi) >= 0.0:
        return math.pi
    return brentq(g, 1e-14, math.pi, xtol=1e-15)


def _newton(func, dfunc, z: complex, what: str, tol: float = RESIDUAL_TARGET,
            max_iter: int = 50) -> complex:
    for _ in range(max_iter):
        step = func(z) / dfunc(z)
        z = z - step
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    res = abs(func(z))
    if res > tol:
        raise ConvergenceError(f"{what}: residual {res:.2e} above {tol:.0e}")
    return z


def alpha_szego(n: int, k: int) -> complex:
    """Point of the Szego curve with ``phi~(z) = -2 pi i k / n``.

    These are the solutions of ``(z e^(1-z))^n = 1`` on the curve.
    """
    n, k = _check_nk(n, k)
    ku, conj = _upper(n, k)
    theta = _szego_theta(n, ku)
    z = szego_point(theta).z
    shift = TWO_PI * 1j * ku / n
    z = _newton(lambda s: phi_tilde(s) + shift, lambda s: 1.0 - 1.0 / s, z,
                f"alpha_szego(n={n}, k={k})")
    if theta == math.pi:
        z = complex(z.real, 0.0)
    return z.conjugate() if conj else z


def _refined_log(n: int, z: complex) -> complex:
    return complex(np.log(math.sqrt(TWO_PI * n) * (1.0 - z)))


def alpha_refined(n: int, k: int) -> complex:
    """Solution of ``phi~(z) + (1/n) ln(sqrt(2 pi n)(1 - z)) = -2 pi i k / n``.

    Seeded at :func:`alpha_szego`.

    Raises
    ------
    DomainError
        If the solution falls inside ``|z - 1| < n^(-1/2)``.
    """
    n, k = _check_nk(n, k)
    ku, conj = _upper(n, k)
    shift = TWO_PI * 1j * ku / n
    z = _newton(lambda s: phi_tilde(s) + _refined_log(n, s) / n + shift,
                lambda s: 1.0 - 1.0 / s - 1.0 / (n * (1.0 - s)),
                alpha_szego(n, ku), f"alpha_refined(n={n}, k={k})")
    if abs(z - 1.0) < n ** -0.5:
        raise DomainError(f"refined alpha for k={k} lies in the critical disk")
    return z.conjugate() if conj else z


class CriticalAlpha(NamedTuple):
    value: complex
    equation_residual: float


def alpha_critical(n: int, k: int, full_output: bool = False):
    """``lambda(w_k / sqrt n)`` with ``w_k`` the ``k``-th erfc zero.

    The equation ``phi~(a) - (1/n) ln P_n(a) = -2 pi i k / n`` is checked on
    the logarithm branch nearest to it; ``full_output`` returns the residual.

    Raises
    ------
    DomainError
        If ``|w_k| / sqrt n`` exceeds the trust radius of the series for lambda.
    """
    n, k = _check_nk(n, k)
    ku, conj = _upper(n, k)
    w = erfc_zero(ku).value
    xi = w / math.sqrt(n)
    if abs(xi) > TRUST_RADIUS:
        raise DomainError(f"|w_k|/sqrt(n) = {abs(xi):.3f} exceeds the trust radius")
    a = lambda_eval(xi)
    # P_n(a) = h(-i sqrt(n) xi) = v(-w)/2 with -i w in the upper half plane
    lhs = n * phi_tilde(a) - complex(np.log(faddeeva_like_v(-w) / 2.0)) + TWO_PI * 1j * ku
    m = round(lhs.imag / TWO_PI)
    residual = abs(lhs - TWO_PI * 1j * m) / n
    if residual > 1e-9:
        raise ConvergenceError(f"critical alpha k={k}: equation residual {residual:.2e}")
    a = a.conjugate() if conj else a
    return CriticalAlpha(a, residual) if full_output else a


# -- expansions ------------------------------------------------------------

def thm42_value(n: int, k: int, r: int) -> complex:
    """Large-``k`` expansion about the Szego approximant ``a = alpha_szego``:

        z = a (1 + sum_{j<r} Q_j(a, y) / (n^j (a - 1)^(2j - 1))),
        y = ln(2 pi n (1 - a)^2)  (principal branch).
    """
    if r not in (1, 2, 3):
        raise UnsupportedOrder(f"order r={r} needs Q_{r} (available: r <= 3)")
    n, k = _check_nk(n, k)
    ku, conj = _upper(n, k)
    a = alpha_szego(n, ku)
    y = 2.0 * _refined_log(n, a)
    total = 1.0 + 0j
    for j in range(1, r):
        total += _Q[j - 1](a, y) / (n ** j * (a - 1.0) ** (2 * j - 1))
    z = a * total
    if ku * 2 == n:
        z = complex(z.real, 0.0)
    return z.conjugate() if conj else z


def thm42_expansion(n: int, k: int, r: int = 2) -> ZeroEstimate:
    z = thm42_value(n, k, r)
    ku = min(k, n - k)
    bound = THM42_BOUND_C[r] * (math.log(n) / n) ** r * (n / ku) ** (r - 0.5)
    return ZeroEstimate(k, n, z, "thm42_expansion", r, _residual(n, z), bound,
                        note="y = ln(2 pi n (1 - alpha)^2), principal branch")


def thm41_value(n: int, k: int, r: int) -> complex:
    """Small-``k`` expansion ``1 + sum_{j<r} q_j(sqrt 2 w_k) / n^(j/2)``."""
    if r not in (2, 3, 4):
        raise UnsupportedOrder(f"order r={r} is not available (r in 2, 3, 4)")
    n, k = _check_nk(n, k)
    ku, conj = _upper(n, k)
    if 2 * ku == n:
        raise DomainError("the small-k expansion has no real zero")
    x = math.sqrt(2.0) * erfc_zero(ku).value
    z = 1.0 + sum(q_poly(j, x) / n ** (0.5 * j) for j in range(1, r))
    return z.conjugate() if conj else z


def thm41_expansion(n: int, k: int, r: int = 4) -> ZeroEstimate:
    z = thm41_value(n, k, r)
    ku = min(k, n - k)
    bound = THM41_BOUND_C[r] * (ku / n) ** (0.5 * r)
    return ZeroEstimate(k, n, z, "thm41_expansion", r, _residual(n, z), bound)


def seed(n: int, k: int) -> complex:
    """Starting point for index ``k``: the better of the two expansions."""
    n, k = _check_nk(n, k)
    ku, conj = _upper(n, k)
    if 2 * ku < n and ku < C_SWITCH * n ** (1.0 / 3.0):
        z = thm41_value(n, ku, 4)
    else:
        z = thm42_value(n, ku, 3)
    return z.conjugate() if conj else z


def approximant(n: int, k: int, method: str, r: int | None = None) -> ZeroEstimate:
    """Dispatch helper used by the command-line tools."""
    if method == "thm41_expansion":
        return thm41_expansion(n, k, 4 if r is None else r)
    if method == "thm42_expansion":
        return thm42_expansion(n, k, 2 if r is None else r)
    if method == "newton_solve":
        return newton_solve(n, k)
    fn = {"szego_alpha": alpha_szego, "refined_alpha": alpha_refined,
          "critical_alpha": alpha_critical}.get(method)
    if fn is None:
        raise DomainError(f"unknown method {method!r}")
    z = fn(n, k)
    return ZeroEstimate(k, n, z, method, 0, _residual(n, z))


# -- oracle ----------------------------------------------------------------

def _aberth(n: int, z: np.ndarray, max_sweeps: int = 200) -> tuple[np.ndarray, np.ndarray]:
    done = np.zeros(z.shape, dtype=bool)
    for _ in range(max_sweeps):
        s = partial_sum_scaled(n, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(s.value == 0, 0.0, 1.0 / s.log_derivative)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            step = newton / (1.0 - newton * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        step[done] = 0.0
        z = z - step
        done |= np.abs(step) <= 1e-15 * np.maximum(np.abs(z), 1e-3)
        if done.all():
            break
    return z, done


def _polish(n: int, z: np.ndarray, sweeps: int = 3) -> tuple[np.ndarray, np.ndarray]:
    step = np.zeros_like(z)
    for _ in range(sweeps):
        s = partial_sum_scaled(n, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(s.value == 0, 0.0, 1.0 / s.log_derivative)
        z = z - step
    return z, np.abs(step)


def _index_by_argument(n: int, z: np.ndarray) -> np.ndarray:
    """Return the zeros ordered by index ``k = 1..n-1``."""
    imag_tol = 1e-9
    upper = sorted((x for x in z if x.imag > imag_tol), key=np.angle)
    lower = [x for x in z if x.imag < -imag_tol]
    real = [x for x in z if abs(x.imag) <= imag_tol]
    n_up = (n - 1) // 2
    if len(upper) != n_up or len(lower) != n_up or len(real) != (n - 1) - 2 * n_up:
        raise ConvergenceError(
            f"oracle for n={n}: {len(upper)} upper, {len(lower)} lower, {len(real)} real zeros")
    out = np.empty(n - 1, dtype=complex)
    lower = np.array(lower)
    for k, x in enumerate(upper, start=1):
        j = int(np.argmin(np.abs(lower - x.conjugate())))
        if abs(lower[j] - x.conjugate()) > 1e-9:
            raise ConvergenceError(f"oracle for n={n}: zero {x} has no conjugate partner")
        # real coefficients make the set conjugate-closed; average the pair
        mean = 0.5 * (x + lower[j].conjugate())
        out[k - 1] = mean
        out[n - k - 1] = mean.conjugate()
    if real:
        out[n // 2 - 1] = complex(real[0].real, 0.0)
    return out


def oracle_zeros(n: int) -> list[ZeroEstimate]:
    """All ``n - 1`` zeros of ``p_{n-1}(n z)`` by Aberth-Ehrlich iteration.

    Seeds come from the asymptotic expansions, so the iteration starts within
    a fraction of the zero spacing; a circle start is used as a fallback.
    Every zero is polished by Newton steps and certified by its residual.

    Raises
    ------
    ConvergenceError
        Listing the indices whose residual target was missed.
    """
    n = int(n)
    if not 2 <= n <= MAX_ORACLE_N:
        raise DomainError(f"oracle supports 2 <= n <= {MAX_ORACLE_N}")
    z0 = np.array([seed(n, k) for k in range(1, n)], dtype=complex)
    z, done = _aberth(n, z0)
    if not done.all():
        ring = 0.6 * np.exp(1j * (TWO_PI * (np.arange(1, n) - 0.25) / n))
        z, done = _aberth(n, ring, max_sweeps=2000)
    z, _ = _polish(n, z)
    z = _index_by_argument(n, z)
    z, steps = _polish(n, z, sweeps=1)
    # the polishing step may nudge a real zero off the axis by rounding
    if n % 2 == 0:
        z[n // 2 - 1] = complex(z[n // 2 - 1].real, 0.0)
    residual = np.abs(scaled_value(n, z))
    bad = [k for k in range(1, n) if not residual[k - 1] <= RESIDUAL_TARGET]
    if bad:
        raise ConvergenceError(f"oracle for n={n}: residual target missed", unconverged=bad)
    return [ZeroEstimate(k, n, complex(z[k - 1]), "oracle", 0, float(residual[k - 1]),
                         float(steps[k - 1])) for k in range(1, n)]


# -- Newton solver for the index equation -----------------------------------

def _ln_tracked(f: complex, previous: complex) -> complex:
    principal = complex(np.log(f))
    m = round((previous.imag - principal.imag) / TWO_PI)
    return principal + TWO_PI * 1j * m


def newton_solve(n: int, k: int, start: complex | None = None,
                 max_iter: int = 60) -> ZeroEstimate:
    """Solve ``phi~(z) - (1/n) Ln F_n(z) + 2 pi i k / n = 0`` by Newton's method.

    ``F_n`` is the interior Cauchy transform evaluated through the residue
    identity, and ``H' = -c_n / (z F_n)`` gives the step ``H z F_n / c_n``.
    ``Ln`` starts on the principal branch at the seed and is continued along
    the iterates; steps that move its imaginary part by more than ``pi/2``
    are halved.

    Raises
    ------
    ConvergenceError
        If the partial-sum residual stays above ``1e-12``.
    """
    n, k = _check_nk(n, k)
    ku, conj = _upper(n, k)
    if conj:
        start = None if start is None else complex(start).conjugate()
        return newton_solve(n, ku, start, max_iter).conjugate(k)
    cn = stirling_cn(n)
    shift = TWO_PI * 1j * ku / n
    z = seed(n, ku) if start is None else complex(start)
    real = 2 * ku == n
    f = cauchy_transform(n, z, "interior")
    ln_f = complex(np.log(f))
    h = phi_tilde(z) - ln_f / n + shift
    step = 0j
    for _ in range(max_iter):
        step = h * z * f / cn
        if real:
            step = complex(step.real, 0.0)
        for _halving in range(30):
            trial = z + step
            f_new = cauchy_transform(n, trial, "interior")
            ln_new = _ln_tracked(f_new, ln_f)
            if abs(ln_new.imag - ln_f.imag) <= 0.5 * math.pi:
                break
            step *= 0.5
        else:
            raise ConvergenceError(f"newton_solve(n={n}, k={k}): branch tracking failed")
        z, f, ln_f = trial, f_new, ln_new
        h = phi_tilde(z) - ln_f / n + shift
        if abs(step) <= 4e-16 * abs(z):
            break
    residual = _residual(n, z)
    if residual > RESIDUAL_TARGET:
        raise ConvergenceError(f"newton_solve(n={n}, k={k}): residual {residual:.2e}",
                               unconverged=[k])
    return ZeroEstimate(k, n, z, "newton_solve", 0, residual, abs(step))


def _thread_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    try:
        return max(1, int(os.environ.get("SZ_THREADS", "1")))
    except ValueError:
        return 1


def newton_solve_all(n: int, workers: int | None = None) -> list[ZeroEstimate]:
    """``newton_solve`` for ``k = 1..n-1`` (lower half by conjugation).

    ``workers`` (default: ``SZ_THREADS`` or 1) runs the independent solves
    concurrently; results are returned in index order either way.

    Raises
    ------
    CollisionError
        If two indices converge to the same point.
    """
    n = int(n)
    ks = list(range(1, n // 2 + 1))
    with ThreadPoolExecutor(max_workers=_thread_count(workers)) as pool:
        upper = list(pool.map(lambda k: newton_solve(n, k), ks))
    out = {e.k: e for e in upper}
    for e in upper:
        if 2 * e.k != n:
            out[n - e.k] = e.conjugate(n - e.k)
    result = [out[k] for k in range(1, n)]
    z = np.array([e.value for e in result])
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    i, j = np.unravel_index(np.argmin(d), d.shape)
    if d[i, j] <= 1e-9:
        raise CollisionError(f"indices {i + 1} and {j + 1} converged to the same zero")
    return result


# -- matching ----------------------------------------------------------------

class Match(NamedTuple):
    predicted: int
    oracle: int
    distance: float


def _values(items) -> np.ndarray:
    return np.array([e.value if isinstance(e, ZeroEstimate) else complex(e) for e in items],
                    dtype=complex)


def match_zeros(predicted: Sequence, oracle: Sequence) -> list[Match]:
    """Greedy nearest-neighbour assignment of predictions to oracle zeros.

    Pairs are taken in order of increasing distance, each oracle zero used at
    most once.  Returns one :class:`Match` per prediction, in input order.

    Raises
    ------
    AmbiguityError
        If there are more predictions than oracle zeros, or an assigned
        distance exceeds half the smallest gap between oracle zeros.
    """
    p = _values(predicted)
    o = _values(oracle)
    if len(p) > len(o):
        raise AmbiguityError(f"{len(p)} predictions for {len(o)} oracle zeros")
    if len(o) > 1:
        gaps = np.abs(o[:, None] - o[None, :])
        np.fill_diagonal(gaps, np.inf)
        limit = 0.5 * float(gaps.min())
    else:
        limit = np.inf
    d = np.abs(p[:, None] - o[None, :])
    order = np.argsort(d, axis=None, kind="stable")
    assigned: dict[int, Match] = {}
    used: set[int] = set()
    for flat in order:
        i, j = divmod(int(flat), len(o))
        if i in assigned or j in used:
            continue
        assigned[i] = Match(i, j, float(d[i, j]))
        used.add(j)
        if len(assigned) == len(p):
            break
    worst = max(assigned.values(), key=lambda m: m.distance, default=None)
    if worst is not None and worst.distance > limit:
        raise AmbiguityError(
            f"prediction {worst.predicted} is {worst.distance:.3e} from its match, "
            f"more than half the minimal oracle gap ({limit:.3e})")
    return [assigned[i] for i in range(len(p))]


def set_distance(a: Sequence, b: Sequence) -> float:
    """Largest matched distance between two zero sets of equal size."""
    return max((m.distance for m in match_zeros(a, b)), default=0.0)
