"""Extended-precision reference values (mpmath), used to certify the double
precision routines.  Nothing in the numerical pipeline depends on this module.
"""

from __future__ import annotations

import mpmath as mp

DEFAULT_DPS = 60


def partial_sum_scaled_mp(n: int, z: complex, dps: int = DEFAULT_DPS) -> complex:
    """``(e z)^(-n) p_{n-1}(n z)`` by direct summation."""
    with mp.workdps(dps):
        zz = mp.mpc(z)
        w = n * zz
        term = mp.mpf(1)
        total = mp.mpf(0)
        for k in range(n):
            total += term
            term = term * w / (k + 1)
        return complex((mp.e * zz) ** (-n) * total)


def polynomial_zeros_mp(n: int, dps: int = DEFAULT_DPS) -> list[complex]:
    """Zeros of ``p_{n-1}(n z)`` from mpmath's Durand-Kerner solver."""
    with mp.workdps(dps):
        coeffs = [mp.mpf(n) ** k / mp.factorial(k) for k in range(n)][::-1]
        roots = mp.polyroots(coeffs, maxsteps=20 * n + 200, extraprec=10 * n + 200)
        return [complex(r) for r in roots]


def erfc_mp(z: complex, dps: int = DEFAULT_DPS) -> complex:
    with mp.workdps(dps):
        return complex(mp.erfc(mp.mpc(z)))


def v_mp(z: complex, dps: int = DEFAULT_DPS) -> complex:
    """``exp(z^2) erfc(z)``."""
    with mp.workdps(dps):
        zz = mp.mpc(z)
        return complex(mp.exp(zz * zz) * mp.erfc(zz))


def h_quad_mp(zeta: complex, cutoff: float = 12.0, dps: int = 30) -> complex:
    """``(1/2 pi i) int_{-c}^{c} exp(-u^2) / (u - zeta) du`` by quadrature."""
    with mp.workdps(dps):
        z = mp.mpc(zeta)
        pts = sorted({-cutoff, float(mp.re(z)), cutoff}) if abs(mp.re(z)) < cutoff else [-cutoff, cutoff]
        val = mp.quad(lambda u: mp.exp(-u * u) / (u - z), pts)
        return complex(val / (2j * mp.pi))


def erfc_zero_mp(guess: complex, dps: int = DEFAULT_DPS) -> complex:
    with mp.workdps(dps):
        return complex(mp.findroot(mp.erfc, mp.mpc(guess)))


def stirling_gn_mp(n: int, dps: int = DEFAULT_DPS) -> float:
    """``e^(-n) n^(n-1) / (n-1)!``."""
    with mp.workdps(dps):
        return float(mp.e ** (-n) * mp.mpf(n) ** (n - 1) / mp.factorial(n - 1))
