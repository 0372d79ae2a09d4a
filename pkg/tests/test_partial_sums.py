import math

import mpmath as mp
import numpy as np
import pytest

from szego.errors import DomainError
from szego.highprec import partial_sum_scaled_mp, stirling_gn_mp
from szego.partial_sums import (cauchy_transform, partial_sum_scaled, scaled_value,
                                stirling_cn, tail_sum)


def test_examples():
    assert scaled_value(1, 1.0) == pytest.approx(1 / math.e, rel=1e-15)
    assert abs(scaled_value(2, -0.5)) <= 1e-15
    assert scaled_value(20, 3.0) == pytest.approx(partial_sum_scaled_mp(20, 3.0), rel=1e-12)


def test_domain():
    with pytest.raises(DomainError):
        scaled_value(10, 0)
    with pytest.raises(DomainError):
        scaled_value(2001, 0.5)


@pytest.mark.parametrize("n", [1, 2, 15, 16, 100, 500, 2000])
def test_stirling_constant(n):
    assert stirling_cn(n) == pytest.approx(stirling_gn_mp(n), rel=4e-16)


def test_against_direct_summation():
    rng = np.random.default_rng(2)
    for n in (7, 30, 150):
        z = rng.uniform(-1.5, 1.5, 25) + 1j * rng.uniform(-1.5, 1.5, 25)
        vals = scaled_value(n, z)
        for zi, v in zip(z, vals):
            ref = partial_sum_scaled_mp(n, zi)
            # exp(n phi) carries relative error ~ n |phi| eps inside the curve
            assert abs(v - ref) <= 1e-13 * max(abs(ref), 1.0)


def test_log_derivative():
    n, z = 30, 0.4 + 0.6j
    s = partial_sum_scaled(n, z)
    with mp.workdps(40):
        q = lambda x: mp.fsum((n * x) ** k / mp.factorial(k) for k in range(n))
        ref = complex(mp.diff(q, mp.mpc(z)) / q(mp.mpc(z)))
    assert s.log_derivative == pytest.approx(ref, rel=1e-12)


def test_tail_identity():
    n = 40
    for z in (0.3 + 0.1j, -0.5 + 0.5j, 0.9 - 0.2j):
        with mp.workdps(60):
            zz = mp.mpc(z)
            total = mp.mpf(0)
            for k in range(n):
                total += (n * zz) ** k / mp.factorial(k)
            ref = complex(mp.exp(n * (zz - 1 - mp.log(zz))) - (mp.e * zz) ** (-n) * total)
        assert tail_sum(n, z) == pytest.approx(ref, rel=1e-12)


def test_sides_differ_by_exp():
    n = 25
    for z in (0.5 + 0.5j, 1.4 - 0.3j):
        gap = cauchy_transform(n, z, "interior") - cauchy_transform(n, z, "exterior")
        assert gap == pytest.approx(np.exp(n * (z - 1 - np.log(z))), rel=1e-12)
    with pytest.raises(DomainError):
        cauchy_transform(n, 0.5, "inside")
