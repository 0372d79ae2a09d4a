import math

import numpy as np
import pytest
from scipy.special import lambertw

from szego.branches import phi, re_phi
from szego.curves import (circle_contour, descent_path, distance_to_szego,
                          im_phi_on_descent, make_admissible_contour, steepest_descent_point,
                          szego_curve, szego_point, validate_admissible)
from szego.errors import DomainError, ValidationError


def test_szego_point_examples():
    assert szego_point(0.0).r == 1.0
    assert szego_point(math.pi).r == pytest.approx(float(lambertw(1 / math.e).real), abs=1e-15)
    assert szego_point(math.pi).r == pytest.approx(0.278464542761074, abs=1e-14)
    assert szego_point(math.pi / 2).r == pytest.approx(1 / math.e, abs=1e-15)


def test_szego_point_domain():
    with pytest.raises(DomainError):
        szego_point(4.0)


def test_szego_residual_and_radius():
    samples = szego_curve(1000)
    z = np.array([s.z for s in samples])
    assert np.max(np.abs(np.abs(z * np.exp(1 - z)) - 1)) <= 1e-12
    r = np.array([s.r for s in samples])
    assert np.all(r <= 1.0)
    assert np.all(r[np.array([s.theta for s in samples]) != 0] < 1.0)


def test_szego_conjugate_symmetry():
    for t in np.linspace(0.01, math.pi, 37):
        assert szego_point(-t).z == pytest.approx(szego_point(t).z.conjugate(), abs=1e-15)


def test_steepest_descent_examples():
    assert steepest_descent_point(0.0).r == 1.0
    assert steepest_descent_point(math.pi / 2).r == pytest.approx(math.pi / 2)
    assert abs(phi(steepest_descent_point(0.3).z).imag) <= 1e-12


def test_descent_path_properties():
    theta = np.linspace(-1.5, 1.5, 2001)
    assert np.max(np.abs(im_phi_on_descent(theta))) <= 1e-11
    re = re_phi(descent_path(theta))
    assert np.all(re[theta != 0] < 0)


def test_default_contour_is_admissible():
    c = make_admissible_contour()
    rep = validate_admissible(c, eps_hub=0.25)
    assert rep.winding == 1
    assert rep.delta > 0
    assert c.distance(1.0) <= 1e-6
    assert c.winding_number(0.5) == 1
    assert c.winding_number(3.0) == 0


def test_left_arc_bound():
    t = np.linspace(math.pi / 2, 3 * math.pi / 2, 1001)
    z = math.pi / 2 * np.exp(1j * t)
    assert np.max(re_phi(z)) <= -(1 + math.log(2 / math.pi)) + 1e-12


def test_unit_circle_rejected():
    # Re phi = cos(t) - 1 <= 0 on |z| = 1, so the circle fails by leaving the
    # descent path near z = 1 rather than by entering Re phi > 0
    with pytest.raises(ValidationError) as exc:
        validate_admissible(circle_contour(1.0))
    assert exc.value.clause == "c"


def test_circle_of_radius_three_rejected():
    with pytest.raises(ValidationError) as exc:
        validate_admissible(circle_contour(3.0))
    assert exc.value.clause == "b"
    assert re_phi(3.0) == pytest.approx(2 - math.log(3))


def test_off_origin_circle_fails_winding():
    with pytest.raises(ValidationError) as exc:
        validate_admissible(circle_contour(0.5, center=3.0))
    assert exc.value.clause == "a"


def test_distance_to_szego():
    assert distance_to_szego(szego_point(1.0).z) <= 1e-12
    assert distance_to_szego(2.0) == pytest.approx(1.0, abs=1e-10)
    assert distance_to_szego(0.0) == pytest.approx(float(lambertw(1 / math.e).real), abs=1e-9)
