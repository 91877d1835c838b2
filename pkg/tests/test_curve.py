import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.lab.cauchy import spectral_derivative_matrix
from src.lab.curve import (Circle, Ellipse, Lemniscate, Location, RationalMapImage, check_jordan,
                           check_univalent, circle_path, curve_from_dict, curve_to_dict, jordan_threshold,
                           locate_points, point_location, polygon_is_simple, sample_curve, winding_numbers)
from src.lab.errors import JordanViolation
from src.lab.rational import RationalFn


@pytest.mark.parametrize("N", [8, 100, 0])
def test_node_count_must_be_power_of_two(ellipse_spec, N):
    with pytest.raises(ValueError):
        sample_curve(ellipse_spec, N)


def test_invalid_specs():
    with pytest.raises(ValueError):
        Circle(0j, -1.0)
    with pytest.raises(ValueError):
        Ellipse(1.0, 2.0)
    with pytest.raises(ValueError):
        Lemniscate((), 1.0)
    with pytest.raises(ValueError):
        curve_from_dict({"kind": "hexagon"})


def test_circle_geometry(circle_sc):
    assert circle_sc.signed_area() == pytest.approx(np.pi, rel=1e-12)
    assert circle_sc.arclength() == pytest.approx(2 * np.pi, rel=1e-12)
    assert_allclose(circle_sc.curvature, 1.0, rtol=1e-12)
    # outward normal on the unit circle is z itself
    assert_allclose(circle_sc.normal, circle_sc.z, atol=1e-12)


def test_ellipse_perimeter_converges_spectrally(ellipse_sc):
    assert ellipse_sc.arclength() == pytest.approx(9.688448220547675, rel=1e-12)
    assert ellipse_sc.signed_area() == pytest.approx(2 * np.pi, rel=1e-12)


def test_every_fixture_is_counterclockwise(circle_sc, ellipse_sc, lemniscate_sc, rdomain_sc):
    for sc in (circle_sc, ellipse_sc, lemniscate_sc, rdomain_sc):
        assert sc.signed_area() > 0
        assert winding_numbers(sc.z, [sc.reference_point])[0] == pytest.approx(1.0)


def test_sampled_arrays_are_read_only(ellipse_sc):
    with pytest.raises(ValueError):
        ellipse_sc.z[0] = 0


def test_lemniscate_nodes_lie_on_level_set(lemniscate_sc, lemniscate_spec):
    values = np.abs(lemniscate_spec.function(lemniscate_sc.z))
    assert_allclose(values, 2.0, rtol=1e-12)


def test_lemniscate_derivatives_match_spectral_derivative(lemniscate_sc):
    D = spectral_derivative_matrix(lemniscate_sc.N)
    assert np.max(np.abs(D @ lemniscate_sc.z - lemniscate_sc.dz)) < 1e-8
    assert np.max(np.abs(D @ lemniscate_sc.dz - lemniscate_sc.ddz)) < 1e-6


def test_rational_map_derivatives_match_spectral_derivative(rdomain_sc):
    D = spectral_derivative_matrix(rdomain_sc.N)
    assert np.max(np.abs(D @ rdomain_sc.z - rdomain_sc.dz)) < 1e-10


def test_two_component_lemniscate_is_not_jordan():
    spec = Lemniscate((1.0, -1.0), 0.5)
    check = check_jordan(spec)
    assert not check
    assert check.components == 2
    with pytest.raises(JordanViolation):
        sample_curve(spec, 64)


def test_jordan_lemniscate_turns_equal_degree(lemniscate_spec):
    check = check_jordan(lemniscate_spec)
    assert check
    assert check.turns == 2


def test_locate_points_on_ellipse(ellipse_sc):
    locs = locate_points(ellipse_sc, [0j, 3.0, 2.0, complex(np.inf, 0), 0.5j])
    assert locs == [Location.INTERIOR, Location.EXTERIOR, Location.BOUNDARY, Location.EXTERIOR, Location.INTERIOR]
    assert point_location(ellipse_sc, 1.1j) is Location.EXTERIOR


def test_univalence_of_rational_maps():
    assert check_univalent(RationalFn.polynomial([0.0, 1.0, 0.4]))
    check = check_univalent(RationalFn.polynomial([0.0, 1.0, 0.6]))
    assert not check
    assert "derivative vanishes" in check.reason
    with pytest.raises(JordanViolation):
        sample_curve(RationalMapImage(RationalFn.polynomial([0.0, 1.0, 0.6])), 64)


def test_univalence_check_is_warning_free(cubic_map):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        check = check_univalent(cubic_map)
    assert check.ok, check.reason


def test_winding_number_at_a_node_is_nan(ellipse_sc):
    points = np.concatenate([ellipse_sc.z[:3], [0j, 5.0]])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        wind = winding_numbers(ellipse_sc.z, points)
    assert np.isnan(wind[:3]).all()
    assert_allclose(wind[3:], [1.0, 0.0], atol=1e-12)


def test_polygon_simplicity():
    t = 2 * np.pi * np.arange(64) / 64
    assert polygon_is_simple(np.exp(1j * t))
    figure_eight = np.sin(t) + 1j * np.sin(2 * t)
    assert not polygon_is_simple(figure_eight)


def test_circle_path_is_closed():
    path = circle_path(1.0 + 1j, 0.5, start_angle=0.3, turns=2, points=64)
    assert path.size == 129
    assert abs(path[-1] - path[0]) < 1e-12
    assert_allclose(np.abs(path - (1.0 + 1j)), 0.5)


def test_curve_dict_form(lemniscate_spec):
    back = curve_from_dict(curve_to_dict(lemniscate_spec))
    assert back.roots == lemniscate_spec.roots
    assert back.c == lemniscate_spec.c


@pytest.mark.slow
def test_jordan_threshold_sits_at_the_critical_value():
    report = jordan_threshold([1.0, -1.0], iters=20, N=128)
    assert report.critical_value_bound == pytest.approx(1.0)
    assert 0.9 < report.threshold < 1.5
