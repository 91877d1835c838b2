import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.lab.curve import Ellipse, sample_curve
from src.lab.errors import EigSolverFailure, SolveSingular, TooCloseToBoundary
from src.lab.potential import (BoundaryOperator, DensityGrid, assemble_j, assemble_k, assemble_pi,
                               double_layer_eval, double_layer_eval_many, double_layer_matrix,
                               fixed_point_persistence, fixed_point_residual, gap_threshold, random_trig_density,
                               solve_dirichlet, spectrum)


def test_circle_kernel_is_rank_one(circle_sc):
    A = double_layer_matrix(circle_sc)
    assert_allclose(A, np.full((256, 256), 1 / 256), atol=1e-13)


@pytest.mark.parametrize("fixture", ["circle_sc", "ellipse_sc", "lemniscate_sc", "rdomain_sc"])
def test_gauss_identity(request, fixture):
    sc = request.getfixturevalue(fixture)
    pi = assemble_pi(sc)
    assert np.max(np.abs(pi @ np.ones(sc.N) - 2)) < 1e-8


@pytest.mark.parametrize("fixture", ["ellipse_sc", "lemniscate_sc", "rdomain_sc"])
def test_double_layer_of_constant_inside_and_outside(request, fixture):
    sc = request.getfixturevalue(fixture)
    inside = double_layer_eval(sc, np.ones(sc.N), sc.reference_point)
    outside = double_layer_eval(sc, np.ones(sc.N), sc.reference_point + 2 * sc.diameter)
    assert abs(inside - 2) < 1e-8
    assert abs(outside) < 1e-8


def test_k_and_j_follow_from_pi(ellipse_sc):
    pi = assemble_pi(ellipse_sc)
    K = assemble_k(pi)
    J = assemble_j(pi)
    assert np.max(np.abs(pi.matrix - np.eye(ellipse_sc.N) - 2 * K.matrix)) == 0
    assert_allclose(J.matrix, pi.matrix / 2)
    assert K.tag == "K" and J.tag == "J"
    with pytest.raises(ValueError):
        assemble_k(K)


def test_probe_inside_gap_is_rejected(ellipse_sc):
    near = 2.0 + 0.5 * gap_threshold(ellipse_sc)
    with pytest.raises(TooCloseToBoundary):
        double_layer_eval_many(ellipse_sc, np.ones(ellipse_sc.N), [0j, near])


def test_ellipse_eigenvalues(ellipse_sc):
    report = spectrum(assemble_pi(ellipse_sc))
    eig = report.eigenvalues
    q = 1.0 / 3.0
    for n in (1, 2, 3):
        for target in (1 + q ** n, 1 - q ** n):
            assert np.min(np.abs(eig - target)) < 1e-8
    assert abs(report.near_two - 2) < 1e-8
    assert report.singular_values.size == 16


def test_circle_has_only_fixed_points_besides_two(circle_sc):
    report = spectrum(assemble_pi(circle_sc))
    assert report.fixed_count == circle_sc.N - 1
    assert abs(report.near_two - 2) < 1e-10


def test_spectrum_needs_pi(ellipse_sc):
    with pytest.raises(ValueError):
        spectrum(assemble_k(ellipse_sc))


def test_spectrum_reports_solver_failure(ellipse_sc):
    bad = BoundaryOperator(np.full((ellipse_sc.N, ellipse_sc.N), np.nan), "Pi", ellipse_sc)
    with pytest.raises(EigSolverFailure):
        spectrum(bad)


@pytest.mark.parametrize("power", [1, 2])
def test_dirichlet_reproduces_harmonic_polynomials(ellipse_sc, power):
    f = np.real(ellipse_sc.z ** power)
    F = solve_dirichlet(ellipse_sc, f)
    angles = 2 * np.pi * np.arange(10) / 10
    probes = 0.5 * (2 * np.cos(angles) + 1j * np.sin(angles))
    u = double_layer_eval_many(ellipse_sc, F, probes)
    assert np.max(np.abs(u - np.real(probes ** power))) < 1e-7


def test_dirichlet_rejects_singular_operator(ellipse_sc):
    singular = BoundaryOperator(np.ones((ellipse_sc.N, ellipse_sc.N)), "Pi", ellipse_sc)
    with pytest.raises(SolveSingular):
        solve_dirichlet(ellipse_sc, np.ones(ellipse_sc.N), singular)


def test_density_grid_csv(tmp_path, ellipse_sc):
    F = DensityGrid.from_function(ellipse_sc, lambda z: z ** 2)
    path = tmp_path / "density.csv"
    F.to_csv(path)
    back = DensityGrid.from_csv(path, ellipse_sc)
    assert_allclose(back.values, F.values)
    with pytest.raises(ValueError):
        DensityGrid(ellipse_sc, np.ones(3))


def test_random_densities_are_not_fixed_on_the_ellipse(ellipse_sc, rng):
    pi = assemble_pi(ellipse_sc)
    for _ in range(10):
        F = random_trig_density(rng)(ellipse_sc.t)
        assert abs(np.mean(F)) < 1e-12
        assert fixed_point_residual(pi, F) > 1e-3


def test_persistence_on_circle_finds_the_whole_band(circle_spec):
    report = fixed_point_persistence(circle_spec, levels=(64, 128), max_mode=8)
    assert report.persistent_count == 16
    assert report.persistent
    assert report.refined_residual < 1e-10


def test_persistence_on_ellipse_finds_nothing(ellipse_spec):
    report = fixed_point_persistence(ellipse_spec, levels=(128, 256), max_mode=8)
    assert report.persistent_count == 0
    assert not report.persistent
    assert min(s[0] for s in report.singular_values.values()) > 1e-5


def test_persistence_on_lemniscate_finds_powers_of_r(lemniscate_spec):
    report = fixed_point_persistence(lemniscate_spec, levels=(128, 256), max_mode=8)
    # R^k and conj R^k for k = 1..4 sit on the even modes of the band
    assert report.persistent_count == 8
    assert report.refined_residual < 1e-8
    assert report.threshold >= report.tol


def test_persistence_on_rdomain_finds_nothing(rdomain_spec):
    # band truncations of eigenvalues near 1 stay far above the control-level threshold
    report = fixed_point_persistence(rdomain_spec, levels=(128, 256), max_mode=8)
    assert report.persistent_count == 0
    assert not report.persistent
    assert all(count == 0 for count in report.null_counts.values())


@pytest.mark.slow
def test_gauss_identity_on_thin_ellipse():
    sc = sample_curve(Ellipse(5.0, 1.0), 512)
    assert np.max(np.abs(assemble_pi(sc) @ np.ones(sc.N) - 2)) < 1e-8
