import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.lab.cauchy import (cauchy_boundary_values, cauchy_eval, cauchy_matrix, extrapolation_weights,
                            hilbert_H, hilbert_tilde, pi_via_hilbert, plemelj_limits,
                            spectral_derivative_matrix)
from src.lab.curve import sample_curve
from src.lab.matching import melnikov_pair
from src.lab.potential import assemble_pi
from src.lab.rational import RationalFn


def test_spectral_derivative_of_a_trig_polynomial():
    N = 64
    t = 2 * np.pi * np.arange(N) / N
    D = spectral_derivative_matrix(N)
    f = np.sin(3 * t) + np.cos(5 * t)
    assert_allclose(D @ f, 3 * np.cos(3 * t) - 5 * np.sin(5 * t), atol=1e-11)


def test_circle_boundary_values_of_z(circle_sc):
    f_i, f_e = cauchy_boundary_values(circle_sc, circle_sc.z)
    assert np.max(np.abs(f_i.values - circle_sc.z)) < 1e-10
    assert np.max(np.abs(f_e.values)) < 1e-10


def test_circle_boundary_values_of_conjugate(circle_sc):
    F = np.exp(-1j * circle_sc.t)
    f_i, f_e = cauchy_boundary_values(circle_sc, F)
    assert np.max(np.abs(f_i.values)) < 1e-10
    # the exterior Cauchy integral of 1/zeta is -1/z
    assert np.max(np.abs(f_e.values + F)) < 1e-10


def test_jump_relation_holds_exactly(ellipse_sc, rng):
    F = rng.standard_normal(ellipse_sc.N) + 1j * rng.standard_normal(ellipse_sc.N)
    f_i, f_e = cauchy_boundary_values(ellipse_sc, F)
    assert_allclose(f_i.values - f_e.values, F, atol=1e-12)


@pytest.mark.parametrize("fixture", ["circle_sc", "ellipse_sc", "rdomain_sc"])
def test_alternating_mode_is_annihilated(request, fixture):
    sc = request.getfixturevalue(fixture)
    v = (-1.0) ** np.arange(sc.N)
    assert np.max(np.abs(cauchy_matrix(sc) @ v)) < 1e-10


def _random_densities(t, rng, count=20):
    """Random complex Fourier sums up to |k| = N/4 plus an alternating component."""
    modes = np.arange(-(t.size // 4), t.size // 4 + 1)
    E = np.exp(1j * np.outer(t, modes))
    for _ in range(count):
        c = (rng.standard_normal(modes.size) + 1j * rng.standard_normal(modes.size)) / np.sqrt(modes.size)
        yield E @ c + complex(rng.standard_normal(), rng.standard_normal()) * (-1.0) ** np.arange(t.size)


@pytest.mark.parametrize("spec_fixture", ["circle_spec", "ellipse_spec"])
def test_h_and_h_tilde_are_projections(request, spec_fixture, rng):
    sc = sample_curve(request.getfixturevalue(spec_fixture), 512)
    H = cauchy_matrix(sc)
    for F in _random_densities(sc.t, rng):
        HF = H @ F
        assert np.max(np.abs(H @ HF - HF)) < 1e-7
        tF = hilbert_tilde(sc, F, H).values
        assert np.max(np.abs(hilbert_tilde(sc, tF, H).values - tF)) < 1e-7


def test_lemniscate_fixed_points_split_between_h_and_h_tilde():
    pair = melnikov_pair(RationalFn.polynomial([-1.0, 0.0, 1.0]), 2.0)
    sc = sample_curve(pair.curve, 256)
    H = cauchy_matrix(sc)
    R, S = pair.f(sc.z), pair.g(sc.z)
    assert np.max(np.abs(H @ R - R)) < 1e-8
    assert np.max(np.abs(hilbert_tilde(sc, R, H).values)) < 1e-8
    assert np.max(np.abs(H @ S)) < 1e-8
    assert np.max(np.abs(hilbert_tilde(sc, S, H).values - S)) < 1e-8
    for F in (R, S, R + 0.5j * S):
        assert np.max(np.abs(H @ hilbert_tilde(sc, F, H).values)) < 1e-8


def test_boundary_values_of_entire_and_exterior_functions(ellipse_sc):
    z = ellipse_sc.z
    assert np.max(np.abs(hilbert_H(ellipse_sc, z ** 3).values - z ** 3)) < 1e-9
    assert np.max(np.abs(hilbert_H(ellipse_sc, 1 / z ** 2).values)) < 1e-9


def test_pi_via_hilbert_matches_double_layer():
    from src.lab.curve import Ellipse
    sc = sample_curve(Ellipse(2.0, 1.0), 512)
    t = sc.t
    F = np.cos(2 * t) + 0.3 * np.sin(5 * t)
    direct = assemble_pi(sc) @ F
    assert np.max(np.abs(pi_via_hilbert(sc, F).values - direct)) < 1e-7


def test_hilbert_tilde_conjugates(ellipse_sc):
    z = ellipse_sc.z
    assert np.max(np.abs(hilbert_tilde(ellipse_sc, np.conj(z)).values - np.conj(z))) < 1e-9


def test_cauchy_eval_inside_and_outside(ellipse_sc):
    values = cauchy_eval(ellipse_sc, ellipse_sc.z, [0.5, 0.3j, 5.0])
    assert abs(values[0] - 0.5) < 1e-10
    assert abs(values[1] - 0.3j) < 1e-10
    assert abs(values[2]) < 1e-10


def test_extrapolation_weights_reproduce_polynomials():
    w = extrapolation_weights(4)
    k = np.arange(1, 5, dtype=float)
    assert abs(w.sum() - 1) < 1e-12
    assert abs(w @ (2 + 3 * k - k ** 3) - 2) < 1e-10


def test_plemelj_limits_of_z_squared(ellipse_sc):
    F = ellipse_sc.z ** 2
    nodes = [0, 40, 97, 200]
    inner, outer = plemelj_limits(ellipse_sc, F, nodes=nodes)
    assert np.max(np.abs(inner - F[nodes])) < 1e-5
    assert np.max(np.abs(outer)) < 1e-5
