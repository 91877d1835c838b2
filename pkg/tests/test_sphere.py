import numpy as np
import pytest

from src.lab.errors import CoincidentPoints, SingularPoint
from src.lab.sphere import dlp_kernel_sphere, newtonian_E, random_sphere_pairs, sphere_identity_check


def test_newtonian_kernel():
    assert newtonian_E([3.0, 4.0, 0.0], 3) == pytest.approx(0.2)
    assert newtonian_E([0.0, 0.0, 0.0, 2.0], 4, c_n=3.0) == pytest.approx(0.75)
    with pytest.raises(SingularPoint):
        newtonian_E(np.zeros(3), 3)
    with pytest.raises(ValueError):
        newtonian_E([1.0, 0.0], 2)


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_kernel_is_a_constant_multiple_of_newtonian(n):
    report = sphere_identity_check(n, trials=500, seed=11)
    assert report.spread < 1e-10
    assert report.identity_residual < 1e-12
    assert report.magnitude_error < 1e-12
    assert report.sign == 1
    assert report.ratio == pytest.approx((n - 2) / 2, abs=1e-12)


def test_single_kernel_value_against_closed_form():
    x = np.array([1.0, 0.0, 0.0])
    y = np.array([0.0, 1.0, 0.0])
    # |y - x| = sqrt 2, (y - x).x = -1
    assert dlp_kernel_sphere(x, y, 3) == pytest.approx(1 / 2 ** 1.5)
    assert dlp_kernel_sphere(x, y, 3) / newtonian_E(y - x, 3) == pytest.approx(0.5)


def test_kernel_rejects_bad_points():
    x = np.array([1.0, 0.0, 0.0])
    with pytest.raises(CoincidentPoints):
        dlp_kernel_sphere(x, x, 3)
    with pytest.raises(ValueError):
        dlp_kernel_sphere(x, np.array([2.0, 0.0, 0.0]), 3)
    with pytest.raises(ValueError):
        dlp_kernel_sphere(x, np.array([0.0, 1.0]), 3)


def test_random_pairs_are_reproducible():
    a = random_sphere_pairs(4, 20, np.random.default_rng(5))
    b = random_sphere_pairs(4, 20, np.random.default_rng(5))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert np.allclose(np.linalg.norm(a[0], axis=1), 1.0)
    assert sphere_identity_check(3, 50, seed=5).to_dict()["measured_sign"] == 1
