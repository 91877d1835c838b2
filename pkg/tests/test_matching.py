import numpy as np
import pytest

from src.lab.curve import Circle, Lemniscate
from src.lab.errors import ConditionViolated, NotJordan
from src.lab.io import read_csv
from src.lab.matching import (EVIDENCE_LABEL, MatchingPair, check_pair, family_csv, family_reports,
                              fixed_point_dichotomy, gram_min_singular, leading_form_check, lemniscate_of,
                              melnikov_pair, nonexistence_evidence, power_family, verify_matching)
from src.lab.rational import RationalFn

Z = RationalFn.polynomial([0.0, 1.0])
Z2_MINUS_1 = RationalFn.polynomial([-1.0, 0.0, 1.0])


@pytest.fixture(scope="module")
def circle_pair():
    return MatchingPair(Z, RationalFn(np.array([1.0]), np.array([0.0, 1.0])), Circle())


def test_circle_pair_matches_and_is_fixed(circle_pair):
    report = verify_matching(circle_pair, N=128)
    assert report.boundary_residual < 1e-13
    assert report.fixed_residual_f < 1e-10
    assert report.fixed_residual_g < 1e-10


def test_melnikov_pair_on_a_lemniscate():
    pair = melnikov_pair(Z2_MINUS_1, 2.0)
    assert isinstance(pair.curve, Lemniscate)
    report = verify_matching(pair, N=256)
    assert report.boundary_residual < 1e-12
    assert max(report.fixed_residual_f, report.fixed_residual_g) < 1e-8


def test_lemniscate_of_normalises_the_leading_coefficient():
    spec = lemniscate_of(RationalFn.polynomial([-2.0, 0.0, 2.0]), 4.0)
    assert spec.c == pytest.approx(2.0)
    assert sorted(np.real(spec.roots)) == pytest.approx([-1.0, 1.0])


def test_bounded_r_violates_condition_three():
    R = RationalFn.from_roots(zeros=[0.5], poles=[3.0])
    with pytest.raises(ConditionViolated) as info:
        melnikov_pair(R, 0.5)
    assert info.value.context["condition"] == "iii"


def test_two_component_level_set_is_not_jordan():
    with pytest.raises(NotJordan):
        melnikov_pair(Z2_MINUS_1, 0.5)


def test_level_must_be_positive():
    with pytest.raises(ValueError):
        melnikov_pair(Z2_MINUS_1, 0.0)


def test_check_pair_rejects_g_without_decay(circle_sc):
    with pytest.raises(ConditionViolated) as info:
        check_pair(MatchingPair(Z, Z, Circle()), circle_sc)
    assert info.value.context["condition"] == "g-infinity"


def test_check_pair_rejects_interior_poles_of_f(circle_sc):
    f = RationalFn.from_roots(poles=[0.5])
    with pytest.raises(ConditionViolated) as info:
        check_pair(MatchingPair(f, RationalFn(np.array([1.0]), np.array([0.0, 1.0])), Circle()), circle_sc)
    assert info.value.context["condition"] == "f-poles"


def test_power_family_of_the_circle(circle_pair, tmp_path):
    family = power_family(circle_pair, 4, N=128)
    assert [p.k for p in family] == [1, 2, 3, 4]
    reports = family_reports(family, N=128)
    assert all(r.boundary_residual < 1e-12 for r in reports)
    family_csv(reports, tmp_path / "family.csv")
    rows = read_csv(tmp_path / "family.csv")
    assert [int(r["k"]) for r in rows] == [1, 2, 3, 4]


def test_powers_of_a_lemniscate_pair_stay_fixed():
    pair = melnikov_pair(Z2_MINUS_1, 2.0)
    family = power_family(pair, 3)
    from src.lab.curve import sample_curve
    sc = sample_curve(pair.curve, 256)
    assert gram_min_singular(family, sc) > 1e-6
    report = verify_matching(family[1], sc=sc)
    assert report.k == 2
    assert max(report.fixed_residual_f, report.fixed_residual_g) < 1e-7


def test_power_family_needs_a_positive_count(circle_pair):
    with pytest.raises(ValueError):
        power_family(circle_pair, 0)


def test_dichotomy_on_the_circle_is_case_a(circle_pair):
    report = fixed_point_dichotomy(circle_pair, levels=(64, 128))
    assert report.case_a
    assert report.holds
    assert set(report.to_dict()["h_conj_f"]) == {"64", "128"}


def test_lemniscate_leading_form_is_a_power_of_the_modulus(lemniscate_spec, ellipse_spec):
    assert leading_form_check(lemniscate_spec)
    assert not leading_form_check(ellipse_spec)


def test_circle_control_shows_persistent_modes(circle_spec):
    report = nonexistence_evidence(circle_spec, trials=5, seed=2, levels=(64, 128), samples=20)
    assert report.persistent_mode_found
    assert report.residual_floor < 1e-10


@pytest.mark.slow
def test_ellipse_evidence_has_a_residual_floor(ellipse_spec):
    report = nonexistence_evidence(ellipse_spec, trials=10, seed=3, levels=(64, 128), samples=20)
    assert report.label == EVIDENCE_LABEL
    assert report.residual_floor > 1e-3
    assert not report.persistent_mode_found
    assert report.to_dict()["trapping"]["roles"] == "exterior"


def test_dichotomy_on_a_lemniscate():
    pair = melnikov_pair(Z2_MINUS_1, 2.0)
    report = fixed_point_dichotomy(pair)
    assert report.case_a and report.holds

    # c^2/R in the role of f: H(conj f) = R, and conj(H conj f) = c^2/R is fixed
    swapped = fixed_point_dichotomy(MatchingPair(pair.g, pair.f, pair.curve))
    assert not swapped.case_a
    assert swapped.case_b and swapped.holds
    assert min(swapped.h_conj_f.values()) > 1.0


@pytest.mark.slow
def test_rdomain_evidence_has_a_residual_floor(rdomain_spec):
    report = nonexistence_evidence(rdomain_spec, trials=10, seed=3, levels=(128, 256), samples=20)
    assert report.residual_floor > 1e-3
    assert not report.persistent_mode_found
    assert report.persistence["persistent_count"] == 0
    assert report.trapping["passed"]
