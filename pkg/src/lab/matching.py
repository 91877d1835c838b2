# src/lab/matching.py
"""
Matching pairs: f holomorphic inside, g holomorphic outside with g(inf) = 0,
and f = conj(g) on the curve. Lemniscate pairs (R, c^2/R) are constructed
and verified here, together with the graded evidence that ellipses and
R-domains admit no fixed points of Pi.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg

from src.lab import io as lab_io
from src.lab import polys
from src.lab.algcurve import curve_polynomial, decomplexify, trapping_check
from src.lab.cauchy import cauchy_matrix, hilbert_tilde, pi_via_hilbert
from src.lab.curve import (CurveSpec, Ellipse, Lemniscate, Location, RationalMapImage, SampledCurve,
                           check_jordan, curve_to_dict, locate_points, sample_curve)
from src.lab.errors import ConditionViolated, NotJordan, VerificationFailed
from src.lab.potential import (PERSISTENCE_TOL, assemble_pi, fixed_point_persistence, fixed_point_residual,
                               random_trig_density)
from src.lab.rational import RationalFn

logger = logging.getLogger(__name__)

EVIDENCE_LABEL = "EVIDENCE: numerical indication under grid refinement, not a proof"


@dataclass(frozen=True, eq=False)
class MatchingPair:
    f: RationalFn
    g: RationalFn
    curve: CurveSpec
    k: int = 1

    def power(self, k: int) -> "MatchingPair":
        if k == 1:
            return self
        return MatchingPair(self.f.power(k), self.g.power(k), self.curve, self.k * k)

    def to_dict(self) -> Dict[str, Any]:
        return {"f": self.f.to_dict(), "g": self.g.to_dict(), "curve": curve_to_dict(self.curve), "k": self.k}


@dataclass
class MatchReport:
    boundary_residual: float
    fixed_residual_f: float
    fixed_residual_g: float
    N: int
    k: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "N": self.N,
            "boundary_residual": self.boundary_residual,
            "fixed_residual_f": self.fixed_residual_f,
            "fixed_residual_g": self.fixed_residual_g,
        }


def check_pair(pair: MatchingPair, sc: SampledCurve) -> None:
    """f has no poles on the closed inside, g no poles on the closed outside, g(inf) = 0."""
    poles_f = pair.f.poles()
    if poles_f.size:
        for pole, loc in zip(poles_f, locate_points(sc, poles_f)):
            if loc is not Location.EXTERIOR:
                raise ConditionViolated("f has a pole in the closed domain", condition="f-poles", point=pole)
    poles_g = pair.g.poles()
    if poles_g.size:
        for pole, loc in zip(poles_g, locate_points(sc, poles_g)):
            if loc is not Location.INTERIOR:
                raise ConditionViolated("g has a pole in the closed exterior", condition="g-poles", point=pole)
    if pair.g.num_degree >= pair.g.den_degree:
        raise ConditionViolated("g does not vanish at infinity", condition="g-infinity")


def lemniscate_of(R: RationalFn, c: float) -> Lemniscate:
    """{|R| = c} written with monic numerator and denominator."""
    lead = abs(R.num[-1] / R.den[-1])
    return Lemniscate(tuple(R.zeros()), c / lead, tuple(R.poles()))


def melnikov_pair(R: RationalFn, c: float, N: int = 256) -> MatchingPair:
    """(R, c^2/R) on {|R| = c}, after checking the three conditions on R."""
    if not c > 0:
        raise ValueError("level c must be positive")
    spec = lemniscate_of(R, c)
    check = check_jordan(spec, N)
    if not check:
        raise NotJordan(f"level set |R| = {c} is not a Jordan curve: {check.reason}", c=c)
    sc = sample_curve(spec, N)
    poles = R.poles()
    for pole, loc in zip(poles, locate_points(sc, poles) if poles.size else []):
        if loc is not Location.EXTERIOR:
            raise ConditionViolated("(i) R has a pole in the domain", condition="i", point=pole)
    zeros = R.zeros()
    for zero, loc in zip(zeros, locate_points(sc, zeros) if zeros.size else []):
        if loc is not Location.INTERIOR:
            raise ConditionViolated("(ii) R has a zero outside the domain", condition="ii", point=zero)
    if R.num_degree <= R.den_degree:
        raise ConditionViolated("(iii) R(infinity) is finite", condition="iii")
    logger.info("[matching] melnikov pair of degree %d on |R| = %g", R.degree, c)
    return MatchingPair(R, R.reciprocal_scaled(c ** 2), spec)


def verify_matching(pair: MatchingPair, N: int = 256, sc: Optional[SampledCurve] = None) -> MatchReport:
    """Boundary residual max|f - conj g| and the fixed-point residuals of f and g under Pi."""
    sc = sc if sc is not None else sample_curve(pair.curve, N)
    check_pair(pair, sc)
    H = cauchy_matrix(sc)
    fz = pair.f(sc.z)
    gz = pair.g(sc.z)
    boundary = float(np.max(np.abs(fz - np.conj(gz))))
    res_f = float(np.max(np.abs(pi_via_hilbert(sc, fz, H).values - fz)))
    res_g = float(np.max(np.abs(pi_via_hilbert(sc, gz, H).values - gz)))
    return MatchReport(boundary, res_f, res_g, sc.N, pair.k)


def gram_min_singular(pairs: Sequence[MatchingPair], sc: SampledCurve) -> float:
    """Smallest singular value of the column-normalised samples of the f's."""
    cols = np.stack([p.f(sc.z) for p in pairs], axis=1)
    cols = cols / np.linalg.norm(cols, axis=0)
    return float(scipy.linalg.svdvals(cols)[-1])


def power_family(pair: MatchingPair, n_max: int, N: int = 256, tol: float = 1e-8) -> List[MatchingPair]:
    """(f^k, g^k) for k = 1..n_max, each re-verified and jointly linearly independent."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    sc = sample_curve(pair.curve, N)
    family = [pair.power(k) for k in range(1, n_max + 1)]
    for member in family:
        report = verify_matching(member, sc=sc)
        scale = max(1.0, float(np.max(np.abs(member.f(sc.z)))))
        if report.boundary_residual > tol * scale:
            raise VerificationFailed(f"power k={member.k} fails the boundary match",
                                     k=member.k, residual=report.boundary_residual)
    if n_max > 1:
        smin = gram_min_singular(family, sc)
        if smin <= 1e-10:
            raise VerificationFailed("powers are numerically linearly dependent", smallest_singular=smin)
    return family


def family_reports(pairs: Sequence[MatchingPair], N: int = 256) -> List[MatchReport]:
    return [verify_matching(p, N) for p in pairs]


def family_csv(reports: Sequence[MatchReport], path: Path) -> None:
    rows = [(r.k, r.boundary_residual, max(r.fixed_residual_f, r.fixed_residual_g)) for r in reports]
    lab_io.write_csv(path, ["k", "boundary_residual", "fixed_point_residual"], rows)


# fixed-point / matching dichotomy

@dataclass
class DichotomyReport:
    levels: List[int]
    tol: float
    h_conj_f: Dict[int, float] = field(default_factory=dict)
    tilde_fixed_residual: Dict[int, float] = field(default_factory=dict)

    @property
    def case_a(self) -> bool:
        return all(v < self.tol for v in self.h_conj_f.values())

    @property
    def case_b(self) -> bool:
        return all(v < self.tol for v in self.tilde_fixed_residual.values())

    @property
    def holds(self) -> bool:
        return self.case_a or self.case_b

    def to_dict(self) -> Dict[str, Any]:
        return {
            "levels": self.levels,
            "tol": self.tol,
            "h_conj_f": {str(k): v for k, v in self.h_conj_f.items()},
            "tilde_fixed_residual": {str(k): v for k, v in self.tilde_fixed_residual.items()},
            "case_a": self.case_a,
            "case_b": self.case_b,
            "holds": self.holds,
        }


def fixed_point_dichotomy(pair: MatchingPair, levels: Sequence[int] = (128, 256), tol: float = 1e-6) -> DichotomyReport:
    """Either H(conj f) vanishes, or conj(H conj f) is itself a fixed point at every level."""
    report = DichotomyReport(list(levels), tol)
    for N in levels:
        sc = sample_curve(pair.curve, N)
        H = cauchy_matrix(sc)
        fz = pair.f(sc.z)
        report.h_conj_f[N] = float(np.max(np.abs(H @ np.conj(fz))))
        h = hilbert_tilde(sc, fz, H).values
        norm = np.linalg.norm(h)
        if norm == 0:
            report.tilde_fixed_residual[N] = float("inf")
            continue
        report.tilde_fixed_residual[N] = float(np.linalg.norm(pi_via_hilbert(sc, h, H).values - h) / norm)
    return report


def leading_form_check(spec: Lemniscate, tol: float = 1e-9) -> bool:
    """The real defining polynomial of a lemniscate has top homogeneous part proportional to (x^2+y^2)^n."""
    P = decomplexify(curve_polynomial(spec))
    n = P.total_degree // 2
    if P.total_degree % 2:
        return False
    base = np.zeros((3, 3))
    base[2, 0] = base[0, 2] = 1.0
    target = polys.polypow2d(base, n).real
    lead = P.leading_form()
    size = (max(lead.shape[0], target.shape[0]), max(lead.shape[1], target.shape[1]))
    a = np.zeros(size)
    b = np.zeros(size)
    a[: lead.shape[0], : lead.shape[1]] = lead
    b[: target.shape[0], : target.shape[1]] = target
    scale = a[2 * n, 0]
    if scale == 0:
        return False
    return bool(np.max(np.abs(a / scale - b)) < tol)


# nonexistence evidence

@dataclass
class EvidenceReport:
    curve: str
    trials: int
    seed: int
    levels: List[int]
    trapping: Dict[str, Any]
    trial_residuals: List[float]
    persistence: Dict[str, Any]
    label: str = EVIDENCE_LABEL

    @property
    def residual_floor(self) -> float:
        return float(min(self.trial_residuals)) if self.trial_residuals else float("inf")

    @property
    def persistent_mode_found(self) -> bool:
        return bool(self.persistence.get("persistent"))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "curve": self.curve,
            "trials": self.trials,
            "seed": self.seed,
            "levels": self.levels,
            "trapping": self.trapping,
            "residual_floor": self.residual_floor,
            "trial_residuals": self.trial_residuals,
            "persistence": self.persistence,
            "persistent_mode_found": self.persistent_mode_found,
        }


def nonexistence_evidence(spec: CurveSpec, trials: int = 50, seed: int = 0,
                          levels: Sequence[int] = (128, 256, 512), samples: int = 100,
                          degree: int = 8, tol: float = PERSISTENCE_TOL) -> EvidenceReport:
    """
    Graded evidence that Pi has no non-constant fixed point on this curve:
    reflection trapping, a lower floor for ||Pi F - F|| / ||F|| over random mean-zero
    trigonometric densities, and the persistence of band-limited null modes.
    Ellipses trap with the roles of inside and outside reversed.
    """
    if isinstance(spec, RationalMapImage):
        trap = trapping_check(spec.map, samples=samples, seed=seed, N=min(levels))
    else:
        roles = "exterior" if isinstance(spec, Ellipse) else "interior"
        trap = trapping_check(spec, samples=samples, seed=seed, N=min(levels), roles=roles)

    rng = np.random.default_rng(seed)
    densities = [random_trig_density(rng, degree) for _ in range(trials)]
    per_level = {}
    for N in levels:
        sc = sample_curve(spec, N)
        pi = assemble_pi(sc)
        per_level[N] = [fixed_point_residual(pi, F(sc.t)) for F in densities]
    trial_residuals = [min(per_level[N][i] for N in levels) for i in range(trials)]

    persistence = fixed_point_persistence(spec, levels, tol, max_mode=degree)
    report = EvidenceReport(spec.kind, trials, seed, list(levels), trap.to_dict(), trial_residuals,
                            persistence.to_dict())
    logger.info("[matching] %s: residual floor %.3g, persistent modes %d", spec.kind,
                report.residual_floor, persistence.persistent_count)
    return report
