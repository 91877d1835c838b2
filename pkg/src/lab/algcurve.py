# src/lab/algcurve.py
"""
Complexified algebraic curves Q(z, w) = P((z+w)/2, (z-w)/2i).

Schwarz values are the roots w of Q(z, .) = 0; the anticonformal
reflections are their conjugates. Bivariate coefficient arrays follow
the polys convention C[j, k] * z**j * w**k.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from src.lab import polys
from src.lab.curve import (Circle, CurveSpec, Ellipse, Lemniscate, Location, RationalMapImage,
                           boundary_distances, locate_points, sample_curve)
from src.lab.errors import (DegenerateDiscriminant, DegenerateSolve, EliminationDegenerate,
                            MonodromyAmbiguity, PathTooCloseToBranch)
from src.lab.rational import RationalFn

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
LEADING_TOL = 1e-12
AMBIGUITY_RATIO = 0.5


# polynomial types

@dataclass(frozen=True, eq=False)
class RealBivarPoly:
    """P(x, y) = sum c[j, k] x**j y**k with real coefficients."""
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if np.iscomplexobj(c):
            if np.max(np.abs(c.imag), initial=0.0) > 0:
                raise ValueError("RealBivarPoly coefficients must be real")
            c = c.real
        c = np.atleast_2d(np.asarray(c, dtype=float))
        c = np.array(polys.trim2d(c).real)
        if not np.any(c != 0):
            raise ValueError("polynomial is identically zero")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def total_degree(self) -> int:
        j, k = np.nonzero(self.coeffs)
        return int(np.max(j + k))

    def __call__(self, x, y):
        return npoly.polyval2d(x, y, self.coeffs)

    def leading_form(self) -> np.ndarray:
        """Coefficients of the top-degree homogeneous part, other entries zeroed."""
        d = self.total_degree
        j, k = np.indices(self.coeffs.shape)
        return np.where(j + k == d, self.coeffs, 0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"coeffs": self.coeffs.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RealBivarPoly":
        return cls(np.array(data["coeffs"], dtype=float))


@dataclass(frozen=True, eq=False)
class HermitianBivarPoly:
    """
    Q(z, w) = a_0(z) + a_1(z) w + ... + a_n(z) w**n.
    Hermitian symmetry is verified with symmetry_check rather than enforced here.
    """
    coeffs: np.ndarray

    def __post_init__(self):
        c = polys.trim2d(np.atleast_2d(np.asarray(self.coeffs, dtype=complex)))
        if not np.any(c != 0):
            raise ValueError("polynomial is identically zero")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def z_degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def leading(self) -> np.ndarray:
        """a_n(z), ascending coefficients."""
        return self.coeffs[:, -1]

    def in_w(self, z: complex) -> np.ndarray:
        """Ascending coefficients of w -> Q(z, w)."""
        return np.asarray(npoly.polyval(z, self.coeffs), dtype=complex)

    def __call__(self, z, w):
        return npoly.polyval2d(z, w, self.coeffs)

    def dz(self, z, w):
        return npoly.polyval2d(z, w, npoly.polyder(self.coeffs, axis=0))

    def dw(self, z, w):
        return npoly.polyval2d(z, w, npoly.polyder(self.coeffs, axis=1))

    def normalized(self) -> "HermitianBivarPoly":
        return HermitianBivarPoly(self.coeffs / np.max(np.abs(self.coeffs)))

    def to_dict(self) -> Dict[str, Any]:
        return {"coeffs": [[[float(v.real), float(v.imag)] for v in row] for row in self.coeffs]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HermitianBivarPoly":
        rows = [[complex(re, im) for re, im in row] for row in data["coeffs"]]
        return cls(np.array(rows, dtype=complex))


def _hermitian_part(C: np.ndarray) -> np.ndarray:
    S = polys.square_pad(C)
    return (S + S.conj().T) / 2


def complexify(P: RealBivarPoly) -> HermitianBivarPoly:
    """Substitute x = (z+w)/2, y = (z-w)/2i by coefficient arithmetic."""
    X = np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex)
    Y = np.array([[0.0, 0.5j], [-0.5j, 0.0]], dtype=complex)
    dx, dy = P.coeffs.shape
    x_pows = [polys.polypow2d(X, j) for j in range(dx)]
    y_pows = [polys.polypow2d(Y, k) for k in range(dy)]
    Q = np.zeros((1, 1), dtype=complex)
    for j in range(dx):
        for k in range(dy):
            if P.coeffs[j, k] != 0:
                Q = polys.polyadd2d(Q, P.coeffs[j, k] * polys.polymul2d(x_pows[j], y_pows[k]))
    # real P makes Q Hermitian up to rounding; make it exact
    return HermitianBivarPoly(_hermitian_part(Q))


def decomplexify(Q: HermitianBivarPoly, tol: float = 1e-9) -> RealBivarPoly:
    """P(x, y) = Q(x + iy, x - iy)."""
    Z = np.array([[0.0, 1j], [1.0, 0.0]], dtype=complex)
    W = np.array([[0.0, -1j], [1.0, 0.0]], dtype=complex)
    dz, dw = Q.coeffs.shape
    z_pows = [polys.polypow2d(Z, j) for j in range(dz)]
    w_pows = [polys.polypow2d(W, k) for k in range(dw)]
    P = np.zeros((1, 1), dtype=complex)
    for j in range(dz):
        for k in range(dw):
            if Q.coeffs[j, k] != 0:
                P = polys.polyadd2d(P, Q.coeffs[j, k] * polys.polymul2d(z_pows[j], w_pows[k]))
    scale = max(float(np.max(np.abs(P))), 1.0)
    if np.max(np.abs(P.imag)) > tol * scale:
        raise ValueError("Q is not Hermitian: real form has imaginary coefficients")
    return RealBivarPoly(P.real)


def symmetry_check(Q: HermitianBivarPoly, tol: float = SYMMETRY_TOL) -> bool:
    """Q(z, w) == conj(Q(conj w, conj z)), i.e. the coefficient matrix equals its conjugate transpose."""
    S = polys.square_pad(Q.coeffs)
    scale = max(float(np.max(np.abs(S))), 1.0)
    return bool(np.max(np.abs(S - S.conj().T)) <= tol * scale)


def curve_polynomial(spec: CurveSpec) -> HermitianBivarPoly:
    """Defining Hermitian polynomial of any curve spec, vanishing at (z, conj z) on the curve."""
    if isinstance(spec, Circle):
        c, r = spec.center, spec.radius
        C = np.array([[abs(c) ** 2 - r ** 2, -c], [-np.conj(c), 1.0]], dtype=complex)
        return HermitianBivarPoly(C)
    if isinstance(spec, Ellipse):
        P = np.zeros((3, 3))
        P[2, 0] = 1.0 / spec.a ** 2
        P[0, 2] = 1.0 / spec.b ** 2
        P[0, 0] = -1.0
        return complexify(RealBivarPoly(P))
    if isinstance(spec, Lemniscate):
        R = spec.function
        size = max(R.num.size, R.den.size)
        p = np.zeros(size, dtype=complex)
        q = np.zeros(size, dtype=complex)
        p[: R.num.size] = R.num
        q[: R.den.size] = R.den
        C = np.outer(p, np.conj(p)) - spec.c ** 2 * np.outer(q, np.conj(q))
        return HermitianBivarPoly(C)
    if isinstance(spec, RationalMapImage):
        return implicitize_rdomain(spec.map)
    raise ValueError(f"unsupported curve spec {spec!r}")


# branch points

@dataclass(frozen=True, eq=False)
class BranchPointSet:
    branch: np.ndarray
    exceptional: np.ndarray
    epsilon: float
    branch_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    exceptional_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    discriminant: np.ndarray = field(default_factory=lambda: np.ones(1, dtype=complex))

    def points(self) -> np.ndarray:
        return np.concatenate([self.branch, self.exceptional]).astype(complex)

    def rows(self) -> List[tuple]:
        rows = [(b.real, b.imag, "branch", r) for b, r in zip(self.branch, self.branch_residuals)]
        rows += [(e.real, e.imag, "exceptional", r) for e, r in zip(self.exceptional, self.exceptional_residuals)]
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "branch": self.branch,
            "exceptional": self.exceptional,
            "epsilon": self.epsilon,
            "branch_residuals": self.branch_residuals,
            "exceptional_residuals": self.exceptional_residuals,
        }


def _relative_residual(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.size == 0:
        return np.zeros(0)
    value = np.abs(npoly.polyval(z, c))
    scale = npoly.polyval(np.abs(z), np.abs(c))
    return value / np.maximum(scale, np.finfo(float).tiny)


def discriminant(Q: HermitianBivarPoly, radius: float = 1.0) -> np.ndarray:
    """
    Res_w(Q, dQ/dw) / a_n(z) as ascending coefficients in z.
    The resultant is sampled on |z| = radius and recovered by FFT interpolation.
    """
    n = Q.n
    if n < 1:
        raise ValueError("Q must have positive degree in w")
    if n == 1:
        return np.ones(1, dtype=complex)
    C = Q.normalized().coeffs
    Cw = npoly.polyder(C, axis=1)
    count = Q.z_degree * (2 * n - 1) + 1
    nodes = polys.circle_nodes(count, radius)
    values = np.array([np.linalg.det(polys.sylvester(npoly.polyval(z, C), npoly.polyval(z, Cw)))
                       for z in nodes])
    res = polys.trim(polys.interpolate_on_circle(values, radius), 1e-12)
    if np.max(np.abs(res)) < 1e-13:
        raise DegenerateDiscriminant("discriminant vanishes identically; Q is not squarefree in w")
    quotient, _ = npoly.polydiv(res, polys.trim(C[:, -1], 1e-12))
    return polys.trim(quotient, 1e-11)


def branch_points(Q: HermitianBivarPoly, epsilon: float = 1e-3, radius: float = 1.0) -> BranchPointSet:
    """Roots of the w-discriminant (branch set) and of a_n (exceptional points)."""
    if Q.n < 1:
        raise ValueError("Q must have positive degree in w")
    disc = discriminant(Q, radius)
    branch = polys.roots(disc)
    lead = polys.trim(Q.leading(), 1e-12)
    exceptional = polys.roots(lead)
    order = lambda pts: pts[np.lexsort((np.round(pts.imag, 12), np.round(pts.real, 12)))]
    branch, exceptional = order(branch), order(exceptional)
    result = BranchPointSet(branch, exceptional, epsilon,
                            _relative_residual(disc, branch), _relative_residual(lead, exceptional), disc)
    logger.debug("[algcurve] %d branch points, %d exceptional points", branch.size, exceptional.size)
    return result


# Schwarz values and reflections

@dataclass(frozen=True, eq=False)
class ReflectionSet:
    """
    Multiset of n values at a base point: finite values plus a count of values at infinity.
    condition holds one relative root condition number per finite value.
    """
    base: complex
    values: np.ndarray
    at_infinity: int = 0
    condition: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def size(self) -> int:
        return self.values.size + self.at_infinity

    def conjugate(self) -> "ReflectionSet":
        return ReflectionSet(self.base, np.conj(self.values), self.at_infinity, self.condition)

    def contains(self, point: complex, tol: float = 1e-8) -> bool:
        if not np.isfinite(point):
            return self.at_infinity > 0
        if self.values.size == 0:
            return False
        return bool(np.min(np.abs(self.values - point)) <= tol * max(1.0, abs(point)))

    def to_dict(self) -> Dict[str, Any]:
        return {"base": self.base, "values": self.values, "at_infinity": self.at_infinity,
                "condition": self.condition}


def _root_set(base: complex, coeffs: np.ndarray, expected: int) -> ReflectionSet:
    coeffs = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    if scale == 0:
        raise DegenerateSolve("polynomial in w vanishes identically at this point", base=base)
    c = polys.trim(coeffs, LEADING_TOL)
    roots = polys.roots(c)
    deriv = npoly.polyder(c)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = npoly.polyval(np.abs(roots), np.abs(c)) / np.abs(npoly.polyval(roots, deriv))
    cond = np.where(np.isfinite(cond), cond, np.inf)
    order = np.lexsort((roots.imag, roots.real))
    return ReflectionSet(complex(base), roots[order], expected - roots.size, cond[order])


def schwarz_values(Q: HermitianBivarPoly, z: complex) -> ReflectionSet:
    """All n roots of Q(z, .) = 0; degree drops are reported as values at infinity."""
    return _root_set(z, Q.in_w(z), Q.n)


def acr_values(Q: HermitianBivarPoly, z: complex) -> ReflectionSet:
    return schwarz_values(Q, z).conjugate()


def reciprocity_check(Q: HermitianBivarPoly, z1: complex, z2: complex, tol: float = 1e-8) -> bool:
    """z1 in {R(z2)} iff z2 in {R(z1)}."""
    forward = acr_values(Q, z2).contains(z1, tol)
    backward = acr_values(Q, z1).contains(z2, tol)
    return forward == backward


@dataclass
class ReciprocityReport:
    trials: int
    seed: int
    related_pairs: int = 0
    skipped: int = 0
    failure_count: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "related_pairs": self.related_pairs,
            "skipped": self.skipped,
            "failures": self.failures,
            "failure_count": self.failure_count,
            "passed": self.passed,
        }


def reciprocity_sweep(spec: CurveSpec, trials: int = 1000, seed: int = 0, N: int = 256, tol: float = 1e-8,
                      epsilon: float = 1e-3, max_failures: int = 20) -> ReciprocityReport:
    """
    reciprocity_check over seeded random pairs drawn in a disk of twice the curve's radius.
    About half the pairs are reflection-related (z2 is a random reflection of z1); points
    within epsilon * diameter of a branch or exceptional point are redrawn.
    """
    Q = curve_polynomial(spec)
    avoid = branch_points(Q).points()
    sc = sample_curve(spec, N)
    center = sc.reference_point
    r_max = float(np.max(np.abs(sc.z - center)))
    eps = epsilon * max(1.0, sc.diameter)
    rng = np.random.default_rng(seed)

    def draw() -> complex:
        while True:
            z = center + 2 * r_max * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            if not avoid.size or np.min(np.abs(avoid - z)) > eps:
                return complex(z)

    report = ReciprocityReport(trials, seed)
    for _ in range(trials):
        z1 = draw()
        if rng.uniform() < 0.5:
            refl = acr_values(Q, z1).values
            if refl.size == 0:
                report.skipped += 1
                continue
            z2 = complex(refl[rng.integers(refl.size)])
            report.related_pairs += 1
        else:
            z2 = draw()
        try:
            ok = reciprocity_check(Q, z1, z2, tol)
        except DegenerateSolve:
            report.skipped += 1
            continue
        if not ok:
            report.failure_count += 1
            if len(report.failures) < max_failures:
                report.failures.append({"z1": z1, "z2": z2})
    logger.info("[algcurve] reciprocity on %s: %d/%d failures, %d related pairs", spec.kind,
                report.failure_count, trials, report.related_pairs)
    return report


# continuation

@dataclass
class ContinuationTrace:
    z: np.ndarray
    w: np.ndarray
    halvings: int
    steps: int

    def rows(self) -> List[tuple]:
        return [(k, zk.real, zk.imag, wk.real, wk.imag) for k, (zk, wk) in enumerate(zip(self.z, self.w))]


def _polyline_distance(path: np.ndarray, points: np.ndarray) -> np.ndarray:
    a = path[:-1]
    D = path[1:] - a
    length2 = np.maximum(np.abs(D) ** 2, np.finfo(float).tiny)
    p = points[:, None]
    s = np.clip(np.real(np.conj(D)[None, :] * (p - a[None, :])) / length2[None, :], 0.0, 1.0)
    return np.min(np.abs(p - (a[None, :] + s * D[None, :])), axis=1)


def _newton_w(Q: HermitianBivarPoly, z: complex, w: complex, steps: int = 3) -> complex:
    c = Q.in_w(z)
    d = npoly.polyder(c)
    for _ in range(steps):
        slope = npoly.polyval(w, d)
        if slope == 0:
            break
        w = w - npoly.polyval(w, c) / slope
    return complex(w)


def trace_branch(Q: HermitianBivarPoly, path: Sequence[complex], w_start: complex, B: BranchPointSet,
                 max_step: Optional[float] = None, min_step: float = 1e-10) -> ContinuationTrace:
    """
    Continue the root w_start of Q(path[0], .) along the polyline path.
    Each step predicts with dw/dz = -Q_z/Q_w and accepts the nearest root only if it is
    at most half as far as the runner-up; otherwise the step is halved.
    """
    path = np.asarray(path, dtype=complex)
    if path.size < 2:
        raise ValueError("path needs at least two points")
    avoid = B.points()
    if avoid.size:
        dist = _polyline_distance(path, avoid)
        if np.min(dist) < B.epsilon:
            k = int(np.argmin(dist))
            raise PathTooCloseToBranch("path passes within epsilon of a branch or exceptional point",
                                       point=avoid[k], distance=float(dist[k]), epsilon=B.epsilon)
    start = schwarz_values(Q, path[0])
    if not start.contains(w_start, 1e-6):
        raise ValueError(f"w_start={w_start} is not a root of Q(path[0], .)")
    w = start.values[np.argmin(np.abs(start.values - w_start))]
    if max_step is None:
        max_step = float(np.max(np.abs(np.diff(path))))

    zs, ws = [path[0]], [w]
    halvings = steps = 0
    for a, b in zip(path[:-1], path[1:]):
        length = abs(b - a)
        if length == 0:
            continue
        s, h = 0.0, min(1.0, max_step / length)
        while s < 1.0:
            h = min(h, 1.0 - s)
            z_prev, z_next = a + s * (b - a), a + (s + h) * (b - a)
            slope = -Q.dz(z_prev, w) / Q.dw(z_prev, w)
            predictor = w + slope * (z_next - z_prev)
            cand = schwarz_values(Q, z_next).values
            if cand.size == 0:
                raise MonodromyAmbiguity("no finite root to continue onto", z=z_next)
            gaps = np.sort(np.abs(cand - predictor))
            if cand.size == 1 or gaps[0] < AMBIGUITY_RATIO * gaps[1]:
                w = _newton_w(Q, z_next, cand[np.argmin(np.abs(cand - predictor))])
                s += h
                steps += 1
                zs.append(z_next)
                ws.append(w)
                h = min(2 * h, max_step / length)
                continue
            h /= 2
            halvings += 1
            if h * length < min_step:
                raise MonodromyAmbiguity("root assignment stays ambiguous at minimum step",
                                         z=z_next, ratio=float(gaps[0] / gaps[1]))
    return ContinuationTrace(np.array(zs), np.array(ws), halvings, steps)


def continue_branch(Q: HermitianBivarPoly, path: Sequence[complex], w_start: complex,
                    B: BranchPointSet, **kwargs) -> complex:
    """Analytically continued root of Q(z, .) at the end of path."""
    return complex(trace_branch(Q, path, w_start, B, **kwargs).w[-1])


# R-domains

def rdomain_reflections(phi: RationalFn, t: complex) -> ReflectionSet:
    """
    Reflections of t across the boundary of phi(unit disk): solve phi(zeta) = t and return
    phi(1/conj(zeta)) for every solution. Solutions at infinity reflect to phi(0);
    the solution zeta = 0 reflects to phi(infinity).
    """
    n = phi.degree
    p = np.zeros(n + 1, dtype=complex)
    q = np.zeros(n + 1, dtype=complex)
    p[: phi.num.size] = phi.num
    q[: phi.den.size] = phi.den
    coeffs = p - t * q
    if np.max(np.abs(coeffs)) <= 1e-14 * max(np.max(np.abs(p)), 1.0):
        raise DegenerateSolve("p - t q vanishes identically", t=t)
    solutions = _root_set(t, coeffs, n)
    values: List[complex] = [complex(phi(0j))] * solutions.at_infinity
    cond: List[float] = [1.0] * solutions.at_infinity
    at_infinity = 0
    for zeta, kappa in zip(solutions.values, solutions.condition):
        if abs(zeta) < 1e-14:
            image = phi.at_infinity()
            if not np.isfinite(image):
                at_infinity += 1
                continue
        else:
            image = complex(phi(1.0 / np.conj(zeta)))
        values.append(image)
        cond.append(float(kappa))
    values_arr = np.array(values, dtype=complex)
    order = np.lexsort((values_arr.imag, values_arr.real)) if values_arr.size else np.zeros(0, dtype=int)
    return ReflectionSet(complex(t), values_arr[order], at_infinity, np.array(cond)[order])


def rdomain_branch_values(phi: RationalFn) -> np.ndarray:
    """Critical values of phi, where solutions of phi(zeta) = t collide."""
    crit_num = npoly.polysub(npoly.polymul(npoly.polyder(phi.num), phi.den),
                             npoly.polymul(phi.num, npoly.polyder(phi.den)))
    crit = polys.roots(crit_num)
    values = phi(crit) if crit.size else np.zeros(0, dtype=complex)
    return np.asarray(values[np.isfinite(values)], dtype=complex)


def boundary_residual(Q: HermitianBivarPoly, z: np.ndarray) -> float:
    """max_j |Q(z_j, conj z_j)| relative to the coefficient magnitude at z_j."""
    z = np.asarray(z, dtype=complex)
    values = np.abs(Q(z, np.conj(z)))
    scale = npoly.polyval2d(np.abs(z), np.abs(z), np.abs(Q.coeffs))
    return float(np.max(values / scale))


def implicitize_rdomain(phi: RationalFn, nodes: int = 256, radius: float = 1.0,
                        tol: float = 1e-8) -> HermitianBivarPoly:
    """
    Eliminate zeta from z q(zeta) - p(zeta) = 0 and w Qr(zeta) - Pr(zeta) = 0, where
    Pr, Qr are the reversed conjugate coefficient polynomials (w = phi#(1/zeta)).
    The resultant is sampled on a torus grid and interpolated with a 2D FFT.
    """
    n = phi.degree
    if n < 1:
        raise ValueError("conformal map must be non-constant")
    p = np.zeros(n + 1, dtype=complex)
    q = np.zeros(n + 1, dtype=complex)
    p[: phi.num.size] = phi.num
    q[: phi.den.size] = phi.den
    p_rev, q_rev = np.conj(p)[::-1], np.conj(q)[::-1]
    z_nodes = polys.circle_nodes(n + 1, radius)
    w_nodes = polys.circle_nodes(n + 1, radius)
    grid = np.empty((n + 1, n + 1), dtype=complex)
    for a, z in enumerate(z_nodes):
        first = z * q - p
        for b, w in enumerate(w_nodes):
            grid[a, b] = np.linalg.det(polys.sylvester(first, w * q_rev - p_rev))
    C = polys.interpolate_on_torus(grid, radius, radius)
    scale = np.max(np.abs(C))
    if scale < 1e-13:
        raise EliminationDegenerate("resultant vanishes identically", map=phi)
    C = C / scale
    # the resultant is Hermitian up to a unimodular factor; read it off the largest entry
    j, k = np.unravel_index(np.argmax(np.abs(C)), C.shape)
    phase = np.sqrt(C[j, k] / np.conj(C[k, j])) if C[k, j] != 0 else C[j, k] / abs(C[j, k])
    C = polys.trim2d(_hermitian_part(C / phase), 1e-12)
    C = C / np.max(np.abs(C))
    Q = HermitianBivarPoly(C)

    boundary = phi(np.exp(2j * np.pi * np.arange(nodes) / nodes))
    residual = boundary_residual(Q, boundary)
    if residual > tol:
        raise EliminationDegenerate("implicit equation does not vanish on the boundary",
                                    residual=residual, tol=tol)
    logger.debug("[algcurve] implicitized degree-%d map, boundary residual %.3g", n, residual)
    return Q


# trapping

@dataclass
class TrappingReport:
    roles: str
    samples: int
    seed: int
    sample_pass: int = 0
    sample_fail: int = 0
    boundary_pass: int = 0
    boundary_fail: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.sample_fail == 0 and self.boundary_fail == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "roles": self.roles,
            "samples": self.samples,
            "seed": self.seed,
            "sample_pass": self.sample_pass,
            "sample_fail": self.sample_fail,
            "boundary_pass": self.boundary_pass,
            "boundary_fail": self.boundary_fail,
            "passed": self.passed,
            "failures": self.failures,
        }


def _reflection_locations(sc, refl: ReflectionSet, tol: float) -> List[Location]:
    return locate_points(sc, refl.values, tol) + [Location.EXTERIOR] * refl.at_infinity


def trapping_check(target: Union[RationalFn, CurveSpec], samples: int = 100, seed: int = 0, N: int = 256,
                   roles: str = "interior", epsilon: Optional[float] = None,
                   max_failures: int = 20) -> TrappingReport:
    """
    Reflection trapping on sampled points and boundary nodes.

    roles="interior": exterior samples must reflect entirely inside, and each boundary
    node must have exactly one reflection on the boundary with the others inside.
    roles="exterior" swaps inside and outside (sample interior points, expect exterior reflections).
    A RationalFn target is reflected through phi(1/conj(zeta)); a curve spec through its Q.
    """
    if roles not in ("interior", "exterior"):
        raise ValueError(f"roles must be 'interior' or 'exterior', got {roles!r}")
    if isinstance(target, RationalFn):
        spec: CurveSpec = RationalMapImage(target)
        reflect: Callable[[complex], ReflectionSet] = lambda t: rdomain_reflections(target, t)
        avoid = rdomain_branch_values(target)
    else:
        spec = target
        Q = curve_polynomial(spec)
        reflect = lambda t: acr_values(Q, t)
        B = branch_points(Q)
        avoid = B.points()
    sc = sample_curve(spec, N)
    eps = epsilon if epsilon is not None else 1e-3 * sc.diameter
    tol = 1e-8 * max(1.0, sc.diameter)
    expect = Location.INTERIOR if roles == "interior" else Location.EXTERIOR
    sample_kind = Location.EXTERIOR if roles == "interior" else Location.INTERIOR
    report = TrappingReport(roles, samples, seed)
    rng = np.random.default_rng(seed)

    # rejection sampling in a disk around the curve
    center = sc.reference_point
    r_max = float(np.max(np.abs(sc.z - center)))
    margin = 0.05 * sc.diameter
    points: List[complex] = []
    for _ in range(200):
        if len(points) >= samples:
            break
        radius = 3 * r_max * np.sqrt(rng.uniform(size=4 * samples))
        cand = center + radius * np.exp(2j * np.pi * rng.uniform(size=radius.size))
        ok = boundary_distances(sc.z, cand) > margin
        if avoid.size:
            ok &= np.min(np.abs(cand[:, None] - avoid[None, :]), axis=1) > eps
        cand = cand[ok]
        locs = locate_points(sc, cand, tol)
        points.extend(c for c, loc in zip(cand, locs) if loc is sample_kind)
    if len(points) < samples:
        raise ValueError("could not draw enough sample points; region too thin")
    for t in points[:samples]:
        locs = _reflection_locations(sc, reflect(t), tol)
        if all(loc is expect for loc in locs):
            report.sample_pass += 1
        else:
            report.sample_fail += 1
            if len(report.failures) < max_failures:
                report.failures.append({"kind": "sample", "point": t, "locations": locs})

    node_idx = np.sort(rng.choice(sc.N, size=min(samples, sc.N), replace=False))
    for j in node_idx:
        locs = _reflection_locations(sc, reflect(sc.z[j]), tol)
        on_boundary = sum(loc is Location.BOUNDARY for loc in locs)
        rest_ok = all(loc is expect for loc in locs if loc is not Location.BOUNDARY)
        if on_boundary == 1 and rest_ok:
            report.boundary_pass += 1
        else:
            report.boundary_fail += 1
            if len(report.failures) < max_failures:
                report.failures.append({"kind": "boundary", "point": sc.z[j], "locations": locs})
    logger.info("[algcurve] trapping (%s roles): samples %d/%d, boundary %d/%d", roles,
                report.sample_pass, samples, report.boundary_pass, node_idx.size)
    return report
