# src/lab/curve.py
"""
Analytic Jordan curves: specs, equispaced sampling, point location and
Jordan / univalence checks.

Orientation convention is counterclockwise with outward normal -i z'/|z'|.
Lemniscates {|R| = c} are traced by predictor-corrector continuation in
arg R, which gives an analytic, equispaced parametrisation directly.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from src.lab import io as lab_io
from src.lab import polys
from src.lab.errors import AmbiguousLocation, CuspDetected, JordanViolation, TraceFailure
from src.lab.rational import RationalFn

logger = logging.getLogger(__name__)

MIN_NODES = 16
SPEED_TOL = 1e-10
LEVEL_SET_GRID = 160
TRACE_STEPS_PER_TURN = 512
NEWTON_STEPS = 30


# curve specs

@dataclass(frozen=True)
class Circle:
    center: complex = 0j
    radius: float = 1.0
    kind: ClassVar[str] = "circle"

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Ellipse:
    a: float = 2.0
    b: float = 1.0
    kind: ClassVar[str] = "ellipse"

    def __post_init__(self):
        if not (self.a >= self.b > 0):
            raise ValueError(f"ellipse needs a >= b > 0, got a={self.a}, b={self.b}")


@dataclass(frozen=True, eq=False)
class Lemniscate:
    """Level set {|p/q| = c} with p monic with the given roots, q monic with the given poles."""
    roots: Tuple[complex, ...]
    c: float
    poles: Tuple[complex, ...] = ()
    kind: ClassVar[str] = "lemniscate"

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(complex(r) for r in self.roots))
        object.__setattr__(self, "poles", tuple(complex(p) for p in self.poles))
        if not self.roots:
            raise ValueError("lemniscate needs at least one root")
        if not self.c > 0:
            raise ValueError(f"lemniscate level must be positive, got {self.c}")

    @cached_property
    def function(self) -> RationalFn:
        return RationalFn.from_roots(self.roots, self.poles)


@dataclass(frozen=True, eq=False)
class RationalMapImage:
    map: RationalFn
    kind: ClassVar[str] = "rational_map"


CurveSpec = Union[Circle, Ellipse, Lemniscate, RationalMapImage]


def curve_from_dict(data: Dict[str, Any]) -> CurveSpec:
    kind = data.get("kind")
    if kind == Circle.kind:
        return Circle(lab_io.complex_from_json(data.get("center", 0.0)), float(data.get("radius", 1.0)))
    if kind == Ellipse.kind:
        return Ellipse(float(data["a"]), float(data["b"]))
    if kind == Lemniscate.kind:
        roots = [lab_io.complex_from_json(r) for r in data["roots"]]
        poles = [lab_io.complex_from_json(p) for p in data.get("poles", [])]
        return Lemniscate(tuple(roots), float(data["c"]), tuple(poles))
    if kind == RationalMapImage.kind:
        return RationalMapImage(RationalFn.from_dict(data["map"]))
    raise ValueError(f"unknown curve kind {kind!r}")


def curve_to_dict(spec: CurveSpec) -> Dict[str, Any]:
    if isinstance(spec, Circle):
        return {"kind": spec.kind, "center": spec.center, "radius": spec.radius}
    if isinstance(spec, Ellipse):
        return {"kind": spec.kind, "a": spec.a, "b": spec.b}
    if isinstance(spec, Lemniscate):
        return {"kind": spec.kind, "roots": list(spec.roots), "c": spec.c, "poles": list(spec.poles)}
    return {"kind": spec.kind, "map": spec.map.to_dict()}


# sampled curve

class Location(Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"
    BOUNDARY = "boundary"


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Equispaced-in-parameter trace; arrays are read-only after construction."""
    spec: CurveSpec
    t: np.ndarray
    z: np.ndarray
    dz: np.ndarray
    ddz: np.ndarray
    orientation: int = 1

    def __post_init__(self):
        for name in ("t", "z", "dz", "ddz"):
            arr = np.array(getattr(self, name), copy=True)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def N(self) -> int:
        return self.z.size

    @property
    def dt(self) -> float:
        return 2 * np.pi / self.N

    @cached_property
    def speed(self) -> np.ndarray:
        return np.abs(self.dz)

    @cached_property
    def normal(self) -> np.ndarray:
        return -1j * self.dz / self.speed

    @cached_property
    def curvature(self) -> np.ndarray:
        return np.imag(np.conj(self.dz) * self.ddz) / self.speed ** 3

    @cached_property
    def node_spacing(self) -> float:
        return float(np.max(self.speed) * self.dt)

    @cached_property
    def diameter(self) -> float:
        step = max(1, self.N // 512)
        pts = self.z[::step]
        return float(np.max(np.abs(pts[:, None] - pts[None, :])))

    @cached_property
    def reference_point(self) -> complex:
        return _reference_point(self.spec, self.z, self.dz)

    def arclength(self) -> float:
        return float(np.sum(self.speed) * self.dt)

    def signed_area(self) -> float:
        return _signed_area(self.z, self.dz)

    def rows(self) -> List[tuple]:
        return list(zip(self.t, self.z.real, self.z.imag, self.dz.real, self.dz.imag, self.curvature))


def _signed_area(z: np.ndarray, dz: np.ndarray) -> float:
    dt = 2 * np.pi / z.size
    return float(0.5 * np.sum(np.imag(np.conj(z) * dz)) * dt)


def _reverse(z: np.ndarray, dz: np.ndarray, ddz: np.ndarray):
    idx = (-np.arange(z.size)) % z.size
    return z[idx], -dz[idx], ddz[idx]


def orient(z: np.ndarray, dz: np.ndarray, ddz: np.ndarray):
    """Counterclockwise orientation; a no-op on traces that are already counterclockwise."""
    if _signed_area(z, dz) < 0:
        return _reverse(z, dz, ddz)
    return z, dz, ddz


def _check_node_count(N: int) -> None:
    if not isinstance(N, (int, np.integer)) or N < MIN_NODES or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a power of two >= {MIN_NODES}, got {N}")


def sample_curve(spec: CurveSpec, N: int) -> SampledCurve:
    """Sample spec at t_j = 2*pi*j/N with analytic derivatives, oriented counterclockwise."""
    _check_node_count(N)
    t = 2 * np.pi * np.arange(N) / N
    if isinstance(spec, Circle):
        e = np.exp(1j * t)
        z, dz, ddz = spec.center + spec.radius * e, 1j * spec.radius * e, -spec.radius * e
    elif isinstance(spec, Ellipse):
        z = spec.a * np.cos(t) + 1j * spec.b * np.sin(t)
        dz = -spec.a * np.sin(t) + 1j * spec.b * np.cos(t)
        ddz = -z
    elif isinstance(spec, RationalMapImage):
        check = check_univalent(spec.map, margin=1.01)
        if not check:
            raise JordanViolation(f"conformal map is not univalent: {check.reason}", map=spec.map)
        zeta = np.exp(1j * t)
        d1 = spec.map.derivative(zeta)
        d2 = spec.map.derivative(zeta, order=2)
        z = spec.map(zeta)
        dz = 1j * zeta * d1
        ddz = -zeta * d1 - zeta ** 2 * d2
    elif isinstance(spec, Lemniscate):
        check = check_jordan(spec, N)
        if not check:
            raise JordanViolation(f"lemniscate level set is not a Jordan curve: {check.reason}",
                                  roots=spec.roots, c=spec.c)
        z, dz, ddz = _trace_nodes(spec.function, spec.c, check.seed, check.turns, N)
    else:
        raise ValueError(f"unsupported curve spec {spec!r}")

    z, dz, ddz = orient(np.asarray(z, complex), np.asarray(dz, complex), np.asarray(ddz, complex))
    speed = np.abs(dz)
    if np.min(speed) < SPEED_TOL * max(np.mean(speed), 1.0):
        raise CuspDetected("speed vanishes on the trace", min_speed=float(np.min(speed)))
    if not polygon_is_simple(z):
        raise JordanViolation("traced curve self-intersects at this resolution", N=N)
    sc = SampledCurve(spec, t, z, dz, ddz)
    _ = sc.reference_point
    logger.debug("[curve] sampled %s with N=%d, length %.6g", spec.kind, N, sc.arclength())
    return sc


def _reference_point(spec: CurveSpec, z: np.ndarray, dz: np.ndarray) -> complex:
    candidates: List[complex] = []
    if isinstance(spec, Circle):
        candidates.append(spec.center)
    elif isinstance(spec, Ellipse):
        candidates.append(0j)
    elif isinstance(spec, Lemniscate):
        candidates.append(complex(np.mean(spec.roots)))
        candidates.extend(spec.roots)
    elif isinstance(spec, RationalMapImage):
        candidates.append(complex(spec.map(0j)))
    area = _signed_area(z, dz)
    dt = 2 * np.pi / z.size
    # centroid of the enclosed region by Green's theorem
    cx = np.sum(z.real ** 2 * dz.imag) * dt / (2 * area)
    cy = -np.sum(z.imag ** 2 * dz.real) * dt / (2 * area)
    candidates.append(complex(cx, cy))
    for cand in candidates:
        if abs(winding_numbers(z, np.array([cand]))[0] - 1.0) < 1e-6:
            return cand
    raise JordanViolation("no interior reference point with winding number +1")


# geometry primitives

def _cross(a, b):
    return np.imag(np.conj(a) * b)


def polygon_is_simple(z: np.ndarray, block: int = 256) -> bool:
    """True if the closed polygon through z has distinct vertices and no crossing edges."""
    z = np.asarray(z, dtype=complex)
    n = z.size
    P = z
    Q = np.roll(z, -1)
    D = Q - P
    scale = max(float(np.max(np.abs(D))), 1e-300)
    j = np.arange(n)
    for start in range(0, n, block):
        i = np.arange(start, min(n, start + block))
        Pi, Di = P[i, None], D[i, None]
        gap = (j[None, :] - i[:, None]) % n
        distinct = np.abs(P[None, :] - Pi) > 1e-12 * scale
        if not np.all(distinct | (gap == 0)):
            return False
        d1 = _cross(Di, P[None, :] - Pi)
        d2 = _cross(Di, Q[None, :] - Pi)
        d3 = _cross(D[None, :], Pi - P[None, :])
        d4 = _cross(D[None, :], Pi + Di - P[None, :])
        hit = (d1 * d2 < 0) & (d3 * d4 < 0) & (gap > 1) & (gap < n - 1)
        if hit.any():
            return False
    return True


def winding_numbers(z: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Winding number of the closed polygon z about each point (float, near-integer); NaN on a node."""
    z = np.asarray(z, dtype=complex)
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.empty(points.size)
    for start in range(0, points.size, 128):
        p = points[start:start + 128, None]
        a = z[None, :] - p
        b = np.roll(z, -1)[None, :] - p
        on_node = np.any(a == 0, axis=1)
        w = np.sum(np.angle(b / np.where(a == 0, 1.0, a)), axis=1) / (2 * np.pi)
        out[start:start + 128] = np.where(on_node, np.nan, w)
    return out


def boundary_distances(z: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Distance from each point to the node-interpolating polygon."""
    z = np.asarray(z, dtype=complex)
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    D = np.roll(z, -1) - z
    out = np.empty(points.size)
    for start in range(0, points.size, 128):
        p = points[start:start + 128, None]
        s = np.clip(np.real(np.conj(D)[None, :] * (p - z[None, :])) / np.abs(D)[None, :] ** 2, 0.0, 1.0)
        out[start:start + 128] = np.min(np.abs(p - (z[None, :] + s * D[None, :])), axis=1)
    return out


def locate_points(sc: SampledCurve, points: Sequence[complex], tol: float = 1e-8) -> List[Location]:
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    finite = np.isfinite(points)
    result: List[Optional[Location]] = [Location.EXTERIOR] * points.size
    if finite.any():
        idx = np.nonzero(finite)[0]
        dist = boundary_distances(sc.z, points[idx])
        wind = winding_numbers(sc.z, points[idx])
        for k, d, w in zip(idx, dist, wind):
            if d < tol:
                result[k] = Location.BOUNDARY
                continue
            wr = round(w)
            if abs(w - wr) > 1e-6 or wr not in (0, 1):
                raise AmbiguousLocation("winding number is neither 0 nor 1", point=points[k], winding=w)
            result[k] = Location.INTERIOR if wr == 1 else Location.EXTERIOR
    return result


def point_location(sc: SampledCurve, z: complex, tol: float = 1e-8) -> Location:
    """Boundary within tol of the node polygon, else Interior iff the winding number is 1."""
    return locate_points(sc, [z], tol)[0]


# lemniscate tracing

def _newton_level(R: RationalFn, target: complex, z: complex, scale: float) -> complex:
    for _ in range(NEWTON_STEPS):
        d = R.derivative(z)
        if abs(d) < 1e-12 * max(abs(target), 1.0) / scale:
            raise TraceFailure("derivative vanishes on the level set (near-critical level)", z=z)
        step = (R(z) - target) / d
        z = z - step
        if abs(step) < 1e-15 * max(abs(z), scale):
            return complex(z)
    if abs(R(z) - target) < 1e-10 * max(abs(target), 1.0):
        return complex(z)
    raise TraceFailure("Newton correction did not converge", z=z, target=target)


def _trace_component(R: RationalFn, c: float, seed: complex, scale: float,
                     steps_per_turn: int = TRACE_STEPS_PER_TURN, max_turns: int = 8):
    """Follow {|R| = c} from seed in increasing arg R until the trace closes."""
    value = R(seed)
    if not np.isfinite(value) or value == 0:
        raise TraceFailure("seed lies on a zero or pole", seed=seed)
    z0 = _newton_level(R, c * value / abs(value), seed, scale)
    phi0 = float(np.angle(R(z0)))
    dphi = 2 * np.pi / steps_per_turn
    z = z0
    path = [z0]
    for turn in range(1, max_turns + 1):
        for step in range(1, steps_per_turn + 1):
            phi = phi0 + dphi * ((turn - 1) * steps_per_turn + step)
            predictor = z + 1j * R(z) / R.derivative(z) * dphi
            z = _newton_level(R, c * np.exp(1j * phi), predictor, scale)
            path.append(z)
        if abs(z - z0) < 1e-8 * scale:
            return z0, turn, np.array(path[:-1])
    raise TraceFailure("level-set trace did not close", seed=seed, turns=max_turns)


def _trace_nodes(R: RationalFn, c: float, z0: complex, turns: int, N: int, substeps: int = 4):
    """N equispaced nodes with R(z(t)) = c * exp(i (phi0 + turns * t))."""
    scale = max(1.0, abs(z0))
    phi0 = float(np.angle(R(z0)))
    dphi = 2 * np.pi * turns / (N * substeps)
    z = z0
    nodes = np.empty(N, dtype=complex)
    nodes[0] = z0
    for j in range(1, N):
        for s in range(1, substeps + 1):
            phi = phi0 + dphi * ((j - 1) * substeps + s)
            predictor = z + 1j * R(z) / R.derivative(z) * dphi
            z = _newton_level(R, c * np.exp(1j * phi), predictor, scale)
        nodes[j] = z
    Rz = R(nodes)
    R1 = R.derivative(nodes)
    R2 = R.derivative(nodes, order=2)
    dz = 1j * turns * Rz / R1
    ddz = 1j * turns * dz * (1 - Rz * R2 / R1 ** 2)
    return nodes, dz, ddz


def _level_box(spec: Lemniscate) -> Tuple[complex, float]:
    pts = np.array(spec.roots + spec.poles, dtype=complex)
    center = complex(np.mean(spec.roots))
    spread = float(np.max(np.abs(pts - center)))
    excess = max(len(spec.roots) - len(spec.poles), 1)
    return center, 1.25 * (spread + spec.c ** (1.0 / excess)) + 0.1


def level_set_seeds(spec: Lemniscate, grid: int = LEVEL_SET_GRID) -> np.ndarray:
    """Points on grid edges where |R| - c changes sign, linearly interpolated."""
    center, half = _level_box(spec)
    axis = np.linspace(-half, half, grid)
    X, Y = np.meshgrid(axis, axis)
    Z = center + X + 1j * Y
    with np.errstate(divide="ignore", invalid="ignore"):
        V = np.abs(spec.function(Z)) - spec.c
    V = np.where(np.isfinite(V), V, 1.0)
    seeds = []
    for va, vb, za, zb in ((V[:, :-1], V[:, 1:], Z[:, :-1], Z[:, 1:]),
                           (V[:-1, :], V[1:, :], Z[:-1, :], Z[1:, :])):
        mask = (va * vb) < 0
        frac = va[mask] / (va[mask] - vb[mask])
        seeds.append(za[mask] + frac * (zb[mask] - za[mask]))
    return np.concatenate(seeds)


@dataclass
class JordanCheck:
    is_jordan: bool
    reason: str
    components: int
    turns: int = 0
    seed: complex = 0j

    def __bool__(self) -> bool:
        return self.is_jordan


def check_jordan(spec: Lemniscate, N: int = 256, grid: int = LEVEL_SET_GRID) -> JordanCheck:
    """
    Count level-set components from grid seeds, tracing each one.
    Certified only at the grid scale: components thinner than a grid cell can be missed.
    """
    if not spec.c > 0:
        raise ValueError("level must be positive")
    R = spec.function
    center, half = _level_box(spec)
    spacing = 2 * half / (grid - 1)
    max_turns = R.num_degree + R.den_degree + 1
    remaining = list(level_set_seeds(spec, grid))
    components = []
    while remaining:
        seed = remaining[0]
        z0, turns, path = _trace_component(R, spec.c, seed, scale=half, max_turns=max_turns)
        components.append((z0, turns, path))
        pts = np.array(remaining)
        dist = np.min(np.abs(pts[:, None] - path[None, :]), axis=1)
        keep = dist >= 2 * spacing
        keep[0] = False
        remaining = [p for p, k in zip(remaining, keep) if k]
    if not components:
        return JordanCheck(False, "level set is empty at grid resolution", 0)
    if len(components) > 1:
        logger.info("[curve] level |R|=%g has %d components", spec.c, len(components))
        return JordanCheck(False, f"{len(components)} components", len(components))
    z0, turns, path = components[0]
    if not polygon_is_simple(path):
        return JordanCheck(False, "traced component self-intersects", 1, turns, z0)
    return JordanCheck(True, "single simple component", 1, turns, z0)


@dataclass
class ThresholdReport:
    threshold: float
    critical_value_bound: float
    critical_points: List[complex] = field(default_factory=list)


def jordan_threshold(roots: Sequence[complex], poles: Sequence[complex] = (), lo: float = 1e-3,
                     hi: float = 1e3, iters: int = 40, N: int = 256) -> ThresholdReport:
    """
    Empirical smallest level making {|R| = c} a Jordan curve, by bisection on check_jordan.
    Reported next to the largest |R| over the finite critical points, which is not claimed sharp.
    """
    def is_jordan(c: float) -> bool:
        try:
            return bool(check_jordan(Lemniscate(tuple(roots), c, tuple(poles)), N))
        except TraceFailure:
            return False

    if not is_jordan(hi):
        raise ValueError(f"level {hi} is not Jordan; raise the upper bracket")
    for _ in range(iters):
        mid = float(np.sqrt(lo * hi))
        if is_jordan(mid):
            hi = mid
        else:
            lo = mid
    R = RationalFn.from_roots(roots, poles)
    crit_num = npoly.polysub(npoly.polymul(npoly.polyder(R.num), R.den),
                             npoly.polymul(R.num, npoly.polyder(R.den)))
    crit = polys.roots(crit_num)
    values = np.abs(R(crit)) if crit.size else np.zeros(1)
    return ThresholdReport(hi, float(np.max(values[np.isfinite(values)], initial=0.0)), list(crit))


# univalence of rational maps

@dataclass
class UnivalenceCheck:
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def check_univalent(phi: RationalFn, margin: float = 1.1, samples: int = 1024) -> UnivalenceCheck:
    """Numerical univalence of phi on the closed disk |zeta| <= margin."""
    if not margin > 1:
        raise ValueError("margin must exceed 1")
    poles = phi.poles()
    if poles.size and np.min(np.abs(poles)) <= margin:
        return UnivalenceCheck(False, f"pole at {poles[np.argmin(np.abs(poles))]:.6g} inside |zeta| <= {margin}")

    crit_num = npoly.polysub(npoly.polymul(npoly.polyder(phi.num), phi.den),
                             npoly.polymul(phi.num, npoly.polyder(phi.den)))
    if not np.any(np.abs(crit_num) > 0):
        return UnivalenceCheck(False, "map is constant")
    crit = polys.roots(crit_num)
    if crit.size and np.min(np.abs(crit)) <= margin:
        return UnivalenceCheck(False, f"derivative vanishes at {crit[np.argmin(np.abs(crit))]:.6g}")

    radii = np.linspace(0.0, margin, 48)
    angles = 2 * np.pi * np.arange(256) / 256
    grid = radii[:, None] * np.exp(1j * angles)[None, :]
    dmin = float(np.min(np.abs(phi.derivative(grid))))
    if dmin < 1e-10:
        return UnivalenceCheck(False, f"|phi'| grid minimum {dmin:.3g} is zero within tolerance")

    rim = phi(margin * np.exp(2j * np.pi * np.arange(samples) / samples))
    gaps = np.abs(rim[:, None] - rim[None, :])
    np.fill_diagonal(gaps, np.inf)
    if np.min(gaps) < 1e-9 * max(float(np.max(np.abs(rim))), 1.0):
        return UnivalenceCheck(False, "boundary image repeats a value")
    if not polygon_is_simple(rim):
        return UnivalenceCheck(False, "boundary image self-intersects")
    inner = phi(np.concatenate([[0j], 0.5 * margin * np.exp(1j * angles[::32]),
                                0.9 * margin * np.exp(1j * angles[::32])]))
    wind = winding_numbers(rim, inner)
    if not np.all(np.abs(wind - 1.0) <= 1e-6):
        return UnivalenceCheck(False, "boundary image does not wind once around interior images")
    return UnivalenceCheck(True, "univalent")


def circle_path(center: complex, radius: float, start_angle: float = 0.0, turns: int = 1,
                points: int = 256) -> np.ndarray:
    """Closed circular polyline starting and ending at center + radius * exp(i start_angle)."""
    theta = start_angle + 2 * np.pi * np.arange(points * turns + 1) / points
    return center + radius * np.exp(1j * theta)
