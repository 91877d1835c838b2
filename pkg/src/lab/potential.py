# src/lab/potential.py
"""
Double layer potential on a sampled curve and its boundary operators.

    u(z) = (1/pi) * sum_k F_k Im(z'_k / (z_k - z)) dt
    Pi   = I + A,  A_jk = (dt/pi) Im(z'_k / (z_k - z_j)),  A_jj = (dt/pi) Im(z''_j / (2 z'_j))
    K    = (Pi - I) / 2,  J = Pi / 2

The kernel is smooth on analytic curves, so the periodic trapezoidal
Nystrom rule converges spectrally.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from src.lab import io as lab_io
from src.lab.curve import CurveSpec, SampledCurve, boundary_distances, sample_curve
from src.lab.errors import EigSolverFailure, SolveSingular, TooCloseToBoundary

logger = logging.getLogger(__name__)

GAP_SPACINGS = 5.0
COND_LIMIT = 1e12

OPERATOR_TAGS = ("Pi", "K", "J", "H")


@dataclass(frozen=True, eq=False)
class DensityGrid:
    curve: SampledCurve
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex, copy=True).ravel()
        if values.size != self.curve.N:
            raise ValueError(f"density has {values.size} values for a curve with N={self.curve.N}")
        if not np.all(np.isfinite(values)):
            raise ValueError("density has non-finite entries")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, sc: SampledCurve, fn) -> "DensityGrid":
        return cls(sc, fn(sc.z))

    def norm(self) -> float:
        return float(np.linalg.norm(self.values) / np.sqrt(self.values.size))

    def to_csv(self, path: Path) -> None:
        rows = zip(range(self.curve.N), self.curve.t, self.values.real, self.values.imag)
        lab_io.write_csv(path, ["j", "t", "re", "im"], rows)

    @classmethod
    def from_csv(cls, path: Path, sc: SampledCurve) -> "DensityGrid":
        rows = sorted(lab_io.read_csv(path), key=lambda r: int(r["j"]))
        return cls(sc, [complex(float(r["re"]), float(r["im"])) for r in rows])


def as_values(F: Union[DensityGrid, Sequence[complex], np.ndarray]) -> np.ndarray:
    if isinstance(F, DensityGrid):
        return F.values
    return np.asarray(F, dtype=complex)


@dataclass(frozen=True, eq=False)
class BoundaryOperator:
    matrix: np.ndarray
    tag: str
    curve: SampledCurve
    quadrature: str = "periodic trapezoidal Nystrom"

    def __post_init__(self):
        if self.tag not in OPERATOR_TAGS:
            raise ValueError(f"unknown operator tag {self.tag!r}")
        m = np.array(self.matrix, copy=True)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, F):
        return self.matrix @ as_values(F)


# assembly

def double_layer_matrix(sc: SampledCurve) -> np.ndarray:
    """A = Pi - I; real because the kernel is a real normal derivative."""
    diff = sc.z[None, :] - sc.z[:, None]
    np.fill_diagonal(diff, 1.0)
    A = np.imag(sc.dz[None, :] / diff)
    np.fill_diagonal(A, np.imag(sc.ddz / (2 * sc.dz)))
    return A * sc.dt / np.pi


def assemble_pi(sc: SampledCurve) -> BoundaryOperator:
    """Interior boundary-value operator of the double layer potential."""
    return BoundaryOperator(np.eye(sc.N) + double_layer_matrix(sc), "Pi", sc)


def _pi(source: Union[SampledCurve, BoundaryOperator]) -> BoundaryOperator:
    if isinstance(source, BoundaryOperator):
        if source.tag != "Pi":
            raise ValueError(f"expected a Pi operator, got {source.tag}")
        return source
    return assemble_pi(source)


def assemble_k(source: Union[SampledCurve, BoundaryOperator]) -> BoundaryOperator:
    pi = _pi(source)
    return BoundaryOperator((pi.matrix - np.eye(pi.curve.N)) / 2, "K", pi.curve)


def assemble_j(source: Union[SampledCurve, BoundaryOperator]) -> BoundaryOperator:
    pi = _pi(source)
    return BoundaryOperator(pi.matrix / 2, "J", pi.curve)


# evaluation

def gap_threshold(sc: SampledCurve) -> float:
    return GAP_SPACINGS * sc.node_spacing


def double_layer_eval_many(sc: SampledCurve, F, zs: Sequence[complex]) -> np.ndarray:
    """Trapezoidal double layer potential at off-curve probes."""
    values = as_values(F)
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    dist = boundary_distances(sc.z, zs)
    delta = gap_threshold(sc)
    if np.any(dist < delta):
        k = int(np.argmin(dist))
        raise TooCloseToBoundary("probe is within the near-singular gap of the curve",
                                 point=zs[k], distance=float(dist[k]), delta=delta)
    kernel = np.imag(sc.dz[None, :] / (sc.z[None, :] - zs[:, None]))
    return kernel @ values * sc.dt / np.pi


def double_layer_eval(sc: SampledCurve, F, z: complex) -> complex:
    return complex(double_layer_eval_many(sc, F, [z])[0])


def solve_dirichlet(sc: SampledCurve, f, pi: Optional[BoundaryOperator] = None) -> DensityGrid:
    """Density F with Pi F = f by a dense direct solve."""
    pi = pi if pi is not None else assemble_pi(sc)
    rhs = as_values(f)
    cond = np.linalg.cond(pi.matrix)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SolveSingular("Pi is numerically singular; K may have a nontrivial kernel", cond=cond)
    F = scipy.linalg.solve(pi.matrix, rhs)
    residual = float(np.max(np.abs(pi.matrix @ F - rhs)))
    logger.debug("[potential] dirichlet solve N=%d cond=%.3g residual=%.3g", sc.N, cond, residual)
    return DensityGrid(sc, F)


# spectra

@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    singular_values: np.ndarray
    tol_fixed: float
    N: int
    curve: str
    fixed_count: int = 0
    near_two: complex = 0j
    bands: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "curve": self.curve,
            "N": self.N,
            "tol_fixed": self.tol_fixed,
            "fixed_count": self.fixed_count,
            "near_two": self.near_two,
            "bands": self.bands,
            "smallest_singular_values": self.singular_values,
            "eigenvalues": self.eigenvalues,
        }

    def rows(self) -> List[tuple]:
        return [(k, lam.real, lam.imag, abs(lam - 1)) for k, lam in enumerate(self.eigenvalues)]


def spectrum(op: BoundaryOperator, tol_fixed: float = 1e-6, keep_singular: int = 16) -> SpectrumReport:
    """Eigenvalues of Pi sorted by distance to 1, plus the smallest singular values of Pi - I."""
    if op.tag != "Pi":
        raise ValueError(f"spectrum expects a Pi operator, got {op.tag}")
    try:
        eig = scipy.linalg.eigvals(op.matrix)
        sv = scipy.linalg.svdvals(op.matrix - np.eye(op.curve.N))
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise EigSolverFailure(f"dense eigensolver failed: {exc}", N=op.curve.N) from exc
    gaps = np.abs(eig - 1)
    eig = eig[np.lexsort((eig.imag, eig.real, np.round(gaps, 14)))]
    bands = {f"|lambda-1|<{t:g}": int(np.sum(np.abs(eig - 1) < t)) for t in (1e-10, 1e-6, 1e-3)}
    return SpectrumReport(
        eigenvalues=eig,
        singular_values=np.sort(sv)[:keep_singular],
        tol_fixed=tol_fixed,
        N=op.curve.N,
        curve=op.curve.spec.kind,
        fixed_count=int(np.sum(np.abs(eig - 1) < tol_fixed)),
        near_two=complex(eig[np.argmin(np.abs(eig - 2))]),
        bands=bands,
    )


# trigonometric densities

@dataclass(frozen=True, eq=False)
class TrigDensity:
    """Real sum_k a_k cos(kt) + b_k sin(kt), k = 1..degree; mean zero."""
    a: np.ndarray
    b: np.ndarray

    def __call__(self, t) -> np.ndarray:
        k = np.arange(1, self.a.size + 1)
        t = np.asarray(t, dtype=float)
        return np.cos(np.outer(t, k)) @ self.a + np.sin(np.outer(t, k)) @ self.b


def random_trig_density(rng: np.random.Generator, degree: int = 8) -> TrigDensity:
    """Gaussian coefficients scaled to unit mean-square norm."""
    a = rng.standard_normal(degree)
    b = rng.standard_normal(degree)
    scale = np.sqrt((np.sum(a ** 2) + np.sum(b ** 2)) / 2)
    return TrigDensity(a / scale, b / scale)


def fixed_point_residual(pi: BoundaryOperator, F) -> float:
    """||Pi F - F|| / ||F|| in the discrete 2-norm."""
    values = as_values(F)
    return float(np.linalg.norm(pi @ values - values) / np.linalg.norm(values))


# persistence of fixed points under refinement

PERSISTENCE_TOL = 1e-10


@dataclass
class PersistenceReport:
    levels: List[int]
    max_mode: int
    tol: float
    threshold: float
    singular_values: Dict[int, np.ndarray]
    null_counts: Dict[int, int]
    persistent_count: int
    refined_residual: float

    @property
    def persistent(self) -> bool:
        return self.persistent_count > 0 and self.refined_residual < self.threshold

    def to_dict(self) -> Dict[str, Any]:
        return {
            "levels": self.levels,
            "max_mode": self.max_mode,
            "tol": self.tol,
            "threshold": self.threshold,
            "smallest_singular_values": {str(n): s[:8] for n, s in self.singular_values.items()},
            "null_counts": {str(n): c for n, c in self.null_counts.items()},
            "persistent_count": self.persistent_count,
            "refined_residual": self.refined_residual,
            "persistent": self.persistent,
        }


def mode_basis(t: np.ndarray, max_mode: int) -> np.ndarray:
    """Columns exp(ikt)/sqrt(N) for k = -max_mode..-1, 1..max_mode."""
    modes = np.concatenate([np.arange(-max_mode, 0), np.arange(1, max_mode + 1)])
    return np.exp(1j * np.outer(t, modes)) / np.sqrt(t.size)


def fixed_point_persistence(spec: CurveSpec, levels: Sequence[int] = (128, 256, 512),
                            tol: float = PERSISTENCE_TOL, max_mode: int = 8) -> PersistenceReport:
    """
    Fixed points of Pi inside a fixed band of parameter modes, tracked across grids.

    Per level, the SVD of (Pi - I) restricted to the band counts near-null directions:
    singular values below tol * ||Pi||_2 of the coarsest level. Band truncations of
    eigenvectors with eigenvalues close to 1 sit well above that threshold.
    The persistent count is the minimum over levels; the null vectors of the coarsest
    level are re-tested on every finer grid.
    """
    levels = sorted(levels)
    svals: Dict[int, np.ndarray] = {}
    counts: Dict[int, int] = {}
    coarse_null = None
    threshold = tol
    refined = 0.0
    for N in levels:
        sc = sample_curve(spec, N)
        A = double_layer_matrix(sc)
        if coarse_null is None:
            threshold = tol * float(scipy.linalg.norm(np.eye(N) + A, 2))
        M = A @ mode_basis(sc.t, max_mode)
        _, s, vh = scipy.linalg.svd(M, full_matrices=False)
        svals[N] = s[::-1]
        counts[N] = int(np.sum(s < threshold))
        if coarse_null is None:
            coarse_null = vh[s < threshold].conj().T
        elif coarse_null.shape[1]:
            R = M @ coarse_null
            refined = max(refined, float(np.max(np.linalg.norm(R, axis=0))))
        logger.debug("[potential] persistence N=%d: %d band modes below %.3g", N, counts[N], threshold)
    persistent = min(counts.values()) if counts else 0
    return PersistenceReport(list(levels), max_mode, tol, threshold, svals, counts, persistent,
                             refined if persistent else float("inf"))
