# src/lab/sphere.py
"""
Newtonian kernel and the double layer kernel on the unit sphere in R^n, n >= 3.

On the sphere |y - x|^2 = -2 (y - x).x, so the double layer kernel is a
constant multiple of the Newtonian kernel. The sign of that constant
depends on the normal-derivative convention; it is measured and reported.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from src.lab.errors import CoincidentPoints, SingularPoint

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12


def _check_dimension(n: int) -> None:
    if n < 3:
        raise ValueError(f"dimension must be at least 3, got {n}")


def newtonian_E(x, n: int, c_n: float = 1.0) -> float:
    """c_n |x|^(2-n)."""
    _check_dimension(n)
    r = float(np.linalg.norm(np.asarray(x, dtype=float)))
    if r == 0:
        raise SingularPoint("Newtonian kernel is singular at the origin", n=n)
    return c_n * r ** (2 - n)


def _unit(p, n: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (n,):
        raise ValueError(f"expected a point in R^{n}, got shape {p.shape}")
    if abs(np.linalg.norm(p) - 1.0) > UNIT_TOL:
        raise ValueError("point is not on the unit sphere")
    return p


def dlp_kernel_sphere(x, y, n: int, c_n: float = 1.0) -> float:
    """k(x, y) = -(n-2) c_n (y - x).x / |y - x|^n for x, y on the unit sphere."""
    _check_dimension(n)
    x, y = _unit(x, n), _unit(y, n)
    d = y - x
    r = float(np.linalg.norm(d))
    if r == 0:
        raise CoincidentPoints("kernel is singular for coincident points", x=tuple(x))
    return -(n - 2) * c_n * float(d @ x) / r ** n


def random_sphere_pairs(n: int, trials: int, rng: np.random.Generator,
                        min_distance: float = 1e-8) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform pairs on the unit sphere, rejecting near-coincident ones."""
    xs, ys = [], []
    while len(xs) < trials:
        g = rng.standard_normal((2, trials, n))
        x = g[0] / np.linalg.norm(g[0], axis=1, keepdims=True)
        y = g[1] / np.linalg.norm(g[1], axis=1, keepdims=True)
        keep = np.linalg.norm(y - x, axis=1) > min_distance
        xs.extend(x[keep])
        ys.extend(y[keep])
    return np.array(xs[:trials]), np.array(ys[:trials])


@dataclass
class SphereReport:
    n: int
    trials: int
    seed: int
    ratio: float
    spread: float
    identity_residual: float
    expected_magnitude: float
    c_n: float = 1.0

    @property
    def sign(self) -> int:
        return int(np.sign(self.ratio))

    @property
    def magnitude_error(self) -> float:
        return abs(abs(self.ratio) - self.expected_magnitude)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "c_n": self.c_n,
            "ratio": self.ratio,
            "measured_sign": self.sign,
            "spread": self.spread,
            "identity_residual": self.identity_residual,
            "expected_magnitude": self.expected_magnitude,
            "magnitude_error": self.magnitude_error,
        }


def sphere_identity_check(n: int, trials: int = 1000, seed: int = 0, c_n: float = 1.0) -> SphereReport:
    """k/E over random pairs: constant across pairs, magnitude (n-2)/2, sign recorded as measured."""
    _check_dimension(n)
    rng = np.random.default_rng(seed)
    xs, ys = random_sphere_pairs(n, trials, rng)
    d = ys - xs
    r = np.linalg.norm(d, axis=1)
    dot = np.sum(d * xs, axis=1)
    identity = float(np.max(np.abs(r ** 2 + 2 * dot)))
    kernel = -(n - 2) * c_n * dot / r ** n
    E = c_n * r ** (2 - n)
    ratios = kernel / E
    ratio = float(np.mean(ratios))
    spread = float(np.max(ratios) - np.min(ratios))
    report = SphereReport(n, trials, seed, ratio, spread, identity, (n - 2) / 2, c_n)
    logger.info("[sphere] n=%d: k/E = %.15g (spread %.3g)", n, ratio, spread)
    return report
