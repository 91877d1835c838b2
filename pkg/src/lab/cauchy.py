# src/lab/cauchy.py
"""
Cauchy integrals of boundary densities.

H maps F to the interior boundary values f_i of its Cauchy integral.
Principal values use singularity subtraction: with F_j removed the
integrand (F - F_j)/(zeta - z_j) dzeta is smooth, and its diagonal
value is F'(t_j), taken from the spectral derivative.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from src.lab.curve import Location, SampledCurve, locate_points
from src.lab.potential import BoundaryOperator, DensityGrid, as_values

logger = logging.getLogger(__name__)


def spectral_derivative_matrix(N: int, nyquist: float = 0.0) -> np.ndarray:
    """d/dt on N equispaced periodic samples; the Nyquist mode gets wavenumber `nyquist` (dropped by default)."""
    k = np.fft.fftfreq(N, d=1.0 / N)
    if N % 2 == 0:
        k[N // 2] = nyquist
    return np.fft.ifft(1j * k[:, None] * np.fft.fft(np.eye(N), axis=0), axis=0)


def cauchy_matrix(sc: SampledCurve) -> BoundaryOperator:
    """Matrix of H: (HF)_j = F_j + (dt/2 pi i) [sum_{k != j} (F_k - F_j) C_jk + F'(t_j)]."""
    diff = sc.z[None, :] - sc.z[:, None]
    np.fill_diagonal(diff, 1.0)
    C = sc.dz[None, :] / diff
    np.fill_diagonal(C, 0.0)
    C -= np.diag(C.sum(axis=1))
    scale = sc.dt / (2j * np.pi)
    # alternating mode taken as a negative frequency: H maps it to 0
    H = np.eye(sc.N) + scale * (C + spectral_derivative_matrix(sc.N, nyquist=-sc.N / 2))
    return BoundaryOperator(H, "H", sc)


def _operator(sc: SampledCurve, H: Optional[BoundaryOperator]) -> BoundaryOperator:
    return H if H is not None else cauchy_matrix(sc)


def cauchy_boundary_values(sc: SampledCurve, F, H: Optional[BoundaryOperator] = None
                           ) -> Tuple[DensityGrid, DensityGrid]:
    """(f_i, f_e) at the nodes; f_i - f_e = F holds by construction."""
    values = as_values(F)
    f_i = _operator(sc, H) @ values
    return DensityGrid(sc, f_i), DensityGrid(sc, f_i - values)


def hilbert_H(sc: SampledCurve, F, H: Optional[BoundaryOperator] = None) -> DensityGrid:
    return DensityGrid(sc, _operator(sc, H) @ F)


def hilbert_tilde(sc: SampledCurve, F, H: Optional[BoundaryOperator] = None) -> DensityGrid:
    """conj(H conj F)."""
    return DensityGrid(sc, np.conj(_operator(sc, H) @ np.conj(as_values(F))))


def pi_via_hilbert(sc: SampledCurve, F, H: Optional[BoundaryOperator] = None) -> DensityGrid:
    """Pi F = H F + conj(H conj F)."""
    H = _operator(sc, H)
    values = as_values(F)
    return DensityGrid(sc, H @ values + np.conj(H @ np.conj(values)))


def cauchy_eval(sc: SampledCurve, F, zs: Sequence[complex]) -> np.ndarray:
    """
    Off-curve Cauchy integral (1/2 pi i) int F(zeta)/(zeta - z) dzeta, subtracting the
    value at the nearest node so the trapezoidal rule stays accurate close to the curve.
    """
    values = as_values(F)
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    inside = np.array([loc is Location.INTERIOR for loc in locate_points(sc, zs, tol=0.0)])
    nearest = np.argmin(np.abs(zs[:, None] - sc.z[None, :]), axis=1)
    Fj = values[nearest]
    kernel = sc.dz[None, :] / (sc.z[None, :] - zs[:, None])
    remainder = np.sum((values[None, :] - Fj[:, None]) * kernel, axis=1) * sc.dt / (2j * np.pi)
    return np.where(inside, Fj, 0.0) + remainder


def extrapolation_weights(count: int) -> np.ndarray:
    """Lagrange weights taking values at h, 2h, ..., count*h to h = 0."""
    k = np.arange(1, count + 1, dtype=float)
    w = np.ones(count)
    for i in range(count):
        others = np.delete(k, i)
        w[i] = np.prod(others / (others - k[i]))
    return w


def plemelj_limits(sc: SampledCurve, F, nodes: Optional[Sequence[int]] = None, spacing: float = 2.0,
                   count: int = 6) -> Tuple[np.ndarray, np.ndarray]:
    """
    One-sided limits of the Cauchy integral at the chosen nodes, extrapolated from
    off-curve values at distances k*h (k = 1..count) along the normal, h = spacing
    times the local node spacing. Independent of the H matrix.
    """
    idx = np.arange(sc.N) if nodes is None else np.asarray(nodes, dtype=int)
    h = spacing * sc.speed[idx] * sc.dt
    steps = np.arange(1, count + 1)
    offsets = (h[:, None] * steps[None, :]) * sc.normal[idx][:, None]
    w = extrapolation_weights(count)
    inner = cauchy_eval(sc, F, (sc.z[idx][:, None] - offsets).ravel()).reshape(idx.size, count)
    outer = cauchy_eval(sc, F, (sc.z[idx][:, None] + offsets).ravel()).reshape(idx.size, count)
    return inner @ w, outer @ w
