# src/lab/polys.py
"""
Dense polynomial helpers shared by the rational and algebraic-curve code.

Univariate coefficients are ascending numpy arrays (c[k] multiplies z**k).
Bivariate coefficients are 2D arrays, C[j, k] multiplies z**j * w**k.
"""
import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d


def as_coeffs(values) -> np.ndarray:
    c = np.atleast_1d(np.asarray(values, dtype=complex))
    if c.ndim != 1:
        raise ValueError("coefficient array must be one-dimensional")
    return c


def trim(c: np.ndarray, rel_tol: float = 0.0) -> np.ndarray:
    """Drop trailing (highest-degree) coefficients that are zero or below rel_tol * max|c|."""
    c = as_coeffs(c)
    scale = np.max(np.abs(c)) if c.size else 0.0
    cutoff = rel_tol * scale
    last = c.size - 1
    while last > 0 and abs(c[last]) <= cutoff:
        last -= 1
    return c[: last + 1].copy()


def degree(c: np.ndarray, rel_tol: float = 0.0) -> int:
    t = trim(c, rel_tol)
    if t.size == 1 and t[0] == 0:
        return -1
    return t.size - 1


def sylvester(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two ascending coefficient arrays, degrees taken from their lengths."""
    a = as_coeffs(a)
    b = as_coeffs(b)
    m, n = a.size - 1, b.size - 1
    size = m + n
    S = np.zeros((size, size), dtype=complex)
    ad, bd = a[::-1], b[::-1]
    for i in range(n):
        S[i, i:i + m + 1] = ad
    for i in range(m):
        S[n + i, i:i + n + 1] = bd
    return S


def resultant(a: np.ndarray, b: np.ndarray, normalize: bool = True) -> complex:
    """
    Resultant via the Sylvester determinant.
    With normalize=True both inputs are scaled to unit max-coefficient first,
    which makes the value usable as a coprimality indicator.
    """
    a = as_coeffs(a)
    b = as_coeffs(b)
    if normalize:
        a = a / max(np.max(np.abs(a)), np.finfo(float).tiny)
        b = b / max(np.max(np.abs(b)), np.finfo(float).tiny)
    if a.size == 1 and b.size == 1:
        return complex(1.0)
    if a.size == 1:
        return complex(a[0] ** (b.size - 1))
    if b.size == 1:
        return complex(b[0] ** (a.size - 1))
    return complex(np.linalg.det(sylvester(a, b)))


def roots(c: np.ndarray) -> np.ndarray:
    """All roots by companion-matrix eigenvalues (numpy's polyroots)."""
    c = trim(as_coeffs(c))
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    return np.asarray(npoly.polyroots(c), dtype=complex)


def circle_nodes(count: int, radius: float) -> np.ndarray:
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def interpolate_on_circle(values: np.ndarray, radius: float) -> np.ndarray:
    """Coefficients of the polynomial whose values at circle_nodes(len(values), radius) are given."""
    values = np.asarray(values, dtype=complex)
    count = values.size
    powers = radius ** np.arange(count)
    return np.fft.fft(values) / (count * powers)


def interpolate_on_torus(values: np.ndarray, radius_z: float, radius_w: float) -> np.ndarray:
    """2D analogue of interpolate_on_circle; values[j, k] sampled at (z_j, w_k)."""
    values = np.asarray(values, dtype=complex)
    mz, mw = values.shape
    coeffs = np.fft.fft2(values) / (mz * mw)
    coeffs /= (radius_z ** np.arange(mz))[:, None]
    coeffs /= (radius_w ** np.arange(mw))[None, :]
    return coeffs


def polymul2d(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return convolve2d(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def polypow2d(a: np.ndarray, k: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(k):
        out = polymul2d(out, a)
    return out


def polyadd2d(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    rows = max(a.shape[0], b.shape[0])
    cols = max(a.shape[1], b.shape[1])
    out = np.zeros((rows, cols), dtype=complex)
    out[: a.shape[0], : a.shape[1]] += a
    out[: b.shape[0], : b.shape[1]] += b
    return out


def trim2d(C: np.ndarray, rel_tol: float = 0.0) -> np.ndarray:
    """Drop all-negligible trailing rows and columns."""
    C = np.asarray(C, dtype=complex)
    cutoff = rel_tol * (np.max(np.abs(C)) if C.size else 0.0)
    mask = np.abs(C) > cutoff
    if not mask.any():
        return np.zeros((1, 1), dtype=complex)
    rows = np.nonzero(mask.any(axis=1))[0].max() + 1
    cols = np.nonzero(mask.any(axis=0))[0].max() + 1
    out = C[:rows, :cols].copy()
    out[~mask[:rows, :cols]] = 0.0
    return out


def bivar_eval(C: np.ndarray, z, w):
    return npoly.polyval2d(z, w, C)


def square_pad(C: np.ndarray) -> np.ndarray:
    size = max(C.shape)
    out = np.zeros((size, size), dtype=complex)
    out[: C.shape[0], : C.shape[1]] = C
    return out
