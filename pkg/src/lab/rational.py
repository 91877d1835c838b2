# src/lab/rational.py
"""
Rational functions p/q with dense complex coefficients.
Used for conformal maps of R-domains, lemniscate functions and matching pairs.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List

import numpy as np
from numpy.polynomial import polynomial as npoly

from src.lab import polys

COPRIME_TOL = 1e-10


def _pairs(c: np.ndarray) -> List[List[float]]:
    return [[float(v.real), float(v.imag)] for v in c]


def _from_pairs(data: Iterable) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=complex)


@dataclass(frozen=True, eq=False)
class RationalFn:
    """
    num / den with ascending coefficient arrays.
    The degree is max(deg num, deg den); numerator and denominator must be coprime.
    """
    num: np.ndarray
    den: np.ndarray = field(default_factory=lambda: np.ones(1, dtype=complex))

    def __post_init__(self):
        num = polys.trim(self.num)
        den = polys.trim(self.den)
        if not np.any(den != 0):
            raise ValueError("denominator is identically zero")
        if not np.any(num != 0):
            num = np.zeros(1, dtype=complex)
        num.flags.writeable = False
        den.flags.writeable = False
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if num.size > 1 and den.size > 1:
            if abs(polys.resultant(num, den)) < COPRIME_TOL:
                raise ValueError("numerator and denominator share a zero (resultant vanishes)")

    # construction

    @classmethod
    def polynomial(cls, coeffs) -> "RationalFn":
        return cls(polys.as_coeffs(coeffs))

    @classmethod
    def from_roots(cls, zeros: Iterable[complex] = (), poles: Iterable[complex] = (),
                   scale: complex = 1.0) -> "RationalFn":
        zeros = list(zeros)
        poles = list(poles)
        num = npoly.polyfromroots(zeros) if zeros else np.ones(1)
        den = npoly.polyfromroots(poles) if poles else np.ones(1)
        return cls(scale * np.asarray(num, dtype=complex), np.asarray(den, dtype=complex))

    # structure

    @property
    def num_degree(self) -> int:
        return max(polys.degree(self.num), 0)

    @property
    def den_degree(self) -> int:
        return polys.degree(self.den)

    @property
    def degree(self) -> int:
        return max(self.num_degree, self.den_degree)

    @property
    def is_polynomial(self) -> bool:
        return self.den_degree == 0

    def zeros(self) -> np.ndarray:
        return polys.roots(self.num)

    def poles(self) -> np.ndarray:
        return polys.roots(self.den)

    def at_infinity(self) -> complex:
        """Value at infinity; complex('inf') when the numerator degree wins."""
        if self.num_degree > self.den_degree:
            return complex(np.inf, 0.0)
        if self.num_degree < self.den_degree:
            return 0j
        return complex(self.num[-1] / self.den[-1])

    # evaluation

    def __call__(self, z):
        return npoly.polyval(z, self.num) / npoly.polyval(z, self.den)

    def derivative(self, z, order: int = 1):
        """First or second derivative by the quotient rule."""
        p0, q0 = npoly.polyval(z, self.num), npoly.polyval(z, self.den)
        p1 = npoly.polyval(z, npoly.polyder(self.num)) if self.num.size > 1 else 0 * p0
        q1 = npoly.polyval(z, npoly.polyder(self.den)) if self.den.size > 1 else 0 * q0
        d1 = (p1 * q0 - p0 * q1) / q0 ** 2
        if order == 1:
            return d1
        if order != 2:
            raise ValueError("only first and second derivatives are supported")
        p2 = npoly.polyval(z, npoly.polyder(self.num, 2)) if self.num.size > 2 else 0 * p0
        q2 = npoly.polyval(z, npoly.polyder(self.den, 2)) if self.den.size > 2 else 0 * q0
        # f = p/q, f' = (p' - f q')/q, f'' = (p'' - 2 f' q' - f q'')/q
        f = p0 / q0
        return (p2 - 2 * d1 * q1 - f * q2) / q0

    # algebra

    def power(self, k: int) -> "RationalFn":
        if k < 0:
            raise ValueError("power must be non-negative")
        return RationalFn(npoly.polypow(self.num, k), npoly.polypow(self.den, k))

    def reciprocal_scaled(self, c2: float) -> "RationalFn":
        """c2 / self."""
        return RationalFn(c2 * self.den, self.num)

    def conjugate_coefficients(self) -> "RationalFn":
        """phi#(z) = conj(phi(conj z))."""
        return RationalFn(np.conj(self.num), np.conj(self.den))

    def normalized(self) -> "RationalFn":
        """Same function with a monic denominator."""
        lead = self.den[-1]
        return RationalFn(self.num / lead, self.den / lead)

    # serialisation

    def to_dict(self) -> Dict[str, Any]:
        return {"num": _pairs(self.num), "den": _pairs(self.den)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RationalFn":
        num = _from_pairs(data["num"])
        den = _from_pairs(data.get("den", [[1.0, 0.0]]))
        return cls(num, den)

    def __repr__(self) -> str:
        return f"RationalFn(num={np.round(self.num, 12).tolist()}, den={np.round(self.den, 12).tolist()})"
