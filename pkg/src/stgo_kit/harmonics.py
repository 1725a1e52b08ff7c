"""Spherical harmonics and regular/irregular solid harmonics.

Phase convention: Y_l^m carries the prefactor i^(m+|m|) on the unit-normalized
associated-Legendre form, i.e. (-1)^m for m >= 0 and +1 for m < 0 (the
Condon-Shortley phase).  All coupling coefficients and addition theorems in
this package are tested under this single convention.

The regular solid harmonic is also available as an explicit homogeneous
harmonic polynomial in (x, y, z) with exact coefficients; that polynomial,
with partial derivatives substituted for the coordinates, is the Cartesian
form of the tensor gradient operator used by the oracles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, SingularityError

_SQRT4PI = math.sqrt(4.0 * math.pi)


@dataclass(frozen=True)
class LMIndex:
    """Angular momentum pair (l, m) with |m| <= l."""

    l: int
    m: int

    def __post_init__(self):
        if self.l < 0:
            raise DomainError(f"l must be >= 0, got {self.l}")
        if abs(self.m) > self.l:
            raise DomainError(f"|m| <= l violated: (l, m) = ({self.l}, {self.m})")


def _lm(idx) -> LMIndex:
    if isinstance(idx, LMIndex):
        return idx
    l, m = idx
    return LMIndex(int(l), int(m))


def as_vec3(r) -> np.ndarray:
    v = np.asarray(r, dtype=float)
    if v.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {v.shape}")
    return v


def _legendre_scaled(l: int, m: int, c: float) -> float:
    """P_l^m(cos theta) / sin^m(theta): a degree l-m polynomial in c = cos theta."""
    # p = P~_m^m = (2m-1)!!, then upward recurrence in degree.
    p = 1.0
    for i in range(1, m + 1):
        p *= 2 * i - 1
    if l == m:
        return p
    p1 = c * (2 * m + 1) * p
    if l == m + 1:
        return p1
    for ll in range(m + 2, l + 1):
        p, p1 = p1, ((2 * ll - 1) * c * p1 - (ll + m - 1) * p) / (ll - m)
    return p1


def _norm(l: int, m: int) -> float:
    am = abs(m)
    # exact ratio (never above 2l+1, so the float conversion cannot overflow)
    ratio = float(Fraction((2 * l + 1) * math.factorial(l - am), math.factorial(l + am)))
    return math.sqrt(ratio / (4.0 * math.pi))


def ylm(idx, theta: float, phi: float) -> complex:
    """Surface harmonic Y_l^m(theta, phi) under the package phase convention."""
    idx = _lm(idx)
    l, m = idx.l, idx.m
    am = abs(m)
    phase = 1j ** (m + am)  # (-1)^m for m >= 0, +1 for m < 0
    c = math.cos(theta)
    s = math.sin(theta)
    val = _legendre_scaled(l, am, c) * s**am
    return phase * _norm(l, m) * val * cmath.exp(1j * m * phi)


def regular_solid(idx, r) -> complex:
    """Regular solid harmonic: |r|^l Y_l^m of the direction of r; polynomial at r = 0."""
    idx = _lm(idx)
    v = as_vec3(r)
    l, m = idx.l, idx.m
    rr = math.sqrt(float(v @ v))
    if rr == 0.0:
        return complex(1.0 / _SQRT4PI) if l == 0 else 0.0j
    am = abs(m)
    # sin^|m| e^{i m phi} r^|m|  =  (x + i y)^m  (conjugate for m < 0); no acos round trip.
    xy = complex(v[0], v[1]) if m >= 0 else complex(v[0], -v[1])
    phase = 1j ** (m + am)
    return phase * _norm(l, m) * _legendre_scaled(l, am, v[2] / rr) * rr ** (l - am) * xy**am


def irregular_solid(idx, r) -> complex:
    """Irregular solid harmonic: |r|^(-l-1) Y_l^m, singular at the origin."""
    idx = _lm(idx)
    v = as_vec3(r)
    rr = math.sqrt(float(v @ v))
    if rr == 0.0:
        raise SingularityError("irregular solid harmonic is singular at r = 0")
    return regular_solid(idx, v) * rr ** (-2 * idx.l - 1)


class HarmonicPolynomial:
    """Homogeneous polynomial in (x, y, z) with exact Gaussian-rational coefficients.

    Every monomial coefficient is (re + i im) * scale with re, im Fractions and
    scale = sqrt(scale_num / pi) (or sqrt(scale_num) when over_pi is False), so
    the formal Laplacian can be checked in exact arithmetic while evaluation
    converts to complex floats once.
    """

    __slots__ = ("degree", "exact_terms", "scale_num", "over_pi", "_float_terms")

    def __init__(self, degree: int, exact_terms: dict, scale_num: Fraction = Fraction(1), over_pi: bool = False):
        self.degree = int(degree)
        self.exact_terms = {k: v for k, v in exact_terms.items() if v[0] != 0 or v[1] != 0}
        for (a, b, c) in self.exact_terms:
            if a + b + c != self.degree or min(a, b, c) < 0:
                raise DomainError(f"monomial {(a, b, c)} is not homogeneous of degree {self.degree}")
        self.scale_num = Fraction(scale_num)
        self.over_pi = bool(over_pi)
        self._float_terms = None

    @property
    def scale(self) -> float:
        num, den = self.scale_num.numerator, self.scale_num.denominator
        try:
            s = num / den
        except OverflowError:
            return math.exp(0.5 * (math.log(num) - math.log(den) - (math.log(math.pi) if self.over_pi else 0.0)))
        return math.sqrt(s / math.pi) if self.over_pi else math.sqrt(s)

    @property
    def terms(self) -> dict:
        """Monomial exponents -> complex coefficient (floats)."""
        if self._float_terms is None:
            s = self.scale
            self._float_terms = {
                k: complex(float(re) * s, float(im) * s) for k, (re, im) in self.exact_terms.items()
            }
        return self._float_terms

    @classmethod
    def from_terms(cls, terms: dict, degree: int | None = None) -> "HarmonicPolynomial":
        """Build from {(a,b,c): coefficient}; Fractions/ints stay exact, floats are embedded as-is."""
        exact = {}
        deg = None
        for key, coeff in terms.items():
            a, b, c = key
            if deg is None:
                deg = a + b + c
            if isinstance(coeff, complex):
                re, im = Fraction(coeff.real), Fraction(coeff.imag)
            elif isinstance(coeff, tuple):
                re, im = Fraction(coeff[0]), Fraction(coeff[1])
            else:
                re, im = Fraction(coeff), Fraction(0)
            exact[(a, b, c)] = (re, im)
        if degree is not None:
            deg = degree
        return cls(deg if deg is not None else 0, exact)

    def laplacian(self) -> "HarmonicPolynomial":
        """Formal Laplacian, exact; degree drops by two."""
        out: dict = {}
        for (a, b, c), (re, im) in self.exact_terms.items():
            for i, (ea, eb, ec) in enumerate(((a - 2, b, c), (a, b - 2, c), (a, b, c - 2))):
                e = (a, b, c)[i]
                if e < 2:
                    continue
                f = e * (e - 1)
                key = (ea, eb, ec)
                ore, oim = out.get(key, (Fraction(0), Fraction(0)))
                out[key] = (ore + f * re, oim + f * im)
        return HarmonicPolynomial(max(self.degree - 2, 0), out, self.scale_num, self.over_pi)

    def is_zero(self) -> bool:
        return not self.exact_terms

    def evaluate(self, r) -> complex:
        """Evaluate at a 3-vector; complex components are allowed (e.g. -i p)."""
        x, y, z = (complex(t) for t in r)
        total = 0j
        for (a, b, c), coeff in self.terms.items():
            total += coeff * x**a * y**b * z**c
        return total

    def monomials(self):
        """Iterate (a, b, c, complex coefficient)."""
        for key, coeff in self.terms.items():
            yield key[0], key[1], key[2], coeff


def laplacian_check(p: HarmonicPolynomial) -> bool:
    """True iff the formal Laplacian of p vanishes identically (exact arithmetic)."""
    return p.laplacian().is_zero()


@lru_cache(maxsize=None)
def regular_solid_poly(l: int, m: int) -> HarmonicPolynomial:
    """Exact monomial expansion of the regular solid harmonic of index (l, m).

    The k-sum runs over k with m + k >= 0 and l - m - 2k >= 0; the binomial
    expansion of (-x - iy)^(m+k) (x - iy)^k z^(l-m-2k) is carried out in
    Gaussian-rational arithmetic under the common factor
    sqrt((2l+1)(l+m)!(l-m)! / (4 pi)).
    """
    idx = LMIndex(l, m)
    l, m = idx.l, idx.m
    terms: dict = {}

    def add(key, val: Fraction, quarter_turns: int):
        # val * i^quarter_turns
        q = quarter_turns % 4
        re, im = terms.get(key, (Fraction(0), Fraction(0)))
        if q == 0:
            re += val
        elif q == 1:
            im += val
        elif q == 2:
            re -= val
        else:
            im -= val
        terms[key] = (re, im)

    for k in range(0, l + 1):
        e1, e2, e3 = m + k, k, l - m - 2 * k
        if e1 < 0 or e3 < 0:
            continue
        base = Fraction(1, 2 ** (m + 2 * k) * math.factorial(e1) * math.factorial(k) * math.factorial(e3))
        # (-x - iy)^e1 (x - iy)^e2 = (-1)^e1 sum_{a1, a2} C(e1,a1) C(e2,a2)
        #   x^(a1+a2) (iy)^(e1-a1) (-iy)^(e2-a2)
        for a1 in range(e1 + 1):
            for a2 in range(e2 + 1):
                c = base * math.comb(e1, a1) * math.comb(e2, a2)
                if (e1 + (e2 - a2)) % 2:
                    c = -c
                quarter = (e1 - a1) + (e2 - a2)
                add((a1 + a2, (e1 - a1) + (e2 - a2), e3), c, quarter)

    scale_num = Fraction((2 * l + 1) * math.factorial(l + m) * math.factorial(l - m), 4)
    return HarmonicPolynomial(l, terms, scale_num, over_pi=True)


def ylm_table(l_max: int, directions: np.ndarray) -> np.ndarray:
    """All Y_l^m on an array of unit directions, vectorized.

    Returns a complex array of shape (l_max+1, 2*l_max+1, n) indexed
    [l, m + l_max, i].  Entries with |m| > l are zero.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    if dirs.shape[-1] != 3:
        raise DomainError("directions must have shape (n, 3)")
    n = dirs.shape[0]
    x, y, z = dirs[:, 0], dirs[:, 1], dirs[:, 2]
    rr = np.sqrt(x * x + y * y + z * z)
    c = z / rr
    expp = (x + 1j * y) / rr  # sin(theta) e^{i phi}
    out = np.zeros((l_max + 1, 2 * l_max + 1, n), dtype=complex)

    # scaled Legendre values via the same recurrences, vectorized over points
    p_mm = np.ones(n)
    epow = np.ones(n, dtype=complex)
    for m in range(0, l_max + 1):
        if m > 0:
            p_mm = p_mm * (2 * m - 1)
            epow = epow * expp
        p_prev = p_mm.copy()
        p_curr = c * (2 * m + 1) * p_mm if m < l_max else None
        for l in range(m, l_max + 1):
            if l == m:
                val = p_prev
            elif l == m + 1:
                val = p_curr
            else:
                p_prev, p_curr = p_curr, ((2 * l - 1) * c * p_curr - (l + m - 1) * p_prev) / (l - m)
                val = p_curr
            nrm = _norm(l, m)
            base = nrm * val * epow  # includes sin^m e^{im phi}
            out[l, m + l_max] = ((-1) ** m) * base
            if m > 0:
                out[l, -m + l_max] = np.conj(base)  # i^{m+|m|} = 1 for m < 0
    return out
