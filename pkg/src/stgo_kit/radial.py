"""Radial profiles closed under (1/r d/dr), d/dr, and multiplication by powers.

A profile is a finite sum of atoms c * r^sigma * base(r) with base one of

    1                      (pure power)
    exp(-alpha r^2)        (Gaussian)
    khat_mu(alpha r)       (reduced Bessel, half-integral order mu, any sign)

plus an opaque sampled base for user-supplied functions.  The three closed
bases are stable under the operations the tensor-derivative machinery needs:

    (1/r d/dr) r^sigma            = sigma r^(sigma-2)
    (1/r d/dr) exp(-alpha r^2)    = -2 alpha exp(-alpha r^2)
    (1/r d/dr) khat_mu(alpha r)   = -alpha^2 khat_{mu-1}(alpha r)

so every derivative requested by the closed forms is exact.  Sampled bases
fall back to central finite differences in the variable u = r^2 (note
(1/r) d/dr = 2 d/du) with step eps^(1/(k+2)) scaled by u; accuracy degrades
with the order k as O(step^2) per documented scheme.
"""

from __future__ import annotations

import math

from .errors import CapabilityError, DomainError
from .findiff import fd_stencil
from .special import khat_half

_EPS = 2.0**-52
_MERGE_TOL = 1e-15

_POW = ("pow",)


class _SampledBase:
    """k-th derivative in u = r^2 of g(u) = fn(sqrt(u)) / u^(half_div/2), sampled."""

    __slots__ = ("fn", "k", "half_div", "max_derivative")

    def __init__(self, fn, k: int, half_div: int, max_derivative: int):
        self.fn = fn
        self.k = k
        self.half_div = half_div
        self.max_derivative = max_derivative

    def value(self, r: float) -> float:
        u = r * r

        def g(uu: float) -> float:
            if uu <= 0:
                raise DomainError("sampled profile derivative needs r bounded away from 0")
            return self.fn(math.sqrt(uu)) / uu ** (self.half_div / 2.0)

        if self.k == 0:
            return g(u)
        h = _EPS ** (1.0 / (self.k + 2)) * max(u, 1e-2)
        if u - ((self.k + 3) // 2) * h <= 0:
            h = 0.5 * u / ((self.k + 3) // 2)
        total = 0.0
        for offset, coeff in fd_stencil(self.k, 2):
            total += float(coeff) * g(u + offset * h)
        return 2.0**self.k * total / h**self.k


class _ProductBase:
    """Pointwise product of two profiles; evaluation only."""

    __slots__ = ("left", "right")

    def __init__(self, left: "RadialProfile", right: "RadialProfile"):
        self.left = left
        self.right = right

    def value(self, r: float) -> float:
        return self.left.value(r) * self.right.value(r)


class RadialProfile:
    """Finite sum of radial atoms; immutable, supports the derivative algebra."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = tuple(terms)

    # -- constructors ------------------------------------------------------

    @classmethod
    def power(cls, sigma, coeff=1.0) -> "RadialProfile":
        return cls(((complex(coeff), float(sigma), _POW),))

    @classmethod
    def gaussian(cls, alpha: float, coeff=1.0) -> "RadialProfile":
        if alpha <= 0:
            raise DomainError("gaussian profile needs alpha > 0")
        return cls(((complex(coeff), 0.0, ("gauss", float(alpha))),))

    @classmethod
    def reduced_bessel_half(cls, n: int, alpha: float, coeff=1.0) -> "RadialProfile":
        """khat_{n+1/2}(alpha r); negative n allowed through the order reflection."""
        if alpha <= 0:
            raise DomainError("reduced Bessel profile needs alpha > 0")
        return cls(((complex(coeff), 0.0, ("khat", 2 * n + 1, float(alpha))),))

    @classmethod
    def yukawa(cls, alpha: float, coeff=1.0) -> "RadialProfile":
        """exp(-alpha r)/r = alpha khat_{-1/2}(alpha r)."""
        if alpha <= 0:
            raise DomainError("yukawa profile needs alpha > 0")
        return cls(((complex(coeff) * alpha, 0.0, ("khat", -1, float(alpha))),))

    @classmethod
    def custom(cls, fn, max_derivative: int = 4) -> "RadialProfile":
        return cls(((1.0 + 0j, 0.0, _SampledBase(fn, 0, 0, max_derivative)),))

    @classmethod
    def zero(cls) -> "RadialProfile":
        return cls(())

    # -- algebra -----------------------------------------------------------

    def scaled(self, c) -> "RadialProfile":
        return RadialProfile(tuple((coeff * c, sigma, base) for coeff, sigma, base in self.terms))

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        return _merge(self.terms + other.terms)

    def times_power(self, s) -> "RadialProfile":
        s = float(s)
        return RadialProfile(tuple((coeff, sigma + s, base) for coeff, sigma, base in self.terms))

    def inv_r_ddr(self, k: int = 1) -> "RadialProfile":
        """Apply (1/r d/dr) k times."""
        prof = self
        for _ in range(k):
            prof = prof._inv_r_ddr_once()
        return prof

    def _inv_r_ddr_once(self) -> "RadialProfile":
        out = []
        for coeff, sigma, base in self.terms:
            if isinstance(base, _SampledBase):
                if sigma != 0.0:
                    raise CapabilityError(
                        "sampled profiles support derivatives only before power multiplication"
                    )
                if base.k + 1 > base.max_derivative:
                    raise CapabilityError(
                        f"sampled profile supports at most {base.max_derivative} derivatives"
                    )
                out.append((coeff, 0.0, _SampledBase(base.fn, base.k + 1, base.half_div, base.max_derivative)))
            elif isinstance(base, _ProductBase):
                raise CapabilityError("product profiles are evaluation-only")
            elif base == _POW:
                if sigma != 0.0:
                    out.append((coeff * sigma, sigma - 2.0, base))
            elif base[0] == "gauss":
                alpha = base[1]
                if sigma != 0.0:
                    out.append((coeff * sigma, sigma - 2.0, base))
                out.append((coeff * (-2.0 * alpha), sigma, base))
            elif base[0] == "khat":
                two_mu, alpha = base[1], base[2]
                if sigma != 0.0:
                    out.append((coeff * sigma, sigma - 2.0, base))
                out.append((coeff * (-alpha * alpha), sigma, ("khat", two_mu - 2, alpha)))
            else:
                raise CapabilityError(f"profile base {base!r} does not support derivatives")
        return _merge(tuple(out))

    def divided_by_power(self, p: int) -> "RadialProfile":
        """f(r) / r^p; for sampled bases the division is folded into the sample."""
        out = []
        for coeff, sigma, base in self.terms:
            if isinstance(base, _SampledBase):
                if base.k != 0:
                    raise CapabilityError("cannot re-divide a differentiated sampled profile")
                out.append((coeff, sigma, _SampledBase(base.fn, 0, base.half_div + p, base.max_derivative)))
            else:
                out.append((coeff, sigma - p, base))
        return RadialProfile(tuple(out))

    def ddr(self) -> "RadialProfile":
        """d/dr = r * (1/r d/dr)."""
        return self._inv_r_ddr_once().times_power(1.0)

    def product(self, other: "RadialProfile") -> "RadialProfile":
        """Pointwise product; closed-form where the bases combine, sampled otherwise."""
        out = []
        opaque = False
        for ca, sa, ba in self.terms:
            for cb, sb, bb in other.terms:
                combined = _combine_bases(ba, bb)
                if combined is None:
                    opaque = True
                    break
                out.append((ca * cb, sa + sb, combined))
            if opaque:
                break
        if opaque:
            return RadialProfile(((1.0 + 0j, 0.0, _ProductBase(self, other)),))
        return _merge(tuple(out))

    # -- evaluation --------------------------------------------------------

    def value(self, r: float):
        if r < 0:
            raise DomainError("radial argument must be >= 0")
        total = 0j
        for coeff, sigma, base in self.terms:
            if base == _POW:
                b = 1.0
            elif isinstance(base, tuple) and base[0] == "gauss":
                b = math.exp(-base[1] * r * r)
            elif isinstance(base, tuple) and base[0] == "khat":
                b = khat_half(base[1], base[2] * r)
            else:
                b = base.value(r)
            total += coeff * (r**sigma if sigma != 0.0 else 1.0) * b
        if abs(total.imag) <= 1e-300 or abs(total.imag) < 1e-14 * abs(total.real):
            return total.real
        return total

    def __call__(self, r: float):
        return self.value(r)

    @property
    def max_derivative(self):
        """Remaining derivative capability (None = unlimited, closed form)."""
        worst = None
        for _, _, base in self.terms:
            if isinstance(base, _SampledBase):
                cap = base.max_derivative - base.k
                worst = cap if worst is None else min(worst, cap)
            elif isinstance(base, _ProductBase):
                return 0
        return worst

    def __repr__(self):
        return f"RadialProfile({len(self.terms)} atoms)"


def _combine_bases(ba, bb):
    if ba == _POW:
        return bb if not isinstance(bb, (_SampledBase, _ProductBase)) else None
    if bb == _POW:
        return ba if not isinstance(ba, (_SampledBase, _ProductBase)) else None
    if isinstance(ba, tuple) and isinstance(bb, tuple) and ba[0] == "gauss" and bb[0] == "gauss":
        return ("gauss", ba[1] + bb[1])
    return None


def _merge(terms) -> "RadialProfile":
    """Merge like atoms; a bucket whose sum cancels below 1e-15 of its mass is dropped."""
    buckets: dict = {}
    opaque = []
    for coeff, sigma, base in terms:
        if isinstance(base, (_SampledBase, _ProductBase)):
            opaque.append((coeff, sigma, base))
            continue
        key = (base, sigma)
        acc, mass = buckets.get(key, (0j, 0.0))
        buckets[key] = (acc + coeff, mass + abs(coeff))
    out = []
    for (base, sigma), (acc, mass) in buckets.items():
        if abs(acc) > _MERGE_TOL * mass and acc != 0:
            out.append((acc, sigma, base))
    out.extend(opaque)
    return RadialProfile(tuple(out))
