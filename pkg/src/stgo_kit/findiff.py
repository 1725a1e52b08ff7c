"""Central finite-difference stencils with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import DomainError


@lru_cache(maxsize=None)
def fd_stencil(d: int, order: int = 2) -> tuple:
    """Symmetric stencil for the d-th derivative, error O(h^order).

    Returns ((offset, coefficient), ...) with exact Fraction coefficients;
    apply as sum(c * f(x + offset*h)) / h**d.
    """
    if d < 0:
        raise DomainError("derivative order must be >= 0")
    if order not in (2, 4):
        raise DomainError("supported accuracy orders: 2, 4")
    if d == 0:
        return ((0, Fraction(1)),)
    n_nodes = 2 * ((d + 1) // 2) - 1 + order
    radius = (n_nodes - 1) // 2
    nodes = list(range(-radius, radius + 1))
    m = len(nodes)
    # moment matching: sum_j c_j j^k = d! * delta_{k,d}, k = 0..m-1
    aug = [[Fraction(node) ** k for node in nodes] for k in range(m)]
    rhs = [Fraction(0)] * m
    import math

    rhs[d] = Fraction(math.factorial(d))
    # Gaussian elimination, exact
    for col in range(m):
        piv = next(row for row in range(col, m) if aug[row][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        rhs[col] *= inv
        for row in range(m):
            if row != col and aug[row][col] != 0:
                f = aug[row][col]
                aug[row] = [a - f * b for a, b in zip(aug[row], aug[col])]
                rhs[row] -= f * rhs[col]
    return tuple((node, rhs[i]) for i, node in enumerate(nodes) if rhs[i] != 0)


def fd_derivative(fn, x: float, d: int, h: float, order: int = 2) -> float:
    """d-th derivative of a scalar function at x by central differences."""
    if d == 0:
        return fn(x)
    total = 0.0
    for offset, coeff in fd_stencil(d, order):
        total += float(coeff) * fn(x + offset * h)
    return total / h**d
