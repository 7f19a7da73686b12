"""The plane curve y^q + y = x^m with |m - q| = 1.

Provides rational-point enumeration over F_{q^2}, the genus, and the
pole-order combinatorics at the unique point at infinity that drive both
dimension counts and monomial bases for the evaluation codes.

At the point at infinity, x has pole order q and y has pole order m, so the
monomial x^i y^j has pole order i*q + j*m.  Restricting j to [0, q-1] makes
those monomials a basis of the space of functions with poles only at
infinity of order at most s.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import FieldSpec

# A monomial exponent pair (i, j): x^i y^j, with 0 <= j <= q-1.
MonomialExponent = tuple[int, int]


@dataclass(frozen=True)
class CurveSpec:
    """Parameters of the curve y^q + y = x^m.

    The constraint |m - q| = 1 keeps the projective model non-singular; the
    genus is then (q - 1) * (m - 1) / 2, always an integer because q - 1 and
    m - 1 have opposite parities.
    """

    q: int
    m: int

    def __post_init__(self):
        if self.q < 2 or self.m < 2:
            raise ValueError("need q >= 2 and m >= 2")
        if abs(self.m - self.q) != 1:
            raise ValueError(f"|m - q| must be 1, got q={self.q}, m={self.m}")

    @property
    def genus(self) -> int:
        return (self.q - 1) * (self.m - 1) // 2


def genus(curve: CurveSpec) -> int:
    return curve.genus


def affine_points(curve: CurveSpec, field: FieldSpec) -> list[tuple[int, int]]:
    """All (x, y) in F_{q^2}^2 with y^q + y = x^m, as element-index pairs.

    Points are sorted by (index(x), index(y)) so generator matrices built on
    them are reproducible.  For m = q + 1 the count is exactly q^3.
    """
    if field.q_sub != curve.q:
        raise ValueError(
            f"field of order {field.order} is not the quadratic extension of F_{curve.q}"
        )
    idx = np.arange(field.order)
    lhs = field.add(field.pow(idx, curve.q), idx)  # y^q + y for every y
    rhs = field.pow(idx, curve.m)  # x^m for every x
    points = []
    for x in range(field.order):
        ys = np.nonzero(lhs == rhs[x])[0]
        points.extend((x, int(y)) for y in ys)
    return points


def rr_dimension(curve: CurveSpec, s: int) -> int:
    """Number of monomials x^i y^j with i*q + j*m <= s, 0 <= j < q, i >= 0.

    This is the dimension of the space of functions with pole order at most
    s at infinity; it returns 0 for negative s.
    """
    if s < 0:
        return 0
    total = 0
    for j in range(curve.q):
        rem = s - j * curve.m
        if rem < 0:
            break
        total += rem // curve.q + 1
    return total


def monomial_basis(curve: CurveSpec, s: int) -> list[MonomialExponent]:
    """Admissible (i, j) pairs sorted by pole order i*q + j*m, ties by j."""
    if s < 0:
        return []
    basis = []
    for j in range(curve.q):
        rem = s - j * curve.m
        if rem < 0:
            break
        basis.extend((i, j) for i in range(rem // curve.q + 1))
    basis.sort(key=lambda ij: (ij[0] * curve.q + ij[1] * curve.m, ij[1]))
    return basis


def pole_order(curve: CurveSpec, exp: MonomialExponent) -> int:
    return exp[0] * curve.q + exp[1] * curve.m


def gap_count(curve: CurveSpec, s_max: int) -> int:
    """Number of s in [1, s_max] where the dimension does not grow."""
    return sum(
        1 for s in range(1, s_max + 1) if rr_dimension(curve, s) == rr_dimension(curve, s - 1)
    )
