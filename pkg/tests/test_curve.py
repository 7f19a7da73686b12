import numpy as np
import pytest

from agqec.curve import CurveSpec, affine_points, gap_count, genus, monomial_basis, pole_order, rr_dimension
from agqec.gf import build_field


@pytest.fixture(scope="module")
def c3():
    return CurveSpec(3, 4)


@pytest.fixture(scope="module")
def c5():
    return CurveSpec(5, 6)


def test_genus_values(c3, c5):
    assert genus(c3) == 3
    assert genus(c5) == 10
    assert genus(CurveSpec(2, 3)) == 1  # smallest admissible case


def test_curve_validation():
    with pytest.raises(ValueError):
        CurveSpec(3, 6)
    with pytest.raises(ValueError):
        CurveSpec(3, 1)


def test_point_counts(c3, c5):
    f9 = build_field(3, 2)
    pts = affine_points(c3, f9)
    assert len(pts) == 27
    # exhaustive scan oracle over all 81 pairs
    brute = [
        (x, y)
        for x in range(9)
        for y in range(9)
        if f9.add(f9.pow(y, 3), y) == f9.pow(x, 4)
    ]
    assert pts == brute  # same ordering: ascending (x index, y index)
    assert len(affine_points(c5, build_field(5, 2))) == 125


def test_points_with_x_zero(c3):
    f9 = build_field(3, 2)
    pts = affine_points(c3, f9)
    assert (0, 0) in pts
    assert sum(1 for x, _ in pts if x == 0) == 3  # roots of y^3 + y over F_9


def test_m_smaller_branch_points():
    # q = 3, m = 2 is the other |m - q| = 1 branch; only x with x^2 in F_3
    # admit solutions, giving 5 * 3 = 15 points.
    f9 = build_field(3, 2)
    pts = affine_points(CurveSpec(3, 2), f9)
    assert len(pts) == 15


def test_field_curve_mismatch(c3):
    with pytest.raises(ValueError):
        affine_points(c3, build_field(5, 2))
    with pytest.raises(ValueError):
        affine_points(c3, build_field(3, 1))


def test_rr_dimension_examples(c3):
    assert rr_dimension(c3, 9) == 7
    assert rr_dimension(c3, 7) == 5
    assert rr_dimension(c3, 0) == 1
    assert rr_dimension(c3, -4) == 0


def test_rr_dimension_against_brute_force(c3, c5):
    def brute(curve, s):
        return sum(
            1
            for j in range(curve.q)
            for i in range(s + 1)
            if i * curve.q + j * curve.m <= s
        )

    for curve in (c3, c5):
        for s in range(0, 3 * curve.q**2):
            assert rr_dimension(curve, s) == brute(curve, s)


def test_monomial_basis_examples(c3, c5):
    assert monomial_basis(c3, 9) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0)]
    assert [pole_order(c3, e) for e in monomial_basis(c3, 9)] == [0, 3, 4, 6, 7, 8, 9]
    assert monomial_basis(c3, 2) == [(0, 0)]
    assert monomial_basis(c5, 4) == [(0, 0)]
    for s in range(40):
        assert len(monomial_basis(c3, s)) == rr_dimension(c3, s)


def test_pole_orders_distinct(c3, c5):
    for curve in (c3, c5):
        s = 3 * curve.q**2
        orders = [pole_order(curve, e) for e in monomial_basis(curve, s)]
        assert len(orders) == len(set(orders))
        assert orders == sorted(orders)


def test_riemann_roch_regime_and_gaps(c3, c5):
    for curve in (c3, c5):
        g = curve.genus
        for s in range(2 * g - 1, 3 * curve.q**2 + 1):
            assert rr_dimension(curve, s) == s - g + 1
        assert gap_count(curve, 3 * curve.q**2) == g
