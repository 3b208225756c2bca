import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wmvt.divdiff import divdiff_det, divdiff_recursive
from wmvt.expr import add, const, evaluate, jet_eval, mul, parse
from wmvt.nodes import normalize_nodes


def test_first_order_is_difference_quotient():
    f = parse("exp(x)*sin(x)")
    for x1, x2 in ((0.0, 1.0), (-0.5, 0.25)):
        expected = (evaluate(f, x2) - evaluate(f, x1)) / (x2 - x1)
        assert divdiff_det(f, (x1, x2)).value == pytest.approx(expected, rel=1e-12)
        assert divdiff_recursive(f, (x1, x2)).value == pytest.approx(expected, rel=1e-12)


def test_leading_coefficient_of_power():
    for k in range(1, 6):
        points = [(-1.0) ** i * (0.2 + 0.15 * i) for i in range(k + 1)]
        f = parse(f"x^{k}")
        assert divdiff_det(f, points).value == pytest.approx(1.0, rel=1e-9)
        assert divdiff_recursive(f, points).value == pytest.approx(1.0, rel=1e-11)


def test_cubic_at_three_points():
    # recursive oracle by hand: f[0,.5]=0.25, f[.5,1]=1.75, f[0,.5,1]=1.5
    f = parse("x^3")
    assert divdiff_recursive(f, (0.0, 0.5, 1.0)).value == pytest.approx(1.5)
    assert divdiff_det(f, (0.0, 0.5, 1.0)).value == pytest.approx(1.5, rel=1e-12)


def test_confluent_pair_gives_derivative():
    f = parse("x^2")
    assert divdiff_recursive(f, (1.0, 1.0)).value == pytest.approx(2.0)
    assert divdiff_det(f, (1.0, 1.0)).value == pytest.approx(2.0)


def test_exponential_difference():
    got = divdiff_recursive(parse("exp(x)"), (0.0, 1.0))
    assert got.value == pytest.approx(math.e - 1.0)
    assert got.order == 1
    assert got.method == "recursive"


def test_full_confluence_collapses_to_scaled_derivative():
    f = parse("sin(x)*exp(x)")
    for k in (1, 2, 3, 4):
        points = (0.3,) * (k + 1)
        expected = jet_eval(f, 0.3, k).derivative(k) / math.factorial(k)
        assert divdiff_det(f, points).value == pytest.approx(expected, rel=1e-11)
        assert divdiff_recursive(f, points).value == pytest.approx(expected, rel=1e-12)


def test_mixed_confluence_equivalence():
    f = parse("exp(x) - x^2/2")
    points = (0.0, 0.0, 0.4, 0.4, 0.4, 1.0)
    a = divdiff_det(f, points).value
    b = divdiff_recursive(f, points).value
    assert a == pytest.approx(b, rel=1e-10)


@given(st.permutations([0.0, 0.25, 0.25, 0.8, -0.4]))
def test_symmetry_under_permutation(points):
    f = parse("exp(x)")
    reference_rec = divdiff_recursive(f, (0.0, 0.25, 0.25, 0.8, -0.4)).value
    reference_det = divdiff_det(f, (0.0, 0.25, 0.25, 0.8, -0.4)).value
    assert divdiff_recursive(f, points).value == pytest.approx(reference_rec, rel=1e-12)
    assert divdiff_det(f, points).value == pytest.approx(reference_det, rel=1e-12)


def test_linearity_in_function():
    rng = random.Random(9)
    f, g = parse("sin(x)"), parse("exp(x)")
    points = (0.0, 0.3, 0.3, 0.9)
    ddf = divdiff_recursive(f, points).value
    ddg = divdiff_recursive(g, points).value
    for _ in range(10):
        alpha, beta = rng.uniform(-2, 2), rng.uniform(-2, 2)
        combo = add(mul(const(alpha), f), mul(const(beta), g))
        expected = alpha * ddf + beta * ddg
        assert divdiff_recursive(combo, points).value == pytest.approx(
            expected, rel=1e-12, abs=1e-12)
        assert divdiff_det(combo, points).value == pytest.approx(
            expected, rel=1e-10, abs=1e-10)


def test_wide_nodes_recenter_keeps_exactness():
    # spread > 10 triggers the centroid shift on both routes
    f = parse("x^2")
    points = (0.0, 50.0, 100.0)
    assert divdiff_det(f, points).value == pytest.approx(1.0, rel=1e-12)
    assert divdiff_recursive(f, points).value == pytest.approx(1.0, rel=1e-12)
    g = parse("exp(0.05*x)")
    a = divdiff_det(g, points).value
    b = divdiff_recursive(g, points).value
    assert a == pytest.approx(b, rel=1e-10)


def test_result_carries_node_system():
    dd = divdiff_det(parse("x^3"), (1.0, 0.0, 1.0))
    assert dd.nodes == normalize_nodes((1.0, 0.0, 1.0))
    assert dd.order == 2
    assert dd.method == "determinant_ratio"
