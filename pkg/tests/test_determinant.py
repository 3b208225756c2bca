import math
import random

import numpy as np
import pytest

from wmvt.determinant import (AnchoredSystem, assemble_matrix,
                              coincident_dets, det_cofactor, lu_det,
                              regularity_check, w_det, wronskian_at)
from wmvt.errors import DimensionError
from wmvt.expr import const, evaluate, mul, parse, taylor_monomials
from wmvt.nodes import normalize_nodes


def _system(m, k, funcs, anchors=(), interval=(-1.0, 1.0)):
    return AnchoredSystem(m, k, funcs, anchors, interval)


# -- assembly ----------------------------------------------------------------

def test_assemble_distinct_nodes():
    sys_ = _system(0, 2, (parse("1"), parse("x")))
    got = assemble_matrix(sys_, (), (), normalize_nodes((0.25, 0.75)))
    assert got.tolist() == [[1.0, 1.0], [0.25, 0.75]]


def test_assemble_confluent_pair():
    sys_ = _system(0, 2, (parse("1"), parse("x")))
    got = assemble_matrix(sys_, (), (), normalize_nodes((0.25, 0.25)))
    # second column is the first-derivative column
    assert got.tolist() == [[1.0, 0.0], [0.25, 1.0]]


def test_assemble_anchored_single_node():
    w1, w2 = parse("exp(x)"), parse("sin(x)")
    sys_ = _system(1, 1, (w1, w2), ((2.0,), (-1.0,)), (0.0, 1.0))
    got = assemble_matrix(sys_, (), (), normalize_nodes((0.5,)))
    assert got.tolist() == [[2.0, evaluate(w1, 0.5)], [-1.0, evaluate(w2, 0.5)]]


def test_assemble_dimension_mismatch():
    sys_ = _system(0, 2, (parse("1"), parse("x")))
    with pytest.raises(DimensionError):
        assemble_matrix(sys_, (), (), normalize_nodes((0.0, 0.5, 1.0)))
    with pytest.raises(DimensionError):
        assemble_matrix(sys_, (parse("x^2"),), (), normalize_nodes((0.0, 0.5)))


def test_anchored_system_validation():
    with pytest.raises(DimensionError):
        AnchoredSystem(1, 1, (parse("1"), parse("x")), ((1.0,),), (0.0, 1.0))
    with pytest.raises(DimensionError):
        AnchoredSystem(1, 1, (parse("1"), parse("x")), ((1.0, 2.0), (0.5,)), (0.0, 1.0))
    with pytest.raises(ValueError):
        AnchoredSystem(0, 1, (parse("1"),), (), (1.0, 1.0))


# -- determinant values --------------------------------------------------------

def test_scaled_power_identity_all_orders():
    # bordered scaled powers keep unit determinant at any coincident point
    for k in range(1, 6):
        sys_ = _system(0, k, taylor_monomials(0.0, k))
        for xi in (-0.7, 0.1, 0.9):
            res = w_det(sys_, (), (), normalize_nodes((xi,) * k))
            assert res.value == pytest.approx(1.0, rel=1e-12)


def test_bordered_scaled_powers_closed_forms():
    # bordering the scaled-power basis gives the Taylor remainder pieces:
    # at nodes (a,..,a,x) the determinant is f(x) minus the degree k-1
    # expansion, with g = (x-a)^k/k! it is exactly that power, and at a
    # coincident point the f-bordered value is the raw k-th derivative
    a, x, k = 0.2, 1.1, 3
    basis = taylor_monomials(a, k + 1)
    sys_ = _system(0, k, basis[:k], interval=(a, x))
    f = parse("exp(x)*cos(x)")
    ns = normalize_nodes((a,) * k + (x,))
    from wmvt.expr import jet_eval

    coeffs = jet_eval(f, a, k - 1).coeffs
    expansion = sum(c * (x - a) ** i for i, c in enumerate(coeffs))
    got_f = w_det(sys_, (f,), ((),), ns).value
    assert got_f == pytest.approx(evaluate(f, x) - expansion, rel=1e-12)
    got_g = w_det(sys_, (basis[k],), ((),), ns).value
    assert got_g == pytest.approx((x - a) ** k / 6.0, rel=1e-12)
    xi = 0.77
    ns_xi = normalize_nodes((xi,) * (k + 1))
    assert w_det(sys_, (f,), ((),), ns_xi).value == pytest.approx(
        jet_eval(f, xi, k).derivative(k), rel=1e-12)
    assert w_det(sys_, (basis[k],), ((),), ns_xi).value == pytest.approx(1.0,
                                                                         rel=1e-12)


def test_two_by_two_difference():
    sys_ = _system(0, 2, (parse("1"), parse("x^2")), interval=(0.0, 2.0))
    res = w_det(sys_, (), (), normalize_nodes((0.0, 2.0)))
    assert res.value == pytest.approx(4.0)
    assert res.condition_estimate >= 1.0


def test_wronskian_examples():
    assert wronskian_at(taylor_monomials(0.0, 3), 0.45) == pytest.approx(1.0, rel=1e-12)
    # |sin cos; sin' cos'| = -sin^2 - cos^2 = -1 at any point
    assert wronskian_at((parse("sin(x)"), parse("cos(x)")), 0.0) == pytest.approx(-1.0)
    assert wronskian_at((parse("sin(x)"), parse("cos(x)")), 0.8) == pytest.approx(-1.0)
    assert wronskian_at((parse("x"), parse("x")), 0.3) == 0.0


def test_row_swap_negates_value():
    rng = random.Random(3)
    funcs = (parse("exp(x)"), parse("sin(x)"), parse("x^2"))
    anchors = ((1.0,), (0.2,), (-0.5,))
    ns = normalize_nodes((0.1, 0.7))
    base = w_det(_system(1, 2, funcs, anchors, (0.0, 1.0)), (), (), ns).value
    swapped = w_det(_system(1, 2, (funcs[1], funcs[0], funcs[2]),
                            (anchors[1], anchors[0], anchors[2]), (0.0, 1.0)),
                    (), (), ns).value
    assert swapped == pytest.approx(-base, rel=1e-12)


def test_scaling_one_row_scales_value():
    funcs = (parse("exp(x)"), parse("sin(x)"), parse("x^2"))
    ns = normalize_nodes((0.1, 0.4, 0.9))
    sys_ = _system(0, 3, funcs)
    base = w_det(sys_, (), (), ns).value
    for c in (2.5, -0.3):
        scaled = _system(0, 3, (mul(const(c), funcs[0]), funcs[1], funcs[2]))
        assert w_det(scaled, (), (), ns).value == pytest.approx(c * base, rel=1e-12)


def test_confluent_limit_matches_derivative_column():
    # det(w(t), w(t+h)) / h converges linearly to the confluent determinant
    funcs = (parse("sin(x)"), parse("exp(x)"))
    sys_ = _system(0, 2, funcs)
    t = 0.4
    target = w_det(sys_, (), (), normalize_nodes((t, t))).value
    errors = []
    for h in (1e-3, 1e-4, 1e-5):
        approx = w_det(sys_, (), (), normalize_nodes((t, t + h))).value / h
        errors.append(abs(approx - target))
    assert errors[1] < 0.5 * errors[0]
    assert errors[2] < 0.5 * errors[1]
    assert errors[2] < 1e-4 * max(1.0, abs(target))


def test_lu_matches_cofactor_on_random_systems():
    rng = np.random.default_rng(11)
    for _ in range(60):
        d = int(rng.integers(1, 6))
        a = rng.normal(size=(d, d))
        res = lu_det(a)
        assert res.value == pytest.approx(det_cofactor(a), rel=1e-10, abs=1e-13)
        assert res.matrix_dim == d


def test_singular_matrix_flagged():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    res = lu_det(a)
    assert res.value == 0.0
    assert res.singular
    assert math.isinf(res.condition_estimate)


def test_equilibrate_preserves_value():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(4, 4))
    a[2] *= 1e6  # badly scaled row
    assert lu_det(a, equilibrate=True).value == pytest.approx(lu_det(a).value,
                                                              rel=1e-10)


def test_coincident_batch_matches_scalar_path():
    funcs = (parse("1"), parse("x"), parse("exp(x)"))
    sys_ = _system(0, 3, funcs)
    xs = np.linspace(-0.5, 0.5, 9)
    vals, hads = coincident_dets(funcs, ((),) * 3, 0, xs, 3)
    for j, t in enumerate(xs):
        expected = w_det(sys_, (), (), normalize_nodes((float(t),) * 3)).value
        assert vals[j] == pytest.approx(expected, rel=1e-10)
        assert hads[j] > 0


# -- regularity ---------------------------------------------------------------

def test_regularity_scaled_powers_pass():
    report = regularity_check(_system(0, 3, taylor_monomials(0.0, 3),
                                      interval=(0.0, 1.0)), 32)
    assert report.passed
    assert all(e.min_abs == pytest.approx(1.0, rel=1e-9) for e in report.minima)


def test_regularity_catches_vanishing_minor():
    # the second minor of (1, sin) is cos, which vanishes at pi/2
    report = regularity_check(_system(0, 2, (parse("1"), parse("sin(x)")),
                                      interval=(0.0, math.pi)), 201)
    assert not report.passed
    worst = report.first_failure()
    assert worst.n == 2
    assert worst.xi == pytest.approx(math.pi / 2, abs=0.05)


def test_regularity_detects_sign_change_between_samples():
    # every sample magnitude clears the threshold, but the sign flips
    report = regularity_check(_system(0, 1, (parse("x"),), interval=(-1.0, 1.0)), 16)
    assert not report.passed
    assert report.first_failure().sign_change


def test_regularity_grid_count_validated():
    sys_ = _system(0, 1, (parse("1"),), interval=(0.0, 1.0))
    with pytest.raises(ValueError):
        regularity_check(sys_, 1)


def test_regularity_zero_anchor_fails():
    report = regularity_check(_system(1, 1, (parse("1"), parse("x")),
                                      ((0.0,), (1.0,)), (0.0, 1.0)), 16)
    assert not report.passed
    assert report.v0 == 0.0
    assert report.first_failure().n == 0
