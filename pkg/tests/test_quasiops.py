import math
import random

import numpy as np
import pytest

from wmvt.determinant import AnchoredSystem
from wmvt.errors import ConditioningError, RegularityError
from wmvt.expr import (X, add, const, evaluate, jet_eval, mul, parse, powi,
                       taylor_monomials)
from wmvt.nodes import normalize_nodes
from wmvt.quasiops import (VanishingSpec, build_operator_table,
                           count_zero_evidence, rolle_distinct_zero_bound,
                           v_minor, vanishes_times, vanishing_product,
                           ww_n, ww_n_grid, ww_n_recursive)


def _spec(points, interval):
    return VanishingSpec(normalize_nodes(points), interval)


# -- vanishing counts ----------------------------------------------------------

def test_vanishing_literal_examples():
    assert vanishes_times(parse("x*(x-1)"), _spec((0.0, 1.0), (0.0, 1.0)))
    assert not vanishes_times(parse("x^2"), _spec((0.0, 0.0), (0.0, 1.0)))
    assert vanishes_times(parse("x^2"), _spec((0.0, 0.0), (-1.0, 1.0)))


def test_vanishing_requires_actual_zeros():
    assert not vanishes_times(parse("x*(x-1) + 0.001"), _spec((0.0, 1.0), (0.0, 1.0)))
    # multiplicity two at an interior node needs the derivative too
    assert vanishes_times(parse("(x-0.5)^2"), _spec((0.5, 0.5), (0.0, 1.0)))
    assert not vanishes_times(parse("(x-0.5)^2 + x/1000"), _spec((0.5, 0.5), (0.0, 1.0)))


def test_vanishing_scale_invariance():
    f = parse("x*(x-1)")
    tiny = mul(const(1e-14), f)
    assert vanishes_times(tiny, _spec((0.0, 1.0), (0.0, 1.0)))


def test_endpoint_flags():
    spec = _spec((0.0, 0.0), (0.0, 1.0))
    assert spec.first_below_b and not spec.last_above_a
    assert not spec.endpoint_ok
    with pytest.raises(ValueError):
        VanishingSpec(normalize_nodes((2.0,)), (0.0, 1.0))


def test_vanishing_derivative_shift():
    # f = x^2 (x-1)^2: f' vanishes at 0, 1 and at an interior critical point
    f = vanishing_product(normalize_nodes((0.0, 0.0, 1.0, 1.0)))
    assert vanishes_times(f, _spec((0.0, 0.5, 1.0), (-0.5, 1.5)), deriv=1)


# -- operator table -------------------------------------------------------------

def test_table_trivial_when_no_anchors():
    sys_ = AnchoredSystem(0, 2, (parse("1"), parse("x")), (), (0.0, 1.0))
    table = build_operator_table(sys_)
    assert table.gammas.shape == (0, 2)
    assert table.vfuncs == sys_.funcs


def test_table_single_anchor_example():
    sys_ = AnchoredSystem(1, 1, (const(1.0), X), ((1.0,), (-2.0,)), (0.0, 1.0))
    table = build_operator_table(sys_)
    assert table.gammas.shape == (1, 1)
    assert table.gammas[0, 0] == pytest.approx(2.0)
    # v_1 = w_2 + 2 w_1 = x + 2
    assert evaluate(table.vfuncs[0], 0.3) == pytest.approx(2.3)


def test_table_residual_small_for_random_anchors():
    rng = random.Random(12)
    for _ in range(20):
        anchors = [tuple(rng.uniform(-2, 2) for _ in range(2)) for _ in range(4)]
        top = np.array(anchors[:2])
        if abs(np.linalg.det(top)) < 0.1:
            continue
        sys_ = AnchoredSystem(2, 2, taylor_monomials(0.0, 4), tuple(anchors),
                              (-1.0, 1.0))
        table = build_operator_table(sys_)
        rhs = -np.array(anchors[2:]).T
        residual = np.max(np.abs(top.T @ table.gammas - rhs))
        assert residual <= 1e-10 * (1.0 + np.max(np.abs(rhs)))


def test_table_rejects_dependent_anchors():
    sys_ = AnchoredSystem(2, 1, taylor_monomials(0.0, 3),
                          ((1.0, 2.0), (2.0, 4.0), (0.0, 1.0)), (0.0, 1.0))
    with pytest.raises(RegularityError):
        build_operator_table(sys_)


# -- operators -------------------------------------------------------------------

def test_order_zero_collapses_to_value():
    sys_ = AnchoredSystem(0, 2, (parse("1"), parse("x")), (), (-1.0, 1.0))
    f = parse("exp(x)")
    assert ww_n(sys_, 0, f, 0.2) == pytest.approx(math.exp(0.2))


def test_order_zero_with_anchors_multiplies_by_v0():
    sys_ = AnchoredSystem(1, 1, (const(1.0), X), ((2.0,), (0.5,)), (-1.0, 1.0))
    f = parse("sin(x)")
    v0 = v_minor(sys_, 0, 0.0)
    assert v0 == pytest.approx(2.0)
    for xi in (-0.3, 0.4):
        assert ww_n(sys_, 0, f, xi) == pytest.approx(v0 * math.sin(xi), rel=1e-12)


def test_operator_annihilates_table_functions():
    sys_ = AnchoredSystem(1, 2, (const(1.0), X, powi(X, 2)),
                          ((1.0,), (0.5,), (-1.0,)), (-1.0, 1.0))
    table = build_operator_table(sys_)
    for n in range(0, 3):
        for j in range(1, n + 1):
            val = ww_n(sys_, n, table.vfuncs[j - 1], 0.37)
            assert abs(val) <= 1e-12
    # bordering with the next function reproduces the next minor
    for n in range(0, 2):
        got = ww_n(sys_, n, table.vfuncs[n], 0.37)
        assert got == pytest.approx(v_minor(sys_, n + 1, 0.37), rel=1e-12)


def test_operator_index_range():
    sys_ = AnchoredSystem(0, 2, (parse("1"), parse("x")), (), (-1.0, 1.0))
    with pytest.raises(IndexError):
        ww_n(sys_, 3, parse("x"), 0.0)
    with pytest.raises(IndexError):
        ww_n_recursive(sys_, 0, parse("x"), 0.0)


def test_recursion_annihilates_v_n():
    sys_ = AnchoredSystem(1, 2, (const(1.0), X, powi(X, 2)),
                          ((1.0,), (0.5,), (-1.0,)), (-1.0, 1.0))
    table = build_operator_table(sys_)
    for n in (1, 2):
        got = ww_n_recursive(sys_, n, table.vfuncs[n - 1], 0.3)
        scale = abs(v_minor(sys_, n, 0.3)) ** 2 / max(abs(v_minor(sys_, n - 1, 0.3)), 1e-12)
        assert abs(got) <= 1e-6 * (1.0 + scale)


def test_recursion_matches_direct_scaled_powers():
    for k in (1, 2, 3):
        sys_ = AnchoredSystem(0, k, taylor_monomials(0.0, k), (), (-1.0, 1.0))
        f = powi(X, k)
        got = ww_n_recursive(sys_, k, f, 0.3)
        assert got == pytest.approx(math.factorial(k), rel=1e-7)
        assert ww_n(sys_, k, f, 0.3) == pytest.approx(math.factorial(k), rel=1e-12)


def test_recursion_matches_direct_random_smooth():
    rng = random.Random(31)
    sys_ = AnchoredSystem(0, 3, taylor_monomials(0.0, 3), (), (-1.0, 1.0))
    for _ in range(15):
        coeffs = [rng.uniform(-2, 2) for _ in range(5)]
        f = const(coeffs[0])
        for i, c in enumerate(coeffs[1:], start=1):
            f = add(f, mul(const(c), powi(X, i)))
        n = rng.randint(1, 3)
        xi = rng.uniform(-0.5, 0.5)
        direct = ww_n(sys_, n, f, xi)
        recursive = ww_n_recursive(sys_, n, f, xi)
        assert recursive == pytest.approx(direct, rel=1e-6, abs=1e-6)


def test_recursion_detects_vanishing_minor():
    # V_1 = x collapses at the origin
    sys_ = AnchoredSystem(0, 1, (X,), (), (-1.0, 1.0))
    with pytest.raises(ConditioningError):
        ww_n_recursive(sys_, 1, parse("exp(x)"), 0.0)


def test_ww_grid_matches_scalar():
    sys_ = AnchoredSystem(0, 2, taylor_monomials(0.0, 2), (), (-1.0, 1.0))
    f = parse("sin(x)*exp(x)")
    xs = np.linspace(-0.8, 0.8, 11)
    vals = ww_n_grid(sys_, 2, f, xs)
    for j, t in enumerate(xs):
        assert vals[j] == pytest.approx(ww_n(sys_, 2, f, float(t)), rel=1e-10)


# -- zero-count helpers -----------------------------------------------------------

def test_vanishing_product_structure():
    ns = normalize_nodes((0.0, 0.0, 1.0))
    f = vanishing_product(ns)
    jet0 = jet_eval(f, 0.0, 1)
    assert jet0.value == pytest.approx(0.0, abs=1e-15)
    assert jet0.derivative(1) == pytest.approx(0.0, abs=1e-15)
    assert evaluate(f, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert evaluate(f, 0.5) != 0.0


def test_rolle_bound_simple_nodes():
    for n in range(4):
        assert rolle_distinct_zero_bound((1, 1, 1, 1), n) == 4 - n


def test_rolle_bound_with_multiplicities():
    # x^2 (x-1)^2: derivative orders have 2, 3, 2, 1 guaranteed distinct zeros
    assert [rolle_distinct_zero_bound((2, 2), n) for n in range(4)] == [2, 3, 2, 1]
    assert rolle_distinct_zero_bound((3,), 1) == 1
    assert rolle_distinct_zero_bound((1,), 1) == 0


def test_count_zero_evidence_patterns():
    assert count_zero_evidence(np.array([1.0, -1.0, 1.0])) == 2
    assert count_zero_evidence(np.array([1.0, 1e-9, 1.0])) == 1
    assert count_zero_evidence(np.array([1.0, 1e-9, -1.0])) == 1
    assert count_zero_evidence(np.array([1.0, 1.0, 1.0])) == 0
    assert count_zero_evidence(np.array([0.0, 0.0, 0.0])) == 3
    assert count_zero_evidence(np.array([1.0, 0.0, 0.0, -1.0, 1.0])) == 2
