import pytest
from hypothesis import given
from hypothesis import strategies as st

from wmvt.nodes import close_pairs, is_nonidentical, normalize_nodes


def test_grouping_examples():
    ns = normalize_nodes((1.0, 2.0, 1.0))
    assert ns.distinct == (1.0, 2.0)
    assert ns.mults == (2, 1)
    assert normalize_nodes((5.0,)).distinct == (5.0,)
    assert normalize_nodes((5.0,)).mults == (1,)
    ns0 = normalize_nodes((0.0, 0.0, 0.0))
    assert ns0.distinct == (0.0,) and ns0.mults == (3,)


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        normalize_nodes(())


def test_permutation_reproduces_grouped_form():
    points = (2.0, 1.0, 2.0, -3.0, 1.0)
    ns = normalize_nodes(points)
    assert tuple(points[i] for i in ns.permutation) == ns.expand()
    assert sorted(ns.permutation) == list(range(len(points)))


def test_permutation_is_stable_for_ties():
    ns = normalize_nodes((1.0, 0.0, 1.0, 0.0))
    # equal values keep input order: both 0.0s first (indices 1, 3), then 1.0s
    assert ns.permutation == (1, 3, 0, 2)


def test_nonidentical():
    assert not is_nonidentical(normalize_nodes((0.0, 0.0, 0.0)))
    assert is_nonidentical(normalize_nodes((0.0, 0.0, 1.0)))
    assert is_nonidentical(normalize_nodes((-1.0, 1.0)))


@given(st.lists(st.sampled_from([-1.5, -0.25, 0.0, 0.25, 1.0, 3.5]),
                min_size=1, max_size=9))
def test_idempotent_under_reexpansion(points):
    ns = normalize_nodes(points)
    again = normalize_nodes(ns.expand())
    assert again.distinct == ns.distinct
    assert again.mults == ns.mults
    assert ns.total == len(points)
    assert all(b > a for a, b in zip(ns.distinct, ns.distinct[1:]))


@given(st.lists(st.sampled_from([-1.0, 0.0, 0.5, 2.0]), min_size=1, max_size=7),
       st.randoms(use_true_random=False))
def test_permutation_invariance(points, rnd):
    shuffled = list(points)
    rnd.shuffle(shuffled)
    a = normalize_nodes(points)
    b = normalize_nodes(shuffled)
    assert a.distinct == b.distinct
    assert a.mults == b.mults


def test_close_pair_advisory():
    ns = normalize_nodes((0.0, 1e-9, 1.0))
    assert close_pairs(ns) == ((0.0, 1e-9),)
    assert close_pairs(normalize_nodes((0.0, 0.5, 1.0))) == ()
    # exact duplicates merge instead of tripping the advisory
    assert close_pairs(normalize_nodes((0.5, 0.5))) == ()
