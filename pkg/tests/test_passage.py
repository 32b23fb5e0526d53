"""Passage statistics on node addresses and their distance identities."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackmaps.passage import (
    GammaState,
    gamma,
    gamma_pair,
    gamma_prime_literal,
    gamma_prime_pair,
    quad_root_distance,
    quad_type,
    tau_decomposition,
    tri_root_distance,
    tri_type,
)


def w(s: str) -> tuple:
    return tuple(int(c) for c in s)


def test_gamma_fixture():
    assert tau_decomposition(w("22123122131")) == [0, 3, 6, 10]
    assert gamma(w("22123122131")) == 4


def test_gamma_small():
    assert gamma(()) == 1
    assert gamma(w("1")) == 2
    assert gamma(w("2")) == 1
    assert gamma(w("3")) == 1
    assert gamma(w("21")) == 2
    assert gamma(w("123")) == 2


def test_gamma_streaming_state_matches_batch():
    word = w("2212312213123321")
    st_ = GammaState()
    for i, letter in enumerate(word, start=1):
        assert st_.push(letter) == gamma(word[:i])


def test_gamma_state_copy_independent():
    a = GammaState()
    a.push(2)
    b = a.copy()
    b.push(1)
    assert a.count == gamma(w("2"))
    assert b.count == gamma(w("21"))


def test_tri_type_seed_and_step():
    assert tri_type(()) == (0, 1, 1)
    assert tri_type(w("1")) == (1, 1, 1)
    assert tri_type(w("2")) == (0, 1, 1)
    assert tri_root_distance(()) == 1
    assert tri_root_distance(w("1")) == 2


def test_tri_root_distance_equals_gamma_exhaustive():
    words = [()]
    for _ in range(7):
        words = [u + (i,) for u in words for i in (1, 2, 3)]
        for u in words:
            assert tri_root_distance(u) == gamma(u)


def test_quad_type_seed_and_distance():
    assert quad_type(()) == (1, 2, 1, 0)
    assert quad_root_distance(()) == 1
    assert quad_root_distance(w("1")) == 2
    assert quad_root_distance(w("2")) == 2


def test_gamma_prime_literal_fixtures():
    assert gamma_prime_literal(()) == 1
    assert gamma_prime_literal(w("1")) == 2
    assert gamma_prime_literal(w("122121112")) == 2


def test_quad_literal_discrepancy_fixture():
    # the word 11 shows the literal block statistic undercounts the true
    # graph distance by one
    assert quad_root_distance(w("11")) == 3
    assert gamma_prime_literal(w("11")) == 2


def test_gamma_pair_rejects_prefixes():
    with pytest.raises(ValueError):
        gamma_pair(w("12"), w("123"))
    with pytest.raises(ValueError):
        gamma_pair((), w("2"))


def test_gamma_pair_symmetric():
    u, v = w("1231"), w("221")
    assert gamma_pair(u, v) == gamma_pair(v, u)
    assert gamma_prime_pair(w("121"), w("21")) == gamma_prime_pair(w("21"), w("121"))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 3), max_size=12))
def test_gamma_bounds_and_monotone_step(letters):
    u = tuple(letters)
    g = gamma(u)
    assert 1 <= g <= len(u) + 1
    for i in (1, 2, 3):
        assert abs(gamma(u + (i,)) - g) <= 1  # one insertion moves distance by <= 1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 3), max_size=12))
def test_tri_type_entries_are_corner_distances(letters):
    # min corner distance is within 1 of the center distance
    u = tuple(letters)
    tp = tri_type(u)
    assert tri_root_distance(u) == 1 + min(tp)
    assert max(tp) - min(tp) <= 2


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 2), max_size=14))
def test_quad_parity(letters):
    # quadrangulations are bipartite: distance parity flips with each level
    u = tuple(letters)
    d = quad_root_distance(u)
    assert 1 <= d <= len(u) + 2
    assert (d - 1 - len(u)) % 2 == 0
