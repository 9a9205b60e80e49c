import itertools
import random

import pytest
from hypothesis import given, strategies as st

from klimm.perm import (
    InversionPair, PatternError, Permutation, RankError, all_permutations,
    avoids, bruhat_interval, bruhat_leq, delete_entry, delete_value, find_pattern,
    has_repetition_free_words, identity, in_maximal_parabolic, inversions,
    length, longest_element, non_inversions, parabolic_split, parse_permutation,
    pattern_occurs, reduced_word, reduced_words, require_avoids, sign,
    simple_transposition, word_product,
)

P = Permutation


def perms(max_n=8):
    return st.integers(1, max_n).flatmap(
        lambda n: st.permutations(list(range(1, n + 1))).map(Permutation))


def test_construction_rejects_non_bijections():
    with pytest.raises(ValueError):
        P([1, 1, 2])
    with pytest.raises(ValueError):
        P([0, 1])
    with pytest.raises(ValueError):
        P([])


def test_parse_forms():
    assert parse_permutation("2413") == P([2, 4, 1, 3])
    assert parse_permutation("2,4,1,3") == P([2, 4, 1, 3])
    assert parse_permutation("6,10,4,7,8,9,5,3,1,2").n == 10
    with pytest.raises(ValueError):
        parse_permutation("24x3")


def test_longest_element():
    assert longest_element(1) == P([1])
    assert longest_element(4) == P([4, 3, 2, 1])
    assert length(longest_element(4)) == 6


def test_length_and_inversions():
    assert length(identity(5)) == 0
    assert length(P([4, 3, 2, 1])) == 6
    assert length(P([2, 4, 1, 3])) == 3
    assert inversions(identity(4)) == set()
    assert inversions(P([2, 1])) == {InversionPair(1, 2)}
    assert inversions(P([2, 4, 1, 3])) == {(1, 3), (2, 3), (2, 4)}
    assert non_inversions(P([2, 4, 1, 3])) == {(1, 2), (1, 4), (3, 4)}


def test_bruhat_examples():
    assert bruhat_leq(identity(4), P([2, 4, 1, 3]))
    assert bruhat_leq(P([2, 4, 1, 3]), P([4, 2, 3, 1]))
    assert not bruhat_leq(P([1, 3, 2, 4]), P([2, 1, 4, 3]))
    with pytest.raises(RankError):
        bruhat_leq(identity(3), identity(4))


def _covers_closure(n):
    """Bruhat order as the transitive closure of ``w < w t`` with
    ``l(w t) = l(w) + 1`` for transpositions ``t``."""
    up = {}
    for w in all_permutations(n):
        nxt = set()
        for i, j in itertools.combinations(range(n), 2):
            u = list(w)
            u[i], u[j] = u[j], u[i]
            u = P(u)
            if length(u) == length(w) + 1:
                nxt.add(u)
        up[w] = nxt
    order = {}
    for w in sorted(up, key=length, reverse=True):
        reach = {w}
        for u in up[w]:
            reach |= order[u]
        order[w] = reach
    return order


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_bruhat_matches_covering_closure(n):
    order = _covers_closure(n)
    for x in all_permutations(n):
        for y in all_permutations(n):
            assert bruhat_leq(x, y) == (y in order[x])


def test_interval_of_2413_has_eight_elements():
    interval = bruhat_interval(P([2, 4, 1, 3]), longest_element(4))
    listed = {P(map(int, s)) for s in
              ["2413", "4213", "3412", "2431", "4312", "4231", "3421"]}
    assert listed <= interval
    # the top element itself completes the interval
    assert interval == listed | {longest_element(4)}
    assert len(interval) == 8


def test_interval_edge_cases(monkeypatch):
    v = P([3, 1, 2])
    assert bruhat_interval(v, v) == {v}
    assert bruhat_interval(P([3, 2, 1]), identity(3)) == set()
    monkeypatch.setenv("KLIMM_MAX_N", "3")
    with pytest.raises(ValueError):
        bruhat_interval(identity(4), longest_element(4))


def test_patterns():
    v = P([2, 4, 1, 3])
    assert not pattern_occurs(v, "1324") and not pattern_occurs(v, "2143")
    assert pattern_occurs(identity(5), "123")
    assert find_pattern(P([1, 4, 2, 5, 3]), "123") is not None
    assert find_pattern(P([1, 4, 2, 5, 3]), "321") is None
    assert avoids(v, "1324", "2143")


def test_require_avoids_reports_witness():
    v = P([1, 3, 2, 4, 5])
    with pytest.raises(PatternError) as info:
        require_avoids(v, "2143", "1324")
    positions = info.value.witness
    assert [v(i) for i in positions] in ([1, 3, 2, 4], [1, 3, 2, 5])


def test_delete_entry_examples():
    assert delete_entry(P([6, 2, 7, 8, 5, 3, 1, 4]), 2) == P([5, 6, 7, 4, 2, 1, 3])
    w = P([3, 4, 7, 2, 1, 6, 5])
    assert delete_entry(w, 4) == P([2, 3, 6, 1, 5, 4])
    assert delete_value(w, 2) == P([2, 3, 6, 1, 5, 4])
    for i in range(1, 5):
        assert delete_entry(identity(4), i) == identity(3)
    with pytest.raises(IndexError):
        delete_entry(identity(3), 4)


def test_parabolic_split():
    assert parabolic_split(P([7, 4, 5, 8, 6, 1, 3, 2])) == (3, P([4, 1, 2, 5, 3]), P([1, 3, 2]))
    j, top, bottom = parabolic_split(longest_element(4))
    assert j == 1 and top == longest_element(3) and bottom == P([1])
    # w0 v = 4123, a 4-cycle: no split
    v = P([1, 4, 3, 2])
    assert not in_maximal_parabolic(longest_element(4) * v)
    assert parabolic_split(v) is None
    assert parabolic_split(P([3, 2, 1, 4])) is None


def test_reduced_word_examples():
    assert reduced_word(identity(3)) == []
    assert reduced_word(P([2, 1, 3])) == [1]
    assert len(reduced_word(P([2, 4, 1, 3]))) == 3


@pytest.mark.parametrize("n", range(1, 7))
def test_tenner_criterion(n):
    for w in all_permutations(n):
        word = reduced_word(w)
        assert word_product(n, word) == w
        free = len(set(word)) == len(word)
        assert avoids(w, "321", "3412") == free == has_repetition_free_words(w)


def test_reduced_words_small():
    assert set(reduced_words(longest_element(3))) == {(1, 2, 1), (2, 1, 2)}


@given(perms())
def test_compose_with_inverse(v):
    assert v * v.inverse() == identity(v.n)
    assert v.inverse() * v == identity(v.n)


@given(perms(), st.data())
def test_sign_flips_under_simple_transposition(v, data):
    if v.n < 2:
        return
    a = data.draw(st.integers(1, v.n - 1))
    u = v * simple_transposition(v.n, a)
    assert abs(length(u) - length(v)) == 1
    assert sign(u) == -sign(v)
    assert length(v) == len(inversions(v))


@given(perms(7), st.data())
def test_pattern_monotone_under_deletion(v, data):
    if v.n < 2:
        return
    i = data.draw(st.integers(1, v.n))
    smaller = delete_entry(v, i)
    for pattern in ("12", "21", "123", "132", "231", "2143", "1324"):
        if pattern_occurs(smaller, pattern):
            assert pattern_occurs(v, pattern)


def test_find_pattern_matches_brute_force():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 7)
        v = P(rng.sample(range(1, n + 1), n))
        for pattern in ("132", "2143", "3412"):
            brute = any(
                all((v[a] < v[b]) == (pattern[x] < pattern[y])
                    for (x, a), (y, b) in itertools.combinations(enumerate(pos), 2))
                for pos in itertools.combinations(range(n), len(pattern)))
            assert (find_pattern(v, pattern) is not None) == brute


def test_json_and_str():
    assert P([2, 4, 1, 3]).to_json() == [2, 4, 1, 3]
    assert str(P([2, 4, 1, 3])) == "2413"
    assert str(P([10] + list(range(1, 10)))).startswith("10,1,")
