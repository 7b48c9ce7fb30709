import itertools

import pytest
from hypothesis import given, strategies as st

from consecwqo.decide import NO, YES
from consecwqo.doubleascent import (LR, DoubleAscentProblem, antichain_witness_da, as_permutation,
                                    associated_permutation, associated_words, basis_words,
                                    consecutive_inversions, decide_atomicity_da, decide_wqo_da,
                                    double_ascents, is_double_ascent, left_right_diagnostics,
                                    short_member_without_extension, value_consecutive_leq, word_factor_graph)
from consecwqo.core import consecutive_leq
from consecwqo.errors import InputError
from consecwqo.oracle import jep_search, verify_antichain

LR_WORDS = {n: ["".join(w) for w in itertools.product("lr", repeat=n)] for n in range(1, 8)}
DA = {n: double_ascents(n) for n in range(1, 8)}


def edge_labels(fg):
    return {(fg.label(u), fg.label(v)) for u, v in fg.digraph.edges}


def word_leq(u, v):
    return u in v


def test_inversions():
    assert consecutive_inversions([1, 2, 4, 3, 5]) == [3]
    assert consecutive_inversions([1, 2, 3, 4, 5]) == []
    assert consecutive_inversions([1, 3, 2, 4, 6, 7, 5]) == [2, 6]
    assert not is_double_ascent([1, 3, 2, 4, 6, 7, 5])


def test_value_containment():
    assert value_consecutive_leq([2, 1, 3], [1, 3, 5, 2, 4, 6]) == 2
    assert value_consecutive_leq([3, 1, 2], [3, 1, 2]) == 1
    assert value_consecutive_leq([1, 2], [2, 1]) is None


def test_maps_on_worked_values():
    assert associated_permutation("llrlr") == (1, 2, 4, 3, 5)
    assert associated_permutation("llll") == (1, 2, 3, 4)
    assert associated_permutation("rrl") == (3, 1, 2)
    assert associated_words([3, 1, 2]) == ["rrl"]
    assert associated_words([1, 2]) == ["ll", "lr", "rr"]
    assert basis_words([[1, 2, 3]]) == ["lll", "llr", "lrr", "rrr"]
    assert basis_words([[1, 2, 3], [3, 1, 2]]) == ["lll", "llr", "lrr", "rrl", "rrr"]
    assert basis_words([[2, 1]]) == ["rl"]


def test_map_errors():
    with pytest.raises(InputError):
        associated_words([1, 3, 2, 5, 4])
    with pytest.raises(InputError):
        associated_permutation("lrx")
    with pytest.raises(InputError):
        as_permutation([1, 1])
    with pytest.raises(InputError):
        DoubleAscentProblem.create([[2, 1, 4, 3], [1, 2, 2]])


def test_double_ascent_counts():
    # 2^n words, with the n+1 single-ascent words collapsing to one permutation
    for n in range(1, 8):
        assert len(DA[n]) == 2 ** n - n
        assert all(is_double_ascent(p) for p in DA[n])
    brute = [p for p in itertools.permutations(range(1, 6)) if is_double_ascent(p)]
    assert DA[5] == sorted(brute)


# -- transport properties -----------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 8))
def test_word_roundtrip(n):
    for w in LR_WORDS[n]:
        p = associated_permutation(w)
        assert is_double_ascent(p) and w in associated_words(p)


@pytest.mark.parametrize("n", range(1, 8))
def test_word_sets(n):
    for p in DA[n]:
        ws = associated_words(p)
        assert ws
        assert (len(ws) > 1) == (not consecutive_inversions(p))
        assert all(associated_permutation(w) == p for w in ws)


@given(st.text("lr", min_size=1, max_size=10))
def test_word_roundtrip_long(w):
    assert w in associated_words(associated_permutation(w))


def test_permutation_order_goes_to_words():
    for n, m in itertools.combinations_with_replacement(range(1, 8), 2):
        for s in DA[n]:
            if not consecutive_inversions(s):
                continue
            (ws,) = associated_words(s)
            for t in DA[m]:
                if value_consecutive_leq(s, t) is not None:
                    assert all(word_leq(ws, wt) for wt in associated_words(t))


def test_word_order_goes_to_permutations():
    for n, m in itertools.combinations_with_replacement(range(1, 8), 2):
        for u in LR_WORDS[n]:
            pu = associated_permutation(u)
            for v in LR_WORDS[m]:
                if word_leq(u, v):
                    assert value_consecutive_leq(pu, associated_permutation(v)) is not None


def test_word_and_structure_containment_agree():
    for u in LR_WORDS[3]:
        for v in LR_WORDS[5]:
            assert word_leq(u, v) == (consecutive_leq(LR.word(u), LR.word(v)) is not None)


EXAMPLE_BASES = [[[1, 2, 3]], [[1, 2, 3], [3, 1, 2]], [[2, 1]], [[1, 3, 2], [2, 3, 1, 4]], [[2, 1, 3]]]


@pytest.mark.parametrize("basis", EXAMPLE_BASES, ids=str)
def test_membership_transport(basis):
    bw = basis_words(basis)
    for n in range(1, 8):
        for p in DA[n]:
            inside = all(value_consecutive_leq(b, p) is None for b in basis)
            per_word = [all(b not in w for b in bw) for w in associated_words(p)]
            assert inside == all(per_word) == any(per_word)


def test_single_ascent_words_form_a_grid():
    for a1, c1, a2, c2 in itertools.product(range(6), repeat=4):
        u, v = "l" * a1 + "r" * c1, "l" * a2 + "r" * c2
        if u:
            assert word_leq(u, v) == (a1 <= a2 and c1 <= c2)


# -- deciders on the worked examples ----------------------------------------------------

def test_increasing_triple_forbidden():
    dp = DoubleAscentProblem.create([[1, 2, 3]])
    fg = word_factor_graph(dp)
    assert sorted(fg.digraph.labels) == ["lrl", "rll", "rlr", "rrl"]
    assert edge_labels(fg) == {("rlr", "lrl"), ("lrl", "rlr"), ("lrl", "rll"), ("rrl", "rlr"), ("rrl", "rll")}
    w = decide_wqo_da(dp)
    assert w.answer == NO and w.to_json()["word_basis"] == ["lll", "llr", "lrr", "rrr"]
    assert decide_atomicity_da(dp).answer == NO
    xs = antichain_witness_da(dp, 5)
    assert len(xs) == 5 and verify_antichain(dp, xs).passed


def test_two_forbidden_patterns_wqo():
    dp = DoubleAscentProblem.create([[1, 2, 3], [3, 1, 2]])
    fg = word_factor_graph(dp)
    assert sorted(fg.digraph.labels) == ["lrl", "rll", "rlr"]
    assert edge_labels(fg) == {("rlr", "lrl"), ("lrl", "rlr"), ("lrl", "rll")}
    assert decide_wqo_da(dp).answer == YES


def test_no_descents_bicycle():
    dp = DoubleAscentProblem.create([[2, 1]])
    fg = word_factor_graph(dp)
    assert fg.to_json()["vertices"] == ["ll", "lr", "rr"]
    assert edge_labels(fg) == {("ll", "ll"), ("ll", "lr"), ("lr", "rr"), ("rr", "rr")}
    assert decide_atomicity_da(dp).answer == YES
    assert decide_wqo_da(dp).answer == YES
    diag = left_right_diagnostics(fg)
    assert diag["is_left_right_bicycle"] and diag["isolated"]


def test_diagnostics_on_other_graphs():
    fg = word_factor_graph(DoubleAscentProblem.create([[1, 2, 3]]))
    diag = left_right_diagnostics(fg)
    assert not diag["is_left_right_bicycle"] and not diag["isolated"]
    # only l^3 survives among single-ascent-free words plus the loop on lll
    lone = DoubleAscentProblem.create([p for p in double_ascents(3) if p != (1, 2, 3)])
    diag = left_right_diagnostics(word_factor_graph(lone))
    assert diag["is_left_right_bicycle"]


FOUR = [(1, 4, 2, 3), (1, 2, 4, 3), (1, 3, 4, 2), (1, 3, 2, 4), (2, 4, 1, 3)]
DRAWN = [(2, 3, 1, 4), (1, 2, 4, 3), (1, 3, 4, 2), (1, 3, 2, 4), (2, 4, 1, 3)]
DRAWN_EDGES = {("rllr", "llrl"), ("llrl", "lrll"), ("lrll", "rllr"), ("llrl", "lrlr"),
                ("lrlr", "rlrl"), ("rlrl", "lrlr"), ("rlrl", "lrll")}


def test_five_survivors_with_1423():
    dp = DoubleAscentProblem.create([p for p in double_ascents(4) if p not in FOUR])
    fg = word_factor_graph(dp)
    assert sorted(fg.digraph.labels) == ["llrl", "lrll", "lrlr", "lrrl", "rlrl"]
    v = decide_atomicity_da(dp)
    assert v.answer == NO
    assert v.witness == {"type": "non_joinable_pair", "left": [1, 2, 4, 3], "right": [1, 4, 2, 3],
                         "words": ["llrl", "lrrl"]}
    assert jep_search(dp, (1, 2, 4, 3), (1, 4, 2, 3), 13) is None
    assert short_member_without_extension(dp) is None


def test_five_survivors_with_2314():
    dp = DoubleAscentProblem.create([p for p in double_ascents(4) if p not in DRAWN])
    fg = word_factor_graph(dp)
    assert sorted(fg.digraph.labels) == sorted(["rllr", "llrl", "lrll", "lrlr", "rlrl"])
    assert edge_labels(fg) == DRAWN_EDGES
    v = decide_atomicity_da(dp)
    assert v.answer == NO and v.witness == {"type": "missing_extension", "structure": [3, 1, 2]}
    # the increasing triple still fits in a surviving four-point member
    assert any(value_consecutive_leq((1, 2, 3), t) is not None for t in DRAWN)


def test_empty_top_level_is_decided_directly():
    # nothing of length three survives: 12 and 21 are both maximal
    dp = DoubleAscentProblem.create(double_ascents(3))
    v = decide_atomicity_da(dp)
    assert v.answer == NO and v.witness == {"type": "non_joinable_pair", "left": [1, 2], "right": [2, 1]}
    # adding 21 leaves the chain 1 <= 12
    dp = DoubleAscentProblem.create(list(double_ascents(3)) + [(2, 1)])
    v = decide_atomicity_da(dp)
    assert v.answer == YES and "greatest" in v.theorem
