import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f2sets import (
    ElementSet,
    Subgroup,
    alldisjoint_check,
    is_maximal_sum_free,
    is_minimal_saturating,
    is_round,
    is_saturating,
    is_sum_free,
    kneser_check,
    mult_sumset,
    rep_counts,
    s2_bound_check,
    sfnotround_check,
    sumset,
    two_a,
    unique_sums,
)
from f2sets.generators import sharpness_pair
from f2sets.sumsets import _cross_counts_dense, _cross_counts_sparse, php_covered

from conftest import (
    oracle_is_minimal_saturating,
    oracle_is_round,
    oracle_rep_counts,
    oracle_sumset,
    oracle_unique_sums,
)

small_sets = st.integers(min_value=1, max_value=6).flatmap(
    lambda r: st.tuples(st.just(r), st.integers(min_value=0, max_value=(1 << (1 << r)) - 1))
)


def els(r, elements):
    return ElementSet.from_elements(r, elements)


# -- sumset


def test_sumset_examples():
    assert sumset(els(3, [1, 2]), els(3, [1, 2])).elements() == [0, 3]
    B = els(3, [1, 5, 6])
    assert sumset(B, ElementSet.empty(3)) == ElementSet.empty(3)
    assert sumset(B, els(3, [0])) == B
    assert 0 in two_a(B)


def test_coset_sumset_is_subgroup():
    H = Subgroup.generated_by(3, [1, 2])
    coset = H.coset(4)
    assert two_a(coset) == H.members


@settings(max_examples=200, deadline=None)
@given(small_sets, small_sets)
def test_sumset_matches_oracle(rb, rc):
    r = rb[0]
    B = ElementSet(r, rb[1])
    C = ElementSet(r, rc[1] & ((1 << (1 << r)) - 1))
    assert set(sumset(B, C).elements()) == oracle_sumset(B, C)


def test_kernels_agree_exhaustively():
    rnd = random.Random(1)
    for _ in range(300):
        r = rnd.randint(1, 10)
        B = ElementSet(r, rnd.getrandbits(1 << r))
        C = ElementSet(r, rnd.getrandbits(1 << r))
        assert np.array_equal(_cross_counts_dense(B, C), _cross_counts_sparse(B, C))


# -- representation counts


def test_rep_counts_examples():
    t = rep_counts(els(3, [1]))
    assert t.ordered(0) == 1 and t.total() == 1
    t = rep_counts(els(3, [0, 1, 2, 4]))
    assert t.ordered(0) == 4
    for d in (1, 2, 3, 4, 5, 6):
        assert t.ordered(d) == 2
    assert t.ordered(7) == 0
    assert t.unordered(3) == 1
    assert t.unordered(0) == 4


@settings(max_examples=150, deadline=None)
@given(small_sets)
def test_rep_counts_match_double_loop(rb):
    r, bits = rb
    A = ElementSet(r, bits)
    got = rep_counts(A)
    want = oracle_rep_counts(A)
    assert [int(x) for x in got.counts] == want
    assert got.total() == len(A) ** 2
    assert set(got.support().elements()) == oracle_sumset(A, A)


def test_counting_identity_random():
    rnd = random.Random(2)
    for _ in range(1000):
        r = rnd.randint(1, 8)
        A = ElementSet(r, rnd.getrandbits(1 << r))
        assert rep_counts(A).total() == len(A) ** 2


# -- unique sums


def test_unique_sums_examples():
    assert unique_sums(els(3, [0, 5])).elements() == [5]
    assert unique_sums(els(3, [0, 1, 2, 4])).elements() == [1, 2, 3, 4, 5, 6]
    H = Subgroup.generated_by(3, [1, 2])
    assert unique_sums(H.coset(4)).elements() == []
    assert unique_sums(els(3, [6])).elements() == [0]


@settings(max_examples=200, deadline=None)
@given(small_sets)
def test_unique_sums_match_pair_oracle(rb):
    r, bits = rb
    A = ElementSet(r, bits)
    assert set(unique_sums(A).elements()) == oracle_unique_sums(A)


@settings(max_examples=120, deadline=None)
@given(small_sets, st.data())
def test_unique_sums_translation_invariant(rb, data):
    r, bits = rb
    g = data.draw(st.integers(min_value=0, max_value=(1 << r) - 1))
    A = ElementSet(r, bits)
    assert unique_sums(A.translate(g)) == unique_sums(A)


@settings(max_examples=120, deadline=None)
@given(small_sets)
def test_unique_sums_inside_sumset(rb):
    r, bits = rb
    A = ElementSet(r, bits)
    D = unique_sums(A)
    assert D.issubset(two_a(A)) or len(A) == 0
    if len(A) >= 2:
        assert 0 not in D


# -- multiplicity sumsets


def test_mult_sumset_examples():
    B = els(3, [0, 1, 2, 4])
    assert mult_sumset(B, B, 1) == sumset(B, B)
    assert 0 in mult_sumset(B, B, 4)
    with pytest.raises(ValueError):
        mult_sumset(B, B, 0)


def test_php_cover_bound():
    rnd = random.Random(3)
    for _ in range(100):
        r = rnd.randint(1, 6)
        n = 1 << r
        kappa = rnd.randint(1, 3)
        size_b = rnd.randint(max(1, n - 4), n)
        size_c = n + kappa - size_b
        if size_c > n or size_c < 1:
            continue
        perm = list(range(n))
        rnd.shuffle(perm)
        B = els(r, perm[:size_b])
        rnd.shuffle(perm)
        C = els(r, perm[:size_c])
        assert php_covered(B, C, kappa)


# -- predicates


def test_sum_free_examples():
    assert is_sum_free(els(2, [1, 2]))
    rep = is_sum_free(els(3, [0, 3]))
    assert not rep and rep.witness["triple"] == [0, 0, 0]
    rep = is_sum_free(els(3, [1, 2, 3]))
    assert not rep
    a, b, d = rep.witness["triple"]
    assert a ^ b == d and {a, b, d} <= {1, 2, 3}


def test_maximal_sum_free_examples():
    assert is_maximal_sum_free(els(2, [1, 2]))
    rep = is_maximal_sum_free(els(3, [1]))
    assert not rep and "adjoinable" in rep.witness
    g = rep.witness["adjoinable"]
    bigger = els(3, [1]).with_element(g)
    assert is_sum_free(bigger)


def test_saturating_examples():
    assert is_saturating(els(3, [4, 5, 6, 7]))
    rep = is_saturating(els(3, [1]))
    assert not rep and "uncovered" in rep.witness
    with pytest.raises(ValueError):
        is_saturating(els(3, [0, 1]))
    assert not is_saturating(ElementSet.empty(3))


def test_minimal_saturating_examples():
    # both classical constructions at r=3
    assert is_minimal_saturating(els(3, [4, 5, 6, 7]))
    assert is_minimal_saturating(els(3, [1, 2, 3, 4]))
    rep = is_minimal_saturating(els(2, [1, 2, 3]))
    assert not rep and "removable" in rep.witness
    a = rep.witness["removable"]
    assert is_saturating(els(2, [1, 2, 3]).without_element(a))


def test_minimal_saturating_matches_oracle_exhaustive_r3():
    for mask in range(1 << 7):
        A = ElementSet(3, mask << 1)
        assert bool(is_minimal_saturating(A)) == oracle_is_minimal_saturating(A), A


def test_round_examples():
    assert is_round(ElementSet.empty(4))
    assert is_round(els(3, [5]))
    H = Subgroup.generated_by(3, [1, 2])
    rep = is_round(H.members)
    assert not rep
    a = rep.witness["redundant"]
    rest = H.members.without_element(a)
    assert two_a(rest) == two_a(H.members)
    # shifted sum-free star is round
    S = els(4, [1, 2, 4, 8, 15])
    for g in (0, 7, 13):
        assert is_round(S.with_zero().translate(g))


def test_round_matches_removal_oracle_exhaustive_r3():
    for bits in range(1 << 8):
        A = ElementSet(3, bits)
        assert bool(is_round(A)) == oracle_is_round(A), A


def test_round_matches_removal_oracle_random_r46():
    rnd = random.Random(4)
    for _ in range(400):
        r = rnd.randint(4, 6)
        A = ElementSet(r, rnd.getrandbits(1 << r))
        assert bool(is_round(A)) == oracle_is_round(A), A


def test_round_matches_graph_randomized_up_to_r8():
    from f2sets.urgraph import build

    rnd = random.Random(9)
    for _ in range(250):
        r = rnd.randint(5, 8)
        bits = rnd.getrandbits(1 << r)
        A = ElementSet(r, bits)
        if len(A) < 2:
            continue
        G = build(A)
        no_isolated = all(G.degree(i) > 0 for i in range(G.n))
        assert bool(is_round(A)) == no_isolated, A


@settings(max_examples=100, deadline=None)
@given(small_sets, st.data())
def test_round_translation_invariance(rb, data):
    r, bits = rb
    g = data.draw(st.integers(min_value=0, max_value=(1 << r) - 1))
    A = ElementSet(r, bits)
    assert bool(is_round(A.translate(g))) == bool(is_round(A))


def test_predicates_invariant_under_linear_maps():
    from f2sets.generators import linear_image, random_invertible
    from f2sets.rng import Xorshift64

    rng = Xorshift64(2026)
    rnd = random.Random(2026)
    for _ in range(300):
        r = rnd.randint(2, 6)
        A = ElementSet(r, rnd.getrandbits(1 << r))
        cols = random_invertible(rng, r)
        img = linear_image(A, cols)
        assert bool(is_sum_free(img)) == bool(is_sum_free(A))
        assert bool(is_round(img)) == bool(is_round(A))
        if 0 not in A:
            assert bool(is_saturating(img)) == bool(is_saturating(A))
            assert bool(is_minimal_saturating(img)) == bool(is_minimal_saturating(A))


def test_sumset_with_own_period_is_identity():
    from f2sets import period

    rnd = random.Random(8)
    for _ in range(300):
        r = rnd.randint(1, 6)
        bits = rnd.getrandbits(1 << r)
        if not bits:
            continue
        A = ElementSet(r, bits)
        assert sumset(A, period(A).members) == A


def test_sum_free_maximality_equals_minimal_saturating_without_lines():
    # at r <= 4: S maximal sum-free <=> S minimal saturating and S ∩ 2S = ∅
    for r in (2, 3, 4):
        for mask in range(1 << ((1 << r) - 1)):
            S = ElementSet(r, mask << 1)
            if len(S) == 0:
                continue
            lhs = bool(is_maximal_sum_free(S))
            rhs = bool(is_minimal_saturating(S)) and S.isdisjoint(two_a(S))
            assert lhs == rhs, S


# -- the additive lemma checks


def test_kneser_subgroup_case():
    H = Subgroup.generated_by(4, [1, 2])
    assert kneser_check(H.members, H.members)
    rep = kneser_check(ElementSet.full(4), ElementSet.full(4))
    assert rep


def test_kneser_requires_nonempty():
    with pytest.raises(ValueError):
        kneser_check(ElementSet.empty(3), ElementSet.full(3))


def test_kneser_structured_fuzz():
    rnd = random.Random(5)
    triggered = 0
    for _ in range(2000):
        r = rnd.randint(1, 8)
        n = 1 << r
        H = Subgroup.generated_by(r, [rnd.randrange(1, n) for _ in range(rnd.randint(0, r))])
        bbits = 0
        for _ in range(rnd.randint(1, 3)):
            bbits |= H.coset(rnd.randrange(n)).bits
        cbits = 0
        for _ in range(rnd.randint(1, 3)):
            cbits |= H.coset(rnd.randrange(n)).bits
        if rnd.random() < 0.4:
            bbits |= 1 << rnd.randrange(n)
        B, C = ElementSet(r, bbits), ElementSet(r, cbits)
        rep = kneser_check(B, C)
        assert rep, rep.witness
        if rep.detail is None:
            triggered += 1
    assert triggered > 100


def test_alldisjoint_examples():
    # boundary: |B| + |C| = 2^(r-1) exactly is rejected and genuinely disjoint
    for r in (2, 3, 4, 5, 6):
        B, C = sharpness_pair(r)
        assert B.isdisjoint(C)
        assert B.union(C).isdisjoint(sumset(B, C))
        with pytest.raises(ValueError):
            alldisjoint_check(B, C)
    with pytest.raises(ValueError):
        alldisjoint_check(els(2, [1]), els(2, [2]))


def test_alldisjoint_fuzz():
    rnd = random.Random(6)
    done = 0
    while done < 1500:
        r = rnd.randint(1, 8)
        n = 1 << r
        perm = list(range(n))
        rnd.shuffle(perm)
        nb = rnd.randint(1, n - 1)
        nc = rnd.randint(1, n - nb)
        if nb + nc <= n // 2:
            continue
        B = els(r, perm[:nb])
        C = els(r, perm[nb:nb + nc])
        assert alldisjoint_check(B, C)
        done += 1


def test_s2_bound_trivial_and_fuzz():
    G4 = ElementSet.full(4)
    assert s2_bound_check(G4, G4)
    rnd = random.Random(7)
    for _ in range(2000):
        r = rnd.randint(2, 8)
        B = ElementSet(r, rnd.getrandbits(1 << r))
        C = ElementSet(r, rnd.getrandbits(1 << r))
        if len(B) < 2 or len(C) < 2:
            continue
        assert s2_bound_check(B, C)
    with pytest.raises(ValueError):
        s2_bound_check(els(3, [1]), els(3, [1, 2]))


def test_sfnotround_coset_case():
    H = Subgroup.generated_by(5, [1, 2, 4, 8])
    S = H.coset(16)  # 16 elements, sum-free
    rep = sfnotround_check(S, 2)
    assert rep
    # every element of 2S has 8 unordered representations; spot check
    t = rep_counts(S)
    for c in two_a(S):
        assert t.unordered(c) >= 8 if c else t.unordered(c) == 16


def test_sfnotround_preconditions():
    H = Subgroup.generated_by(5, [1, 2, 4, 8])
    S = H.coset(16)
    small = ElementSet.from_elements(5, S.elements()[:10])  # exactly 2^(r-2) + 2
    with pytest.raises(ValueError):
        sfnotround_check(small, 2)
    with pytest.raises(ValueError):
        sfnotround_check(S, 1)
    with pytest.raises(ValueError):
        sfnotround_check(ElementSet.from_elements(5, [1, 2, 3] + list(range(16, 26))), 2)
