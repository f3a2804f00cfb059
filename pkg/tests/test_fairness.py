import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairdiv.errors import (
    AlphaOutOfRange, CapExceeded, DimensionMismatch, GoodOutOfRange, TopKSetsDisagree,
)
from fairdiv.fairness import (
    MmsCap, find_necessary_ef1_allocation, is_alpha_mms, is_balanced, is_ef1, is_efx, is_eq1,
    is_eqx, lemma1_condition, maximin_partition, mms_shortfalls, mms_value, necessary_dominates,
    necessary_ef1, necessary_efx, necessary_eq1, necessary_eqx,
)
from fairdiv.model import (
    Allocation, Instance, ValuationProfile, enumerate_allocations, identical_instance,
)
from fairdiv.polytope import ConsistentPolytope, linear_bounds, vertices
from fairdiv.rules import ef1_threshold

F = Fraction
THIRD = F(1, 3)


def profile(*rows):
    return ValuationProfile(tuple(tuple(F(x) for x in row) for row in rows))


def ef1_for(agent, A, row):
    """EF1 from one agent's point of view under one valuation row."""
    own = sum((row[g] for g in A.bundles[agent]), F(0))
    for j, other in enumerate(A.bundles):
        if j == agent or not other:
            continue
        if own < sum((row[g] for g in other), F(0)) - max(row[g] for g in other):
            return False
    return True


unit_rows = st.lists(st.integers(0, 6), min_size=1, max_size=6).filter(lambda r: sum(r) > 0)


class TestCardinal:
    def test_ef1_examples(self):
        assert is_ef1(Allocation(((0,), (1,))), profile([F(1, 2)] * 2, [F(1, 2)] * 2))
        assert not is_ef1(Allocation(((), (0, 1))), profile([F(1, 2)] * 2, [F(1, 2)] * 2))
        assert is_ef1(Allocation(((0,), (1, 2))), profile([THIRD] * 3, [THIRD] * 3))

    def test_symmetric_split(self, uniform2x4, split22):
        assert is_efx(split22, uniform2x4)
        assert is_eq1(split22, uniform2x4)
        assert is_eqx(split22, uniform2x4)
        assert is_balanced(split22)

    def test_unbalanced(self):
        assert not is_balanced(Allocation(((0, 1, 2), (3,))))
        assert is_balanced(Allocation(((), (0,), (1,))))

    def test_eq1_is_interpersonal(self):
        v = profile([0, F(1, 2), F(1, 2)], [THIRD] * 3)
        A = Allocation(((0,), (1, 2)))
        assert not is_eq1(A, v)
        assert is_ef1(A, v)

    def test_efx_stricter_than_ef1(self):
        v = profile([F(4, 7), F(1, 7), F(1, 7), F(1, 7)], [F(1, 4)] * 4)
        A = Allocation(((1, 2), (0, 3)))
        assert is_ef1(A, v)
        assert not is_efx(A, v)

    def test_eqx_ignores_zero_valued_goods(self):
        A = Allocation(((1,), (0, 2)))
        assert is_eqx(A, profile([1, 0, 0], [0, 0, 1]))
        assert not is_eqx(A, profile([1, 0, 0], [F(1, 2), 0, F(1, 2)]))
        assert is_eqx(Allocation(((0,), (1, 2))), profile([1, 0, 0], [F(1, 2), 0, F(1, 2)]))

    def test_dimension_mismatch(self, uniform2x4):
        with pytest.raises(DimensionMismatch):
            is_ef1(Allocation(((0, 1), (2,))), uniform2x4)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda m: st.lists(
        st.lists(st.integers(0, 6), min_size=m, max_size=m).filter(lambda r: sum(r) > 0),
        min_size=2, max_size=3)), st.randoms(use_true_random=False))
    def test_efx_implies_ef1(self, rows, rnd):
        m = len(rows[0])
        v = profile(*[[F(w, sum(r)) for w in r] for r in rows])
        A = Allocation.from_owners([rnd.randrange(len(rows)) for _ in range(m)], len(rows))
        if is_efx(A, v):
            assert is_ef1(A, v)
        if is_eqx(A, v):
            assert is_eq1(A, v)


class TestMaximinShare:
    def test_examples(self):
        assert mms_value(0, profile([F(1, 2), THIRD, F(1, 6)]), 2) == F(1, 2)
        assert mms_value(0, profile([1]), 2) == 0
        assert mms_value(0, profile([THIRD] * 3), 3) == THIRD

    def test_single_agent_share_is_everything(self):
        assert mms_value(0, profile([F(1, 5), F(4, 5)]), 1) == 1

    def test_witness_partition(self):
        value, bundles = maximin_partition((F(3, 10), F(3, 10), F(2, 10), F(2, 10)), 2)
        assert value == F(1, 2)
        assert sorted(g for b in bundles for g in b) == [0, 1, 2, 3]
        assert min(sum((F(3, 10), F(3, 10), F(2, 10), F(2, 10))[g] for g in b) for b in bundles) == value

    @pytest.mark.parametrize("n, m", [(2, 4), (3, 6), (4, 8), (3, 9)])
    def test_uniform_multiple(self, n, m):
        assert mms_value(0, profile([F(1, m)] * m), n) == F(1, n)

    def test_caps(self):
        with pytest.raises(CapExceeded):
            mms_value(0, profile([F(1, 13)] * 13), 2)
        with pytest.raises(CapExceeded):
            mms_value(0, profile([F(1, 6)] * 6), 5)
        assert mms_value(0, profile([F(1, 6)] * 6), 5, MmsCap(max_m=6, max_n=5)) == F(1, 6)

    @settings(max_examples=60, deadline=None)
    @given(unit_rows, st.integers(1, 3))
    def test_matches_brute_force(self, weights, n):
        row = tuple(F(w, sum(weights)) for w in weights)
        best = max(min(sum((row[g] for g in b), F(0)) for b in A.bundles)
                   for A in enumerate_allocations(n, len(row)))
        value, _ = maximin_partition(row, n)
        assert value == best
        assert value <= F(1, n)

    def test_alpha_mms_examples(self):
        v = profile([F(1, 2), THIRD, F(1, 6)], [F(1, 2), THIRD, F(1, 6)])
        assert is_alpha_mms(Allocation(((0,), (1, 2))), v, F(1))
        assert is_alpha_mms(Allocation(((0, 1, 2), ())), v, F(0))
        w = profile([F(1, 2)] * 2, [F(1, 2)] * 2)
        assert not is_alpha_mms(Allocation(((0, 1), ())), w, F(1, 2))
        assert mms_shortfalls(Allocation(((0, 1), ())), w, F(1, 2)) == [1]

    def test_alpha_range(self, uniform2x4, split22):
        with pytest.raises(AlphaOutOfRange):
            is_alpha_mms(split22, uniform2x4, F(3, 2))


class TestDominance:
    def test_examples(self):
        ranking = (0, 1, 2, 3)
        assert necessary_dominates(ranking, {0, 2}, {1, 3})
        assert not necessary_dominates(ranking, {1, 2}, {0})
        assert not necessary_dominates((0,), {1, 2}, {0})

    def test_empty_ranking_means_subset(self):
        assert necessary_dominates((), {0, 1}, {1})
        assert not necessary_dominates((), {0}, {1})

    def test_range_checked(self):
        with pytest.raises(GoodOutOfRange):
            necessary_dominates((0,), {5}, {0}, m=3)

    @pytest.mark.slow
    @pytest.mark.parametrize("m", range(1, 7))
    def test_agrees_with_polytope_minimum(self, m):
        order = list(range(m))
        random.Random(m).shuffle(order)
        subsets = [set(c) for size in range(m + 1) for c in itertools.combinations(range(m), size)]
        for k in sorted({0, 1, 3, m}):
            if k > m:
                continue
            p = ConsistentPolytope(tuple(order[:k]), m)
            for X in subsets:
                for Y in subsets:
                    c = [F(int(g in X) - int(g in Y)) for g in range(m)]
                    expected = linear_bounds(p, c)[0] >= 0
                    assert necessary_dominates(p.ranking, X, Y) == expected, (k, X, Y)


class TestNecessary:
    def test_ef1_examples(self):
        inst = identical_instance(2, 4, 4)
        assert necessary_ef1(Allocation(((0, 2), (1, 3))), inst)
        assert not necessary_ef1(Allocation(((0, 1), (2, 3))), inst)
        assert not necessary_ef1(Allocation(((0, 1), ())), identical_instance(2, 2, 2))

    def test_unranked_goods_are_interchangeable(self):
        inst = identical_instance(2, 3, 1)
        assert necessary_ef1(Allocation(((0,), (1, 2))), inst)
        assert not necessary_ef1(Allocation(((1,), (0, 2))), inst)

    def test_lemma1(self):
        inst = identical_instance(2, 4, 2)
        assert lemma1_condition(Allocation(((0, 2), (1, 3))), inst)
        assert not lemma1_condition(Allocation(((2, 3), (0, 1))), inst)
        assert lemma1_condition(Allocation(((0,), (1,))), identical_instance(2, 2, 1))

    def test_lemma1_needs_agreement(self):
        with pytest.raises(TopKSetsDisagree):
            lemma1_condition(Allocation(((0,), (1,))), Instance(2, 2, 1, ((0,), (1,))))

    def test_no_allocation_is_efx_or_eq1(self):
        inst = identical_instance(2, 4, 4)
        allocations = list(enumerate_allocations(2, 4))
        assert len(allocations) == 16
        assert not any(necessary_efx(A, inst) for A in allocations)
        assert not any(necessary_eq1(A, inst) for A in allocations)
        assert not any(necessary_eqx(A, inst) for A in allocations)

    def test_one_good_each_is_necessarily_fair(self):
        inst = identical_instance(2, 2, 2)
        A = Allocation(((0,), (1,)))
        assert necessary_efx(A, inst)
        assert necessary_eq1(A, inst)
        assert necessary_eqx(A, inst)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [2, 3])
    def test_threshold_is_tight(self, n):
        for m in range(1, 9):
            k = ef1_threshold(n, m)
            assert find_necessary_ef1_allocation(identical_instance(n, m, k)) is not None
            if k > 0:
                assert find_necessary_ef1_allocation(identical_instance(n, m, k - 1)) is None, (n, m, k)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [2, 3])
    def test_matches_vertex_scan(self, n):
        rnd = random.Random(n)
        for m in range(0, 7):
            for k in sorted({0, 1, m}):
                if k > m:
                    continue
                rankings = [tuple(rnd.sample(range(m), k)) for _ in range(n)]
                for inst in (identical_instance(n, m, k), Instance(n, m, k, tuple(rankings))):
                    rows = [vertices(ConsistentPolytope.for_agent(inst, i)) for i in range(n)]
                    for A in enumerate_allocations(n, m):
                        expected = all(ef1_for(i, A, row) for i in range(n) for row in rows[i])
                        assert necessary_ef1(A, inst) == expected, (inst, A)
