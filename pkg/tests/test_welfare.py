import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analyzers.gen_analyzer import random_instance
from config.enums import PropertyTag, SearchMode
from fairdiv.errors import (
    CapExceeded, DimensionMismatch, KBelowN, MNotGreaterThanN, NTooSmall, PreconditionError,
)
from fairdiv.fairness import is_ef1, is_efx, is_eq1, is_eqx, mms_value
from fairdiv.model import (
    Allocation, ExplicitMixture, ValuationProfile, enumerate_allocations, identical_instance,
    is_consistent,
)
from fairdiv.rules import (
    ef1_low_distortion_rule, ef1_rule, round_robin_rule, rule_prefix_length, uniformize,
)
from fairdiv.welfare import (
    empirical_distortion, expected_sw, gen_impossibility_fixtures, gen_mms_upper, gen_thm1, gen_thm2,
    mms_positive_witness, optimal_allocation, optimal_sw, sampled_expected_sw, social_welfare,
)

F = Fraction
HALF = F(1, 2)


def profile(*rows):
    return ValuationProfile(tuple(tuple(F(x) for x in row) for row in rows))


class TestWelfare:
    def test_social_welfare(self):
        identity = profile([1, 0], [0, 1])
        assert social_welfare(Allocation(((0,), (1,))), identity) == 2
        assert social_welfare(Allocation(((1,), (0,))), identity) == 0
        assert social_welfare(Allocation(((0, 1), ())), profile([HALF, HALF], [1, 0])) == 1

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            social_welfare(Allocation(((0,),)), profile([1, 0], [0, 1]))

    def test_optimal(self):
        assert optimal_sw(profile([1, 0], [0, 1])) == 2
        assert optimal_sw(profile([HALF, HALF], [1, 0])) == F(3, 2)
        assert optimal_sw(profile([F(1, 3)] * 3, [F(1, 3)] * 3)) == 1
        assert optimal_allocation(profile([HALF, HALF], [HALF, HALF])).bundles == ((0, 1), ())

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda m: st.lists(
        st.lists(st.integers(0, 9), min_size=m, max_size=m).filter(lambda r: sum(r) > 0),
        min_size=1, max_size=4)))
    def test_optimal_between_one_and_n(self, rows):
        v = profile(*[[F(w, sum(r)) for w in r] for r in rows])
        best = optimal_sw(v)
        assert 1 <= best <= v.n
        assert social_welfare(optimal_allocation(v), v) == best


class TestExpectedWelfare:
    def test_uniform_ef1_two_goods(self):
        inst = identical_instance(2, 2, 2)
        assert expected_sw(uniformize("ef1", inst), profile([HALF, HALF], [HALF, HALF])) == 1

    def test_degenerate_mixture(self):
        A = Allocation(((0,), (1,)))
        v = profile([1, 0], [HALF, HALF])
        assert expected_sw(ExplicitMixture(((A, F(1)),)), v) == social_welfare(A, v)

    def test_uniform_round_robin(self):
        inst = identical_instance(2, 2, 2)
        assert expected_sw(uniformize("round-robin", inst), profile([1, 0], [1, 0])) == 1

    def test_sampled_is_exact_for_constant_welfare(self):
        ra = uniformize("round-robin", identical_instance(3, 3, 3))
        v = profile([F(1, 3)] * 3, [F(1, 3)] * 3, [F(1, 3)] * 3)
        assert sampled_expected_sw(ra, v, samples=7, seed=5) == 1

    def test_sampled_is_reproducible(self):
        inst, v = random_instance(4, 6, 6, seed=2)
        ra = uniformize("round-robin", inst)
        assert sampled_expected_sw(ra, v, 20, 9) == sampled_expected_sw(ra, v, 20, 9)

    def test_sampled_needs_samples(self):
        with pytest.raises(PreconditionError):
            sampled_expected_sw(uniformize("round-robin", identical_instance(2, 2, 2)),
                                profile([1, 0], [1, 0]), samples=0)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            expected_sw(uniformize("round-robin", identical_instance(3, 3, 3)),
                        profile(*[[F(1, 3)] * 3] * 3), cap=2)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_random_order_welfare_floor(self, n):
        for m in range(1, 9):
            for seed in range(50):
                inst, v = random_instance(n, m, m, seed)
                assert expected_sw(uniformize("round-robin", inst), v) >= 1
                prefix = rule_prefix_length("ef1", inst)
                if 3 * prefix >= m:
                    assert expected_sw(uniformize("ef1", inst), v) >= F(1, 3), (n, m, seed)


class TestDistortion:
    def test_all_to_one(self):
        report = empirical_distortion("all-to-one", identical_instance(2, 2, 2), instance_id="x")
        assert report.worst_ratio == F(3, 2)
        assert report.profiles_checked == 4
        assert report.to_row() == {
            "instance_id": "x", "rule": "all-to-one", "ratio_num": 3, "ratio_den": 2,
            "mode": "exhaustive-vertices", "seed": 0,
        }

    def test_randomization_halves_the_ratio(self):
        inst = identical_instance(2, 2, 2)
        assert empirical_distortion("round-robin", inst).worst_ratio == 3
        assert empirical_distortion("uniform:round-robin", inst).worst_ratio == F(3, 2)

    def test_single_agent(self):
        assert empirical_distortion("round-robin", identical_instance(1, 3, 1)).worst_ratio == 1

    def test_zero_welfare_witness(self):
        report = empirical_distortion("ef1", identical_instance(2, 2, 0))
        assert report.is_infinite
        assert report.ratio_parts == (1, 0)
        assert social_welfare(ef1_rule(identical_instance(2, 2, 0)), report.witness) == 0

    def test_sampled_mode(self):
        inst, _ = random_instance(3, 5, 3, seed=1)
        report = empirical_distortion("ef1", inst, SearchMode.SAMPLED, seed=4, samples=25)
        assert report.mode is SearchMode.SAMPLED
        assert report.profiles_checked == 25
        assert report.worst_ratio >= 1
        assert is_consistent(report.witness, inst)

    def test_vertex_cap(self):
        with pytest.raises(CapExceeded):
            empirical_distortion("round-robin", identical_instance(3, 5, 1), vertex_cap=10)

    def test_lower_bound_family_is_hard_for_ef1(self):
        family = gen_thm2(4)
        report = empirical_distortion("ef1", family.instance)
        assert report.worst_ratio >= 6


class TestNestedTypes:
    def test_two_agents_base_two(self):
        family = gen_thm1(2, 2)
        assert family.instance.m == 4
        assert family.type_row(1) == (HALF, HALF, 0, 0)
        assert family.type_row(2) == (F(1, 4),) * 4
        assert family.blocks() == [(0, 1), (2, 3)]
        assert family.block_welfare_bound() == 1

    @pytest.mark.parametrize("n, x, bound", [(1, 3, F(2, 3)), (2, 4, F(3, 2)), (3, 2, F(3, 2))])
    def test_block_allocation(self, n, x, bound):
        family = gen_thm1(n, x)
        assert family.block_welfare_bound() == bound
        for levels in itertools.permutations(range(1, n + 1)):
            v = family.profile(levels)
            assert is_consistent(v, family.instance)
            assert social_welfare(family.block_allocation(levels), v) >= bound

    @pytest.mark.parametrize("rule", [ef1_rule, round_robin_rule, ef1_low_distortion_rule])
    def test_rules_hit_welfare_one(self, rule):
        family = gen_thm1(3, 2)
        levels, sw = family.worst_type_assignment(rule(family.instance))
        assert sorted(levels) == [1, 2, 3]
        assert sw <= 1

    def test_preconditions(self):
        with pytest.raises(CapExceeded):
            gen_thm1(20, 2)
        with pytest.raises(PreconditionError):
            gen_thm1(2, 1)
        with pytest.raises(PreconditionError):
            gen_thm1(2, 2).profile((1, 1))


class TestOneGoodPerAgent:
    def test_four_agents(self):
        family = gen_thm2(4)
        assert family.instance.rankings == ((0, 1, 2, 3), (0, 1, 2, 3), (0, 2, 1, 3), (0, 2, 1, 3))
        assert family.welfare_bound() == F(3, 2)
        for rule in (ef1_rule, ef1_low_distortion_rule, round_robin_rule):
            A = rule(family.instance)
            v = family.adversarial_profile(A)
            assert social_welfare(A, v) == F(1, 4)
            assert social_welfare(family.alternative_allocation(A), v) >= F(3, 2)

    def test_two_agents(self):
        family = gen_thm2(2)
        A = Allocation(((0,), (1,)))
        v = family.adversarial_profile(A)
        assert social_welfare(A, v) == HALF
        assert social_welfare(family.alternative_allocation(A), v) >= 1

    def test_odd_reduction(self):
        family = gen_thm2(5)
        assert family.instance.m == 5
        assert family.instance.rankings[4] == family.instance.rankings[0]
        assert all(r[-1] == 4 for r in family.instance.rankings)
        assert family.welfare_bound() == F(3, 2)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_every_one_good_allocation(self, n):
        family = gen_thm2(n)
        for owners in itertools.permutations(range(n)):
            A = Allocation.from_owners(owners, n)
            v = family.adversarial_profile(A)
            assert is_consistent(v, family.instance)
            assert social_welfare(A, v) == F(1, n)
            assert social_welfare(family.alternative_allocation(A), v) >= family.welfare_bound()

    def test_preconditions(self):
        with pytest.raises(NTooSmall):
            gen_thm2(1)
        with pytest.raises(PreconditionError):
            gen_thm2(2).adversarial_profile(Allocation(((0, 1), ())))


class TestMmsUpper:
    @pytest.mark.parametrize("n, m, k, cap", [
        (2, 4, 4, F(4, 3)), (2, 10, 10, F(5, 6)), (3, 9, 9, F(9, 11)),
    ])
    def test_formula(self, n, m, k, cap):
        assert gen_mms_upper(n, m, k).formula_cap() == cap

    def test_vacuous_denominator(self):
        assert gen_mms_upper(1, 3, 1).formula_cap() is None

    def test_preconditions(self):
        with pytest.raises(MNotGreaterThanN):
            gen_mms_upper(2, 2, 2)
        with pytest.raises(KBelowN):
            gen_mms_upper(3, 5, 2)
        with pytest.raises(PreconditionError):
            gen_mms_upper(2, 4, 5)

    def test_worked_example(self):
        family = gen_mms_upper(2, 4, 2)
        v, bound = family.adversarial_profile(Allocation(((0, 2), (1, 3))))
        assert v.values == (
            (F(1, 3), F(1, 3), 0, F(1, 3)),
            (HALF, F(1, 4), F(1, 4), 0),
        )
        assert bound == HALF

    @pytest.mark.slow
    @pytest.mark.parametrize("n, m", [(2, 3), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5)])
    def test_bound_is_attained(self, n, m):
        for k in range(n, m + 1):
            family = gen_mms_upper(n, m, k)
            for A in enumerate_allocations(n, m):
                v, bound = family.adversarial_profile(A)
                assert is_consistent(v, family.instance)
                assert any(v.value(i, A.bundles[i]) <= bound * mms_value(i, v, n) for i in range(n)), A


class TestImpossibilityFixtures:
    def test_catalogue(self):
        tags = [f.tag for f in gen_impossibility_fixtures()]
        assert tags == [PropertyTag.EFX, PropertyTag.EQ1, PropertyTag.EQX, PropertyTag.EF1_DISTORTION,
                        PropertyTag.MMS_POSITIVE, PropertyTag.MMS_K_N_MINUS_1]

    @pytest.mark.slow
    def test_every_allocation_is_refuted(self):
        checks = {
            PropertyTag.EFX: lambda A, v: not is_efx(A, v),
            PropertyTag.EQ1: lambda A, v: not is_eq1(A, v),
            PropertyTag.EQX: lambda A, v: not is_eqx(A, v),
            PropertyTag.EF1_DISTORTION: lambda A, v: not is_ef1(A, v) or social_welfare(A, v) == 0,
        }
        for fixture in gen_impossibility_fixtures():
            inst = fixture.instance
            for A in enumerate_allocations(inst.n, inst.m):
                v = fixture.builder(A)
                assert is_consistent(v, inst), (fixture.tag, A)
                if fixture.tag in checks:
                    assert checks[fixture.tag](A, v), (fixture.tag, A)
                elif fixture.tag is PropertyTag.MMS_POSITIVE:
                    assert any(v.value(i, A.bundles[i]) == 0 and mms_value(i, v, inst.n) == F(1, inst.n)
                               for i in range(inst.n)), A
                else:
                    share = (inst.m - inst.n + 2) // 2
                    assert any(v.value(i, A.bundles[i]) * share <= mms_value(i, v, inst.n)
                               for i in range(inst.n)), A

    @pytest.mark.slow
    @pytest.mark.parametrize("n, m, k", [(3, 4, 0), (3, 7, 0), (4, 5, 1), (4, 6, 0), (4, 7, 2)])
    def test_short_rankings_starve_someone(self, n, m, k):
        inst = identical_instance(n, m, k)
        for A in enumerate_allocations(n, m):
            v = mms_positive_witness(inst, A)
            assert is_consistent(v, inst)
            assert any(v.value(i, A.bundles[i]) == 0 and mms_value(i, v, n) == F(1, n) for i in range(n))
