from fractions import Fraction

import pytest

from analyzers.gen_analyzer import random_instance
from config.enums import LeftoverKind
from fairdiv.errors import (
    CapExceeded, InfeasibleDeadlines, KBelowN, KBelowThreshold, KZero, MNotGreaterThanN,
    PickWithoutRankedGood, PreconditionError, UnknownRule,
)
from fairdiv.fairness import is_alpha_mms, is_balanced, mms_value, necessary_ef1
from fairdiv.model import (
    Allocation, ExplicitMixture, Instance, PickingSequence, UniformPermutationMixture,
    identical_instance,
)
from fairdiv.polytope import ConsistentPolytope, bundle_value_bounds, sample_consistent_profile
from fairdiv.rules import (
    DeadlinePair, DeadlinePairSet, LeftoverPolicy, all_to_one_rule, apply_rule, edf_schedule,
    ef1_low_distortion_rule, ef1_rule, ef1_threshold, expand_mixture, guaranteed_alpha,
    mms_deadline_pairs, mms_low_distortion_pairs, mms_rule, mms_rule_k_n_minus_1,
    mms_rule_low_distortion, plan_for, round_robin_rule, rule_prefix_length, run_picking_sequence,
    run_relabeled, run_rule, uniformize, verify_deadlines,
)

F = Fraction


def pair_set(n, m, *pairs):
    return DeadlinePairSet(n, m, tuple(DeadlinePair(a, d) for a, d in pairs))


def support(mixture: ExplicitMixture):
    return {alloc.bundles: p for alloc, p in mixture.support}


class TestPickingEngine:
    def test_alternating_picks(self):
        inst = identical_instance(2, 4, 4)
        A = run_picking_sequence(
            inst, PickingSequence((0, 1, 0, 1)), LeftoverPolicy.one_each_ascending(),
        )
        assert A.bundles == ((0, 2), (1, 3))

    def test_leftovers_to_one_agent(self):
        inst = identical_instance(2, 3, 3)
        A = run_picking_sequence(inst, PickingSequence((0, 1)), LeftoverPolicy.all_to_agent(1))
        assert A.bundles == ((0,), (1, 2))

    def test_no_contention(self):
        inst = Instance(2, 2, 2, ((0, 1), (1, 0)))
        A = run_picking_sequence(inst, PickingSequence((0, 1)), LeftoverPolicy.one_each_ascending())
        assert A.bundles == ((0,), (1,))

    def test_round_robin_pad_wraps(self):
        inst = identical_instance(3, 5, 1)
        A = run_picking_sequence(inst, PickingSequence((0,)), LeftoverPolicy.round_robin_pad(2))
        assert A.bundles == ((0, 2), (3,), (1, 4))

    def test_pick_without_ranked_good(self):
        inst = identical_instance(2, 3, 1)
        with pytest.raises(PickWithoutRankedGood) as err:
            run_picking_sequence(inst, PickingSequence((0, 1)), LeftoverPolicy.all_to_agent(0))
        assert err.value.agent == 1 and err.value.position == 2

    def test_last_good_needs_no_ranking(self):
        inst = identical_instance(2, 2, 1)
        A = run_picking_sequence(inst, PickingSequence((0, 1)), LeftoverPolicy.all_to_agent(0))
        assert A.bundles == ((0,), (1,))

    def test_too_many_leftovers_for_one_each(self):
        inst = identical_instance(2, 3, 0)
        with pytest.raises(PreconditionError):
            run_picking_sequence(inst, PickingSequence(()), LeftoverPolicy.one_each_ascending())

    def test_policy_kinds(self):
        assert LeftoverPolicy.all_to_agent(3).kind is LeftoverKind.ALL_TO_AGENT
        assert LeftoverPolicy.round_robin_pad().agent == 0


class TestEf1:
    @pytest.mark.parametrize("n, m, expected", [
        (3, 6, 3), (3, 7, 5), (3, 8, 6), (2, 1, 0), (3, 2, 0), (1, 5, 4), (4, 0, 0),
    ])
    def test_threshold(self, n, m, expected):
        assert ef1_threshold(n, m) == expected

    def test_remainder_zero(self):
        assert ef1_rule(identical_instance(2, 4, 4)).bundles == ((0, 2), (1, 3))

    def test_no_rankings_needed_for_singletons(self):
        assert ef1_rule(identical_instance(3, 3, 0)).bundles == ((0,), (1,), (2,))

    def test_remainder_one(self):
        assert ef1_rule(identical_instance(2, 5, 3)).bundles == ((0, 2), (1, 3, 4))

    def test_single_good(self):
        assert ef1_rule(identical_instance(3, 1, 0)).bundles == ((0,), (), ())

    def test_below_threshold(self):
        with pytest.raises(KBelowThreshold) as err:
            ef1_rule(identical_instance(2, 4, 1))
        assert err.value.threshold == 2

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_necessarily_ef1_at_threshold(self, n):
        for m in range(0, 10):
            k = ef1_threshold(n, m)
            agreed = identical_instance(n, m, k)
            A = ef1_rule(agreed)
            assert necessary_ef1(A, agreed)
            assert is_balanced(A)
            for seed in range(100 if m else 0):
                inst, _ = random_instance(n, m, k, seed)
                A = ef1_rule(inst)
                assert necessary_ef1(A, inst), (n, m, k, seed, A)
                assert is_balanced(A)


class TestDeadlines:
    def test_pairs_small(self):
        assert mms_deadline_pairs(2, 4).pairs == (DeadlinePair(0, 1), DeadlinePair(1, 2))
        assert mms_deadline_pairs(1, 3).pairs == (DeadlinePair(0, 1), DeadlinePair(0, 3))

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_one_more_good_than_agents(self, n):
        pairs = mms_deadline_pairs(n, n + 1)
        assert sorted((p.agent, p.deadline) for p in pairs.pairs) == [(i, i + 1) for i in range(n)]

    def test_needs_more_goods_than_agents(self):
        with pytest.raises(MNotGreaterThanN):
            mms_deadline_pairs(3, 3)

    def test_augmented_pairs(self):
        pairs = mms_low_distortion_pairs(2, 6)
        assert DeadlinePair(0, 5) in pairs.pairs
        assert pairs.deadlines_of(0) == [1, 5]
        assert pairs.deadlines_of(1) == [2, 5]
        assert mms_low_distortion_pairs(2, 4).pairs == mms_deadline_pairs(2, 4).pairs

    def test_edf_pads_by_cycling(self):
        assert edf_schedule(pair_set(2, 4, (0, 1), (1, 2)), 4).picks == (0, 1, 0, 1)

    def test_edf_sorts_by_deadline(self):
        assert edf_schedule(pair_set(2, 3, (0, 1), (0, 3), (1, 2)), 3).picks == (0, 1, 0)

    def test_count_upto(self):
        pairs = pair_set(2, 3, (0, 1), (0, 3), (1, 2))
        assert [pairs.count_upto(d) for d in range(4)] == [0, 1, 2, 3]

    def test_edf_infeasible(self):
        with pytest.raises(InfeasibleDeadlines) as err:
            edf_schedule(pair_set(2, 2, (0, 1), (1, 1)), 2)
        assert err.value.d == 1

    def test_edf_infeasible_reports_first_overfull_deadline(self):
        pairs = pair_set(2, 4, (0, 1), (0, 3), (1, 3), (1, 3), (0, 4))
        assert pairs.count_upto(3) == 4
        with pytest.raises(InfeasibleDeadlines) as err:
            edf_schedule(pairs, 4)
        assert err.value.d == 3

    def test_verify(self):
        pairs = pair_set(2, 4, (0, 1), (1, 2))
        assert verify_deadlines(PickingSequence((0, 1, 0, 1)), pairs)
        assert not verify_deadlines(PickingSequence((1, 0)), pairs)
        assert verify_deadlines(PickingSequence((0, 1, 0)), pair_set(2, 3, (0, 1), (0, 3), (1, 2)))

    def test_seven_goods_three_agents(self):
        pairs = mms_low_distortion_pairs(3, 7)
        assert 7 in pairs.deadlines_of(0)
        assert verify_deadlines(edf_schedule(pairs, 7), pairs)

    @pytest.mark.slow
    def test_generated_pairs_are_feasible(self):
        for n in range(1, 21):
            for m in range(n + 1, 201):
                for pairs in (mms_deadline_pairs(n, m), mms_low_distortion_pairs(n, m)):
                    deadlines = sorted(p.deadline for p in pairs.pairs)
                    assert all(position <= d for position, d in enumerate(deadlines, start=1)), (n, m)
                    assert deadlines[-1] <= m
                    seq = edf_schedule(pairs, m)
                    assert verify_deadlines(seq, pairs)
                    assert seq.picks[:n] == tuple(range(n))


class TestMmsRules:
    def test_complete_rankings(self):
        assert mms_rule(identical_instance(2, 4, 4)).bundles == ((0, 2), (1, 3))

    def test_truncated_with_round_robin_leftovers(self):
        assert mms_rule(identical_instance(2, 4, 2)).bundles == ((0, 2), (1, 3))

    def test_single_agent(self):
        assert mms_rule(identical_instance(1, 2, 1)).bundles == ((0, 1),)

    def test_preconditions(self):
        with pytest.raises(KBelowN):
            mms_rule(identical_instance(3, 5, 2))
        with pytest.raises(MNotGreaterThanN):
            mms_rule(identical_instance(3, 3, 3))

    def test_k_n_minus_1(self):
        assert mms_rule_k_n_minus_1(identical_instance(3, 5, 2)).bundles == ((0,), (1,), (2, 3, 4))
        assert mms_rule_k_n_minus_1(identical_instance(2, 4, 1)).bundles == ((0,), (1, 2, 3))
        inst = Instance(2, 3, 1, ((2,), (0,)))
        assert mms_rule_k_n_minus_1(inst).bundles == ((2,), (0, 1))

    def test_k_n_minus_1_needs_ranked_goods(self):
        with pytest.raises(KBelowN):
            mms_rule_k_n_minus_1(identical_instance(4, 6, 2))

    def test_low_distortion_leftovers_to_agent_zero(self):
        A = mms_rule_low_distortion(identical_instance(2, 6, 3))
        assert A.bundles == ((0, 2, 3, 4, 5), (1,))

    def test_low_distortion_at_k_equal_m(self):
        assert (mms_rule_low_distortion(identical_instance(2, 4, 4)).bundles
                == mms_rule(identical_instance(2, 4, 4)).bundles)

    def test_guaranteed_alpha(self):
        assert guaranteed_alpha("mms", 2, 4, 4) == F(1, 3)
        assert guaranteed_alpha("mms", 2, 4, 2) == F(1, 9)
        assert guaranteed_alpha("uniform:mms-low-distortion", 2, 4, 4) == F(1, 3)
        assert guaranteed_alpha("mms-k-n-1", 3, 5, 2) == F(1, 2)
        assert guaranteed_alpha("ef1", 2, 4, 4) is None
        assert guaranteed_alpha("mms", 3, 3, 3) is None


class TestBaselinesAndRegistry:
    def test_round_robin_short_ranking(self):
        assert round_robin_rule(identical_instance(2, 3, 1)).bundles == ((0, 2), (1,))

    def test_round_robin_full(self):
        inst = Instance(2, 3, 2, ((2, 1), (2, 0)))
        assert round_robin_rule(inst).bundles == ((1, 2), (0,))

    def test_all_to_one(self):
        assert all_to_one_rule(identical_instance(3, 2, 0)).bundles == ((0, 1), (), ())

    def test_unknown_rule(self):
        with pytest.raises(UnknownRule):
            run_rule("serial-dictator", identical_instance(2, 2, 2))
        with pytest.raises(UnknownRule):
            apply_rule("uniform:nope", identical_instance(2, 2, 2))

    def test_prefix_lengths(self):
        inst = identical_instance(3, 8, 6)
        assert rule_prefix_length("ef1", inst) == 6
        assert rule_prefix_length("uniform:round-robin", inst) == 6
        assert len(plan_for("all-to-one", inst).sequence) == 0


class TestLowDistortionEf1:
    def test_fewer_goods_than_agents(self):
        inst = Instance(3, 2, 1, ((1,), (0,), (0,)))
        assert ef1_low_distortion_rule(inst).bundles == ((1,), (0,), ())

    def test_agent_zero_first(self):
        assert ef1_low_distortion_rule(identical_instance(2, 4, 4)).bundles == ((0, 2), (1, 3))

    def test_single_good(self):
        assert ef1_low_distortion_rule(identical_instance(2, 1, 1)).bundles == ((0,), ())

    def test_needs_a_ranking(self):
        with pytest.raises(KZero):
            ef1_low_distortion_rule(identical_instance(2, 2, 0))


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 7))
def test_agent_zero_welfare_floors(n):
    for m in range(1, 31):
        threshold = ef1_threshold(n, m)
        for k in range(1, m + 1):
            for seed in range(3):
                inst, _ = random_instance(n, m, k, seed)
                p = ConsistentPolytope.for_agent(inst, 0)
                if m > n and k >= n:
                    A = mms_rule_low_distortion(inst)
                    assert bundle_value_bounds(p, A.bundles[0])[0] >= F(1, 2 * n), (m, k, seed)
                if k >= threshold:
                    A = ef1_low_distortion_rule(inst)
                    assert bundle_value_bounds(p, A.bundles[0])[0] >= F(1, 3 * n), (m, k, seed)


class TestUniform:
    def test_two_agents_one_good_each(self):
        inst = identical_instance(2, 2, 2)
        ra = uniformize("ef1", inst)
        assert isinstance(ra, UniformPermutationMixture)
        assert support(expand_mixture(ra)) == {((0,), (1,)): F(1, 2), ((1,), (0,)): F(1, 2)}

    def test_single_agent(self):
        mixture = expand_mixture(uniformize("mms", identical_instance(1, 3, 1)))
        assert support(mixture) == {((0, 1, 2),): F(1)}

    def test_k_n_minus_1(self):
        mixture = expand_mixture(uniformize("mms-k-n-1", identical_instance(2, 4, 1)))
        assert support(mixture) == {((0,), (1, 2, 3)): F(1, 2), ((1, 2, 3), (0,)): F(1, 2)}

    def test_identical_outcomes_merge(self):
        mixture = expand_mixture(uniformize("round-robin", Instance(2, 0, 0, ((), ()))))
        assert support(mixture) == {((), ()): F(1)}

    def test_all_to_one_is_a_lottery(self):
        mixture = expand_mixture(uniformize("all-to-one", Instance(2, 1, 1, ((0,), (0,)))))
        assert support(mixture) == {((0,), ()): F(1, 2), ((), (0,)): F(1, 2)}

    def test_relabeled_bundles_follow_agents(self):
        inst = Instance(2, 2, 1, ((0,), (1,)))
        assert run_relabeled("round-robin", inst, (1, 0)).bundles == ((0,), (1,))

    def test_wrapped_rule_errors_surface(self):
        with pytest.raises(KBelowThreshold):
            uniformize("ef1", identical_instance(2, 4, 0))

    def test_expansion_cap(self):
        with pytest.raises(CapExceeded):
            expand_mixture(uniformize("round-robin", identical_instance(4, 4, 4)), cap=3)

    def test_apply_rule(self):
        inst = identical_instance(2, 2, 2)
        assert isinstance(apply_rule("ef1", inst), Allocation)
        assert isinstance(apply_rule("uniform:ef1", inst), UniformPermutationMixture)


@pytest.mark.slow
class TestMmsGuaranteesSampled:
    DRAWS = 200

    @classmethod
    def profiles(cls, inst, v, seed):
        yield v
        for offset in range(cls.DRAWS):
            yield sample_consistent_profile(inst, 1000 * seed + offset)

    @pytest.mark.parametrize("n, m", [(n, m) for n in (2, 3) for m in range(n + 1, 10)])
    def test_every_k_meets_its_alpha(self, n, m):
        rules = (("mms", mms_rule), ("mms-low-distortion", mms_rule_low_distortion))
        for k in range(n - 1, m + 1):
            inst, v = random_instance(n, m, k, seed=k)
            if k == n - 1:
                A = mms_rule_k_n_minus_1(inst)
                alpha = guaranteed_alpha("mms-k-n-1", n, m, k)
                for w in self.profiles(inst, v, k):
                    assert is_alpha_mms(A, w, alpha), (m, k)
                    assert w.value(n - 1, A.bundles[n - 1]) >= mms_value(n - 1, w, n), (m, k)
                continue
            for rule_id, rule in rules:
                A = rule(inst)
                alpha = guaranteed_alpha(rule_id, n, m, k)
                for w in self.profiles(inst, v, k):
                    assert is_alpha_mms(A, w, alpha), (rule_id, m, k)
