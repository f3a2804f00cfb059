"""
@file rules.py
@brief Ordinal allocation rules built on picking sequences.

Every deterministic rule is a PickingPlan: a sequence of picks plus a policy
for the goods left over. Rules:
  - round-robin, all-to-one (baselines);
  - ef1 and ef1-low-distortion (EF1 from top-k rankings at the threshold);
  - mms, mms-low-distortion (earliest-deadline-first schedules);
  - mms-k-n-1 (k = n - 1);
  - uniform:<rule>, the same rule under a uniformly random agent relabeling.

Agents are 0-indexed; deadlines are 1-based positions in the sequence.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from config.enums import Caps, LeftoverKind, RuleId, UNIFORM_PREFIX
from config.messages import LogMsg
from fairdiv.errors import (
    CapExceeded, InfeasibleDeadlines, KBelowN, KBelowThreshold, KZero,
    MNotGreaterThanN, PickWithoutRankedGood, PreconditionError, UnknownRule,
)
from fairdiv.model import (
    Allocation, ExplicitMixture, Instance, PickingSequence, RandomizedAllocation,
    UniformPermutationMixture, harmonic, validate_sequence,
)
from utilits.logger import analysis_logger

logger = analysis_logger.get_logger(__name__)


# Types

@dataclass(frozen=True)
class DeadlinePair:
    """@brief Agent must have made its r-th pick by position `deadline`."""
    agent: int
    deadline: int


@dataclass(frozen=True)
class DeadlinePairSet:
    n: int
    m: int
    pairs: Tuple[DeadlinePair, ...]

    def deadlines_of(self, agent: int) -> List[int]:
        return sorted(p.deadline for p in self.pairs if p.agent == agent)

    def count_upto(self, d: int) -> int:
        return sum(1 for p in self.pairs if p.deadline <= d)


@dataclass(frozen=True)
class LeftoverPolicy:
    """
    @brief How goods remaining after the last pick are handed out.
    `agent` is the receiving agent for ALL_TO_AGENT and the first agent served
    for ONE_EACH_ASCENDING and ROUND_ROBIN_PAD.
    """
    kind: LeftoverKind
    agent: int = 0

    @classmethod
    def one_each_ascending(cls, start: int = 0) -> "LeftoverPolicy":
        return cls(LeftoverKind.ONE_EACH_ASCENDING, start)

    @classmethod
    def all_to_agent(cls, agent: int) -> "LeftoverPolicy":
        return cls(LeftoverKind.ALL_TO_AGENT, agent)

    @classmethod
    def round_robin_pad(cls, start: int = 0) -> "LeftoverPolicy":
        return cls(LeftoverKind.ROUND_ROBIN_PAD, start)


@dataclass(frozen=True)
class PickingPlan:
    sequence: PickingSequence
    leftovers: LeftoverPolicy


# Picking engine

def run_picking_sequence(inst: Instance, seq: PickingSequence, leftovers: LeftoverPolicy) -> Allocation:
    """
    @brief Let agents pick in order, each taking its highest-ranked remaining good,
           then distribute what is left according to `leftovers`.
    A pick with no ranked good left is allowed only when exactly one good remains.
    @throws PickWithoutRankedGood, PreconditionError
    """
    validate_sequence(seq, inst.n, inst.m)
    remaining = set(range(inst.m))
    bundles: List[List[int]] = [[] for _ in range(inst.n)]

    for position, agent in enumerate(seq.picks, start=1):
        choice = next((g for g in inst.rankings[agent] if g in remaining), None)
        if choice is None:
            if len(remaining) != 1:
                raise PickWithoutRankedGood(agent, position)
            choice = next(iter(remaining))
        remaining.discard(choice)
        bundles[agent].append(choice)

    left = sorted(remaining)
    if left:
        _hand_out(bundles, left, leftovers, inst.n)
    return Allocation(tuple(tuple(b) for b in bundles))


def _hand_out(bundles: List[List[int]], goods: List[int], policy: LeftoverPolicy, n: int) -> None:
    if not 0 <= policy.agent < n:
        raise PreconditionError("leftover agent", policy.agent, f"outside 0..{n - 1}")
    if policy.kind is LeftoverKind.ALL_TO_AGENT:
        bundles[policy.agent].extend(goods)
    elif policy.kind is LeftoverKind.ONE_EACH_ASCENDING:
        if policy.agent + len(goods) > n:
            raise PreconditionError("leftover goods", len(goods),
                                    f"more than agents {policy.agent}..{n - 1}")
        for offset, good in enumerate(goods):
            bundles[policy.agent + offset].append(good)
    else:
        for offset, good in enumerate(goods):
            bundles[(policy.agent + offset) % n].append(good)


def run_plan(inst: Instance, plan: PickingPlan) -> Allocation:
    return run_picking_sequence(inst, plan.sequence, plan.leftovers)


def round_robin_sequence(n: int, length: int, start: int = 0) -> PickingSequence:
    return PickingSequence(tuple((start + t) % n for t in range(length)))


# EF1

def ef1_threshold(n: int, m: int) -> int:
    """
    @brief Smallest k for which EF1 is achievable from top-k rankings.
    @return m - n if m mod n = 0; m - 2 if m mod n = 1; m - (m mod n) otherwise (never negative)
    """
    r = m % n
    if r == 0:
        return max(m - n, 0)
    if r == 1:
        return max(m - 2, 0)
    return m - r


def plan_ef1(n: int, m: int) -> PickingPlan:
    """
    @brief Round robin over the threshold prefix, then the last-round fix-up:
           one good per agent (m mod n != 1) or both leftovers to agent n-1.
    """
    r = m % n
    if m == 0:
        return PickingPlan(PickingSequence(()), LeftoverPolicy.one_each_ascending())
    if r == 1:
        if m == 1:
            return PickingPlan(PickingSequence(()), LeftoverPolicy.all_to_agent(0))
        return PickingPlan(round_robin_sequence(n, m - 2), LeftoverPolicy.all_to_agent(n - 1))
    steps = m - n if r == 0 else m - r
    return PickingPlan(round_robin_sequence(n, steps), LeftoverPolicy.one_each_ascending())


def _require_ef1_threshold(inst: Instance) -> None:
    threshold = ef1_threshold(inst.n, inst.m)
    if inst.k < threshold:
        raise KBelowThreshold(inst.k, threshold, inst.n, inst.m)


def plan_ef1_rule(inst: Instance) -> PickingPlan:
    _require_ef1_threshold(inst)
    return plan_ef1(inst.n, inst.m)


def ef1_rule(inst: Instance) -> Allocation:
    """
    @brief EF1 for every consistent valuation, given k >= ef1_threshold(n, m).
    @throws KBelowThreshold
    """
    return run_plan(inst, plan_ef1_rule(inst))


def plan_ef1_low_distortion(inst: Instance) -> PickingPlan:
    if inst.k == 0:
        raise KZero(RuleId.EF1_LOW_DISTORTION.value)
    if inst.m <= inst.n:
        return PickingPlan(PickingSequence((0,) if inst.m else ()),
                           LeftoverPolicy.one_each_ascending(1 if inst.n > 1 else 0))
    _require_ef1_threshold(inst)
    return plan_ef1(inst.n, inst.m)


def ef1_low_distortion_rule(inst: Instance) -> Allocation:
    """
    @brief EF1 rule in which agent 0 always gets its favorite good first.
    m <= n: agent 0 takes its top good, the other goods go to agents 1, 2, ...
    m > n: the ef1 plan, whose round robin starts with agent 0.
    @throws KZero, KBelowThreshold
    """
    return run_plan(inst, plan_ef1_low_distortion(inst))


# Deadline schedules

def _require_m_above_n(n: int, m: int) -> None:
    if m <= n:
        raise MNotGreaterThanN(n, m)


def mms_deadline_pairs(n: int, m: int) -> DeadlinePairSet:
    """
    @brief Pairs (i, i + floor(j * 2H_n * (n - i + 1))) for 1-based i and
           0 <= j <= floor((m - i) / (2H_n * (n - i + 1))), evaluated exactly.
    Agent ids in the result are 0-based.
    @throws MNotGreaterThanN
    """
    _require_m_above_n(n, m)
    two_h = 2 * harmonic(n)
    pairs = []
    for i in range(1, n + 1):
        spacing = two_h * (n - i + 1)
        last_j = math.floor(Fraction(m - i) / spacing)
        for j in range(last_j + 1):
            pairs.append(DeadlinePair(i - 1, i + math.floor(j * spacing)))
    return DeadlinePairSet(n, m, tuple(pairs))


def mms_low_distortion_pairs(n: int, m: int) -> DeadlinePairSet:
    """@brief mms_deadline_pairs plus (agent 0, 2nj + 1) for every j >= 1 with 2nj + 1 <= m."""
    base = mms_deadline_pairs(n, m)
    extra = tuple(DeadlinePair(0, 2 * n * j + 1) for j in range(1, (m - 1) // (2 * n) + 1))
    return DeadlinePairSet(n, m, base.pairs + extra)


def edf_schedule(pairs: DeadlinePairSet, length: int) -> PickingSequence:
    """
    @brief Earliest-deadline-first order of the pairs (ties by agent id), padded
           to `length` by cycling agents from 0.
    A prefix longer than `length` is returned whole.
    @throws InfeasibleDeadlines when more than d pairs have deadline <= d
    """
    for d in sorted({p.deadline for p in pairs.pairs}):
        if pairs.count_upto(d) > d:
            raise InfeasibleDeadlines(d)
    ordered = sorted(pairs.pairs, key=lambda p: (p.deadline, p.agent))
    picks = [p.agent for p in ordered]
    pad = length - len(picks)
    if pad > 0:
        picks.extend(t % pairs.n for t in range(pad))
    logger.debug(LogMsg.EDF_SCHEDULE.format(len(ordered), len(picks)))
    return PickingSequence(tuple(picks))


def verify_deadlines(seq: PickingSequence, pairs: DeadlinePairSet) -> bool:
    """
    @brief True iff every agent's r-th occurrence is at or before its r-th smallest deadline.
    """
    occurrences: Dict[int, List[int]] = defaultdict(list)
    for position, agent in enumerate(seq.picks, start=1):
        occurrences[agent].append(position)
    for agent in {p.agent for p in pairs.pairs}:
        deadlines = pairs.deadlines_of(agent)
        seen = occurrences.get(agent, [])
        if len(seen) < len(deadlines):
            return False
        if any(pos > d for pos, d in zip(seen, deadlines)):
            return False
    return True


# MMS rules

def _require_mms(inst: Instance, min_k: int) -> None:
    _require_m_above_n(inst.n, inst.m)
    if inst.k < min_k:
        raise KBelowN(inst.k, min_k, inst.n)


def plan_mms(inst: Instance) -> PickingPlan:
    _require_mms(inst, inst.n)
    seq = edf_schedule(mms_deadline_pairs(inst.n, inst.m), inst.m).truncated(inst.k)
    return PickingPlan(seq, LeftoverPolicy.round_robin_pad())


def mms_rule(inst: Instance) -> Allocation:
    """
    @brief EDF schedule over the deadline pairs, truncated to k picks; leftovers
           dealt round robin from agent 0.
    Guarantees (k-n+1)/(m-n+1) * 1/(2H_n) of every agent's maximin share.
    @throws KBelowN, MNotGreaterThanN
    """
    return run_plan(inst, plan_mms(inst))


def plan_mms_k_n_minus_1(inst: Instance) -> PickingPlan:
    _require_mms(inst, inst.n - 1)
    return PickingPlan(PickingSequence(tuple(range(inst.n - 1))),
                       LeftoverPolicy.all_to_agent(inst.n - 1))


def mms_rule_k_n_minus_1(inst: Instance) -> Allocation:
    """
    @brief Agents 0..n-2 take one ranked good each, agent n-1 takes the rest.
    @throws KBelowN, MNotGreaterThanN
    """
    return run_plan(inst, plan_mms_k_n_minus_1(inst))


def plan_mms_low_distortion(inst: Instance) -> PickingPlan:
    _require_mms(inst, inst.n)
    seq = edf_schedule(mms_low_distortion_pairs(inst.n, inst.m), inst.m).truncated(inst.k)
    return PickingPlan(seq, LeftoverPolicy.all_to_agent(0))


def mms_rule_low_distortion(inst: Instance) -> Allocation:
    """
    @brief mms_rule with extra deadlines 2nj + 1 for agent 0 and all leftovers
           to agent 0, so agent 0 is worth at least 1/(2n) under any consistent valuation.
    @throws KBelowN, MNotGreaterThanN
    """
    return run_plan(inst, plan_mms_low_distortion(inst))


# Baselines

def plan_round_robin(inst: Instance) -> PickingPlan:
    length = inst.m if inst.k >= inst.m - 1 else inst.k
    return PickingPlan(round_robin_sequence(inst.n, length),
                       LeftoverPolicy.round_robin_pad(length % inst.n))


def round_robin_rule(inst: Instance) -> Allocation:
    """@brief Round robin for k picks (all m when k >= m - 1), the cycle continues over leftovers."""
    return run_plan(inst, plan_round_robin(inst))


def plan_all_to_one(inst: Instance) -> PickingPlan:
    return PickingPlan(PickingSequence(()), LeftoverPolicy.all_to_agent(0))


def all_to_one_rule(inst: Instance) -> Allocation:
    return run_plan(inst, plan_all_to_one(inst))


# Registry

PLANNERS: Dict[str, Callable[[Instance], PickingPlan]] = {
    RuleId.ROUND_ROBIN.value:        plan_round_robin,
    RuleId.ALL_TO_ONE.value:         plan_all_to_one,
    RuleId.EF1.value:                plan_ef1_rule,
    RuleId.EF1_LOW_DISTORTION.value: plan_ef1_low_distortion,
    RuleId.MMS.value:                plan_mms,
    RuleId.MMS_K_N_MINUS_1.value:    plan_mms_k_n_minus_1,
    RuleId.MMS_LOW_DISTORTION.value: plan_mms_low_distortion,
}


def plan_for(rule_id: str, inst: Instance) -> PickingPlan:
    """
    @brief Picking plan of a deterministic rule.
    @throws UnknownRule
    """
    planner = PLANNERS.get(rule_id)
    if planner is None:
        raise UnknownRule(rule_id)
    return planner(inst)


def run_rule(rule_id: str, inst: Instance) -> Allocation:
    """@brief Run a deterministic rule by id."""
    logger.debug(LogMsg.RULE_START.format(rule_id, inst.n, inst.m, inst.k))
    alloc = run_plan(inst, plan_for(rule_id, inst))
    logger.debug(LogMsg.RULE_DONE.format(rule_id, alloc.sizes()))
    return alloc


def rule_prefix_length(rule_id: str, inst: Instance) -> int:
    """@brief Number of picks in the rule's sequence (the rest are leftovers)."""
    return len(plan_for(_base_rule(rule_id), inst).sequence)


def _base_rule(rule_id: str) -> str:
    return rule_id[len(UNIFORM_PREFIX):] if rule_id.startswith(UNIFORM_PREFIX) else rule_id


def uniformize(rule_id: str, inst: Instance) -> UniformPermutationMixture:
    """
    @brief Uniform mixture of the rule over all agent relabelings.
    Only the plan for the given labeling is built, so precondition errors surface here.
    """
    plan_for(rule_id, inst)
    return UniformPermutationMixture(rule_id, inst)


def run_relabeled(rule_id: str, inst: Instance, order: Sequence[int]) -> Allocation:
    """
    @brief Run the rule with new agent p being old agent order[p]; bundles are
           returned under the original labels.
    """
    relabeled = run_rule(rule_id, inst.relabel(order))
    bundles: List[Tuple[int, ...]] = [()] * inst.n
    for position, agent in enumerate(order):
        bundles[agent] = relabeled.bundles[position]
    return Allocation(tuple(bundles))


def expand_mixture(ra: RandomizedAllocation, cap: int = Caps.PERMUTATION_MAX_N) -> ExplicitMixture:
    """
    @brief Explicit form of a randomized allocation; identical outcomes are merged.
    @throws CapExceeded when n exceeds cap for a permutation mixture
    """
    if isinstance(ra, ExplicitMixture):
        return ra
    n = ra.instance.n
    if n > cap:
        raise CapExceeded("n", n, cap)
    total = math.factorial(n)
    logger.debug(LogMsg.MIXTURE_EXPAND.format(ra.rule_id, total))
    counts: Dict[Allocation, int] = {}
    for order in itertools.permutations(range(n)):
        alloc = run_relabeled(ra.rule_id, ra.instance, order)
        counts[alloc] = counts.get(alloc, 0) + 1
    return ExplicitMixture(tuple((a, Fraction(c, total)) for a, c in counts.items()))


def apply_rule(rule_id: str, inst: Instance) -> Union[Allocation, UniformPermutationMixture]:
    """
    @brief Resolve a rule id, including `uniform:<rule>`.
    @throws UnknownRule and the rule's own precondition errors
    """
    if rule_id.startswith(UNIFORM_PREFIX):
        return uniformize(_base_rule(rule_id), inst)
    return run_rule(rule_id, inst)


def guaranteed_alpha(rule_id: str, n: int, m: int, k: int) -> Optional[Fraction]:
    """
    @brief Fraction of every agent's maximin share the rule guarantees, None if
           the rule makes no MMS promise on (n, m, k).
    """
    rule_id = _base_rule(rule_id)
    if m <= n:
        return None
    if rule_id in (RuleId.MMS.value, RuleId.MMS_LOW_DISTORTION.value) and k >= n:
        return Fraction(k - n + 1, m - n + 1) / (2 * harmonic(n))
    if rule_id == RuleId.MMS_K_N_MINUS_1.value and k >= n - 1:
        return Fraction(1, (m - n + 2) // 2)
    return None
