"""
@file welfare.py
@brief Social welfare, empirical distortion, and adversarial instance families
       that replay the welfare and maximin-share lower-bound constructions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config.enums import Caps, Defaults, PropertyTag, SearchMode
from config.messages import LogMsg
from fairdiv.errors import (
    CapExceeded, DimensionMismatch, KBelowN, MNotGreaterThanN, NTooSmall, PreconditionError,
)
from fairdiv.model import (
    Allocation, ExplicitMixture, Instance, RandomizedAllocation, UniformPermutationMixture,
    ValuationProfile, harmonic, identical_instance,
)
from fairdiv.polytope import sample_consistent_profile, vertex_profiles
from fairdiv.rules import apply_rule, expand_mixture, run_relabeled
from utilits.logger import analysis_logger

logger = analysis_logger.get_logger(__name__)


# Welfare

def social_welfare(A: Allocation, v: ValuationProfile) -> Fraction:
    """@brief SW(A, v) = sum_i v_i(A_i), exact."""
    if A.n != v.n:
        raise DimensionMismatch("allocation agents", A.n, v.n)
    if A.m != v.m:
        raise DimensionMismatch("allocation goods", A.m, v.m)
    return sum((v.value(i, A.bundles[i]) for i in range(A.n)), Fraction(0))


def optimal_allocation(v: ValuationProfile) -> Allocation:
    """@brief Each good to an agent valuing it most (lowest id on ties)."""
    owners = [max(range(v.n), key=lambda i: (v.values[i][g], -i)) for g in range(v.m)]
    return Allocation.from_owners(owners, v.n)


def optimal_sw(v: ValuationProfile) -> Fraction:
    """@brief max over allocations of SW = sum_g max_i v_i(g)."""
    return sum((max(v.values[i][g] for i in range(v.n)) for g in range(v.m)), Fraction(0))


def expected_sw(ra: RandomizedAllocation, v: ValuationProfile,
                cap: int = Caps.PERMUTATION_MAX_N) -> Fraction:
    """
    @brief Exact expected welfare over the (expanded) support.
    @throws CapExceeded for permutation mixtures with n above cap
    """
    mixture = expand_mixture(ra, cap)
    return sum((p * social_welfare(a, v) for a, p in mixture.support), Fraction(0))


def sampled_expected_sw(ra: RandomizedAllocation, v: ValuationProfile,
                        samples: int = Defaults.SAMPLES, seed: int = Defaults.SEED) -> Fraction:
    """
    @brief Sample mean of welfare over random agent relabelings (exact rational
           mean of the draws). Explicit mixtures are evaluated exactly.
    """
    if isinstance(ra, ExplicitMixture):
        return expected_sw(ra, v)
    if samples < 1:
        raise PreconditionError("samples", samples, "at least one")
    rng = np.random.default_rng(seed)
    total = Fraction(0)
    for _ in range(samples):
        order = [int(a) for a in rng.permutation(ra.instance.n)]
        total += social_welfare(run_relabeled(ra.rule_id, ra.instance, order), v)
    return total / samples


# Distortion

@dataclass
class DistortionReport:
    """
    @brief Worst welfare ratio found over explored consistent profiles; a lower
           bound on the rule's distortion at this instance.
    worst_ratio is None when a zero-welfare witness was found (ratio +infinity).
    """
    instance_id: str
    rule_id: str
    worst_ratio: Optional[Fraction]
    witness: Optional[ValuationProfile]
    mode: SearchMode
    seed: int
    profiles_checked: int = 0

    @property
    def is_infinite(self) -> bool:
        return self.worst_ratio is None

    @property
    def ratio_parts(self) -> Tuple[int, int]:
        """@brief (num, den); infinity is (1, 0)."""
        if self.worst_ratio is None:
            return 1, 0
        return self.worst_ratio.numerator, self.worst_ratio.denominator

    def to_row(self) -> Dict[str, object]:
        num, den = self.ratio_parts
        return {
            "instance_id": self.instance_id,
            "rule": self.rule_id,
            "ratio_num": num,
            "ratio_den": den,
            "mode": self.mode.value,
            "seed": self.seed,
        }


def empirical_distortion(rule_id: str, inst: Instance,
                         mode: SearchMode = SearchMode.EXHAUSTIVE_VERTICES,
                         seed: int = Defaults.SEED,
                         samples: int = Defaults.SAMPLES,
                         instance_id: str = "",
                         vertex_cap: int = Caps.VERTEX_PRODUCT_MAX,
                         permutation_cap: int = Caps.PERMUTATION_MAX_N) -> DistortionReport:
    """
    @brief max of optimal_sw(v) / SW over vertex profiles (exhaustive) or sampled
           consistent profiles; randomized rules use exact expected welfare.
    Stops at the first zero-welfare witness.
    @throws CapExceeded
    """
    outcome = apply_rule(rule_id, inst)
    mixture = expand_mixture(outcome, permutation_cap) if isinstance(outcome, UniformPermutationMixture) else None

    def welfare(v: ValuationProfile) -> Fraction:
        if mixture is not None:
            return expected_sw(mixture, v)
        return social_welfare(outcome, v)

    if mode is SearchMode.EXHAUSTIVE_VERTICES:
        profiles: Iterable[ValuationProfile] = vertex_profiles(inst, vertex_cap)
    else:
        rng = np.random.default_rng(seed)
        profiles = (sample_consistent_profile(inst, rng) for _ in range(samples))

    report = DistortionReport(instance_id, rule_id, Fraction(1), None, mode, seed)
    for v in profiles:
        report.profiles_checked += 1
        sw = welfare(v)
        best = optimal_sw(v)
        if sw == 0:
            if best > 0:
                report.worst_ratio, report.witness = None, v
                break
            continue
        ratio = best / sw
        if report.witness is None or ratio > report.worst_ratio:
            report.worst_ratio, report.witness = ratio, v
    logger.debug(LogMsg.DISTORTION_DONE.format(mode.value, rule_id, report.worst_ratio))
    return report


# Welfare lower bound with nested uniform types

@dataclass(frozen=True)
class Thm1Family:
    """
    @brief m = x^n goods ranked identically by id; type l (1..n) values the
           first x^l goods at 1/x^l each. Agents are assigned types by a bijection.
    """
    n: int
    x: int
    instance: Instance

    def type_row(self, level: int) -> Tuple[Fraction, ...]:
        width = self.x ** level
        share = Fraction(1, width)
        return tuple(share if g < width else Fraction(0) for g in range(self.instance.m))

    def profile(self, assignment: Sequence[int]) -> ValuationProfile:
        """@param assignment assignment[agent] = type level in 1..n, a bijection"""
        if sorted(assignment) != list(range(1, self.n + 1)):
            raise PreconditionError("type assignment", tuple(assignment), "must be a bijection onto 1..n")
        return ValuationProfile(tuple(self.type_row(level) for level in assignment))

    def blocks(self) -> List[Tuple[int, ...]]:
        """@brief W_1 = first x goods, W_l = goods x^(l-1)..x^l - 1."""
        edges = [0] + [self.x ** level for level in range(1, self.n + 1)]
        return [tuple(range(edges[level - 1], edges[level])) for level in range(1, self.n + 1)]

    def block_allocation(self, assignment: Sequence[int]) -> Allocation:
        """@brief The agent of type l receives W_l."""
        blocks = self.blocks()
        return Allocation(tuple(blocks[level - 1] for level in assignment))

    def block_welfare_bound(self) -> Fraction:
        return (1 - Fraction(1, self.x)) * self.n

    def worst_type_assignment(self, A: Allocation) -> Tuple[Tuple[int, ...], Fraction]:
        """
        @brief Type bijection minimizing SW(A). The average over bijections is
               exactly 1, so the minimum never exceeds 1.
        @throws CapExceeded when n exceeds the permutation cap
        """
        if self.n > Caps.PERMUTATION_MAX_N:
            raise CapExceeded("n", self.n, Caps.PERMUTATION_MAX_N)
        worst: Optional[Tuple[Tuple[int, ...], Fraction]] = None
        for levels in itertools.permutations(range(1, self.n + 1)):
            sw = social_welfare(A, self.profile(levels))
            if worst is None or sw < worst[1]:
                worst = (levels, sw)
        return worst


def gen_thm1(n: int, x: int, cap: int = Caps.THM1_MAX_GOODS) -> Thm1Family:
    """
    @brief Instance with x^n identically ranked goods and its type family.
    @throws PreconditionError (x < 2 or n < 1), CapExceeded
    """
    if n < 1:
        raise PreconditionError("n", n, "at least one agent")
    if x < 2:
        raise PreconditionError("x", x, "at least 2")
    m = x ** n
    if m > cap:
        raise CapExceeded("x^n", m, cap)
    return Thm1Family(n, x, identical_instance(n, m, m))


# Quadratic lower bound for rules giving one good per agent

@dataclass(frozen=True)
class Thm2Family:
    """
    @brief m = n goods: good 0 ranked first by all, then group goods ranked second
           by pairs of agents (2l, 2l + 1), remaining goods in ascending order.
    For odd n the last good is ranked last by everyone and the last agent
    copies agent 0's ranking, so agent 0's group has three members.
    """
    n: int
    instance: Instance

    @property
    def even_part(self) -> int:
        return self.n - self.n % 2

    def group_good(self, agent: int) -> int:
        return self.instance.rankings[agent][1]

    def _losers(self, A: Allocation) -> Tuple[int, Dict[int, int]]:
        owners = A.owners()
        holder = owners[0]
        groups: Dict[int, List[int]] = {}
        for agent in range(self.n):
            groups.setdefault(self.group_good(agent), []).append(agent)
        losers = {}
        for good, members in groups.items():
            if holder in members:
                continue
            losers[good] = next(a for a in members if owners[good] != a)
        return holder, losers

    def _require_singletons(self, A: Allocation) -> None:
        if A.n != self.n or A.m != self.n or any(len(b) != 1 for b in A.bundles):
            raise PreconditionError("allocation", A.bundles, "one good per agent")

    def adversarial_profile(self, A: Allocation) -> ValuationProfile:
        """
        @brief Consistent profile under which SW(A) = 1/n: the holder of good 0
               is uniform, one non-owner per other group splits 1/2 between good 0
               and its group good, everyone else values only good 0.
        """
        self._require_singletons(A)
        holder, losers = self._losers(A)
        loser_of = {a: g for g, a in losers.items()}
        half = Fraction(1, 2)
        rows = []
        for agent in range(self.n):
            row = [Fraction(0)] * self.n
            if agent == holder:
                row = [Fraction(1, self.n)] * self.n
            elif agent in loser_of:
                row[0], row[loser_of[agent]] = half, half
            else:
                row[0] = Fraction(1)
            rows.append(tuple(row))
        return ValuationProfile(tuple(rows))

    def alternative_allocation(self, A: Allocation) -> Allocation:
        """
        @brief One good per agent: good 0 to a group mate of its holder, each
               designated loser gets its group good, the rest fill in ascending order.
        """
        self._require_singletons(A)
        holder, losers = self._losers(A)
        owners: Dict[int, int] = {}
        mate = next(a for a in range(self.n) if a != holder and self.group_good(a) == self.group_good(holder))
        owners[0] = mate
        for good, agent in losers.items():
            owners[good] = agent
        free_agents = [a for a in range(self.n) if a not in owners.values()]
        free_goods = [g for g in range(self.n) if g not in owners]
        owners.update(zip(free_goods, free_agents))
        return Allocation.from_owners([owners[g] for g in range(self.n)], self.n)

    def welfare_bound(self) -> Fraction:
        """@brief The alternative allocation is worth at least n'/4 + 1/2, n' = even part of n."""
        return Fraction(self.even_part, 4) + Fraction(1, 2)


def gen_thm2(n: int) -> Thm2Family:
    """
    @brief Build the one-good-per-agent lower-bound instance; odd n is reduced to
           the even construction on n - 1 agents plus a last-ranked good and a clone.
    @throws NTooSmall
    """
    if n < 2:
        raise NTooSmall(2, n)
    base = n - n % 2
    rankings = []
    for agent in range(base):
        group = 1 + agent // 2
        rest = [g for g in range(1, base) if g != group]
        rankings.append([0, group] + rest)
    if n != base:
        for ranking in rankings:
            ranking.append(base)
        rankings.append(list(rankings[0]))
    return Thm2Family(n, Instance(n, n, n, tuple(tuple(r) for r in rankings)))


# Maximin-share upper bound for k >= n

@dataclass(frozen=True)
class MmsUpperFamily:
    """
    @brief All agents rank goods 0..k-1 in order and leave the rest unranked.
    """
    n: int
    m: int
    k: int
    instance: Instance

    def formula_cap(self) -> Optional[Fraction]:
        """@brief k / (H_n (m - n) - (m - k)); None when the denominator is not positive."""
        denominator = harmonic(self.n) * (self.m - self.n) - (self.m - self.k)
        if denominator <= 0:
            return None
        return Fraction(self.k) / denominator

    def _zero_row(self, extra: Sequence[int]) -> Tuple[Fraction, ...]:
        row = [Fraction(0)] * self.m
        for g in extra:
            row[g] = Fraction(1, self.n)
        return tuple(row)

    def adversarial_profile(self, A: Allocation) -> Tuple[ValuationProfile, Fraction]:
        """
        @brief Profile bounding the MMS fraction A can reach, and that bound.
        If some agent holds none of goods 0..n-1 it values exactly those at 1/n
        (bound 0). Otherwise the agent holding good t (label i = t + 1) values
        goods 0..t-1 at F_i c, its own unranked goods at 0 and all other goods at c,
        with F_i = floor((m - q_i - i + 1) / (n - i + 1)); the bound is min r_i / F_i.
        """
        if A.n != self.n or A.m != self.m:
            raise DimensionMismatch("allocation", (A.n, A.m), (self.n, self.m))
        uniform = tuple(Fraction(1, self.m) for _ in range(self.m))
        owners = A.owners()
        top_holders = [owners[g] for g in range(self.n)]
        rows: List[Tuple[Fraction, ...]] = [uniform] * self.n
        if len(set(top_holders)) < self.n:
            starving = next(a for a in range(self.n) if a not in top_holders)
            rows[starving] = self._zero_row(range(self.n))
            return ValuationProfile(tuple(rows)), Fraction(0)

        bound: Optional[Fraction] = None
        for t, agent in enumerate(top_holders):
            i = t + 1
            own_unranked = [g for g in A.bundles[agent] if g >= self.k]
            r_i = len(A.bundles[agent]) - len(own_unranked)
            positive = self.m - len(own_unranked) - i + 1
            f_i = positive // (self.n - i + 1)
            c = Fraction(1, (i - 1) * f_i + positive)
            row = [c] * self.m
            for g in range(t):
                row[g] = f_i * c
            for g in own_unranked:
                row[g] = Fraction(0)
            rows[agent] = tuple(row)
            ratio = Fraction(r_i, f_i)
            bound = ratio if bound is None else min(bound, ratio)
        return ValuationProfile(tuple(rows)), bound


def gen_mms_upper(n: int, m: int, k: int) -> MmsUpperFamily:
    """
    @throws MNotGreaterThanN, KBelowN, PreconditionError (k > m)
    """
    if m <= n:
        raise MNotGreaterThanN(n, m)
    if k < n:
        raise KBelowN(k, n, n)
    if k > m:
        raise PreconditionError("k", k, f"at most m={m}")
    return MmsUpperFamily(n, m, k, identical_instance(n, m, k))


# Impossibility fixtures

Builder = Callable[[Allocation], ValuationProfile]


@dataclass(frozen=True)
class ImpossibilityFixture:
    """@brief Instance where no allocation has `tag`, with a violating-profile builder."""
    instance: Instance
    tag: PropertyTag
    builder: Builder = field(compare=False)
    description: str = ""


def _uniform_row(m: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(1, m) for _ in range(m))


def efx_witness(A: Allocation) -> ValuationProfile:
    """
    @brief Two agents, four identically ranked goods: a profile violating EFX.
    Unequal sizes: both uniform. Sizes 2-2: the agent without good 0 values it
    at 4/7 and the others at 1/7.
    """
    uniform = _uniform_row(4)
    rows = [uniform, uniform]
    if A.sizes() == (2, 2):
        loser = 0 if 0 not in A.bundles[0] else 1
        rows[loser] = (Fraction(4, 7), Fraction(1, 7), Fraction(1, 7), Fraction(1, 7))
    return ValuationProfile(tuple(rows))


def eq_witness(A: Allocation) -> ValuationProfile:
    """
    @brief Two agents, four identically ranked goods: a profile violating EQ1 (and EQX).
    The agent with the smaller bundle (or without good 0 at equal sizes) values
    only good 0 unless it holds good 0; everyone else is uniform.
    """
    uniform = _uniform_row(4)
    concentrated = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    sizes = A.sizes()
    if sizes[0] != sizes[1]:
        small = 0 if sizes[0] < sizes[1] else 1
    else:
        small = 0 if 0 not in A.bundles[0] else 1
    rows = [uniform, uniform]
    if 0 not in A.bundles[small]:
        rows[small] = concentrated
    return ValuationProfile(tuple(rows))


def ef1_k0_witness(A: Allocation) -> ValuationProfile:
    """
    @brief Two agents, two goods, no rankings. One good each: each agent values
           only the other's good (welfare 0). Otherwise both are uniform and the
           empty-handed agent is not EF1.
    """
    one, zero = Fraction(1), Fraction(0)
    if A.sizes() == (1, 1):
        rows = [(zero, one) if A.bundles[0] == (0,) else (one, zero),
                (one, zero) if A.bundles[1] == (1,) else (zero, one)]
        return ValuationProfile(tuple(rows))
    return ValuationProfile((_uniform_row(2), _uniform_row(2)))


def mms_positive_witness(inst: Instance, A: Allocation) -> ValuationProfile:
    """
    @brief Common top-k with k < n - 1: among agents without a ranked good, the one
           with the fewest goods values the k ranked goods plus the first unranked
           goods outside its bundle at 1/n each (n goods in total).
    """
    ranked = set(inst.rankings[0])
    without = [a for a in range(inst.n) if not ranked.intersection(A.bundles[a])]
    target = min(without, key=lambda a: (len(A.bundles[a]), a))
    own = set(A.bundles[target])
    extra = [g for g in range(inst.m) if g not in ranked and g not in own][:inst.n - inst.k]
    row = [Fraction(0)] * inst.m
    for g in list(inst.rankings[0]) + extra:
        row[g] = Fraction(1, inst.n)
    rows = [_uniform_row(inst.m)] * inst.n
    rows[target] = tuple(row)
    return ValuationProfile(tuple(rows))


def mms_k_n_minus_1_witness(inst: Instance, A: Allocation) -> ValuationProfile:
    """
    @brief Common top-(n-1). An agent with no ranked good that misses some unranked
           good g values the ranked goods and g at 1/n (zero received, MMS 1/n).
           Otherwise the holder of the lowest ranked good values the ranked goods
           above it at F c and every other good at c, F = floor((m - n + 2) / 2),
           capping the reachable fraction at 1/F.
    """
    ranking = list(inst.rankings[0])
    ranked = set(ranking)
    unranked = [g for g in range(inst.m) if g not in ranked]
    rows = [_uniform_row(inst.m)] * inst.n
    for agent in range(inst.n):
        bundle = set(A.bundles[agent])
        if ranked.intersection(bundle):
            continue
        missing = [g for g in unranked if g not in bundle]
        if missing:
            row = [Fraction(0)] * inst.m
            for g in ranking + missing[:1]:
                row[g] = Fraction(1, inst.n)
            rows[agent] = tuple(row)
            return ValuationProfile(tuple(rows))

    holder = A.owners()[ranking[-1]]
    spread = inst.m - inst.n + 2
    f = spread // 2
    c = Fraction(1, (len(ranking) - 1) * f + spread)
    row = [c] * inst.m
    for g in ranking[:-1]:
        row[g] = f * c
    rows[holder] = tuple(row)
    return ValuationProfile(tuple(rows))


def gen_impossibility_fixtures() -> List[ImpossibilityFixture]:
    """
    @brief Fixed fixtures: (2, 4) complete identical ranking for EFX, EQ1 and EQX;
           (2, 2) with k = 0 for EF1 distortion; n=4, m=6, k=2 for positive MMS;
           n=3, m=5, k=2 for k = n - 1.
    """
    pair = identical_instance(2, 4, 4)
    mms_low = identical_instance(4, 6, 2)
    mms_mid = identical_instance(3, 5, 2)
    return [
        ImpossibilityFixture(pair, PropertyTag.EFX, efx_witness,
                             "no allocation is EFX for every consistent profile"),
        ImpossibilityFixture(pair, PropertyTag.EQ1, eq_witness,
                             "no allocation is EQ1 for every consistent profile"),
        ImpossibilityFixture(pair, PropertyTag.EQX, eq_witness,
                             "no allocation is EQX for every consistent profile"),
        ImpossibilityFixture(identical_instance(2, 2, 0), PropertyTag.EF1_DISTORTION, ef1_k0_witness,
                             "EF1 without rankings has unbounded distortion"),
        ImpossibilityFixture(mms_low, PropertyTag.MMS_POSITIVE,
                             lambda A: mms_positive_witness(mms_low, A),
                             "k < n - 1: some agent gets 0 while MMS is 1/n"),
        ImpossibilityFixture(mms_mid, PropertyTag.MMS_K_N_MINUS_1,
                             lambda A: mms_k_n_minus_1_witness(mms_mid, A),
                             "k = n - 1: no allocation beats 1/floor((m-n+2)/2)"),
    ]
