"""
@file fairness.py
@brief Fairness checkers.

Cardinal checks take a valuation profile: EF1, EFX, EQ1, EQX, balancedness and
alpha-MMS with an exact branch-and-bound maximin-share oracle.
"Necessary" checks take only the instance and hold iff the cardinal property
holds for every valuation profile consistent with the rankings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

from config.enums import Caps
from config.messages import LogMsg
from fairdiv.errors import (
    AlphaOutOfRange, CapExceeded, DimensionMismatch, GoodOutOfRange,
    PreconditionError, TopKSetsDisagree,
)
from fairdiv.model import Allocation, Instance, ValuationProfile, enumerate_allocations
from fairdiv.polytope import ConsistentPolytope, bundle_value_bounds
from utilits.logger import analysis_logger

logger = analysis_logger.get_logger(__name__)


@dataclass(frozen=True)
class MmsCap:
    """@brief Size limits of the exact maximin-share oracle."""
    max_m: int = Caps.MMS_MAX_M
    max_n: int = Caps.MMS_MAX_N

    def __post_init__(self):
        if self.max_m < 1 or self.max_n < 1:
            raise PreconditionError("MmsCap", (self.max_m, self.max_n), "caps must be positive")


DEFAULT_CAP = MmsCap()


def _check_dims(A: Allocation, v: ValuationProfile) -> None:
    if A.n != v.n:
        raise DimensionMismatch("allocation agents", A.n, v.n)
    if A.m != v.m:
        raise DimensionMismatch("allocation goods", A.m, v.m)


def _check_instance_dims(A: Allocation, inst: Instance) -> None:
    if A.n != inst.n:
        raise DimensionMismatch("allocation agents", A.n, inst.n)
    if A.m != inst.m:
        raise DimensionMismatch("allocation goods", A.m, inst.m)


def _pairs(n: int) -> Iterable[Tuple[int, int]]:
    return ((i, j) for i in range(n) for j in range(n) if i != j)


# Cardinal properties

def is_ef1(A: Allocation, v: ValuationProfile) -> bool:
    """
    @brief Envy-free up to one good: removing i's most valued good of A_j ends the envy.
    """
    _check_dims(A, v)
    for i, j in _pairs(A.n):
        other = A.bundles[j]
        if not other:
            continue
        row = v.row(i)
        if v.value(i, A.bundles[i]) < v.value(i, other) - max(row[g] for g in other):
            return False
    return True


def is_efx(A: Allocation, v: ValuationProfile) -> bool:
    """@brief Envy-free up to any good: removing any single good of A_j ends the envy."""
    _check_dims(A, v)
    for i, j in _pairs(A.n):
        other = A.bundles[j]
        if not other:
            continue
        row = v.row(i)
        if v.value(i, A.bundles[i]) < v.value(i, other) - min(row[g] for g in other):
            return False
    return True


def is_eq1(A: Allocation, v: ValuationProfile) -> bool:
    """
    @brief Equitable up to one good: v_i(A_i) >= v_j(A_j \\ {g}) for j's most valued g.
    Empty A_j imposes nothing.
    """
    _check_dims(A, v)
    for i, j in _pairs(A.n):
        other = A.bundles[j]
        if not other:
            continue
        row_j = v.row(j)
        if v.value(i, A.bundles[i]) < v.value(j, other) - max(row_j[g] for g in other):
            return False
    return True


def is_eqx(A: Allocation, v: ValuationProfile) -> bool:
    """
    @brief Equitable up to any good j values positively. With no such good the
           plain comparison v_i(A_i) >= v_j(A_j) is required.
    """
    _check_dims(A, v)
    for i, j in _pairs(A.n):
        other = A.bundles[j]
        if not other:
            continue
        row_j = v.row(j)
        positive = [row_j[g] for g in other if row_j[g] > 0]
        removed = min(positive) if positive else Fraction(0)
        if v.value(i, A.bundles[i]) < v.value(j, other) - removed:
            return False
    return True


def is_balanced(A: Allocation) -> bool:
    """@brief Bundle sizes differ by at most one."""
    sizes = A.sizes()
    return not sizes or max(sizes) - min(sizes) <= 1


# Maximin share

def _check_mms_cap(n: int, m: int, cap: MmsCap) -> None:
    if m > cap.max_m:
        raise CapExceeded("m", m, cap.max_m)
    if n > cap.max_n:
        raise CapExceeded("n", n, cap.max_n)


def maximin_partition(row: Sequence[Fraction], n: int,
                      cap: Optional[MmsCap] = None) -> Tuple[Fraction, Tuple[Tuple[int, ...], ...]]:
    """
    @brief Exact maximin share of one valuation row with a witness partition.
    Values are scaled to integers; goods are placed in descending value order
    into canonically labeled bundles, pruning branches that cannot beat the best
    minimum found, and stopping as soon as floor(total / n) is reached.
    @param row Values of the goods
    @param n Number of bundles
    @return (mms, bundles)
    @throws CapExceeded
    """
    if n < 1:
        raise PreconditionError("n", n, "at least one bundle")
    cap = cap or DEFAULT_CAP
    _check_mms_cap(n, len(row), cap)
    value, bundles = _maximin_cached(tuple(Fraction(x) for x in row), n)
    return value, bundles


@lru_cache(maxsize=65536)
def _maximin_cached(row: Tuple[Fraction, ...], n: int) -> Tuple[Fraction, Tuple[Tuple[int, ...], ...]]:
    m = len(row)
    if m < n:
        return Fraction(0), tuple((g,) for g in range(m)) + tuple(() for _ in range(n - m))

    scale = math.lcm(*(x.denominator for x in row)) if row else 1
    weights = [int(x * scale) for x in row]
    order = sorted(range(m), key=lambda g: (-weights[g], g))
    suffix = [0] * (m + 1)
    for pos in range(m - 1, -1, -1):
        suffix[pos] = suffix[pos + 1] + weights[order[pos]]
    target = suffix[0] // n

    loads = [0] * n
    assignment = [0] * m
    best = -1
    best_assignment: List[int] = []

    def place(pos: int, used: int) -> bool:
        nonlocal best, best_assignment
        if pos == m:
            low = min(loads)
            if low > best:
                best, best_assignment = low, assignment[:]
            return best >= target
        # the emptiest bundle can gain at most what is left
        if min(min(loads) + suffix[pos], target) <= best:
            return False
        w = weights[order[pos]]
        limit = min(used + 1, n)
        for b in range(limit):
            loads[b] += w
            assignment[pos] = b
            done = place(pos + 1, max(used, b + 1))
            loads[b] -= w
            if done:
                return True
        return False

    place(0, 0)
    bundles: List[List[int]] = [[] for _ in range(n)]
    for pos, b in enumerate(best_assignment):
        bundles[b].append(order[pos])
    return Fraction(best, scale), tuple(tuple(sorted(b)) for b in bundles)


def mms_value(agent: int, v: ValuationProfile, n: int, cap: Optional[MmsCap] = None) -> Fraction:
    """
    @brief Maximin share of `agent` when the goods are split into n bundles.
    @throws CapExceeded
    """
    logger.debug(LogMsg.MMS_SEARCH.format(agent, n, v.m))
    return maximin_partition(v.row(agent), n, cap)[0]


def mms_shortfalls(A: Allocation, v: ValuationProfile, alpha: Fraction,
                   cap: Optional[MmsCap] = None) -> List[int]:
    """
    @brief Agents receiving less than alpha times their maximin share.
    An agent holding at least alpha/n is skipped without running the oracle,
    since MMS_i <= v_i(M)/n = 1/n.
    @throws AlphaOutOfRange, CapExceeded
    """
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise AlphaOutOfRange(alpha)
    _check_dims(A, v)
    failing = []
    if alpha == 0:
        return failing
    for i in range(A.n):
        received = v.value(i, A.bundles[i])
        if received * A.n >= alpha:
            continue
        if received < alpha * mms_value(i, v, A.n, cap):
            failing.append(i)
    return failing


def is_alpha_mms(A: Allocation, v: ValuationProfile, alpha: Fraction,
                 cap: Optional[MmsCap] = None) -> bool:
    """
    @brief v_i(A_i) >= alpha * MMS_i for every agent, exact.
    @throws AlphaOutOfRange, CapExceeded
    """
    return not mms_shortfalls(A, v, alpha, cap)


# Necessary properties

def necessary_dominates(ranking: Sequence[int], X: Iterable[int], Y: Iterable[int],
                        m: Optional[int] = None) -> bool:
    """
    @brief v(X) >= v(Y) for every valuation consistent with `ranking`.
    After cancelling X & Y: every top-t prefix holds at least as many goods of X
    as of Y, and the ranked goods of X are at least as many as all of Y.
    With an empty ranking this means Y is a subset of X.
    @param m When given, goods are checked against 0..m-1
    @throws GoodOutOfRange
    """
    X, Y = set(X), set(Y)
    if m is not None:
        for g in X | Y:
            if not 0 <= g < m:
                raise GoodOutOfRange(g, m)
    common = X & Y
    X, Y = X - common, Y - common
    if not Y:
        return True
    in_x = in_y = 0
    for g in ranking:
        in_x += g in X
        in_y += g in Y
        if in_x < in_y:
            return False
    return in_x >= len(Y)


def _removal_candidates(ranking: Sequence[int], bundle: Sequence[int]) -> List[int]:
    """
    @brief Goods of a bundle worth trying to remove for agent `ranking`: the
           ranked goods in rank order, then one unranked good (unranked goods
           are interchangeable for the dominance test).
    """
    position = {g: r for r, g in enumerate(ranking)}
    ranked = sorted((g for g in bundle if g in position), key=position.get)
    unranked = [g for g in bundle if g not in position]
    return ranked + unranked[:1]


def necessary_ef1(A: Allocation, inst: Instance) -> bool:
    """
    @brief EF1 under every consistent valuation: for each i != j with A_j
           nonempty some g in A_j makes A_i dominate A_j \\ {g} for agent i.
    """
    _check_instance_dims(A, inst)
    for i, j in _pairs(inst.n):
        other = A.bundles[j]
        if not other:
            continue
        ranking = inst.rankings[i]
        own = A.bundles[i]
        if not any(necessary_dominates(ranking, own, set(other) - {g})
                   for g in _removal_candidates(ranking, other)):
            return False
    return True


def necessary_efx(A: Allocation, inst: Instance) -> bool:
    """@brief EFX under every consistent valuation: removal of every g in A_j must suffice."""
    _check_instance_dims(A, inst)
    for i, j in _pairs(inst.n):
        other = A.bundles[j]
        ranking = inst.rankings[i]
        if not all(necessary_dominates(ranking, A.bundles[i], set(other) - {g}) for g in other):
            return False
    return True


def _equitability_bounds(A: Allocation, inst: Instance):
    polytopes = [ConsistentPolytope.for_agent(inst, a) for a in range(inst.n)]
    worst_own = [bundle_value_bounds(polytopes[a], A.bundles[a])[0] for a in range(inst.n)]

    def best_without(j: int, g: int) -> Fraction:
        rest = [x for x in A.bundles[j] if x != g]
        return bundle_value_bounds(polytopes[j], rest)[1]

    return worst_own, best_without


def necessary_eq1(A: Allocation, inst: Instance) -> bool:
    """
    @brief EQ1 under every consistent profile: some g in A_j has
           min over v_i of v_i(A_i) >= max over v_j of v_j(A_j \\ {g}).
    Agents' polytopes are independent, so per-agent bounds decide it.
    """
    _check_instance_dims(A, inst)
    if inst.m == 0:
        return True
    worst_own, best_without = _equitability_bounds(A, inst)
    for i, j in _pairs(inst.n):
        other = A.bundles[j]
        if other and not any(worst_own[i] >= best_without(j, g) for g in other):
            return False
    return True


def necessary_eqx(A: Allocation, inst: Instance) -> bool:
    """
    @brief EQX under every consistent profile; every good can be worth something
           to j, so removal of every g in A_j must suffice.
    """
    _check_instance_dims(A, inst)
    if inst.m == 0:
        return True
    worst_own, best_without = _equitability_bounds(A, inst)
    for i, j in _pairs(inst.n):
        if not all(worst_own[i] >= best_without(j, g) for g in A.bundles[j]):
            return False
    return True


def lemma1_condition(A: Allocation, inst: Instance) -> bool:
    """
    @brief With a common top-k set T and s_i = |A_i & T|: s_i >= |A_j| - 1 for all i != j.
    @throws TopKSetsDisagree
    """
    _check_instance_dims(A, inst)
    top = set(inst.rankings[0])
    for agent in range(1, inst.n):
        if set(inst.rankings[agent]) != top:
            raise TopKSetsDisagree(0, agent)
    held = [len(top.intersection(b)) for b in A.bundles]
    sizes = A.sizes()
    return all(held[i] >= sizes[j] - 1 for i, j in _pairs(inst.n))


def find_necessary_ef1_allocation(inst: Instance) -> Optional[Allocation]:
    """@brief First allocation (lexicographic owner order) passing necessary_ef1, or None."""
    for alloc in enumerate_allocations(inst.n, inst.m):
        if necessary_ef1(alloc, inst):
            return alloc
    return None
