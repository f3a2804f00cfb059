"""
@file polytope.py
@brief Geometry of the unit-sum valuations consistent with one top-k ranking.

Vertices are uniform distributions on a top-t prefix (t = 1..k) or on the
whole top-k set plus any subset U of unranked goods. Linear objectives are
optimized without enumerating subsets: for a fixed |U| only the largest (or
smallest) unranked coefficients matter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from config.enums import Caps
from config.messages import LogMsg
from fairdiv.errors import CapExceeded, EmptyMarket, GoodOutOfRange, PreconditionError
from fairdiv.model import Instance, ValuationProfile
from utilits.logger import analysis_logger

logger = analysis_logger.get_logger(__name__)

Row = Tuple[Fraction, ...]
SeedLike = Union[int, np.random.Generator, np.random.SeedSequence, None]


@dataclass(frozen=True)
class ConsistentPolytope:
    """
    @brief { v >= 0 : v(g_1) >= ... >= v(g_k) >= v(g') for unranked g', sum v = 1 }.
    @param ranking Ordered top-k goods
    @param m Total number of goods
    """
    ranking: Tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "ranking", tuple(int(g) for g in self.ranking))
        seen = set()
        for g in self.ranking:
            if not 0 <= g < self.m:
                raise GoodOutOfRange(g, self.m)
            if g in seen:
                raise PreconditionError("ranking", g, "good listed twice")
            seen.add(g)

    @classmethod
    def for_agent(cls, inst: Instance, agent: int) -> "ConsistentPolytope":
        return cls(inst.rankings[agent], inst.m)

    @property
    def k(self) -> int:
        return len(self.ranking)

    @property
    def unranked(self) -> Tuple[int, ...]:
        ranked = set(self.ranking)
        return tuple(g for g in range(self.m) if g not in ranked)


def _uniform_on(goods: Iterable[int], m: int) -> Row:
    goods = list(goods)
    share = Fraction(1, len(goods))
    row = [Fraction(0)] * m
    for g in goods:
        row[g] = share
    return tuple(row)


def _check_unranked_cap(p: ConsistentPolytope, cap: int) -> None:
    u = len(p.unranked)
    if u > cap:
        raise CapExceeded("unranked goods", u, cap)


def vertex_count(p: ConsistentPolytope) -> int:
    """@brief Number of extreme points: k prefixes plus 2^u - 1 top-k extensions."""
    if p.m == 0:
        return 0
    u = len(p.unranked)
    return p.k + (1 << u) - 1


def extreme_points(p: ConsistentPolytope, cap: int = Caps.UNRANKED_ENUM_MAX) -> Iterator[Row]:
    """
    @brief Yield every vertex of the polytope.
    Prefixes first (t = 1..k), then top-k plus U for nonempty U by |U| and
    lexicographic membership. With k = 0 that is every nonempty subset.
    @throws CapExceeded when more than `cap` goods are unranked
    """
    if p.m == 0:
        return
    _check_unranked_cap(p, cap)
    for t in range(1, p.k + 1):
        yield _uniform_on(p.ranking[:t], p.m)
    unranked = p.unranked
    for size in range(1, len(unranked) + 1):
        for extra in itertools.combinations(unranked, size):
            yield _uniform_on(p.ranking + extra, p.m)


@lru_cache(maxsize=4096)
def vertices(p: ConsistentPolytope, cap: int = Caps.UNRANKED_ENUM_MAX) -> Tuple[Row, ...]:
    """@brief Cached tuple of extreme_points(p)."""
    return tuple(extreme_points(p, cap))


def linear_bounds(p: ConsistentPolytope, coefficients: Sequence[Fraction]) -> Tuple[Fraction, Fraction]:
    """
    @brief Exact min and max of sum_g c_g v(g) over the polytope.
    @param coefficients One rational per good
    @return (min, max)
    @throws EmptyMarket
    """
    if p.m == 0:
        raise EmptyMarket()
    c = [Fraction(x) for x in coefficients]
    candidates: List[Fraction] = []
    prefix = Fraction(0)
    for t, g in enumerate(p.ranking, start=1):
        prefix += c[g]
        candidates.append(prefix / t)

    rest = sorted(c[g] for g in p.unranked)
    low, high = prefix, prefix
    for size in range(1, len(rest) + 1):
        low += rest[size - 1]
        high += rest[-size]
        candidates.append(low / (p.k + size))
        candidates.append(high / (p.k + size))
    return min(candidates), max(candidates)


def bundle_value_bounds(p: ConsistentPolytope, bundle: Iterable[int]) -> Tuple[Fraction, Fraction]:
    """
    @brief Exact (min, max) of v(S) over the polytope.
    @throws GoodOutOfRange
    """
    coefficients = [Fraction(0)] * p.m
    for g in bundle:
        if not 0 <= g < p.m:
            raise GoodOutOfRange(g, p.m)
        coefficients[g] = Fraction(1)
    return linear_bounds(p, coefficients)


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_consistent(p: ConsistentPolytope, seed: SeedLike) -> Row:
    """
    @brief Random consistent row: a convex combination of prefix vertices and
           randomly drawn top-k extensions with integer weights.
    Zero weights are allowed, so ties and zero values do occur.
    @param seed int seed or a numpy Generator to draw from
    @throws EmptyMarket
    """
    if p.m == 0:
        raise EmptyMarket()
    rng = _rng(seed)
    supports: List[Tuple[int, ...]] = [p.ranking[:t] for t in range(1, p.k + 1)]
    unranked = np.array(p.unranked, dtype=int)
    if unranked.size:
        for _ in range(unranked.size + 1):
            mask = rng.random(unranked.size) < rng.random()
            if p.k == 0 and not mask.any():
                mask[rng.integers(unranked.size)] = True
            supports.append(p.ranking + tuple(int(g) for g in unranked[mask]))
    supports = [s for s in supports if s]

    weights = rng.integers(0, 1000, size=len(supports))
    if weights.sum() == 0:
        weights[0] = 1
    total = int(weights.sum())

    row = [Fraction(0)] * p.m
    for support, w in zip(supports, weights):
        if not w:
            continue
        share = Fraction(int(w), total * len(support))
        for g in support:
            row[g] += share
    return tuple(row)


def sample_consistent_profile(inst: Instance, seed: SeedLike) -> ValuationProfile:
    """@brief One sampled consistent row per agent, drawn from a single generator."""
    rng = _rng(seed)
    return ValuationProfile(tuple(sample_consistent(ConsistentPolytope.for_agent(inst, i), rng)
                                  for i in range(inst.n)))


def vertex_profiles(inst: Instance, cap: int = Caps.VERTEX_PRODUCT_MAX) -> Iterator[ValuationProfile]:
    """
    @brief Every profile whose rows are vertices of the agents' polytopes.
    @throws CapExceeded when the product of per-agent vertex counts exceeds cap
    """
    polytopes = [ConsistentPolytope.for_agent(inst, i) for i in range(inst.n)]
    for p in polytopes:
        _check_unranked_cap(p, Caps.UNRANKED_ENUM_MAX)
    total = 1
    for p in polytopes:
        total *= vertex_count(p)
        if total > cap:
            raise CapExceeded("vertex profiles", total, cap)
    logger.debug(LogMsg.VERTEX_SCAN.format(total))
    for rows in itertools.product(*(vertices(p) for p in polytopes)):
        yield ValuationProfile(rows)
