"""
@file model.py
@brief Core domain types: instances with top-k rankings, exact unit-sum
       valuation profiles, allocations, randomized allocations and picking
       sequences, with validation and consistency predicates.

Agents and goods are 0-indexed. All numbers are exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from fairdiv.errors import (
    DimensionMismatch, DuplicateGoodInRanking, GoodIdOutOfRange, InvalidAllocation,
    InvalidValuation, KTooLarge, PreconditionError, RankingLengthMismatch, ZeroN,
)
from config.messages import ErrMsg

Rational = Fraction
Bundle = Tuple[int, ...]


def to_rational(value: Any) -> Fraction:
    """
    @brief Convert int, str ("1/3"), Fraction or a [num, den] pair to Fraction.
    @throws InvalidValuation for floats and malformed pairs.
    """
    if isinstance(value, float):
        raise InvalidValuation(f"float {value!r} refused; use num/den")
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidValuation(f"rational pair expected, got {value!r}")
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(value)


@dataclass(frozen=True)
class Instance:
    """
    @brief (N, M, k, sigma): n agents, m goods, each agent's top-k ranking.
    Validated on construction; rankings are stored as tuples.
    """
    n: int
    m: int
    k: int
    rankings: Tuple[Tuple[int, ...], ...]
    _positions: Tuple[Dict[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rankings", tuple(tuple(int(g) for g in r) for r in self.rankings))
        validate_instance(self)
        object.__setattr__(self, "_positions",
                           tuple({g: pos for pos, g in enumerate(r)} for r in self.rankings))

    @property
    def is_complete(self) -> bool:
        return self.k == self.m

    def rank(self, agent: int, good: int) -> Optional[int]:
        """@brief 0-based position of good in agent's ranking, None if unranked."""
        return self._positions[agent].get(good)

    def ranked(self, agent: int) -> frozenset:
        return frozenset(self.rankings[agent])

    def relabel(self, order: Sequence[int]) -> "Instance":
        """
        @brief Instance seen under an agent relabeling: new agent p is old agent order[p].
        """
        return Instance(self.n, self.m, self.k, tuple(self.rankings[a] for a in order))


def validate_instance(inst: Instance) -> None:
    """
    @brief Check all Instance invariants.
    @throws DuplicateGoodInRanking, RankingLengthMismatch, GoodIdOutOfRange,
            PreconditionError (n < 1, m < 0, k outside 0..m)
    """
    if inst.n < 1:
        raise PreconditionError("n", inst.n, "at least one agent")
    if inst.m < 0:
        raise PreconditionError("m", inst.m, "non-negative")
    if inst.k < 0:
        raise PreconditionError("k", inst.k, "non-negative")
    if inst.k > inst.m:
        raise KTooLarge(inst.k, inst.m)
    if len(inst.rankings) != inst.n:
        raise DimensionMismatch("rankings", len(inst.rankings), inst.n)
    for agent, ranking in enumerate(inst.rankings):
        if len(ranking) != inst.k:
            raise RankingLengthMismatch(agent, len(ranking), inst.k)
        seen = set()
        for good in ranking:
            if not 0 <= good < inst.m:
                raise GoodIdOutOfRange(good, inst.m, agent)
            if good in seen:
                raise DuplicateGoodInRanking(agent, good)
            seen.add(good)


@dataclass(frozen=True)
class ValuationProfile:
    """
    @brief n x m matrix of exact non-negative values, each row summing to 1.
    """
    values: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(to_rational(x) for x in row) for row in self.values)
        object.__setattr__(self, "values", rows)
        if not rows:
            raise InvalidValuation("profile needs at least one agent")
        width = len(rows[0])
        for agent, row in enumerate(rows):
            if len(row) != width:
                raise DimensionMismatch(f"row {agent}", len(row), width)
            for good, x in enumerate(row):
                if x < 0:
                    raise InvalidValuation(ErrMsg.NEGATIVE_VALUE.format(agent, x, good))
            total = sum(row, Fraction(0))
            if total != 1:
                raise InvalidValuation(ErrMsg.NOT_UNIT_SUM.format(agent, total))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.values[0])

    def row(self, agent: int) -> Tuple[Fraction, ...]:
        return self.values[agent]

    def value(self, agent: int, bundle: Iterable[int]) -> Fraction:
        """@brief v_agent(bundle), additive."""
        row = self.values[agent]
        return sum((row[g] for g in bundle), Fraction(0))


@dataclass(frozen=True)
class Allocation:
    """
    @brief n bundles partitioning goods 0..m-1; empty bundles allowed.
    m is the total number of goods handed out.
    """
    bundles: Tuple[Bundle, ...]

    def __post_init__(self):
        bundles = tuple(tuple(sorted(int(g) for g in b)) for b in self.bundles)
        object.__setattr__(self, "bundles", bundles)
        goods = [g for b in bundles for g in b]
        if len(set(goods)) != len(goods):
            raise InvalidAllocation("bundles overlap")
        if set(goods) != set(range(len(goods))):
            raise InvalidAllocation(f"goods {sorted(goods)} are not 0..{len(goods) - 1}")

    @property
    def n(self) -> int:
        return len(self.bundles)

    @property
    def m(self) -> int:
        return sum(len(b) for b in self.bundles)

    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.bundles)

    def owners(self) -> Tuple[int, ...]:
        """@brief owner[g] = agent holding good g."""
        owner = [0] * self.m
        for agent, bundle in enumerate(self.bundles):
            for g in bundle:
                owner[g] = agent
        return tuple(owner)

    @classmethod
    def from_owners(cls, owners: Sequence[int], n: int) -> "Allocation":
        bundles: List[List[int]] = [[] for _ in range(n)]
        for good, agent in enumerate(owners):
            bundles[agent].append(good)
        return cls(tuple(tuple(b) for b in bundles))


def check_allocation(alloc: Allocation, n: int, m: int) -> None:
    """
    @brief Check an allocation against an instance's dimensions.
    @throws DimensionMismatch
    """
    if alloc.n != n:
        raise DimensionMismatch("allocation agents", alloc.n, n)
    if alloc.m != m:
        raise DimensionMismatch("allocation goods", alloc.m, m)


@dataclass(frozen=True)
class ExplicitMixture:
    """
    @brief Finitely supported distribution over allocations.
    """
    support: Tuple[Tuple[Allocation, Fraction], ...]

    def __post_init__(self):
        support = tuple((a, to_rational(p)) for a, p in self.support)
        object.__setattr__(self, "support", support)
        if any(p < 0 for _, p in support):
            raise InvalidAllocation("negative probability in mixture")
        if sum((p for _, p in support), Fraction(0)) != 1:
            raise InvalidAllocation("mixture probabilities do not sum to 1")


@dataclass(frozen=True)
class UniformPermutationMixture:
    """
    @brief Uniform mixture of a deterministic rule over all n! agent relabelings.
    """
    rule_id: str
    instance: Instance


RandomizedAllocation = Union[ExplicitMixture, UniformPermutationMixture]


@dataclass(frozen=True)
class PickingSequence:
    """@brief Agents p_1..p_l taking turns; l <= m."""
    picks: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "picks", tuple(int(a) for a in self.picks))

    def __len__(self) -> int:
        return len(self.picks)

    def truncated(self, length: int) -> "PickingSequence":
        return PickingSequence(self.picks[:length])


def validate_sequence(seq: PickingSequence, n: int, m: int) -> None:
    """
    @throws PreconditionError when an entry is outside [n] or the sequence exceeds m.
    """
    if len(seq) > m:
        raise PreconditionError("len(sequence)", len(seq), f"at most m={m}")
    for agent in seq.picks:
        if not 0 <= agent < n:
            raise PreconditionError("sequence agent", agent, f"outside 0..{n - 1}")


def is_row_consistent(row: Sequence[Fraction], ranking: Sequence[int]) -> bool:
    """
    @brief v |> sigma for one agent: non-increasing along the ranking and every
           ranked value at least every unranked value.
    """
    for a, b in zip(ranking, ranking[1:]):
        if row[a] < row[b]:
            return False
    if not ranking:
        return True
    ranked = set(ranking)
    unranked = [row[g] for g in range(len(row)) if g not in ranked]
    return not unranked or row[ranking[-1]] >= max(unranked)


def is_consistent(v: ValuationProfile, inst: Instance) -> bool:
    """
    @brief v |> sigma for the whole profile.
    @throws DimensionMismatch
    """
    if v.n != inst.n:
        raise DimensionMismatch("valuation agents", v.n, inst.n)
    if v.m != inst.m:
        raise DimensionMismatch("valuation goods", v.m, inst.m)
    return all(is_row_consistent(v.row(i), inst.rankings[i]) for i in range(inst.n))


def top_k_of(v_row: Sequence[Fraction], k: int) -> List[int]:
    """
    @brief The k most valuable goods, ties broken by ascending good id.
    @throws KTooLarge
    """
    if k > len(v_row):
        raise KTooLarge(k, len(v_row))
    return sorted(range(len(v_row)), key=lambda g: (-v_row[g], g))[:k]


_HARMONIC: List[Fraction] = [Fraction(0)]


def harmonic(n: int) -> Fraction:
    """
    @brief H_n = sum_{j=1..n} 1/j, exact. Prefix sums are cached.
    @throws ZeroN
    """
    if n < 1:
        raise ZeroN(n)
    while len(_HARMONIC) <= n:
        _HARMONIC.append(_HARMONIC[-1] + Fraction(1, len(_HARMONIC)))
    return _HARMONIC[n]


def instance_from_valuations(v: ValuationProfile, k: int) -> Instance:
    """@brief The top-k instance each agent would report under v."""
    return Instance(v.n, v.m, k, tuple(tuple(top_k_of(v.row(i), k)) for i in range(v.n)))


def identical_instance(n: int, m: int, k: int) -> Instance:
    """@brief All agents rank goods 0..k-1 in that order."""
    return Instance(n, m, k, tuple(tuple(range(k)) for _ in range(n)))


def enumerate_allocations(n: int, m: int) -> Iterator[Allocation]:
    """@brief All n^m allocations, in lexicographic order of owner vectors."""
    for owners in itertools.product(range(n), repeat=m):
        yield Allocation.from_owners(owners, n)


# JSON

def instance_to_json(inst: Instance, v: Optional[ValuationProfile] = None) -> Dict[str, Any]:
    """
    @brief {"n", "m", "k", "rankings", "valuations"?}; rationals as [num, den].
    """
    data: Dict[str, Any] = {
        "n": inst.n,
        "m": inst.m,
        "k": inst.k,
        "rankings": [list(r) for r in inst.rankings],
    }
    if v is not None:
        data["valuations"] = [[[x.numerator, x.denominator] for x in row] for row in v.values]
    return data


def instance_from_json(data: Dict[str, Any]) -> Tuple[Instance, Optional[ValuationProfile]]:
    """
    @brief Parse the instance schema; valuations, when present, must be consistent.
    @throws InstanceError, InvalidValuation, DimensionMismatch
    """
    try:
        inst = Instance(int(data["n"]), int(data["m"]), int(data["k"]),
                        tuple(tuple(r) for r in data["rankings"]))
    except KeyError as missing:
        raise PreconditionError("instance field", str(missing), "required") from None
    raw = data.get("valuations")
    if raw is None:
        return inst, None
    v = ValuationProfile(tuple(tuple(to_rational(x) for x in row) for row in raw))
    if not is_consistent(v, inst):
        bad = next(i for i in range(inst.n) if not is_row_consistent(v.row(i), inst.rankings[i]))
        raise InvalidValuation(ErrMsg.NOT_CONSISTENT.format(bad))
    return inst, v
