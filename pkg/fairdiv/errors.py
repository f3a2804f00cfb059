"""
@file errors.py
@brief Domain errors. Every error derives from FairDivError and ValueError;
       texts come from config.messages.ErrMsg and name the offending item.
"""

from config.messages import ErrMsg


class FairDivError(ValueError):
    """@brief Root of all domain errors."""


class PreconditionError(FairDivError):
    """@brief Generic parameter violation."""

    def __init__(self, name: str, value, reason: str):
        self.name, self.value = name, value
        super().__init__(ErrMsg.PRECONDITION.format(name, value, reason))


class InstanceError(FairDivError):
    """@brief Malformed instance."""


class DuplicateGoodInRanking(InstanceError):
    def __init__(self, agent: int, good: int):
        self.agent, self.good = agent, good
        super().__init__(ErrMsg.DUPLICATE_GOOD.format(agent, good))


class RankingLengthMismatch(InstanceError):
    def __init__(self, agent: int, got: int, expected: int):
        self.agent, self.got, self.expected = agent, got, expected
        super().__init__(ErrMsg.RANKING_LENGTH.format(agent, got, expected))


class GoodIdOutOfRange(InstanceError):
    def __init__(self, good: int, m: int, agent=None):
        self.agent, self.good = agent, good
        super().__init__(ErrMsg.GOOD_OUT_OF_RANGE.format(good, agent, m - 1))


GoodOutOfRange = GoodIdOutOfRange


class DimensionMismatch(FairDivError):
    def __init__(self, what: str, got, expected):
        super().__init__(ErrMsg.DIMENSION_MISMATCH.format(what, got, expected))


class InvalidValuation(FairDivError):
    """@brief Negative entries, rows not summing to 1 or inconsistency with rankings."""


class InvalidAllocation(FairDivError):
    def __init__(self, reason: str):
        super().__init__(ErrMsg.INVALID_ALLOCATION.format(reason))


class KTooLarge(FairDivError):
    def __init__(self, k: int, m: int):
        super().__init__(ErrMsg.K_TOO_LARGE.format(k, m))


class ZeroN(FairDivError):
    def __init__(self, n: int):
        super().__init__(ErrMsg.ZERO_N.format(n))


class CapExceeded(FairDivError):
    def __init__(self, what: str, value, cap):
        self.what, self.value, self.cap = what, value, cap
        super().__init__(ErrMsg.CAP_EXCEEDED.format(what, value, cap))


class EmptyMarket(FairDivError):
    def __init__(self):
        super().__init__(ErrMsg.EMPTY_MARKET)


class PickWithoutRankedGood(FairDivError):
    def __init__(self, agent: int, position: int):
        self.agent, self.position = agent, position
        super().__init__(ErrMsg.PICK_WITHOUT_RANKED.format(agent, position))


class KBelowThreshold(FairDivError):
    def __init__(self, k: int, threshold: int, n: int, m: int):
        self.k, self.threshold = k, threshold
        super().__init__(ErrMsg.K_BELOW_THRESHOLD.format(k, threshold, n, m))


class KBelowN(FairDivError):
    def __init__(self, k: int, required: int, n: int):
        super().__init__(ErrMsg.K_BELOW_N.format(k, required, n))


class KZero(FairDivError):
    def __init__(self, rule: str):
        super().__init__(ErrMsg.K_ZERO.format(rule))


class MNotGreaterThanN(FairDivError):
    def __init__(self, n: int, m: int):
        super().__init__(ErrMsg.M_NOT_GREATER_THAN_N.format(n, m))


class InfeasibleDeadlines(FairDivError):
    def __init__(self, d: int):
        self.d = d
        super().__init__(ErrMsg.INFEASIBLE_DEADLINES.format(d, d))


class AlphaOutOfRange(FairDivError):
    def __init__(self, alpha):
        super().__init__(ErrMsg.ALPHA_OUT_OF_RANGE.format(alpha))


class TopKSetsDisagree(FairDivError):
    def __init__(self, first: int, second: int):
        super().__init__(ErrMsg.TOP_K_DISAGREE.format(first, second))


class NTooSmall(FairDivError):
    def __init__(self, required: int, n: int):
        super().__init__(ErrMsg.N_TOO_SMALL.format(required, n))


class UnknownRule(FairDivError):
    def __init__(self, rule_id: str):
        super().__init__(ErrMsg.UNKNOWN_RULE.format(rule_id))
