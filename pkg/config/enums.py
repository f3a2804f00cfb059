"""
@brief Enumerations and canonical constants used across the library and analyzers.
       Keeps rule identifiers, leftover kinds, search modes and caps in one place
       to simplify imports and keep types consistent.
"""

from enum import Enum


class RuleId(Enum):
    """
    @brief Stable rule identifiers used by the CLI and serialized reports.
    """
    ROUND_ROBIN        = "round-robin"
    ALL_TO_ONE         = "all-to-one"          # trivial distortion-n rule
    EF1                = "ef1"
    EF1_LOW_DISTORTION = "ef1-low-distortion"
    MMS                = "mms"
    MMS_K_N_MINUS_1    = "mms-k-n-1"
    MMS_LOW_DISTORTION = "mms-low-distortion"


UNIFORM_PREFIX = "uniform:"

RULE_ORDER = [r.value for r in (RuleId.ROUND_ROBIN, RuleId.ALL_TO_ONE, RuleId.EF1,
                                RuleId.EF1_LOW_DISTORTION, RuleId.MMS,
                                RuleId.MMS_K_N_MINUS_1, RuleId.MMS_LOW_DISTORTION)]


class LeftoverKind(Enum):
    """
    @brief How a picking-sequence rule hands out goods left after the last pick.
    """
    ONE_EACH_ASCENDING = "one-each-ascending"
    ALL_TO_AGENT       = "all-to-agent"
    ROUND_ROBIN_PAD    = "round-robin-pad"


class SearchMode(Enum):
    """
    @brief How empirical distortion explores consistent valuation profiles.
    """
    EXHAUSTIVE_VERTICES = "exhaustive-vertices"
    SAMPLED             = "sampled"


class PropertyTag(Enum):
    """
    @brief Fairness property a fixture (or a check) is about.
    """
    EF1            = "ef1"
    EFX            = "efx"
    EQ1            = "eq1"
    EQX            = "eqx"
    EF1_DISTORTION = "ef1-distortion"
    MMS_POSITIVE   = "mms-positive"
    MMS_K_N_MINUS_1 = "mms-k-n-1"


class OutputFormat(Enum):
    """
    @brief Machine-readable output formats of the CLI.
    """
    JSON = "json"
    CSV  = "csv"


class Generator(Enum):
    """
    @brief Instance generators reachable from `fairdiv gen`.
    """
    IDENTICAL = "identical"    # all agents agree on the top-k goods 0..k-1
    RANDOM    = "random"       # sampled valuations, rankings read off them
    THM1      = "thm1"
    THM2      = "thm2"
    MMS_UPPER = "mms-upper"


class Caps:
    """
    @class Caps
    @brief Enumeration caps; every one is overridable from the command line.
    """
    MMS_MAX_M: int = 12              # @brief exact MMS oracle: goods
    MMS_MAX_N: int = 4               # @brief exact MMS oracle: agents
    PERMUTATION_MAX_N: int = 6       # @brief exact uniform-variant expansion
    VERTEX_PRODUCT_MAX: int = 10 ** 6
    THM1_MAX_GOODS: int = 10 ** 6
    UNRANKED_ENUM_MAX: int = 20      # @brief subsets of unranked goods


class Defaults:
    """
    @class Defaults
    @brief Default run parameters.
    """
    SEED: int = 0
    SAMPLES: int = 200
    DECIMALS: int = 6                # @brief human tables only
    LOG_DIR: str = "logs"
    LOG_DIR_ENV: str = "FAIRDIV_LOG_DIR"
