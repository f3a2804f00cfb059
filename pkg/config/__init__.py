"""
@file __init__.py
@brief Configuration: messages & enums.
       Centralizes constants, headers and canonical types.
"""

# Messages (headings, report phrases, log and error strings)
from .messages import (
    HEAD_RUN, HEAD_CHECK, HEAD_SWEEP, HEAD_LEMMAS, HEAD_GEN,
    LogMsg, ReportMsg, ErrMsg,
)

# Enums, caps and defaults
from .enums import (
    RuleId, RULE_ORDER, UNIFORM_PREFIX,
    LeftoverKind, SearchMode, PropertyTag, OutputFormat, Generator,
    Caps, Defaults,
)

__all__ = [
    # messages
    "HEAD_RUN", "HEAD_CHECK", "HEAD_SWEEP", "HEAD_LEMMAS", "HEAD_GEN",
    "LogMsg", "ReportMsg", "ErrMsg",
    # enums & constants
    "RuleId", "RULE_ORDER", "UNIFORM_PREFIX",
    "LeftoverKind", "SearchMode", "PropertyTag", "OutputFormat", "Generator",
    "Caps", "Defaults",
]
