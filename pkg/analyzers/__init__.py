"""
@file __init__.py
@brief Command analyzers behind the `fairdiv` sub-commands.
       Re-exports the base class and one analyzer per command.
"""

from .base_analyzer import BaseAnalyzer, CapConfig
from .gen_analyzer import GenAnalyzer
from .run_analyzer import RunAnalyzer
from .check_analyzer import CheckAnalyzer
from .sweep_analyzer import SweepAnalyzer
from .lemma_analyzer import LemmaAnalyzer

__all__ = [
    "BaseAnalyzer",
    "CapConfig",
    "GenAnalyzer",
    "RunAnalyzer",
    "CheckAnalyzer",
    "SweepAnalyzer",
    "LemmaAnalyzer",
]
