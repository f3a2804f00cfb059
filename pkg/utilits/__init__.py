"""
@file __init__.py
@brief Utilities (logging, serialization, PDF summaries).
"""

from .logger import analysis_logger

__all__ = ["analysis_logger"]
