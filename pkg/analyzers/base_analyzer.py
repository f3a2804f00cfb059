"""
@file base_analyzer.py
@brief Common base for command analyzers: optional instance/allocation loading,
       per-class logger, result rendering and exit-code policy.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import pandas as pd

from config.enums import Caps, OutputFormat
from config.messages import LogMsg
from fairdiv.fairness import MmsCap
from fairdiv.model import Allocation, Instance, ValuationProfile, instance_from_json
from utilits.logger import analysis_logger
from utilits.serialization import allocation_from_json, dump_json, frame_to_csv, load_json


@dataclass(frozen=True)
class CapConfig:
    """@brief Enumeration caps of one run; defaults from config.enums.Caps."""
    mms_max_m: int = Caps.MMS_MAX_M
    mms_max_n: int = Caps.MMS_MAX_N
    permutation_max_n: int = Caps.PERMUTATION_MAX_N
    vertex_product_max: int = Caps.VERTEX_PRODUCT_MAX

    @property
    def mms(self) -> MmsCap:
        return MmsCap(self.mms_max_m, self.mms_max_n)


class BaseAnalyzer:
    """
    @brief Base class for all command analyzers.
    Subclasses implement execute_analysis() -> dict and print(result) -> str.
    @param instance_path Optional instance JSON (loaded once, wins over `instance`)
    @param instance, valuations An instance built in memory, e.g. by a generator
    @throws FileNotFoundError, json.JSONDecodeError, FairDivError on read/parse issues
    """

    def __init__(self, instance_path: Optional[str] = None, caps: Optional[CapConfig] = None,
                 instance: Optional[Instance] = None, valuations: Optional[ValuationProfile] = None) -> None:
        self.logger = analysis_logger.get_logger(self.__class__.__name__)
        self.caps = caps or CapConfig()
        self.instance_path = instance_path
        self.instance = instance
        self.valuations = valuations
        if instance_path is not None:
            self.instance, self.valuations = instance_from_json(self._load_json(instance_path))
            self.logger.info(f"Instance ready: n={self.instance.n}, m={self.instance.m}, k={self.instance.k}, "
                             f"valuations={'yes' if self.valuations is not None else 'no'}")

    def _load_json(self, path: str) -> Any:
        """
        @brief Read a JSON document and log the outcome.
        @throws FileNotFoundError, json.JSONDecodeError
        """
        self.logger.info(LogMsg.DATA_LOAD_START.format(path))
        try:
            data = load_json(path)
        except (OSError, ValueError) as error:
            self.logger.error(LogMsg.DATA_LOAD_FAIL.format(path, error))
            raise
        self.logger.info(LogMsg.DATA_LOAD_OK.format(path))
        return data

    def _load_allocation(self, path: str) -> Allocation:
        return allocation_from_json(self._load_json(path))

    def execute_analysis(self) -> Dict[str, Any]:
        raise NotImplementedError

    def print(self, result: Dict[str, Any]) -> str:
        raise NotImplementedError

    def violation(self, result: Dict[str, Any]) -> bool:
        """@brief True when the result records a failed property (exit code 1)."""
        return False

    def to_json(self, result: Dict[str, Any]) -> Dict[str, Any]:
        return result

    def to_frame(self, result: Dict[str, Any]) -> Optional[pd.DataFrame]:
        """@brief Tabular view for --format csv; None when the command has no table."""
        return None

    def render(self, result: Dict[str, Any], fmt: OutputFormat) -> str:
        """@brief Machine-readable output; CSV falls back to JSON for non-tabular results."""
        if fmt is OutputFormat.CSV:
            frame = self.to_frame(result)
            if frame is not None:
                return frame_to_csv(frame)
        return dump_json(self.to_json(result))
