"""
@file check_analyzer.py
@brief Property report for a given allocation (`fairdiv check`), shared with `fairdiv run`.

Property names: ef1, efx, eq1, eqx, mms, balanced, lemma1 and the
ranking-only variants necessary-ef1, necessary-efx, necessary-eq1, necessary-eqx.
A cardinal name (ef1, ...) required without valuations falls back to its
necessary-* variant.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from analyzers.base_analyzer import BaseAnalyzer, CapConfig
from config.enums import PropertyTag
from config.messages import HEAD_CHECK, LogMsg, ReportMsg
from fairdiv.errors import CapExceeded, PreconditionError, TopKSetsDisagree
from fairdiv.fairness import (
    is_balanced, is_ef1, is_efx, is_eq1, is_eqx, lemma1_condition, mms_shortfalls,
    necessary_ef1, necessary_efx, necessary_eq1, necessary_eqx,
)
from fairdiv.model import Allocation, Instance, ValuationProfile, check_allocation
from fairdiv.welfare import optimal_sw, social_welfare
from utilits.serialization import allocation_to_json, format_rational, pretty

NECESSARY = "necessary-"
BALANCED = "balanced"
LEMMA1 = "lemma1"
MMS = "mms"

CARDINAL_CHECKS = {
    PropertyTag.EF1.value: is_ef1,
    PropertyTag.EFX.value: is_efx,
    PropertyTag.EQ1.value: is_eq1,
    PropertyTag.EQX.value: is_eqx,
}
NECESSARY_CHECKS = {
    NECESSARY + PropertyTag.EF1.value: necessary_ef1,
    NECESSARY + PropertyTag.EFX.value: necessary_efx,
    NECESSARY + PropertyTag.EQ1.value: necessary_eq1,
    NECESSARY + PropertyTag.EQX.value: necessary_eqx,
}
PROPERTY_NAMES = [*CARDINAL_CHECKS, MMS, BALANCED, LEMMA1, *NECESSARY_CHECKS]


def evaluate_properties(A: Allocation, inst: Instance, v: Optional[ValuationProfile],
                        caps: CapConfig, alpha: Optional[Fraction] = Fraction(1),
                        names: Optional[Sequence[str]] = None) -> Dict[str, Any]:
    """
    @brief Evaluate the named properties (all applicable ones by default).
    A value of None means "not applicable": no valuations, top-k sets disagree,
    no MMS fraction to test, or the MMS oracle cap was exceeded.
    """
    wanted = list(names) if names is not None else PROPERTY_NAMES
    report: Dict[str, Any] = {}
    for name in wanted:
        if name in NECESSARY_CHECKS:
            report[name] = NECESSARY_CHECKS[name](A, inst)
        elif name in CARDINAL_CHECKS:
            report[name] = CARDINAL_CHECKS[name](A, v) if v is not None else None
        elif name == BALANCED:
            report[name] = is_balanced(A)
        elif name == LEMMA1:
            try:
                report[name] = lemma1_condition(A, inst)
            except TopKSetsDisagree:
                report[name] = None
        elif name == MMS:
            report[name] = _mms_pass(A, v, alpha, caps)
        else:
            raise PreconditionError("property", name, f"expected one of {', '.join(PROPERTY_NAMES)}")
    return report


def _mms_pass(A: Allocation, v: Optional[ValuationProfile], alpha: Optional[Fraction],
              caps: CapConfig) -> Optional[bool]:
    if v is None or alpha is None:
        return None
    try:
        return not mms_shortfalls(A, v, alpha, caps.mms)
    except CapExceeded:
        return None


def resolve_required(required: Sequence[str], has_valuations: bool) -> List[str]:
    """@brief Map cardinal names to necessary-* when no valuations are available."""
    resolved = []
    for name in required:
        if name in CARDINAL_CHECKS and not has_valuations:
            name = NECESSARY + name
        if name not in PROPERTY_NAMES:
            raise PreconditionError("require", name, f"expected one of {', '.join(PROPERTY_NAMES)}")
        resolved.append(name)
    return resolved


def format_property(value: Optional[bool]) -> str:
    if value is None:
        return ReportMsg.NOT_APPLICABLE
    return ReportMsg.PASS if value else ReportMsg.FAIL


def format_allocation(A: Allocation) -> List[str]:
    return [ReportMsg.BUNDLE.format(agent, list(bundle)) for agent, bundle in enumerate(A.bundles)]


class CheckAnalyzer(BaseAnalyzer):
    """
    @class CheckAnalyzer
    @brief Checks one allocation of a loaded instance against required properties.
    """

    def __init__(self, instance_path: str, allocation_path: str, required: Sequence[str],
                 alpha: Fraction = Fraction(1), caps: Optional[CapConfig] = None) -> None:
        super().__init__(instance_path, caps)
        self.allocation = self._load_allocation(allocation_path)
        check_allocation(self.allocation, self.instance.n, self.instance.m)
        self.required = resolve_required(required, self.valuations is not None)
        self.alpha = alpha

    def execute_analysis(self) -> Dict[str, Any]:
        self.logger.info(LogMsg.COMMAND_START.format("check"))
        if self.valuations is not None:
            names = list(PROPERTY_NAMES)
        else:
            names = [n for n in PROPERTY_NAMES if n not in CARDINAL_CHECKS and n != MMS]
        for name in self.required:
            if name not in names:
                names.append(name)
        properties = evaluate_properties(self.allocation, self.instance, self.valuations,
                                         self.caps, self.alpha, names)
        failed = [name for name in self.required if properties.get(name) is False]
        result: Dict[str, Any] = {
            "title": HEAD_CHECK,
            "allocation": self.allocation,
            "properties": properties,
            "required": list(self.required),
            "failed": failed,
            "alpha": self.alpha,
        }
        if self.valuations is not None:
            result["social_welfare"] = social_welfare(self.allocation, self.valuations)
            result["optimal_welfare"] = optimal_sw(self.valuations)
        for name in failed:
            self.logger.info(LogMsg.METRIC_DONE.format(name, ReportMsg.FAIL))
        return result

    def violation(self, result: Dict[str, Any]) -> bool:
        return bool(result["failed"])

    def print(self, result: Dict[str, Any]) -> str:
        lines = [ReportMsg.ALLOCATION.format("given"), *format_allocation(result["allocation"]), ""]
        for name, value in result["properties"].items():
            marker = " *" if name in result["required"] else ""
            lines.append(ReportMsg.PROPERTY.format(name + marker, format_property(value)))
        if "social_welfare" in result:
            lines.append("")
            lines.append(f"Social welfare: {pretty(result['social_welfare'])}, "
                         f"optimum {pretty(result['optimal_welfare'])}")
        return "\n".join(lines)

    def to_json(self, result: Dict[str, Any]) -> Dict[str, Any]:
        data = {
            "allocation": allocation_to_json(result["allocation"]),
            "properties": result["properties"],
            "required": result["required"],
            "failed": result["failed"],
            "alpha": format_rational(result["alpha"]),
        }
        if "social_welfare" in result:
            data["social_welfare"] = format_rational(result["social_welfare"])
            data["optimal_welfare"] = format_rational(result["optimal_welfare"])
        return data
