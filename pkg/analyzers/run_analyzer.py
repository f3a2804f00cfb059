"""
@file run_analyzer.py
@brief `fairdiv run`: execute a rule on an instance and report the allocation
       (or the expanded mixture of a uniform:<rule>) with its property checks.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional

from analyzers.base_analyzer import BaseAnalyzer, CapConfig
from analyzers.check_analyzer import (
    BALANCED, LEMMA1, MMS, NECESSARY, evaluate_properties, format_allocation, format_property,
)
from config.enums import PropertyTag
from config.messages import HEAD_RUN, LogMsg, ReportMsg
from fairdiv.model import Allocation, Instance, UniformPermutationMixture, ValuationProfile
from fairdiv.rules import apply_rule, expand_mixture, guaranteed_alpha, rule_prefix_length
from fairdiv.welfare import expected_sw, optimal_sw, social_welfare
from utilits.serialization import allocation_to_json, format_rational, pretty

RUN_PROPERTIES = [NECESSARY + PropertyTag.EF1.value, LEMMA1, BALANCED]
VALUED_PROPERTIES = [PropertyTag.EF1.value, MMS]


class RunAnalyzer(BaseAnalyzer):
    """
    @class RunAnalyzer
    @brief Runs one rule (deterministic or uniformized) on one instance.
    """

    def __init__(self, rule_id: str, instance_path: Optional[str] = None,
                 instance: Optional[Instance] = None, valuations: Optional[ValuationProfile] = None,
                 caps: Optional[CapConfig] = None, seed: int = 0) -> None:
        super().__init__(instance_path, caps, instance, valuations)
        self.rule_id = rule_id
        self.seed = seed

    def _properties(self, A: Allocation, alpha: Optional[Fraction]) -> Dict[str, Any]:
        names = RUN_PROPERTIES + (VALUED_PROPERTIES if self.valuations is not None else [])
        return evaluate_properties(A, self.instance, self.valuations, self.caps, alpha, names)

    def execute_analysis(self) -> Dict[str, Any]:
        inst = self.instance
        self.logger.info(LogMsg.RULE_START.format(self.rule_id, inst.n, inst.m, inst.k))
        outcome = apply_rule(self.rule_id, inst)
        alpha = guaranteed_alpha(self.rule_id, inst.n, inst.m, inst.k)

        if isinstance(outcome, UniformPermutationMixture):
            mixture = expand_mixture(outcome, self.caps.permutation_max_n)
            support = [(A, p) for A, p in mixture.support]
        else:
            support = [(outcome, Fraction(1))]

        outcomes = []
        for A, p in support:
            entry: Dict[str, Any] = {"allocation": A, "probability": p,
                                     "properties": self._properties(A, alpha)}
            if self.valuations is not None:
                entry["social_welfare"] = social_welfare(A, self.valuations)
            outcomes.append(entry)

        result: Dict[str, Any] = {
            "title": HEAD_RUN,
            "rule": self.rule_id,
            "n": inst.n, "m": inst.m, "k": inst.k,
            "seed": self.seed,
            "prefix_length": rule_prefix_length(self.rule_id, inst),
            "alpha": alpha,
            "outcomes": outcomes,
        }
        if self.valuations is not None:
            if isinstance(outcome, UniformPermutationMixture):
                result["expected_welfare"] = expected_sw(mixture, self.valuations)
            else:
                result["expected_welfare"] = outcomes[0]["social_welfare"]
            result["optimal_welfare"] = optimal_sw(self.valuations)
        self.logger.info(LogMsg.RULE_DONE.format(self.rule_id, [o["allocation"].sizes() for o in outcomes]))
        return result

    def print(self, result: Dict[str, Any]) -> str:
        lines: List[str] = [f"rule={result['rule']}  n={result['n']}  m={result['m']}  k={result['k']}  "
                            f"picks={result['prefix_length']}"]
        if result["alpha"] is not None:
            lines.append(ReportMsg.ALPHA.format(pretty(result["alpha"])))
        for entry in result["outcomes"]:
            label = "deterministic" if entry["probability"] == 1 else f"p={format_rational(entry['probability'])}"
            lines.append("")
            lines.append(ReportMsg.ALLOCATION.format(label))
            lines.extend(format_allocation(entry["allocation"]))
            for name, value in entry["properties"].items():
                lines.append(ReportMsg.PROPERTY.format(name, format_property(value)))
        if "expected_welfare" in result:
            lines.append("")
            lines.append(ReportMsg.WELFARE.format(format_rational(result["expected_welfare"]),
                                                  float(result["expected_welfare"])))
            lines.append(f"Optimal welfare: {pretty(result['optimal_welfare'])}")
        return "\n".join(lines)

    def to_json(self, result: Dict[str, Any]) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "rule": result["rule"],
            "n": result["n"], "m": result["m"], "k": result["k"],
            "seed": result["seed"],
            "prefix_length": result["prefix_length"],
            "alpha": format_rational(result["alpha"]) if result["alpha"] is not None else None,
            "outcomes": [
                {
                    "allocation": allocation_to_json(e["allocation"]),
                    "probability": format_rational(e["probability"]),
                    "properties": e["properties"],
                    **({"social_welfare": format_rational(e["social_welfare"])} if "social_welfare" in e else {}),
                }
                for e in result["outcomes"]
            ],
        }
        if "expected_welfare" in result:
            data["expected_welfare"] = format_rational(result["expected_welfare"])
            data["optimal_welfare"] = format_rational(result["optimal_welfare"])
        return data
