"""
@brief Fair division of indivisible goods from top-k rankings: instances,
       picking-sequence rules, necessary fairness checks, welfare and distortion.
"""

from fairdiv.errors import FairDivError
from fairdiv.model import (
    Allocation, ExplicitMixture, Instance, PickingSequence, UniformPermutationMixture,
    ValuationProfile, harmonic, identical_instance, instance_from_json, instance_to_json,
)
from fairdiv.rules import apply_rule, guaranteed_alpha, run_rule
from fairdiv.fairness import MmsCap, mms_value, necessary_ef1
from fairdiv.welfare import empirical_distortion, expected_sw, optimal_sw, social_welfare

__all__ = [
    "FairDivError",
    "Allocation", "ExplicitMixture", "Instance", "PickingSequence", "UniformPermutationMixture",
    "ValuationProfile", "harmonic", "identical_instance", "instance_from_json", "instance_to_json",
    "apply_rule", "guaranteed_alpha", "run_rule",
    "MmsCap", "mms_value", "necessary_ef1",
    "empirical_distortion", "expected_sw", "optimal_sw", "social_welfare",
]
