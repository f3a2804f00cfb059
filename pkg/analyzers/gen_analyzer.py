"""
@file gen_analyzer.py
@brief Instance generation for `fairdiv gen`: agreement profiles, random
       valuation profiles with the rankings they induce, and the adversarial
       lower-bound families.
"""

from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import numpy as np

from analyzers.base_analyzer import BaseAnalyzer
from config.enums import Caps, Defaults, Generator
from config.messages import HEAD_GEN, LogMsg
from fairdiv.errors import PreconditionError
from fairdiv.model import (
    Instance, ValuationProfile, identical_instance, instance_from_valuations, instance_to_json,
)
from fairdiv.welfare import gen_mms_upper, gen_thm1, gen_thm2
from utilits.serialization import format_rational

SeedLike = Any


def random_valuations(n: int, m: int, seed: SeedLike = Defaults.SEED, scale: int = 10) -> ValuationProfile:
    """
    @brief Integer weights in [0, scale) per good, normalized to unit sum.
    A row of zeros gets weight 1 on one random good; ties are common.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights = rng.integers(0, scale, size=(n, m))
    rows = []
    for i in range(n):
        if m and weights[i].sum() == 0:
            weights[i, rng.integers(m)] = 1
        total = int(weights[i].sum())
        rows.append(tuple(Fraction(int(w), total) for w in weights[i]))
    return ValuationProfile(tuple(rows))


def random_instance(n: int, m: int, k: int, seed: SeedLike = Defaults.SEED) -> Tuple[Instance, ValuationProfile]:
    """@brief Random valuations and the top-k instance they induce."""
    v = random_valuations(n, m, seed)
    return instance_from_valuations(v, k), v


class GenAnalyzer(BaseAnalyzer):
    """
    @class GenAnalyzer
    @brief Builds one instance from a generator name and its parameters.
    """

    def __init__(self, generator: Generator, n: int, m: Optional[int] = None, k: Optional[int] = None,
                 x: int = 2, seed: int = Defaults.SEED, goods_cap: int = Caps.THM1_MAX_GOODS) -> None:
        super().__init__()
        self.generator = generator
        self.n, self.m, self.k, self.x = n, m, k, x
        self.seed = seed
        self.goods_cap = goods_cap

    def _need(self, name: str) -> int:
        value = getattr(self, name)
        if value is None:
            raise PreconditionError(name, None, f"required by generator {self.generator.value}")
        return value

    def execute_analysis(self) -> Dict[str, Any]:
        self.logger.info(LogMsg.COMMAND_START.format(f"gen {self.generator.value}"))
        extra: Dict[str, Any] = {}
        v: Optional[ValuationProfile] = None

        if self.generator is Generator.IDENTICAL:
            inst = identical_instance(self.n, self._need("m"), self._need("k"))
        elif self.generator is Generator.RANDOM:
            inst, v = random_instance(self.n, self._need("m"), self._need("k"), self.seed)
            extra["seed"] = self.seed
        elif self.generator is Generator.THM1:
            family = gen_thm1(self.n, self.x, self.goods_cap)
            inst = family.instance
            extra["x"] = self.x
            extra["blocks"] = [list(b) for b in family.blocks()]
            extra["block_welfare_bound"] = format_rational(family.block_welfare_bound())
        elif self.generator is Generator.THM2:
            family = gen_thm2(self.n)
            inst = family.instance
            extra["welfare_bound"] = format_rational(family.welfare_bound())
        else:
            family = gen_mms_upper(self.n, self._need("m"), self._need("k"))
            inst = family.instance
            cap = family.formula_cap()
            extra["alpha_cap"] = format_rational(cap) if cap is not None else None

        data = instance_to_json(inst, v)
        data["generator"] = self.generator.value
        data.update(extra)
        return {"title": HEAD_GEN, "instance": inst, "valuations": v, "json": data}

    def to_json(self, result: Dict[str, Any]) -> Dict[str, Any]:
        return result["json"]

    def print(self, result: Dict[str, Any]) -> str:
        inst: Instance = result["instance"]
        lines = [f"generator={result['json']['generator']}  n={inst.n}  m={inst.m}  k={inst.k}"]
        for agent, ranking in enumerate(inst.rankings[:10]):
            shown = list(ranking[:20])
            tail = " ..." if len(ranking) > 20 else ""
            lines.append(f"  agent {agent}: {shown}{tail}")
        if inst.n > 10:
            lines.append(f"  ... {inst.n - 10} more agents")
        return "\n".join(lines)
