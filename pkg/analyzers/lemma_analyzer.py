"""
@file lemma_analyzer.py
@brief Exact verification of the deadline-counting inequalities behind the
       MMS picking sequences:

       sum_i floor((d - i) / (2 H_n (n - i + 1)))                      <= d - n
       floor((d - 1) / (2n)) + sum_i floor((d - i) / (2 H_n (n - i + 1))) <= d - n

       for all d >= n + 1, plus the auxiliary chain H_{3n} <= 2 H_n - 1 (n >= 4).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from analyzers.base_analyzer import BaseAnalyzer
from config.messages import HEAD_LEMMAS, LogMsg, ReportMsg
from fairdiv.model import harmonic
from utilits.report_pdf import PDFReport
from utilits.serialization import format_rational, pretty

BASE = "base inequality"
REFINED = "refined inequality"
CHAIN = "harmonic chain"


def slope(n: int, i: int) -> Fraction:
    """@brief 2 H_n (n - i + 1), the spacing of agent i's deadlines (1-based i)."""
    return 2 * harmonic(n) * (n - i + 1)


def lemma_lhs(n: int, d: int, refined: bool = False) -> int:
    """
    @brief Direct exact evaluation of the left-hand side at (n, d).
    """
    total = sum(math.floor(Fraction(d - i) / slope(n, i)) for i in range(1, n + 1))
    if refined:
        total += (d - 1) // (2 * n)
    return total


def lemma_lhs_table(n: int, d_max: int, refined: bool = False) -> np.ndarray:
    """
    @brief lhs[d] for d = 0..d_max by counting deadlines: the floor sum at d is
           the number of pairs (i, j >= 1) with i + ceil(j * slope_i) <= d.
    """
    deadlines: List[int] = []
    for i in range(1, n + 1):
        step = slope(n, i)
        j = 1
        while True:
            deadline = i + math.ceil(j * step)
            if deadline > d_max:
                break
            deadlines.append(deadline)
            j += 1
    if refined:
        deadlines.extend(range(1 + 2 * n, d_max + 1, 2 * n))
    counts = np.bincount(np.asarray(deadlines, dtype=np.int64), minlength=d_max + 1)
    return np.cumsum(counts)


@dataclass
class Counterexample:
    lemma: str
    n: int
    d: int
    lhs: int
    rhs: int


def first_counterexample(n_max: int, d_max: int, refined: bool) -> Optional[Counterexample]:
    """@brief Scan 1 <= n <= n_max, n + 1 <= d <= d_max; None if the inequality holds."""
    for n in range(1, n_max + 1):
        if d_max < n + 1:
            continue
        lhs = lemma_lhs_table(n, d_max, refined)
        d = np.arange(n + 1, d_max + 1)
        bad = np.nonzero(lhs[d] > d - n)[0]
        if bad.size:
            at = int(d[bad[0]])
            return Counterexample(REFINED if refined else BASE, n, at, int(lhs[at]), at - n)
    return None


def cell_count(n_max: int, d_max: int) -> int:
    return sum(max(0, d_max - n) for n in range(1, n_max + 1))


def chain_failure(n_max: int) -> Optional[int]:
    """@brief First n in 4..n_max with H_{3n} > 2 H_n - 1, else None."""
    for n in range(4, n_max + 1):
        if harmonic(3 * n) > 2 * harmonic(n) - 1:
            return n
    return None


def reciprocal_tail(n: int) -> Fraction:
    """@brief sum_{j=1}^{3n} 1 / (2 H_n j - 1)."""
    h2 = 2 * harmonic(n)
    return sum((1 / (h2 * j - 1) for j in range(1, 3 * n + 1)), Fraction(0))


class LemmaAnalyzer(BaseAnalyzer):
    """
    @class LemmaAnalyzer
    @brief Runs both inequalities over a grid and reproduces the spot values.
    """

    def __init__(self, n_max: int, d_max: int) -> None:
        super().__init__()
        self.n_max = n_max
        self.d_max = d_max

    def execute_analysis(self) -> Dict[str, Any]:
        self.logger.info(LogMsg.LEMMA_RANGE.format("deadline inequalities", self.n_max, self.d_max))
        outcomes = {}
        for name, refined in ((BASE, False), (REFINED, True)):
            found = first_counterexample(self.n_max, self.d_max, refined)
            if found is not None:
                self.logger.warning(LogMsg.LEMMA_COUNTER.format(name, found.n, found.d, found.lhs, found.rhs))
            outcomes[name] = found

        chain_n = chain_failure(self.n_max)
        spot = {
            "refined lhs n=2, d=5": lemma_lhs(2, 5, True),
            "refined lhs n=2, d=6": lemma_lhs(2, 6, True),
            "refined lhs n=2, d=7": lemma_lhs(2, 7, True),
            "H_12": harmonic(12),
            "sum_{j<=9} 1/(2 H_3 j - 1)": reciprocal_tail(3),
            "2 H_4 - 1": 2 * harmonic(4) - 1,
        }
        cells = cell_count(self.n_max, self.d_max)
        return {
            "title": HEAD_LEMMAS,
            "n_max": self.n_max,
            "d_max": self.d_max,
            "cells": cells,
            "counterexamples": outcomes,
            "chain_failure": chain_n,
            "spot_values": spot,
        }

    def violation(self, result: Dict[str, Any]) -> bool:
        return result["chain_failure"] is not None or any(
            c is not None for c in result["counterexamples"].values())

    def print(self, result: Dict[str, Any]) -> str:
        lines = []
        for name, found in result["counterexamples"].items():
            if found is None:
                lines.append(ReportMsg.LEMMA_OK.format(name, result["cells"]))
            else:
                lines.append(ReportMsg.LEMMA_FAIL.format(name, found.n, found.d))
        if result["chain_failure"] is None:
            lines.append(ReportMsg.LEMMA_OK.format(CHAIN, max(0, result["n_max"] - 3)))
        else:
            lines.append(ReportMsg.LEMMA_FAIL.format(CHAIN, result["chain_failure"], "-"))
        lines.append("")
        for label, value in result["spot_values"].items():
            shown = pretty(value) if isinstance(value, Fraction) else str(value)
            lines.append(ReportMsg.SPOT_VALUE.format(label, shown))
        return "\n".join(lines)

    def to_json(self, result: Dict[str, Any]) -> Dict[str, Any]:
        def counter(found: Optional[Counterexample]):
            if found is None:
                return None
            return {"n": found.n, "d": found.d, "lhs": found.lhs, "rhs": found.rhs}

        return {
            "n_max": result["n_max"],
            "d_max": result["d_max"],
            "cells": result["cells"],
            "verified": not self.violation(result),
            "counterexamples": {name: counter(c) for name, c in result["counterexamples"].items()},
            "chain_failure": result["chain_failure"],
            "spot_values": {k: format_rational(v) if isinstance(v, Fraction) else v
                            for k, v in result["spot_values"].items()},
        }

    def write_pdf(self, result: Dict[str, Any], path: str) -> str:
        pdf = PDFReport(title="Deadline inequality verification")
        pdf.add_section(HEAD_LEMMAS, f"n <= {result['n_max']}, d <= {result['d_max']}\n\n" + self.print(result))
        pdf.output(path)
        self.logger.info(LogMsg.OUTPUT_WRITTEN.format(path))
        return path
