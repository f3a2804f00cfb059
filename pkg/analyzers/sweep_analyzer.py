"""
@file sweep_analyzer.py
@brief `fairdiv sweep`: empirical distortion and EF1 pass rate of every rule over
       a grid of (n, m, k) instances. One shard per (n, m), each with its own
       SeedSequence child; shards run in a process pool and are merged by
       instance id, so output does not depend on the worker count.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from analyzers.base_analyzer import BaseAnalyzer, CapConfig
from analyzers.gen_analyzer import random_instance
from config.enums import RULE_ORDER, Defaults, SearchMode
from config.messages import HEAD_SWEEP, LogMsg, ReportMsg
from fairdiv.errors import CapExceeded, FairDivError
from fairdiv.fairness import necessary_ef1
from fairdiv.model import Instance, UniformPermutationMixture, identical_instance
from fairdiv.rules import apply_rule, expand_mixture
from fairdiv.welfare import empirical_distortion
from utilits.logger import analysis_logger
from utilits.report_pdf import PDFReport
from utilits.serialization import format_rational, rows_to_frame

COLUMNS = ["instance_id", "rule", "ratio_num", "ratio_den", "mode", "seed",
           "n", "m", "k", "available", "necessary_ef1", "profiles"]


@dataclass(frozen=True)
class ShardTask:
    """@brief All instances with one (n, m), for every k and every rule."""
    index: int
    n: int
    m: int
    rules: Tuple[str, ...]
    random_instances: int
    entropy: np.random.SeedSequence
    samples: int
    caps: CapConfig


def instance_id(n: int, m: int, k: int, idx: int) -> str:
    return f"n{n:02d}-m{m:03d}-k{k:03d}-{idx:02d}"


def shard_instances(task: ShardTask) -> List[Tuple[str, Instance]]:
    """@brief The all-agree profile plus seeded random profiles for each k."""
    rng = np.random.default_rng(task.entropy)
    out = []
    for k in range(task.m + 1):
        out.append((instance_id(task.n, task.m, k, 0), identical_instance(task.n, task.m, k)))
        for idx in range(1, task.random_instances + 1):
            inst, _ = random_instance(task.n, task.m, k, rng)
            out.append((instance_id(task.n, task.m, k, idx), inst))
    return out


def _fair(rule_id: str, inst: Instance, caps: CapConfig) -> bool:
    outcome = apply_rule(rule_id, inst)
    if isinstance(outcome, UniformPermutationMixture):
        return all(necessary_ef1(A, inst) for A, _ in expand_mixture(outcome, caps.permutation_max_n).support)
    return necessary_ef1(outcome, inst)


def evaluate_cell(rule_id: str, inst_id: str, inst: Instance, seed: int,
                  samples: int, caps: CapConfig) -> Dict[str, Any]:
    """
    @brief One CSV row. Exhaustive vertex search when within caps, sampling
           otherwise; unavailable rules (precondition errors) get empty metrics.
    """
    row: Dict[str, Any] = {"instance_id": inst_id, "rule": rule_id, "n": inst.n, "m": inst.m, "k": inst.k,
                           "seed": seed, "available": True}
    try:
        fair = _fair(rule_id, inst, caps)
    except FairDivError:
        row.update(available=False, ratio_num=None, ratio_den=None, mode=None,
                   necessary_ef1=None, profiles=0)
        return row
    try:
        report = empirical_distortion(rule_id, inst, SearchMode.EXHAUSTIVE_VERTICES, seed, samples,
                                      inst_id, caps.vertex_product_max, caps.permutation_max_n)
    except CapExceeded:
        report = empirical_distortion(rule_id, inst, SearchMode.SAMPLED, seed, samples,
                                      inst_id, caps.vertex_product_max, caps.permutation_max_n)
    row.update(report.to_row())
    row.update(necessary_ef1=fair, profiles=report.profiles_checked)
    return row


def run_shard(task: ShardTask) -> List[Dict[str, Any]]:
    """@brief Worker entry point; pure function of the task."""
    logger = analysis_logger.get_logger("SweepShard")
    instances = shard_instances(task)
    logger.info(LogMsg.SHARD_START.format(task.index, len(instances) * len(task.rules)))
    seed = int(task.entropy.generate_state(1)[0])
    rows = [evaluate_cell(rule_id, inst_id, inst, seed, task.samples, task.caps)
            for inst_id, inst in instances for rule_id in task.rules]
    logger.info(LogMsg.SHARD_DONE.format(task.index, len(rows)))
    return rows


def merge_rows(chunks: Sequence[List[Dict[str, Any]]]) -> pd.DataFrame:
    """@brief Concatenate shard rows and order them by (instance_id, rule)."""
    rows = [row for chunk in chunks for row in chunk]
    df = rows_to_frame(rows, COLUMNS)
    df = df.sort_values(["instance_id", "rule"], kind="mergesort").reset_index(drop=True)
    for col in ("ratio_num", "ratio_den"):
        df[col] = df[col].astype("Int64")
    return df


def summarize(df: pd.DataFrame) -> pd.DataFrame:
    """
    @brief Per (rule, n): available cells, worst ratio found (exact, "inf" for
           zero-welfare witnesses) and the necessary-EF1 pass rate in percent.
    """
    records = []
    for (rule_id, n), group in df[df["available"]].groupby(["rule", "n"], sort=True):
        worst: Optional[Fraction] = Fraction(1)
        for num, den in zip(group["ratio_num"], group["ratio_den"]):
            if den == 0:
                worst = None
                break
            worst = max(worst, Fraction(int(num), int(den)))
        records.append({
            "rule": rule_id,
            "n": int(n),
            "cells": int(len(group)),
            "worst_ratio": format_rational(worst),
            "ef1_pass_pct": float(group["necessary_ef1"].astype(bool).mean() * 100.0),
        })
    return pd.DataFrame.from_records(records, columns=["rule", "n", "cells", "worst_ratio", "ef1_pass_pct"])


class SweepAnalyzer(BaseAnalyzer):
    """
    @class SweepAnalyzer
    @brief Builds the grid, runs shards (in parallel when workers > 1) and merges.
    """

    def __init__(self, rules: Sequence[str], n_min: int, n_max: int, m_max: int,
                 random_instances: int = 1, seed: int = Defaults.SEED, samples: int = Defaults.SAMPLES,
                 workers: int = 1, caps: Optional[CapConfig] = None) -> None:
        super().__init__(caps=caps)
        self.rules = tuple(rules) if rules else tuple(RULE_ORDER)
        self.n_min, self.n_max, self.m_max = n_min, n_max, m_max
        self.random_instances = random_instances
        self.seed = seed
        self.samples = samples
        self.workers = max(1, workers)

    def tasks(self) -> List[ShardTask]:
        grid = [(n, m) for n in range(self.n_min, self.n_max + 1) for m in range(1, self.m_max + 1)]
        children = np.random.SeedSequence(self.seed).spawn(len(grid))
        return [ShardTask(i, n, m, self.rules, self.random_instances, child, self.samples, self.caps)
                for i, ((n, m), child) in enumerate(zip(grid, children))]

    def execute_analysis(self) -> Dict[str, Any]:
        tasks = self.tasks()
        self.logger.info(LogMsg.COMMAND_START.format(f"sweep over {len(tasks)} shards, workers={self.workers}"))
        if self.workers == 1:
            chunks = [run_shard(t) for t in tasks]
        else:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                chunks = list(pool.map(run_shard, tasks))
        table = merge_rows(chunks)
        summary = summarize(table)
        return {"title": HEAD_SWEEP, "seed": self.seed, "table": table, "summary": summary}

    def to_frame(self, result: Dict[str, Any]) -> pd.DataFrame:
        return result["table"]

    def to_json(self, result: Dict[str, Any]) -> Dict[str, Any]:
        table = result["table"].astype(object).where(result["table"].notna(), None)
        return {
            "seed": result["seed"],
            "rows": table.to_dict(orient="records"),
            "summary": result["summary"].to_dict(orient="records"),
        }

    def print(self, result: Dict[str, Any]) -> str:
        lines = []
        for rec in result["summary"].itertuples(index=False):
            lines.append(ReportMsg.SWEEP_ROW.format(rec.rule, rec.n, rec.cells, rec.worst_ratio, rec.ef1_pass_pct))
        return "\n".join(lines) if lines else "no applicable cells"

    def write_pdf(self, result: Dict[str, Any], path: str) -> str:
        pdf = PDFReport(title="Fair division sweep")
        pdf.add_section(HEAD_SWEEP, f"seed={result['seed']}\n\n" + self.print(result))
        summary = result["summary"]
        pdf.add_table("Summary by rule and n", list(summary.columns),
                      [[str(x) for x in row] for row in summary.itertuples(index=False)])
        pdf.output(path)
        self.logger.info(LogMsg.OUTPUT_WRITTEN.format(path))
        return path
