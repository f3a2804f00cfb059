"""
@file serialization.py
@brief Lossless text forms for rationals, allocations and report tables.
       Machine-readable outputs carry rationals as "num/den"; human tables add
       a rounded decimal next to them.
"""

import json
import os
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence

import pandas as pd

from config.enums import Defaults
from fairdiv.errors import InvalidAllocation, InvalidValuation
from fairdiv.model import Allocation, to_rational


def format_rational(value: Optional[Fraction]) -> str:
    """
    @brief "num/den" (integers stay "n"); None is rendered as "inf".
    """
    if value is None:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: Any) -> Fraction:
    """
    @brief Inverse of format_rational; also accepts [num, den] pairs and ints.
    @throws InvalidValuation on floats or malformed text
    """
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError) as error:
        if isinstance(error, InvalidValuation):
            raise
        raise InvalidValuation(f"cannot parse rational {text!r}") from None


def approx(value: Optional[Fraction], decimals: int = Defaults.DECIMALS) -> float:
    """@brief Decimal view for human tables; +inf for None."""
    if value is None:
        return float("inf")
    return round(float(value), decimals)


def pretty(value: Optional[Fraction]) -> str:
    """@brief "num/den (~decimal)" for printed reports."""
    if value is None:
        return "inf"
    return f"{format_rational(value)} (~{approx(value):.{Defaults.DECIMALS}f})"


# Allocations

def allocation_to_json(A: Allocation) -> Dict[str, Any]:
    return {"bundles": [list(b) for b in A.bundles]}


def allocation_from_json(data: Any) -> Allocation:
    """
    @brief Accepts {"bundles": [[...], ...]} or a bare list of bundles.
    @throws InvalidAllocation
    """
    bundles = data.get("bundles") if isinstance(data, Mapping) else data
    if not isinstance(bundles, list):
        raise InvalidAllocation("expected a list of bundles")
    return Allocation(tuple(tuple(int(g) for g in b) for b in bundles))


# Files

def load_json(path: str) -> Any:
    """
    @throws FileNotFoundError, json.JSONDecodeError
    """
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def dump_json(data: Any) -> str:
    """@brief Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_text(text: str, path: str) -> str:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def rows_to_frame(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
    """
    @brief DataFrame with the given column order; Fractions become "num/den".
    """
    records = [{c: (format_rational(r[c]) if isinstance(r[c], Fraction) else r[c]) for c in columns}
               for r in rows]
    return pd.DataFrame.from_records(records, columns=list(columns))


def frame_to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator="\n")
