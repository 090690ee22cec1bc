"""
Triple Linking — Lagrangian Census

One row per Lagrangian: canonical basis, pivot shape, left-block
determinant and number of dual partners, optionally with the triple-form
value of an obstruction vector.  The summary dict is what the `census`
command prints.
"""

from __future__ import annotations

import logging
from collections import Counter
from typing import Sequence

import pandas as pd

from triple_linking.isotropic import Subspace, left_block_det
from triple_linking.tripleform import ObstructionVector, triple_form_value

logger = logging.getLogger(__name__)

CENSUS_COLUMNS = ["index", "basis", "pivots", "left_block_det", "left_block", "partners"]


def census_frame(
    lagrangians: Sequence[Subspace],
    pairs: Sequence[tuple[int, int]],
    v: ObstructionVector | None = None,
) -> pd.DataFrame:
    """Census table, index-aligned with `lagrangians`; `pairs` are index pairs."""
    partners = Counter()
    for i, j in pairs:
        partners[i] += 1
        partners[j] += 1

    rows = []
    for i, lag in enumerate(lagrangians):
        det = left_block_det(lag)
        row = {
            "index": i,
            "basis": [list(r) for r in lag.basis],
            "pivots": list(lag.pivots),
            "left_block_det": det,
            "left_block": "nonsingular" if det else "singular",
            "partners": partners[i],
        }
        if v is not None:
            value = triple_form_value(v, lag)
            row["triple_form"] = str(value)
            row["vanishes"] = value.is_zero
        rows.append(row)

    columns = CENSUS_COLUMNS + (["triple_form", "vanishes"] if v is not None else [])
    return pd.DataFrame(rows, columns=columns)


def census_summary(frame: pd.DataFrame) -> dict:
    summary = {
        "lagrangians": int(len(frame)),
        "left_block_nonsingular": int((frame["left_block"] == "nonsingular").sum()),
        "left_block_singular": int((frame["left_block"] == "singular").sum()),
        "dual_pairs": int(frame["partners"].sum()) // 2,
    }
    if "vanishes" in frame.columns:
        vanishing = frame[frame["vanishes"]]
        summary["vanishing"] = int(len(vanishing))
        summary["vanishing_by_left_block"] = {
            block: int(n) for block, n in vanishing.groupby("left_block").size().items()
        }
    logger.info("Census: %s", summary)
    return summary


def partner_counts(frame: pd.DataFrame) -> dict[int, int]:
    """How many Lagrangians have each number of dual partners."""
    return {int(k): int(n) for k, n in frame["partners"].value_counts().sort_index().items()}
