"""Per-field knowledge-flow indicators.

Averages run over every field including the field itself (self path: length 1,
weight 0). Unreachable pairs are left out and the denominator shrinks to the
number of reachable partners; ``excluded`` records how many were dropped.

OiSP counts a field only when it sits strictly between the two endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .ingest import Division, FieldTable
from .paths import PathTable

OISP_CONVENTION = "strict-intermediates"
RANK_TIE_RTOL = 1e-12
SD_CONVENTION = "population"
DIRECTIONS = ("source", "destination")


@dataclass(frozen=True)
class FieldMeans:
    mean: np.ndarray
    sd: np.ndarray
    max: np.ndarray
    excluded: np.ndarray


@dataclass(frozen=True)
class IndicatorRow:
    field: int
    aspl_source: float
    aspl_destination: float
    aspw_source: float
    aspw_destination: float
    oisp: int
    spl_sd_source: float
    spl_max_source: int

    def metric(self, name: str, direction: str = "source"):
        if name == "oisp":
            return self.oisp
        if direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {direction!r}")
        return getattr(self, f"{name}_{direction}")


def _orient(values: np.ndarray, direction: str) -> np.ndarray:
    if direction == "source":
        return values
    if direction == "destination":
        return values.T
    raise ValueError(f"unknown direction {direction!r}")


def _field_means(values: np.ndarray, mask: np.ndarray) -> FieldMeans:
    counts = mask.sum(axis=1)
    safe = np.where(mask, values, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = safe.sum(axis=1) / counts
        dev = np.where(mask, values - mean[:, None], 0.0)
        sd = np.sqrt((dev**2).sum(axis=1) / counts)
    mx = np.where(mask, values, -np.inf).max(axis=1)
    return FieldMeans(mean, sd, mx, mask.shape[1] - counts)


def compute_aspl(table: PathTable, direction: str = "source") -> FieldMeans:
    """Average shortest path length per field, with population SD and max."""
    spl = _orient(table.spl, direction).astype(float)
    fm = _field_means(spl, _orient(table.reachable, direction))
    return FieldMeans(fm.mean, fm.sd, fm.max.astype(np.int64), fm.excluded)


def compute_aspw(table: PathTable, direction: str = "source") -> FieldMeans:
    """Average shortest path weight per field."""
    return _field_means(_orient(table.spw, direction), _orient(table.reachable, direction))


def compute_oisp(table: PathTable) -> np.ndarray:
    """How many ordered-pair shortest paths pass through each field as an intermediate.

    Works on the shortest-path trees: inside the tree rooted at ``i`` a node
    ``k`` lies on the paths to itself and to each of its descendants.
    """
    n = table.n
    spl = np.asarray(table.spl)
    pred = np.asarray(table.pred)
    subtree = table.reachable.astype(np.int64)
    for length in range(int(spl.max()), 1, -1):
        rows, cols = np.nonzero(spl == length)
        np.add.at(subtree, (rows, pred[rows, cols]), subtree[rows, cols])
    through = np.where(table.reachable, subtree - 1, 0)
    through[np.arange(n), np.arange(n)] = 0
    return through.sum(axis=0)


def compute_indicators(table: PathTable) -> List[IndicatorRow]:
    src = compute_aspl(table, "source")
    dst = compute_aspl(table, "destination")
    wsrc = compute_aspw(table, "source")
    wdst = compute_aspw(table, "destination")
    oisp = compute_oisp(table)
    return [
        IndicatorRow(
            field=i,
            aspl_source=float(src.mean[i]),
            aspl_destination=float(dst.mean[i]),
            aspw_source=float(wsrc.mean[i]),
            aspw_destination=float(wdst.mean[i]),
            oisp=int(oisp[i]),
            spl_sd_source=float(src.sd[i]),
            spl_max_source=int(src.max[i]),
        )
        for i in range(table.n)
    ]


def rank_fields(
    rows: Sequence[IndicatorRow],
    metric: str,
    direction: str = "source",
    division: Optional[Division] = None,
    k: int = 10,
    fields: Optional[FieldTable] = None,
):
    """Top ``k`` ``(field, value)`` pairs.

    Shorter averages rank first for ``aspl``/``aspw``; higher counts first for
    ``oisp``. Values equal to within a relative 1e-12 count as tied, and ties
    go to the smaller field index.
    """
    if metric not in ("aspl", "aspw", "oisp"):
        raise ValueError(f"unknown metric {metric!r}")
    if division is not None:
        if fields is None:
            raise ValueError("division filter needs the field table")
        rows = [r for r in rows if fields.divisions[r.field] is division]
    sign = -1 if metric == "oisp" else 1
    ranked = sorted(rows, key=lambda r: (sign * r.metric(metric, direction), r.field))
    ranked = _settle_ties(ranked, lambda r: r.metric(metric, direction))
    return [(r.field, r.metric(metric, direction)) for r in ranked[: max(k, 0)]]


def _settle_ties(ranked, value):
    """Reorder runs of values equal within ``RANK_TIE_RTOL`` by field index."""
    out, run = [], []
    for r in ranked:
        if run:
            a, b = value(run[-1]), value(r)
            if abs(a - b) > RANK_TIE_RTOL * max(abs(a), abs(b)):
                out.extend(sorted(run, key=lambda x: x.field))
                run = []
        run.append(r)
    out.extend(sorted(run, key=lambda x: x.field))
    return out
