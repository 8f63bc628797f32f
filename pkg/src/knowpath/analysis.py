"""Taxonomy aggregation, path-type census and path-length statistics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .ingest import Division, FieldTable
from .paths import PathTable

LEVELS = ("category", "class", "division")
METRICS = ("spl", "spw")

PATH_TYPE_RULE = "division-switch count: 0/1 minimal, more is detour"

# (source division, target division, detour?) -> label, in report order
PATH_TYPES: List[Tuple[Tuple[Division, Division, bool], str]] = [
    ((Division.SCIENCE, Division.SCIENCE, False), "S->S"),
    ((Division.SCIENCE, Division.SCIENCE, True), "S->SS->S"),
    ((Division.SCIENCE, Division.SOCIAL_SCIENCE, False), "S->SS"),
    ((Division.SCIENCE, Division.SOCIAL_SCIENCE, True), "S-detour->SS"),
    ((Division.SOCIAL_SCIENCE, Division.SCIENCE, False), "SS->S"),
    ((Division.SOCIAL_SCIENCE, Division.SCIENCE, True), "SS-detour->S"),
    ((Division.SOCIAL_SCIENCE, Division.SOCIAL_SCIENCE, False), "SS->SS"),
    ((Division.SOCIAL_SCIENCE, Division.SOCIAL_SCIENCE, True), "SS->S->SS"),
]
TYPE_LABELS = [label for _, label in PATH_TYPES]


class EmptyGroupError(ValueError):
    pass


@dataclass(frozen=True)
class HeatMap:
    """Mean of a pairwise metric between groups; rows are sources, columns destinations.

    ``weights[r, c]`` is how many reachable member pairs went into the cell,
    which is what lets a heat map be regrouped without losing exactness.
    """

    level: str
    metric: str
    labels: Tuple[str, ...]
    cells: np.ndarray
    weights: np.ndarray = field(default=None)

    def row_means(self) -> np.ndarray:
        return np.nanmean(self.cells, axis=1)


def _membership(groups: Sequence[Tuple[str, Sequence[int]]], n: int) -> np.ndarray:
    g = np.zeros((len(groups), n))
    for r, (label, members) in enumerate(groups):
        if len(members) == 0:
            raise EmptyGroupError(f"group {label!r} has no members")
        g[r, list(members)] = 1.0
    return g


def _pool(values: np.ndarray, weights: np.ndarray, groups, n: int):
    g = _membership(groups, n)
    total = g @ (np.where(weights > 0, values, 0.0) * weights) @ g.T
    count = g @ weights @ g.T
    with np.errstate(invalid="ignore", divide="ignore"):
        cells = total / count
    return cells, count


def aggregate_heatmap(table: PathTable, fields: FieldTable, level: str, metric: str) -> HeatMap:
    """Average ``spl`` or ``spw`` over all member pairs of every pair of groups."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    values = np.asarray(table.spl if metric == "spl" else table.spw, dtype=float)
    groups = fields.members(level)
    cells, count = _pool(values, table.reachable.astype(float), groups, table.n)
    return HeatMap(level, metric, tuple(label for label, _ in groups), cells, count)


def regroup(heatmap: HeatMap, groups: Sequence[Tuple[str, Sequence[int]]], level: str) -> HeatMap:
    """Pool an existing heat map's cells into coarser groups, weighted by pair counts."""
    if heatmap.weights is None:
        raise ValueError("heat map carries no pair weights")
    cells, count = _pool(heatmap.cells, heatmap.weights, groups, len(heatmap.labels))
    return HeatMap(level, heatmap.metric, tuple(label for label, _ in groups), cells, count)


def class_groups_by_division(fields: FieldTable) -> List[Tuple[str, List[int]]]:
    """Division groups expressed as indices into ``fields.class_labels()``."""
    labels = fields.class_labels()
    div_of = {c: d for c, d in zip(fields.classes, fields.divisions)}
    return [(d.label, [r for r, c in enumerate(labels) if div_of[c] is d]) for d in Division]


@dataclass(frozen=True)
class PathTypeCensus:
    counts: Dict[str, int]
    unreachable: int

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def block_total(self, label: str) -> int:
        idx = TYPE_LABELS.index(label) // 2 * 2
        return self.counts[TYPE_LABELS[idx]] + self.counts[TYPE_LABELS[idx + 1]]

    def percent_all(self, label: str) -> float:
        return 100.0 * self.counts[label] / self.total if self.total else 0.0

    def percent_block(self, label: str) -> float:
        block = self.block_total(label)
        return 100.0 * self.counts[label] / block if block else 0.0


def division_switches(table: PathTable, fields: FieldTable) -> np.ndarray:
    """Number of division changes along each chosen path (-1 when unreachable)."""
    div = np.array([d is Division.SOCIAL_SCIENCE for d in fields.divisions])
    spl = np.asarray(table.spl)
    pred = np.asarray(table.pred)
    switches = np.full(spl.shape, -1, dtype=np.int64)
    switches[spl == 1] = 0
    for length in range(2, int(spl.max()) + 1):
        rows, cols = np.nonzero(spl == length)
        p = pred[rows, cols]
        switches[rows, cols] = switches[rows, p] + (div[p] != div[cols])
    return switches


def classify_paths(table: PathTable, fields: FieldTable) -> PathTypeCensus:
    """Count paths by division block and whether they detour through the other division."""
    switches = division_switches(table, fields)
    div = np.array([d is Division.SOCIAL_SCIENCE for d in fields.divisions])
    counts = {}
    for (a, b, detour), label in PATH_TYPES:
        block = np.outer(div == (a is Division.SOCIAL_SCIENCE), div == (b is Division.SOCIAL_SCIENCE))
        minimal = 0 if a is b else 1
        if detour:
            hit = block & (switches > minimal)
        else:
            hit = block & (switches == minimal)
        counts[label] = int(np.count_nonzero(hit))
    return PathTypeCensus(counts, table.unreachable_count())


@dataclass(frozen=True)
class PathLengthStats:
    histogram: Dict[int, int]
    count: int
    median: float
    max: int
    skewness: float

    @property
    def positively_skewed(self) -> bool:
        return self.skewness > 0


def moment_skewness(values: np.ndarray) -> float:
    """Fisher moment coefficient m3 / m2**1.5 (population moments)."""
    x = np.asarray(values, dtype=float)
    dev = x - x.mean()
    m2 = np.mean(dev**2)
    if m2 == 0:
        return 0.0
    return float(np.mean(dev**3) / m2**1.5)


def spl_distribution(values) -> PathLengthStats:
    values = np.asarray(values, dtype=np.int64)
    hist = Counter(values.tolist())
    return PathLengthStats(
        histogram=dict(sorted(hist.items())),
        count=int(values.size),
        median=float(np.median(values)),
        max=int(values.max()),
        skewness=moment_skewness(values),
    )


def path_length_distribution(table: PathTable) -> PathLengthStats:
    """Histogram and summary of path lengths over reachable pairs, self pairs included."""
    return spl_distribution(np.asarray(table.spl)[table.reachable])
