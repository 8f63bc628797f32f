"""Knowledge-flow network built from a citation matrix.

A citation from field j to field i carries knowledge from i to j, so the flow
edge i -> j has width ``counts[j, i]`` and distance ``1 / counts[j, i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .ingest import CitationMatrix, FieldTable


@dataclass(frozen=True)
class FlowNetwork:
    """Dense weighted digraph. ``width[i, j]`` is 0 where there is no edge i -> j."""

    width: np.ndarray
    fields: Optional[FieldTable] = None

    def __post_init__(self):
        w = np.asarray(self.width, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("width must be a square matrix")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("widths must be finite and non-negative")
        w = w.copy()
        np.fill_diagonal(w, 0.0)
        w.setflags(write=False)
        object.__setattr__(self, "width", w)

    @property
    def n(self) -> int:
        return self.width.shape[0]

    @property
    def dist(self) -> np.ndarray:
        """Edge distances with ``inf`` marking absent edges."""
        with np.errstate(divide="ignore"):
            d = np.where(self.width > 0, 1.0 / np.where(self.width > 0, self.width, 1.0), np.inf)
        return d

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.width[i, j] > 0)

    def edges(self) -> List[Tuple[int, int, float, float]]:
        """``(source, target, flow_dist, flow_width)`` in index order."""
        out = []
        rows, cols = np.nonzero(self.width)
        for i, j in zip(rows.tolist(), cols.tolist()):
            w = float(self.width[i, j])
            out.append((i, j, 1.0 / w, w))
        return out

    def adjacency(self) -> List[List[Tuple[int, float, float]]]:
        adj: List[List[Tuple[int, float, float]]] = [[] for _ in range(self.n)]
        for i, j, d, w in self.edges():
            adj[i].append((j, d, w))
        return adj

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.width))


def build_flow_network(matrix: CitationMatrix) -> FlowNetwork:
    """Reverse citation direction and attach reciprocal-citation distances.

    Self-citations never produce edges.
    """
    if not np.any(matrix.counts > 0):
        raise ValueError("citation matrix has no edges")
    return FlowNetwork(matrix.counts.T.copy(), matrix.fields)


def reachability(net: FlowNetwork) -> np.ndarray:
    """Boolean ``reach[i, j]``: a directed path exists (every node reaches itself)."""
    n = net.n
    reach = np.eye(n, dtype=bool)
    adj = net.width > 0
    frontier = reach.copy()
    while True:
        step = (frontier.astype(np.int64) @ adj.astype(np.int64)) > 0
        new = step & ~reach
        if not new.any():
            return reach
        reach |= new
        frontier = new


def strongly_connected(net: FlowNetwork, cap: int = 20) -> Tuple[bool, List[Tuple[int, int]], int]:
    """Return ``(connected, first cap unreachable pairs, total unreachable)``."""
    reach = reachability(net)
    rows, cols = np.nonzero(~reach)
    total = int(rows.size)
    pairs = list(zip(rows[:cap].tolist(), cols[:cap].tolist()))
    return total == 0, pairs, total
