"""All-pairs shortest knowledge paths.

Dijkstra runs once per source. The per-source runs are independent, so they
advance in lock-step as rows of one array: every iteration settles one node
in every still-active row and relaxes its outgoing edges.

Tie-breaking is deterministic. A tentative distance that equals the current
one within ``TIE_TOLERANCE`` replaces the predecessor only when the new
predecessor has a smaller index, and among equal tentative distances the
smaller index is settled first. The resulting predecessor of ``j`` is the
smallest ``k`` with ``spw[i, k] + dist(k, j) == spw[i, j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .network import FlowNetwork

TIE_TOLERANCE = 1e-15
NO_PRED = -1
TIE_BREAK_RULE = "equal-weight(abs 1e-15)->smaller predecessor index"


class PathRow(NamedTuple):
    source: int
    pred: np.ndarray
    spl: np.ndarray
    spw: np.ndarray


@dataclass(frozen=True)
class PathTable:
    """Shortest-path results for every ordered pair.

    ``pred[i, j]`` is the node before ``j`` on the path from ``i`` (``-1`` for
    ``j == i`` and unreachable ``j``). ``spl`` counts nodes (1 for a self
    path, 0 for unreachable). ``spw`` sums distances (``inf`` if unreachable).
    """

    pred: np.ndarray
    spl: np.ndarray
    spw: np.ndarray

    @property
    def n(self) -> int:
        return self.spl.shape[0]

    @property
    def reachable(self) -> np.ndarray:
        return self.spl > 0

    def finite_count(self) -> int:
        return int(np.count_nonzero(self.reachable))

    def unreachable_count(self) -> int:
        return self.n * self.n - self.finite_count()

    def path(self, i: int, j: int) -> Optional[List[int]]:
        return reconstruct_path(self, i, j)


def _relax_rows(dist: np.ndarray, sources: Sequence[int]):
    n = dist.shape[0]
    m = len(sources)
    rows = np.arange(m)
    src = np.asarray(sources, dtype=np.int64)

    spw = np.full((m, n), np.inf)
    spl = np.zeros((m, n), dtype=np.int64)
    pred = np.full((m, n), NO_PRED, dtype=np.int64)
    settled = np.zeros((m, n), dtype=bool)
    spw[rows, src] = 0.0
    spl[rows, src] = 1

    for _ in range(n):
        open_w = np.where(settled, np.inf, spw)
        u = np.argmin(open_w, axis=1)
        du = open_w[rows, u]
        live = np.isfinite(du)
        if not live.any():
            break
        r = rows[live]
        u = u[live]
        du = du[live]
        settled[r, u] = True

        cand = du[:, None] + dist[u]
        cur = spw[r]
        cur_pred = pred[r]
        unsettled = ~settled[r]
        better = unsettled & (cand < cur - TIE_TOLERANCE)
        with np.errstate(invalid="ignore"):
            tie = (
                unsettled
                & ~better
                & np.isfinite(cand)
                & (np.abs(cand - cur) <= TIE_TOLERANCE)
                & (u[:, None] < cur_pred)
            )
        update = better | tie
        if not update.any():
            continue
        spw[r] = np.where(update, cand, cur)
        pred[r] = np.where(update, u[:, None], cur_pred)
        spl[r] = np.where(update, spl[r, u][:, None] + 1, spl[r])

    return pred, spl, spw


def dijkstra_from(net: FlowNetwork, source: int) -> PathRow:
    """Single-source shortest paths from ``source``."""
    if not 0 <= source < net.n:
        raise IndexError(f"source {source} out of range for {net.n} nodes")
    pred, spl, spw = _relax_rows(net.dist, [source])
    return PathRow(source, pred[0], spl[0], spw[0])


def all_pairs(net: FlowNetwork, chunk: int = 512) -> PathTable:
    """Shortest paths for every ordered pair of nodes."""
    dist = net.dist
    n = net.n
    parts = [_relax_rows(dist, range(s, min(s + chunk, n))) for s in range(0, n, chunk)]
    pred = np.vstack([p[0] for p in parts])
    spl = np.vstack([p[1] for p in parts])
    spw = np.vstack([p[2] for p in parts])
    for a in (pred, spl, spw):
        a.setflags(write=False)
    return PathTable(pred, spl, spw)


def reconstruct_path(table: PathTable, i: int, j: int) -> Optional[List[int]]:
    """Node sequence of the chosen shortest path, or ``None`` when unreachable."""
    if table.spl[i, j] == 0:
        return None
    path = [j]
    node = j
    while node != i:
        node = int(table.pred[i, node])
        if node == NO_PRED or len(path) > table.n:
            raise RuntimeError(f"broken predecessor chain for {i} -> {j}")
        path.append(node)
    path.reverse()
    return path
