"""Backbone extraction: each node keeps its strongest outgoing knowledge flows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .ingest import Division, FieldTable
from .network import FlowNetwork

DEFAULT_ASYMMETRY = 0.2


@dataclass(frozen=True)
class BackboneNode:
    index: int
    label: str
    division: Optional[Division]
    size: float


@dataclass(frozen=True)
class BackboneEdge:
    source: int
    target: int
    width: float
    bidirectional: bool


@dataclass(frozen=True)
class BackboneGraph:
    nodes: Tuple[BackboneNode, ...]
    edges: Tuple[BackboneEdge, ...]
    asymmetry: float = DEFAULT_ASYMMETRY

    def edge_set(self):
        return {(e.source, e.target) for e in self.edges}


def is_bidirectional(w_ij: float, w_ji: float, threshold: float = DEFAULT_ASYMMETRY) -> bool:
    hi = max(w_ij, w_ji)
    if hi <= 0:
        return False
    return min(w_ij, w_ji) / hi >= threshold


def extract_backbone(
    net: FlowNetwork,
    fields: Optional[FieldTable] = None,
    top_k: int = 1,
    division: Optional[Division] = None,
    min_width: Optional[float] = None,
    asymmetry: float = DEFAULT_ASYMMETRY,
) -> BackboneGraph:
    """Keep each node's ``top_k`` widest outgoing edges.

    With ``division`` only edges whose endpoints both belong to it are
    considered. ``min_width`` switches to plain threshold pruning and ignores
    ``top_k``. Ties in width go to the smaller target index. Node size is the
    node's total outgoing width in the full network.
    """
    if top_k < 0:
        raise ValueError("top_k must be non-negative")
    fields = fields if fields is not None else net.fields
    if division is not None and fields is None:
        raise ValueError("division filter needs the field table")
    width = net.width
    n = net.n
    allowed = np.ones(n, dtype=bool)
    if division is not None:
        allowed = np.array([d is division for d in fields.divisions])

    kept: List[Tuple[int, int]] = []
    for i in range(n):
        if not allowed[i]:
            continue
        targets = [j for j in np.nonzero(width[i] > 0)[0].tolist() if allowed[j]]
        if min_width is not None:
            kept.extend((i, j) for j in targets if width[i, j] >= min_width)
        else:
            targets.sort(key=lambda j: (-width[i, j], j))
            kept.extend((i, j) for j in targets[:top_k])
    kept.sort()

    edges = tuple(
        BackboneEdge(i, j, float(width[i, j]), is_bidirectional(width[i, j], width[j, i], asymmetry))
        for i, j in kept
    )
    used = sorted({i for i, _ in kept} | {j for _, j in kept})
    size = width.sum(axis=1)
    nodes = tuple(
        BackboneNode(
            index=i,
            label=fields.ids[i] if fields is not None else str(i),
            division=fields.divisions[i] if fields is not None else None,
            size=float(size[i]),
        )
        for i in used
    )
    return BackboneGraph(nodes, edges, asymmetry)
