import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import flow_widths, make_fields
from knowpath.backbone import extract_backbone, is_bidirectional
from knowpath.ingest import Division
from knowpath.network import FlowNetwork

HAND_WIDTHS = np.array(
    [
        [0, 5, 3, 0, 1],
        [2, 0, 7, 7, 0],
        [0, 0, 0, 4, 0],
        [9, 1, 1, 0, 1],
        [0, 0, 0, 6, 0],
    ],
    dtype=float,
)


def _oracle(width, k):
    kept = set()
    for i, row in enumerate(width):
        outs = sorted(((-w, j) for j, w in enumerate(row) if w > 0 and j != i))
        kept.update((i, j) for _, j in outs[:k])
    return kept


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hand_network_matches_sort_oracle(k):
    graph = extract_backbone(FlowNetwork(HAND_WIDTHS), top_k=k)
    assert graph.edge_set() == _oracle(HAND_WIDTHS, k)


def test_tie_goes_to_smaller_target():
    graph = extract_backbone(FlowNetwork(HAND_WIDTHS), top_k=1)
    # node 1 has two width-7 edges (to 2 and 3)
    assert (1, 2) in graph.edge_set() and (1, 3) not in graph.edge_set()


def test_large_k_keeps_everything():
    net = FlowNetwork(HAND_WIDTHS)
    graph = extract_backbone(net, top_k=10)
    assert graph.edge_set() == {(i, j) for i, j, _, _ in net.edges()}


def test_zero_k_empty():
    graph = extract_backbone(FlowNetwork(HAND_WIDTHS), top_k=0)
    assert graph.edges == () and graph.nodes == ()


def test_division_filter():
    fields = make_fields(5, divisions=["science", "science", "social_science", "social_science", "social_science"])
    graph = extract_backbone(FlowNetwork(HAND_WIDTHS), fields, top_k=5, division=Division.SOCIAL_SCIENCE)
    assert graph.edge_set() == {(2, 3), (3, 2), (3, 4), (4, 3)}
    assert all(node.division is Division.SOCIAL_SCIENCE for node in graph.nodes)


def test_min_width_threshold():
    graph = extract_backbone(FlowNetwork(HAND_WIDTHS), top_k=1, min_width=6)
    assert graph.edge_set() == {(1, 2), (1, 3), (3, 0), (4, 3)}


def test_bidirectional_flags():
    graph = extract_backbone(FlowNetwork(HAND_WIDTHS), top_k=5)
    flags = {(e.source, e.target): e.bidirectional for e in graph.edges}
    assert flags[(0, 1)] and flags[(1, 0)]  # 5 vs 2
    assert not flags[(1, 3)]  # 7 vs 1
    assert flags[(2, 3)]  # 4 vs 1 -> 0.25
    assert not flags[(0, 4)]  # no reverse edge


def test_node_size_is_total_outflow():
    graph = extract_backbone(FlowNetwork(HAND_WIDTHS), top_k=1)
    sizes = {node.index: node.size for node in graph.nodes}
    assert sizes[1] == 16 and sizes[3] == 12


@given(st.floats(0, 100), st.floats(0, 100), st.floats(0, 1))
def test_bidirectional_symmetric(a, b, t):
    assert is_bidirectional(a, b, t) == is_bidirectional(b, a, t)


@settings(max_examples=100, deadline=None)
@given(flow_widths(max_n=8), st.integers(0, 8))
def test_backbone_properties(width, k):
    net = FlowNetwork(width)
    small = extract_backbone(net, top_k=k)
    bigger = extract_backbone(net, top_k=k + 1)
    assert len(small.edges) <= k * net.n
    assert small.edge_set() <= bigger.edge_set()
    assert all(net.has_edge(e.source, e.target) for e in small.edges)
    assert small.edge_set() == _oracle(width, k)
