import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import flow_widths, make_fields
from knowpath.indicators import (
    IndicatorRow,
    compute_aspl,
    compute_aspw,
    compute_indicators,
    compute_oisp,
    rank_fields,
)
from knowpath.ingest import CitationMatrix, Division
from knowpath.network import FlowNetwork, build_flow_network
from knowpath.paths import all_pairs, reconstruct_path
from oracles import brute_force_paths


def _table(width):
    return all_pairs(FlowNetwork(width))


def test_uniform_three_nodes_aspl():
    table = _table(np.ones((3, 3)))
    np.testing.assert_allclose(compute_aspl(table, "source").mean, 5 / 3)
    np.testing.assert_allclose(compute_aspl(table, "destination").mean, 5 / 3)


def test_single_node_aspl():
    table = _table([[0]])
    assert compute_aspl(table).mean.tolist() == [1.0]
    assert compute_oisp(table).tolist() == [0]


def test_single_edge_aspw():
    table = _table([[0, 4], [0, 0]])
    src = compute_aspw(table, "source")
    assert src.mean[0] == 0.125
    # node 1 reaches only itself; node 0 is excluded from its average
    assert src.mean[1] == 0.0 and src.excluded.tolist() == [0, 1]


@pytest.mark.parametrize("n, c", [(3, 1), (4, 7), (6, 250)])
def test_uniform_network_aspw_closed_form(n, c):
    table = _table(np.full((n, n), float(c)))
    np.testing.assert_allclose(compute_aspw(table).mean, (n - 1) / (c * n), rtol=1e-15)


def test_sd_and_max_population():
    # chain 0 -> 1 -> 2 : spl from 0 is [1, 2, 3]
    table = _table([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    src = compute_aspl(table)
    assert src.mean[0] == 2.0
    assert src.sd[0] == pytest.approx(np.sqrt(2 / 3))
    assert src.max[0] == 3


def test_chain_oisp():
    table = _table([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert compute_oisp(table).tolist() == [0, 1, 0]


def test_star_oisp():
    n = 5
    w = np.full((n, n), 1.0)
    w[0, 1:] = 9
    w[1:, 0] = 9
    np.fill_diagonal(w, 0)
    oisp = compute_oisp(_table(w))
    # brute-force oracle: count intermediates on enumerated shortest paths
    expected = np.zeros(n, dtype=int)
    for (i, j), (_, path) in brute_force_paths(w).items():
        for k in path[1:-1]:
            expected[k] += 1
    assert oisp.tolist() == expected.tolist()
    assert oisp[0] == (n - 1) * (n - 2)


@settings(max_examples=120, deadline=None)
@given(flow_widths(max_n=8))
def test_oisp_matches_path_walk(width):
    table = _table(width)
    n = len(width)
    walked = np.zeros(n, dtype=int)
    for i in range(n):
        for j in range(n):
            path = reconstruct_path(table, i, j)
            if path:
                for k in path[1:-1]:
                    walked[k] += 1
    oisp = compute_oisp(table)
    assert oisp.tolist() == walked.tolist()
    spl = table.spl
    off = table.reachable & ~np.eye(n, dtype=bool)
    assert oisp.sum() == (spl[off] - 2).sum()


@settings(max_examples=120, deadline=None)
@given(flow_widths(min_n=1, max_n=8))
def test_denominator_and_duality(width):
    table = _table(width)
    if table.unreachable_count():
        return
    n = table.n
    src = compute_aspl(table, "source").mean
    dst = compute_aspl(table, "destination").mean
    off_diag = table.spl.sum(axis=1) - 1
    assert (np.rint(n * src - 1) == off_diag).all()
    np.testing.assert_allclose(n * src - 1, off_diag, rtol=1e-14)
    total = int(table.spl.sum())
    assert round(n * math.fsum(src)) == round(n * math.fsum(dst)) == total


@settings(max_examples=60, deadline=None)
@given(flow_widths(min_n=2, max_n=7), st.randoms(use_true_random=False))
def test_aspw_permutation_invariant(width, rnd):
    n = len(width)
    perm = list(range(n))
    rnd.shuffle(perm)
    inv = np.argsort(perm)
    base = compute_aspw(_table(width)).mean
    permuted = compute_aspw(_table(width[np.ix_(perm, perm)])).mean
    np.testing.assert_allclose(permuted[inv], base, rtol=1e-12)


@pytest.mark.parametrize("lam", [2, 10])
def test_uniform_scaling(lam):
    rng = np.random.default_rng(21)
    counts = rng.integers(0, 10, (9, 9)).astype(float)
    fields = make_fields(9)
    t1 = all_pairs(build_flow_network(CitationMatrix.from_dense(fields, counts)))
    t2 = all_pairs(build_flow_network(CitationMatrix.from_dense(fields, counts * lam)))
    np.testing.assert_array_equal(t1.spl, t2.spl)
    np.testing.assert_array_equal(t1.pred, t2.pred)
    np.testing.assert_allclose(t2.spw, t1.spw / lam, rtol=1e-12)
    np.testing.assert_array_equal(compute_oisp(t1), compute_oisp(t2))
    assert np.argmin(compute_aspl(t1).mean) == np.argmin(compute_aspl(t2).mean)


def _rows(values):
    return [IndicatorRow(i, v, v, v, v, int(v * 100), 0.0, 1) for i, v in enumerate(values)]


def test_rank_k_zero():
    assert rank_fields(_rows([4.19, 5.06]), "aspl", k=0) == []


def test_rank_ascending_aspl():
    ranked = rank_fields(_rows([4.19, 5.06, 4.42]), "aspl", k=2)
    assert [f for f, _ in ranked] == [0, 2]


def test_rank_descending_oisp_and_k_overflow():
    ranked = rank_fields(_rows([1.0, 3.0, 2.0]), "oisp", k=10)
    assert [f for f, _ in ranked] == [1, 2, 0]


def test_rank_ties_by_index_and_division_filter():
    fields = make_fields(4, divisions=["science", "social_science", "science", "social_science"])
    rows = _rows([2.0, 1.0, 2.0, 1.0])
    assert [f for f, _ in rank_fields(rows, "aspl", k=4)] == [1, 3, 0, 2]
    ss = rank_fields(rows, "aspw", "destination", Division.SOCIAL_SCIENCE, k=5, fields=fields)
    assert [f for f, _ in ss] == [1, 3]


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.integers(0, 2000).map(lambda x: x / 100), min_size=0, max_size=15),
    st.integers(0, 20),
    st.sampled_from(["aspl", "aspw", "oisp"]),
)
def test_rank_matches_full_sort(values, k, metric):
    rows = _rows(values)
    ranked = rank_fields(rows, metric, k=k)
    key = (lambda r: (-r.oisp, r.field)) if metric == "oisp" else (lambda r: (getattr(r, metric + "_source"), r.field))
    oracle = [r.field for r in sorted(rows, key=key)][:k]
    assert [f for f, _ in ranked] == oracle


def test_compute_indicators_rows(demo_matrix):
    table = all_pairs(build_flow_network(demo_matrix))
    rows = compute_indicators(table)
    assert [r.field for r in rows] == list(range(demo_matrix.fields.n))
    assert sum(r.oisp for r in rows) == int(compute_oisp(table).sum())


def test_self_citations_never_shorten_paths():
    rng = np.random.default_rng(8)
    fields = make_fields(4)
    for _ in range(50):
        counts = rng.integers(0, 10, (4, 4)).astype(float)
        bare = counts.copy()
        np.fill_diagonal(bare, 0)
        if not bare.any():
            continue
        with_self = all_pairs(build_flow_network(CitationMatrix.from_dense(fields, counts)))
        for (i, j), (w, _) in brute_force_paths(bare.T).items():
            assert with_self.spw[i, j] == pytest.approx(float(w), rel=1e-12)


def test_rank_near_ties_go_to_index():
    a = 0.28
    b = 0.28 * (1 + 4e-16)
    rows = _rows([0.31, b, a, 0.5])
    assert [f for f, _ in rank_fields(rows, "aspl", k=4)] == [1, 2, 0, 3]
