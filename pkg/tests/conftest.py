import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from knowpath.ingest import CitationMatrix, FieldTable, load_category_citations, load_taxonomy  # noqa: E402
from knowpath.network import FlowNetwork, build_flow_network  # noqa: E402

DATA = Path(__file__).parent / "data"

FIG2_NAMES = ["A", "B", "C", "D", "E"]
# flow widths (source -> target); A->C->B->E is cheapest from A to E, E->A is direct
FIG2_FLOWS = {
    ("A", "C"): 10, ("C", "B"): 10, ("B", "E"): 10, ("A", "E"): 2, ("A", "B"): 3,
    ("E", "A"): 5, ("E", "D"): 2, ("D", "A"): 2, ("C", "E"): 1, ("B", "A"): 1, ("D", "C"): 4,
}


def fig2_width():
    idx = {name: i for i, name in enumerate(FIG2_NAMES)}
    width = np.zeros((5, 5))
    for (a, b), w in FIG2_FLOWS.items():
        width[idx[a], idx[b]] = w
    return width


def fig2_matrix(divisions=("science",) * 5) -> CitationMatrix:
    fields = FieldTable.from_records(
        (name, f"C{name}", div) for name, div in zip(FIG2_NAMES, divisions)
    )
    # a citation j -> i carries knowledge i -> j
    return CitationMatrix.from_dense(fields, fig2_width().T)


def make_fields(n, divisions=None, classes=None) -> FieldTable:
    divisions = divisions or ["science"] * n
    classes = classes or [f"K{i}" for i in range(n)]
    return FieldTable.from_records((f"F{i}", classes[i], divisions[i]) for i in range(n))


@st.composite
def flow_widths(draw, min_n=2, max_n=7, max_count=9):
    """Integer flow-width matrices with zero diagonal."""
    n = draw(st.integers(min_n, max_n))
    cells = draw(st.lists(st.integers(0, max_count), min_size=n * n, max_size=n * n))
    w = np.array(cells, dtype=float).reshape(n, n)
    np.fill_diagonal(w, 0)
    return w


@pytest.fixture
def fig2_net() -> FlowNetwork:
    return build_flow_network(fig2_matrix())


@pytest.fixture(scope="session")
def demo_fields() -> FieldTable:
    return load_taxonomy(DATA / "demo_taxonomy.csv")


@pytest.fixture(scope="session")
def demo_matrix(demo_fields) -> CitationMatrix:
    return load_category_citations(DATA / "demo_citations.csv", demo_fields)


@pytest.fixture
def write_csv(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
