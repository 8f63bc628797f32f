"""Report emitters and the heat-map reader.

Every writer is deterministic: rows follow field index order and numbers use
fixed formats, so the same inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import math
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Dict, Iterable, Sequence

import numpy as np

from .analysis import TYPE_LABELS, HeatMap, PathLengthStats, PathTypeCensus
from .backbone import BackboneGraph
from .ingest import FieldTable
from .indicators import IndicatorRow

SPW_SCALE = 1e3


def metadata_line(meta: Dict[str, object]) -> str:
    return "# " + "; ".join(f"{k}={v}" for k, v in meta.items()) + "\n"


def _fixed(value: float, full: bool, digits: int = 6) -> str:
    if full:
        return repr(float(value))
    return f"{value:.{digits}f}"


def _sci(value: float, full: bool) -> str:
    if full:
        return repr(float(value))
    return f"{value:.6e}"


def _number(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def _csv_text(rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _write(path, text: str) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def write_indicators(
    out_dir, fields: FieldTable, rows: Sequence[IndicatorRow], meta: Dict[str, object], full_precision=False
) -> Dict[str, Path]:
    """Write ``aspl.csv``, ``aspw.csv`` and ``oisp.csv`` into ``out_dir``."""
    out_dir = Path(out_dir)
    head = metadata_line(meta)
    lead = lambda r: [fields.ids[r.field], fields.classes[r.field], fields.divisions[r.field].value]
    fp = full_precision
    tables = {
        "aspl.csv": (
            ["field", "class", "division", "aspl_source", "aspl_dest", "spl_sd_source", "spl_max_source"],
            lambda r: lead(r)
            + [
                _fixed(r.aspl_source, fp),
                _fixed(r.aspl_destination, fp),
                _fixed(r.spl_sd_source, fp),
                r.spl_max_source,
            ],
        ),
        "aspw.csv": (
            ["field", "class", "division", "aspw_source", "aspw_dest"],
            lambda r: lead(r) + [_sci(r.aspw_source, fp), _sci(r.aspw_destination, fp)],
        ),
        "oisp.csv": (
            ["field", "class", "division", "oisp"],
            lambda r: lead(r) + [r.oisp],
        ),
    }
    written = {}
    for name, (header, render) in tables.items():
        body = _csv_text([header] + [render(r) for r in sorted(rows, key=lambda r: r.field)])
        written[name] = _write(out_dir / name, head + body)
    return written


def heatmap_filename(level: str, metric: str) -> str:
    return f"heatmap_{level}_{metric}.csv"


def heatmap_text(heatmap: HeatMap, full_precision: bool = False) -> str:
    """Square CSV. The corner cell names level, metric and scaling, e.g. ``class/spw*1e3``."""
    scaled = heatmap.metric == "spw" and not full_precision
    corner = f"{heatmap.level}/{heatmap.metric}" + ("*1e3" if scaled else "")
    factor = SPW_SCALE if scaled else 1.0
    rows = [[corner] + list(heatmap.labels)]
    for label, cells in zip(heatmap.labels, heatmap.cells):
        rendered = []
        for v in cells:
            if math.isnan(v):
                rendered.append("nan")
            elif full_precision:
                rendered.append(repr(float(v)))
            else:
                rendered.append(f"{v * factor:.2f}")
        rows.append([label] + rendered)
    return _csv_text(rows)


def write_heatmap(path, heatmap: HeatMap, full_precision: bool = False) -> Path:
    return _write(path, heatmap_text(heatmap, full_precision))


def read_heatmap(path) -> HeatMap:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise ValueError(f"{path}: empty heat map")
    corner, *labels = rows[0]
    level, _, metric = corner.partition("/")
    factor = 1.0
    if metric.endswith("*1e3"):
        metric = metric[: -len("*1e3")]
        factor = SPW_SCALE
    if metric not in ("spl", "spw") or not level:
        raise ValueError(f"{path}: unrecognised corner cell {corner!r}")
    body = rows[1:]
    if len(body) != len(labels):
        raise ValueError(f"{path}: {len(labels)} columns but {len(body)} rows")
    cells = np.empty((len(labels), len(labels)))
    for r, row in enumerate(body):
        if row[0] != labels[r] or len(row) != len(labels) + 1:
            raise ValueError(f"{path}: row {r + 2} does not match the header")
        cells[r] = [float(v) / factor for v in row[1:]]
    return HeatMap(level, metric, tuple(labels), cells, None)


def write_path_types(path, census: PathTypeCensus, meta: Dict[str, object]) -> Path:
    rows = [["type", "count", "percent_all", "percent_block"]]
    for label in TYPE_LABELS:
        rows.append(
            [label, census.counts[label], f"{census.percent_all(label):.2f}", f"{census.percent_block(label):.2f}"]
        )
    return _write(path, metadata_line(meta) + _csv_text(rows))


def write_distribution(path, stats: PathLengthStats, meta: Dict[str, object]) -> Path:
    meta = dict(meta)
    meta.update(
        pairs=stats.count,
        median=_number(stats.median),
        max=stats.max,
        skewness=f"{stats.skewness:.6f}",
        positively_skewed=str(stats.positively_skewed).lower(),
    )
    rows = [["spl", "count"]] + [[k, v] for k, v in stats.histogram.items()]
    return _write(path, metadata_line(meta) + _csv_text(rows))


def _dot_quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_text(graph: BackboneGraph) -> str:
    lines = ["digraph backbone {"]
    for node in graph.nodes:
        div = node.division.value if node.division is not None else ""
        lines.append(
            f"  n{node.index} [label={_dot_quote(node.label)}, division={_dot_quote(div)}, "
            f"size={_dot_quote(_number(node.size))}];"
        )
    for e in graph.edges:
        attrs = f"width={_dot_quote(_number(e.width))}"
        if e.bidirectional:
            attrs += ", dir=both"
        lines.append(f"  n{e.source} -> n{e.target} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(path, graph: BackboneGraph) -> Path:
    return _write(path, dot_text(graph))


GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def graphml_text(graph: BackboneGraph) -> str:
    root = ET.Element("graphml", xmlns=GRAPHML_NS)
    keys = [
        ("label", "node", "string"),
        ("division", "node", "string"),
        ("size", "node", "double"),
        ("width", "edge", "double"),
        ("bidirectional", "edge", "boolean"),
    ]
    for name, target, kind in keys:
        ET.SubElement(root, "key", {"id": name, "for": target, "attr.name": name, "attr.type": kind})
    g = ET.SubElement(root, "graph", id="backbone", edgedefault="directed")
    for node in graph.nodes:
        el = ET.SubElement(g, "node", id=f"n{node.index}")
        ET.SubElement(el, "data", key="label").text = node.label
        ET.SubElement(el, "data", key="division").text = node.division.value if node.division else ""
        ET.SubElement(el, "data", key="size").text = _number(node.size)
    for e in graph.edges:
        el = ET.SubElement(g, "edge", source=f"n{e.source}", target=f"n{e.target}")
        ET.SubElement(el, "data", key="width").text = _number(e.width)
        ET.SubElement(el, "data", key="bidirectional").text = str(e.bidirectional).lower()
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def write_graphml(path, graph: BackboneGraph) -> Path:
    return _write(path, graphml_text(graph))
