"""Loading taxonomy and citation tables.

Three CSV inputs are understood:

* taxonomy: ``category,class,division``
* category-level citations: ``citing,cited,count``
* journal-level citations ``citing_journal,cited_journal,count`` together with
  a journal assignment table ``journal,category``

Journal-level counts are collapsed onto categories by multiple counting: a
journal assigned to several categories credits every one of them.
"""

from __future__ import annotations

import csv
import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Tuple

import numpy as np

TAXONOMY_HEADER = ["category", "class", "division"]
CITATION_HEADER = ["citing", "cited", "count"]
JOURNAL_CITATION_HEADER = ["citing_journal", "cited_journal", "count"]
ASSIGNMENT_HEADER = ["journal", "category"]


class IngestError(ValueError):
    """Malformed or inconsistent input file."""

    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None):
        self.path = str(path) if path is not None else None
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class Division(enum.Enum):
    SCIENCE = "science"
    SOCIAL_SCIENCE = "social_science"

    @property
    def short(self) -> str:
        return "S" if self is Division.SCIENCE else "SS"

    @property
    def label(self) -> str:
        return "Science" if self is Division.SCIENCE else "SocialScience"

    @classmethod
    def parse(cls, token: str) -> "Division":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValueError(f"unknown division {token!r} (expected science or social_science)") from None


@dataclass(frozen=True)
class FieldTable:
    """Subject categories with dense indices and their taxonomy links."""

    ids: Tuple[str, ...]
    classes: Tuple[str, ...]
    divisions: Tuple[Division, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (len(self.ids) == len(self.classes) == len(self.divisions)):
            raise ValueError("ids, classes and divisions must have equal length")
        index = {}
        for i, cid in enumerate(self.ids):
            if cid in index:
                raise ValueError(f"duplicate category {cid!r}")
            index[cid] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_records(cls, records) -> "FieldTable":
        """Build from ``(category, class, division)`` triples; division may be a string."""
        ids, classes, divisions = [], [], []
        for cat, cls_id, div in records:
            ids.append(cat)
            classes.append(cls_id)
            divisions.append(div if isinstance(div, Division) else Division.parse(div))
        return cls(tuple(ids), tuple(classes), tuple(divisions))

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def n(self) -> int:
        return len(self.ids)

    def index(self, category_id: str) -> int:
        return self._index[category_id]

    def __contains__(self, category_id: str) -> bool:
        return category_id in self._index

    def class_labels(self) -> List[str]:
        """Distinct classes in order of first appearance."""
        return list(dict.fromkeys(self.classes))

    def members(self, level: str) -> List[Tuple[str, List[int]]]:
        """``(label, member indices)`` groups at ``category``, ``class`` or ``division`` level.

        Division level always lists Science then SocialScience, even if one is empty.
        """
        if level == "category":
            return [(cid, [i]) for i, cid in enumerate(self.ids)]
        if level == "class":
            groups: Dict[str, List[int]] = {c: [] for c in self.class_labels()}
            for i, c in enumerate(self.classes):
                groups[c].append(i)
            return list(groups.items())
        if level == "division":
            return [
                (d.label, [i for i, di in enumerate(self.divisions) if di is d])
                for d in Division
            ]
        raise ValueError(f"unknown level {level!r}")


@dataclass(frozen=True)
class CitationMatrix:
    """Dense ``counts[citing, cited]`` between the fields of ``fields``."""

    fields: FieldTable
    counts: np.ndarray

    def __post_init__(self):
        n = self.fields.n
        if self.counts.shape != (n, n):
            raise ValueError(f"counts must be {n}x{n}, got {self.counts.shape}")
        if np.any(self.counts < 0) or not np.all(np.isfinite(self.counts)):
            raise ValueError("citation counts must be finite and non-negative")
        self.counts.setflags(write=False)

    @classmethod
    def from_dense(cls, fields: FieldTable, counts) -> "CitationMatrix":
        return cls(fields, np.array(counts, dtype=float))

    def __getitem__(self, key: Tuple[str, str]) -> float:
        citing, cited = key
        return float(self.counts[self.fields.index(citing), self.fields.index(cited)])

    def entries(self) -> Iterator[Tuple[int, int, float]]:
        """Nonzero cells in row-major index order."""
        rows, cols = np.nonzero(self.counts)
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield i, j, float(self.counts[i, j])

    def total(self) -> float:
        return float(self.counts.sum())

    def without_self_citations(self) -> "CitationMatrix":
        counts = self.counts.copy()
        np.fill_diagonal(counts, 0.0)
        return CitationMatrix(self.fields, counts)


def _read_rows(path, header: List[str]) -> Iterator[Tuple[int, List[str]]]:
    """Yield ``(line_number, cells)`` for every non-blank data row."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise IngestError("empty file, expected header " + ",".join(header), path, 1) from None
        if [c.strip().lower() for c in first] != header:
            raise IngestError(
                f"bad header {','.join(first)!r}, expected {','.join(header)!r}", path, 1
            )
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise IngestError(
                    f"expected {len(header)} columns, got {len(row)}", path, reader.line_num
                )
            yield reader.line_num, [c.strip() for c in row]


def _parse_count(token: str, path, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise IngestError(f"count {token!r} is not a number", path, line) from None
    if not math.isfinite(value):
        raise IngestError(f"count {token!r} is not finite", path, line)
    if value < 0:
        raise IngestError(f"negative count {token}", path, line)
    return value


def load_taxonomy(path) -> FieldTable:
    """Read ``category,class,division`` rows; file order fixes field indices."""
    records = []
    seen: Dict[str, int] = {}
    class_division: Dict[str, Tuple[Division, int]] = {}
    for line, (cat, cls_id, div_token) in _read_rows(path, TAXONOMY_HEADER):
        if not cat or not cls_id:
            raise IngestError("empty category or class", path, line)
        if cat in seen:
            raise IngestError(f"duplicate category {cat!r} (first on line {seen[cat]})", path, line)
        try:
            div = Division.parse(div_token)
        except ValueError as exc:
            raise IngestError(str(exc), path, line) from None
        prior = class_division.get(cls_id)
        if prior is not None and prior[0] is not div:
            raise IngestError(
                f"class {cls_id!r} assigned to {div.value} but was {prior[0].value} on line {prior[1]}",
                path,
                line,
            )
        class_division.setdefault(cls_id, (div, line))
        seen[cat] = line
        records.append((cat, cls_id, div))
    return FieldTable.from_records(records)


def load_category_citations(path, fields: FieldTable, drop_self: bool = False) -> CitationMatrix:
    """Read field-to-field ``citing,cited,count`` rows, summing duplicates."""
    counts = np.zeros((fields.n, fields.n))
    for line, (citing, cited, token) in _read_rows(path, CITATION_HEADER):
        value = _parse_count(token, path, line)
        for fid in (citing, cited):
            if fid not in fields:
                raise IngestError(f"unknown field {fid!r}", path, line)
        if value == 0 or (drop_self and citing == cited):
            continue
        counts[fields.index(citing), fields.index(cited)] += value
    return CitationMatrix(fields, counts)


def load_journal_assignments(path, fields: FieldTable) -> Dict[str, List[int]]:
    assignments: Dict[str, List[int]] = defaultdict(list)
    for line, (journal, category) in _read_rows(path, ASSIGNMENT_HEADER):
        if category not in fields:
            raise IngestError(f"unknown category {category!r}", path, line)
        idx = fields.index(category)
        if idx in assignments[journal]:
            raise IngestError(f"duplicate assignment {journal!r} -> {category!r}", path, line)
        assignments[journal].append(idx)
    return dict(assignments)


def collapse_journal_citations(
    journal_cites, assignments, fields: FieldTable, drop_self: bool = False
) -> CitationMatrix:
    """Aggregate journal-to-journal counts onto categories by multiple counting.

    Each record ``(J1, J2, c)`` adds ``c`` to every cell in
    ``assign(J1) x assign(J2)``. With ``drop_self`` records where a journal
    cites itself are skipped before aggregation.
    """
    assign = load_journal_assignments(assignments, fields)
    records = []
    missing = []
    for line, (citing, cited, token) in _read_rows(journal_cites, JOURNAL_CITATION_HEADER):
        value = _parse_count(token, journal_cites, line)
        for j in (citing, cited):
            if j not in assign and j not in missing:
                missing.append(j)
        records.append((citing, cited, value))
    if missing:
        raise IngestError(
            "journals without category assignment: " + ", ".join(missing), journal_cites
        )

    counts = np.zeros((fields.n, fields.n))
    for citing, cited, value in records:
        if value == 0 or (drop_self and citing == cited):
            continue
        rows = assign[citing]
        cols = assign[cited]
        counts[np.ix_(rows, cols)] += value
    return CitationMatrix(fields, counts)


def _format_count(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def write_citations(matrix: CitationMatrix, path) -> None:
    """Emit ``citing,cited,count`` rows for every nonzero cell, index order."""
    ids = matrix.fields.ids
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CITATION_HEADER)
        for i, j, value in matrix.entries():
            writer.writerow([ids[i], ids[j], _format_count(value)])


def write_taxonomy(fields: FieldTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TAXONOMY_HEADER)
        for cid, cls_id, div in zip(fields.ids, fields.classes, fields.divisions):
            writer.writerow([cid, cls_id, div.value])
