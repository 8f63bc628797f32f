"""Command-line driver.

    knowpath indicators --taxonomy tax.csv --citations cites.csv --out results/
    knowpath heatmap --level class --metric spw --taxonomy ... --citations ...
    knowpath classify ...
    knowpath backbone --top-k 2 --division social_science ...
    knowpath distribution ...

Exit codes: 0 success, 2 input-format error, 3 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import analysis, export
from .backbone import DEFAULT_ASYMMETRY, extract_backbone
from .indicators import OISP_CONVENTION, SD_CONVENTION, compute_indicators
from .ingest import (
    CitationMatrix,
    Division,
    IngestError,
    collapse_journal_citations,
    load_category_citations,
    load_taxonomy,
)
from .network import build_flow_network, strongly_connected
from .paths import TIE_BREAK_RULE, PathTable, all_pairs

log = logging.getLogger("knowpath")

EXIT_INPUT = 2
EXIT_CONFIG = 3


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    taxonomy: Path
    out: Path
    citations: Optional[Path] = None
    journal_cites: Optional[Path] = None
    journal_map: Optional[Path] = None
    drop_self: bool = False
    full_precision: bool = False
    level: str = "class"
    metric: str = "spl"
    top_k: int = 1
    min_width: Optional[float] = None
    division: Optional[Division] = None
    asymmetry: float = DEFAULT_ASYMMETRY

    def validate(self) -> None:
        journal_mode = self.journal_cites is not None or self.journal_map is not None
        if self.citations is not None and journal_mode:
            raise ConfigError("--citations cannot be combined with --journal-cites/--journal-map")
        if self.citations is None and not journal_mode:
            raise ConfigError("give --citations or both --journal-cites and --journal-map")
        if journal_mode and (self.journal_cites is None or self.journal_map is None):
            raise ConfigError("--journal-cites and --journal-map must be given together")
        for p in (self.taxonomy, self.citations, self.journal_cites, self.journal_map):
            if p is not None and not Path(p).is_file():
                raise ConfigError(f"no such file: {p}")
        if self.top_k < 0:
            raise ConfigError("--top-k must be >= 0")
        if self.min_width is not None and self.min_width < 0:
            raise ConfigError("--min-width must be >= 0")
        if not 0 <= self.asymmetry <= 1:
            raise ConfigError("--asymmetry must lie in [0, 1]")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--taxonomy", required=True, type=Path, help="category,class,division CSV")
    common.add_argument("--citations", type=Path, help="citing,cited,count CSV between categories")
    common.add_argument("--journal-cites", type=Path, help="citing_journal,cited_journal,count CSV")
    common.add_argument("--journal-map", type=Path, help="journal,category assignment CSV")
    common.add_argument("--drop-self", action="store_true", help="ignore self-citations at load time")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--full-precision", action="store_true", help="print reals unrounded")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="knowpath", description="Knowledge paths among scientific fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("indicators", parents=[common], help="ASPL, ASPW and OiSP per field")
    hm = sub.add_parser("heatmap", parents=[common], help="aggregated path length/weight matrix")
    hm.add_argument("--level", choices=analysis.LEVELS, default="class")
    hm.add_argument("--metric", choices=analysis.METRICS, default="spl")
    sub.add_parser("classify", parents=[common], help="census of division path types")
    bb = sub.add_parser("backbone", parents=[common], help="DOT and GraphML backbone graph")
    bb.add_argument("--top-k", type=int, default=1)
    bb.add_argument("--min-width", type=float, help="keep edges at least this wide instead of top-k")
    bb.add_argument("--division", choices=["science", "social_science", "all"], default="all")
    bb.add_argument("--asymmetry", type=float, default=DEFAULT_ASYMMETRY,
                    help="min/max width ratio that counts as bidirectional")
    sub.add_parser("distribution", parents=[common], help="histogram of path lengths")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    division = getattr(args, "division", "all")
    cfg = RunConfig(
        taxonomy=args.taxonomy,
        out=args.out,
        citations=args.citations,
        journal_cites=args.journal_cites,
        journal_map=args.journal_map,
        drop_self=args.drop_self,
        full_precision=args.full_precision,
        level=getattr(args, "level", "class"),
        metric=getattr(args, "metric", "spl"),
        top_k=getattr(args, "top_k", 1),
        min_width=getattr(args, "min_width", None),
        division=None if division == "all" else Division(division),
        asymmetry=getattr(args, "asymmetry", DEFAULT_ASYMMETRY),
    )
    cfg.validate()
    return cfg


def load_inputs(cfg: RunConfig):
    fields = load_taxonomy(cfg.taxonomy)
    if cfg.citations is not None:
        matrix = load_category_citations(cfg.citations, fields, drop_self=cfg.drop_self)
    else:
        matrix = collapse_journal_citations(
            cfg.journal_cites, cfg.journal_map, fields, drop_self=cfg.drop_self
        )
    return fields, matrix


def compute_paths(matrix: CitationMatrix) -> PathTable:
    try:
        net = build_flow_network(matrix)
    except ValueError as exc:
        raise IngestError(str(exc)) from None
    connected, pairs, total = strongly_connected(net)
    if not connected:
        ids = matrix.fields.ids
        shown = ", ".join(f"{ids[i]}->{ids[j]}" for i, j in pairs[:5])
        print(
            f"knowpath: warning: {total} unreachable ordered pairs excluded from averages (e.g. {shown})",
            file=sys.stderr,
        )
    return all_pairs(net)


def run_metadata(table: PathTable, **extra) -> dict:
    meta = {
        "n": table.n,
        "tie_break": TIE_BREAK_RULE,
        "oisp": OISP_CONVENTION,
        "sd": SD_CONVENTION,
        "unreachable_pairs": table.unreachable_count(),
    }
    meta.update(extra)
    return meta


def run(cfg: RunConfig, command: str) -> list:
    fields, matrix = load_inputs(cfg)
    cfg.out.mkdir(parents=True, exist_ok=True)
    written = []

    if command == "backbone":
        try:
            net = build_flow_network(matrix)
        except ValueError as exc:
            raise IngestError(str(exc)) from None
        graph = extract_backbone(
            net, fields, top_k=cfg.top_k, division=cfg.division,
            min_width=cfg.min_width, asymmetry=cfg.asymmetry,
        )
        written.append(export.write_dot(cfg.out / "backbone.dot", graph))
        written.append(export.write_graphml(cfg.out / "backbone.graphml", graph))
        return written

    table = compute_paths(matrix)
    if command == "indicators":
        rows = compute_indicators(table)
        written.extend(export.write_indicators(cfg.out, fields, rows, run_metadata(table), cfg.full_precision).values())
    elif command == "heatmap":
        try:
            hm = analysis.aggregate_heatmap(table, fields, cfg.level, cfg.metric)
        except analysis.EmptyGroupError as exc:
            raise ConfigError(f"level {cfg.level}: {exc}") from None
        path = cfg.out / export.heatmap_filename(cfg.level, cfg.metric)
        written.append(export.write_heatmap(path, hm, cfg.full_precision))
    elif command == "classify":
        census = analysis.classify_paths(table, fields)
        meta = run_metadata(table, path_types=analysis.PATH_TYPE_RULE)
        written.append(export.write_path_types(cfg.out / "path_types.csv", census, meta))
    elif command == "distribution":
        stats = analysis.path_length_distribution(table)
        written.append(export.write_distribution(cfg.out / "path_lengths.csv", stats, run_metadata(table)))
    else:
        raise ConfigError(f"unknown command {command!r}")
    return written


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = config_from_args(args)
        written = run(cfg, args.command)
    except ConfigError as exc:
        print(f"knowpath: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IngestError as exc:
        print(f"knowpath: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for path in written:
        log.info("wrote %s", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
