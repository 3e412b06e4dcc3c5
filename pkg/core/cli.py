import argparse
import datetime
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence

import pandas as pd

from . import config as cfg
from . import crud
from .analysis import compute_summary_stats
from .config import RunConfig
from .divisions import write_divisions
from .emitter import build_corpus, check_formats, find_daily_files, read_table, write_outputs
from .errors import (
    ConfigError, DuplicateUniqueID, HansardError, NotFound, PartialFailure, SchemaMismatch, UnknownFormat,
    UnknownSubcommand, UnsupportedEra,
)
from .fixtures import DefectKind, FixtureSpec, generate_fixture, inject_defect, parse_era, write_fixture
from .ingest import SourceLocator, fetch_sitting_day, load_partyfacts, load_politicians
from .pipeline import dates_between, locators_for, parse_side_tables, run_pipeline
from .records import SchemaEra
from .topics import topics_frame
from .validator import ALL_TESTS, run_validation, tables_from_corpus

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3
EXIT_TOTAL = 4

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
CORPUS_BASENAME = "hansard_corpus"


def _date(text: str) -> datetime.date:
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a YYYY-MM-DD date")


def _formats(text: str) -> List[str]:
    return [f.strip() for f in text.split(",") if f.strip()]


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--from", dest="date_from", type=_date)
    p.add_argument("--to", dest="date_to", type=_date)
    p.add_argument("--files", nargs="+", default=[], metavar="PATH",
                   help="transcript files; fixture:<era>:<seed> generates one in memory")


def _add_reference_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--politicians", metavar="PATH")
    p.add_argument("--partyfacts", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hansard-etl", description="Tidy per-statement tables from Hansard XML.")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("parse", help="parse sitting days into daily tables")
    _add_source_args(p)
    _add_reference_args(p)
    p.add_argument("--out", default=cfg.output_dir())
    p.add_argument("--formats", type=_formats, default=list(cfg.DEFAULT_FORMATS))
    p.add_argument("--stage-directions", default=cfg.STAGE_DIRECTIONS_PATH)
    p.add_argument("--qa-heuristics", default=cfg.QA_HEURISTICS_PATH)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force", action="store_true")
    p.add_argument("--no-timestamp", action="store_true")
    p.add_argument("--lookup-tables", action="store_true", help="also write lookup_YYYY-MM-DD.csv per day")

    p = sub.add_parser("validate", help="run the eight validation tests over daily tables")
    _add_reference_args(p)
    p.add_argument("--out", default=cfg.output_dir())
    p.add_argument("--tests", type=lambda s: [int(t) for t in _formats(s)], default=list(ALL_TESTS))

    for name, help_text in (("topics", "extract debate topics"), ("divisions", "extract division tables")):
        p = sub.add_parser(name, help=help_text)
        _add_source_args(p)
        p.add_argument("--out", default=cfg.output_dir())
        p.add_argument("--formats", type=_formats, default=list(cfg.DEFAULT_FORMATS))

    p = sub.add_parser("corpus", help="stack daily tables into one corpus table")
    p.add_argument("--out", default=cfg.output_dir())
    p.add_argument("--files", nargs="+", default=[], metavar="PATH", help="daily tables; default: all in --out")
    p.add_argument("--formats", type=_formats, default=list(cfg.DEFAULT_FORMATS))

    p = sub.add_parser("stats", help="summary statistics over the corpus")
    p.add_argument("--out", default=cfg.output_dir())
    p.add_argument("--partyfacts", metavar="PATH")

    p = sub.add_parser("fetch", help="download transcripts into the cache")
    p.add_argument("--from", dest="date_from", type=_date, required=True)
    p.add_argument("--to", dest="date_to", type=_date, required=True)

    p = sub.add_parser("fixtures", help="write a synthetic sitting day with its expected table")
    p.add_argument("--era", required=True, help=", ".join(e.value for e in SchemaEra))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-debates", type=int, help="chamber debates to plan (default: one to three)")
    p.add_argument("--interjection-rate", type=float, default=0.75,
                   help="chance that an event inside a speech is an interjection rather than the chair")
    p.add_argument("--no-fedchamb", dest="include_fedchamb", action="store_false")
    p.add_argument("--no-divisions", dest="include_divisions", action="store_false")
    p.add_argument("--out", default=cfg.output_dir())
    p.add_argument("--defect", choices=[k.name.lower() for k in DefectKind])
    return parser


def _dates(args) -> tuple:
    if args.date_from is None and args.date_to is None:
        return ()
    if args.date_from is None or args.date_to is None:
        raise ConfigError("--from and --to go together")
    return tuple(dates_between(args.date_from, args.date_to))


def _run_config(args) -> RunConfig:
    return RunConfig(
        out_dir=args.out,
        dates=_dates(args),
        files=tuple(args.files),
        formats=tuple(getattr(args, "formats", cfg.DEFAULT_FORMATS)),
        politicians_path=getattr(args, "politicians", None),
        partyfacts_path=getattr(args, "partyfacts", None),
        stage_directions_path=getattr(args, "stage_directions", cfg.STAGE_DIRECTIONS_PATH),
        qa_heuristics_path=getattr(args, "qa_heuristics", cfg.QA_HEURISTICS_PATH),
        jobs=max(1, getattr(args, "jobs", 1)),
        force=getattr(args, "force", False),
        no_timestamp=getattr(args, "no_timestamp", False),
        log_level=args.log_level,
        lookup_tables=getattr(args, "lookup_tables", False),
    )


def cmd_parse(args) -> int:
    outcomes = run_pipeline(_run_config(args))
    print(f"{len(outcomes)} day(s) processed into {args.out}")
    return EXIT_OK


def _preferred_daily_files(out_dir: str) -> List[str]:
    return find_daily_files(out_dir, "parquet") or find_daily_files(out_dir, "csv")


def cmd_validate(args) -> int:
    if not args.politicians:
        raise ConfigError("validate needs --politicians")
    registry = load_politicians(args.politicians)
    paths = _preferred_daily_files(args.out)
    if not paths:
        raise ConfigError(f"no daily tables in {args.out}; run parse first")
    tables = tables_from_corpus(build_corpus(paths))
    db_session_generator = crud.get_db(args.out)
    db = next(db_session_generator)
    try:
        header_dates = crud.get_header_dates(db)
    finally:
        db.close()
    try:
        report = run_validation(tables, registry, header_dates, args.tests)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    lines = report.to_lines()
    with open(os.path.join(args.out, "validation_report.txt"), "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
    with open(os.path.join(args.out, "validation_report.json"), "w", encoding="utf-8", newline="\n") as f:
        f.write(report.to_json() + "\n")
    print("\n".join(lines))
    return EXIT_OK


def _side_table_status(failed: Sequence[str], config: RunConfig) -> int:
    if failed:
        raise PartialFailure(failed, total=len(failed) == len(locators_for(config)))
    return EXIT_OK


def cmd_topics(args) -> int:
    config = _run_config(args)
    formats = check_formats(config.formats)
    _, topics, failed = parse_side_tables(config)
    frame = topics_frame(topics)
    base = os.path.join(config.out_dir, "topics")
    os.makedirs(config.out_dir, exist_ok=True)
    if "csv" in formats:
        frame.to_csv(f"{base}.csv", index=False, lineterminator="\n")
    if "parquet" in formats:
        frame.to_parquet(f"{base}.parquet", index=False)
    print(f"{len(frame)} topic(s) written to {base}")
    return _side_table_status(failed, config)


def cmd_divisions(args) -> int:
    config = _run_config(args)
    check_formats(config.formats)
    divisions, _, failed = parse_side_tables(config)
    written = write_divisions(divisions, os.path.join(config.out_dir, "divisions"), config.formats)
    print(f"{len(divisions)} division(s) written to {', '.join(written)}")
    return _side_table_status(failed, config)


def cmd_corpus(args) -> int:
    formats = check_formats(args.formats)
    paths = list(args.files) or _preferred_daily_files(args.out)
    if not paths:
        raise ConfigError(f"no daily tables in {args.out}")
    corpus = build_corpus(paths)
    written = write_outputs(corpus, os.path.join(args.out, CORPUS_BASENAME), formats)
    print(f"corpus of {corpus['date'].nunique()} day(s), {len(corpus)} rows: {', '.join(written)}")
    return EXIT_OK


def _read_corpus(out_dir: str) -> pd.DataFrame:
    for ext in ("parquet", "csv"):
        path = os.path.join(out_dir, f"{CORPUS_BASENAME}.{ext}")
        if os.path.isfile(path):
            return read_table(path)
    raise ConfigError(f"no corpus in {out_dir}; run the corpus subcommand first")


def cmd_stats(args) -> int:
    corpus = _read_corpus(args.out)
    partyfacts = load_partyfacts(args.partyfacts) if args.partyfacts else None
    stats = compute_summary_stats(corpus, partyfacts)
    stats.daily_speeches.to_csv(os.path.join(args.out, "stats_daily_speeches.csv"), index=False, lineterminator="\n")
    stats.daily_unique_names.to_csv(os.path.join(args.out, "stats_daily_unique_names.csv"), index=False, lineterminator="\n")
    stats.party_speeches.to_csv(os.path.join(args.out, "stats_party_speeches.csv"), index=False, lineterminator="\n")
    for venue, mean in sorted(stats.mean_unique_names().items()):
        print(f"{venue}: {mean:.1f} unique names per day")
    print(stats.party_speeches.to_string(index=False))
    return EXIT_OK


def cmd_fetch(args) -> int:
    fetched, failed = 0, []
    for day in dates_between(args.date_from, args.date_to):
        try:
            fetch_sitting_day(SourceLocator.remote(day))
            fetched += 1
        except NotFound:
            logger.debug(f"{day}: no transcript")
        except HansardError as e:
            logger.error(f"{day}: {e}")
            failed.append(day.isoformat())
    print(f"{fetched} transcript(s) in {cfg.cache_dir()}")
    if failed:
        raise PartialFailure(failed, total=fetched == 0)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    spec = FixtureSpec(
        parse_era(args.era), args.seed, n_debates=args.n_debates, interjection_rate=args.interjection_rate,
        include_fedchamb=args.include_fedchamb, include_divisions=args.include_divisions,
    )
    _, day = generate_fixture(spec)
    if args.defect:
        day = inject_defect(day, DefectKind[args.defect.upper()])
    for path in write_fixture(day, args.out):
        print(path)
    return EXIT_OK


SUBCOMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "parse": cmd_parse,
    "validate": cmd_validate,
    "topics": cmd_topics,
    "divisions": cmd_divisions,
    "corpus": cmd_corpus,
    "stats": cmd_stats,
    "fetch": cmd_fetch,
    "fixtures": cmd_fixtures,
}


def run_subcommand(name: Optional[str], args: argparse.Namespace) -> int:
    handler = SUBCOMMANDS.get(name or "")
    if handler is None:
        raise UnknownSubcommand(f"unknown subcommand {name!r}; choose from {', '.join(SUBCOMMANDS)}")
    return handler(args)


def exit_status(error: BaseException) -> int:
    if isinstance(error, PartialFailure):
        return EXIT_TOTAL if error.total else EXIT_PARTIAL
    if isinstance(error, (ConfigError, UnknownFormat, UnknownSubcommand, SchemaMismatch, DuplicateUniqueID,
                          UnsupportedEra)):
        return EXIT_CONFIG
    return EXIT_TOTAL


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, force=True)
    try:
        return run_subcommand(args.command, args)
    except HansardError as e:
        status = exit_status(e)
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return status


if __name__ == "__main__":
    sys.exit(main())
