"""Per-day pipeline and the batch driver around it.

One sitting day is parsed, segmented, attributed, flagged and emitted in
isolation; an exception inside a day becomes a failed manifest row and
never reaches the other days.
"""
import datetime
import logging
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import pandas as pd

from . import crud
from .attribution import LookupTable, attach_partyfacts, build_lookup_table, fill_missing_details, resolve_speakers
from .config import MANIFEST_JSON_FILENAME, RunConfig
from .divisions import DivisionRecord, flag_division_rows, parse_divisions
from .emitter import assemble_daily_table, check_formats, daily_base_path, write_outputs
from .errors import ConfigError, HansardError, MalformedXml, NotFound, PartialFailure, UndetectableEra, UnknownFormat
from .ingest import (
    PartyFactsMap, PoliticianRegistry, SourceLocator, SourceOrigin, fetch_sitting_day, load_partyfacts,
    load_politicians,
)
from .models import DayStatusEnum
from .question_time import (
    QAHeuristic, correct_qa_misflags, extract_questions_in_writing, flag_questions_answers, load_qa_heuristics,
)
from .records import ParseIssue, SchemaEra
from .segmenter import (
    StageDirectionLexicon, TalkerPatterns, assign_order, build_name_variant_lexicon, extract_talker_patterns,
    load_stage_directions, segment_day,
)
from .topics import DebateTopic, extract_debate_topics
from .xml_model import TranscriptDocument, parse_document

logger = logging.getLogger(__name__)

FIXTURE_PREFIX = "fixture:"
_DATE_IN_NAME_RE = re.compile(r"(\d{4}-\d{2}-\d{2})")


@dataclass(frozen=True)
class PipelineContext:
    """Read-only inputs shared by every day of a run."""
    registry: Optional[PoliticianRegistry]
    partyfacts: Optional[PartyFactsMap]
    stage_lexicon: StageDirectionLexicon
    qa_heuristics: Tuple[QAHeuristic, ...] = ()


@dataclass
class DayResult:
    sitting_date: datetime.date
    era: SchemaEra
    table: pd.DataFrame
    divisions: List[DivisionRecord]
    topics: List[DebateTopic]
    lookup: LookupTable
    issues: List[ParseIssue] = field(default_factory=list)
    header_date: Optional[datetime.date] = None


@dataclass
class DayOutcome:
    source: str
    status: DayStatusEnum
    sitting_date: Optional[datetime.date] = None
    header_date: Optional[datetime.date] = None
    era: Optional[str] = None
    row_count: int = 0
    division_count: int = 0
    issues: List[str] = field(default_factory=list)
    error: Optional[str] = None
    outputs: List[str] = field(default_factory=list)


def build_context(config: RunConfig) -> PipelineContext:
    registry = partyfacts = None
    try:
        if config.politicians_path:
            registry = load_politicians(config.politicians_path)
        if config.partyfacts_path:
            partyfacts = load_partyfacts(config.partyfacts_path)
        stage_lexicon = load_stage_directions(config.stage_directions_path)
        heuristics = tuple(load_qa_heuristics(config.qa_heuristics_path))
    except FileNotFoundError as e:
        raise ConfigError(f"configuration file not found: {e.filename}") from e
    if registry is None:
        logger.warning("No politicians file given; speakers will be resolved from talker blocks only")
    return PipelineContext(registry, partyfacts, stage_lexicon, heuristics)


def day_attendees(doc: TranscriptDocument, patterns: TalkerPatterns, registry: Optional[PoliticianRegistry],
                  sitting_date: Optional[datetime.date]) -> Set[str]:
    """Everyone who could speak that day: serving members plus every talker block."""
    attendees: Set[str] = set()
    if registry is not None and sitting_date is not None:
        attendees.update(p.unique_id for p in registry.serving_on(sitting_date))
    for pattern in patterns.all:
        f = pattern.fields
        attendees.update(v for v in (f.name, f.name_id, f.display_name) if v)
    return attendees


def process_day(xml_bytes: bytes, context: PipelineContext,
                sitting_date: Optional[datetime.date] = None) -> DayResult:
    doc = parse_document(xml_bytes)
    if doc.era is None:
        raise UndetectableEra("no schema era could be determined for this document")
    day = sitting_date or doc.session_date
    if day is None:
        raise MalformedXml("session header carries no usable date and none was supplied")

    issues: List[ParseIssue] = []
    patterns = extract_talker_patterns(doc, issues)
    lexicon = build_name_variant_lexicon(context.registry, day_attendees(doc, patterns, context.registry, day))

    statements = segment_day(doc, lexicon, context.stage_lexicon, patterns, issues)
    next_speech_no = max((s.speech_no for s in statements), default=0) + 1
    statements = assign_order(statements + extract_questions_in_writing(doc, next_speech_no))

    legacy_patterns = None if doc.era.is_modern else patterns
    lookup = build_lookup_table(statements, legacy_patterns.all if legacy_patterns else [], context.registry, day)
    records = resolve_speakers(statements, lookup, context.registry, day, lexicon)
    records = flag_questions_answers(doc, records, lexicon, context.stage_lexicon, legacy_patterns, issues)
    records = correct_qa_misflags(records, context.qa_heuristics)
    records = flag_division_rows(records)
    records = fill_missing_details(records, context.registry, day)
    records = attach_partyfacts(records, context.partyfacts)
    table = assemble_daily_table(records)

    divisions = parse_divisions(doc, issues, day)
    topics = extract_debate_topics(doc, issues, day)
    logger.info(f"{day} ({doc.era.value}): {len(table)} rows, {len(divisions)} divisions, {len(issues)} issue(s)")
    return DayResult(
        sitting_date=day, era=doc.era, table=table, divisions=divisions, topics=topics,
        lookup=lookup, issues=issues, header_date=doc.session_date,
    )


# ---------------------------------------------------------------------------
# Sources


def source_key(locator: SourceLocator) -> str:
    if locator.origin is SourceOrigin.REMOTE:
        return locator.sitting_date.isoformat()
    if locator.origin is SourceOrigin.FIXTURE:
        return FIXTURE_PREFIX + locator.uri_or_path
    return locator.uri_or_path


def date_from_source_name(path: str) -> Optional[datetime.date]:
    m = _DATE_IN_NAME_RE.search(os.path.basename(path))
    if not m:
        return None
    try:
        return datetime.date.fromisoformat(m.group(1))
    except ValueError:
        return None


def locators_for(config: RunConfig) -> List[SourceLocator]:
    locators = []
    for path in config.files:
        if path.startswith(FIXTURE_PREFIX):
            locators.append(SourceLocator(None, SourceOrigin.FIXTURE, path[len(FIXTURE_PREFIX):]))
        else:
            locators.append(SourceLocator.local(path, date_from_source_name(path)))
    locators.extend(SourceLocator.remote(d) for d in config.dates)
    if not locators:
        raise ConfigError("nothing to do: give --files or --from/--to")
    return locators


def read_source(locator: SourceLocator, config: RunConfig) -> bytes:
    return fetch_sitting_day(locator, cache_dir=config.cache_dir)


def write_day(result: DayResult, config: RunConfig) -> List[str]:
    written = write_outputs(result.table, daily_base_path(config.out_dir, result.sitting_date), config.formats)
    if config.lookup_tables:
        path = os.path.join(config.out_dir, f"lookup_{result.sitting_date.isoformat()}.csv")
        result.lookup.to_frame().to_csv(path, index=False, lineterminator="\n")
        written.append(path)
    return written


def run_day(locator: SourceLocator, context: PipelineContext, config: RunConfig) -> DayOutcome:
    key = source_key(locator)
    outcome = DayOutcome(source=key, status=DayStatusEnum.FAILED, sitting_date=locator.sitting_date)
    try:
        data = read_source(locator, config)
        result = process_day(data, context, locator.sitting_date)
        outcome.outputs = write_day(result, config)
    except NotFound as e:
        if locator.origin is SourceOrigin.REMOTE:
            logger.info(f"{key}: not a sitting day ({e})")
            outcome.status = DayStatusEnum.SKIPPED
        else:
            logger.error(f"{key}: {e}")
        outcome.error = str(e)
        return outcome
    except HansardError as e:
        logger.error(f"{key}: {type(e).__name__}: {e}")
        outcome.error = f"{type(e).__name__}: {e}"
        return outcome
    except Exception as e:
        logger.exception(f"{key}: unexpected failure")
        outcome.error = f"{type(e).__name__}: {e}"
        return outcome

    outcome.status = DayStatusEnum.OK
    outcome.sitting_date = result.sitting_date
    outcome.header_date = result.header_date
    outcome.era = result.era.value
    outcome.row_count = len(result.table)
    outcome.division_count = len(result.divisions)
    outcome.issues = [str(i) for i in result.issues]
    return outcome


def _run_all(locators: Sequence[SourceLocator], context: PipelineContext, config: RunConfig) -> List[DayOutcome]:
    if config.jobs <= 1 or len(locators) <= 1:
        return [run_day(loc, context, config) for loc in locators]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        futures = [pool.submit(run_day, loc, context, config) for loc in locators]
        return [f.result() for f in futures]


def run_pipeline(config: RunConfig) -> List[DayOutcome]:
    """Parse every configured day and write outputs plus the run manifest.

    Raises PartialFailure after all days have been attempted when any of
    them failed.
    """
    try:
        check_formats(config.formats)
    except UnknownFormat as e:
        raise ConfigError(str(e)) from e
    locators = locators_for(config)
    context = build_context(config)
    os.makedirs(config.out_dir, exist_ok=True)

    db_session_generator = crud.get_db(config.out_dir)
    db = next(db_session_generator)
    try:
        pending = []
        for locator in locators:
            if not config.force and crud.is_completed(db, source_key(locator)):
                logger.info(f"{source_key(locator)}: already parsed, skipping (use --force to redo)")
                continue
            pending.append(locator)

        outcomes = _run_all(pending, context, config)
        finished = None if config.no_timestamp else datetime.datetime.now()
        for o in outcomes:
            crud.record_day(
                db, o.source, o.status, sitting_date=o.sitting_date, header_date=o.header_date, era=o.era,
                row_count=o.row_count, division_count=o.division_count, issues=o.issues, error=o.error,
                outputs=o.outputs, finished_at=finished,
            )
        crud.export_manifest_json(db, os.path.join(config.out_dir, MANIFEST_JSON_FILENAME),
                                  include_timestamp=not config.no_timestamp)
    finally:
        db.close()

    failed = [o for o in outcomes if o.status is DayStatusEnum.FAILED]
    if failed:
        succeeded = [o for o in outcomes if o.status is DayStatusEnum.OK]
        raise PartialFailure([o.source for o in failed], total=not succeeded)
    return outcomes


# ---------------------------------------------------------------------------
# Side tables


def parse_side_tables(config: RunConfig) -> Tuple[List[DivisionRecord], List[DebateTopic], List[str]]:
    """Divisions and topics for the configured days, without the daily tables."""
    divisions: List[DivisionRecord] = []
    topics: List[DebateTopic] = []
    failed: List[str] = []
    for locator in locators_for(config):
        key = source_key(locator)
        try:
            doc = parse_document(read_source(locator, config))
            issues: List[ParseIssue] = []
            day_divisions = parse_divisions(doc, issues, locator.sitting_date)
            day_topics = extract_debate_topics(doc, issues, locator.sitting_date)
        except NotFound as e:
            if locator.origin is not SourceOrigin.REMOTE:
                failed.append(key)
            logger.info(f"{key}: {e}")
            continue
        except HansardError as e:
            logger.error(f"{key}: {type(e).__name__}: {e}")
            failed.append(key)
            continue
        divisions.extend(day_divisions)
        topics.extend(day_topics)
    return divisions, topics, failed


def dates_between(start: datetime.date, end: datetime.date) -> Iterable[datetime.date]:
    if end < start:
        raise ConfigError(f"--from {start} is after --to {end}")
    day = start
    while day <= end:
        yield day
        day += datetime.timedelta(days=1)
