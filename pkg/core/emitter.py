import datetime
import logging
import os
import re
from dataclasses import asdict
from typing import Iterable, List, Sequence, Union

import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from .config import SUPPORTED_FORMATS
from .errors import DuplicateDate, IoFailure, SchemaViolation, UnknownFormat
from .records import BUSINESS_START_NAME, RECORD_COLUMNS, STAGE_DIRECTION_NAME, AttributedStatement, DebateRecord

logger = logging.getLogger(__name__)

DAILY_COLUMNS = list(RECORD_COLUMNS.values())
CORPUS_COLUMNS = ["date"] + DAILY_COLUMNS
FLAG_COLUMNS = ["in.gov", "first.speech", "fedchamb_flag", "question", "answer", "q_in_writing", "interject", "div_flag"]
INT_COLUMNS = ["order", "speech_no"] + FLAG_COLUMNS + ["partyfacts_id"]
TEXT_COLUMNS = [c for c in DAILY_COLUMNS if c not in INT_COLUMNS]
PROCEDURAL_NAMES = (STAGE_DIRECTION_NAME, BUSINESS_START_NAME)

DAILY_SCHEMA = pa.schema([(c, pa.int64() if c in INT_COLUMNS else pa.string()) for c in DAILY_COLUMNS])
CORPUS_SCHEMA = pa.schema([("date", pa.date32())] + list(zip(DAILY_SCHEMA.names, DAILY_SCHEMA.types)))

_DAILY_FILE_RE = re.compile(r"hansard_(\d{4}-\d{2}-\d{2})\.(csv|parquet)$")


def coerce_types(frame: pd.DataFrame) -> pd.DataFrame:
    frame = frame.copy()
    for col in INT_COLUMNS:
        if col in frame:
            frame[col] = pd.to_numeric(frame[col].replace("", pd.NA), errors="raise").astype("Int64")
    for col in TEXT_COLUMNS:
        if col in frame:
            frame[col] = frame[col].astype("string").replace("", pd.NA)
    if "date" in frame:
        frame["date"] = pd.to_datetime(frame["date"]).dt.date
    return frame


def check_daily_table(table: pd.DataFrame) -> None:
    if list(table.columns) != DAILY_COLUMNS:
        raise SchemaViolation(f"columns {list(table.columns)} differ from the daily schema")
    if table.empty:
        return
    for col in FLAG_COLUMNS:
        bad = ~table[col].isin([0, 1])
        if bad.any():
            raise SchemaViolation(f"{col} holds values other than 0/1 at order {table.loc[bad, 'order'].tolist()[:5]}")
    if table["order"].tolist() != list(range(1, len(table) + 1)):
        raise SchemaViolation("order is not dense 1..N")
    if (table["body"].fillna("").str.strip() == "").any():
        raise SchemaViolation("empty body")
    if ((table["question"] + table["answer"]) > 1).any():
        raise SchemaViolation("row flagged as both question and answer")
    procedural = table["name"].isin(PROCEDURAL_NAMES)
    if (table.loc[procedural, "interject"] != 0).any():
        raise SchemaViolation("stage direction or business start flagged as an interjection")


def assemble_daily_table(records: Sequence[Union[AttributedStatement, DebateRecord]]) -> pd.DataFrame:
    rows = [asdict(r.to_record() if isinstance(r, AttributedStatement) else r) for r in records]
    frame = pd.DataFrame(rows, columns=list(RECORD_COLUMNS)).rename(columns=RECORD_COLUMNS)
    frame = coerce_types(frame)
    check_daily_table(frame)
    return frame


def daily_base_path(out_dir: str, sitting_date: datetime.date) -> str:
    return os.path.join(out_dir, f"hansard_{sitting_date.isoformat()}")


def check_formats(formats: Iterable[str]) -> List[str]:
    formats = list(formats)
    unknown = [f for f in formats if f not in SUPPORTED_FORMATS]
    if unknown or not formats:
        raise UnknownFormat(f"unknown output format(s): {', '.join(unknown) or '(none)'}")
    return formats


def write_outputs(table: pd.DataFrame, base_path: str, formats: Sequence[str] = SUPPORTED_FORMATS) -> List[str]:
    formats = check_formats(formats)
    schema = CORPUS_SCHEMA if "date" in table.columns else DAILY_SCHEMA
    written = []
    try:
        os.makedirs(os.path.dirname(base_path) or ".", exist_ok=True)
        if "csv" in formats:
            table.to_csv(f"{base_path}.csv", index=False, encoding="utf-8", lineterminator="\n", na_rep="")
            written.append(f"{base_path}.csv")
        if "parquet" in formats:
            arrow_table = pa.Table.from_pandas(table, schema=schema, preserve_index=False)
            pq.write_table(arrow_table, f"{base_path}.parquet")
            written.append(f"{base_path}.parquet")
    except OSError as e:
        raise IoFailure(f"could not write {base_path}: {e}") from e
    return written


def read_table(path: str) -> pd.DataFrame:
    try:
        if path.endswith(".parquet"):
            frame = pq.read_table(path).to_pandas()
        elif path.endswith(".csv"):
            frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
        else:
            raise UnknownFormat(f"cannot tell the format of {path}")
    except OSError as e:
        raise IoFailure(f"could not read {path}: {e}") from e
    return coerce_types(frame)


def date_from_filename(path: str) -> datetime.date:
    m = _DAILY_FILE_RE.search(os.path.basename(path))
    if not m:
        raise UnknownFormat(f"{path} is not named hansard_YYYY-MM-DD.csv|parquet")
    return datetime.date.fromisoformat(m.group(1))


def build_corpus(daily_paths: Sequence[str]) -> pd.DataFrame:
    dated = {}
    for path in daily_paths:
        day = date_from_filename(path)
        if day in dated:
            raise DuplicateDate(f"{os.path.basename(dated[day])} and {os.path.basename(path)} both hold {day}")
        dated[day] = path
    frames = []
    for day in sorted(dated):
        frame = read_table(dated[day])
        frame.insert(0, "date", day)
        frames.append(frame)
    if not frames:
        return coerce_types(pd.DataFrame(columns=CORPUS_COLUMNS))
    corpus = pd.concat(frames, ignore_index=True)
    logger.info(f"Corpus built from {len(frames)} sitting days, {len(corpus)} rows")
    return corpus


def find_daily_files(out_dir: str, fmt: str = "parquet") -> List[str]:
    if not os.path.isdir(out_dir):
        return []
    names = sorted(n for n in os.listdir(out_dir) if _DAILY_FILE_RE.search(n) and n.endswith(f".{fmt}"))
    return [os.path.join(out_dir, n) for n in names]


def drop_stage_directions(table: pd.DataFrame) -> pd.DataFrame:
    """Remove procedural rows and renumber ``order`` densely within each day."""
    kept = table[~table["name"].isin(PROCEDURAL_NAMES)].copy()
    if "date" in kept.columns:
        kept["order"] = kept.groupby("date").cumcount() + 1
    else:
        kept["order"] = range(1, len(kept) + 1)
    kept["order"] = kept["order"].astype("Int64")
    return kept.reset_index(drop=True)
