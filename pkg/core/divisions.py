import datetime
import logging
import os
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from .errors import IoFailure, UnknownFormat
from .records import AttributedStatement, ParseIssue
from .segmenter import normalize_text
from .xml_model import TranscriptDocument

logger = logging.getLogger(__name__)

HOUSE_DIVIDED = "The House divided."
SIDES = ("AYES", "NOES", "PAIRS")
SIDE_TAGS = {"ayes": "AYES", "noes": "NOES", "pairs": "PAIRS"}
LONG_SIDE_LABELS = {"AYES": "AYE", "NOES": "NO", "PAIRS": "PAIR"}

DIVISION_COLUMNS = [
    "date", "div_num", "time.stamp",
    "num.votes_AYES", "num.votes_NOES", "num.votes_PAIRS",
    "names_AYES", "names_NOES", "names_PAIRS", "result",
]
LONG_COLUMNS = ["date", "div_num", "side", "voter_name"]

DIVISION_SCHEMA = pa.schema([
    ("date", pa.date32()),
    ("div_num", pa.int64()),
    ("time.stamp", pa.string()),
    ("num.votes_AYES", pa.int64()),
    ("num.votes_NOES", pa.int64()),
    ("num.votes_PAIRS", pa.int64()),
    ("names_AYES", pa.list_(pa.string())),
    ("names_NOES", pa.list_(pa.string())),
    ("names_PAIRS", pa.list_(pa.string())),
    ("result", pa.string()),
])


@dataclass
class DivisionRecord:
    date: Optional[datetime.date]
    div_num: int
    time_stamp: Optional[str] = None
    names_ayes: List[str] = field(default_factory=list)
    names_noes: List[str] = field(default_factory=list)
    names_pairs: List[str] = field(default_factory=list)
    result: str = ""

    @property
    def num_votes_ayes(self) -> int:
        return len(self.names_ayes)

    @property
    def num_votes_noes(self) -> int:
        return len(self.names_noes)

    @property
    def num_votes_pairs(self) -> int:
        return len(self.names_pairs)

    def names(self, side: str) -> List[str]:
        return {"AYES": self.names_ayes, "NOES": self.names_noes, "PAIRS": self.names_pairs}[side]


def _record_issue(issues: Optional[List[ParseIssue]], issue: ParseIssue) -> None:
    logger.warning(str(issue))
    if issues is not None:
        issues.append(issue)


def parse_divisions(doc: TranscriptDocument, issues: Optional[List[ParseIssue]] = None,
                    sitting_date: Optional[datetime.date] = None) -> List[DivisionRecord]:
    """Division records of the chamber, dated by ``sitting_date`` when given, else by the session header."""
    if doc.chamber_root is None:
        return []
    records = []
    for div_num, division in enumerate(doc.chamber_root.iter("division"), start=1):
        path = doc.path(division)
        record = DivisionRecord(date=sitting_date or doc.session_date, div_num=div_num)
        header = division.find("division.header")
        if header is not None:
            stamp = header.findtext("time.stamp")
            record.time_stamp = stamp.strip() if stamp and stamp.strip() else None

        data = division.find("division.data")
        if data is None:
            _record_issue(issues, ParseIssue("MalformedDivision", "division without division.data", path))
        else:
            for side_el in data:
                side = SIDE_TAGS.get(side_el.tag) if isinstance(side_el.tag, str) else None
                if side is None:
                    continue
                names = [normalize_text("".join(n.itertext())) for n in side_el.iter("name")]
                names = [n for n in names if n]
                record.names(side).extend(names)
                stated = (side_el.findtext("num.votes") or "").strip()
                if stated and (not stated.isdigit() or int(stated) != len(names)):
                    logger.info(f"rule=division_count_recomputed div_num={div_num} {side} stated={stated} listed={len(names)}")
                    _record_issue(issues, ParseIssue(
                        "MalformedDivision", f"{side} count {stated} but {len(names)} names listed", path))

        result = division.find("division.result")
        if result is not None:
            record.result = " ".join(
                t for t in (normalize_text("".join(p.itertext())) for p in result.iter("para", "p")) if t)
        records.append(record)
    return records


def flag_division_rows(day_records: Sequence[AttributedStatement]) -> List[AttributedStatement]:
    return [replace(r, div_flag=int(HOUSE_DIVIDED in r.body)) for r in day_records]


def divisions_frame(records: Sequence[DivisionRecord]) -> pd.DataFrame:
    rows = []
    for r in records:
        rows.append({
            "date": r.date,
            "div_num": r.div_num,
            "time.stamp": r.time_stamp,
            "num.votes_AYES": r.num_votes_ayes,
            "num.votes_NOES": r.num_votes_noes,
            "num.votes_PAIRS": r.num_votes_pairs,
            "names_AYES": list(r.names_ayes),
            "names_NOES": list(r.names_noes),
            "names_PAIRS": list(r.names_pairs),
            "result": r.result,
        })
    frame = pd.DataFrame(rows, columns=DIVISION_COLUMNS)
    if not frame.empty:
        frame = frame.sort_values(["date", "div_num"], kind="stable").reset_index(drop=True)
    return frame


def divisions_long_frame(records: Sequence[DivisionRecord]) -> pd.DataFrame:
    """One voter per row, for consumers that can only read CSV."""
    rows = [
        (r.date, r.div_num, LONG_SIDE_LABELS[side], name)
        for r in records for side in SIDES for name in r.names(side)
    ]
    return pd.DataFrame(rows, columns=LONG_COLUMNS)


def write_divisions(records: Sequence[DivisionRecord], base_path: str, formats: Sequence[str] = ("csv", "parquet")) -> List[str]:
    """`<base>.parquet` holds list columns; `<base>_long.csv` is the flattened form."""
    unknown = [f for f in formats if f not in ("csv", "parquet")]
    if unknown:
        raise UnknownFormat(f"unknown output format(s): {', '.join(unknown)}")
    written = []
    try:
        os.makedirs(os.path.dirname(base_path) or ".", exist_ok=True)
        if "parquet" in formats:
            frame = divisions_frame(records)
            table = pa.Table.from_pandas(frame, schema=DIVISION_SCHEMA, preserve_index=False)
            pq.write_table(table, f"{base_path}.parquet")
            written.append(f"{base_path}.parquet")
        if "csv" in formats:
            divisions_long_frame(records).to_csv(f"{base_path}_long.csv", index=False, lineterminator="\n")
            written.append(f"{base_path}_long.csv")
    except OSError as e:
        raise IoFailure(f"could not write divisions to {base_path}: {e}") from e
    return written


def read_divisions(path: str) -> pd.DataFrame:
    frame = pq.read_table(path).to_pandas()
    for side in SIDES:
        frame[f"names_{side}"] = frame[f"names_{side}"].map(lambda v: [] if v is None else list(v))
    return frame
