"""Eight consistency checks over parsed sitting days.

Each check returns the offending rows as findings; a clean day produces
none. The chamber size bound depends on the sitting date because the House
grew twice over the covered period.
"""
import datetime
import json
import logging
import re
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import pandas as pd

from .emitter import PROCEDURAL_NAMES
from .ingest import PoliticianRegistry

logger = logging.getLogger(__name__)

SPEAKER_NAME_ID = "10000"
TIME_EXPIRED = "(Time expired)"
TIMESTAMP_RE = re.compile(r"^([01]\d|2[0-3]):[0-5]\d:[0-5]\d$")

# (first sitting date of the new size, seats)
CHAMBER_SIZES = (
    (datetime.date(2001, 11, 10), 150),
    (datetime.date(2019, 5, 18), 151),
)
INITIAL_CHAMBER_SIZE = 148

TEST_NAMES = {
    1: "session header date matches file date",
    2: "no adjacent duplicate bodies",
    3: "(Time expired) only at the end of a statement",
    4: "time stamps are HH:MM:SS",
    5: "one party and electorate per member per day",
    6: "name.id values are known",
    7: "speakers are alive on the day",
    8: "speakers hold a seat on the day",
}
ALL_TESTS = tuple(TEST_NAMES)


def chamber_size_bound(day: datetime.date) -> int:
    size = INITIAL_CHAMBER_SIZE
    for start, seats in CHAMBER_SIZES:
        if day >= start:
            size = seats
    return size


@dataclass(frozen=True)
class Finding:
    test_id: int
    date: datetime.date
    orders: tuple
    detail: str


@dataclass
class TestResult:
    test_id: int
    name: str
    days_checked: int = 0
    findings: List[Finding] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.findings


@dataclass
class ValidationReport:
    results: Dict[int, TestResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def findings(self, test_id: Optional[int] = None) -> List[Finding]:
        if test_id is not None:
            return list(self.results[test_id].findings)
        return [f for r in self.results.values() for f in r.findings]

    def failing_tests(self) -> List[int]:
        return [t for t, r in self.results.items() if not r.passed]

    def to_lines(self) -> List[str]:
        lines = []
        for test_id, result in sorted(self.results.items()):
            status = "PASS" if result.passed else f"FAIL ({len(result.findings)})"
            lines.append(f"[{test_id}] {result.name}: {status} over {result.days_checked} day(s)")
            for f in result.findings[:20]:
                orders = ",".join(str(o) for o in f.orders) or "-"
                lines.append(f"    {f.date} order={orders} {f.detail}")
            if len(result.findings) > 20:
                lines.append(f"    ... {len(result.findings) - 20} more")
        return lines

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"test_id": f.test_id, "test": TEST_NAMES[f.test_id], "date": f.date,
             "orders": ",".join(str(o) for o in f.orders), "detail": f.detail}
            for f in self.findings()
        ]
        return pd.DataFrame(rows, columns=["test_id", "test", "date", "orders", "detail"])

    def to_json(self) -> str:
        payload = {
            str(t): {
                "name": r.name,
                "passed": r.passed,
                "days_checked": r.days_checked,
                "findings": [dict(asdict(f), date=f.date.isoformat(), orders=list(f.orders)) for f in r.findings],
            }
            for t, r in sorted(self.results.items())
        }
        return json.dumps(payload, indent=2)


def _orders(frame: pd.DataFrame) -> tuple:
    return tuple(int(o) for o in frame["order"].dropna())


def _attributed(table: pd.DataFrame) -> pd.DataFrame:
    return table[~table["name"].isin(PROCEDURAL_NAMES)]


def check_header_date(day: datetime.date, header_date: Optional[datetime.date]) -> List[Finding]:
    if header_date is None or header_date == day:
        return []
    return [Finding(1, day, (), f"header says {header_date}")]


def check_adjacent_duplicates(day: datetime.date, table: pd.DataFrame) -> List[Finding]:
    bodies = table["body"].tolist()
    orders = table["order"].tolist()
    return [
        Finding(2, day, (int(orders[i - 1]), int(orders[i])), "body repeats the previous row")
        for i in range(1, len(bodies))
        if not pd.isna(bodies[i]) and bodies[i] == bodies[i - 1]
    ]


def check_time_expired(day: datetime.date, table: pd.DataFrame) -> List[Finding]:
    body = table["body"].fillna("")
    bad = body.str.contains(TIME_EXPIRED, regex=False) & ~body.str.rstrip().str.endswith(TIME_EXPIRED)
    return [Finding(3, day, (int(o),), "text follows (Time expired)") for o in table.loc[bad, "order"]]


def check_timestamps(day: datetime.date, table: pd.DataFrame) -> List[Finding]:
    stamps = table["time.stamp"].dropna()
    bad = ~stamps.map(lambda s: TIMESTAMP_RE.match(s) is not None).astype(bool)
    return [
        Finding(4, day, (int(table.at[ix, "order"]),), f"time.stamp {stamps[ix]!r}")
        for ix in stamps.index[bad]
    ]


def check_party_consistency(day: datetime.date, table: pd.DataFrame) -> List[Finding]:
    rows = _attributed(table)
    key = rows["uniqueID"].fillna(rows["name"])
    findings = []
    for column in ("party", "electorate"):
        counts = rows.groupby(key)[column].nunique(dropna=True)
        for who in counts.index[counts > 1]:
            offending = rows[key == who]
            values = sorted(offending[column].dropna().unique())
            findings.append(Finding(5, day, _orders(offending), f"{who} has {column} {values}"))
    return findings


def check_name_ids(day: datetime.date, table: pd.DataFrame, registry: PoliticianRegistry) -> List[Finding]:
    known = registry.handbook_ids() | {SPEAKER_NAME_ID}
    ids = table["name.id"].dropna()
    bad = ids[~ids.isin(known)]
    return [Finding(6, day, (int(table.at[ix, "order"]),), f"name.id {value!r} is not in the handbook")
            for ix, value in bad.items()]


def _speakers(table: pd.DataFrame, registry: PoliticianRegistry) -> Dict[str, pd.DataFrame]:
    """Rows grouped by the registry entry they resolve to, uniqueID first."""
    rows = _attributed(table)
    grouped: Dict[str, List[int]] = {}
    for ix, uid, name_id in zip(rows.index, rows["uniqueID"], rows["name.id"]):
        politician = registry.by_unique_id(None if pd.isna(uid) else uid)
        if politician is None and not pd.isna(name_id):
            politician = registry.by_name_id(name_id)
        if politician is not None:
            grouped.setdefault(politician.unique_id, []).append(ix)
    return {uid: rows.loc[ixs] for uid, ixs in grouped.items()}


def check_alive(day: datetime.date, table: pd.DataFrame, registry: PoliticianRegistry) -> List[Finding]:
    findings = []
    for uid, rows in _speakers(table, registry).items():
        politician = registry.by_unique_id(uid)
        if not politician.alive_on(day):
            findings.append(Finding(7, day, _orders(rows), f"{uid} was not alive (died {politician.died})"))
    return findings


def check_serving(day: datetime.date, table: pd.DataFrame, registry: PoliticianRegistry) -> List[Finding]:
    findings = []
    for uid, rows in _speakers(table, registry).items():
        if not registry.by_unique_id(uid).serving_on(day):
            findings.append(Finding(8, day, _orders(rows), f"{uid} held no seat on {day}"))
    chamber = _attributed(table)
    chamber = chamber[chamber["fedchamb_flag"] == 0]
    distinct = chamber["uniqueID"].fillna(chamber["name"]).nunique(dropna=True)
    bound = chamber_size_bound(day)
    if distinct > bound:
        findings.append(Finding(8, day, (), f"{distinct} distinct names in the Chamber, more than {bound} seats"))
    return findings


def validate_day(day: datetime.date, table: pd.DataFrame, registry: PoliticianRegistry,
                 header_date: Optional[datetime.date] = None,
                 tests: Sequence[int] = ALL_TESTS) -> Dict[int, List[Finding]]:
    checks = {
        1: lambda: check_header_date(day, header_date),
        2: lambda: check_adjacent_duplicates(day, table),
        3: lambda: check_time_expired(day, table),
        4: lambda: check_timestamps(day, table),
        5: lambda: check_party_consistency(day, table),
        6: lambda: check_name_ids(day, table, registry),
        7: lambda: check_alive(day, table, registry),
        8: lambda: check_serving(day, table, registry),
    }
    return {t: checks[t]() for t in tests}


def run_validation(tables: Mapping[datetime.date, pd.DataFrame], registry: PoliticianRegistry,
                   header_dates: Optional[Mapping[datetime.date, Optional[datetime.date]]] = None,
                   tests: Iterable[int] = ALL_TESTS) -> ValidationReport:
    tests = tuple(sorted(set(tests)))
    unknown = [t for t in tests if t not in TEST_NAMES]
    if unknown:
        raise ValueError(f"unknown validation test(s) {unknown}")
    header_dates = header_dates or {}
    results = {t: TestResult(t, TEST_NAMES[t]) for t in tests}
    for day in sorted(tables):
        table = tables[day].reset_index(drop=True)
        for test_id, findings in validate_day(day, table, registry, header_dates.get(day), tests).items():
            results[test_id].days_checked += 1
            results[test_id].findings.extend(findings)
    report = ValidationReport(results)
    for t, r in results.items():
        if not r.passed:
            logger.warning(f"Validation test {t} ({r.name}) flagged {len(r.findings)} finding(s)")
    return report


def tables_from_corpus(corpus: pd.DataFrame) -> Dict[datetime.date, pd.DataFrame]:
    return {day: frame.drop(columns="date").reset_index(drop=True) for day, frame in corpus.groupby("date", sort=True)}
