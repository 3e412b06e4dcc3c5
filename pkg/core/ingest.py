import datetime
import enum
import logging
import os
import tempfile
import unicodedata
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import pandas as pd
import requests
from lxml import etree

from . import config
from .errors import (
    CacheCorruption, ConfigError, DuplicateUniqueID, NotFound, SchemaMismatch, TransportFailure,
)

logger = logging.getLogger(__name__)

POLITICIAN_COLUMNS = [
    "uniqueID", "surname", "firstNames", "gender", "nameID", "electorate", "party",
    "electorateFrom", "electorateTo", "born", "died",
]
PARTYFACTS_COLUMNS = ["partyfacts_id", "party_abb_hansard", "party_abb_auspol", "party_name_auspol"]
INTERVAL_SEPARATOR = "|"


class SourceOrigin(enum.Enum):
    REMOTE = "remote"
    LOCAL_PATH = "local_path"
    FIXTURE = "fixture"


@dataclass(frozen=True)
class SourceLocator:
    sitting_date: Optional[datetime.date]
    origin: SourceOrigin
    uri_or_path: str = ""

    def __post_init__(self):
        if self.origin is SourceOrigin.REMOTE:
            if self.sitting_date is None:
                raise ConfigError("a remote locator needs a sitting date")
            if not config.COVERAGE_START <= self.sitting_date <= config.COVERAGE_END:
                raise ConfigError(
                    f"{self.sitting_date} is outside {config.COVERAGE_START}..{config.COVERAGE_END}"
                )

    @classmethod
    def remote(cls, sitting_date: datetime.date) -> "SourceLocator":
        return cls(sitting_date, SourceOrigin.REMOTE, config.url_template().format(date=sitting_date.isoformat()))

    @classmethod
    def local(cls, path: str, sitting_date: Optional[datetime.date] = None) -> "SourceLocator":
        return cls(sitting_date, SourceOrigin.LOCAL_PATH, path)


def _is_well_formed(data: bytes) -> bool:
    parser = etree.XMLParser(resolve_entities=False, no_network=True, load_dtd=False, huge_tree=True)
    try:
        etree.fromstring(data, parser=parser)
        return True
    except etree.XMLSyntaxError:
        return False


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(path)
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".xml")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def cache_path_for(cache_dir: str, sitting_date: datetime.date) -> str:
    return os.path.join(cache_dir, f"{sitting_date.isoformat()}.xml")


def fetch_sitting_day(locator: SourceLocator, cache_dir: Optional[str] = None,
                      session: Optional[requests.Session] = None, timeout: float = 60.0) -> bytes:
    if locator.origin is SourceOrigin.LOCAL_PATH:
        try:
            with open(locator.uri_or_path, "rb") as f:
                return f.read()
        except FileNotFoundError as e:
            raise NotFound(f"no file at {locator.uri_or_path}") from e

    if locator.origin is SourceOrigin.FIXTURE:
        from .fixtures import FixtureSpec, generate_fixture
        xml_bytes, _ = generate_fixture(FixtureSpec.parse(locator.uri_or_path))
        return xml_bytes

    cache_dir = cache_dir or config.cache_dir()
    cached = cache_path_for(cache_dir, locator.sitting_date)
    if os.path.isfile(cached):
        with open(cached, "rb") as f:
            data = f.read()
        if not _is_well_formed(data):
            raise CacheCorruption(f"cached transcript {cached} is not well-formed XML")
        logger.debug(f"Cache hit for {locator.sitting_date}")
        return data

    url = locator.uri_or_path or config.url_template().format(date=locator.sitting_date.isoformat())
    getter = session or requests
    try:
        resp = getter.get(url, timeout=timeout)
    except requests.RequestException as e:
        raise TransportFailure(f"fetching {url} failed: {e}") from e
    if resp.status_code == 404:
        raise NotFound(f"no transcript for {locator.sitting_date}")
    try:
        resp.raise_for_status()
    except requests.HTTPError as e:
        raise TransportFailure(f"fetching {url} failed: {e}") from e

    data = resp.content
    if not data.lstrip().startswith(b"<") or not _is_well_formed(data):
        # The site answers non-sitting days with an HTML page.
        raise NotFound(f"no XML transcript for {locator.sitting_date}")
    _write_atomic(cached, data)
    logger.info(f"Fetched {locator.sitting_date} ({len(data)} bytes)")
    return data


# ---------------------------------------------------------------------------
# Reference data


def fold(text: str) -> str:
    """Case- and diacritic-insensitive key."""
    decomposed = unicodedata.normalize("NFKD", text or "")
    return "".join(c for c in decomposed if not unicodedata.combining(c)).casefold().strip()


@dataclass(frozen=True)
class ServiceInterval:
    electorate: str
    party: str
    start: datetime.date
    end: Optional[datetime.date] = None

    def covers(self, day: datetime.date) -> bool:
        return self.start <= day and (self.end is None or day <= self.end)


@dataclass(frozen=True)
class Politician:
    unique_id: str
    surname: str
    first_names: Tuple[str, ...]
    gender: str
    name_id: str
    intervals: Tuple[ServiceInterval, ...]
    born: Optional[datetime.date] = None
    died: Optional[datetime.date] = None
    common_name: Optional[str] = None

    @property
    def first_name(self) -> str:
        if self.common_name:
            return self.common_name
        return self.first_names[0] if self.first_names else ""

    @property
    def full_name(self) -> str:
        return f"{self.surname}, {self.first_name}, MP"

    def interval_on(self, day: datetime.date) -> Optional[ServiceInterval]:
        for interval in self.intervals:
            if interval.covers(day):
                return interval
        return None

    def serving_on(self, day: datetime.date) -> bool:
        return self.interval_on(day) is not None

    def alive_on(self, day: datetime.date) -> bool:
        if self.born is not None and self.born > day:
            return False
        return self.died is None or self.died >= day


@dataclass(frozen=True)
class RejectedRow:
    row_number: int
    unique_id: str
    reason: str


class PoliticianRegistry:
    def __init__(self, entries: Iterable[Politician], rejected: Iterable[RejectedRow] = ()):
        self.entries: Tuple[Politician, ...] = tuple(entries)
        self.rejected: Tuple[RejectedRow, ...] = tuple(rejected)
        self._by_unique_id: Dict[str, Politician] = {}
        self._by_name_id: Dict[str, Politician] = {}
        self._by_full_name: Dict[str, List[Politician]] = {}
        self._by_surname: Dict[str, List[Politician]] = {}
        for p in self.entries:
            if p.unique_id in self._by_unique_id:
                raise DuplicateUniqueID(f"uniqueID {p.unique_id!r} appears more than once")
            self._by_unique_id[p.unique_id] = p
            if p.name_id:
                self._by_name_id.setdefault(p.name_id, p)
            self._by_full_name.setdefault(fold(p.full_name), []).append(p)
            self._by_surname.setdefault(fold(p.surname), []).append(p)
        self._max_surname_tokens = max((len(k.split()) for k in self._by_surname), default=1)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Politician]:
        return iter(self.entries)

    def by_unique_id(self, unique_id: Optional[str]) -> Optional[Politician]:
        return self._by_unique_id.get(unique_id or "")

    def by_name_id(self, name_id: Optional[str]) -> Optional[Politician]:
        return self._by_name_id.get(name_id or "")

    def by_full_name(self, full_name: Optional[str]) -> List[Politician]:
        return list(self._by_full_name.get(fold(full_name or ""), []))

    def find_surname(self, surname: str) -> List[Politician]:
        return list(self._by_surname.get(fold(surname), []))

    def match_name_tokens(self, tokens: Sequence[str]) -> Tuple[List[Politician], List[str]]:
        """Longest trailing run of tokens that is a known surname.

        Returns the candidates and the leading tokens left over (first names
        or initials).
        """
        for n in range(min(self._max_surname_tokens, len(tokens)), 0, -1):
            candidates = self.find_surname(" ".join(tokens[-n:]))
            if candidates:
                return candidates, list(tokens[:-n])
        return [], list(tokens)

    def serving_on(self, day: datetime.date) -> List[Politician]:
        return [p for p in self.entries if p.serving_on(day)]

    def handbook_ids(self) -> set:
        return {p.name_id for p in self.entries if p.name_id}

    def replace_entry(self, unique_id: str, **changes) -> "PoliticianRegistry":
        return PoliticianRegistry(
            [replace(p, **changes) if p.unique_id == unique_id else p for p in self.entries],
            self.rejected,
        )


class PartyFactsMap:
    def __init__(self, frame: pd.DataFrame):
        self.frame = frame
        self._ids = {
            abb: (None if pd.isna(pid) else int(pid))
            for abb, pid in zip(frame["party_abb_hansard"], frame["partyfacts_id"])
        }

    def __len__(self) -> int:
        return len(self.frame)

    def lookup(self, party_abb: Optional[str]) -> Optional[int]:
        if not party_abb:
            return None
        return self._ids.get(party_abb)


def _delimiter(path: str) -> str:
    return "\t" if path.lower().endswith((".tsv", ".tab", ".txt")) else ","


def _parse_date(text: str, label: str) -> Optional[datetime.date]:
    text = (text or "").strip()
    if not text:
        return None
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        raise ValueError(f"{label} {text!r} is not an ISO-8601 date")


def _politician_from_row(row: Dict[str, str]) -> Politician:
    unique_id = row["uniqueID"].strip()
    if not unique_id:
        raise ValueError("empty uniqueID")
    born = _parse_date(row["born"], "born")
    died = _parse_date(row["died"], "died")
    if born and died and died < born:
        raise ValueError(f"died {died} before born {born}")

    parts = [row[c].split(INTERVAL_SEPARATOR) for c in ("electorate", "party", "electorateFrom", "electorateTo")]
    if len({len(p) for p in parts}) != 1:
        raise ValueError("electorate, party, electorateFrom and electorateTo list different interval counts")
    intervals = []
    if any(v.strip() for p in parts for v in p):
        for electorate, party, start_text, end_text in zip(*parts):
            start = _parse_date(start_text, "electorateFrom")
            if start is None:
                raise ValueError("service interval without a start date")
            end = _parse_date(end_text, "electorateTo")
            if end is not None and end < start:
                raise ValueError(f"service interval ends {end} before it starts {start}")
            intervals.append(ServiceInterval(electorate.strip(), party.strip(), start, end))

    first_names = tuple(row["firstNames"].split())
    return Politician(
        unique_id=unique_id,
        surname=row["surname"].strip(),
        first_names=first_names,
        gender=row["gender"].strip(),
        name_id=row["nameID"].strip(),
        intervals=tuple(intervals),
        born=born,
        died=died,
        common_name=(row.get("commonName") or "").strip() or None,
    )


def load_politicians(path: str) -> PoliticianRegistry:
    df = pd.read_csv(path, sep=_delimiter(path), dtype=str, keep_default_na=False)
    missing = [c for c in POLITICIAN_COLUMNS if c not in df.columns]
    if missing:
        raise SchemaMismatch(f"{path}: missing required column(s) {', '.join(missing)}")

    ids = df["uniqueID"].str.strip()
    duplicated = ids[(ids != "") & ids.duplicated()]
    if not duplicated.empty:
        raise DuplicateUniqueID(f"{path}: uniqueID {duplicated.iloc[0]!r} appears more than once")

    entries, rejected = [], []
    # header is line 1
    for line_no, row in enumerate(df.to_dict("records"), start=2):
        try:
            entries.append(_politician_from_row(row))
        except ValueError as e:
            rejected.append(RejectedRow(line_no, row.get("uniqueID", ""), str(e)))
    for r in rejected:
        logger.warning(f"Rejected politician row {r.row_number} ({r.unique_id or '?'}): {r.reason}")
    logger.info(f"Loaded {len(entries)} politicians from {path}, rejected {len(rejected)}")
    return PoliticianRegistry(entries, rejected)


def load_partyfacts(path: str) -> PartyFactsMap:
    df = pd.read_csv(path, sep=_delimiter(path), dtype=str, keep_default_na=False)
    if sorted(df.columns) != sorted(PARTYFACTS_COLUMNS):
        raise SchemaMismatch(f"{path}: expected exactly the columns {', '.join(PARTYFACTS_COLUMNS)}")
    df = df[PARTYFACTS_COLUMNS].copy()
    duplicated = df["party_abb_hansard"][df["party_abb_hansard"].duplicated()]
    if not duplicated.empty:
        raise SchemaMismatch(f"{path}: party_abb_hansard {duplicated.iloc[0]!r} appears more than once")
    ids = df["partyfacts_id"].str.strip()
    df["partyfacts_id"] = pd.to_numeric(ids.where(ids != ""), errors="coerce").astype("Int64")
    return PartyFactsMap(df)


def load_reference_data(politicians_path: str, partyfacts_path: str) -> Tuple[PoliticianRegistry, PartyFactsMap]:
    return load_politicians(politicians_path), load_partyfacts(partyfacts_path)


def registry_to_frame(registry: PoliticianRegistry) -> pd.DataFrame:
    def iso(d):
        return d.isoformat() if d else ""

    rows = []
    for p in registry:
        rows.append({
            "uniqueID": p.unique_id,
            "surname": p.surname,
            "firstNames": " ".join(p.first_names),
            "commonName": p.common_name or "",
            "gender": p.gender,
            "nameID": p.name_id,
            "electorate": INTERVAL_SEPARATOR.join(i.electorate for i in p.intervals),
            "party": INTERVAL_SEPARATOR.join(i.party for i in p.intervals),
            "electorateFrom": INTERVAL_SEPARATOR.join(iso(i.start) for i in p.intervals),
            "electorateTo": INTERVAL_SEPARATOR.join(iso(i.end) for i in p.intervals),
            "born": iso(p.born),
            "died": iso(p.died),
        })
    return pd.DataFrame(rows, columns=POLITICIAN_COLUMNS[:4] + ["commonName"] + POLITICIAN_COLUMNS[4:])
