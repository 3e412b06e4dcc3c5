"""Synthetic sitting days with known answers.

A day is first planned (speeches, interjections, divisions, questions in
writing), then rendered as XML in the layout of the requested era. The
expected daily table is derived from the same plan, never from the parser,
so the two can be compared column by column.
"""
import datetime
import enum
import itertools
import logging
import os
import random
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Optional, Tuple

import pandas as pd
from lxml import etree

from .divisions import DivisionRecord
from .emitter import DAILY_COLUMNS, coerce_types
from .errors import ConfigError, UnsupportedEra
from .ingest import PartyFactsMap, Politician, PoliticianRegistry, ServiceInterval, registry_to_frame
from .records import BUSINESS_START_NAME, RECORD_COLUMNS, STAGE_DIRECTION_NAME, SchemaEra
from .segmenter import capitalise_surname
from .topics import DebateTopic, topics_frame

logger = logging.getLogger(__name__)

# Opening day of each Parliament, used for plausible session headers.
PARLIAMENT_STARTS = (
    (38, datetime.date(1996, 4, 30)),
    (39, datetime.date(1998, 11, 10)),
    (40, datetime.date(2002, 2, 12)),
    (41, datetime.date(2004, 11, 16)),
    (42, datetime.date(2008, 2, 12)),
    (43, datetime.date(2010, 9, 28)),
    (44, datetime.date(2013, 11, 12)),
    (45, datetime.date(2016, 8, 30)),
    (46, datetime.date(2019, 7, 2)),
    (47, datetime.date(2022, 7, 26)),
)

ERA_DATE_RANGES = {
    SchemaEra.LEGACY_EARLY: (datetime.date(1998, 3, 2), datetime.date(1999, 12, 31)),
    SchemaEra.LEGACY_INLINE: (datetime.date(2000, 1, 1), datetime.date(2011, 3, 24)),
    SchemaEra.MODERN_MAINCOMM: (datetime.date(2011, 5, 10), datetime.date(2012, 8, 13)),
    SchemaEra.MODERN_FEDCHAMB: (datetime.date(2012, 8, 14), datetime.date(2022, 9, 8)),
}

SERVICE_START = datetime.date(1996, 3, 2)
GOVERNMENT_PARTIES = {"LIB", "NPA"}
SPEAKER_NAME_ID = "10000"


def parliament_no(day: datetime.date) -> int:
    number = PARLIAMENT_STARTS[0][0]
    for no, start in PARLIAMENT_STARTS:
        if day >= start:
            number = no
    return number


@dataclass(frozen=True)
class RosterMember:
    surname: str
    first_names: Tuple[str, ...]
    gender: str
    name_id: str
    electorate: str
    party: str
    born: int

    @property
    def unique_id(self) -> str:
        return re.sub(r"[^A-Za-z]", "", self.surname) + str(self.born)

    @property
    def full_name(self) -> str:
        return f"{self.surname}, {self.first_names[0]}, MP"

    @property
    def title(self) -> str:
        return "Mr" if self.gender == "male" else "Ms"

    @property
    def display(self) -> str:
        return f"{self.title} {capitalise_surname(self.surname)}"

    @property
    def division_name(self) -> str:
        return f"{self.surname}, {' '.join(n[0] + '.' for n in self.first_names)}"

    @property
    def in_gov(self) -> str:
        return "1" if self.party in GOVERNMENT_PARTIES else "0"


ROSTER = (
    RosterMember("Albright", ("Helen", "Margaret"), "female", "0A1X2", "Banksia", "ALP", 1961),
    RosterMember("Brennan", ("Thomas",), "male", "B7Q", "Corowa", "LIB", 1958),
    RosterMember("Castellano", ("Rosa",), "female", "C40", "Dunmore", "ALP", 1966),
    RosterMember("Duffield", ("Graham",), "male", "D2K", "Eildon", "NPA", 1952),
    RosterMember("McTavish", ("Angus", "Robert"), "male", "M0T", "Fairhaven", "LIB", 1963),
    RosterMember("O'Dowd", ("Siobhan",), "female", "O5D", "Glenroy", "ALP", 1970),
    RosterMember("Fenwick-Hale", ("James",), "male", "F9H", "Hindmarsh", "LIB", 1955),
    RosterMember("van Rooyen", ("Pieter",), "male", "V3R", "Ironbark", "IND", 1949),
    RosterMember("Whitlock", ("Judith",), "female", "W0L", "Jarrah", "GRN", 1972),
    RosterMember("Kowalczyk", ("Marek",), "male", "K8Z", "Kurrajong", "NPA", 1960),
    RosterMember("Lindqvist", ("Ingrid",), "female", "L1Q", "Lachlan", "LIB", 1968),
)
# Deputy Speaker; presides and never takes the floor.
DEPUTY = RosterMember("Vasquez", ("Elena",), "female", "V6S", "Wattlebank", "ALP", 1957)

PARTYFACTS_ROWS = (
    (101, "ALP", "ALP", "Australian Labor Party"),
    (102, "LIB", "LIB", "Liberal Party of Australia"),
    (103, "NPA", "NAT", "National Party of Australia"),
    (104, "GRN", "GRN", "Australian Greens"),
    (102, "LP", "LIB", "Liberal Party of Australia"),
    (None, "IND", "IND", "Independent"),
)

SUBJECTS = ("The government", "This bill", "The committee", "Our community", "The department",
            "The council", "This program", "The region")
VERBS = ("supports", "funds", "reviews", "delivers", "protects", "expands", "improves", "examines")
OBJECTS = ("regional roads", "the new hospital", "small business", "the school program", "the water plan",
           "rural health services", "the rail upgrade", "public housing")
BILL_TITLES = ("Water Amendment Bill", "Regional Roads Bill", "Health Insurance Amendment Bill",
               "Customs Tariff Amendment Bill", "Fair Work Amendment Bill", "Aged Care Bill")
STAGE_TITLES = ("Second Reading", "Consideration in Detail", "Third Reading")
QT_TOPICS = ("Economy", "Health", "Infrastructure", "Education", "Environment")
MINISTER_ROLES = ("Treasurer", "Minister for Health", "Minister for Infrastructure")
GENERAL_SURFACES = ("Honourable members", "An opposition member", "A government member",
                    "Opposition members", "Government members")
STAGE_TAILS = (("Question agreed to.", "Bill read a second time."), ("Debate adjourned.",), ("Question agreed to.",))
DIVISION_RESULTS = ("Question agreed to.", "Question negatived.")
ANSWER_PHRASE = "has provided the following answer to the honourable member's question"


class DefectKind(enum.Enum):
    WRONG_HEADER_DATE = 1
    ADJACENT_DUPLICATE = 2
    TIME_EXPIRED_SPLIT_MISS = 3
    MALFORMED_TIMESTAMP = 4
    DUAL_PARTY = 5
    CORRUPTED_NAME_ID = 6
    DECEASED_SPEAKER = 7
    NON_SERVING_SPEAKER = 8

    @property
    def test_id(self) -> int:
        return self.value


@lru_cache(maxsize=None)
def fixture_registry() -> PoliticianRegistry:
    return PoliticianRegistry([
        Politician(
            unique_id=m.unique_id, surname=m.surname, first_names=m.first_names, gender=m.gender,
            name_id=m.name_id, intervals=(ServiceInterval(m.electorate, m.party, SERVICE_START),),
            born=datetime.date(m.born, 6, 1),
        )
        for m in ROSTER + (DEPUTY,)
    ])


def fixture_partyfacts() -> PartyFactsMap:
    frame = pd.DataFrame(PARTYFACTS_ROWS, columns=["partyfacts_id", "party_abb_hansard", "party_abb_auspol", "party_name_auspol"])
    frame["partyfacts_id"] = frame["partyfacts_id"].astype("Int64")
    return PartyFactsMap(frame)


def parse_era(text: str) -> SchemaEra:
    try:
        return SchemaEra(text)
    except ValueError as e:
        raise UnsupportedEra(f"unknown schema era {text!r}; choose from {', '.join(era.value for era in SchemaEra)}") from e


@dataclass(frozen=True)
class FixtureSpec:
    """What to generate. ``n_debates`` of None draws one to three chamber debates."""

    era: SchemaEra
    seed: int
    n_debates: Optional[int] = None
    interjection_rate: float = 0.75
    include_fedchamb: bool = True
    include_divisions: bool = True

    def __post_init__(self):
        if not isinstance(self.era, SchemaEra):
            object.__setattr__(self, "era", parse_era(str(self.era)))
        if self.n_debates is not None and self.n_debates < 1:
            raise ConfigError(f"n_debates must be at least 1, got {self.n_debates}")
        if not 0.0 <= self.interjection_rate <= 1.0:
            raise ConfigError(f"interjection_rate must lie in [0, 1], got {self.interjection_rate}")

    @classmethod
    def parse(cls, text: str) -> "FixtureSpec":
        era_text, _, seed_text = (text or "").partition(":")
        era = parse_era(era_text)
        try:
            seed = int(seed_text)
        except ValueError as e:
            raise ConfigError(f"fixture spec {text!r} is not <era>:<seed>") from e
        return cls(era, seed)

    @property
    def label(self) -> str:
        return f"{self.era.value}:{self.seed}"


# ---------------------------------------------------------------------------
# Day plan


@dataclass
class Segment:
    # opening, continuation, interjection, interjecting, general, presiding
    role: str
    member: Optional[RosterMember]
    sentences: List[str]
    page: str
    surface: str = ""
    inline: bool = False

    @property
    def has_talker(self) -> bool:
        return self.role in ("opening", "continuation", "interjection", "presiding")

    @property
    def holds_floor(self) -> bool:
        return self.role in ("opening", "continuation")


@dataclass
class SpeechPlan:
    tag: str
    member: RosterMember
    time: str
    first_speech: bool
    segments: List[Segment]
    role: Optional[str] = None
    tail: Tuple[str, ...] = ()
    time_expired: bool = False
    division: Optional[DivisionRecord] = None


@dataclass
class DebatePlan:
    title: str
    page: str
    speeches: List[SpeechPlan]
    sub_title: Optional[str] = None
    sub_page: Optional[str] = None
    repeat_page: bool = False


@dataclass
class VenuePlan:
    business: str
    debates: List[DebatePlan]
    fed: bool


@dataclass
class WrittenItem:
    tag: str
    member: RosterMember
    page: str
    text: str

    @property
    def kind(self) -> str:
        return "answer" if ANSWER_PHRASE in self.text else self.tag


@dataclass
class DayPlan:
    era: SchemaEra
    sitting_date: datetime.date
    chamber: VenuePlan
    fed: Optional[VenuePlan]
    written_page: str
    written: List[WrittenItem] = field(default_factory=list)
    early_dots: frozenset = frozenset()

    @property
    def venues(self) -> List[VenuePlan]:
        return [v for v in (self.chamber, self.fed) if v is not None]


class _Planner:
    def __init__(self, spec: FixtureSpec):
        self.spec = spec
        self.rng = random.Random(f"{spec.era.value}:{spec.seed}")
        self.items = itertools.count(1)
        self.page = self.rng.randint(1000, 9000)
        self.minute = 9 * 60 + 30
        self.modern = spec.era.is_modern

    def sentence(self, mention: Optional[RosterMember] = None) -> str:
        s, v, o = self.rng.choice(SUBJECTS), self.rng.choice(VERBS), self.rng.choice(OBJECTS)
        if mention is not None:
            return f"{s}, as {mention.title} {mention.surname} said yesterday, {v} {o} in item {next(self.items)}."
        return f"{s} {v} {o} in item {next(self.items)}."

    def sentences(self, low: int, high: int, speaker: Optional[RosterMember] = None) -> List[str]:
        out = [self.sentence() for _ in range(self.rng.randint(low, high))]
        if speaker is not None and self.rng.random() < 0.3:
            mentioned = self.rng.choice([m for m in ROSTER if m is not speaker])
            out.insert(self.rng.randrange(len(out) + 1), self.sentence(mentioned))
        return out

    def current_page(self) -> str:
        return str(self.page)

    def next_time(self) -> str:
        self.minute += self.rng.randint(4, 9)
        return f"{self.minute // 60:02d}:{self.minute % 60:02d}:00"

    def speech(self, tag: str, member: RosterMember, fed: bool, min_events: int = 0,
               role: Optional[str] = None) -> SpeechPlan:
        rng = self.rng
        opening = Segment("opening", member, self.sentences(1, 3, member), self.current_page())
        segments = [opening]
        others = [m for m in ROSTER if m is not member]
        for _ in range(max(min_events, rng.randint(0, 3))):
            if rng.random() < self.spec.interjection_rate:
                event = rng.choice(("interjection", "interjecting", "general"))
            else:
                event = "presiding"
            page = self.current_page()
            if event == "interjection":
                segments.append(Segment("interjection", rng.choice(others), [self.sentence()], page))
            elif event == "interjecting":
                who = rng.choice(others)
                surface = f"{who.title} {who.surname}" if rng.random() < 0.7 else f"{who.title} {who.first_names[0]} {who.surname}"
                segments.append(Segment("interjecting", who, [f"{surface} interjecting—"], page, surface=surface))
            elif event == "general":
                surface = rng.choice(GENERAL_SURFACES)
                segments.append(Segment("general", None, [f"{surface} interjecting—"], page, surface=surface))
            else:
                inline = self.modern and rng.random() < 0.5
                if inline:
                    previous = segments[-1]
                    previous.sentences[-1] = previous.sentences[-1][:-1] + "—"
                chair = DEPUTY if fed else None
                segments.append(Segment("presiding", chair, [f"Order! The member will resume in item {next(self.items)}."], page, inline=inline))
            if rng.random() < 0.2:
                self.page += 1
            segments.append(Segment("continuation", member, self.sentences(1, 2), self.current_page()))
        return SpeechPlan(tag=tag, member=member, time=self.next_time(), first_speech=rng.random() < 0.1,
                          segments=segments, role=role)

    def division(self, day: datetime.date) -> DivisionRecord:
        rng = self.rng
        voters = rng.sample(ROSTER, k=rng.randint(4, 9))
        cut = rng.randint(1, len(voters) - 1)
        ayes, noes = voters[:cut], voters[cut:]
        pairs = []
        if rng.random() < 0.5 and len(noes) > 1:
            pairs = [noes.pop()]
        return DivisionRecord(
            date=day, div_num=0, time_stamp=self.next_time(),
            names_ayes=[m.division_name for m in ayes],
            names_noes=[m.division_name for m in noes],
            names_pairs=[m.division_name for m in pairs],
            result=rng.choice(DIVISION_RESULTS),
        )

    def bill_debate(self, day: datetime.date, fed: bool, first: bool) -> DebatePlan:
        rng = self.rng
        self.page += 1
        page = self.current_page()
        sub_title = rng.choice(STAGE_TITLES) if rng.random() < 0.6 else None
        speeches = []
        for i in range(rng.randint(1, 3)):
            member = rng.choice(ROSTER)
            speeches.append(self.speech("speech", member, fed, min_events=1 if first and i == 0 else 0))
            if rng.random() < 0.3:
                self.page += 1
        if not fed and self.spec.include_divisions and rng.random() < 0.4:
            speeches[-1].division = self.division(day)
        for s in speeches:
            if s.division is None:
                roll = rng.random()
                if roll < 0.3:
                    s.time_expired = True
                elif roll < 0.6:
                    s.tail = rng.choice(STAGE_TAILS)
        return DebatePlan(rng.choice(BILL_TITLES), page, speeches, sub_title=sub_title,
                          sub_page=page if sub_title else None, repeat_page=rng.random() < 0.3)

    def question_time(self) -> List[DebatePlan]:
        rng = self.rng
        askers = [m for m in ROSTER if m.party not in GOVERNMENT_PARTIES]
        ministers = [m for m in ROSTER if m.party in GOVERNMENT_PARTIES]
        debates = []
        self.page += 1
        for topic in rng.sample(QT_TOPICS, k=rng.randint(1, 3)):
            page = self.current_page()
            question = self.speech("question", rng.choice(askers), False)
            minister = rng.choice(ministers)
            answer = self.speech("answer", minister, False, role=rng.choice(MINISTER_ROLES))
            debates.append(DebatePlan("QUESTIONS WITHOUT NOTICE", page, [question, answer], sub_title=topic, sub_page=page))
            self.page += 1
        return debates

    def written(self) -> List[WrittenItem]:
        rng = self.rng
        items = []
        for _ in range(rng.randint(0, 2)):
            asker = rng.choice(ROSTER)
            minister = rng.choice([m for m in ROSTER if m.party in GOVERNMENT_PARTIES and m is not asker])
            items.append(WrittenItem("question", asker, self.current_page(),
                                     f"{asker.title} {asker.surname} asked the minister, in writing, about item {next(self.items)}. {self.sentence()}"))
            items.append(WrittenItem("answer", minister, self.current_page(),
                                     f"The answer to the honourable member's question is as follows in item {next(self.items)}. {self.sentence()}"))
            self.page += 1
        if items and rng.random() < 0.5:
            minister = rng.choice([m for m in ROSTER if m.party in GOVERNMENT_PARTIES])
            items.append(WrittenItem("question", minister, self.current_page(),
                                     f"The minister {ANSWER_PHRASE} in item {next(self.items)}. {self.sentence()}"))
        return items

    def plan(self) -> DayPlan:
        rng = self.rng
        start, end = ERA_DATE_RANGES[self.spec.era]
        day = start + datetime.timedelta(days=rng.randint(0, (end - start).days))
        n_debates = self.spec.n_debates or rng.randint(1, 3)
        chamber_debates = [self.bill_debate(day, False, first=(i == 0)) for i in range(n_debates)]
        if n_debates >= 2:
            chamber_debates[1:1] = self.question_time()
        fed = None
        if self.spec.include_fedchamb:
            fed_debates = [self.bill_debate(day, True, first=False) for _ in range(rng.randint(1, 2))]
            fed = VenuePlan("The DEPUTY SPEAKER (Ms Vasquez) took the chair at 4 pm.", fed_debates, fed=True)
        div_num = itertools.count(1)
        for debate in chamber_debates:
            for s in debate.speeches:
                if s.division is not None:
                    s.division.div_num = next(div_num)
        self.page += 1
        written_page = self.current_page()
        written = self.written()
        early_dots = frozenset()
        if self.spec.era is SchemaEra.LEGACY_EARLY:
            early_dots = frozenset(m.name_id for m in ROSTER if rng.random() < 0.3)
        return DayPlan(
            era=self.spec.era,
            sitting_date=day,
            chamber=VenuePlan("The SPEAKER took the chair at 9.30 am and read prayers.", chamber_debates, fed=False),
            fed=fed,
            written_page=written_page,
            written=written,
            early_dots=early_dots,
        )


def plan_day(spec: FixtureSpec) -> DayPlan:
    return _Planner(spec).plan()


# ---------------------------------------------------------------------------
# Rendering


def _sub(parent, tag: str, text: Optional[str] = None, **attrs) -> etree._Element:
    el = etree.SubElement(parent, tag, **attrs)
    if text is not None:
        el.text = text
    return el


def _talker(parent, plan: DayPlan, member: Optional[RosterMember], page: str, time: Optional[str] = None,
            display: Optional[str] = None, in_gov: Optional[str] = None, first_speech: str = "0",
            role: Optional[str] = None, speaker: bool = False) -> etree._Element:
    talker = _sub(parent, "talker")
    if time:
        _sub(talker, "time.stamp", time)
    _sub(talker, "page.no", page)
    if speaker:
        _sub(talker, "name", "SPEAKER, The", role="metadata")
        _sub(talker, "name", "The SPEAKER", role="display")
        _sub(talker, "name.id", SPEAKER_NAME_ID)
        _sub(talker, "in.gov", "0")
        _sub(talker, "first.speech", "0")
        return talker
    display = display or member.display
    if member.name_id in plan.early_dots:
        display += "."
    _sub(talker, "name", member.full_name, role="metadata")
    _sub(talker, "name", display, role="display")
    _sub(talker, "name.id", member.name_id)
    _sub(talker, "electorate", member.electorate)
    _sub(talker, "party", member.party)
    if role:
        _sub(talker, "role", role)
    _sub(talker, "in.gov", in_gov if in_gov is not None else member.in_gov)
    _sub(talker, "first.speech", first_speech)
    return talker


def _segment_talker(parent, plan: DayPlan, speech: SpeechPlan, seg: Segment) -> None:
    if seg.role == "presiding":
        if seg.member is None:
            _talker(parent, plan, None, seg.page, speaker=True)
        else:
            _talker(parent, plan, seg.member, seg.page, display=_chair_display(seg), in_gov="0")
    elif seg.holds_floor:
        _talker(parent, plan, seg.member, seg.page, first_speech="1" if speech.first_speech else "0")
    else:
        _talker(parent, plan, seg.member, seg.page)


def _chair_display(seg: Segment) -> str:
    if seg.member is None:
        return "The SPEAKER"
    return f"The DEPUTY SPEAKER ({seg.member.title} {seg.member.surname})"


def _modern_prefix(speech: SpeechPlan, seg: Segment) -> str:
    if seg.role == "opening":
        detail = speech.member.electorate + (f"—{speech.role}" if speech.role else "")
        return f"{seg.member.display} ({detail}) ({speech.time[:5]}): "
    if seg.role == "presiding":
        return f"{_chair_display(seg)}: "
    if seg.role in ("continuation", "interjection"):
        return f"{seg.member.display}: "
    return ""


def _render_modern_speech(parent, plan: DayPlan, speech: SpeechPlan) -> None:
    el = _sub(parent, speech.tag)
    opening = speech.segments[0]
    _talker(_sub(el, "talk.start"), plan, speech.member, opening.page, time=speech.time,
            first_speech="1" if speech.first_speech else "0", role=speech.role)
    body = _sub(_sub(el, "talk.text"), "body")
    paragraphs: List[str] = []
    for i, seg in enumerate(speech.segments):
        sentences = list(seg.sentences)
        if i == len(speech.segments) - 1:
            sentences[-1] += _closing(speech)
        first = _modern_prefix(speech, seg) + sentences[0]
        if seg.inline:
            paragraphs[-1] += first
        else:
            paragraphs.append(first)
        paragraphs.extend(sentences[1:])
    for tail in speech.tail:
        paragraphs.append(tail)
    for text in paragraphs:
        _sub(body, "p", text)
    for seg in speech.segments[1:]:
        if seg.has_talker:
            skeleton = _sub(el, "continuation" if seg.holds_floor else "interjection")
            _segment_talker(_sub(skeleton, "talk.start"), plan, speech, seg)


def _closing(speech: SpeechPlan) -> str:
    return " (Time expired)" if speech.time_expired else ""


def _render_legacy_speech(parent, plan: DayPlan, speech: SpeechPlan) -> None:
    el = _sub(parent, speech.tag)
    floor = el
    for i, seg in enumerate(speech.segments):
        sentences = list(seg.sentences)
        if i == len(speech.segments) - 1:
            sentences[-1] += _closing(speech)
        if seg.role == "general":
            for text in sentences:
                _sub(floor, "para", text)
            continue
        if seg.role == "opening":
            holder = el
            talk_start = _sub(holder, "talk.start")
            _talker(talk_start, plan, speech.member, seg.page, time=speech.time,
                    first_speech="1" if speech.first_speech else "0", role=speech.role)
        else:
            holder = _sub(el, "continuation" if seg.holds_floor else "interjection")
            talk_start = _sub(holder, "talk.start")
            _segment_talker(talk_start, plan, speech, seg)
        _sub(talk_start, "para", sentences[0])
        for text in sentences[1:]:
            _sub(holder, "para", text)
        if seg.holds_floor:
            floor = holder
    for tail in speech.tail:
        _sub(floor, "para", tail)


def _render_division(parent, division: DivisionRecord) -> None:
    el = _sub(parent, "division")
    header = _sub(el, "division.header")
    _sub(header, "time.stamp", division.time_stamp)
    _sub(header, "para", "The House divided.")
    data = _sub(el, "division.data")
    for tag, side in (("ayes", "AYES"), ("noes", "NOES"), ("pairs", "PAIRS")):
        names = division.names(side)
        if tag == "pairs" and not names:
            continue
        side_el = _sub(data, tag)
        _sub(side_el, "num.votes", str(len(names)))
        _sub(side_el, "title", side)
        names_el = _sub(side_el, "names")
        for name in names:
            _sub(names_el, "name", name)
    result = _sub(el, "division.result")
    _sub(result, "para", division.result)


def _render_venue(root, plan: DayPlan, venue: VenuePlan, tag: str) -> None:
    venue_el = _sub(root, tag)
    business = _sub(venue_el, "business.start")
    _sub(business, "day.start", plan.sitting_date.isoformat())
    if plan.era.is_modern:
        _sub(_sub(business, "body"), "p", venue.business)
    else:
        _sub(business, "para", venue.business)
    render_speech = _render_modern_speech if plan.era.is_modern else _render_legacy_speech
    for debate in venue.debates:
        debate_el = _sub(venue_el, "debate")
        info = _sub(debate_el, "debateinfo")
        _sub(info, "title", debate.title)
        _sub(info, "page.no", debate.page)
        if debate.repeat_page:
            _sub(info, "page.no", debate.page)
        container = debate_el
        if debate.sub_title:
            container = _sub(debate_el, "subdebate.1")
            sub_info = _sub(container, "subdebateinfo")
            _sub(sub_info, "title", debate.sub_title)
            _sub(sub_info, "page.no", debate.sub_page)
        for speech in debate.speeches:
            render_speech(container, plan, speech)
            if speech.division is not None:
                _render_division(container, speech.division)


def _render_written(root, plan: DayPlan) -> None:
    if not plan.written:
        return
    answers = _sub(root, "answers.to.questions")
    debate = _sub(answers, "debate")
    info = _sub(debate, "debateinfo")
    _sub(info, "title", "QUESTIONS IN WRITING")
    _sub(info, "page.no", plan.written_page)
    for item in plan.written:
        el = _sub(debate, item.tag)
        talk_start = _sub(el, "talk.start")
        _talker(talk_start, plan, item.member, item.page)
        if plan.era.is_modern:
            _sub(_sub(_sub(el, "talk.text"), "body"), "p", item.text)
        else:
            _sub(talk_start, "para", item.text)


def render_xml(plan: DayPlan) -> bytes:
    root = etree.Element("hansard", version="2.2")
    header = _sub(root, "session.header")
    _sub(header, "date", plan.sitting_date.isoformat())
    _sub(header, "parliament.no", str(parliament_no(plan.sitting_date)))
    _sub(header, "session.no", "1")
    _sub(header, "period.no", "1")
    _sub(header, "chamber", "REPS")
    _sub(header, "page.no", str(min(int(d.page) for d in plan.chamber.debates)))
    _sub(header, "proof", "0")
    _render_venue(root, plan, plan.chamber, "chamber.xscript")
    fed_tag = "fedchamb.xscript" if plan.era is SchemaEra.MODERN_FEDCHAMB else "maincomm.xscript"
    if plan.fed is not None:
        _render_venue(root, plan, plan.fed, fed_tag)
    _render_written(root, plan)
    return etree.tostring(root, xml_declaration=True, encoding="UTF-8", pretty_print=True)


# ---------------------------------------------------------------------------
# Expected output


def division_text(division: DivisionRecord) -> str:
    parts = ["The House divided."]
    for side in ("AYES", "NOES", "PAIRS"):
        names = division.names(side)
        if side == "PAIRS" and not names:
            continue
        parts += [side, str(len(names))] + names
    return " ".join(parts + [division.result])


def _identity(member: Optional[RosterMember]) -> dict:
    if member is None:
        return dict(name=None, name_id=None, electorate=None, party=None, gender=None, unique_id=None)
    return dict(name=member.full_name, name_id=member.name_id, electorate=member.electorate,
                party=member.party, gender=member.gender, unique_id=member.unique_id)


def expected_rows(plan: DayPlan) -> List[dict]:
    partyfacts = fixture_partyfacts()
    modern = plan.era.is_modern
    rows: List[dict] = []
    speech_no = 0

    def add(speech_no, name, body, fed, page=None, time=None, ident=None, in_gov=0, first_speech=0,
            question=0, answer=0, q_in_writing=0, interject=0):
        row = dict(name=name, speech_no=speech_no, page_no=page, time_stamp=time, name_id=None, electorate=None,
                   party=None, in_gov=in_gov, first_speech=first_speech, body=body, fedchamb_flag=int(fed),
                   question=question, answer=answer, q_in_writing=q_in_writing, gender=None, unique_id=None,
                   interject=interject, div_flag=int("The House divided." in body))
        row.update(ident or {})
        row["partyfacts_id"] = partyfacts.lookup(row["party"])
        rows.append(row)

    for venue in plan.venues:
        speech_no += 1
        add(speech_no, BUSINESS_START_NAME, venue.business, venue.fed)
        for debate in venue.debates:
            for speech in debate.speeches:
                speech_no += 1
                qa = dict(question=int(speech.tag == "question"), answer=int(speech.tag == "answer"))
                last = len(speech.segments) - 1
                for i, seg in enumerate(speech.segments):
                    body = " ".join(seg.sentences) + (_closing(speech) if i == last else "")
                    if i == last and speech.division is not None and not modern:
                        body += " " + division_text(speech.division)[:-len(speech.division.result) - 1]
                    time = speech.time if seg.role == "opening" else None
                    if seg.role == "general":
                        add(speech_no, seg.surface, body, venue.fed, seg.page, interject=1, **qa)
                    elif seg.role == "presiding":
                        ident = _identity(seg.member) if seg.member else dict(name="The SPEAKER", name_id=SPEAKER_NAME_ID)
                        add(speech_no, ident.pop("name"), body, venue.fed, seg.page, ident=ident, **qa)
                    else:
                        ident = _identity(seg.member)
                        talker = seg.has_talker or not modern
                        in_gov = int(seg.member.in_gov) if talker else 0
                        first = int(speech.first_speech) if seg.holds_floor else 0
                        add(speech_no, ident.pop("name"), body, venue.fed, seg.page, time, ident, in_gov, first,
                            interject=0 if seg.holds_floor else 1, **qa)
                for phrase in speech.tail:
                    add(speech_no, STAGE_DIRECTION_NAME, phrase, venue.fed, speech.segments[-1].page)
                if speech.division is not None and not modern:
                    add(speech_no, STAGE_DIRECTION_NAME, speech.division.result, venue.fed, speech.segments[-1].page)

    for item in plan.written:
        speech_no += 1
        ident = _identity(item.member)
        add(speech_no, ident.pop("name"), item.text, False, item.page, ident=ident,
            in_gov=int(item.member.in_gov), question=int(item.kind == "question"),
            answer=int(item.kind == "answer"), q_in_writing=1)

    for order, row in enumerate(rows, start=1):
        row["order"] = order
    return rows


def expected_table(plan: DayPlan) -> pd.DataFrame:
    frame = pd.DataFrame(expected_rows(plan), columns=list(RECORD_COLUMNS)).rename(columns=RECORD_COLUMNS)
    return coerce_types(frame[DAILY_COLUMNS])


def expected_topics(plan: DayPlan) -> List[DebateTopic]:
    topics = []
    for venue in plan.venues:
        for debate in venue.debates:
            topics.append((debate.title, debate.page))
            if debate.sub_title:
                topics.append((debate.sub_title, debate.sub_page))
    if plan.written:
        topics.append(("QUESTIONS IN WRITING", plan.written_page))
    return [DebateTopic(plan.sitting_date, i, title, page) for i, (title, page) in enumerate(topics, start=1)]


def expected_divisions(plan: DayPlan) -> List[DivisionRecord]:
    return [s.division for d in plan.chamber.debates for s in d.speeches if s.division is not None]


# ---------------------------------------------------------------------------
# Public entry points


@dataclass
class FixtureDay:
    spec: FixtureSpec
    sitting_date: datetime.date
    xml_bytes: bytes
    table: pd.DataFrame
    divisions: List[DivisionRecord]
    topics: List[DebateTopic]
    registry: PoliticianRegistry
    partyfacts: PartyFactsMap
    header_date: datetime.date
    defect: Optional[DefectKind] = None


def generate_fixture(spec: FixtureSpec) -> Tuple[bytes, FixtureDay]:
    plan = plan_day(spec)
    xml_bytes = render_xml(plan)
    day = FixtureDay(
        spec=spec,
        sitting_date=plan.sitting_date,
        xml_bytes=xml_bytes,
        table=expected_table(plan),
        divisions=expected_divisions(plan),
        topics=expected_topics(plan),
        registry=fixture_registry(),
        partyfacts=fixture_partyfacts(),
        header_date=plan.sitting_date,
    )
    logger.debug(f"Generated fixture {spec.label} for {plan.sitting_date}: {len(day.table)} rows")
    return xml_bytes, day


def _speaker_row(table: pd.DataFrame) -> int:
    candidates = table.index[table["uniqueID"].notna()]
    if len(candidates) == 0:
        raise ValueError("fixture day has no attributed speaker")
    return candidates[0]


def inject_defect(day: FixtureDay, kind: DefectKind) -> FixtureDay:
    """Copy of ``day`` carrying exactly one defect of the given kind."""
    table = day.table.copy()
    registry = day.registry
    xml_bytes = day.xml_bytes
    header_date = day.header_date
    body = table.columns.get_loc("body")

    if kind is DefectKind.WRONG_HEADER_DATE:
        header_date = day.sitting_date + datetime.timedelta(days=1)
        root = etree.fromstring(xml_bytes)
        root.find("session.header/date").text = header_date.isoformat()
        xml_bytes = etree.tostring(root, xml_declaration=True, encoding="UTF-8", pretty_print=True)
    elif kind is DefectKind.ADJACENT_DUPLICATE:
        i = _speaker_row(table)
        pos = table.index.get_loc(i)
        table = pd.concat([table.iloc[:pos + 1], table.iloc[pos:]], ignore_index=True)
        table["order"] = pd.array(range(1, len(table) + 1), dtype="Int64")
    elif kind is DefectKind.TIME_EXPIRED_SPLIT_MISS:
        expired = table.index[table["body"].str.endswith("(Time expired)", na=False)]
        i = expired[0] if len(expired) else _speaker_row(table)
        suffix = " Honourable members interjecting—" if len(expired) else " (Time expired) Honourable members interjecting—"
        table.iat[table.index.get_loc(i), body] = table.at[i, "body"] + suffix
    elif kind is DefectKind.MALFORMED_TIMESTAMP:
        i = table.index[table["time.stamp"].notna()][0]
        table.at[i, "time.stamp"] = "13:445:00"
    elif kind is DefectKind.DUAL_PARTY:
        counts = table["uniqueID"].value_counts()
        uid = counts.index[counts >= 2][0]
        i = table.index[table["uniqueID"] == uid][-1]
        table.at[i, "party"] = "GRN" if table.at[i, "party"] != "GRN" else "ALP"
    elif kind is DefectKind.CORRUPTED_NAME_ID:
        i = table.index[table["name.id"].notna() & (table["name.id"] != SPEAKER_NAME_ID)][0]
        name_id = table.at[i, "name.id"]
        table.at[i, "name.id"] = name_id.replace("0", "O", 1) if "0" in name_id else name_id + "O"
    elif kind is DefectKind.DECEASED_SPEAKER:
        uid = table.at[_speaker_row(table), "uniqueID"]
        registry = registry.replace_entry(uid, died=day.sitting_date - datetime.timedelta(days=30))
    elif kind is DefectKind.NON_SERVING_SPEAKER:
        uid = table.at[_speaker_row(table), "uniqueID"]
        politician = registry.by_unique_id(uid)
        old = politician.intervals[0]
        ended = ServiceInterval(old.electorate, old.party, SERVICE_START, day.sitting_date - datetime.timedelta(days=1))
        registry = registry.replace_entry(uid, intervals=(ended,))
    return replace(day, table=table, registry=registry, xml_bytes=xml_bytes, header_date=header_date, defect=kind)


def write_reference_files(out_dir: str, registry: Optional[PoliticianRegistry] = None) -> Tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    politicians_path = os.path.join(out_dir, "politicians.csv")
    partyfacts_path = os.path.join(out_dir, "partyfacts.csv")
    registry_to_frame(registry or fixture_registry()).to_csv(politicians_path, index=False, lineterminator="\n")
    fixture_partyfacts().frame.to_csv(partyfacts_path, index=False, lineterminator="\n")
    return politicians_path, partyfacts_path


def write_fixture(day: FixtureDay, out_dir: str) -> List[str]:
    """XML, reference data, expected table and topics of one day."""
    os.makedirs(out_dir, exist_ok=True)
    xml_path = os.path.join(out_dir, f"{day.sitting_date.isoformat()}.xml")
    with open(xml_path, "wb") as f:
        f.write(day.xml_bytes)
    politicians_path, partyfacts_path = write_reference_files(out_dir, day.registry)
    truth_path = os.path.join(out_dir, f"expected_{day.sitting_date.isoformat()}.csv")
    day.table.to_csv(truth_path, index=False, lineterminator="\n", na_rep="")
    topics_path = os.path.join(out_dir, f"expected_topics_{day.sitting_date.isoformat()}.csv")
    topics_frame(day.topics).to_csv(topics_path, index=False, lineterminator="\n")
    return [xml_path, politicians_path, partyfacts_path, truth_path, topics_path]
