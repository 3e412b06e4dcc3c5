"""Row types shared by the per-day passes.

A sitting day moves through three shapes: RawStatement (segmenter output),
AttributedStatement (after speaker resolution and flagging) and DebateRecord
(the emitted 20-column row).
"""
import enum
from dataclasses import dataclass, fields
from typing import Optional


class SchemaEra(enum.Enum):
    MODERN_FEDCHAMB = "ModernFedChamb"
    MODERN_MAINCOMM = "ModernMainComm"
    LEGACY_INLINE = "LegacyInline"
    LEGACY_EARLY = "LegacyEarly"

    @property
    def is_modern(self) -> bool:
        return self in (SchemaEra.MODERN_FEDCHAMB, SchemaEra.MODERN_MAINCOMM)


class Venue(enum.Enum):
    CHAMBER = "Chamber"
    FEDERATION_CHAMBER = "FederationChamber"


class StatementKind(enum.Enum):
    OPENING = "opening"
    CONTINUATION = "continuation"
    INTERJECTION_CANDIDATE = "interjection_candidate"
    STAGE_DIRECTION = "stage_direction"
    BUSINESS_START = "business_start"


STAGE_DIRECTION_NAME = "stage direction"
BUSINESS_START_NAME = "business start"


@dataclass
class ParseIssue:
    kind: str
    detail: str
    path: Optional[str] = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}" + (f" [{self.path}]" if self.path else "")


@dataclass(frozen=True)
class TalkerFields:
    time: Optional[str] = None
    page_no: Optional[str] = None
    name: Optional[str] = None
    display_name: Optional[str] = None
    name_id: Optional[str] = None
    electorate: Optional[str] = None
    party: Optional[str] = None
    role: Optional[str] = None
    in_gov: Optional[str] = None
    first_speech: Optional[str] = None


@dataclass(frozen=True)
class TalkerPattern:
    raw_pattern: str
    fields: TalkerFields
    # speech, question, answer, interjection or continuation
    context: str
    venue: Venue
    # "question" / "answer" when the talk.start sits inside one of those nodes
    qa: Optional[str] = None
    in_writing: bool = False
    path: Optional[str] = None


@dataclass
class RawStatement:
    speech_no: int
    seq_in_speech: int
    surface_name: str
    body: str
    time_stamp: Optional[str]
    page_no: Optional[str]
    kind: StatementKind
    venue: Venue = Venue.CHAMBER
    source_path: Optional[str] = None
    talker: Optional[TalkerFields] = None
    pattern_index: Optional[int] = None
    qa_context: Optional[str] = None
    q_in_writing: int = 0
    order: int = 0


@dataclass
class AttributedStatement:
    raw: RawStatement
    name: Optional[str] = None
    name_id: Optional[str] = None
    electorate: Optional[str] = None
    party: Optional[str] = None
    gender: Optional[str] = None
    unique_id: Optional[str] = None
    in_gov: int = 0
    first_speech: int = 0
    question: int = 0
    answer: int = 0
    interject: int = 0
    div_flag: int = 0
    partyfacts_id: Optional[int] = None
    presiding: bool = False
    general: bool = False

    @property
    def body(self) -> str:
        return self.raw.body

    @property
    def speech_no(self) -> int:
        return self.raw.speech_no

    @property
    def is_procedural(self) -> bool:
        return self.raw.kind in (StatementKind.STAGE_DIRECTION, StatementKind.BUSINESS_START)

    def to_record(self) -> "DebateRecord":
        raw = self.raw
        return DebateRecord(
            name=self.name,
            order=raw.order,
            speech_no=raw.speech_no,
            page_no=raw.page_no,
            time_stamp=raw.time_stamp,
            name_id=self.name_id,
            electorate=self.electorate,
            party=self.party,
            in_gov=self.in_gov,
            first_speech=self.first_speech,
            body=raw.body,
            fedchamb_flag=1 if raw.venue is Venue.FEDERATION_CHAMBER else 0,
            question=self.question,
            answer=self.answer,
            q_in_writing=raw.q_in_writing,
            gender=self.gender,
            unique_id=self.unique_id,
            interject=self.interject,
            div_flag=self.div_flag,
            partyfacts_id=self.partyfacts_id,
        )


@dataclass
class DebateRecord:
    name: Optional[str]
    order: int
    speech_no: int
    page_no: Optional[str]
    time_stamp: Optional[str]
    name_id: Optional[str]
    electorate: Optional[str]
    party: Optional[str]
    in_gov: int
    first_speech: int
    body: str
    fedchamb_flag: int
    question: int
    answer: int
    q_in_writing: int
    gender: Optional[str]
    unique_id: Optional[str]
    interject: int
    div_flag: int
    partyfacts_id: Optional[int] = None


# attribute name -> emitted column name, in emitted order
RECORD_COLUMNS = {
    "name": "name",
    "order": "order",
    "speech_no": "speech_no",
    "page_no": "page.no",
    "time_stamp": "time.stamp",
    "name_id": "name.id",
    "electorate": "electorate",
    "party": "party",
    "in_gov": "in.gov",
    "first_speech": "first.speech",
    "body": "body",
    "fedchamb_flag": "fedchamb_flag",
    "question": "question",
    "answer": "answer",
    "q_in_writing": "q_in_writing",
    "gender": "gender",
    "unique_id": "uniqueID",
    "interject": "interject",
    "div_flag": "div_flag",
    "partyfacts_id": "partyfacts_id",
}

assert [f.name for f in fields(DebateRecord)] == list(RECORD_COLUMNS)
