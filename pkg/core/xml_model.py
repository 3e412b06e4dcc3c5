import datetime
import enum
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from lxml import etree

from .errors import MalformedXml, MissingChamber, MissingRoot, UndetectableEra
from .records import SchemaEra, Venue

logger = logging.getLogger(__name__)

FEDCHAMB_START = datetime.date(2012, 8, 14)
MAINCOMM_TALK_TEXT_START = datetime.date(2011, 5, 10)
LEGACY_EARLY_END = datetime.date(1999, 12, 31)
LEGACY_INLINE_END = datetime.date(2011, 3, 24)

HEADER_DATE_FORMATS = ("%Y-%m-%d", "%d/%m/%Y", "%d %B %Y", "%A, %d %B %Y", "%d-%m-%Y", "%Y%m%d")

CHAMBER_TAG = "chamber.xscript"
FEDCHAMB_TAGS = ("fedchamb.xscript", "maincomm.xscript")
ANSWERS_TAG = "answers.to.questions"


class ProceedingKind(enum.Enum):
    BUSINESS_START = "business_start"
    DEBATE = "debate"
    SUBDEBATE1 = "subdebate1"
    SUBDEBATE2 = "subdebate2"
    SPEECH = "speech"
    QUESTION = "question"
    ANSWER = "answer"
    INTERJECTION_SKELETON = "interjection_skeleton"
    CONTINUATION_SKELETON = "continuation_skeleton"
    DIVISION = "division"


KIND_BY_TAG = {
    "business.start": ProceedingKind.BUSINESS_START,
    "debate": ProceedingKind.DEBATE,
    "subdebate.1": ProceedingKind.SUBDEBATE1,
    "subdebate.2": ProceedingKind.SUBDEBATE2,
    "speech": ProceedingKind.SPEECH,
    "question": ProceedingKind.QUESTION,
    "answer": ProceedingKind.ANSWER,
    "interjection": ProceedingKind.INTERJECTION_SKELETON,
    "continuation": ProceedingKind.CONTINUATION_SKELETON,
    "division": ProceedingKind.DIVISION,
}


@dataclass(frozen=True)
class SessionHeader:
    session_date: datetime.date
    parliament_no: str = ""
    chamber_label: str = ""
    other: Dict[str, str] = field(default_factory=dict)


@dataclass
class TranscriptDocument:
    era: Optional[SchemaEra]
    header: Optional[SessionHeader]
    tree: etree._ElementTree
    chamber_root: Optional[etree._Element] = None
    fedchamb_root: Optional[etree._Element] = None
    answers_root: Optional[etree._Element] = None

    @property
    def session_date(self) -> Optional[datetime.date]:
        return self.header.session_date if self.header else None

    def path(self, element: etree._Element) -> str:
        return self.tree.getpath(element)

    def require_chamber(self) -> etree._Element:
        if self.chamber_root is None:
            raise MissingChamber("document has no chamber.xscript element")
        return self.chamber_root


@dataclass(frozen=True)
class ProceedingNode:
    venue: Venue
    kind: ProceedingKind
    path: str
    element: etree._Element
    in_writing: bool = False


def _make_parser() -> etree.XMLParser:
    # No DTDs, no entity expansion, no network.
    return etree.XMLParser(
        resolve_entities=False,
        no_network=True,
        load_dtd=False,
        dtd_validation=False,
        huge_tree=True,
        encoding="utf-8",
    )


def _to_utf8(data: bytes) -> bytes:
    try:
        data.decode("utf-8")
        return data
    except UnicodeDecodeError:
        logger.info("rule=latin1_fallback transcoding document from Latin-1")
        return data.decode("latin-1").encode("utf-8")


def _byte_offset(data: bytes, line: int, column: int) -> int:
    lines = data.split(b"\n")
    offset = sum(len(l) + 1 for l in lines[:max(line - 1, 0)])
    return min(offset + max(column - 1, 0), len(data))


def parse_session_date(text: str) -> datetime.date:
    text = (text or "").strip()
    for fmt in HEADER_DATE_FORMATS:
        try:
            return datetime.datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unrecognised session date {text!r}")


def _read_header(root: etree._Element) -> Optional[SessionHeader]:
    header_el = root.find("session.header")
    if header_el is None:
        return None
    values = {}
    for child in header_el:
        if isinstance(child.tag, str):
            values.setdefault(child.tag, (child.text or "").strip())
    date_text = values.pop("date", "")
    try:
        session_date = parse_session_date(date_text)
    except ValueError:
        logger.warning(f"Session header date {date_text!r} is not a calendar date")
        return None
    return SessionHeader(
        session_date=session_date,
        parliament_no=values.pop("parliament.no", ""),
        chamber_label=values.pop("chamber", ""),
        other=values,
    )


def _era_for_date(day: datetime.date) -> SchemaEra:
    if day >= FEDCHAMB_START:
        return SchemaEra.MODERN_FEDCHAMB
    if day >= MAINCOMM_TALK_TEXT_START:
        return SchemaEra.MODERN_MAINCOMM
    if day > LEGACY_EARLY_END:
        return SchemaEra.LEGACY_INLINE
    return SchemaEra.LEGACY_EARLY


def detect_era(doc, header_date: Optional[datetime.date]) -> SchemaEra:
    root = doc.getroot() if hasattr(doc, "getroot") else doc
    has_fedchamb = root.find("fedchamb.xscript") is not None
    has_maincomm = root.find("maincomm.xscript") is not None
    has_talk_text = next(root.iter("talk.text"), None) is not None
    has_legacy_layout = next(root.iter("talk.start"), None) is not None or root.find(CHAMBER_TAG) is not None

    if header_date is not None and LEGACY_INLINE_END < header_date < MAINCOMM_TALK_TEXT_START:
        logger.warning(f"Sitting date {header_date} falls between the legacy and modern layouts; classifying by structure")

    if has_fedchamb:
        era = SchemaEra.MODERN_FEDCHAMB
    elif has_talk_text:
        if has_maincomm:
            era = SchemaEra.MODERN_MAINCOMM
        elif header_date is not None and header_date < FEDCHAMB_START:
            era = SchemaEra.MODERN_MAINCOMM
        else:
            era = SchemaEra.MODERN_FEDCHAMB
    elif has_legacy_layout:
        if header_date is not None and header_date <= LEGACY_EARLY_END:
            era = SchemaEra.LEGACY_EARLY
        else:
            era = SchemaEra.LEGACY_INLINE
    elif header_date is not None:
        era = _era_for_date(header_date)
    else:
        raise UndetectableEra("no structural marker matched and the session date is unknown")

    if header_date is not None:
        by_date = _era_for_date(header_date)
        if by_date is not era:
            logger.info(f"rule=era_disagreement structure says {era.value}, date {header_date} says {by_date.value}; using structure")
    return era


def parse_document(data: bytes) -> TranscriptDocument:
    if not data or not data.strip():
        raise MalformedXml("empty document", line=1, column=1, offset=0)
    data = _to_utf8(data)
    try:
        root = etree.fromstring(data, parser=_make_parser())
    except etree.XMLSyntaxError as e:
        line, column = e.position if e.position else (None, None)
        offset = _byte_offset(data, line, column) if line is not None else None
        raise MalformedXml(f"document is not well-formed: {e.msg}", line=line, column=column, offset=offset) from e

    if root.tag != "hansard":
        raise MissingRoot(f"root element is <{root.tag}>, expected <hansard>")

    header = _read_header(root)
    tree = root.getroottree()
    try:
        era = detect_era(tree, header.session_date if header else None)
    except UndetectableEra as e:
        logger.warning(f"Schema era left undetermined: {e}")
        era = None

    fedchamb_root = None
    for tag in FEDCHAMB_TAGS:
        fedchamb_root = root.find(tag)
        if fedchamb_root is not None:
            break

    return TranscriptDocument(
        era=era,
        header=header,
        tree=tree,
        chamber_root=root.find(CHAMBER_TAG),
        fedchamb_root=fedchamb_root,
        answers_root=root.find(ANSWERS_TAG),
    )


def enumerate_proceedings(doc: TranscriptDocument) -> List[ProceedingNode]:
    venues = (
        (Venue.CHAMBER, doc.chamber_root, False),
        (Venue.FEDERATION_CHAMBER, doc.fedchamb_root, False),
        (Venue.CHAMBER, doc.answers_root, True),
    )
    nodes = []
    for venue, venue_root, in_writing in venues:
        if venue_root is None:
            continue
        for el in venue_root.iter(*KIND_BY_TAG):
            nodes.append(ProceedingNode(
                venue=venue,
                kind=KIND_BY_TAG[el.tag],
                path=doc.path(el),
                element=el,
                in_writing=in_writing,
            ))
    return nodes
