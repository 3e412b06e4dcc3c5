import logging
import re
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from lxml import etree

from .ingest import PoliticianRegistry
from .records import (
    BUSINESS_START_NAME, STAGE_DIRECTION_NAME, ParseIssue, RawStatement, SchemaEra,
    StatementKind, TalkerFields, TalkerPattern, Venue,
)
from .xml_model import FEDCHAMB_TAGS, ProceedingKind, TranscriptDocument, enumerate_proceedings

logger = logging.getLogger(__name__)

TALKER_FIELD_BY_TAG = {
    "time.stamp": "time",
    "page.no": "page_no",
    "name.id": "name_id",
    "electorate": "electorate",
    "party": "party",
    "role": "role",
    "in.gov": "in_gov",
    "first.speech": "first_speech",
}
SPEECH_TAGS = ("speech", "question", "answer")
OPENING_CONTEXTS = ("speech", "question", "answer")

TITLES_BY_GENDER = {
    "male": ("Mr", "Dr"),
    "female": ("Ms", "Mrs", "Miss", "Dr"),
}
ALL_TITLES = ("Mr", "Mrs", "Ms", "Miss", "Dr")

GENERAL_INTERJECTIONS = (
    "Honourable members",
    "An honourable member",
    "Opposition members",
    "An opposition member",
    "Government members",
    "A government member",
    "Members of the opposition",
    "Government member",
    "Opposition member",
)

PRESIDING_PATTERN = r"(?i:(?:the|mr|madam)\s+(?:acting\s+)?(?:deputy\s+)?speaker)(?:\s*\([^()]*\))?"
_PRESIDING_RE = re.compile(r"^" + PRESIDING_PATTERN + r"$")
# A statement starts at the beginning of the text, at a paragraph break or right
# after sentence punctuation, a closing parenthesis or a dash.
_BOUNDARY = r"(?:^|(?<=[.!?)—\-\n]))\s*"
_TAIL = r"(?P<paren>(?:\s*\([^()]*\))*)(?=\s*:|\s+interjecting)"
_GENERIC_NAME = r"(?:Mr|Mrs|Ms|Miss|Dr)\s+(?:[A-Z][a-z]+\s+)*(?:Ma?c)?[A-Z][A-Z'\-]+(?:\s+[A-Z][A-Z'\-]+)*"
_GENERIC_RE = re.compile(_BOUNDARY + r"(?P<name>" + _GENERIC_NAME + r")" + _TAIL)
_PARENTHETICAL_RE = re.compile(r"\s*\([^()]*\)")


def normalize_text(text: Optional[str]) -> str:
    text = (text or "").replace(" ", " ").replace("---", "—").replace("--", "—")
    return re.sub(r"\s+", " ", text).strip()


def is_presiding(surface: Optional[str]) -> bool:
    return bool(surface) and _PRESIDING_RE.match(surface.strip()) is not None


def surface_key(surface: Optional[str]) -> str:
    return normalize_text(_PARENTHETICAL_RE.sub("", surface or "")).casefold()


def capitalise_surname(surname: str) -> str:
    """Hansard capitals keep a Mc/Mac prefix as written: McCormack -> McCORMACK."""
    m = re.match(r"^(Ma?c)(?=[A-Z])", surname)
    if m:
        return m.group(1) + surname[m.end():].upper()
    return surname.upper()


# ---------------------------------------------------------------------------
# Talker patterns


class TalkerPatterns(NamedTuple):
    all: List[TalkerPattern]
    questions: List[TalkerPattern]
    answers: List[TalkerPattern]


def read_talker(talker: etree._Element) -> TalkerFields:
    values: Dict[str, str] = {}
    for child in talker:
        if not isinstance(child.tag, str):
            continue
        text = normalize_text("".join(child.itertext()))
        if not text:
            continue
        if child.tag == "name":
            key = "display_name" if child.get("role") == "display" else "name"
        else:
            key = TALKER_FIELD_BY_TAG.get(child.tag)
        if key and key not in values:
            values[key] = text
    return TalkerFields(**values)


def raw_talker_pattern(talker: etree._Element) -> str:
    return "".join(normalize_text("".join(c.itertext())) for c in talker if isinstance(c.tag, str))


def fix_early_talker(fields: TalkerFields) -> TalkerFields:
    """Transcription fixes for 1998-1999 talker blocks."""
    display = fields.display_name
    if display:
        fixed = re.sub(r"^(Mr|Mrs|Ms|Dr)\.\s", r"\1 ", display).rstrip(".:;,")
        if fixed != display:
            logger.info(f"rule=early_display_punctuation {display!r} -> {fixed!r}")
            return replace(fields, display_name=fixed)
    return fields


def _venue_of(el: etree._Element) -> Venue:
    for ancestor in el.iterancestors():
        if ancestor.tag in FEDCHAMB_TAGS:
            return Venue.FEDERATION_CHAMBER
    return Venue.CHAMBER


def talker_pattern(talk_start: etree._Element, doc: TranscriptDocument,
                   issues: Optional[List[ParseIssue]] = None) -> Optional[TalkerPattern]:
    path = doc.path(talk_start)
    talker = talk_start.find("talker")
    raw = raw_talker_pattern(talker) if talker is not None else ""
    if not raw:
        issue = ParseIssue("EmptyTalker", "talk.start without talker content", path)
        logger.warning(str(issue))
        if issues is not None:
            issues.append(issue)
        return None
    fields = read_talker(talker)
    if doc.era is SchemaEra.LEGACY_EARLY:
        fields = fix_early_talker(fields)

    parent = talk_start.getparent()
    context = parent.tag if parent is not None else "speech"
    qa = None
    in_writing = False
    for ancestor in talk_start.iterancestors():
        if qa is None and ancestor.tag in ("question", "answer"):
            qa = ancestor.tag
        if ancestor.tag == "answers.to.questions":
            in_writing = True
    return TalkerPattern(
        raw_pattern=raw, fields=fields, context=context, venue=_venue_of(talk_start),
        qa=qa, in_writing=in_writing, path=path,
    )


def extract_talker_patterns(doc: TranscriptDocument, issues: Optional[List[ParseIssue]] = None) -> TalkerPatterns:
    patterns = []
    for talk_start in doc.tree.getroot().iter("talk.start"):
        pattern = talker_pattern(talk_start, doc, issues)
        if pattern is not None:
            patterns.append(pattern)
    return TalkerPatterns(
        all=patterns,
        questions=[p for p in patterns if p.qa == "question"],
        answers=[p for p in patterns if p.qa == "answer"],
    )


# ---------------------------------------------------------------------------
# Name variants


@dataclass(frozen=True)
class NameVariantLexicon:
    variants: Mapping[str, str]
    general_interjections: Tuple[str, ...] = GENERAL_INTERJECTIONS

    @cached_property
    def pattern(self) -> re.Pattern:
        # Longest first so initial-only forms never shadow full names.
        names = sorted(set(self.variants) | set(self.general_interjections), key=lambda s: (-len(s), s))
        alternatives = [PRESIDING_PATTERN] + [re.escape(n) for n in names]
        return re.compile(_BOUNDARY + r"(?P<name>" + "|".join(alternatives) + r")" + _TAIL)

    def is_general(self, surface: str) -> bool:
        return surface in self.general_interjections


def given_name_forms(first_names: Sequence[str], common_name: Optional[str]) -> List[str]:
    forms = []
    firsts = [n for n in first_names if n]
    if common_name:
        forms.append(common_name)
    if firsts:
        forms.extend([firsts[0], firsts[0][0], firsts[0][0] + "."])
        if len(firsts) > 1:
            forms.append(" ".join(firsts))
            forms.append("".join(n[0] for n in firsts))
            forms.append(" ".join(n[0] + "." for n in firsts))
    seen = []
    for f in forms:
        if f not in seen:
            seen.append(f)
    return seen


def politician_variants(surname: str, first_names: Sequence[str], gender: str,
                        common_name: Optional[str] = None) -> List[str]:
    titles = TITLES_BY_GENDER.get((gender or "").lower(), ALL_TITLES)
    caps = capitalise_surname(surname)
    variants = []
    for title in titles:
        variants.extend([f"{title} {surname}", f"{title} {caps}"])
        for given in given_name_forms(first_names, common_name):
            variants.extend([
                f"{title} {given} {surname}",
                f"{title} {given} {caps}",
                f"{title} {given.upper()} {caps}",
            ])
    return list(dict.fromkeys(variants))


def build_name_variant_lexicon(registry: Optional[PoliticianRegistry], day_attendees: Iterable[str],
                               general_interjections: Sequence[str] = GENERAL_INTERJECTIONS) -> NameVariantLexicon:
    attendees = {a for a in day_attendees if a}
    variants: Dict[str, str] = {}
    matched = set()
    if registry is not None and attendees:
        for p in registry:
            if p.full_name in attendees or p.name_id in attendees or p.unique_id in attendees:
                matched.update((p.full_name, p.name_id, p.unique_id))
                for v in politician_variants(p.surname, p.first_names, p.gender, p.common_name):
                    variants.setdefault(v, p.unique_id)
    # Display names straight from talker blocks ("Mr BRENNAN", "The SPEAKER").
    for raw in sorted(attendees - matched):
        if raw[:1].isalpha() and "," not in raw and not is_presiding(raw):
            variants.setdefault(raw, raw)
    return NameVariantLexicon(variants=variants, general_interjections=tuple(general_interjections))


# ---------------------------------------------------------------------------
# Splitting


class _Split(NamedTuple):
    name_start: int
    surface: str
    body_start: int


def _split_from_match(text: str, m: re.Match) -> _Split:
    after = m.end("paren")
    rest = text[after:]
    stripped = rest.lstrip()
    if stripped.startswith(":"):
        body_start = after + (len(rest) - len(stripped)) + 1
    else:
        # "<name> interjecting" keeps the name in the body
        body_start = m.start("name")
    return _Split(m.start("name"), normalize_text(m.group("name")), body_start)


def find_statement_splits(text: str, lexicon: NameVariantLexicon) -> List[_Split]:
    splits = [_split_from_match(text, m) for m in lexicon.pattern.finditer(text)]
    taken = [(s.name_start, s.body_start) for s in splits]
    for m in _GENERIC_RE.finditer(text):
        start = m.start("name")
        if any(lo <= start < max(hi, lo + 1) for lo, hi in taken) or any(s.name_start == start for s in splits):
            continue
        split = _split_from_match(text, m)
        logger.info(f"rule=residual_name_split {split.surface!r}")
        splits.append(split)
    splits.sort(key=lambda s: s.name_start)
    return splits


def split_modern_speech(talk_text: str, lexicon: NameVariantLexicon, skeleton: Sequence[TalkerFields],
                        opening: Optional[TalkerFields] = None, speech_no: int = 1,
                        venue: Venue = Venue.CHAMBER, source_path: Optional[str] = None,
                        qa_context: Optional[str] = None) -> List[RawStatement]:
    # Paragraph breaks survive as newlines so a name opening a paragraph still splits.
    text = "\n".join(filter(None, (normalize_text(line) for line in (talk_text or "").split("\n"))))
    if not text:
        return []
    splits = find_statement_splits(text, lexicon)
    opening_surface = (opening.display_name or opening.name or "") if opening else ""

    fragments: List[Tuple[str, str]] = []
    first_start = splits[0].name_start if splits else len(text)
    leading = normalize_text(text[:first_start])
    if leading:
        fragments.append((opening_surface, leading))
    for i, split in enumerate(splits):
        end = splits[i + 1].name_start if i + 1 < len(splits) else len(text)
        body = normalize_text(text[split.body_start:end])
        if body:
            fragments.append((split.surface, body))

    statements = []
    cursor = 0
    last_page = opening.page_no if opening else None
    opening_key = surface_key(opening_surface)
    for seq, (surface, body) in enumerate(fragments):
        if seq == 0:
            talker = opening
            kind = StatementKind.OPENING
            if not opening_key:
                opening_key = surface_key(surface)
        else:
            talker = None
            if cursor < len(skeleton) and surface_key(skeleton[cursor].display_name) == surface_key(surface):
                talker = skeleton[cursor]
                cursor += 1
            if surface_key(surface) == opening_key:
                kind = StatementKind.CONTINUATION
            else:
                kind = StatementKind.INTERJECTION_CANDIDATE
        page = (talker.page_no if talker and talker.page_no else None) or last_page
        last_page = page
        statements.append(RawStatement(
            speech_no=speech_no,
            seq_in_speech=seq,
            surface_name=surface or opening_surface,
            body=body,
            time_stamp=talker.time if talker else None,
            page_no=page,
            kind=kind,
            venue=venue,
            source_path=source_path,
            talker=talker,
            qa_context=qa_context,
        ))
    return statements


LegacyAnchor = Union[TalkerPattern, str]


class LegacyDebate(NamedTuple):
    text: str
    anchors: List[LegacyAnchor]


def division_text_chunks(division: etree._Element) -> List[str]:
    chunks = []
    for para in division.iterfind("division.header/para"):
        chunks.append(normalize_text("".join(para.itertext())))
    data = division.find("division.data")
    if data is not None:
        for side in data:
            if not isinstance(side.tag, str):
                continue
            for tag in ("title", "num.votes"):
                value = side.findtext(tag)
                if value and value.strip():
                    chunks.append(normalize_text(value))
            chunks.extend(normalize_text("".join(n.itertext())) for n in side.iter("name"))
    for para in division.iterfind("division.result/para"):
        chunks.append(normalize_text("".join(para.itertext())))
    return [c for c in chunks if c]


def build_legacy_debate(unit: etree._Element, doc: TranscriptDocument,
                        patterns_by_path: Mapping[str, TalkerPattern]) -> LegacyDebate:
    chunks: List[str] = []
    anchors: List[LegacyAnchor] = []

    def walk(el):
        for child in el:
            if not isinstance(child.tag, str):
                continue
            tag = child.tag
            if tag in ("debateinfo", "subdebateinfo"):
                chunk = "".join(normalize_text("".join(c.itertext())) for c in child if isinstance(c.tag, str))
                if chunk:
                    chunks.append(chunk)
                    anchors.append(chunk)
            elif tag == "talk.start":
                pattern = patterns_by_path.get(doc.path(child))
                if pattern is not None:
                    chunks.append(normalize_text(pattern.raw_pattern))
                    anchors.append(pattern)
                walk_children_except_talker(child)
            elif tag == "division":
                chunks.extend(division_text_chunks(child))
            elif tag in ("para", "p") or len(child) == 0:
                text = normalize_text("".join(child.itertext()))
                if text:
                    chunks.append(text)
            else:
                walk(child)

    def walk_children_except_talker(talk_start):
        for child in talk_start:
            if isinstance(child.tag, str) and child.tag != "talker":
                text = normalize_text("".join(child.itertext()))
                if text:
                    chunks.append(text)

    walk(unit)
    return LegacyDebate(" ".join(chunks), anchors)


def split_legacy_debate(debate_text: str, patterns: Sequence[LegacyAnchor], lexicon: NameVariantLexicon,
                        first_speech_no: int = 1, venue: Venue = Venue.CHAMBER,
                        pattern_indices: Optional[Mapping[str, int]] = None,
                        issues: Optional[List[ParseIssue]] = None) -> List[RawStatement]:
    """Split a legacy debate string at its inline talker patterns.

    ``patterns`` lists the anchors in document order; plain strings are
    non-speech inline data (debate and sub-debate titles) that are cut out
    of the text without starting a statement.
    """
    text = normalize_text(debate_text)
    located: List[Tuple[int, int, LegacyAnchor]] = []
    cursor = 0
    for anchor in patterns:
        needle = normalize_text(anchor if isinstance(anchor, str) else anchor.raw_pattern)
        pos = text.find(needle, cursor) if needle else -1
        if pos < 0:
            if isinstance(anchor, TalkerPattern):
                issue = ParseIssue("PatternNotFound", f"talker pattern {needle[:60]!r} not found inline", anchor.path)
                logger.warning(str(issue))
                if issues is not None:
                    issues.append(issue)
            continue
        located.append((pos, pos + len(needle), anchor))
        cursor = pos + len(needle)

    statements: List[RawStatement] = []
    speech_no = first_speech_no - 1
    segments = []
    prev_end, prev_anchor = 0, None
    for start, end, anchor in located:
        segments.append((prev_anchor, text[prev_end:start]))
        prev_end, prev_anchor = end, anchor
    segments.append((prev_anchor, text[prev_end:]))

    opening_key = ""
    opening_page = None
    for anchor, segment in segments:
        body = normalize_text(segment)
        if not isinstance(anchor, TalkerPattern):
            if body:
                if not statements:
                    speech_no += 1
                logger.info(f"rule=legacy_residue {body[:60]!r}")
                statements.append(RawStatement(
                    speech_no=speech_no, seq_in_speech=0, surface_name=STAGE_DIRECTION_NAME, body=body,
                    time_stamp=None, page_no=opening_page, kind=StatementKind.STAGE_DIRECTION, venue=venue,
                ))
            continue

        fields = anchor.fields
        surface = fields.display_name or fields.name or ""
        if anchor.context in OPENING_CONTEXTS:
            speech_no += 1
            kind = StatementKind.OPENING
            opening_key = surface_key(surface)
            opening_page = fields.page_no
            seq = 0
        else:
            kind = StatementKind.CONTINUATION if surface_key(surface) == opening_key else StatementKind.INTERJECTION_CANDIDATE
            seq = statements[-1].seq_in_speech + 1 if statements else 0
        index = pattern_indices.get(anchor.path) if pattern_indices else None
        page = fields.page_no or opening_page
        base = RawStatement(
            speech_no=speech_no, seq_in_speech=seq, surface_name=surface, body=body,
            time_stamp=fields.time, page_no=page, kind=kind, venue=venue,
            source_path=anchor.path, talker=fields, pattern_index=index, qa_context=anchor.qa,
        )
        if not body:
            continue

        # statements that were never given their own node
        splits = [s for s in find_statement_splits(body, lexicon) if s.name_start > 0]
        if not splits:
            statements.append(base)
            continue
        statements.append(replace(base, body=body[:splits[0].name_start].strip()))
        for i, split in enumerate(splits):
            end = splits[i + 1].name_start if i + 1 < len(splits) else len(body)
            part = body[split.body_start:end].strip()
            if not part:
                continue
            logger.info(f"rule=legacy_manual_split {split.surface!r}")
            sub_kind = (StatementKind.CONTINUATION if surface_key(split.surface) == opening_key
                        else StatementKind.INTERJECTION_CANDIDATE)
            statements.append(replace(
                base, seq_in_speech=statements[-1].seq_in_speech + 1, surface_name=split.surface, body=part,
                time_stamp=None, kind=sub_kind, talker=None,
            ))
    return statements


# ---------------------------------------------------------------------------
# Stage directions and business start


@dataclass(frozen=True)
class StageDirectionLexicon:
    phrases: Tuple[str, ...]

    @classmethod
    def from_phrases(cls, phrases: Iterable[str]) -> "StageDirectionLexicon":
        cleaned = {normalize_text(p) for p in phrases if normalize_text(p)}
        return cls(tuple(sorted(cleaned, key=lambda p: (-len(p), p))))


def load_stage_directions(path: str) -> StageDirectionLexicon:
    with open(path, encoding="utf-8") as f:
        lines = [line.rstrip("\n") for line in f]
    return StageDirectionLexicon.from_phrases(l for l in lines if l.strip() and not l.lstrip().startswith("#"))


def _peel_stage_directions(body: str, lexicon: StageDirectionLexicon) -> Tuple[List[str], str, List[str]]:
    """Lexicon phrases at either end of ``body``: (leading, rest, trailing).

    Only full sentences ending in a period are taken from the start.
    """
    trailing: List[str] = []
    while body:
        for phrase in lexicon.phrases:
            if body.endswith(phrase):
                cut = len(body) - len(phrase)
                if cut == 0 or body[cut - 1] in (" ", "—"):
                    trailing.insert(0, phrase)
                    body = body[:cut].rstrip()
                    break
        else:
            break
    leading: List[str] = []
    while body:
        for phrase in lexicon.phrases:
            if phrase.endswith(".") and body.startswith(phrase) and body[len(phrase):len(phrase) + 1] in ("", " "):
                leading.append(phrase)
                body = body[len(phrase):].lstrip()
                break
        else:
            break
    return leading, body, trailing


def _stage_direction_row(st: RawStatement, phrase: str) -> RawStatement:
    return RawStatement(
        speech_no=st.speech_no,
        seq_in_speech=st.seq_in_speech,
        surface_name=STAGE_DIRECTION_NAME,
        body=phrase,
        time_stamp=None,
        page_no=st.page_no,
        kind=StatementKind.STAGE_DIRECTION,
        venue=st.venue,
        source_path=st.source_path,
    )


def separate_stage_directions(statements: Sequence[RawStatement], lexicon: StageDirectionLexicon) -> List[RawStatement]:
    result = []
    for st in statements:
        if st.kind in (StatementKind.STAGE_DIRECTION, StatementKind.BUSINESS_START):
            result.append(st)
            continue
        leading, body, trailing = _peel_stage_directions(st.body, lexicon)
        if not leading and not trailing:
            result.append(st)
            continue
        logger.info(f"rule=stage_direction_split speech_no={st.speech_no} {leading + trailing}")
        result.extend(_stage_direction_row(st, phrase) for phrase in leading)
        if body:
            result.append(replace(st, body=body))
        result.extend(_stage_direction_row(st, phrase) for phrase in trailing)
    return result


def business_start_statement(el: etree._Element, speech_no: int, venue: Venue,
                             path: Optional[str] = None) -> Optional[RawStatement]:
    parts = [normalize_text("".join(p.itertext())) for p in el.iter("p", "para")]
    body = " ".join(p for p in parts if p)
    if not body:
        return None
    return RawStatement(
        speech_no=speech_no, seq_in_speech=0, surface_name=BUSINESS_START_NAME, body=body,
        time_stamp=None, page_no=None, kind=StatementKind.BUSINESS_START, venue=venue, source_path=path,
    )


def assign_order(statements: Sequence[RawStatement]) -> List[RawStatement]:
    ordered = [s for s in statements if not s.q_in_writing] + [s for s in statements if s.q_in_writing]
    return [replace(s, order=i) for i, s in enumerate(ordered, start=1)]


# ---------------------------------------------------------------------------
# Whole day


def modern_speech_text(el: etree._Element) -> str:
    talk_text = el.find("talk.text")
    if talk_text is None:
        return ""
    paragraphs = [normalize_text("".join(p.itertext())) for p in talk_text.iter("p", "para")]
    if not paragraphs:
        paragraphs = [normalize_text("".join(talk_text.itertext()))]
    return "\n".join(p for p in paragraphs if p)


def speech_skeleton(el: etree._Element) -> List[TalkerFields]:
    return [read_talker(t) for t in el.xpath("(interjection|continuation)/talk.start/talker")]


def _segment_modern(doc: TranscriptDocument, lexicon: NameVariantLexicon,
                    issues: List[ParseIssue]) -> List[RawStatement]:
    statements: List[RawStatement] = []
    speech_no = 0
    for node in enumerate_proceedings(doc):
        if node.in_writing:
            continue
        if node.kind is ProceedingKind.BUSINESS_START:
            row = business_start_statement(node.element, speech_no + 1, node.venue, node.path)
            if row is not None:
                speech_no += 1
                statements.append(row)
        elif node.kind in (ProceedingKind.SPEECH, ProceedingKind.QUESTION, ProceedingKind.ANSWER):
            el = node.element
            if el.find("talk.text") is None:
                issues.append(ParseIssue("MissingTalkText", f"<{el.tag}> without talk.text", node.path))
                continue
            talker_el = el.find("talk.start/talker")
            opening = read_talker(talker_el) if talker_el is not None else None
            rows = split_modern_speech(
                modern_speech_text(el), lexicon, speech_skeleton(el), opening=opening,
                speech_no=speech_no + 1, venue=node.venue, source_path=node.path,
                qa_context=el.tag if el.tag in ("question", "answer") else None,
            )
            if rows:
                speech_no += 1
                statements.extend(rows)
    return statements


def _segment_legacy(doc: TranscriptDocument, lexicon: NameVariantLexicon, patterns: TalkerPatterns,
                    issues: List[ParseIssue]) -> List[RawStatement]:
    by_path = {p.path: p for p in patterns.all}
    indices = {p.path: i for i, p in enumerate(patterns.all)}
    statements: List[RawStatement] = []
    speech_no = 0
    for venue, root in ((Venue.CHAMBER, doc.chamber_root), (Venue.FEDERATION_CHAMBER, doc.fedchamb_root)):
        if root is None:
            continue
        for unit in root:
            if not isinstance(unit.tag, str):
                continue
            if unit.tag == "business.start":
                row = business_start_statement(unit, speech_no + 1, venue, doc.path(unit))
                if row is not None:
                    speech_no += 1
                    statements.append(row)
                continue
            debate = build_legacy_debate(unit, doc, by_path)
            rows = split_legacy_debate(
                debate.text, debate.anchors, lexicon, first_speech_no=speech_no + 1, venue=venue,
                pattern_indices=indices, issues=issues,
            )
            if rows:
                speech_no = max(speech_no, max(r.speech_no for r in rows))
                statements.extend(rows)
    return statements


def segment_day(doc: TranscriptDocument, lexicon: NameVariantLexicon, stage_lexicon: StageDirectionLexicon,
                patterns: Optional[TalkerPatterns] = None,
                issues: Optional[List[ParseIssue]] = None) -> List[RawStatement]:
    """Chamber then Federation Chamber statements, stage directions split out.

    Questions in writing are not included; they are appended by the
    question_time pass before ``assign_order``.
    """
    issues = issues if issues is not None else []
    doc.require_chamber()
    if doc.era is None:
        from .errors import UndetectableEra
        raise UndetectableEra("cannot segment a document without a schema era")
    if doc.era.is_modern:
        statements = _segment_modern(doc, lexicon, issues)
    else:
        patterns = patterns or extract_talker_patterns(doc, issues)
        statements = _segment_legacy(doc, lexicon, patterns, issues)
    return separate_stage_directions(statements, stage_lexicon)
