import logging
import re
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .records import AttributedStatement, ParseIssue, RawStatement, StatementKind, Venue
from .segmenter import (
    NameVariantLexicon, StageDirectionLexicon, TalkerPatterns, modern_speech_text, normalize_text,
    read_talker, separate_stage_directions, speech_skeleton, split_modern_speech,
)
from .xml_model import ProceedingKind, TranscriptDocument, enumerate_proceedings

logger = logging.getLogger(__name__)

QUESTION_TO_ANSWER = "Q->A"
ANSWER_TO_QUESTION = "A->Q"
_DIRECTION_RE = re.compile(r"^\s*(Q|A)\s*(?:->|→)\s*(Q|A)\s+(.+?)\s*$")


@dataclass(frozen=True)
class QAHeuristic:
    direction: str
    phrase: str


def parse_qa_heuristics(lines: Iterable[str]) -> List[QAHeuristic]:
    heuristics = []
    for line in lines:
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _DIRECTION_RE.match(line)
        if not m or m.group(1) == m.group(2):
            logger.warning(f"Ignoring Q/A heuristic line without a Q->A or A->Q marker: {line.strip()!r}")
            continue
        heuristics.append(QAHeuristic(f"{m.group(1)}->{m.group(2)}", normalize_text(m.group(3))))
    return heuristics


def load_qa_heuristics(path: str) -> List[QAHeuristic]:
    with open(path, encoding="utf-8") as f:
        return parse_qa_heuristics(f)


def _qa_flags(rec: AttributedStatement, kind: Optional[str]) -> AttributedStatement:
    return replace(rec, question=int(kind == "question"), answer=int(kind == "answer"))


def _match_back_index(doc: TranscriptDocument, lexicon: NameVariantLexicon,
                      stage_lexicon: StageDirectionLexicon) -> Dict[str, List[Tuple[str, str]]]:
    """body -> [(question|answer, node path)] for every Q/A node of the day."""
    index: Dict[str, List[Tuple[str, str]]] = {}
    for node in enumerate_proceedings(doc):
        if node.in_writing or node.kind not in (ProceedingKind.QUESTION, ProceedingKind.ANSWER):
            continue
        talker_el = node.element.find("talk.start/talker")
        rows = split_modern_speech(
            modern_speech_text(node.element), lexicon, speech_skeleton(node.element),
            opening=read_talker(talker_el) if talker_el is not None else None, source_path=node.path,
        )
        for row in separate_stage_directions(rows, stage_lexicon):
            if row.kind is not StatementKind.STAGE_DIRECTION:
                index.setdefault(row.body, []).append((node.element.tag, node.path))
    return index


def flag_questions_answers(doc: TranscriptDocument, day_records: Sequence[AttributedStatement],
                           lexicon: Optional[NameVariantLexicon] = None,
                           stage_lexicon: Optional[StageDirectionLexicon] = None,
                           patterns: Optional[TalkerPatterns] = None,
                           issues: Optional[List[ParseIssue]] = None) -> List[AttributedStatement]:
    modern = doc.era is not None and doc.era.is_modern
    index = _match_back_index(doc, lexicon, stage_lexicon or StageDirectionLexicon(())) if modern and lexicon else {}
    question_paths = {p.path for p in patterns.questions} if patterns else set()
    answer_paths = {p.path for p in patterns.answers} if patterns else set()

    flagged = []
    for rec in day_records:
        raw = rec.raw
        if rec.is_procedural:
            flagged.append(_qa_flags(rec, None))
        elif raw.q_in_writing:
            flagged.append(_qa_flags(rec, raw.qa_context))
        elif not modern:
            if raw.source_path in question_paths:
                kind = "question"
            elif raw.source_path in answer_paths:
                kind = "answer"
            else:
                kind = raw.qa_context if patterns is None else None
            flagged.append(_qa_flags(rec, kind))
        else:
            candidates = index.get(raw.body, [])
            kinds = {k for k, _ in candidates}
            if raw.source_path is not None:
                # equal text elsewhere in the day does not make a row a question
                same_node = [k for k, path in candidates if path == raw.source_path]
                kind = same_node[0] if same_node else None
            else:
                kind = candidates[0][0] if candidates else None
            if len(kinds) > 1:
                issue = ParseIssue("AmbiguousMatch", f"body of row in speech {raw.speech_no} matches both a question and an answer; using {kind}", raw.source_path)
                logger.warning(str(issue))
                if issues is not None:
                    issues.append(issue)
            flagged.append(_qa_flags(rec, kind))
    return flagged


def _in_writing_body(el) -> str:
    parts = [normalize_text("".join(p.itertext())) for p in el.iter("p", "para")]
    return " ".join(p for p in parts if p)


def extract_questions_in_writing(doc: TranscriptDocument, first_speech_no: int = 1) -> List[RawStatement]:
    """Questions and answers in writing, in document order, one speech each."""
    root = doc.answers_root
    if root is None:
        return []
    statements = []
    speech_no = first_speech_no
    for el in root.iter("question", "answer"):
        body = _in_writing_body(el)
        if not body:
            continue
        talker_el = el.find("talk.start/talker")
        talker = read_talker(talker_el) if talker_el is not None else None
        surface = (talker.display_name or talker.name or "") if talker else ""
        statements.append(RawStatement(
            speech_no=speech_no,
            seq_in_speech=0,
            surface_name=surface,
            body=body,
            time_stamp=talker.time if talker else None,
            page_no=talker.page_no if talker else None,
            kind=StatementKind.OPENING,
            venue=Venue.CHAMBER,
            source_path=doc.path(el),
            talker=talker,
            qa_context=el.tag,
            q_in_writing=1,
        ))
        speech_no += 1
    return statements


def correct_qa_misflags(day_records: Sequence[AttributedStatement],
                        heuristics: Sequence[QAHeuristic] = ()) -> List[AttributedStatement]:
    corrected = []
    for rec in day_records:
        for h in heuristics:
            if h.phrase not in rec.body:
                continue
            if h.direction == QUESTION_TO_ANSWER and rec.question:
                logger.info(f"rule=qa_reflag {h.direction} speech_no={rec.speech_no} order={rec.raw.order}")
                rec = replace(rec, question=0, answer=1)
            elif h.direction == ANSWER_TO_QUESTION and rec.answer:
                logger.info(f"rule=qa_reflag {h.direction} speech_no={rec.speech_no} order={rec.raw.order}")
                rec = replace(rec, question=1, answer=0)
        corrected.append(rec)
    return corrected
