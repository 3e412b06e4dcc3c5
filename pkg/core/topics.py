import datetime
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import pandas as pd

from .records import ParseIssue
from .segmenter import normalize_text
from .xml_model import TranscriptDocument

logger = logging.getLogger(__name__)

TOPIC_COLUMNS = ["date", "item_index", "title", "page.no"]
# subdebate.2 titles stay out so item_index keeps counting only these two levels
TOPIC_XPATH = "//debate/debateinfo | //subdebate.1/subdebateinfo"


@dataclass(frozen=True)
class DebateTopic:
    date: Optional[datetime.date]
    item_index: int
    title: str
    page_no: Optional[str]


def extract_debate_topics(doc: TranscriptDocument, issues: Optional[List[ParseIssue]] = None,
                          sitting_date: Optional[datetime.date] = None) -> List[DebateTopic]:
    day = sitting_date or doc.session_date
    topics = []
    for info in doc.tree.xpath(TOPIC_XPATH):
        title = normalize_text("".join(info.find("title").itertext())) if info.find("title") is not None else ""
        if not title:
            issue = ParseIssue("MissingTitle", "debate info without title text", doc.path(info))
            logger.warning(str(issue))
            if issues is not None:
                issues.append(issue)
        page = info.find("page.no")
        page_no = normalize_text(page.text) if page is not None and page.text else None
        topics.append(DebateTopic(date=day, item_index=len(topics) + 1, title=title, page_no=page_no or None))
    return topics


def topics_frame(topics: Sequence[DebateTopic]) -> pd.DataFrame:
    frame = pd.DataFrame([(t.date, t.item_index, t.title, t.page_no) for t in topics], columns=TOPIC_COLUMNS)
    frame["item_index"] = frame["item_index"].astype("Int64")
    frame["title"] = frame["title"].astype("string")
    frame["page.no"] = frame["page.no"].astype("string")
    return frame


def join_topics(table: pd.DataFrame, topics: pd.DataFrame) -> pd.DataFrame:
    """Attach the latest topic opened at or before each row's page.

    Row order of ``table`` is kept as is.
    """
    out = table.copy()
    out["topic"] = pd.Series([pd.NA] * len(out), index=out.index, dtype="string")
    if out.empty or topics.empty:
        return out

    left = pd.DataFrame({
        "_page": pd.to_numeric(table["page.no"], errors="coerce").astype("float64"),
        "_pos": range(len(table)),
    }).dropna(subset=["_page"]).sort_values("_page", kind="stable")
    right = pd.DataFrame({
        "_page": pd.to_numeric(topics["page.no"], errors="coerce").astype("float64"),
        "item_index": topics["item_index"].astype("int64"),
        "topic": topics["title"].astype("string"),
    }).dropna(subset=["_page"]).sort_values(["_page", "item_index"], kind="stable")
    if left.empty or right.empty:
        return out

    merged = pd.merge_asof(left, right[["_page", "topic"]], on="_page", direction="backward")
    by_position = merged.set_index("_pos")["topic"].reindex(range(len(table)))
    out["topic"] = by_position.to_numpy()
    out["topic"] = out["topic"].astype("string")
    return out
