import datetime
import logging
import re
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Iterator, List, Optional, Sequence

import pandas as pd

from .ingest import PartyFactsMap, Politician, PoliticianRegistry, fold
from .records import AttributedStatement, RawStatement, StatementKind, TalkerFields, TalkerPattern
from .segmenter import (
    ALL_TITLES, GENERAL_INTERJECTIONS, NameVariantLexicon, given_name_forms, is_presiding, normalize_text,
)

logger = logging.getLogger(__name__)

SPEAKER_NAME_ID = "10000"
LOOKUP_COLUMNS = ["surface_form", "full_name", "name.id", "electorate", "party", "gender", "uniqueID"]

_PAREN_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class LookupEntry:
    surface_form: str
    full_name: Optional[str] = None
    name_id: Optional[str] = None
    electorate: Optional[str] = None
    party: Optional[str] = None
    gender: Optional[str] = None
    unique_id: Optional[str] = None


class LookupTable:
    def __init__(self, entries: Iterable[LookupEntry] = ()):
        self._entries: Dict[str, LookupEntry] = {}
        for entry in entries:
            self._entries.setdefault(entry.surface_form, entry)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[LookupEntry]:
        return iter(self._entries.values())

    def __contains__(self, surface_form: str) -> bool:
        return surface_form in self._entries

    def get(self, surface_form: Optional[str]) -> Optional[LookupEntry]:
        return self._entries.get(surface_form or "")

    def to_frame(self) -> pd.DataFrame:
        rows = [[e.surface_form, e.full_name, e.name_id, e.electorate, e.party, e.gender, e.unique_id] for e in self]
        return pd.DataFrame(rows, columns=LOOKUP_COLUMNS, dtype="string")


def strip_title(tokens: Sequence[str]) -> List[str]:
    tokens = list(tokens)
    if tokens and tokens[0].rstrip(".") in ALL_TITLES:
        tokens = tokens[1:]
    return tokens


def _given_matches(politician: Politician, leftover: Sequence[str]) -> bool:
    if not leftover:
        return True
    wanted = fold(" ".join(leftover))
    return any(fold(form) == wanted for form in given_name_forms(politician.first_names, politician.common_name))


def registry_candidates(surface: str, registry: Optional[PoliticianRegistry]) -> List[Politician]:
    """Registry entries a surface form like "Mr T BRENNAN" could refer to."""
    if registry is None:
        return []
    tokens = strip_title(normalize_text(_PAREN_RE.sub("", surface or "")).split())
    if not tokens:
        return []
    candidates, leftover = registry.match_name_tokens(tokens)
    return [p for p in candidates if _given_matches(p, leftover)]


def _interval_fields(politician: Politician, day: Optional[datetime.date]):
    interval = politician.interval_on(day) if day else None
    if interval is None and politician.intervals and day is None:
        interval = politician.intervals[-1]
    if interval is None:
        return None, None
    return interval.electorate, interval.party


def entry_from_politician(surface: str, politician: Politician, day: Optional[datetime.date]) -> LookupEntry:
    electorate, party = _interval_fields(politician, day)
    return LookupEntry(
        surface_form=surface, full_name=politician.full_name, name_id=politician.name_id or None,
        electorate=electorate, party=party, gender=politician.gender, unique_id=politician.unique_id,
    )


def politician_for_talker(talker: TalkerFields, registry: Optional[PoliticianRegistry]) -> Optional[Politician]:
    if registry is None:
        return None
    found = registry.by_name_id(talker.name_id)
    if found is None and talker.name:
        matches = registry.by_full_name(talker.name)
        found = matches[0] if len(matches) == 1 else None
    return found


def entry_from_talker(surface: str, talker: TalkerFields, registry: Optional[PoliticianRegistry],
                      day: Optional[datetime.date]) -> LookupEntry:
    politician = politician_for_talker(talker, registry)
    electorate, party = _interval_fields(politician, day) if politician else (None, None)
    return LookupEntry(
        surface_form=surface,
        full_name=talker.name or (politician.full_name if politician else None),
        name_id=talker.name_id or (politician.name_id if politician else None),
        electorate=talker.electorate or electorate,
        party=talker.party or party,
        gender=politician.gender if politician else None,
        unique_id=politician.unique_id if politician else None,
    )


def _skip_surface(surface: str) -> bool:
    return not surface or is_presiding(surface) or surface in GENERAL_INTERJECTIONS


def build_lookup_table(day_statements: Sequence[RawStatement], patterns: Sequence[TalkerPattern],
                       registry: Optional[PoliticianRegistry], sitting_date: Optional[datetime.date] = None) -> LookupTable:
    talkers: Dict[str, TalkerFields] = {}
    conflicting = set()

    def remember(display: Optional[str], talker: TalkerFields):
        if _skip_surface(display or ""):
            return
        seen = talkers.get(display)
        if seen is not None and seen.name_id != talker.name_id:
            conflicting.add(display)
        talkers.setdefault(display, talker)

    for st in day_statements:
        if st.talker is not None:
            remember(st.talker.display_name, st.talker)
    for pattern in patterns:
        remember(pattern.fields.display_name, pattern.fields)

    entries = []
    for pattern in patterns:
        entries.append(entry_from_talker(pattern.raw_pattern, pattern.fields, registry, sitting_date))

    for surface in dict.fromkeys(st.surface_name for st in day_statements if st.kind not in (StatementKind.STAGE_DIRECTION, StatementKind.BUSINESS_START)):
        if _skip_surface(surface) or surface in conflicting:
            continue
        talker = talkers.get(surface)
        if talker is not None:
            entries.append(entry_from_talker(surface, talker, registry, sitting_date))
            continue
        candidates = registry_candidates(surface, registry)
        if len(candidates) == 1:
            entries.append(entry_from_politician(surface, candidates[0], sitting_date))
        elif len(candidates) > 1:
            logger.info(f"Surface form {surface!r} matches {len(candidates)} registry entries; left unresolved")
    return LookupTable(entries)


def role_label(surface: str) -> str:
    """"the Deputy Speaker (Ms X)" -> "The DEPUTY SPEAKER"."""
    words = normalize_text(_PAREN_RE.sub("", surface)).split()
    return " ".join(["The"] + [w.upper() for w in words[1:]])


def _flag(value: Optional[str]) -> int:
    return 1 if (value or "").strip() == "1" else 0


def _apply_entry(att: AttributedStatement, entry: LookupEntry) -> None:
    att.name = entry.full_name or att.name
    att.name_id = entry.name_id
    att.electorate = entry.electorate
    att.party = entry.party
    att.gender = entry.gender
    att.unique_id = entry.unique_id


def _resolve_presiding(att: AttributedStatement, surface: str, registry: Optional[PoliticianRegistry],
                       table: LookupTable, day: Optional[datetime.date]) -> None:
    att.presiding = True
    talker = att.raw.talker
    officeholder = None
    for text in (surface, talker.display_name if talker else None):
        m = _PAREN_RE.search(text or "")
        if m:
            candidates = registry_candidates(m.group(1), registry)
            if len(candidates) == 1:
                officeholder = entry_from_politician(surface, candidates[0], day)
            else:
                officeholder = table.get(normalize_text(m.group(1)))
            break
    if officeholder is not None:
        _apply_entry(att, officeholder)
        return
    att.name = role_label(surface)
    att.name_id = talker.name_id if talker else None


def resolve_speakers(statements: Sequence[RawStatement], table: LookupTable,
                     registry: Optional[PoliticianRegistry] = None, sitting_date: Optional[datetime.date] = None,
                     lexicon: Optional[NameVariantLexicon] = None) -> List[AttributedStatement]:
    general = set(lexicon.general_interjections) if lexicon else set(GENERAL_INTERJECTIONS)
    resolved = []
    for st in statements:
        att = AttributedStatement(raw=st)
        resolved.append(att)
        if att.is_procedural:
            att.name = st.surface_name
            continue
        talker = st.talker
        surface = st.surface_name
        if talker is not None:
            att.in_gov = _flag(talker.in_gov)
            att.first_speech = _flag(talker.first_speech)

        if is_presiding(surface) or (talker is not None and is_presiding(talker.display_name)):
            _resolve_presiding(att, surface if is_presiding(surface) else talker.display_name, registry, table, sitting_date)
        elif surface in general:
            att.general = True
            att.name = surface
        elif talker is not None:
            _apply_entry(att, entry_from_talker(surface, talker, registry, sitting_date))
            if att.name is None:
                att.name = surface
            # talker children can be partial; the day's table fills the rest
            fallback = table.get(surface)
            if fallback is not None:
                att.name_id = att.name_id or fallback.name_id
                att.electorate = att.electorate or fallback.electorate
                att.party = att.party or fallback.party
                att.gender = att.gender or fallback.gender
                att.unique_id = att.unique_id or fallback.unique_id
        elif surface in table:
            _apply_entry(att, table.get(surface))
        else:
            att.name = surface
    return resolved


def map_partyfacts(party_abb: Optional[str], partyfacts: Optional[PartyFactsMap]) -> Optional[int]:
    if partyfacts is None:
        return None
    return partyfacts.lookup(party_abb)


def attach_partyfacts(records: Sequence[AttributedStatement], partyfacts: Optional[PartyFactsMap]) -> List[AttributedStatement]:
    return [replace(r, partyfacts_id=map_partyfacts(r.party, partyfacts)) for r in records]


def _same_speaker(a: AttributedStatement, b: AttributedStatement) -> bool:
    if a.unique_id and b.unique_id:
        return a.unique_id == b.unique_id
    if a.name_id and b.name_id:
        return a.name_id == b.name_id
    if a.name and b.name:
        return a.name == b.name
    return a.raw.surface_name == b.raw.surface_name


def flag_interjections(day_records: Sequence[AttributedStatement]) -> List[AttributedStatement]:
    openings: Dict[int, AttributedStatement] = {}
    for rec in day_records:
        if rec.is_procedural:
            continue
        current = openings.get(rec.speech_no)
        if current is None or (rec.raw.kind is StatementKind.OPENING and current.raw.kind is not StatementKind.OPENING):
            openings[rec.speech_no] = rec

    flagged = []
    for rec in day_records:
        opening = openings.get(rec.speech_no)
        if rec.is_procedural or rec.presiding or opening is None or rec is opening:
            interject = 0
        else:
            interject = 0 if _same_speaker(rec, opening) else 1
        flagged.append(replace(rec, interject=interject))
    return flagged


def _full_form_surname(name: str) -> Optional[str]:
    if name and name.endswith(", MP") and "," in name[:-4]:
        return fold(name.split(",", 1)[0])
    return None


def _registry_match(rec: AttributedStatement, registry: Optional[PoliticianRegistry]) -> Optional[Politician]:
    if registry is None:
        return None
    for found in (registry.by_unique_id(rec.unique_id), registry.by_name_id(rec.name_id)):
        if found is not None:
            return found
    if rec.name:
        matches = registry.by_full_name(rec.name)
        if len(matches) == 1:
            return matches[0]
        candidates = registry_candidates(rec.name, registry)
        if len(candidates) == 1:
            return candidates[0]
    return None


def fill_missing_details(day_records: Sequence[AttributedStatement], registry: Optional[PoliticianRegistry],
                         sitting_date: Optional[datetime.date] = None) -> List[AttributedStatement]:
    """Upgrade short names to the day's full form, then fill gaps from the registry.

    Only evidence from the same day is used. Interjection flags are
    recomputed at the end because identities may have changed.
    """
    full_forms: Dict[str, Dict[str, AttributedStatement]] = {}
    for rec in day_records:
        surname = _full_form_surname(rec.name or "")
        if surname and not rec.is_procedural:
            identity = rec.unique_id or rec.name_id or rec.name
            full_forms.setdefault(surname, {}).setdefault(identity, rec)

    filled = []
    for rec in day_records:
        rec = replace(rec)
        filled.append(rec)
        if rec.is_procedural or rec.general or not rec.name:
            continue
        if (rec.presiding and not rec.unique_id) or _full_form_surname(rec.name):
            pass
        else:
            tokens = strip_title(normalize_text(_PAREN_RE.sub("", rec.name)).split())
            for n in range(len(tokens), 0, -1):
                identities = full_forms.get(fold(" ".join(tokens[-n:])))
                if identities:
                    if len(identities) == 1:
                        source = next(iter(identities.values()))
                        logger.info(f"rule=upgrade_short_form {rec.name!r} -> {source.name!r}")
                        rec.name, rec.name_id, rec.unique_id = source.name, source.name_id, source.unique_id
                        rec.electorate, rec.party, rec.gender = source.electorate, source.party, source.gender
                    break

        if rec.presiding and not rec.unique_id:
            continue
        if all((rec.gender, rec.unique_id, rec.name_id, rec.party, rec.electorate)):
            continue
        politician = _registry_match(rec, registry)
        if politician is None:
            continue
        electorate, party = _interval_fields(politician, sitting_date)
        rec.gender = rec.gender or politician.gender
        rec.unique_id = rec.unique_id or politician.unique_id
        rec.name_id = rec.name_id or politician.name_id or None
        rec.party = rec.party or party
        rec.electorate = rec.electorate or electorate
    return flag_interjections(filled)
