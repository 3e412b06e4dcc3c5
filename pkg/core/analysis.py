from dataclasses import dataclass
from typing import Dict, Optional

import pandas as pd

from .emitter import PROCEDURAL_NAMES
from .ingest import PartyFactsMap

VENUE_LABELS = {0: "Chamber", 1: "Federation Chamber"}


@dataclass
class SummaryStats:
    daily_speeches: pd.DataFrame
    daily_unique_names: pd.DataFrame
    party_speeches: pd.DataFrame

    def mean_unique_names(self) -> Dict[str, float]:
        if self.daily_unique_names.empty:
            return {}
        means = self.daily_unique_names.groupby("venue")["unique_names"].mean()
        return {venue: float(value) for venue, value in means.items()}

    def mean_daily_speeches(self) -> Dict[str, float]:
        if self.daily_speeches.empty:
            return {}
        means = self.daily_speeches.groupby("venue")["speeches"].mean()
        return {venue: float(value) for venue, value in means.items()}


def _with_venue(corpus: pd.DataFrame) -> pd.DataFrame:
    df = corpus.copy()
    df["venue"] = df["fedchamb_flag"].astype("Int64").map(VENUE_LABELS)
    return df


def speech_openings(corpus: pd.DataFrame) -> pd.DataFrame:
    """First attributed row of every speech; the unit speeches are counted in."""
    df = corpus[~corpus["name"].isin(PROCEDURAL_NAMES)]
    if df.empty:
        return df
    df = df.sort_values(["date", "speech_no", "order"], kind="stable")
    return df.drop_duplicates(subset=["date", "speech_no"], keep="first")


def daily_speech_counts(corpus: pd.DataFrame) -> pd.DataFrame:
    df = _with_venue(speech_openings(corpus))
    if df.empty:
        return pd.DataFrame(columns=["date", "venue", "speeches"])
    counts = df.groupby(["date", "venue"])["speech_no"].nunique().reset_index(name="speeches")
    return counts.sort_values(["date", "venue"]).reset_index(drop=True)


def daily_unique_name_counts(corpus: pd.DataFrame) -> pd.DataFrame:
    df = _with_venue(corpus[~corpus["name"].isin(PROCEDURAL_NAMES)])
    if df.empty:
        return pd.DataFrame(columns=["date", "venue", "unique_names"])
    counts = df.groupby(["date", "venue"])["name"].nunique(dropna=True).reset_index(name="unique_names")
    return counts.sort_values(["date", "venue"]).reset_index(drop=True)


def party_speech_totals(corpus: pd.DataFrame, partyfacts: Optional[PartyFactsMap] = None) -> pd.DataFrame:
    openings = speech_openings(corpus)
    openings = openings[openings["party"].notna()] if not openings.empty else openings
    if openings.empty:
        return pd.DataFrame(columns=["party", "party_name", "partyfacts_id", "speeches"])
    totals = openings.groupby("party").size().reset_index(name="speeches")
    names = {}
    if partyfacts is not None:
        names = dict(zip(partyfacts.frame["party_abb_hansard"], partyfacts.frame["party_name_auspol"]))
        totals["partyfacts_id"] = totals["party"].map(partyfacts.lookup).astype("Int64")
    else:
        totals["partyfacts_id"] = pd.array([pd.NA] * len(totals), dtype="Int64")
    totals["party_name"] = totals["party"].map(names)
    totals = totals[["party", "party_name", "partyfacts_id", "speeches"]]
    return totals.sort_values(["speeches", "party"], ascending=[False, True]).reset_index(drop=True)


def compute_summary_stats(corpus: pd.DataFrame, partyfacts: Optional[PartyFactsMap] = None) -> SummaryStats:
    return SummaryStats(
        daily_speeches=daily_speech_counts(corpus),
        daily_unique_names=daily_unique_name_counts(corpus),
        party_speeches=party_speech_totals(corpus, partyfacts),
    )


def speaker_speech_counts(corpus: pd.DataFrame) -> pd.DataFrame:
    openings = speech_openings(corpus)
    if openings.empty:
        return pd.DataFrame(columns=["name", "party", "speeches"])
    counts = openings.groupby(["name", "party"], dropna=False).size().reset_index(name="speeches")
    return counts.sort_values(["speeches", "name"], ascending=[False, True]).reset_index(drop=True)
