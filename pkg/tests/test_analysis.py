import datetime

import pandas as pd
import pytest

from core.analysis import compute_summary_stats, speaker_speech_counts, speech_openings
from core.fixtures import fixture_partyfacts

D1 = datetime.date(2015, 2, 10)
D2 = datetime.date(2015, 2, 11)


@pytest.fixture
def corpus():
    rows = [
        (D1, "business start", 1, 1, 0, None),
        (D1, "Smith, John, MP", 2, 2, 0, "ALP"),
        (D1, "Jones, Mary, MP", 2, 3, 0, "LIB"),
        (D1, "Smith, John, MP", 2, 4, 0, "ALP"),
        (D1, "stage direction", 2, 5, 0, None),
        (D1, "Jones, Mary, MP", 3, 6, 1, "LIB"),
        (D2, "Smith, John, MP", 1, 1, 0, "ALP"),
        (D2, "Brown, Tim, MP", 2, 2, 0, "IND"),
    ]
    frame = pd.DataFrame(rows, columns=["date", "name", "speech_no", "order", "fedchamb_flag", "party"])
    for col in ("speech_no", "order", "fedchamb_flag"):
        frame[col] = frame[col].astype("Int64")
    return frame


def test_openings_skip_procedural_rows(corpus):
    openings = speech_openings(corpus)
    assert openings["order"].tolist() == [2, 6, 1, 2]


def test_daily_counts(corpus):
    stats = compute_summary_stats(corpus)
    speeches = stats.daily_speeches.set_index(["date", "venue"])["speeches"].to_dict()
    assert speeches == {(D1, "Chamber"): 1, (D1, "Federation Chamber"): 1, (D2, "Chamber"): 2}
    names = stats.daily_unique_names.set_index(["date", "venue"])["unique_names"].to_dict()
    assert names == {(D1, "Chamber"): 2, (D1, "Federation Chamber"): 1, (D2, "Chamber"): 2}
    assert stats.mean_unique_names() == {"Chamber": 2.0, "Federation Chamber": 1.0}


def test_party_totals_with_partyfacts(corpus):
    totals = compute_summary_stats(corpus, fixture_partyfacts()).party_speeches
    assert totals["party"].tolist() == ["ALP", "IND", "LIB"]
    assert totals["speeches"].tolist() == [2, 1, 1]
    assert totals["partyfacts_id"].tolist() == [101, pd.NA, 102]
    assert totals["party_name"].iloc[0] == "Australian Labor Party"


def test_party_totals_without_partyfacts(corpus):
    totals = compute_summary_stats(corpus).party_speeches
    assert totals["partyfacts_id"].isna().all()


def test_speaker_counts(corpus):
    counts = speaker_speech_counts(corpus)
    assert counts["name"].tolist() == ["Smith, John, MP", "Brown, Tim, MP", "Jones, Mary, MP"]
    assert counts["speeches"].tolist() == [2, 1, 1]


def test_empty_corpus():
    empty = pd.DataFrame(columns=["date", "name", "speech_no", "order", "fedchamb_flag", "party"])
    stats = compute_summary_stats(empty)
    assert stats.daily_speeches.empty and stats.party_speeches.empty
    assert stats.mean_unique_names() == {}
