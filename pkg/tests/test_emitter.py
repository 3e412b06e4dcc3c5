import datetime
import os

import pytest
from pandas.testing import assert_frame_equal

from core.emitter import (
    CORPUS_COLUMNS, DAILY_COLUMNS, build_corpus, check_daily_table, daily_base_path, date_from_filename,
    drop_stage_directions, find_daily_files, read_table, write_outputs,
)
from core.errors import DuplicateDate, SchemaViolation, UnknownFormat
from core.records import STAGE_DIRECTION_NAME, SchemaEra

from conftest import make_fixture


def _write_days(out_dir, days):
    paths = []
    for day in days:
        paths += write_outputs(day.table, daily_base_path(str(out_dir), day.sitting_date))
    return paths


class TestDailyTable:
    def test_fixture_tables_satisfy_the_schema(self, modern_day, legacy_day):
        check_daily_table(modern_day.table)
        check_daily_table(legacy_day.table)
        assert list(modern_day.table.columns) == DAILY_COLUMNS

    def test_gapped_order_rejected(self, modern_day):
        table = modern_day.table.copy()
        table.loc[0, "order"] = 99
        with pytest.raises(SchemaViolation):
            check_daily_table(table)

    def test_question_and_answer_on_one_row_rejected(self, modern_day):
        table = modern_day.table.copy()
        table.loc[1, "question"] = 1
        table.loc[1, "answer"] = 1
        with pytest.raises(SchemaViolation):
            check_daily_table(table)

    def test_flag_outside_zero_one_rejected(self, modern_day):
        table = modern_day.table.copy()
        table.loc[1, "interject"] = 2
        with pytest.raises(SchemaViolation):
            check_daily_table(table)


class TestWriteAndRead:
    @pytest.mark.parametrize("fmt", ["csv", "parquet"])
    def test_round_trip(self, tmp_path, modern_day, fmt):
        [path] = write_outputs(modern_day.table, str(tmp_path / "hansard_x"), [fmt])
        assert_frame_equal(read_table(path), modern_day.table)

    def test_csv_and_parquet_agree(self, tmp_path, legacy_day):
        csv_path, parquet_path = write_outputs(legacy_day.table, str(tmp_path / "hansard_x"))
        assert_frame_equal(read_table(csv_path), read_table(parquet_path))

    def test_unknown_format(self, tmp_path, modern_day):
        with pytest.raises(UnknownFormat):
            write_outputs(modern_day.table, str(tmp_path / "hansard_x"), ["json"])

    def test_csv_is_utf8_with_unix_newlines(self, tmp_path, modern_day):
        [path] = write_outputs(modern_day.table, str(tmp_path / "hansard_x"), ["csv"])
        with open(path, "rb") as f:
            raw = f.read()
        assert b"\r\n" not in raw
        raw.decode("utf-8")


class TestCorpus:
    def test_k_days_give_k_dates(self, tmp_path):
        days = [make_fixture(era, seed) for era, seed in
                [(SchemaEra.MODERN_FEDCHAMB, 1), (SchemaEra.MODERN_MAINCOMM, 2), (SchemaEra.LEGACY_INLINE, 3)]]
        _write_days(tmp_path, days)
        corpus = build_corpus(find_daily_files(str(tmp_path), "parquet"))
        assert list(corpus.columns) == CORPUS_COLUMNS
        assert corpus["date"].nunique() == len({d.sitting_date for d in days})
        assert len(corpus) == sum(len(d.table) for d in days)
        assert corpus["date"].is_monotonic_increasing

    def test_corpus_round_trip(self, tmp_path):
        days = [make_fixture(SchemaEra.LEGACY_EARLY, 4), make_fixture(SchemaEra.MODERN_FEDCHAMB, 4)]
        _write_days(tmp_path / "daily", days)
        corpus = build_corpus(find_daily_files(str(tmp_path / "daily"), "csv"))
        for fmt in ("csv", "parquet"):
            [path] = write_outputs(corpus, str(tmp_path / "hansard_corpus"), [fmt])
            assert_frame_equal(read_table(path), corpus)

    def test_duplicate_date(self, tmp_path, modern_day):
        paths = _write_days(tmp_path, [modern_day])
        copy = tmp_path / "other" / os.path.basename(paths[1])
        copy.parent.mkdir()
        with open(paths[1], "rb") as f:
            copy.write_bytes(f.read())
        with pytest.raises(DuplicateDate):
            build_corpus([paths[1], str(copy)])

    def test_empty_corpus(self):
        assert list(build_corpus([]).columns) == CORPUS_COLUMNS


def test_date_from_filename():
    assert date_from_filename("/x/hansard_2014-06-26.parquet") == datetime.date(2014, 6, 26)
    with pytest.raises(UnknownFormat):
        date_from_filename("/x/notes.csv")


def test_drop_stage_directions_renumbers(modern_day):
    kept = drop_stage_directions(modern_day.table)
    assert STAGE_DIRECTION_NAME not in set(kept["name"].dropna())
    assert kept["order"].tolist() == list(range(1, len(kept) + 1))
