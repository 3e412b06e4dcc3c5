import datetime
import json
import os

import pytest
from pandas.testing import assert_frame_equal

from core import crud
from core.config import RunConfig
from core.emitter import read_table
from core.errors import ConfigError, MalformedXml, PartialFailure, UndetectableEra
from core.fixtures import FixtureSpec, generate_fixture, write_reference_files
from core.models import DayStatusEnum
from core.pipeline import date_from_source_name, dates_between, locators_for, process_day, run_pipeline
from core.records import SchemaEra

FIXTURES = ("fixture:ModernFedChamb:1", "fixture:LegacyInline:2")


def _config(tmp_path, files=FIXTURES, out="out", **kwargs):
    politicians, partyfacts = write_reference_files(str(tmp_path / "ref"))
    return RunConfig(out_dir=str(tmp_path / out), files=tuple(files), politicians_path=politicians,
                     partyfacts_path=partyfacts, **kwargs)


def _bad_file(tmp_path):
    path = tmp_path / "2015-02-10.xml"
    path.write_bytes(b"<hansard><chamber.xscript>")
    return str(path)


class TestProcessDay:
    def test_fixture_day(self, context):
        xml_bytes, day = generate_fixture(FixtureSpec(SchemaEra.MODERN_MAINCOMM, 5))
        result = process_day(xml_bytes, context)
        assert result.sitting_date == day.sitting_date
        assert result.era is SchemaEra.MODERN_MAINCOMM
        assert_frame_equal(result.table, day.table)
        assert result.divisions == day.divisions
        assert result.topics == day.topics

    def test_supplied_date_wins_over_header(self, context):
        xml_bytes, day = generate_fixture(FixtureSpec(SchemaEra.LEGACY_INLINE, 5))
        other = day.sitting_date + datetime.timedelta(days=7)
        result = process_day(xml_bytes, context, other)
        assert result.sitting_date == other
        assert result.header_date == day.sitting_date

    def test_side_tables_carry_the_supplied_date(self, context):
        with_divisions = 0
        for seed in range(6):
            xml_bytes, day = generate_fixture(FixtureSpec(SchemaEra.LEGACY_INLINE, seed, n_debates=3))
            other = day.sitting_date + datetime.timedelta(days=7)
            result = process_day(xml_bytes, context, other)
            assert result.topics and all(t.date == other for t in result.topics)
            assert all(d.date == other for d in result.divisions)
            with_divisions += bool(result.divisions)
        assert with_divisions

    def test_malformed(self, context):
        with pytest.raises(MalformedXml):
            process_day(b"<hansard><chamber.xscript>", context)

    def test_no_era(self, context):
        with pytest.raises(UndetectableEra):
            process_day(b"<hansard><session.header/></hansard>", context)


class TestRunPipeline:
    def test_writes_daily_tables_and_manifest(self, tmp_path):
        config = _config(tmp_path)
        outcomes = run_pipeline(config)
        assert [o.status for o in outcomes] == [DayStatusEnum.OK, DayStatusEnum.OK]
        for outcome in outcomes:
            assert len(outcome.outputs) == 2
            assert all(os.path.isfile(p) for p in outcome.outputs)
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert {d["source"] for d in manifest["days"]} == set(FIXTURES)
        assert all(d["status"] == "ok" for d in manifest["days"])

    def test_daily_table_matches_fixture(self, tmp_path):
        outcomes = run_pipeline(_config(tmp_path, files=FIXTURES[:1]))
        _, day = generate_fixture(FixtureSpec.parse(FIXTURES[0][len("fixture:"):]))
        parquet = next(p for p in outcomes[0].outputs if p.endswith(".parquet"))
        assert_frame_equal(read_table(parquet), day.table)

    def test_second_run_skips_completed_days(self, tmp_path):
        config = _config(tmp_path)
        run_pipeline(config)
        assert run_pipeline(config) == []
        rerun = run_pipeline(_config(tmp_path, force=True))
        assert len(rerun) == 2

    def test_missing_output_means_not_completed(self, tmp_path):
        config = _config(tmp_path, files=FIXTURES[:1])
        [outcome] = run_pipeline(config)
        os.remove(outcome.outputs[0])
        assert len(run_pipeline(config)) == 1

    def test_one_bad_day_is_partial_failure(self, tmp_path):
        config = _config(tmp_path, files=FIXTURES + (_bad_file(tmp_path),))
        with pytest.raises(PartialFailure) as info:
            run_pipeline(config)
        assert not info.value.total
        assert len(info.value.failed_dates) == 1
        db = next(crud.get_db(config.out_dir))
        try:
            failed = crud.get_runs_by_status(db, DayStatusEnum.FAILED)
            assert [r.sitting_date for r in failed] == [datetime.date(2015, 2, 10)]
            assert "MalformedXml" in failed[0].error
            assert len(crud.get_runs_by_status(db, DayStatusEnum.OK)) == 2
        finally:
            db.close()

    def test_every_day_bad_is_total_failure(self, tmp_path):
        with pytest.raises(PartialFailure) as info:
            run_pipeline(_config(tmp_path, files=(_bad_file(tmp_path),)))
        assert info.value.total

    def test_no_timestamp_runs_are_byte_identical(self, tmp_path):
        run_pipeline(_config(tmp_path, out="a", no_timestamp=True))
        run_pipeline(_config(tmp_path, out="b", no_timestamp=True))
        names = sorted(n for n in os.listdir(tmp_path / "a") if not n.endswith(".db"))
        assert names == sorted(n for n in os.listdir(tmp_path / "b") if not n.endswith(".db"))
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name
        assert "finished_at" not in (tmp_path / "a" / "manifest.json").read_text()

    def test_parallel_run_matches_serial(self, tmp_path):
        run_pipeline(_config(tmp_path, out="serial", no_timestamp=True))
        run_pipeline(_config(tmp_path, out="parallel", no_timestamp=True, jobs=2))
        for name in os.listdir(tmp_path / "serial"):
            if name.endswith(".csv"):
                assert (tmp_path / "serial" / name).read_bytes() == (tmp_path / "parallel" / name).read_bytes()

    def test_lookup_tables(self, tmp_path):
        [outcome] = run_pipeline(_config(tmp_path, files=FIXTURES[1:], lookup_tables=True))
        assert any(os.path.basename(p).startswith("lookup_") for p in outcome.outputs)

    def test_unknown_format_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError):
            run_pipeline(_config(tmp_path, formats=("xlsx",)))

    def test_missing_reference_file_is_config_error(self, tmp_path):
        config = RunConfig(out_dir=str(tmp_path / "out"), files=FIXTURES, politicians_path=str(tmp_path / "none.csv"))
        with pytest.raises(ConfigError):
            run_pipeline(config)


class TestSources:
    def test_nothing_to_do(self, tmp_path):
        with pytest.raises(ConfigError):
            locators_for(RunConfig(out_dir=str(tmp_path)))

    def test_date_taken_from_file_name(self):
        assert date_from_source_name("/data/2004-02-10.xml") == datetime.date(2004, 2, 10)
        assert date_from_source_name("/data/transcript.xml") is None
        assert date_from_source_name("/data/2004-02-31.xml") is None

    def test_dates_between(self):
        days = list(dates_between(datetime.date(2015, 2, 9), datetime.date(2015, 2, 11)))
        assert days == [datetime.date(2015, 2, 9), datetime.date(2015, 2, 10), datetime.date(2015, 2, 11)]
        with pytest.raises(ConfigError):
            list(dates_between(datetime.date(2015, 2, 11), datetime.date(2015, 2, 9)))
