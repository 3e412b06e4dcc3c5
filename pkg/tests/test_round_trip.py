"""Synthetic days through the whole pipeline, compared with their known tables."""
import pytest
from pandas.testing import assert_frame_equal

from conftest import ERAS
from core.emitter import check_daily_table
from core.fixtures import FixtureSpec, generate_fixture
from core.pipeline import process_day

SEEDS = range(25)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("era", ERAS, ids=lambda e: e.value)
def test_daily_table(era, seed, context):
    xml_bytes, day = generate_fixture(FixtureSpec(era, seed))
    result = process_day(xml_bytes, context)
    assert result.era is era
    assert result.sitting_date == day.sitting_date
    assert_frame_equal(result.table, day.table)
    assert result.divisions == day.divisions
    assert result.topics == day.topics


@pytest.mark.parametrize("era", ERAS, ids=lambda e: e.value)
def test_orders_are_dense(era, context):
    xml_bytes, _ = generate_fixture(FixtureSpec(era, 11))
    table = process_day(xml_bytes, context).table
    check_daily_table(table)
    assert table["order"].tolist() == list(range(1, len(table) + 1))
    written = table.index[table["q_in_writing"] == 1]
    if len(written):
        assert written.min() > table.index[table["q_in_writing"] == 0].max()


def test_same_input_same_output(context):
    xml_bytes, _ = generate_fixture(FixtureSpec(ERAS[0], 7))
    assert_frame_equal(process_day(xml_bytes, context).table, process_day(xml_bytes, context).table)
