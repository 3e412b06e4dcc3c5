import pytest
from lxml import etree
from pandas.testing import assert_frame_equal

from conftest import ERAS
from core.errors import ConfigError, UnsupportedEra
from core.fixtures import FixtureSpec, generate_fixture, plan_day
from core.pipeline import process_day
from core.records import SchemaEra


class TestFixtureSpec:
    def test_defaults(self):
        spec = FixtureSpec(SchemaEra.LEGACY_EARLY, 1)
        assert spec.n_debates is None
        assert spec.include_fedchamb and spec.include_divisions

    @pytest.mark.parametrize("kwargs", [dict(n_debates=0), dict(interjection_rate=-0.1), dict(interjection_rate=1.01)])
    def test_out_of_range_fields(self, kwargs):
        with pytest.raises(ConfigError):
            FixtureSpec(SchemaEra.LEGACY_EARLY, 1, **kwargs)

    def test_parse(self):
        assert FixtureSpec.parse("ModernFedChamb:3") == FixtureSpec(SchemaEra.MODERN_FEDCHAMB, 3)

    def test_parse_unknown_era(self):
        with pytest.raises(UnsupportedEra):
            FixtureSpec.parse("Colonial:3")

    def test_parse_bad_seed(self):
        with pytest.raises(ConfigError):
            FixtureSpec.parse("LegacyInline:three")

    def test_era_given_as_text(self):
        assert FixtureSpec("LegacyInline", 2).era is SchemaEra.LEGACY_INLINE
        with pytest.raises(UnsupportedEra):
            generate_fixture(FixtureSpec("Colonial", 2))


class TestPlanShape:
    @pytest.mark.parametrize("era", ERAS, ids=lambda e: e.value)
    def test_no_interjections(self, era):
        for seed in range(8):
            _, day = generate_fixture(FixtureSpec(era, seed, interjection_rate=0))
            assert (day.table["interject"] == 0).all()

    def test_bill_debate_count(self):
        for seed in range(5):
            plan = plan_day(FixtureSpec(SchemaEra.LEGACY_INLINE, seed, n_debates=3))
            bills = [d for d in plan.chamber.debates if d.title != "QUESTIONS WITHOUT NOTICE"]
            assert len(bills) == 3
            assert len(plan.chamber.debates) > 3

    @pytest.mark.parametrize("era", ERAS, ids=lambda e: e.value)
    def test_without_federation_chamber(self, era):
        xml_bytes, day = generate_fixture(FixtureSpec(era, 4, include_fedchamb=False))
        root = etree.fromstring(xml_bytes)
        assert root.find("fedchamb.xscript") is None and root.find("maincomm.xscript") is None
        assert (day.table["fedchamb_flag"] == 0).all()

    def test_without_divisions(self):
        for seed in range(10):
            xml_bytes, day = generate_fixture(FixtureSpec(SchemaEra.MODERN_FEDCHAMB, seed, include_divisions=False))
            assert day.divisions == []
            assert b"<division" not in xml_bytes


class TestRoundTrip:
    def test_three_legacy_debates(self, context):
        for seed in range(5):
            xml_bytes, day = generate_fixture(FixtureSpec(SchemaEra.LEGACY_INLINE, seed, n_debates=3))
            result = process_day(xml_bytes, context)
            assert_frame_equal(result.table, day.table)
            assert result.divisions == day.divisions
            assert result.topics == day.topics

    @pytest.mark.parametrize("era", ERAS, ids=lambda e: e.value)
    def test_chamber_only_day(self, era, context):
        xml_bytes, day = generate_fixture(FixtureSpec(era, 6, include_fedchamb=False, interjection_rate=0.2))
        result = process_day(xml_bytes, context)
        assert result.era is era
        assert_frame_equal(result.table, day.table)
