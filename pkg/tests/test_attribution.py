import datetime

from core.attribution import (
    LookupTable, attach_partyfacts, build_lookup_table, fill_missing_details, flag_interjections, resolve_speakers,
    role_label,
)
from core.fixtures import DEPUTY, fixture_partyfacts, fixture_registry
from core.records import AttributedStatement, RawStatement, StatementKind, TalkerFields, TalkerPattern, Venue
from core.segmenter import build_name_variant_lexicon, split_legacy_debate, split_modern_speech, assign_order

from test_segmenter import COSTELLO_PATTERN, VAN_MANEN_TEXT

DAY = datetime.date(2016, 3, 1)
COSTELLO = TalkerFields(
    time="09:31:00", page_no="10261", name="Costello, Peter, MP", display_name="Mr COSTELLO", name_id="CT4",
    electorate="Higgins", party="LP", role="Treasurer", in_gov="1", first_speech="0",
)


def _raw(surface, body, speech_no=1, kind=StatementKind.OPENING, talker=None, order=1):
    return RawStatement(speech_no, 0, surface, body, None, None, kind, talker=talker, order=order)


class TestLegacyAttribution:
    def _rows(self):
        pattern = TalkerPattern(COSTELLO_PATTERN, COSTELLO, "speech", Venue.CHAMBER, path="/hansard/p1")
        rows = split_legacy_debate(f"{COSTELLO_PATTERN} I present the budget.", [pattern], build_name_variant_lexicon(None, []))
        return assign_order(rows), pattern

    def test_lookup_table_maps_display_name(self):
        rows, pattern = self._rows()
        table = build_lookup_table(rows, [pattern], None)
        entry = table.get("Mr COSTELLO")
        assert entry.full_name == "Costello, Peter, MP"
        assert (entry.electorate, entry.party, entry.name_id) == ("Higgins", "LP", "CT4")
        assert COSTELLO_PATTERN in table

    def test_resolved_row(self):
        rows, pattern = self._rows()
        resolved = resolve_speakers(rows, build_lookup_table(rows, [pattern], None))
        rec = resolved[0]
        assert rec.name == "Costello, Peter, MP"
        assert (rec.electorate, rec.party, rec.in_gov, rec.first_speech) == ("Higgins", "LP", 1, 0)

    def test_lookup_frame_columns(self):
        rows, pattern = self._rows()
        frame = build_lookup_table(rows, [pattern], None).to_frame()
        assert list(frame.columns) == ["surface_form", "full_name", "name.id", "electorate", "party", "gender", "uniqueID"]


class TestInterjections:
    def test_presiding_officer_is_never_an_interjection(self):
        lexicon = build_name_variant_lexicon(None, {"Mr VAN MANEN"})
        rows = assign_order(split_modern_speech(
            VAN_MANEN_TEXT, lexicon, [], opening=TalkerFields(display_name="Mr VAN MANEN", name_id="HVX")))
        records = flag_interjections(resolve_speakers(rows, LookupTable(), lexicon=lexicon))
        assert [r.interject for r in records] == [0, 0]
        assert records[1].name == "The SPEAKER"
        assert records[1].presiding

    def test_other_member_interjects_and_floor_holder_does_not(self):
        lexicon = build_name_variant_lexicon(None, {"Mr SMITH", "Mr JONES"})
        rows = assign_order(split_modern_speech(
            "Point one. Mr JONES: Rubbish! Mr SMITH: Point two.", lexicon, [],
            opening=TalkerFields(display_name="Mr SMITH", name_id="S01")))
        records = flag_interjections(resolve_speakers(rows, LookupTable(), lexicon=lexicon))
        assert [r.interject for r in records] == [0, 1, 0]

    def test_general_interjection_is_flagged(self):
        lexicon = build_name_variant_lexicon(None, {"Mr SMITH"})
        rows = assign_order(split_modern_speech(
            "Point one. Honourable members interjecting— Mr SMITH: Point two.", lexicon, [],
            opening=TalkerFields(display_name="Mr SMITH")))
        records = flag_interjections(resolve_speakers(rows, LookupTable(), lexicon=lexicon))
        assert records[1].general
        assert [r.interject for r in records] == [0, 1, 0]


class TestPresiding:
    def test_deputy_resolves_through_parenthetical(self):
        registry = fixture_registry()
        rows = [_raw("The DEPUTY SPEAKER (Ms Vasquez)", "Order!")]
        rec = resolve_speakers(rows, LookupTable(), registry, DAY)[0]
        assert rec.unique_id == DEPUTY.unique_id
        assert rec.name == DEPUTY.full_name
        assert rec.presiding

    def test_unknown_chair_gets_role_label(self):
        rec = resolve_speakers([_raw("the Deputy Speaker", "Order!")], LookupTable())[0]
        assert rec.name == "The DEPUTY SPEAKER"

    def test_role_label(self):
        assert role_label("the Acting Deputy Speaker (Mr X)") == "The ACTING DEPUTY SPEAKER"


class TestFillMissingDetails:
    def test_short_form_upgraded_from_same_day_full_form(self):
        full = AttributedStatement(_raw("Mr SMITH", "Opening.", order=1), name="Smith, John, MP", name_id="S01",
                                   party="ALP", electorate="Avon", gender="male", unique_id="Smith1950")
        short = AttributedStatement(_raw("Mr SMITH", "Later.", speech_no=2, order=2), name="Mr SMITH")
        filled = fill_missing_details([full, short], None)
        assert filled[1].name == "Smith, John, MP"
        assert (filled[1].name_id, filled[1].party, filled[1].unique_id) == ("S01", "ALP", "Smith1950")

    def test_ambiguous_short_form_left_alone(self):
        a = AttributedStatement(_raw("Mr SMITH", "A."), name="Smith, John, MP", unique_id="Smith1950")
        b = AttributedStatement(_raw("Ms SMITH", "B.", speech_no=2), name="Smith, Jane, MP", unique_id="Smith1960")
        short = AttributedStatement(_raw("Mr SMITH", "C.", speech_no=3), name="Mr SMITH")
        assert fill_missing_details([a, b, short], None)[2].name == "Mr SMITH"

    def test_registry_fills_gaps(self):
        registry = fixture_registry()
        member = next(iter(registry))
        rec = AttributedStatement(_raw("x", "Body."), name=member.full_name, name_id=member.name_id)
        filled = fill_missing_details([rec], registry, DAY)[0]
        assert filled.unique_id == member.unique_id
        assert filled.party == member.intervals[0].party
        assert filled.gender == member.gender


def test_partyfacts_ids_attached():
    rec = AttributedStatement(_raw("x", "Body."), name="Someone", party="LP")
    ind = AttributedStatement(_raw("y", "Body."), name="Other", party="IND")
    out = attach_partyfacts([rec, ind], fixture_partyfacts())
    assert [r.partyfacts_id for r in out] == [102, None]
    assert attach_partyfacts([rec], None)[0].partyfacts_id is None
