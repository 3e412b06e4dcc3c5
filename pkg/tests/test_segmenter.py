import pytest
from hypothesis import given, strategies as st
from lxml import etree

from core.records import STAGE_DIRECTION_NAME, RawStatement, StatementKind, TalkerFields, TalkerPattern, Venue
from core.segmenter import (
    NameVariantLexicon, StageDirectionLexicon, assign_order, build_name_variant_lexicon, capitalise_surname,
    fix_early_talker, given_name_forms, is_presiding, normalize_text, politician_variants, raw_talker_pattern,
    read_talker, separate_stage_directions, split_legacy_debate, split_modern_speech,
)

COSTELLO_PATTERN = "09:31:0010261Costello, Peter, MPMr COSTELLOCT4HigginsLPTreasurer10"

VAN_MANEN_TEXT = (
    "Mr VAN MANEN (Forde---Chief Government Whip) (13:59): It's a great pleasure to speak about the local "
    "manufacturers who make things for design and---The SPEAKER: Order! In accordance with standing order 43, "
    "the time for members' statements has concluded."
)


def _costello_talker() -> etree._Element:
    talker = etree.Element("talker")
    for tag, text, attrs in (
        ("time.stamp", "09:31:00", {}),
        ("page.no", "10261", {}),
        ("name", "Costello, Peter, MP", {"role": "metadata"}),
        ("name", "Mr COSTELLO", {"role": "display"}),
        ("name.id", "CT4", {}),
        ("electorate", "Higgins", {}),
        ("party", "LP", {}),
        ("role", "Treasurer", {}),
        ("in.gov", "1", {}),
        ("first.speech", "0", {}),
    ):
        etree.SubElement(talker, tag, **attrs).text = text
    return talker


class TestTalkerBlocks:
    def test_raw_pattern_is_the_concatenated_children(self):
        assert raw_talker_pattern(_costello_talker()) == COSTELLO_PATTERN

    def test_read_talker_fields(self):
        fields = read_talker(_costello_talker())
        assert fields.display_name == "Mr COSTELLO"
        assert fields.name == "Costello, Peter, MP"
        assert (fields.name_id, fields.electorate, fields.party) == ("CT4", "Higgins", "LP")
        assert (fields.in_gov, fields.first_speech) == ("1", "0")

    def test_early_display_punctuation(self):
        fixed = fix_early_talker(TalkerFields(display_name="Mr. HOWARD."))
        assert fixed.display_name == "Mr HOWARD"


class TestModernSplit:
    def test_speaker_interruption_becomes_its_own_row(self):
        lexicon = build_name_variant_lexicon(None, {"Mr VAN MANEN"})
        opening = TalkerFields(time="13:59:00", display_name="Mr VAN MANEN", name_id="HVX")
        rows = split_modern_speech(VAN_MANEN_TEXT, lexicon, [], opening=opening)
        assert len(rows) == 2
        assert rows[0].surface_name == "Mr VAN MANEN"
        assert rows[0].kind is StatementKind.OPENING
        assert rows[0].body.startswith("It's a great pleasure")
        assert rows[0].body.endswith("for design and—")
        assert rows[1].surface_name == "The SPEAKER"
        assert rows[1].body.startswith("Order! In accordance with standing order 43")
        assert rows[1].kind is StatementKind.INTERJECTION_CANDIDATE

    def test_interjecting_keeps_name_in_body(self):
        lexicon = build_name_variant_lexicon(None, {"Mr SMITH", "Mr JONES"})
        rows = split_modern_speech(
            "This is the point. Mr JONES interjecting— Mr SMITH: As I was saying.", lexicon, [],
            opening=TalkerFields(display_name="Mr SMITH"),
        )
        assert [r.surface_name for r in rows] == ["Mr SMITH", "Mr JONES", "Mr SMITH"]
        assert rows[1].body == "Mr JONES interjecting—"
        assert rows[2].kind is StatementKind.CONTINUATION

    def test_general_interjection(self):
        lexicon = build_name_variant_lexicon(None, {"Mr SMITH"})
        rows = split_modern_speech(
            "We will fix this. Honourable members interjecting— Mr SMITH: Thank you.", lexicon, [],
            opening=TalkerFields(display_name="Mr SMITH"),
        )
        assert rows[1].surface_name == "Honourable members"

    def test_skeleton_supplies_talker_and_page(self):
        lexicon = build_name_variant_lexicon(None, {"Mr SMITH", "Mr JONES"})
        skeleton = [TalkerFields(page_no="42", display_name="Mr JONES", name_id="J01")]
        rows = split_modern_speech(
            "First point. Mr JONES: A question. Mr SMITH: An answer.", lexicon, skeleton,
            opening=TalkerFields(page_no="41", display_name="Mr SMITH"),
        )
        assert rows[1].talker.name_id == "J01"
        assert [r.page_no for r in rows] == ["41", "42", "42"]

    def test_empty_text(self):
        assert split_modern_speech("   ", NameVariantLexicon({}), []) == []

    def test_name_opening_a_paragraph_splits_after_a_closing_quote(self):
        lexicon = build_name_variant_lexicon(None, {"Mr SMITH", "Mr JONES"})
        rows = split_modern_speech(
            "The minister said \"no more\"\nMr JONES: That is not what was said.", lexicon, [],
            opening=TalkerFields(display_name="Mr SMITH"),
        )
        assert [r.surface_name for r in rows] == ["Mr SMITH", "Mr JONES"]
        assert rows[0].body == "The minister said \"no more\""
        assert rows[1].body == "That is not what was said."

    def test_name_opening_a_paragraph_splits_without_punctuation(self):
        lexicon = build_name_variant_lexicon(None, {"Mr SMITH", "Mr JONES"})
        rows = split_modern_speech(
            "I will come back to that\nMr JONES interjecting\nMr SMITH: As I was saying", lexicon, [],
            opening=TalkerFields(display_name="Mr SMITH"),
        )
        assert [r.surface_name for r in rows] == ["Mr SMITH", "Mr JONES", "Mr SMITH"]
        assert rows[1].body == "Mr JONES interjecting"
        assert all("\n" not in r.body for r in rows)

    def test_name_inside_a_paragraph_is_not_a_boundary(self):
        lexicon = build_name_variant_lexicon(None, {"Mr SMITH", "Mr JONES"})
        rows = split_modern_speech(
            "I thank Mr JONES: he raised it first", lexicon, [], opening=TalkerFields(display_name="Mr SMITH"),
        )
        assert len(rows) == 1


class TestLegacySplit:
    def test_inline_pattern_is_cut_out(self):
        fields = read_talker(_costello_talker())
        pattern = TalkerPattern(COSTELLO_PATTERN, fields, "speech", Venue.CHAMBER, path="/hansard/x")
        text = f"{COSTELLO_PATTERN} I move that the bill be now read a second time."
        rows = split_legacy_debate(text, [pattern], NameVariantLexicon({}))
        assert len(rows) == 1
        assert rows[0].surface_name == "Mr COSTELLO"
        assert rows[0].body == "I move that the bill be now read a second time."
        assert (rows[0].time_stamp, rows[0].page_no) == ("09:31:00", "10261")

    def test_missing_pattern_is_reported(self):
        fields = read_talker(_costello_talker())
        pattern = TalkerPattern(COSTELLO_PATTERN, fields, "speech", Venue.CHAMBER)
        issues = []
        split_legacy_debate("Nothing to see here.", [pattern], NameVariantLexicon({}), issues=issues)
        assert [i.kind for i in issues] == ["PatternNotFound"]

    def test_identical_patterns_are_consumed_left_to_right(self):
        fields = read_talker(_costello_talker())
        first = TalkerPattern(COSTELLO_PATTERN, fields, "speech", Venue.CHAMBER, path="/hansard/a")
        second = TalkerPattern(COSTELLO_PATTERN, fields, "continuation", Venue.CHAMBER, path="/hansard/b")
        text = f"{COSTELLO_PATTERN} First part. {COSTELLO_PATTERN} Second part."
        rows = split_legacy_debate(text, [first, second], NameVariantLexicon({}))
        assert [(r.source_path, r.body) for r in rows] == [("/hansard/a", "First part."), ("/hansard/b", "Second part.")]
        assert rows[1].kind is StatementKind.CONTINUATION

    def test_title_anchor_does_not_start_a_statement(self):
        fields = read_talker(_costello_talker())
        pattern = TalkerPattern(COSTELLO_PATTERN, fields, "speech", Venue.CHAMBER)
        text = f"WATER AMENDMENT BILL1234 {COSTELLO_PATTERN} I support it."
        rows = split_legacy_debate(text, ["WATER AMENDMENT BILL1234", pattern], NameVariantLexicon({}))
        assert [r.surface_name for r in rows] == ["Mr COSTELLO"]


class TestStageDirections:
    def _statement(self, body):
        return RawStatement(1, 0, "Mr SMITH", body, None, "12", StatementKind.OPENING)

    def test_trailing_phrases_become_rows(self, stage_lexicon):
        rows = separate_stage_directions(
            [self._statement("I commend the bill to the House. Question agreed to. Bill read a second time.")],
            stage_lexicon,
        )
        assert [r.surface_name for r in rows] == ["Mr SMITH", STAGE_DIRECTION_NAME, STAGE_DIRECTION_NAME]
        assert [r.body for r in rows[1:]] == ["Question agreed to.", "Bill read a second time."]
        assert all(r.page_no == "12" for r in rows)

    def test_leading_phrase_comes_before_the_statement(self, stage_lexicon):
        rows = separate_stage_directions(
            [self._statement("Question agreed to. I now turn to the next item.")], stage_lexicon,
        )
        assert [(r.kind, r.body) for r in rows] == [
            (StatementKind.STAGE_DIRECTION, "Question agreed to."),
            (StatementKind.OPENING, "I now turn to the next item."),
        ]
        assert rows[0].speech_no == rows[1].speech_no

    def test_leading_phrase_must_be_a_whole_sentence(self, stage_lexicon):
        body = "Question agreed to.5 of the members present said so."
        assert separate_stage_directions([self._statement(body)], stage_lexicon)[0].body == body

    def test_phrase_in_the_middle_is_left_alone(self, stage_lexicon):
        body = "I say this. Question agreed to. That was the vote, and now I continue."
        assert separate_stage_directions([self._statement(body)], stage_lexicon)[0].body == body

    def test_body_that_is_only_a_phrase(self):
        lexicon = StageDirectionLexicon.from_phrases(["Debate adjourned."])
        rows = separate_stage_directions([self._statement("Debate adjourned.")], lexicon)
        assert [(r.kind, r.body) for r in rows] == [(StatementKind.STAGE_DIRECTION, "Debate adjourned.")]


class TestLexicon:
    def test_variants_cover_titles_and_capitals(self):
        variants = politician_variants("McCormack", ("Michael",), "male")
        assert "Mr McCORMACK" in variants
        assert "Mr Michael McCormack" in variants
        assert "Ms McCORMACK" not in variants

    def test_given_name_forms(self):
        forms = given_name_forms(("Michael", "Francis"), "Mick")
        assert forms[0] == "Mick"
        assert {"Michael", "M", "M.", "Michael Francis", "MF", "M. F."} <= set(forms)
        assert len(forms) == len(set(forms))

    def test_capitalise_surname(self):
        assert capitalise_surname("McCormack") == "McCORMACK"
        assert capitalise_surname("Van Manen") == "VAN MANEN"

    @pytest.mark.parametrize("surface", ["The SPEAKER", "The DEPUTY SPEAKER (Ms Vasquez)", "Mr Speaker", "Madam Deputy Speaker"])
    def test_presiding_forms(self, surface):
        assert is_presiding(surface)

    def test_member_is_not_presiding(self):
        assert not is_presiding("Mr SPEAKMAN")


@given(st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=30))
def test_order_is_dense_and_puts_written_questions_last(flags):
    statements = [
        RawStatement(i + 1, 0, "Mr X", f"body {i}", None, None, StatementKind.OPENING, q_in_writing=flag)
        for i, flag in enumerate(flags)
    ]
    ordered = assign_order(statements)
    assert [s.order for s in ordered] == list(range(1, len(flags) + 1))
    in_writing = [s.q_in_writing for s in ordered]
    assert in_writing == sorted(in_writing)


@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=80))
def test_normalize_text_is_idempotent(text):
    once = normalize_text(text)
    assert normalize_text(once) == once
