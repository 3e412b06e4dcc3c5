import datetime

import pytest

from core.errors import MalformedXml, MissingChamber, MissingRoot
from core.records import SchemaEra, Venue
from core.xml_model import ProceedingKind, enumerate_proceedings, parse_document, parse_session_date

from conftest import ERAS, make_fixture


def _doc(body: str, date: str = "2015-02-10") -> bytes:
    return f'<?xml version="1.0" encoding="UTF-8"?><hansard><session.header><date>{date}</date></session.header>{body}</hansard>'.encode()


class TestParseDocument:
    def test_empty_input(self):
        with pytest.raises(MalformedXml):
            parse_document(b"   ")

    def test_not_well_formed_reports_position(self):
        with pytest.raises(MalformedXml) as info:
            parse_document(b"<hansard>\n<chamber.xscript>\n</hansard>")
        assert info.value.line is not None
        assert info.value.offset is not None

    def test_wrong_root(self):
        with pytest.raises(MissingRoot):
            parse_document(b"<senate/>")

    def test_missing_chamber(self):
        doc = parse_document(_doc("<fedchamb.xscript/>"))
        with pytest.raises(MissingChamber):
            doc.require_chamber()

    def test_latin1_fallback(self):
        data = _doc("<chamber.xscript><debate><debateinfo><title>Caf\xe9</title></debateinfo></debate></chamber.xscript>")
        doc = parse_document(data.decode("utf-8").encode("latin-1"))
        assert doc.tree.xpath("string(//title)") == "Café"

    def test_entities_are_not_expanded(self):
        data = (b'<?xml version="1.0"?><!DOCTYPE hansard [<!ENTITY x SYSTEM "file:///etc/passwd">]>'
                b'<hansard><session.header><date>2015-02-10</date></session.header><chamber.xscript><p>&x;</p></chamber.xscript></hansard>')
        doc = parse_document(data)
        assert "root:" not in "".join(doc.chamber_root.itertext())

    def test_unparseable_header_date_leaves_session_date_empty(self):
        doc = parse_document(_doc("<chamber.xscript/>", date="13:445:00"))
        assert doc.session_date is None


class TestEraDetection:
    @pytest.mark.parametrize("era", ERAS)
    def test_fixture_era_is_detected(self, era):
        day = make_fixture(era, 1)
        assert parse_document(day.xml_bytes).era is era

    def test_structure_wins_over_date(self):
        doc = parse_document(_doc("<chamber.xscript/><fedchamb.xscript/>", date="2005-03-08"))
        assert doc.era is SchemaEra.MODERN_FEDCHAMB

    def test_legacy_by_date(self):
        doc = parse_document(_doc("<chamber.xscript><debate/></chamber.xscript>", date="1999-06-01"))
        assert doc.era is SchemaEra.LEGACY_EARLY

    def test_no_structure_and_no_date(self):
        doc = parse_document(b"<hansard><session.header/></hansard>")
        assert doc.era is None


@pytest.mark.parametrize("text,expected", [
    ("2015-02-10", datetime.date(2015, 2, 10)),
    ("10/02/2015", datetime.date(2015, 2, 10)),
    ("Tuesday, 10 February 2015", datetime.date(2015, 2, 10)),
])
def test_header_date_formats(text, expected):
    assert parse_session_date(text) == expected


def test_proceedings_are_in_document_order_chamber_first(modern_day):
    nodes = enumerate_proceedings(parse_document(modern_day.xml_bytes))
    venues = [n.venue for n in nodes if not n.in_writing]
    assert venues == sorted(venues, key=lambda v: v is Venue.FEDERATION_CHAMBER)
    assert nodes[0].kind is ProceedingKind.BUSINESS_START
    paths = [n.path for n in nodes]
    assert len(paths) == len(set(paths))


SUBDEBATE_2_OUTSIDE = _doc(
    "<chamber.xscript><debate><debateinfo><title>WATER BILL</title><page.no>10</page.no></debateinfo>"
    "<subdebate.1><subdebateinfo><title>Second Reading</title><page.no>10</page.no></subdebateinfo>"
    "<speech><talk.text><body><p>First.</p></body></talk.text></speech></subdebate.1>"
    "<subdebate.2><subdebateinfo><title>Amendments</title><page.no>11</page.no></subdebateinfo>"
    "<speech><talk.text><body><p>Second.</p></body></talk.text></speech></subdebate.2>"
    "<speech><talk.text><body><p>Third.</p></body></talk.text></speech>"
    "</debate></chamber.xscript>"
)


def test_subdebate_2_outside_subdebate_1_keeps_document_order():
    nodes = enumerate_proceedings(parse_document(SUBDEBATE_2_OUTSIDE))
    assert [n.kind for n in nodes] == [
        ProceedingKind.DEBATE, ProceedingKind.SUBDEBATE1, ProceedingKind.SPEECH,
        ProceedingKind.SUBDEBATE2, ProceedingKind.SPEECH, ProceedingKind.SPEECH,
    ]
    speeches = [n for n in nodes if n.kind is ProceedingKind.SPEECH]
    assert ["".join(n.element.itertext()) for n in speeches] == ["First.", "Second.", "Third."]
    assert all(n.venue is Venue.CHAMBER for n in nodes)
