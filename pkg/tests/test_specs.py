import pytest

from nodecheck.emitter import render_ctl
from nodecheck.errors import CtlParseError
from nodecheck.ir import (
    CtlAF,
    CtlAG,
    CtlAnd,
    CtlAtom,
    CtlEU,
    CtlImplies,
    CtlNot,
    CtlOr,
)
from nodecheck.specs import FlagReset, load_spec_requests, parse_ctl


class TestFlagReset:
    def test_expansion(self):
        f = FlagReset("EventMode", "true", "false").expand()
        assert f == CtlAG(
            CtlImplies(
                CtlAtom("EventMode", "true"), CtlAF(CtlAtom("EventMode", "false"))
            )
        )


class TestParse:
    def test_atom(self):
        assert parse_ctl("sw = on") == CtlAtom("sw", "on")

    def test_nested_temporal(self):
        assert parse_ctl("AG (AF sw = on)") == CtlAG(CtlAF(CtlAtom("sw", "on")))

    def test_flag_reset_shape(self):
        f = parse_ctl("AG (EventMode = true -> AF (EventMode = false))")
        assert f == FlagReset("EventMode", "true", "false").expand()

    def test_precedence(self):
        f = parse_ctl("a = x & b = y | c = z")
        assert f == CtlOr(
            CtlAnd(CtlAtom("a", "x"), CtlAtom("b", "y")), CtlAtom("c", "z")
        )

    def test_implies_right_associative(self):
        f = parse_ctl("a = x -> b = y -> c = z")
        assert f == CtlImplies(
            CtlAtom("a", "x"), CtlImplies(CtlAtom("b", "y"), CtlAtom("c", "z"))
        )

    def test_until(self):
        f = parse_ctl("E [ a = x U b = y ]")
        assert f == CtlEU(CtlAtom("a", "x"), CtlAtom("b", "y"))

    def test_negation(self):
        assert parse_ctl("!(sw = on)") == CtlNot(CtlAtom("sw", "on"))

    @pytest.mark.parametrize(
        "bad", ["", "AG", "sw =", "(sw = on", "sw = on )", "E [ a = b ]", "= on"]
    )
    def test_malformed(self, bad):
        with pytest.raises(CtlParseError):
            parse_ctl(bad)

    @pytest.mark.parametrize(
        "text",
        [
            "AG (AF sw = on)",
            "AG (EventMode = true -> AF (EventMode = false))",
            "E [ a = x U b = y ]",
            "!(a = x) & (b = y | c = z)",
            "EX (AX (EG (EF a = x)))",
        ],
    )
    def test_render_parse_round_trip(self, text):
        f = parse_ctl(text)
        assert parse_ctl(render_ctl(f)) == f


class TestLoadRequests:
    def test_mixed_document(self):
        doc = """{"specs": [
            {"flag_reset": {"var": "EventMode", "set": "true", "reset": "false"}},
            {"ctl": "AG (AF sw = on)"}]}"""
        reqs = load_spec_requests(doc)
        assert reqs[0] == FlagReset("EventMode", "true", "false")
        assert reqs[1] == CtlAG(CtlAF(CtlAtom("sw", "on")))

    def test_bad_entry(self):
        with pytest.raises(CtlParseError):
            load_spec_requests('{"specs": [{"nope": 1}]}')
