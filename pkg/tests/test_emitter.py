import pytest

from nodecheck.emitter import emit_smv, render_ctl, render_guard
from nodecheck.errors import EmitError
from nodecheck.ir import (
    TransitionRule,
    TransitionSystem,
    Variable,
    successors,
)
from nodecheck.semantics import Atom, Guard, RuleList, TRUE, ValueChoice
from nodecheck.specs import parse_ctl
from nodecheck.translator import translate

from conftest import golden_path
from oracle import freeze, oracle_reachable
from smv_reparse import reparse_smv
from systems import empty_system, sw_system


def read_golden(name: str) -> str:
    with open(golden_path(name)) as f:
        return f.read()


class TestGolden:
    def test_sw_golden_is_the_ten_line_program(self):
        text = emit_smv(sw_system())
        assert text == read_golden("sw.smv")
        assert len(text.splitlines()) == 10
        assert text.splitlines()[:3] == ["MODULE main", "VAR", "  sw : {on, off};"]
        assert "  init(sw) := {on, off};" in text
        assert "    sw = on : off;" in text
        assert "    TRUE : sw;" in text
        assert text.splitlines()[-1] == "CTLSPEC AG (AF sw = on)"

    def test_movie_skip(self, movie_graph, registry, flag_reset):
        ts = translate(movie_graph, registry, [flag_reset])
        assert emit_smv(ts) == read_golden("movie_skip.smv")

    def test_movie_skip_optimized(self, movie_graph, registry, flag_reset):
        ts = translate(movie_graph, registry, [flag_reset], encode_states=True)
        assert emit_smv(ts) == read_golden("movie_skip_opt.smv")

    def test_flag_reset_spec_line(self, movie_graph, registry, flag_reset):
        ts = translate(movie_graph, registry, [flag_reset])
        assert (
            "CTLSPEC AG (EventMode = true -> AF (EventMode = false))"
            in emit_smv(ts).splitlines()
        )

    def test_empty_system(self):
        assert emit_smv(empty_system()) == "MODULE main\n"

    def test_deterministic_bytes(self, movie_graph, registry, flag_reset):
        ts1 = translate(movie_graph, registry, [flag_reset])
        ts2 = translate(movie_graph, registry, [flag_reset])
        assert emit_smv(ts1) == emit_smv(ts2)


class TestRendering:
    def test_guard_disjunction_flat(self):
        g = Guard(((Atom("a", "x"),), (Atom("b", "y"),)))
        assert render_guard(g) == "a = x | b = y"

    def test_guard_parenthesizes_multi_atom_disjuncts(self):
        g = Guard(((Atom("a", "x"), Atom("b", "y")), (Atom("c", "z"),)))
        assert render_guard(g) == "(a = x & b = y) | c = z"

    def test_true_guard(self):
        assert render_guard(TRUE) == "TRUE"

    @pytest.mark.parametrize(
        "text",
        [
            "AG (AF sw = on)",
            "AG (EventMode = true -> AF (EventMode = false))",
            "E [ a = x U b = y ]",
            "EX (a = x & b = y)",
        ],
    )
    def test_ctl_round_trip(self, text):
        assert render_ctl(parse_ctl(text)) == text

    def test_illegal_symbol_rejected(self):
        bad = TransitionSystem(
            variables=(Variable("x y", ("a",), ("a",)),),
            rules=(TransitionRule("x y", RuleList((), ValueChoice(("a",)))),),
        )
        with pytest.raises(EmitError):
            emit_smv(bad)


class TestReparseRoundTrip:
    """Re-parsing emitted text yields a system with the same successors."""

    @pytest.mark.parametrize("encode", [False, True])
    def test_movie_skip(self, movie_graph, registry, flag_reset, encode):
        ts = translate(movie_graph, registry, [flag_reset], encode_states=encode)
        back = reparse_smv(emit_smv(ts))
        assert back.variable_names() == ts.variable_names()
        graph = oracle_reachable(ts)
        for state in graph.states:
            original = {freeze(s) for s in successors(ts, dict(state))}
            reparsed = {freeze(s) for s in successors(back, dict(state))}
            assert original == reparsed

    def test_sw(self):
        ts = sw_system()
        back = reparse_smv(emit_smv(ts))
        for value in ("on", "off"):
            assert successors(ts, {"sw": value}) == successors(back, {"sw": value})
