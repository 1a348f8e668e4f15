import pytest

from nodecheck.ir import (
    TransitionRule,
    TransitionSystem,
    Variable,
    eval_guard,
    successors,
)
from nodecheck.semantics import Atom, Guard, HOLD, RuleList, TRUE, ValueChoice
from nodecheck.translator import translate

from oracle import freeze
from systems import empty_system, sw_system


class TestEvalGuard:
    def test_atom_match(self):
        g = Guard(((Atom("SetEventMode2In", "Enable"),),))
        assert eval_guard(g, {"SetEventMode2In": "Enable"})

    def test_true_guard(self):
        assert eval_guard(TRUE, {})
        assert eval_guard(TRUE, {"x": "y"})

    def test_conjunction_fails_on_one_atom(self):
        g = Guard(((Atom("in", "Enable"), Atom("EventMode", "false")),))
        assert not eval_guard(g, {"in": "Disable", "EventMode": "false"})

    def test_disjunction(self):
        g = Guard(((Atom("a", "x"),), (Atom("b", "y"),)))
        assert eval_guard(g, {"a": "no", "b": "y"})
        assert not eval_guard(g, {"a": "no", "b": "no"})

    def test_unknown_variable_raises(self):
        with pytest.raises(KeyError):
            eval_guard(Guard(((Atom("missing", "x"),),)), {"a": "x"})


class TestSuccessors:
    def test_sw_on_steps_to_off(self):
        assert successors(sw_system(), {"sw": "on"}) == [{"sw": "off"}]

    def test_sw_off_holds(self):
        assert successors(sw_system(), {"sw": "off"}) == [{"sw": "off"}]

    def test_movie_playing_branches_three_ways(
        self, movie_graph, registry, flag_reset
    ):
        ts = translate(movie_graph, registry, [flag_reset])
        state = {v.name: "none" for v in ts.variables}
        state["MovieClip3State"] = "Playing"
        state["EventMode"] = "true"
        out = successors(ts, state)
        assert len(out) == 3
        assert {s["MovieClip3State"] for s in out} == {
            "Playing", "Finished", "Skipped",
        }
        for s in out:
            rest_a = {k: v for k, v in s.items() if k != "MovieClip3State"}
            rest_b = {k: v for k, v in state.items() if k != "MovieClip3State"}
            assert rest_a == rest_b

    def test_empty_system_self_loop(self):
        assert successors(empty_system(), {}) == [{}]

    def test_successor_count_is_choice_product(self, movie_graph, registry):
        ts = translate(movie_graph, registry)
        state = {v.name: v.init[0] for v in ts.variables}
        # deterministic everywhere from the initial state
        assert len(successors(ts, state)) == 1


class TestRecordedTraceReplay:
    """The recorded counterexample sequence replays step by step."""

    STEPS = [
        {"ScriptStart1Out": "Out", "MovieClip3State": "Stopped",
         "EventMode": "false"},
        {"ScriptStart1Out": "none", "SetEventMode2In": "Enable"},
        {"SetEventMode2In": "none", "SetEventMode2Out": "Out",
         "EventMode": "true"},
        {"SetEventMode2Out": "none", "MovieClip3In": "Start"},
        {"MovieClip3In": "none", "MovieClip3State": "Playing"},
        {"MovieClip3State": "Skipped"},
        {"MovieClip3Out": "Skipped", "MovieClip3State": "Stopped"},
        {"MovieClip3Out": "none", "If5In": "In"},
        {"If5In": "none", "If5Out": "False"},
    ]

    def test_replay(self, movie_graph, registry, flag_reset):
        ts = translate(movie_graph, registry, [flag_reset])
        state = {v.name: "none" for v in ts.variables}
        state.update(self.STEPS[0])
        for delta in self.STEPS[1:]:
            expected = dict(state)
            expected.update(delta)
            nexts = [freeze(s) for s in successors(ts, state)]
            assert freeze(expected) in nexts
            state = expected


class TestValidation:
    def test_rule_per_variable_enforced(self):
        v = Variable("a", ("x", "y"), ("x",))
        with pytest.raises(ValueError):
            TransitionSystem(variables=(v,), rules=())

    def test_choice_outside_domain(self):
        v = Variable("a", ("x", "y"), ("x",))
        rule = TransitionRule("a", RuleList((), ValueChoice(("z",))))
        with pytest.raises(ValueError):
            TransitionSystem(variables=(v,), rules=(rule,))

    def test_guard_over_unknown_variable(self):
        v = Variable("a", ("x",), ("x",))
        rule = TransitionRule(
            "a",
            RuleList(((Guard(((Atom("ghost", "x"),),)), ValueChoice(("x",))),), HOLD),
        )
        with pytest.raises(ValueError):
            TransitionSystem(variables=(v,), rules=(rule,))

    def test_domains_compare_as_sets(self):
        a = Variable("a", ("x", "y"), ("x",))
        b = Variable("a", ("y", "x"), ("x",))
        assert a == b
