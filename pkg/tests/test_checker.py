import random

import pytest

from nodecheck.checker import Trace, check, evaluate
from nodecheck.errors import CheckError, StateCapExceeded
from nodecheck.ir import CtlAF, CtlAG, CtlAtom, CtlEG
from nodecheck.kripke import build_state_space, reachable_stats
from nodecheck.translator import translate

from oracle import OracleChecker, freeze, oracle_reachable, replay_trace
from randgen import ctl_battery, random_system
from systems import empty_system, sw_system


class TestStateSpace:
    def test_sw_two_states(self):
        ks = build_state_space(sw_system())
        assert ks.n_states == 2
        assert [ks.assignment(int(i)) for i in ks.init_indices] == [
            {"sw": "on"}, {"sw": "off"},
        ]

    def test_empty_system_single_state(self):
        ks = build_state_space(empty_system())
        assert ks.n_states == 1
        assert list(ks.successors_of(0)) == [0]

    def test_movie_skip_matches_independent_enumeration(
        self, movie_graph, registry, flag_reset
    ):
        ts = translate(movie_graph, registry, [flag_reset])
        ks = build_state_space(ts)
        graph = oracle_reachable(ts)
        assert ks.n_states == len(graph.states)
        mine = {freeze(ks.assignment(i)) for i in range(ks.n_states)}
        assert mine == set(graph.states)
        # adjacency agrees edge by edge
        for i in range(ks.n_states):
            expected = set(graph.succ[freeze(ks.assignment(i))])
            got = {freeze(ks.assignment(int(j))) for j in ks.successors_of(i)}
            assert got == expected

    def test_movie_skip_reachable_count_frozen(
        self, movie_graph, registry, flag_reset
    ):
        # golden value cross-checked by the oracle enumeration above
        ts = translate(movie_graph, registry, [flag_reset])
        assert build_state_space(ts).n_states == 16

    def test_state_cap(self, movie_graph, registry, flag_reset):
        ts = translate(movie_graph, registry, [flag_reset])
        with pytest.raises(StateCapExceeded):
            build_state_space(ts, state_cap=4)

    def test_out_degree_equals_choice_product(
        self, movie_graph, registry, flag_reset
    ):
        from nodecheck.ir import successors

        ts = translate(movie_graph, registry, [flag_reset])
        ks = build_state_space(ts)
        for i in range(ks.n_states):
            assert len(ks.successors_of(i)) == len(successors(ts, ks.assignment(i)))


class TestStats:
    def test_sw(self):
        assert reachable_stats(sw_system()) == (2, "2^1.0000")

    def test_empty(self):
        assert reachable_stats(empty_system()) == (1, "2^0.0000")

    def test_optimized_strictly_smaller(self, movie_graph, registry, flag_reset):
        plain = reachable_stats(translate(movie_graph, registry, [flag_reset]))
        opt = reachable_stats(
            translate(movie_graph, registry, [flag_reset], encode_states=True)
        )
        assert opt[0] < plain[0]


class TestVerdicts:
    def test_sw_spec_fails_with_stay_off_loop(self):
        ts = sw_system()
        verdict = check(ts, ts.specs[0])
        assert verdict.holds is False
        assert verdict.counterexample is not None
        assert verdict.counterexample.prefix == ({"sw": "on"},)
        assert verdict.counterexample.loop == ({"sw": "off"},)
        replay_trace(ts, verdict.counterexample)

    def test_movie_skip_fails_through_skipped_false(
        self, movie_graph, registry, flag_reset
    ):
        ts = translate(movie_graph, registry, [flag_reset])
        verdict = check(ts, ts.specs[0])
        assert verdict.holds is False
        trace = verdict.counterexample
        assert trace is not None
        replay_trace(ts, trace)
        seen = [
            (s.get("MovieClip3Out"), s.get("If5Out")) for s in trace.prefix
        ]
        assert ("Skipped", "none") in seen
        assert any(if5 == "False" for _, if5 in seen)
        assert all(s["EventMode"] == "true" for s in trace.loop)

    def test_movie_skip_fixed_holds(self, movie_fixed_graph, registry, flag_reset):
        ts = translate(movie_fixed_graph, registry, [flag_reset])
        assert len(ts.fairness) == 1
        assert check(ts, ts.specs[0]).holds is True

    def test_no_fairness_equals_plain_ctl(self):
        rng = random.Random(7)
        for _ in range(10):
            ts = random_system(rng)
            ts_nofair = type(ts)(
                variables=ts.variables, rules=ts.rules, fairness=(),
            )
            ks = build_state_space(ts_nofair)
            assert bool(ks.fair_states().all())

    def test_atom_over_unknown_variable(self):
        ks = build_state_space(sw_system())
        with pytest.raises(CheckError):
            evaluate(ks, CtlAtom("ghost", "on"))
        with pytest.raises(CheckError):
            evaluate(ks, CtlAtom("sw", "purple"))

    def test_failing_safety_spec_gives_finite_witness(
        self, movie_graph, registry, flag_reset
    ):
        from nodecheck.specs import parse_ctl

        ts = translate(movie_graph, registry, [flag_reset])
        verdict = check(ts, parse_ctl("AG (EventMode = false)"))
        assert verdict.holds is False
        trace = verdict.counterexample
        assert trace is not None and trace.loop == ()
        assert trace.prefix[-1]["EventMode"] == "true"
        assert all(s["EventMode"] == "false" for s in trace.prefix[:-1])
        replay_trace(ts, trace)

    def test_unsupported_shape_has_no_witness(self):
        # failing spec whose top-level form carries no trace witness
        ts = sw_system()
        verdict = check(ts, CtlEG(CtlAtom("sw", "on")))
        assert verdict.holds is False
        assert verdict.counterexample is None

    def test_failing_top_level_af_lassos_from_the_bad_init(self):
        ts = sw_system()
        verdict = check(ts, CtlAF(CtlAtom("sw", "on")))
        assert verdict.holds is False
        assert verdict.counterexample == Trace(
            prefix=(), loop=({"sw": "off"},)
        )
        replay_trace(ts, verdict.counterexample)


class TestFairnessPruning:
    def test_af_flips_at_playing_state(self, movie_fixed_graph, registry, flag_reset):
        """Dropping the fairness constraint leaves the endless-Playing path
        in scope, so AF (EventMode = false) fails at the state entered right
        after the clip starts; with fairness it holds."""
        ts = translate(movie_fixed_graph, registry, [flag_reset])
        af = CtlAF(CtlAtom("EventMode", "false"))

        ks_fair = build_state_space(ts)
        ts_nofair = type(ts)(
            variables=ts.variables, rules=ts.rules, fairness=(),
            specs=ts.specs, provenance=ts.provenance,
        )
        ks_nofair = build_state_space(ts_nofair)

        playing = {v.name: "none" for v in ts.variables}
        playing["MovieClip3State"] = "Playing"
        playing["EventMode"] = "true"
        i_fair = ks_fair.find_index(playing)
        i_nofair = ks_nofair.find_index(playing)
        assert i_fair is not None and i_nofair is not None
        assert not evaluate(ks_nofair, af)[i_nofair]
        assert evaluate(ks_fair, af)[i_fair]

    def test_eg_fair_excludes_endless_playing(
        self, movie_fixed_graph, registry, flag_reset
    ):
        ts = translate(movie_fixed_graph, registry, [flag_reset])
        ks = build_state_space(ts)
        always_true = CtlEG(CtlAtom("EventMode", "true"))
        assert not evaluate(ks, always_true).any()


class TestAgainstOracle:
    def _compare(self, ts, formulas):
        ks = build_state_space(ts)
        for use_fairness in (True, False):
            stripped = (
                ts
                if use_fairness
                else type(ts)(variables=ts.variables, rules=ts.rules, fairness=())
            )
            ks_used = ks if use_fairness else build_state_space(stripped)
            oracle = OracleChecker(stripped, use_fairness=use_fairness)
            for f in formulas:
                mine = check(ks_used, f).holds
                theirs = oracle.holds(f)
                assert mine == theirs, (f, use_fairness)

    def test_fixtures(self, movie_graph, movie_fixed_graph, registry, flag_reset):
        rng = random.Random(11)
        for g in (movie_graph, movie_fixed_graph):
            ts = translate(g, registry, [flag_reset])
            formulas = list(ts.specs) + ctl_battery(ts, rng)
            self._compare(ts, formulas)

    def test_sw(self):
        ts = sw_system()
        self._compare(ts, list(ts.specs))

    def test_random_systems(self):
        rng = random.Random(1234)
        for case in range(15):
            ts = random_system(rng, big=(case % 5 == 0))
            self._compare(ts, ctl_battery(ts, rng))


class TestTraceValidity:
    def test_all_failing_fixture_traces_replay(
        self, movie_graph, registry, flag_reset
    ):
        ts = translate(movie_graph, registry, [flag_reset], encode_states=True)
        verdict = check(ts, ts.specs[0])
        assert verdict.holds is False and verdict.counterexample is not None
        replay_trace(ts, verdict.counterexample)

    def test_random_failing_lassos_replay(self):
        rng = random.Random(99)
        replayed = 0
        for _ in range(40):
            ts = random_system(rng)
            v = random.Random(replayed).choice(ts.variables)
            spec = CtlAG(CtlAF(CtlAtom(v.name, v.domain[0])))
            verdict = check(ts, spec)
            if not verdict.holds and verdict.counterexample is not None:
                replay_trace(ts, verdict.counterexample)
                replayed += 1
        assert replayed >= 5
