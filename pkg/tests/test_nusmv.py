import stat

import pytest

from nodecheck.checker import Trace, check
from nodecheck.emitter import emit_smv
from nodecheck.errors import NusmvMissing, NusmvTimeout, TraceParseError
from nodecheck.kripke import build_state_space
from nodecheck.nusmv import find_nusmv, map_trace, parse_traces, run_nusmv
from nodecheck.translator import translate

from oracle import replay_trace
from systems import sw_system

# recorded NuSMV output for the on/off toggle example
SW_COUNTEREXAMPLE = """\
-- specification AG (AF sw = on)  is false
-- as demonstrated by the following execution sequence
Trace Description: CTL Counterexample
Trace Type: Counterexample
-> State: 1.1 <-
sw = on
-- Loop starts here
-> State: 1.2 <-
sw = off
-> State: 1.3 <-
"""

# recorded movie-skip counterexample listing (elision line included)
VALUE_TRANSITIONS = """\
-> State: 1.1 <-
ScriptStart1Out = Out
SetEventMode2In = none
...
MovieClip3State = Stopped
EventMode = false
-> State: 1.2 <-
ScriptStart1Out = none
SetEventMode2In = Enable
-> State: 1.3 <-
SetEventMode2In = none
SetEventMode2Out = Out
EventMode = true
-> State: 1.4 <-
SetEventMode2Out = none
MovieClip3In = Start
-> State: 1.5 <-
MovieClip3In = none
MovieClip3State = Playing
-> State: 1.6 <-
MovieClip3State = Skipped
-> State: 1.7 <-
MovieClip3Out = Skipped
MovieClip3State = Stopped
-> State: 1.8 <-
MovieClip3Out = none
If5In = In
-> State: 1.9 <-
If5In = none
If5Out = False
"""

BUG_ROUTE_FLOW = [
    ("ScriptStart1", "Out"),
    ("SetEventMode2", "Enable"),
    ("SetEventMode2", "Out"),
    ("MovieClip3", "Start"),
    ("MovieClip3", "Skipped"),
    ("If5", "In"),
    ("If5", "False"),
]


class TestParseTraces:
    def test_sw_counterexample(self):
        ((spec, holds, trace),) = parse_traces(SW_COUNTEREXAMPLE)
        assert spec == "AG (AF sw = on)"
        assert holds is False
        assert trace == Trace(prefix=({"sw": "on"},), loop=({"sw": "off"},))

    def test_true_specs_have_no_trace(self):
        raw = "-- specification AG (AF sw = on)  is true\n"
        assert parse_traces(raw) == [("AG (AF sw = on)", True, None)]

    def test_value_transitions_carry_forward(self):
        ((_, _, trace),) = parse_traces(VALUE_TRANSITIONS)
        states = trace.states()
        assert len(states) == 9
        # unlisted variables keep their previous values
        assert [s["MovieClip3State"] for s in states] == [
            "Stopped", "Stopped", "Stopped", "Stopped",
            "Playing", "Skipped", "Stopped", "Stopped", "Stopped",
        ]
        assert [s["EventMode"] for s in states[:3]] == ["false", "false", "true"]
        assert all(s["EventMode"] == "true" for s in states[2:])
        assert states[8]["If5Out"] == "False"
        assert states[8]["SetEventMode2In"] == "none"

    def test_multiple_specs(self):
        raw = (
            "-- specification AG x = a  is true\n"
            + SW_COUNTEREXAMPLE
            + "-- specification EF y = b  is true\n"
        )
        results = parse_traces(raw)
        assert [(spec, holds) for spec, holds, _ in results] == [
            ("AG x = a", True),
            ("AG (AF sw = on)", False),
            ("EF y = b", True),
        ]
        assert results[1][2] is not None

    def test_malformed_block_reports_line(self):
        raw = "-> State: 1.1 <-\nsw = on\nthis is garbage\n"
        with pytest.raises(TraceParseError, match="line 3"):
            parse_traces(raw)


class TestMapTrace:
    def test_bug_route_flow(self, movie_graph, registry, flag_reset):
        ts = translate(movie_graph, registry, [flag_reset])
        ((_, _, trace),) = parse_traces(VALUE_TRANSITIONS)
        flow = map_trace(trace, ts)
        assert flow.port_sequence() == BUG_ROUTE_FLOW
        directions = [e.direction for e in flow.events]
        assert directions == ["out", "in", "out", "in", "out", "in", "out"]
        assert (2, "EventMode = true") in flow.annotations
        assert (4, "MovieClip3State = Playing") in flow.annotations

    def test_internal_counterexample_flow(self, movie_graph, registry, flag_reset):
        ts = translate(movie_graph, registry, [flag_reset])
        verdict = check(ts, ts.specs[0])
        flow = map_trace(verdict.counterexample, ts)
        assert flow.port_sequence() == BUG_ROUTE_FLOW

    def test_annotation_only_trace(self, movie_graph, registry, flag_reset):
        ts = translate(movie_graph, registry, [flag_reset])
        trace = Trace(prefix=({"EventMode": "true"},), loop=())
        flow = map_trace(trace, ts)
        assert flow.events == ()
        assert flow.annotations == ((0, "EventMode = true"),)

    def test_encoded_value_renders_internal_state(
        self, movie_graph, registry, flag_reset
    ):
        ts = translate(movie_graph, registry, [flag_reset], encode_states=True)
        trace = Trace(
            prefix=(
                {"MovieClip3Out": "none_Stopped"},
                {"MovieClip3Out": "none_Playing"},
                {"MovieClip3Out": "Skipped"},
            ),
            loop=(),
        )
        flow = map_trace(trace, ts)
        assert ("MovieClip3", "internal:Playing") in flow.port_sequence()
        assert ("MovieClip3", "Skipped") in flow.port_sequence()


class TestRunNusmv:
    def test_missing_binary(self, tmp_path):
        with pytest.raises(NusmvMissing):
            run_nusmv("MODULE main\n", str(tmp_path / "no-such-binary"),
                      workdir=str(tmp_path))

    def test_timeout(self, tmp_path):
        slow = tmp_path / "slow"
        slow.write_text("#!/bin/sh\nsleep 5\n")
        slow.chmod(slow.stat().st_mode | stat.S_IEXEC)
        with pytest.raises(NusmvTimeout):
            run_nusmv("MODULE main\n", str(slow), timeout_seconds=0.2,
                      workdir=str(tmp_path))

    def test_captures_output_and_exit(self, tmp_path):
        fake = tmp_path / "fake"
        fake.write_text('#!/bin/sh\ncat "$1"\nexit 3\n')
        fake.chmod(fake.stat().st_mode | stat.S_IEXEC)
        run = run_nusmv("MODULE main\n", str(fake), workdir=str(tmp_path),
                        model_name="m.smv")
        assert run.exit_code == 3
        assert run.output == "MODULE main\n"
        assert (tmp_path / "m.smv").exists()


@pytest.mark.skipif(find_nusmv() is None, reason="NuSMV binary not installed")
class TestEngineAgreement:
    """With a real NuSMV present, emitted fixtures must be accepted and
    both engines must agree on every fixture verdict."""

    def _agree(self, ts, tmp_path):
        binary = find_nusmv()
        run = run_nusmv(emit_smv(ts), binary, workdir=str(tmp_path))
        assert run.exit_code == 0, run.output
        parsed = parse_traces(run.output)
        assert len(parsed) == len(ts.specs)
        ks = build_state_space(ts)
        for (spec_text, holds, trace), f in zip(parsed, ts.specs):
            assert check(ks, f).holds == holds, spec_text
            if trace is not None:
                replay_trace(ts, trace)

    def test_sw(self, tmp_path):
        self._agree(sw_system(), tmp_path)

    @pytest.mark.parametrize("encode", [False, True])
    def test_movie_fixtures(
        self, movie_graph, movie_fixed_graph, registry, flag_reset,
        tmp_path, encode,
    ):
        for g in (movie_graph, movie_fixed_graph):
            ts = translate(g, registry, [flag_reset], encode_states=encode)
            self._agree(ts, tmp_path)
