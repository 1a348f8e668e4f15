"""External NuSMV client: run the binary, parse verdicts and traces, and
map variable-level counterexamples back to node-level control flows.

NuSMV prints state blocks as deltas (only changed variables); the parser
carries unlisted variables forward. A bare ``...`` line inside a state
block is tolerated as an elision marker.
"""

from __future__ import annotations

import os
import re
import shutil
import subprocess
from dataclasses import dataclass

from .checker import Trace
from .errors import NusmvMissing, NusmvTimeout, TraceParseError
from .ir import (
    Assignment,
    ROLE_INPUT,
    ROLE_OUTPUT,
    TransitionSystem,
)
from .semantics import NONE_VALUE

NUSMV_ENV_VAR = "NODECHECK_NUSMV"


def find_nusmv() -> str | None:
    """Binary path from ``NODECHECK_NUSMV`` or PATH lookup, else ``None``."""
    env = os.environ.get(NUSMV_ENV_VAR)
    if env:
        return env
    return shutil.which("NuSMV") or shutil.which("nusmv")


@dataclass(frozen=True)
class NusmvRun:
    output: str
    exit_code: int


def run_nusmv(
    model_text: str,
    binary_path: str,
    timeout_seconds: float = 60.0,
    *,
    workdir: str = ".",
    model_name: str = "model.smv",
) -> NusmvRun:
    """Write the model, invoke ``<binary> <file>`` in batch mode, capture
    stdout+stderr. Distinct failures: missing binary, timeout."""
    path = os.path.join(workdir, model_name)
    with open(path, "w", encoding="ascii") as f:
        f.write(model_text)
    try:
        proc = subprocess.run(
            [binary_path, path],
            capture_output=True,
            text=True,
            timeout=timeout_seconds,
        )
    except FileNotFoundError as exc:
        raise NusmvMissing(f"NuSMV binary not found: {binary_path}") from exc
    except PermissionError as exc:
        raise NusmvMissing(f"NuSMV binary not executable: {binary_path}") from exc
    except subprocess.TimeoutExpired as exc:
        raise NusmvTimeout(timeout_seconds) from exc
    return NusmvRun(output=proc.stdout + proc.stderr, exit_code=proc.returncode)


_SPEC_RE = re.compile(r"^-- specification\s+(.*?)\s+is (true|false)\s*$")
_STATE_RE = re.compile(r"^-> State: (\d+)\.(\d+) <-$")
_ASSIGN_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_.$#-]*)\s*=\s*(\S+)\s*$")
_LOOP_MARK = "-- Loop starts here"


def parse_traces(raw: str) -> list[tuple[str, bool, Trace | None]]:
    """Parse ``-- specification ... is true/false`` lines and the state
    blocks that follow false ones.

    Returns ``(spec text, holds, trace)`` triples in output order. The
    final state block of a looping trace repeats the loop-start state and
    is folded away; ``-- Loop starts here`` marks where the loop begins.
    """
    results: list[tuple[str, bool, Trace | None]] = []
    # per-trace accumulation
    states: list[Assignment] = []
    loop_start: int | None = None
    pending_loop = False
    in_state = False
    spec_open: tuple[str, bool] | None = None

    def finish():
        nonlocal states, loop_start, pending_loop, in_state, spec_open
        trace = None
        if states:
            if loop_start is None:
                trace = Trace(prefix=tuple(states), loop=())
            else:
                # the final block repeats the loop-start state; fold it away
                trace = Trace(
                    prefix=tuple(states[:loop_start]),
                    loop=tuple(states[loop_start:-1])
                    if len(states) > loop_start + 1
                    else tuple(states[loop_start:]),
                )
        if spec_open is not None:
            text, holds = spec_open
            results.append((text, holds, trace))
        elif trace is not None:
            # bare state blocks without a specification line: still a trace
            results.append(("", False, trace))
        states = []
        loop_start = None
        pending_loop = False
        in_state = False
        spec_open = None

    for line_no, line in enumerate(raw.splitlines(), start=1):
        stripped = line.strip()
        m = _SPEC_RE.match(stripped)
        if m:
            finish()
            spec_open = (m.group(1), m.group(2) == "true")
            continue
        if stripped == _LOOP_MARK:
            pending_loop = True
            continue
        m = _STATE_RE.match(stripped)
        if m:
            carried: Assignment = dict(states[-1]) if states else {}
            states.append(carried)
            if pending_loop:
                loop_start = len(states) - 1
                pending_loop = False
            in_state = True
            continue
        if in_state:
            if not stripped or stripped == "...":
                continue
            if stripped.startswith("--") or stripped.lower().startswith("trace"):
                continue
            m = _ASSIGN_RE.match(stripped)
            if m is None:
                raise TraceParseError(
                    f"expected 'variable = value', found {stripped!r}", line_no
                )
            states[-1][m.group(1)] = m.group(2)
            continue
        # outside state blocks: banners, progress output, blank lines
    finish()
    return results


# ---------------------------------------------------------------------------
# node-level rendering


@dataclass(frozen=True)
class ActivationEvent:
    """A port taking a signal at a step of a trace."""

    node_id: str
    port: str
    direction: str  # "in" | "out"
    step: int

    def __str__(self) -> str:
        return f"step {self.step}: {self.node_id}:{self.port} ({self.direction})"


@dataclass(frozen=True)
class ControlFlowPath:
    """Node-level view of a trace: port activations plus state/script notes."""

    events: tuple[ActivationEvent, ...]
    annotations: tuple[tuple[int, str], ...]

    def port_sequence(self) -> list[tuple[str, str]]:
        return [(e.node_id, e.port) for e in self.events]

    def render(self) -> str:
        items = [(e.step, 0, str(e)) for e in self.events]
        items.extend(
            (step, 1, f"step {step}: {note}") for step, note in self.annotations
        )
        items.sort(key=lambda x: (x[0], x[1]))
        return "\n".join(text for _, _, text in items)


def _event_for(
    ts: TransitionSystem, var: str, value: str, step: int
) -> ActivationEvent | tuple[int, str] | None:
    prov = ts.provenance.get(var)
    if prov is None:
        return (step, f"{var} = {value}")  # script variable or unmapped
    if prov.role in (ROLE_INPUT, ROLE_OUTPUT):
        direction = "in" if prov.role == ROLE_INPUT else "out"
        if prov.encoded_values is not None:
            meaning = prov.encoded_values.get(value)
            if meaning is None:
                if value == NONE_VALUE:
                    return None
                return ActivationEvent(prov.node_id, value, direction, step)
            port, state = meaning
            if port is not None:
                return ActivationEvent(prov.node_id, port, direction, step)
            return ActivationEvent(
                prov.node_id, f"internal:{state}", direction, step
            )
        if value == NONE_VALUE:
            return None
        return ActivationEvent(prov.node_id, value, direction, step)
    return (step, f"{var} = {value}")  # state variable annotation


def map_trace(t: Trace, ts: TransitionSystem) -> ControlFlowPath:
    """Render variable deltas as port activations with provenance.

    Step 0 reports every non-idle input/output variable; later steps
    report variables that changed to a non-idle value. State and script
    variable changes become annotations. Variables missing from a (parsed,
    partial) state are skipped until they appear.
    """
    events: list[ActivationEvent] = []
    annotations: list[tuple[int, str]] = []
    previous: Assignment = {}
    for step, state in enumerate(t.states()):
        for var in (v for v in ts.variable_names() if v in state):
            value = state[var]
            if step > 0 and previous.get(var) == value:
                continue
            item = _event_for(ts, var, value, step)
            if isinstance(item, ActivationEvent):
                events.append(item)
            elif item is not None:
                annotations.append(item)
        previous = dict(state)
    return ControlFlowPath(tuple(events), tuple(annotations))
