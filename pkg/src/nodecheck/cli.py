"""Command-line surface: translate, check, stats.

Exit codes are a stable contract: 0 success / all specs hold, 1 some spec
fails, 2 input or validation errors (including a missing NuSMV binary),
3 state-cap exceeded or engine timeout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass

from .checker import Trace, Verdict, check
from .emitter import emit_smv, render_ctl
from .errors import NodeCheckError, NusmvTimeout, StateCapExceeded
from .graph import NodeGraph, parse_graph_file, validate_graph
from .ir import TransitionSystem
from .kripke import DEFAULT_STATE_CAP, build_state_space, format_state_count
from .nusmv import find_nusmv, map_trace, parse_traces, run_nusmv
from .optimizer import remove_nose_nodes
from .semantics import SemanticsRegistry, builtin_registry, load_semantics_file
from .specs import SpecRequest, load_spec_requests_file
from .translator import translate

EXIT_OK = 0
EXIT_SPEC_FAILED = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3


class _CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


@dataclass
class _Inputs:
    graph: NodeGraph
    registry: SemanticsRegistry
    specs: list[SpecRequest]
    opt_nose: bool
    opt_encode: bool


def _parse_opt(value: str) -> tuple[bool, bool]:
    if value == "none":
        return False, False
    passes = {p.strip() for p in value.split(",") if p.strip()}
    unknown = passes - {"nose", "encode"}
    if unknown:
        raise _CliError(
            f"unknown optimization pass(es): {', '.join(sorted(unknown))} "
            "(expected 'none' or a comma list of nose,encode)"
        )
    return "nose" in passes, "encode" in passes


def _load_inputs(args) -> _Inputs:
    try:
        graph = parse_graph_file(args.graph)
        registry = (
            load_semantics_file(args.semantics)
            if args.semantics
            else builtin_registry()
        )
        specs = (
            load_spec_requests_file(args.spec) if getattr(args, "spec", None) else []
        )
    except OSError as exc:
        raise _CliError(f"cannot read input: {exc}") from exc
    except NodeCheckError as exc:
        raise _CliError(str(exc)) from exc

    diags = validate_graph(graph, registry, include_warnings=True)
    errors = [d for d in diags if d.severity == "error"]
    for d in diags:
        print(d, file=sys.stderr)
    if errors:
        raise _CliError(f"{len(errors)} validation error(s)")
    nose, encode = _parse_opt(args.opt)
    return _Inputs(graph, registry, specs, nose, encode)


def _build_system(inputs: _Inputs) -> TransitionSystem:
    graph = inputs.graph
    if inputs.opt_nose:
        graph = remove_nose_nodes(graph, inputs.registry)
    try:
        ts = translate(
            graph,
            inputs.registry,
            inputs.specs,
            encode_states=inputs.opt_encode,
        )
    except NodeCheckError as exc:
        raise _CliError(str(exc)) from exc
    for w in ts.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return ts


def _pass_summary(inputs: _Inputs, ts: TransitionSystem) -> dict:
    removed = []
    if inputs.opt_nose:
        kept = {n.id for n in remove_nose_nodes(inputs.graph, inputs.registry).nodes}
        removed = [n.id for n in inputs.graph.nodes if n.id not in kept]
    encoded = sorted(
        {
            p.node_id
            for p in ts.provenance.values()
            if p.encoded_values is not None
        }
    )
    return {"removed_nodes": removed, "encoded_nodes": encoded}


def _trace_doc(trace: Trace | None) -> dict | None:
    if trace is None:
        return None
    return {"prefix": list(trace.prefix), "loop": list(trace.loop)}


def _print_trace(trace: Trace) -> None:
    previous: dict = {}
    for i, state in enumerate(trace.states()):
        if i == len(trace.prefix) and trace.loop:
            print("  -- loop starts here")
        changed = {k: v for k, v in state.items() if previous.get(k) != v}
        delta = " ".join(f"{k}={v}" for k, v in changed.items())
        print(f"  state {i}: {delta if delta else '(unchanged)'}")
        previous = state


def cmd_translate(args) -> int:
    inputs = _load_inputs(args)
    ts = _build_system(inputs)
    out_path = args.out or (args.graph.rsplit(".", 1)[0] + ".smv")
    text = emit_smv(ts)
    with open(out_path, "w", encoding="ascii") as f:
        f.write(text)
    summary = _pass_summary(inputs, ts)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "out": out_path,
                    "variables": len(ts.variables),
                    "variable_names": list(ts.variable_names()),
                    **summary,
                }
            )
        )
    else:
        print(f"wrote {out_path}")
        print(f"{len(ts.variables)} variables")
        if summary["removed_nodes"]:
            print("removed forwarding nodes: " + ", ".join(summary["removed_nodes"]))
        if summary["encoded_nodes"]:
            print("state-encoded nodes: " + ", ".join(summary["encoded_nodes"]))
    return EXIT_OK


def _check_internal(args, ts: TransitionSystem) -> tuple[list[dict], int]:
    results = []
    worst = EXIT_OK
    try:
        ks = build_state_space(ts, state_cap=args.state_cap)
    except StateCapExceeded as exc:
        raise _CliError(str(exc), EXIT_RESOURCE) from exc
    for spec in ts.specs:
        verdict: Verdict = check(ks, spec)
        flow = (
            map_trace(verdict.counterexample, ts)
            if verdict.counterexample
            else None
        )
        results.append(
            {
                "spec": render_ctl(spec),
                "holds": verdict.holds,
                "counterexample": _trace_doc(verdict.counterexample),
                "control_flow": [str(e) for e in flow.events] if flow else None,
                "_trace": verdict.counterexample,
                "_flow": flow,
            }
        )
        if not verdict.holds:
            worst = EXIT_SPEC_FAILED
    return results, worst


def _check_nusmv(args, ts: TransitionSystem) -> tuple[list[dict], int]:
    binary = args.nusmv or find_nusmv()
    if not binary:
        raise _CliError(
            "NuSMV binary not found (set NODECHECK_NUSMV or pass --nusmv)"
        )
    model = emit_smv(ts)
    stem = os.path.splitext(os.path.basename(args.graph))[0]
    try:
        with tempfile.TemporaryDirectory(prefix="nodecheck-") as workdir:
            run = run_nusmv(
                model,
                binary,
                timeout_seconds=args.timeout,
                workdir=workdir,
                model_name=f"{stem}.smv",
            )
    except NusmvTimeout as exc:
        raise _CliError(str(exc), EXIT_RESOURCE) from exc
    except NodeCheckError as exc:
        raise _CliError(str(exc)) from exc
    if run.exit_code != 0:
        raise _CliError(f"NuSMV failed (exit {run.exit_code}):\n{run.output}")
    results = []
    worst = EXIT_OK
    for spec_text, holds, trace in parse_traces(run.output):
        flow = map_trace(trace, ts) if trace else None
        results.append(
            {
                "spec": spec_text,
                "holds": holds,
                "counterexample": _trace_doc(trace),
                "control_flow": [str(e) for e in flow.events] if flow else None,
                "_trace": trace,
                "_flow": flow,
            }
        )
        if not holds:
            worst = EXIT_SPEC_FAILED
    return results, worst


def cmd_check(args) -> int:
    inputs = _load_inputs(args)
    if not inputs.specs:
        raise _CliError("no specification given (pass --spec)")
    ts = _build_system(inputs)
    if args.engine == "internal":
        results, code = _check_internal(args, ts)
    else:
        results, code = _check_nusmv(args, ts)
    if args.format == "json":
        clean = [
            {k: v for k, v in r.items() if not k.startswith("_")} for r in results
        ]
        print(json.dumps({"engine": args.engine, "results": clean}))
        return code
    for r in results:
        mark = "PASS" if r["holds"] else "FAIL"
        print(f"{mark}: {r['spec']}")
        if not r["holds"] and r["_flow"] is not None:
            print("control flow:")
            for line in r["_flow"].render().splitlines():
                print(f"  {line}")
            print("raw trace:")
            _print_trace(r["_trace"])
    return code


def _warm_engine() -> None:
    # first kernel use in a process pays JIT/cache loading; keep that out
    # of the reported wall times
    from .ir import TransitionRule, Variable
    from .semantics import RuleList, ValueChoice

    tiny = TransitionSystem(
        variables=(Variable("w", ("a", "b"), ("a",)),),
        rules=(TransitionRule("w", RuleList((), ValueChoice(("b",)))),),
    )
    build_state_space(tiny)


def _stats_row(inputs: _Inputs, nose: bool, encode: bool, state_cap: int) -> dict:
    graph = inputs.graph
    if nose:
        graph = remove_nose_nodes(graph, inputs.registry)
    ts = translate(graph, inputs.registry, inputs.specs, encode_states=encode)
    started = time.perf_counter()
    ks = build_state_space(ts, state_cap=state_cap)
    elapsed = time.perf_counter() - started
    label = (
        ",".join(p for p, on in (("nose", nose), ("encode", encode)) if on) or "none"
    )
    return {
        "setting": label,
        "variables": len(ts.variables),
        "reachable": ks.n_states,
        "reachable_log2": format_state_count(ks.n_states),
        "time_s": round(elapsed, 4),
    }


def _reduction(before: float, after: float) -> str:
    if before <= 0:
        return "n/a"
    return f"↓ {100.0 * (1.0 - after / before):.1f} %"


def cmd_stats(args) -> int:
    inputs = _load_inputs(args)
    try:
        _warm_engine()
        rows = []
        if args.compare:
            rows.append(_stats_row(inputs, False, False, args.state_cap))
        nose, encode = inputs.opt_nose, inputs.opt_encode
        if args.compare and not (nose or encode):
            nose = encode = True
        if args.compare or (nose or encode):
            rows.append(_stats_row(inputs, nose, encode, args.state_cap))
        if not rows:
            rows.append(_stats_row(inputs, False, False, args.state_cap))
    except StateCapExceeded as exc:
        raise _CliError(str(exc), EXIT_RESOURCE) from exc
    except NodeCheckError as exc:
        raise _CliError(str(exc)) from exc

    if args.format == "json":
        doc: dict = {"rows": rows}
        if len(rows) == 2:
            doc["reduction"] = {
                "variables": _reduction(rows[0]["variables"], rows[1]["variables"]),
                "reachable": _reduction(rows[0]["reachable"], rows[1]["reachable"]),
                "time": _reduction(rows[0]["time_s"], rows[1]["time_s"]),
            }
        print(json.dumps(doc))
        return EXIT_OK

    header = f"{'setting':<14} {'#vars':>6} {'reachable':>12} {'log2':>12} {'time[s]':>9}"
    print(header)
    print("-" * len(header))
    for r in rows:
        print(
            f"{r['setting']:<14} {r['variables']:>6} {r['reachable']:>12} "
            f"{r['reachable_log2']:>12} {r['time_s']:>9.4f}"
        )
    if len(rows) == 2:
        print(
            "reduction:     vars "
            + _reduction(rows[0]["variables"], rows[1]["variables"])
            + "   states "
            + _reduction(rows[0]["reachable"], rows[1]["reachable"])
            + "   time "
            + _reduction(rows[0]["time_s"], rows[1]["time_s"])
        )
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, with_spec: bool = True) -> None:
    p.add_argument("graph", help="graph document (JSON)")
    p.add_argument(
        "--semantics",
        help="semantics document (JSON); defaults to the built-in registry",
    )
    if with_spec:
        p.add_argument("--spec", help="spec-request document (JSON)")
    p.add_argument(
        "--opt",
        default="none",
        help="optimization passes: 'none' or comma list of nose,encode",
    )
    p.add_argument(
        "--state-cap",
        type=int,
        default=DEFAULT_STATE_CAP,
        help="abort once the reachable state count exceeds this",
    )
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodecheck",
        description="Verify node-based visual scripts by model checking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="compile a graph to an SMV model")
    _add_common(p)
    p.add_argument("--out", help="output .smv path (default: graph stem + .smv)")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("check", help="check specs against a graph")
    _add_common(p)
    p.add_argument(
        "--engine", choices=("internal", "nusmv"), default="internal"
    )
    p.add_argument("--nusmv", help="NuSMV binary path (overrides env/PATH)")
    p.add_argument(
        "--timeout", type=float, default=600.0, help="NuSMV timeout in seconds"
    )
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("stats", help="report model size and reachable states")
    _add_common(p)
    p.add_argument(
        "--compare",
        action="store_true",
        help="report unoptimized vs optimized side by side",
    )
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
