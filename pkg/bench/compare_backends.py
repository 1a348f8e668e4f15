#!/usr/bin/env python3
"""Benchmark the numba kernels against the numpy fallback.

Workloads are fan-out scripts: an entry point arms K parallel clip lanes
(clip + branch + flag writer), so the reachable space grows roughly
exponentially in K. Reported times are warm (the JIT compiles on a small
throwaway run first).

Usage: python bench/compare_backends.py [--lanes 3 4 5] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from nodecheck import kernels
from nodecheck.checker import check
from nodecheck.graph import Edge, Node, NodeGraph, ScriptVariableDecl
from nodecheck.kripke import build_state_space
from nodecheck.semantics import builtin_registry
from nodecheck.specs import FlagReset
from nodecheck.translator import translate


def lane_graph(lanes: int) -> NodeGraph:
    nodes = [Node("ScriptStart1", "ScriptStart"), Node("Arm2", "SetEventMode")]
    edges = [Edge("ScriptStart1", "Out", "Arm2", "Enable", 0)]
    for lane in range(lanes):
        clip = f"Clip{3 + 3 * lane}"
        branch = f"Branch{4 + 3 * lane}"
        writer = f"Writer{5 + 3 * lane}"
        nodes += [
            Node(clip, "MovieClip"),
            Node(branch, "If"),
            Node(writer, "SetEventMode"),
        ]
        edges += [
            Edge("Arm2", "Out", clip, "Start", len(edges)),
            Edge(clip, "Finished", writer, "Disable", len(edges) + 1),
            Edge(clip, "Skipped", branch, "In", len(edges) + 2),
            Edge(branch, "True", writer, "Disable", len(edges) + 3),
            Edge(branch, "False", writer, "Disable", len(edges) + 4),
        ]
    return NodeGraph(
        tuple(nodes),
        tuple(edges),
        (ScriptVariableDecl("EventMode", ("false", "true"), "false"),),
    )


def timed(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lanes", type=int, nargs="+", default=[2, 3, 4, 5])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    registry = builtin_registry()
    spec = FlagReset("EventMode", "true", "false")

    # warm both backends (JIT compilation, scipy imports)
    for backend in ("numba", "numpy"):
        kernels.set_backend(backend)
        ts = translate(lane_graph(1), registry, [spec])
        check(build_state_space(ts), ts.specs[0])

    header = (
        f"{'lanes':>5} {'states':>9} "
        f"{'build numba':>12} {'build numpy':>12} {'x':>6} "
        f"{'check numba':>12} {'check numpy':>12} {'x':>6}"
    )
    print(header)
    print("-" * len(header))
    for lanes in args.lanes:
        ts = translate(lane_graph(lanes), registry, [spec])
        times: dict[str, tuple[float, float, int]] = {}
        for backend in ("numba", "numpy"):
            kernels.set_backend(backend)
            build = timed(lambda: build_state_space(ts), args.repeat)
            ks = build_state_space(ts)
            run = timed(lambda: check(ks, ts.specs[0]), args.repeat)
            times[backend] = (build, run, ks.n_states)
        kernels.set_backend(None)
        (b_nb, c_nb, n), (b_np, c_np, _) = times["numba"], times["numpy"]
        print(
            f"{lanes:>5} {n:>9} "
            f"{b_nb:>12.4f} {b_np:>12.4f} {b_np / b_nb:>6.1f} "
            f"{c_nb:>12.4f} {c_np:>12.4f} {c_np / c_nb:>6.1f}"
        )


if __name__ == "__main__":
    main()
