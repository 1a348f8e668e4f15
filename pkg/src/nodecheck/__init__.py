"""nodecheck: model-checking verifier for node-based visual scripts.

Compiles a node graph plus declarative node semantics into a finite
transition system, optionally shrinks it (forwarder removal, state-into-
output encoding), checks CTL specs under fairness with a built-in
explicit-state engine or an external NuSMV binary, and renders
counterexamples back as node-level control flows.
"""

from .checker import Trace, Verdict, check, evaluate
from .emitter import emit_smv, render_ctl
from .errors import NodeCheckError
from .graph import (
    Diagnostic,
    Edge,
    Node,
    NodeGraph,
    parse_graph,
    parse_graph_file,
    serialize_graph,
    validate_graph,
)
from .ir import (
    CtlFormula,
    FairnessConstraint,
    TransitionRule,
    TransitionSystem,
    Variable,
    eval_guard,
    successors,
)
from .kripke import (
    DEFAULT_STATE_CAP,
    KripkeStructure,
    build_state_space,
    reachable_stats,
)
from .nusmv import (
    ActivationEvent,
    ControlFlowPath,
    find_nusmv,
    map_trace,
    parse_traces,
    run_nusmv,
)
from .optimizer import (
    OutBijection,
    build_out_bijection,
    encode_state_into_output,
    remove_nose_nodes,
)
from .semantics import (
    NodeRelations,
    NodeSemantics,
    SemanticsClass,
    SemanticsRegistry,
    builtin_registry,
    builtin_semantics,
    instantiate,
    load_semantics,
    load_semantics_file,
)
from .specs import FlagReset, load_spec_requests, parse_ctl
from .translator import (
    declare_variables,
    integrate_script_variables,
    translate,
    translate_control_flow,
    translate_node_behaviors,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationEvent",
    "ControlFlowPath",
    "CtlFormula",
    "DEFAULT_STATE_CAP",
    "Diagnostic",
    "Edge",
    "FairnessConstraint",
    "FlagReset",
    "KripkeStructure",
    "Node",
    "NodeCheckError",
    "NodeGraph",
    "NodeRelations",
    "NodeSemantics",
    "OutBijection",
    "SemanticsClass",
    "SemanticsRegistry",
    "Trace",
    "TransitionRule",
    "TransitionSystem",
    "Variable",
    "Verdict",
    "build_out_bijection",
    "build_state_space",
    "builtin_registry",
    "builtin_semantics",
    "check",
    "declare_variables",
    "emit_smv",
    "encode_state_into_output",
    "eval_guard",
    "evaluate",
    "find_nusmv",
    "instantiate",
    "integrate_script_variables",
    "load_semantics",
    "load_semantics_file",
    "load_spec_requests",
    "map_trace",
    "parse_ctl",
    "parse_graph",
    "parse_graph_file",
    "parse_traces",
    "reachable_stats",
    "remove_nose_nodes",
    "render_ctl",
    "run_nusmv",
    "serialize_graph",
    "successors",
    "translate",
    "translate_control_flow",
    "translate_node_behaviors",
    "validate_graph",
]
