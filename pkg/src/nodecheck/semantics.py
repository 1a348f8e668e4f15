"""Declarative per-node-kind transition relations and their instantiation.

A node kind's behavior is a set of guarded rule lists: how the output
signal reacts to the input signal and internal state, how the internal
state evolves, and how global script variables are written. Rule lists
have first-match-wins case semantics plus a default, mirroring SMV
``case`` blocks. Instantiation binds the placeholder symbols (``in``,
``out``, ``state``) to concrete, per-node variable names.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import SemanticsError
from .graph import Node, is_identifier

NONE_VALUE = "none"

# Placeholder symbols usable on the left of a guard atom / as rule targets.
IN = "in"
OUT = "out"
STATE = "state"


@dataclass(frozen=True)
class Atom:
    """One comparison ``lhs = value``.

    ``lhs`` is a placeholder (``in``, ``out``, ``state``, ``in.<Port>``)
    before instantiation, or a concrete variable name after.
    """

    lhs: str
    value: str


@dataclass(frozen=True)
class Guard:
    """Disjunction of conjunctions of atoms; ``terms=((),)`` is TRUE.

    The semantics-file schema serializes a single conjunction (array of
    atoms); disjunctions arise from script-variable integration, fairness
    constraints, and multi-port activation guards.
    """

    terms: tuple[tuple[Atom, ...], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("guard must have at least one term (use TRUE)")

    @property
    def is_true(self) -> bool:
        return any(len(t) == 0 for t in self.terms)

    def atoms(self) -> Iterable[Atom]:
        for term in self.terms:
            yield from term

    def or_with(self, other: "Guard") -> "Guard":
        return Guard(self.terms + other.terms)


TRUE = Guard(((),))


def conj(*atoms: Atom) -> Guard:
    return Guard((tuple(atoms),))


def any_of(*guards: Guard) -> Guard:
    terms: tuple[tuple[Atom, ...], ...] = ()
    for g in guards:
        terms += g.terms
    return Guard(terms)


@dataclass(frozen=True)
class ValueChoice:
    """Non-empty value set; singleton = deterministic, larger = free choice."""

    values: tuple[str, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("value choice must be non-empty")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"duplicate values in choice {self.values}")

    @property
    def deterministic(self) -> bool:
        return len(self.values) == 1


class Hold:
    """Sentinel default: the variable keeps its current value."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):  # pragma: no cover - debug aid
        return "HOLD"


HOLD = Hold()


@dataclass(frozen=True)
class RuleList:
    """Ordered (guard, choice) cases with first-match-wins, plus a default."""

    cases: tuple[tuple[Guard, ValueChoice], ...]
    default: ValueChoice | Hold

    def map_symbols(self, rename) -> "RuleList":
        """Rewrite every atom lhs through ``rename(lhs) -> str``."""
        cases = tuple(
            (
                Guard(
                    tuple(
                        tuple(Atom(rename(a.lhs), a.value) for a in term)
                        for term in g.terms
                    )
                ),
                choice,
            )
            for g, choice in self.cases
        )
        return RuleList(cases, self.default)

    def referenced_symbols(self) -> set[str]:
        out: set[str] = set()
        for g, _ in self.cases:
            out.update(a.lhs for a in g.atoms())
        return out


class SemanticsClass(enum.Enum):
    SINGLE_OUTPUT = "SingleOutput"
    ENTRY_POINT = "EntryPoint"
    BRANCH = "Branch"
    STATE_TRANSITION = "StateTransition"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class NodeSemantics:
    """Transition relations for one node kind.

    ``out_rules`` drives the output signal, ``state_rules`` the internal
    state, ``var_rules`` maps script-variable names to rule fragments whose
    implicit default is "hold". ``simultaneous_inputs`` kinds get one input
    variable per port; their guards address ports as ``in.<Port>``.
    """

    kind: str
    klass: SemanticsClass
    input_ports: tuple[str, ...]
    output_ports: tuple[str, ...]
    states: tuple[str, ...] = ()
    initial_states: tuple[str, ...] = ()
    out_rules: RuleList | None = None
    state_rules: RuleList | None = None
    var_rules: Mapping[str, RuleList] = field(default_factory=dict)
    simultaneous_inputs: bool = False

    def __post_init__(self):
        _check_semantics(self)

    @property
    def has_state(self) -> bool:
        return bool(self.states)


def _check_ports(label: str, ports: tuple[str, ...]):
    seen = set()
    for p in ports:
        if not is_identifier(p):
            raise SemanticsError(f"{label}: port {p!r} is not a valid identifier")
        if p in seen:
            raise SemanticsError(f"{label}: duplicate port {p!r}")
        seen.add(p)


def _check_rule_symbols(sem: NodeSemantics, label: str, rules: RuleList):
    """Check guard atoms against the kind's declared vocabulary.

    Atoms whose lhs is not a placeholder are script-variable references;
    those resolve against the graph at translation time, not here.
    """
    for g, _ in rules.cases:
        for a in g.atoms():
            if a.lhs == IN:
                if sem.simultaneous_inputs:
                    raise SemanticsError(
                        f"{sem.kind}: {label} must address per-port inputs "
                        f"as 'in.<Port>'"
                    )
                if a.value != NONE_VALUE and a.value not in sem.input_ports:
                    raise SemanticsError(
                        f"{sem.kind}: {label} references unknown input "
                        f"port {a.value!r}"
                    )
            elif a.lhs.startswith(f"{IN}."):
                port = a.lhs[len(IN) + 1:]
                if port not in sem.input_ports:
                    raise SemanticsError(
                        f"{sem.kind}: {label} references unknown input "
                        f"port {port!r}"
                    )
                if a.value not in (NONE_VALUE, port):
                    raise SemanticsError(
                        f"{sem.kind}: {label}: per-port input {port} can only "
                        f"equal {port!r} or {NONE_VALUE!r}"
                    )
            elif a.lhs == OUT:
                if a.value != NONE_VALUE and a.value not in sem.output_ports:
                    raise SemanticsError(
                        f"{sem.kind}: {label} references unknown output "
                        f"port {a.value!r}"
                    )
            elif a.lhs == STATE:
                if a.value not in sem.states:
                    raise SemanticsError(
                        f"{sem.kind}: {label} guard references undeclared "
                        f"state {a.value!r}"
                    )


def _check_semantics(sem: NodeSemantics):
    _check_ports(sem.kind, sem.input_ports)
    _check_ports(sem.kind, sem.output_ports)
    _check_ports(sem.kind, sem.states)
    if sem.states:
        if not sem.initial_states:
            raise SemanticsError(f"{sem.kind}: states declared without initials")
        for s in sem.initial_states:
            if s not in sem.states:
                raise SemanticsError(f"{sem.kind}: initial state {s!r} undeclared")
    elif sem.initial_states:
        raise SemanticsError(f"{sem.kind}: initial states without states")

    k = sem.klass
    if k in (SemanticsClass.SINGLE_OUTPUT, SemanticsClass.ENTRY_POINT):
        if len(sem.output_ports) != 1:
            raise SemanticsError(f"{sem.kind}: {k.value} needs exactly one output")
        if sem.states:
            raise SemanticsError(f"{sem.kind}: {k.value} cannot have states")
    if k is SemanticsClass.ENTRY_POINT and sem.input_ports:
        raise SemanticsError(f"{sem.kind}: EntryPoint cannot declare input ports")
    if k is SemanticsClass.BRANCH:
        if len(sem.output_ports) < 2:
            raise SemanticsError(f"{sem.kind}: Branch needs at least two outputs")
        if sem.states:
            raise SemanticsError(f"{sem.kind}: Branch cannot have states")
    if k is SemanticsClass.STATE_TRANSITION:
        if not sem.states:
            raise SemanticsError(f"{sem.kind}: StateTransition needs states")
        if sem.out_rules is not None:
            for sym in sem.out_rules.referenced_symbols():
                if sym != STATE:
                    raise SemanticsError(
                        f"{sem.kind}: StateTransition output rules may only "
                        f"reference the internal state, found {sym!r}"
                    )

    for label, rules in (("out_rules", sem.out_rules), ("state_rules", sem.state_rules)):
        if rules is not None:
            _check_rule_symbols(sem, label, rules)
    for var, rules in sem.var_rules.items():
        _check_rule_symbols(sem, f"var_rules[{var}]", rules)


@dataclass(frozen=True)
class SemanticsRegistry:
    kinds: tuple[NodeSemantics, ...]

    def __post_init__(self):
        names = [s.kind for s in self.kinds]
        if len(set(names)) != len(names):
            raise SemanticsError("duplicate kind in registry")

    def has(self, kind: str) -> bool:
        return any(s.kind == kind for s in self.kinds)

    def get(self, kind: str) -> NodeSemantics:
        for s in self.kinds:
            if s.kind == kind:
                return s
        raise SemanticsError(f"unknown node kind {kind}")

    def extended(self, *extra: NodeSemantics) -> "SemanticsRegistry":
        return SemanticsRegistry(self.kinds + tuple(extra))


# ---------------------------------------------------------------------------
# document loading


def _parse_atom(entry, where: str) -> Atom:
    if not isinstance(entry, dict) or "lhs" not in entry or "rhs" not in entry:
        raise SemanticsError(f"{where}: atom must carry 'lhs' and 'rhs'")
    if entry.get("op", "=") != "=":
        raise SemanticsError(f"{where}: only '=' comparisons are supported")
    return Atom(str(entry["lhs"]), str(entry["rhs"]))


def _parse_guard(entry, where: str) -> Guard:
    # spec'd form: array of atoms = one conjunction; {"any_of": [[...], ...]}
    # is the disjunctive superset used by the serializer for DNF guards.
    if isinstance(entry, dict) and "any_of" in entry:
        terms = tuple(
            tuple(_parse_atom(a, where) for a in term) for term in entry["any_of"]
        )
        if not terms:
            raise SemanticsError(f"{where}: empty any_of guard")
        return Guard(terms)
    if not isinstance(entry, list):
        raise SemanticsError(f"{where}: guard must be an array of atoms")
    return Guard((tuple(_parse_atom(a, where) for a in entry),))


def _parse_choice(entry, where: str) -> ValueChoice:
    if isinstance(entry, list):
        return ValueChoice(tuple(str(v) for v in entry))
    return ValueChoice((str(entry),))


def _parse_rules(entry, where: str, default_hold: bool) -> RuleList:
    if not isinstance(entry, dict):
        raise SemanticsError(f"{where}: rule list must be an object")
    cases = []
    for i, c in enumerate(entry.get("cases", [])):
        if not isinstance(c, dict) or "if" not in c or "then" not in c:
            raise SemanticsError(f"{where} case #{i}: need 'if' and 'then'")
        cases.append(
            (_parse_guard(c["if"], f"{where} case #{i}"),
             _parse_choice(c["then"], f"{where} case #{i}"))
        )
    if "default" in entry:
        default: ValueChoice | Hold = _parse_choice(entry["default"], where)
    elif default_hold:
        default = HOLD
    else:
        raise SemanticsError(f"{where}: missing default")
    return RuleList(tuple(cases), default)


def load_semantics(text: str) -> SemanticsRegistry:
    """Load a semantics document (JSON) into a registry.

    Class-specific invariants are checked kind by kind; schema violations
    raise :class:`SemanticsError`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SemanticsError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("kinds", []), list):
        raise SemanticsError("semantics document must be {'kinds': [...]}")

    kinds = []
    for entry in doc.get("kinds", []):
        try:
            kind = str(entry["kind"])
            klass = SemanticsClass(str(entry["class"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise SemanticsError(f"bad kind entry: {entry!r}") from exc
        where = f"kind {kind}"
        out_rules = (
            _parse_rules(entry["out_rules"], f"{where} out_rules", False)
            if "out_rules" in entry
            else None
        )
        state_rules = (
            _parse_rules(entry["state_rules"], f"{where} state_rules", False)
            if "state_rules" in entry
            else None
        )
        var_rules = {
            str(name): _parse_rules(rl, f"{where} var_rules[{name}]", True)
            for name, rl in entry.get("var_rules", {}).items()
        }
        kinds.append(
            NodeSemantics(
                kind=kind,
                klass=klass,
                input_ports=tuple(str(p) for p in entry.get("input_ports", [])),
                output_ports=tuple(str(p) for p in entry.get("output_ports", [])),
                states=tuple(str(s) for s in entry.get("states", [])),
                initial_states=tuple(str(s) for s in entry.get("initial_states", [])),
                out_rules=out_rules,
                state_rules=state_rules,
                var_rules=var_rules,
                simultaneous_inputs=bool(entry.get("simultaneous_inputs", False)),
            )
        )
    return SemanticsRegistry(tuple(kinds))


def load_semantics_file(path: str) -> SemanticsRegistry:
    with open(path, encoding="utf-8") as f:
        return load_semantics(f.read())


def _guard_doc(g: Guard):
    if len(g.terms) == 1:
        return [{"lhs": a.lhs, "op": "=", "rhs": a.value} for a in g.terms[0]]
    return {
        "any_of": [
            [{"lhs": a.lhs, "op": "=", "rhs": a.value} for a in term]
            for term in g.terms
        ]
    }


def _choice_doc(c: ValueChoice):
    return c.values[0] if c.deterministic else list(c.values)


def _rules_doc(rl: RuleList):
    doc: dict = {
        "cases": [
            {"if": _guard_doc(g), "then": _choice_doc(c)} for g, c in rl.cases
        ]
    }
    if not isinstance(rl.default, Hold):
        doc["default"] = _choice_doc(rl.default)
    return doc


def serialize_semantics(reg: SemanticsRegistry) -> str:
    kinds = []
    for s in reg.kinds:
        entry: dict = {
            "kind": s.kind,
            "class": s.klass.value,
            "input_ports": list(s.input_ports),
            "output_ports": list(s.output_ports),
        }
        if s.states:
            entry["states"] = list(s.states)
            entry["initial_states"] = list(s.initial_states)
        if s.simultaneous_inputs:
            entry["simultaneous_inputs"] = True
        if s.out_rules is not None:
            entry["out_rules"] = _rules_doc(s.out_rules)
        if s.state_rules is not None:
            entry["state_rules"] = _rules_doc(s.state_rules)
        if s.var_rules:
            entry["var_rules"] = {v: _rules_doc(rl) for v, rl in s.var_rules.items()}
        kinds.append(entry)
    return json.dumps({"kinds": kinds}, indent=2) + "\n"


# ---------------------------------------------------------------------------
# canonical class relations


def _in_active_guard(sem_inputs: tuple[str, ...], simultaneous: bool) -> Guard:
    # "in != none" over an equality-only vocabulary: one disjunct per port.
    if simultaneous:
        return Guard(tuple((Atom(f"{IN}.{p}", p),) for p in sem_inputs))
    return Guard(tuple((Atom(IN, p),) for p in sem_inputs))


def builtin_semantics(
    kind: str,
    klass: SemanticsClass,
    input_ports: Iterable[str] = (),
    output_ports: Iterable[str] = (),
    *,
    states: Iterable[str] = (),
    initial_states: Iterable[str] = (),
    out_map: Mapping[str, str | tuple[str, ...]] | None = None,
    in_transitions: Mapping[str, str | tuple[str, ...]] | None = None,
    state_transitions: Mapping[str, str | tuple[str, ...]] | None = None,
    default_state: str | None = None,
    var_rules: Mapping[str, RuleList] | None = None,
    simultaneous_inputs: bool = False,
) -> NodeSemantics:
    """Build the canonical relation for a semantics class.

    SingleOutput fires its port whenever any input arrives; EntryPoint
    fires once, in the initial state; Branch picks one of its output ports
    non-deterministically on input. StateTransition takes the output map
    (state -> emitted port, omissions mean silent) and the transition
    tables (input-triggered first, then state-triggered, then the default
    state) and lays them out in that case order.
    """
    input_ports = tuple(input_ports)
    output_ports = tuple(output_ports)
    states = tuple(states)
    initial_states = tuple(initial_states)

    def choice(v) -> ValueChoice:
        return ValueChoice((v,) if isinstance(v, str) else tuple(v))

    if klass is SemanticsClass.SINGLE_OUTPUT:
        if states or out_map or in_transitions or state_transitions:
            raise SemanticsError(f"{kind}: SingleOutput takes no state extras")
        if not input_ports or len(output_ports) != 1:
            raise SemanticsError(f"{kind}: SingleOutput needs inputs and one output")
        out_rules = RuleList(
            ((_in_active_guard(input_ports, simultaneous_inputs),
              ValueChoice((output_ports[0],))),),
            ValueChoice((NONE_VALUE,)),
        )
        return NodeSemantics(
            kind, klass, input_ports, output_ports,
            out_rules=out_rules, var_rules=dict(var_rules or {}),
            simultaneous_inputs=simultaneous_inputs,
        )

    if klass is SemanticsClass.ENTRY_POINT:
        if input_ports or states:
            raise SemanticsError(f"{kind}: EntryPoint takes no inputs or states")
        if len(output_ports) != 1:
            raise SemanticsError(f"{kind}: EntryPoint needs exactly one output")
        out_rules = RuleList((), ValueChoice((NONE_VALUE,)))
        return NodeSemantics(
            kind, klass, (), output_ports,
            out_rules=out_rules, var_rules=dict(var_rules or {}),
        )

    if klass is SemanticsClass.BRANCH:
        if states:
            raise SemanticsError(f"{kind}: Branch takes no states")
        if not input_ports or len(output_ports) < 2:
            raise SemanticsError(f"{kind}: Branch needs inputs and >= 2 outputs")
        out_rules = RuleList(
            ((_in_active_guard(input_ports, simultaneous_inputs),
              ValueChoice(output_ports)),),
            ValueChoice((NONE_VALUE,)),
        )
        return NodeSemantics(
            kind, klass, input_ports, output_ports,
            out_rules=out_rules, var_rules=dict(var_rules or {}),
            simultaneous_inputs=simultaneous_inputs,
        )

    if klass is SemanticsClass.STATE_TRANSITION:
        if not states or not initial_states or default_state is None:
            raise SemanticsError(
                f"{kind}: StateTransition needs states, initials and default_state"
            )
        out_map = dict(out_map or {})
        out_cases = tuple(
            (conj(Atom(STATE, s)), choice(out_map[s]))
            for s in states
            if s in out_map
        )
        out_rules = RuleList(out_cases, ValueChoice((NONE_VALUE,)))
        state_cases = []
        for port, target in (in_transitions or {}).items():
            state_cases.append((conj(Atom(IN, port)), choice(target)))
        for s, target in (state_transitions or {}).items():
            state_cases.append((conj(Atom(STATE, s)), choice(target)))
        state_rules = RuleList(tuple(state_cases), ValueChoice((default_state,)))
        return NodeSemantics(
            kind, klass, input_ports, output_ports,
            states=states, initial_states=initial_states,
            out_rules=out_rules, state_rules=state_rules,
            var_rules=dict(var_rules or {}),
            simultaneous_inputs=simultaneous_inputs,
        )

    raise SemanticsError(
        f"{kind}: no canonical relation for class {klass.value}; "
        "construct Custom semantics explicitly"
    )


def builtin_registry() -> SemanticsRegistry:
    """The four stock kinds: ScriptStart, SetEventMode, MovieClip, If."""
    script_start = builtin_semantics(
        "ScriptStart", SemanticsClass.ENTRY_POINT, output_ports=("Out",)
    )
    set_event_mode = NodeSemantics(
        kind="SetEventMode",
        klass=SemanticsClass.CUSTOM,
        input_ports=("Enable", "Disable"),
        output_ports=("Out",),
        out_rules=RuleList(
            ((any_of(conj(Atom(IN, "Enable")), conj(Atom(IN, "Disable"))),
              ValueChoice(("Out",))),),
            ValueChoice((NONE_VALUE,)),
        ),
        var_rules={
            "EventMode": RuleList(
                (
                    (conj(Atom(IN, "Enable")), ValueChoice(("true",))),
                    (conj(Atom(IN, "Disable")), ValueChoice(("false",))),
                ),
                HOLD,
            )
        },
    )
    movie_clip = builtin_semantics(
        "MovieClip",
        SemanticsClass.STATE_TRANSITION,
        input_ports=("Start",),
        output_ports=("Finished", "Skipped"),
        states=("Stopped", "Playing", "Finished", "Skipped"),
        initial_states=("Stopped",),
        out_map={"Finished": "Finished", "Skipped": "Skipped"},
        in_transitions={"Start": "Playing"},
        state_transitions={"Playing": ("Playing", "Finished", "Skipped")},
        default_state="Stopped",
    )
    if_node = builtin_semantics(
        "If", SemanticsClass.BRANCH, input_ports=("In",),
        output_ports=("True", "False"),
    )
    return SemanticsRegistry((script_start, set_event_mode, movie_clip, if_node))


# ---------------------------------------------------------------------------
# instantiation


@dataclass(frozen=True)
class NodeRelations:
    """A kind's relations bound to one node instance.

    Variable names follow ``<Kind><index><Role>`` with the node's 1-based
    declaration position as index; ``simultaneous_inputs`` kinds get
    ``<Kind><index>In<Port>`` per input port. ``input_vars`` pairs each
    variable with its port (``None`` for the shared single input variable).
    """

    node_id: str
    kind: str
    index: int
    klass: SemanticsClass
    input_vars: tuple[tuple[str | None, str], ...]
    input_domains: Mapping[str, tuple[str, ...]]
    output_var: str | None
    output_domain: tuple[str, ...]
    output_init: tuple[str, ...]
    state_var: str | None
    states: tuple[str, ...]
    initial_states: tuple[str, ...]
    out_rules: RuleList | None
    state_rules: RuleList | None
    var_rules: Mapping[str, RuleList]
    # set by the state-into-output encoding pass
    encoded_values: Mapping[str, tuple[str | None, str]] | None = None
    value_rewrites: Mapping[str, tuple[str, ...]] | None = None

    def bound_variables(self) -> tuple[str, ...]:
        out = tuple(v for _, v in self.input_vars)
        if self.output_var:
            out += (self.output_var,)
        if self.state_var:
            out += (self.state_var,)
        return out


def instantiate(sem: NodeSemantics, node: Node, index: int) -> NodeRelations:
    """Bind a kind's relations to a concrete node at 1-based ``index``."""
    if node.kind != sem.kind:
        raise SemanticsError(
            f"node {node.id} has kind {node.kind}, semantics are for {sem.kind}"
        )
    if node.input_ports and node.input_ports != sem.input_ports:
        raise SemanticsError(f"node {node.id}: input ports differ from semantics")
    if node.output_ports and node.output_ports != sem.output_ports:
        raise SemanticsError(f"node {node.id}: output ports differ from semantics")
    if index < 1:
        raise SemanticsError("instance index is 1-based")

    base = f"{sem.kind}{index}"
    rename: dict[str, str] = {}
    input_vars: list[tuple[str | None, str]] = []
    input_domains: dict[str, tuple[str, ...]] = {}
    if sem.input_ports:
        if sem.simultaneous_inputs:
            for p in sem.input_ports:
                var = f"{base}In{p}"
                rename[f"{IN}.{p}"] = var
                input_vars.append((p, var))
                input_domains[var] = (NONE_VALUE, p)
        else:
            var = f"{base}In"
            rename[IN] = var
            input_vars.append((None, var))
            input_domains[var] = (NONE_VALUE,) + sem.input_ports

    output_var = None
    output_domain: tuple[str, ...] = ()
    output_init: tuple[str, ...] = ()
    if sem.output_ports:
        output_var = f"{base}Out"
        rename[OUT] = output_var
        output_domain = (NONE_VALUE,) + sem.output_ports
        output_init = (
            (sem.output_ports[0],)
            if sem.klass is SemanticsClass.ENTRY_POINT
            else (NONE_VALUE,)
        )

    state_var = None
    if sem.states:
        state_var = f"{base}State"
        rename[STATE] = state_var

    def do_rename(sym: str) -> str:
        return rename.get(sym, sym)  # script variables pass through

    return NodeRelations(
        node_id=node.id,
        kind=sem.kind,
        index=index,
        klass=sem.klass,
        input_vars=tuple(input_vars),
        input_domains=input_domains,
        output_var=output_var,
        output_domain=output_domain,
        output_init=output_init,
        state_var=state_var,
        states=sem.states,
        initial_states=sem.initial_states,
        out_rules=sem.out_rules.map_symbols(do_rename) if sem.out_rules else None,
        state_rules=sem.state_rules.map_symbols(do_rename) if sem.state_rules else None,
        var_rules={v: rl.map_symbols(do_rename) for v, rl in sem.var_rules.items()},
    )
