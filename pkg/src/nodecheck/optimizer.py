"""State-space reduction passes.

Two independent reductions: removal of side-effect-free forwarding nodes
at the graph level (before translation), and encoding of a node's internal
state into its output variable at the relation level (after instantiation,
before rule assembly). The first trades a small timing shift for fewer
variables; the second is verdict-preserving for nodes whose output is a
pure function of the internal state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Mapping

from .errors import EncodingNotApplicable
from .graph import Edge, NodeGraph
from .semantics import (
    Atom,
    Guard,
    Hold,
    NONE_VALUE,
    NodeRelations,
    NodeSemantics,
    RuleList,
    STATE,
    SemanticsClass,
    ValueChoice,
)

if TYPE_CHECKING:
    from .semantics import SemanticsRegistry


def is_nose(sem: NodeSemantics) -> bool:
    """Side-effect-free forwarder: single output, no state, no variable writes."""
    return (
        sem.klass is SemanticsClass.SINGLE_OUTPUT
        and not sem.states
        and not sem.var_rules
    )


def _remove_one(g: NodeGraph, node_id: str) -> NodeGraph:
    incoming = [e for e in g.edges if e.dst_node == node_id and e.src_node != node_id]
    outgoing = [e for e in g.edges if e.src_node == node_id and e.dst_node != node_id]
    outgoing.sort(key=lambda e: e.order_index)

    new_edges: list[Edge] = []
    for e in sorted(g.edges, key=lambda e: e.order_index):
        if e.src_node == node_id or e.dst_node == node_id:
            if e in incoming:
                # inline cartesian reconnection: the incoming edge's slot is
                # taken by one edge per outgoing target, in outgoing order
                for out_e in outgoing:
                    new_edges.append(
                        Edge(
                            e.src_node,
                            e.src_port,
                            out_e.dst_node,
                            out_e.dst_port,
                            order_index=0,
                        )
                    )
            continue
        new_edges.append(e)
    renumbered = tuple(
        replace(e, order_index=i) for i, e in enumerate(new_edges)
    )
    nodes = tuple(n for n in g.nodes if n.id != node_id)
    return replace(g, nodes=nodes, edges=renumbered)


def remove_nose_nodes(g: NodeGraph, reg: "SemanticsRegistry") -> NodeGraph:
    """Remove every forwarding node, reconnecting around it, to fixpoint.

    Each removed node's predecessors are wired straight to the targets of
    its output port (cartesian over incoming x outgoing, order inherited
    from the incoming edge's position then the outgoing declaration order).
    A forwarder with an unconnected output disappears along with its
    incoming edges; chains collapse because the scan repeats until no
    forwarding node is left.
    """
    while True:
        target = next((n for n in g.nodes if is_nose(reg.get(n.kind))), None)
        if target is None:
            return g
        g = _remove_one(g, target.id)


@dataclass(frozen=True)
class OutBijection:
    """Injective state -> encoded-output-value map extending the output map.

    Values emitted by exactly one state keep their name; shared values are
    duplicated per state as ``<value>_<State>`` (numeric suffix on clash).
    """

    kind: str
    forward: Mapping[str, str]
    f_out: Mapping[str, str]

    @property
    def inverse(self) -> dict[str, str]:
        return {v: s for s, v in self.forward.items()}


def _functional_out_map(sem: NodeSemantics) -> dict[str, str]:
    """Recover the output value per state, or reject non-functional forms."""
    if not sem.states:
        raise EncodingNotApplicable(f"{sem.kind}: node has no internal states")
    if sem.out_rules is None:
        raise EncodingNotApplicable(f"{sem.kind}: no output rules")
    for guard, choice in sem.out_rules.cases:
        for a in guard.atoms():
            if a.lhs != STATE:
                raise EncodingNotApplicable(
                    f"{sem.kind}: output depends on {a.lhs!r}, not only on "
                    "the internal state"
                )
        if not choice.deterministic:
            raise EncodingNotApplicable(
                f"{sem.kind}: non-deterministic output choice {choice.values}"
            )
    default = sem.out_rules.default
    if isinstance(default, Hold) or not default.deterministic:
        raise EncodingNotApplicable(f"{sem.kind}: output default is not a value")

    out_map: dict[str, str] = {}
    for s in sem.states:
        value = None
        for guard, choice in sem.out_rules.cases:
            if any(all(a.value == s for a in term) for term in guard.terms):
                value = choice.values[0]
                break
        out_map[s] = default.values[0] if value is None else value
    return out_map


def build_out_bijection(sem: NodeSemantics) -> OutBijection:
    """Extend the state->output map to an injection by duplicating values.

    Raises :class:`EncodingNotApplicable` when the output is not a pure
    deterministic function of the internal state; the encoding pass skips
    such nodes and reports them as not applicable.
    """
    f_out = _functional_out_map(sem)
    counts: dict[str, int] = {}
    for v in f_out.values():
        counts[v] = counts.get(v, 0) + 1

    taken = {NONE_VALUE} | set(sem.output_ports) | set(f_out.values())
    forward: dict[str, str] = {}
    for s in sem.states:
        base = f_out[s]
        if counts[base] == 1:
            forward[s] = base
            continue
        candidate = f"{base}_{s}"
        suffix = 2
        while candidate in taken or candidate in forward.values():
            candidate = f"{base}_{s}_{suffix}"
            suffix += 1
        forward[s] = candidate
    if len(set(forward.values())) != len(forward):
        raise EncodingNotApplicable(f"{sem.kind}: duplication failed to disambiguate")
    return OutBijection(kind=sem.kind, forward=dict(forward), f_out=f_out)


def _rewrite_state_atoms(
    rules: RuleList, state_var: str, output_var: str, forward: Mapping[str, str]
) -> RuleList:
    def term_rewrite(term):
        return tuple(
            Atom(output_var, forward[a.value]) if a.lhs == state_var else a
            for a in term
        )

    cases = tuple(
        (Guard(tuple(term_rewrite(t) for t in g.terms)), choice)
        for g, choice in rules.cases
    )
    return RuleList(cases, rules.default)


def encodable(rel: NodeRelations) -> bool:
    if rel.state_var is None or rel.state_rules is None or rel.output_var is None:
        return False
    allowed = {v for _, v in rel.input_vars} | {rel.state_var}
    for rules in (rel.state_rules, *rel.var_rules.values()):
        for g, _ in rules.cases:
            for a in g.atoms():
                if a.lhs == rel.output_var:
                    return False
                if a.lhs not in allowed and a.lhs in rel.bound_variables():
                    return False
    return True


def encode_state_into_output(rel: NodeRelations, bij: OutBijection) -> NodeRelations:
    """Fold the state variable into the output variable.

    The output rule becomes the state rule with state atoms and state
    choices renamed through the bijection; the output domain becomes the
    bijection's range (plus any original output values the node never
    emits); the initial output values are the images of the initial
    states. Guards of the node's script-variable fragments are rewritten
    the same way. ``value_rewrites`` records how outer consumers (edges,
    specs) must expand atoms over the old output values.
    """
    if not encodable(rel):
        raise EncodingNotApplicable(
            f"{rel.node_id}: relations do not match the encodable form"
        )
    assert rel.state_var is not None and rel.output_var is not None
    assert rel.state_rules is not None
    forward = dict(bij.forward)

    new_out_rules = _rewrite_state_atoms(
        rel.state_rules, rel.state_var, rel.output_var, forward
    )
    new_out_rules = RuleList(
        tuple(
            (g, ValueChoice(tuple(forward[v] for v in c.values)))
            for g, c in new_out_rules.cases
        ),
        new_out_rules.default
        if isinstance(new_out_rules.default, Hold)
        else ValueChoice(tuple(forward[v] for v in new_out_rules.default.values)),
    )

    emitted = set(bij.f_out.values())
    leftovers = tuple(v for v in rel.output_domain if v not in emitted)
    new_domain = tuple(forward[s] for s in rel.states) + leftovers

    new_init: tuple[str, ...] = ()
    for s in rel.initial_states:
        if forward[s] not in new_init:
            new_init += (forward[s],)

    new_var_rules = {
        var: _rewrite_state_atoms(rules, rel.state_var, rel.output_var, forward)
        for var, rules in rel.var_rules.items()
    }

    encoded_values: dict[str, tuple[str | None, str]] = {}
    for s in rel.states:
        base = bij.f_out[s]
        encoded_values[forward[s]] = (None if base == NONE_VALUE else base, s)

    value_rewrites: dict[str, tuple[str, ...]] = {}
    for old in emitted:
        images = tuple(forward[s] for s in rel.states if bij.f_out[s] == old)
        if images != (old,):
            value_rewrites[old] = images

    return replace(
        rel,
        output_domain=new_domain,
        output_init=new_init,
        out_rules=new_out_rules,
        state_var=None,
        states=(),
        initial_states=(),
        state_rules=None,
        var_rules=new_var_rules,
        encoded_values=encoded_values,
        value_rewrites=value_rewrites,
    )
