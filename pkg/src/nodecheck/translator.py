"""Compile a node graph plus semantics registry into a transition system.

Five steps: declare variables per node semantics, turn edges into input
variable transitions, turn node semantics into output/state transitions
(plus fairness for stateful nodes), integrate per-node script-variable
fragments into one rule per variable, and attach specs. Variable names
are mangled ``<Kind><index><Role>`` with the node's 1-based declaration
position, so counterexamples stay traceable to nodes.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import EncodingNotApplicable, TranslationError
from .graph import NodeGraph, has_errors, validate_graph
from .ir import (
    CtlAtom,
    CtlFormula,
    CtlOr,
    FairnessConstraint,
    Provenance,
    ROLE_INPUT,
    ROLE_OUTPUT,
    ROLE_SCRIPT,
    ROLE_STATE,
    TransitionRule,
    TransitionSystem,
    Variable,
    ctl_atoms,
)
from .optimizer import build_out_bijection, encode_state_into_output
from .semantics import (
    Atom,
    Guard,
    HOLD,
    Hold,
    NONE_VALUE,
    NodeRelations,
    RuleList,
    SemanticsRegistry,
    ValueChoice,
    instantiate,
)
from .specs import SpecRequest, expand_spec

SYNTHESIZED_DOMAIN = ("false", "true")
SYNTHESIZED_INIT = "false"

ValueRewrites = Mapping[str, Mapping[str, tuple[str, ...]]]


def _instantiate_all(g: NodeGraph, reg: SemanticsRegistry) -> list[NodeRelations]:
    return [
        instantiate(reg.get(node.kind), node, index)
        for index, node in enumerate(g.nodes, start=1)
    ]


def _script_variable_order(
    g: NodeGraph, relations: Sequence[NodeRelations]
) -> tuple[list[str], dict[str, tuple[tuple[str, ...], str]]]:
    """Declared variables first, then synthesized ones in first-use order."""
    order: list[str] = []
    info: dict[str, tuple[tuple[str, ...], str]] = {}
    for decl in g.script_variables:
        if decl.name in info:
            raise TranslationError(f"script variable {decl.name} declared twice")
        order.append(decl.name)
        info[decl.name] = (decl.domain, decl.init)
    for rel in relations:
        for name in rel.var_rules:
            if name not in info:
                order.append(name)
                info[name] = (SYNTHESIZED_DOMAIN, SYNTHESIZED_INIT)
    return order, info


def declare_variables(
    g: NodeGraph, reg: SemanticsRegistry
) -> tuple[list[Variable], list[NodeRelations]]:
    """Step 1: one input/output variable per node with such ports (input
    domain = ports + ``none``), one state variable per stateful node, one
    variable per declared or written script variable."""
    relations = _instantiate_all(g, reg)
    variables: list[Variable] = []
    for rel in relations:
        for port, var in rel.input_vars:
            domain = rel.input_domains[var]
            if any(p == NONE_VALUE for p in domain[1:]):
                raise TranslationError(
                    f"{rel.node_id}: input port named {NONE_VALUE!r} collides "
                    "with the reserved idle value"
                )
            variables.append(
                Variable(var, domain, (NONE_VALUE,), role=ROLE_INPUT)
            )
        if rel.output_var:
            if any(p == NONE_VALUE for p in rel.output_domain if p != NONE_VALUE):
                raise TranslationError(
                    f"{rel.node_id}: output port named {NONE_VALUE!r} collides "
                    "with the reserved idle value"
                )
            variables.append(
                Variable(
                    rel.output_var, rel.output_domain, rel.output_init,
                    role=ROLE_OUTPUT,
                )
            )
        if rel.state_var:
            variables.append(
                Variable(
                    rel.state_var, rel.states, rel.initial_states, role=ROLE_STATE
                )
            )

    order, info = _script_variable_order(g, relations)
    for name in order:
        domain, init = info[name]
        variables.append(Variable(name, domain, (init,), role=ROLE_SCRIPT))
    return variables, relations


def translate_control_flow(
    g: NodeGraph, relations: Sequence[NodeRelations]
) -> dict[str, RuleList]:
    """Step 2: per input variable, one case per incoming edge (declaration
    order): when the source output variable carries the source port, the
    target port activates next step. Default: back to ``none`` (a signal
    is consumed after one step)."""
    out_var_of = {rel.node_id: rel.output_var for rel in relations}
    rules: dict[str, RuleList] = {}
    for rel in relations:
        for port, var in rel.input_vars:
            cases = []
            for e in sorted(g.edges, key=lambda e: e.order_index):
                if e.dst_node != rel.node_id:
                    continue
                if port is not None and e.dst_port != port:
                    continue
                src_out = out_var_of.get(e.src_node)
                if src_out is None:
                    raise TranslationError(
                        f"edge {e.endpoint_str()} leaves a node with no outputs"
                    )
                cases.append(
                    (
                        Guard(((Atom(src_out, e.src_port),),)),
                        ValueChoice((e.dst_port,)),
                    )
                )
            rules[var] = RuleList(tuple(cases), ValueChoice((NONE_VALUE,)))
    return rules


def translate_node_behaviors(
    relations: Sequence[NodeRelations],
) -> tuple[dict[str, RuleList], list[FairnessConstraint]]:
    """Step 3: output and state transitions straight from the instantiated
    semantics; every state variable (or encoded output variable) also
    contributes the fairness constraint that it returns to an initial
    value infinitely often."""
    rules: dict[str, RuleList] = {}
    fairness: list[FairnessConstraint] = []
    for rel in relations:
        if rel.output_var:
            rules[rel.output_var] = rel.out_rules or RuleList(
                (), ValueChoice((NONE_VALUE,))
            )
        if rel.state_var:
            rules[rel.state_var] = rel.state_rules or RuleList((), HOLD)
            fairness.append(
                FairnessConstraint(
                    Guard(tuple((Atom(rel.state_var, s),) for s in rel.initial_states))
                )
            )
        elif rel.encoded_values is not None and rel.output_var:
            fairness.append(
                FairnessConstraint(
                    Guard(tuple((Atom(rel.output_var, v),) for v in rel.output_init))
                )
            )
    return rules, fairness


def integrate_script_variables(
    relations: Sequence[NodeRelations],
    script_vars: Iterable[str],
) -> tuple[dict[str, RuleList], list[str]]:
    """Step 4: merge the per-node fragments of each script variable into a
    single rule: one case per assigned value, guarded by the disjunction
    of every contributing guard, ordered by first appearance across node
    declaration order; default holds the current value.

    Returns the rules plus conflict warnings (identical guards assigning
    different values; case order resolves these, but they deserve eyes).
    """
    warnings: list[str] = []
    rules: dict[str, RuleList] = {}
    for name in script_vars:
        merged: list[tuple[Guard, ValueChoice]] = []
        contributed: list[tuple[Guard, ValueChoice, str]] = []
        for rel in relations:
            fragment = rel.var_rules.get(name)
            if fragment is None:
                continue
            if not isinstance(fragment.default, Hold):
                raise TranslationError(
                    f"{rel.node_id}: script-variable fragment for {name} must "
                    "default to holding the current value"
                )
            for guard, choice in fragment.cases:
                contributed.append((guard, choice, rel.node_id))
                for i, (g0, c0) in enumerate(merged):
                    if c0.values == choice.values:
                        merged[i] = (g0.or_with(guard), c0)
                        break
                else:
                    merged.append((guard, choice))
        for i, (g1, c1, n1) in enumerate(contributed):
            for g2, c2, n2 in contributed[i + 1:]:
                if g1 == g2 and c1.values != c2.values:
                    warnings.append(
                        f"script variable {name}: {n1} and {n2} assign "
                        f"different values under the same condition; "
                        "case order decides"
                    )
        rules[name] = RuleList(tuple(merged), HOLD)
    return rules, warnings


def _rewrite_guard(g: Guard, rewrites: ValueRewrites) -> Guard:
    """Expand atoms over encoded variables' replaced values (DNF product)."""
    new_terms: list[tuple[Atom, ...]] = []
    for term in g.terms:
        options: list[tuple[Atom, ...]] = [()]
        for a in term:
            values = rewrites.get(a.lhs, {}).get(a.value)
            alts = (
                (a,) if values is None else tuple(Atom(a.lhs, v) for v in values)
            )
            options = [prev + (alt,) for prev in options for alt in alts]
        new_terms.extend(options)
    return Guard(tuple(new_terms))


def _rewrite_rules(rules: RuleList, rewrites: ValueRewrites) -> RuleList:
    return RuleList(
        tuple((_rewrite_guard(g, rewrites), c) for g, c in rules.cases),
        rules.default,
    )


def _rewrite_ctl(f: CtlFormula, rewrites: ValueRewrites) -> CtlFormula:
    if isinstance(f, CtlAtom):
        values = rewrites.get(f.var, {}).get(f.value)
        if values is None:
            return f
        expanded: CtlFormula = CtlAtom(f.var, values[0])
        for v in values[1:]:
            expanded = CtlOr(expanded, CtlAtom(f.var, v))
        return expanded
    kwargs = {}
    for name in getattr(f, "__dataclass_fields__", {}):
        value = getattr(f, name)
        kwargs[name] = (
            _rewrite_ctl(value, rewrites) if isinstance(value, CtlFormula) else value
        )
    return type(f)(**kwargs)


def _validate_specs(
    specs: Sequence[CtlFormula], variables: Sequence[Variable]
) -> None:
    domains = {v.name: set(v.domain) for v in variables}
    for f in specs:
        for atom in ctl_atoms(f):
            if atom.var not in domains:
                raise TranslationError(
                    f"spec references undeclared variable {atom.var!r}"
                )
            if atom.value not in domains[atom.var]:
                raise TranslationError(
                    f"spec references value {atom.value!r} outside the domain "
                    f"of {atom.var}"
                )


def translate(
    g: NodeGraph,
    reg: SemanticsRegistry,
    specs: Sequence[SpecRequest] = (),
    *,
    encode_states: bool = False,
) -> TransitionSystem:
    """Full compilation; deterministic for equal inputs.

    With ``encode_states`` the state-into-output encoding runs on every
    eligible node between instantiation and rule assembly (ineligible
    nodes are silently kept as-is; use the optimizer API directly for a
    per-node report).
    """
    diags = validate_graph(g, reg)
    if has_errors(diags):
        raise TranslationError(
            "graph does not validate: " + "; ".join(str(d) for d in diags)
        )

    variables, relations = declare_variables(g, reg)
    if encode_states:
        encoded: list[NodeRelations] = []
        for rel, node in zip(relations, g.nodes):
            try:
                bij = build_out_bijection(reg.get(node.kind))
                encoded.append(encode_state_into_output(rel, bij))
            except EncodingNotApplicable:
                encoded.append(rel)
        relations = encoded
        # variable list must reflect dropped state variables / new domains
        variables = _redeclare(variables, relations)

    rewrites: dict[str, Mapping[str, tuple[str, ...]]] = {
        rel.output_var: rel.value_rewrites
        for rel in relations
        if rel.output_var and rel.value_rewrites
    }

    input_rules = translate_control_flow(g, relations)
    behavior_rules, fairness = translate_node_behaviors(relations)

    script_order, script_info = _script_variable_order(g, relations)
    script_rules, warnings = integrate_script_variables(relations, script_order)
    for name in script_order:
        domain = set(script_info[name][0])
        for _, choice in script_rules[name].cases:
            bad = set(choice.values) - domain
            if bad:
                raise TranslationError(
                    f"script variable {name}: assigned value(s) "
                    f"{sorted(bad)} outside declared domain"
                )

    all_rules = {**input_rules, **behavior_rules, **script_rules}
    rules = tuple(
        TransitionRule(v.name, _rewrite_rules(all_rules[v.name], rewrites))
        for v in variables
    )
    fairness = [
        FairnessConstraint(_rewrite_guard(fc.guard, rewrites)) for fc in fairness
    ]

    formulas = tuple(
        _rewrite_ctl(expand_spec(req), rewrites) for req in specs
    )
    _validate_specs(formulas, variables)

    provenance: dict[str, Provenance] = {}
    for rel in relations:
        for port, var in rel.input_vars:
            provenance[var] = Provenance(rel.node_id, ROLE_INPUT, port=port)
        if rel.output_var:
            provenance[rel.output_var] = Provenance(
                rel.node_id, ROLE_OUTPUT, encoded_values=rel.encoded_values
            )
        if rel.state_var:
            provenance[rel.state_var] = Provenance(rel.node_id, ROLE_STATE)

    return TransitionSystem(
        variables=tuple(variables),
        rules=rules,
        fairness=tuple(fairness),
        specs=formulas,
        provenance=provenance,
        warnings=tuple(warnings),
    )


def _redeclare(
    variables: Sequence[Variable], relations: Sequence[NodeRelations]
) -> list[Variable]:
    """Rebuild the node-owned variable entries after an encoding pass."""
    by_rel: dict[str, Variable] = {}
    dropped: set[str] = set()
    for rel in relations:
        if rel.encoded_values is not None and rel.output_var:
            by_rel[rel.output_var] = Variable(
                rel.output_var, rel.output_domain, rel.output_init, role=ROLE_OUTPUT
            )
            dropped.add(f"{rel.kind}{rel.index}State")
    out: list[Variable] = []
    for v in variables:
        if v.name in dropped:
            continue
        out.append(by_rel.get(v.name, v))
    return out
