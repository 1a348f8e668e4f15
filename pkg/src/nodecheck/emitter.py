"""Serialize a transition system to NuSMV-accepted SMV text, byte-stably.

Layout: ``MODULE main``, a ``VAR`` block (one declaration per variable in
order), an ``ASSIGN`` block (``init`` then, unless constant, a ``case``
block per variable), one ``FAIRNESS`` line per constraint, one ``CTLSPEC``
line per spec. Two-space indentation, one case per line, exactly as the
golden files pin it.
"""

from __future__ import annotations

from .errors import EmitError
from .graph import is_identifier
from .ir import (
    CtlAF,
    CtlAG,
    CtlAX,
    CtlAnd,
    CtlAtom,
    CtlEF,
    CtlEG,
    CtlEU,
    CtlEX,
    CtlFormula,
    CtlImplies,
    CtlNot,
    CtlOr,
    TransitionSystem,
    Variable,
)
from .semantics import Guard, Hold, RuleList, ValueChoice

_UNARY_OPS = {
    CtlAG: "AG", CtlAF: "AF", CtlAX: "AX",
    CtlEG: "EG", CtlEF: "EF", CtlEX: "EX",
}


def _check_symbol(sym: str) -> str:
    if not is_identifier(sym):
        raise EmitError(f"{sym!r} is not a legal SMV identifier")
    return sym


def _value_set(values: tuple[str, ...]) -> str:
    return "{" + ", ".join(_check_symbol(v) for v in values) + "}"


def _choice_text(choice: ValueChoice | Hold, var: str) -> str:
    if isinstance(choice, Hold):
        return var
    if choice.deterministic:
        return _check_symbol(choice.values[0])
    return _value_set(choice.values)


def render_guard(g: Guard) -> str:
    if g.is_true:
        return "TRUE"
    terms = []
    for term in g.terms:
        body = " & ".join(f"{_check_symbol(a.lhs)} = {_check_symbol(a.value)}"
                          for a in term)
        if len(g.terms) > 1 and len(term) > 1:
            body = f"({body})"
        terms.append(body)
    return " | ".join(terms)


def render_ctl(f: CtlFormula) -> str:
    return _render_ctl(f, in_temporal=False)


def _render_ctl(f: CtlFormula, in_temporal: bool) -> str:
    # A unary temporal operator parenthesizes its argument except when it
    # is itself the direct argument of another unary temporal operator:
    # AG (AF sw = on), but AG (x = a -> AF (x = b)). Binary children always
    # need parens (the operator binds tighter than the connectives).
    for klass, op in _UNARY_OPS.items():
        if isinstance(f, klass):
            inner = _render_ctl(f.sub, in_temporal=True)
            bare = in_temporal and not isinstance(
                f.sub, (CtlAnd, CtlOr, CtlImplies)
            )
            return f"{op} {inner}" if bare else f"{op} ({inner})"
    if isinstance(f, CtlAtom):
        return f"{_check_symbol(f.var)} = {_check_symbol(f.value)}"
    if isinstance(f, CtlNot):
        return f"!({_render_ctl(f.sub, False)})"
    if isinstance(f, CtlEU):
        return (
            f"E [ {_render_ctl(f.left, False)} U {_render_ctl(f.right, False)} ]"
        )
    if isinstance(f, (CtlAnd, CtlOr, CtlImplies)):
        op = {CtlAnd: "&", CtlOr: "|", CtlImplies: "->"}[type(f)]
        left = _render_ctl(f.left, False)
        right = _render_ctl(f.right, False)
        if isinstance(f.left, (CtlAnd, CtlOr, CtlImplies)):
            left = f"({left})"
        if isinstance(f.right, (CtlAnd, CtlOr)) or (
            isinstance(f.right, CtlImplies) and not isinstance(f, CtlImplies)
        ):
            right = f"({right})"
        return f"{left} {op} {right}"
    raise EmitError(f"cannot render formula node {type(f).__name__}")


def _emit_assign(lines: list[str], var: Variable, rules: RuleList):
    init = (
        _check_symbol(var.init[0])
        if len(var.init) == 1
        else _value_set(var.init)
    )
    lines.append(f"  init({var.name}) := {init};")
    if not rules.cases:
        lines.append(f"  next({var.name}) := {_choice_text(rules.default, var.name)};")
        return
    lines.append(f"  next({var.name}) := case")
    for guard, choice in rules.cases:
        lines.append(f"    {render_guard(guard)} : {_choice_text(choice, var.name)};")
    lines.append(f"    TRUE : {_choice_text(rules.default, var.name)};")
    lines.append("  esac;")


def emit_smv(ts: TransitionSystem) -> str:
    """Render the system; equal systems yield identical bytes."""
    lines = ["MODULE main"]
    if ts.variables:
        lines.append("VAR")
        for v in ts.variables:
            _check_symbol(v.name)
            lines.append(f"  {v.name} : {_value_set(v.domain)};")
        lines.append("ASSIGN")
        for v, rule in zip(ts.variables, ts.rules):
            _emit_assign(lines, v, rule.rules)
    for fc in ts.fairness:
        lines.append(f"FAIRNESS {render_guard(fc.guard)};")
    for spec in ts.specs:
        lines.append(f"CTLSPEC {render_ctl(spec)}")
    return "\n".join(lines) + "\n"
