"""Test-only re-parser for the SMV subset the emitter produces.

Reconstructs a TransitionSystem (variables, init, case rules, fairness;
specs are ignored) so round-trip sanity can compare successor functions.
"""

from __future__ import annotations

import re

from nodecheck.ir import TransitionRule, TransitionSystem, Variable
from nodecheck.semantics import Atom, Guard, HOLD, RuleList, ValueChoice

_VAR_RE = re.compile(r"^  (\w+) : \{(.*)\};$")
_INIT_RE = re.compile(r"^  init\((\w+)\) := (.*);$")
_NEXT_ONE_RE = re.compile(r"^  next\((\w+)\) := ([^c].*|c[^a].*|ca[^s].*);$")
_NEXT_CASE_RE = re.compile(r"^  next\((\w+)\) := case$")
_CASE_RE = re.compile(r"^    (.*) : (.*);$")
_FAIR_RE = re.compile(r"^FAIRNESS (.*);$")


def _values(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(","))


def _parse_choice(text: str):
    if text.startswith("{"):
        return ValueChoice(_values(text[1:-1]))
    return text  # single symbol: value or self-reference (hold)


def _parse_guard(text: str) -> Guard:
    terms = []
    for part in text.split(" | "):
        part = part.strip()
        if part.startswith("(") and part.endswith(")"):
            part = part[1:-1]
        atoms = []
        for comparison in part.split(" & "):
            lhs, rhs = comparison.split(" = ")
            atoms.append(Atom(lhs.strip(), rhs.strip()))
        terms.append(tuple(atoms))
    return Guard(tuple(terms))


def reparse_smv(text: str) -> TransitionSystem:
    lines = text.splitlines()
    assert lines[0] == "MODULE main"
    domains: dict[str, tuple[str, ...]] = {}
    order: list[str] = []
    inits: dict[str, tuple[str, ...]] = {}
    rules: dict[str, RuleList] = {}
    fairness: list[Guard] = []

    i = 1
    while i < len(lines):
        line = lines[i]
        if line in ("VAR", "ASSIGN"):
            i += 1
            continue
        m = _VAR_RE.match(line)
        if m and " := " not in line:
            order.append(m.group(1))
            domains[m.group(1)] = _values(m.group(2))
            i += 1
            continue
        m = _INIT_RE.match(line)
        if m:
            value = m.group(2)
            inits[m.group(1)] = (
                _values(value[1:-1]) if value.startswith("{") else (value,)
            )
            i += 1
            continue
        m = _NEXT_CASE_RE.match(line)
        if m:
            name = m.group(1)
            i += 1
            cases = []
            default = None
            while lines[i] != "  esac;":
                cm = _CASE_RE.match(lines[i])
                assert cm, lines[i]
                guard_text, choice_text = cm.group(1), cm.group(2)
                choice = _parse_choice(choice_text)
                if guard_text == "TRUE":
                    default = (
                        HOLD
                        if choice == name
                        else (choice if isinstance(choice, ValueChoice)
                              else ValueChoice((choice,)))
                    )
                else:
                    if isinstance(choice, str):
                        choice = ValueChoice((choice,))
                    cases.append((_parse_guard(guard_text), choice))
                i += 1
            assert default is not None
            rules[name] = RuleList(tuple(cases), default)
            i += 1
            continue
        m = re.match(r"^  next\((\w+)\) := (.*);$", line)
        if m:
            name = m.group(1)
            choice = _parse_choice(m.group(2))
            rules[name] = RuleList(
                (),
                HOLD
                if choice == name
                else (choice if isinstance(choice, ValueChoice)
                      else ValueChoice((choice,))),
            )
            i += 1
            continue
        m = _FAIR_RE.match(line)
        if m:
            fairness.append(_parse_guard(m.group(1)))
            i += 1
            continue
        if line.startswith("CTLSPEC") or not line.strip():
            i += 1
            continue
        raise AssertionError(f"unrecognized SMV line: {line!r}")

    variables = tuple(Variable(n, domains[n], inits[n]) for n in order)
    from nodecheck.ir import FairnessConstraint

    return TransitionSystem(
        variables=variables,
        rules=tuple(TransitionRule(n, rules[n]) for n in order),
        fairness=tuple(FairnessConstraint(g) for g in fairness),
    )
