"""Finite transition system IR.

Variables over finite symbolic domains, one guarded rule list per
variable, fairness constraints, and CTL specs. All variables step
synchronously: one global step applies every variable's first matching
case (or its default), and the successor set is the cartesian product of
the selected value choices. This is the single normative semantics; the
SMV emitter documents it and the checker executes it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .semantics import Guard, Hold, RuleList

Assignment = dict[str, str]

# which of the four variable kinds a Variable plays
ROLE_INPUT = "input"
ROLE_OUTPUT = "output"
ROLE_STATE = "state"
ROLE_SCRIPT = "script"


@dataclass(frozen=True, eq=False)
class Variable:
    """Finite-domain variable with a non-empty initial subset.

    Domains are ordered for emission but compare as sets.
    """

    name: str
    domain: tuple[str, ...]
    init: tuple[str, ...]
    role: str = ROLE_SCRIPT

    def __post_init__(self):
        if not self.domain:
            raise ValueError(f"{self.name}: empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError(f"{self.name}: duplicate domain values")
        if not self.init or not set(self.init) <= set(self.domain):
            raise ValueError(f"{self.name}: init must be a non-empty domain subset")

    def __eq__(self, other):
        if not isinstance(other, Variable):
            return NotImplemented
        return (
            self.name == other.name
            and frozenset(self.domain) == frozenset(other.domain)
            and frozenset(self.init) == frozenset(other.init)
            and self.role == other.role
        )

    def __hash__(self):
        return hash((self.name, frozenset(self.domain), frozenset(self.init)))


@dataclass(frozen=True)
class TransitionRule:
    """The next-state rule list of one variable; guards use variable names."""

    variable: str
    rules: RuleList


@dataclass(frozen=True)
class FairnessConstraint:
    """States satisfying ``guard`` must recur infinitely often on fair paths."""

    guard: Guard


# ---------------------------------------------------------------------------
# CTL formulas


class CtlFormula:
    """Base class; subclasses form the AST."""

    __slots__ = ()


@dataclass(frozen=True)
class CtlAtom(CtlFormula):
    var: str
    value: str


@dataclass(frozen=True)
class CtlNot(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class CtlAnd(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class CtlOr(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class CtlImplies(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class CtlAG(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class CtlAF(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class CtlAX(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class CtlEG(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class CtlEF(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class CtlEX(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class CtlEU(CtlFormula):
    left: CtlFormula
    right: CtlFormula


def ctl_atoms(f: CtlFormula) -> Iterable[CtlAtom]:
    if isinstance(f, CtlAtom):
        yield f
    elif isinstance(f, (CtlNot, CtlAG, CtlAF, CtlAX, CtlEG, CtlEF, CtlEX)):
        yield from ctl_atoms(f.sub)
    elif isinstance(f, (CtlAnd, CtlOr, CtlImplies, CtlEU)):
        yield from ctl_atoms(f.left)
        yield from ctl_atoms(f.right)


def is_propositional(f: CtlFormula) -> bool:
    if isinstance(f, CtlAtom):
        return True
    if isinstance(f, CtlNot):
        return is_propositional(f.sub)
    if isinstance(f, (CtlAnd, CtlOr, CtlImplies)):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


# ---------------------------------------------------------------------------
# provenance and the system itself


@dataclass(frozen=True)
class Provenance:
    """Where a variable came from, for counterexample rendering.

    ``port`` is set for per-port input variables. ``encoded_values`` maps a
    state-encoded output variable's values to ``(port or None, state)``.
    """

    node_id: str
    role: str
    port: str | None = None
    encoded_values: Mapping[str, tuple[str | None, str]] | None = None


@dataclass(frozen=True)
class TransitionSystem:
    """Variables, one rule per variable, fairness, specs, provenance."""

    variables: tuple[Variable, ...]
    rules: tuple[TransitionRule, ...]
    fairness: tuple[FairnessConstraint, ...] = ()
    specs: tuple[CtlFormula, ...] = ()
    provenance: Mapping[str, Provenance] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if [r.variable for r in self.rules] != names:
            raise ValueError("need exactly one rule per variable, in order")
        by_name = {v.name: v for v in self.variables}
        for rule in self.rules:
            domain = set(by_name[rule.variable].domain)
            for g, c in rule.rules.cases:
                self._check_guard(g, by_name)
                if not set(c.values) <= domain:
                    raise ValueError(
                        f"{rule.variable}: choice {c.values} outside domain"
                    )
            if not isinstance(rule.rules.default, Hold):
                if not set(rule.rules.default.values) <= domain:
                    raise ValueError(f"{rule.variable}: default outside domain")
        for fc in self.fairness:
            self._check_guard(fc.guard, by_name)

    @staticmethod
    def _check_guard(g: Guard, by_name: Mapping[str, Variable]):
        for a in g.atoms():
            if a.lhs not in by_name:
                raise ValueError(f"guard references unknown variable {a.lhs!r}")
            if a.value not in by_name[a.lhs].domain:
                raise ValueError(
                    f"guard references value {a.value!r} outside domain "
                    f"of {a.lhs}"
                )

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def rule_for(self, name: str) -> TransitionRule:
        for r in self.rules:
            if r.variable == name:
                return r
        raise KeyError(name)

    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def initial_assignments(self) -> list[Assignment]:
        """All initial states, in domain order per variable."""
        if not self.variables:
            return [{}]
        names = [v.name for v in self.variables]
        return [
            dict(zip(names, combo))
            for combo in itertools.product(*(v.init for v in self.variables))
        ]


def eval_guard(g: Guard, s: Mapping[str, str]) -> bool:
    """True iff some disjunct has all atoms satisfied under ``s``.

    Raises ``KeyError`` when an atom references a variable ``s`` does not
    assign.
    """
    return any(all(s[a.lhs] == a.value for a in term) for term in g.terms)


def _select_choice(rule: RuleList, var: str, s: Mapping[str, str]) -> tuple[str, ...]:
    for g, c in rule.cases:
        if eval_guard(g, s):
            return c.values
    if isinstance(rule.default, Hold):
        return (s[var],)
    return rule.default.values


def successors(ts: TransitionSystem, s: Assignment) -> list[Assignment]:
    """All one-step successors of a total assignment.

    Every variable steps once (synchronously); the result size is the
    product of the selected choice sizes. Rules are total by construction,
    so the result is never empty.
    """
    names = ts.variable_names()
    choices = [_select_choice(r.rules, r.variable, s) for r in ts.rules]
    return [dict(zip(names, combo)) for combo in itertools.product(*choices)]
