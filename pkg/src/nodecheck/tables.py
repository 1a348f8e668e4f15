"""Integer-table compilation of a transition system.

The checker works on states encoded as small-int vectors (one entry per
variable, value = index into that variable's domain). Rule lists flatten
into index arrays with case/term/atom nesting expressed as offset ranges,
the form the numeric kernels consume. ``successors`` over the tables must
agree with the dict-based reference semantics in :mod:`nodecheck.ir`; the
test suite holds the two to each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .ir import Assignment, TransitionSystem
from .semantics import Hold

VALUE_DTYPE = np.int16


@dataclass
class CompiledSystem:
    """Flattened rule tables; see :func:`compile_system` for layout."""

    var_names: tuple[str, ...]
    domains: tuple[tuple[str, ...], ...]
    var_case_ptr: np.ndarray    # int32[V+1] -> case ids
    case_term_ptr: np.ndarray   # int32[C+1] -> term ids
    term_atom_ptr: np.ndarray   # int32[T+1] -> atom ids
    atom_var: np.ndarray        # int32[A]
    atom_val: np.ndarray        # int16[A]
    case_choice_ptr: np.ndarray  # int32[C+1] -> choice value ids
    choice_val: np.ndarray      # int16
    default_ptr: np.ndarray     # int32[V+1] -> default value ids
    default_val: np.ndarray     # int16
    default_hold: np.ndarray    # bool[V]
    init_rows: np.ndarray       # int16[I, V] initial states, enumeration order

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    def value_index(self, var: str, value: str) -> int:
        v = self.var_names.index(var)
        return self.domains[v].index(value)

    def encode(self, assignment: Assignment) -> np.ndarray:
        row = np.empty(self.n_vars, dtype=VALUE_DTYPE)
        for i, name in enumerate(self.var_names):
            row[i] = self.domains[i].index(assignment[name])
        return row

    def decode(self, row: np.ndarray) -> Assignment:
        return {
            name: self.domains[i][int(row[i])]
            for i, name in enumerate(self.var_names)
        }

    def tables(self) -> tuple[np.ndarray, ...]:
        """The kernel argument pack, in the order every kernel expects."""
        return (
            self.var_case_ptr,
            self.case_term_ptr,
            self.term_atom_ptr,
            self.atom_var,
            self.atom_val,
            self.case_choice_ptr,
            self.choice_val,
            self.default_ptr,
            self.default_val,
            self.default_hold,
        )


def compile_system(ts: TransitionSystem) -> CompiledSystem:
    var_names = ts.variable_names()
    var_index = {n: i for i, n in enumerate(var_names)}
    domains = tuple(v.domain for v in ts.variables)
    val_index = [
        {value: i for i, value in enumerate(domain)} for domain in domains
    ]

    var_case_ptr = [0]
    case_term_ptr = [0]
    term_atom_ptr = [0]
    atom_var: list[int] = []
    atom_val: list[int] = []
    case_choice_ptr = [0]
    choice_val: list[int] = []
    default_ptr = [0]
    default_val: list[int] = []
    default_hold: list[bool] = []

    for v, rule in enumerate(ts.rules):
        for guard, choice in rule.rules.cases:
            for term in guard.terms:
                for a in term:
                    ai = var_index[a.lhs]
                    atom_var.append(ai)
                    atom_val.append(val_index[ai][a.value])
                term_atom_ptr.append(len(atom_var))
            case_term_ptr.append(len(term_atom_ptr) - 1)
            for value in choice.values:
                choice_val.append(val_index[v][value])
            case_choice_ptr.append(len(choice_val))
        var_case_ptr.append(len(case_term_ptr) - 1)

        if isinstance(rule.rules.default, Hold):
            default_hold.append(True)
        else:
            default_hold.append(False)
            for value in rule.rules.default.values:
                default_val.append(val_index[v][value])
        default_ptr.append(len(default_val))

    n_vars = len(var_names)
    if n_vars:
        init_rows = np.array(
            list(
                itertools.product(
                    *(
                        [val_index[v][value] for value in ts.variables[v].init]
                        for v in range(n_vars)
                    )
                )
            ),
            dtype=VALUE_DTYPE,
        )
    else:
        init_rows = np.zeros((1, 0), dtype=VALUE_DTYPE)

    return CompiledSystem(
        var_names=var_names,
        domains=domains,
        var_case_ptr=np.asarray(var_case_ptr, dtype=np.int32),
        case_term_ptr=np.asarray(case_term_ptr, dtype=np.int32),
        term_atom_ptr=np.asarray(term_atom_ptr, dtype=np.int32),
        atom_var=np.asarray(atom_var, dtype=np.int32),
        atom_val=np.asarray(atom_val, dtype=VALUE_DTYPE),
        case_choice_ptr=np.asarray(case_choice_ptr, dtype=np.int32),
        choice_val=np.asarray(choice_val, dtype=VALUE_DTYPE),
        default_ptr=np.asarray(default_ptr, dtype=np.int32),
        default_val=np.asarray(default_val, dtype=VALUE_DTYPE),
        default_hold=np.asarray(default_hold, dtype=np.bool_),
        init_rows=init_rows,
    )
