"""Reachable state space as an explicit, indexed Kripke structure.

Breadth-first closure of the initial assignments under the synchronous
successor relation; states are int-encoded rows, adjacency is CSR. The
frontier expansion runs in the numeric kernels; deduplication keys rows
by their raw bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StateCapExceeded
from .ir import Assignment, TransitionSystem
from .kernels import get_impl
from .semantics import Guard
from .tables import CompiledSystem, VALUE_DTYPE, compile_system

DEFAULT_STATE_CAP = 5_000_000


@dataclass
class KripkeStructure:
    """Reachable states only; adjacency consistent with ``successors``."""

    ts: TransitionSystem
    compiled: CompiledSystem
    states: np.ndarray                 # int16 [N, V]
    init_indices: np.ndarray           # int64, enumeration order, deduplicated
    succ_indptr: np.ndarray            # int64 [N+1]
    succ_indices: np.ndarray           # int64 [E]
    fairness_masks: tuple[np.ndarray, ...]
    _pred: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)
    _fair: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_states(self) -> int:
        return self.states.shape[0]

    def assignment(self, i: int) -> Assignment:
        return self.compiled.decode(self.states[i])

    def find_index(self, assignment: Assignment) -> int | None:
        row = self.compiled.encode(assignment)
        hits = np.nonzero((self.states == row).all(axis=1))[0]
        return int(hits[0]) if hits.size else None

    def successors_of(self, i: int) -> np.ndarray:
        return self.succ_indices[self.succ_indptr[i]:self.succ_indptr[i + 1]]

    def pred_csr(self) -> tuple[np.ndarray, np.ndarray]:
        if self._pred is None:
            n = self.n_states
            src = np.repeat(
                np.arange(n, dtype=np.int64), np.diff(self.succ_indptr)
            )
            dst = self.succ_indices
            counts = np.bincount(dst, minlength=n)
            indptr = np.zeros(n + 1, np.int64)
            np.cumsum(counts, out=indptr[1:])
            order = np.argsort(dst, kind="stable")
            self._pred = (indptr, src[order])
        return self._pred

    def atom_mask(self, var: str, value: str) -> np.ndarray:
        from .errors import CheckError

        try:
            v = self.compiled.var_names.index(var)
        except ValueError:
            raise CheckError(f"atom references unknown variable {var!r}") from None
        try:
            val = self.compiled.domains[v].index(value)
        except ValueError:
            raise CheckError(
                f"atom references value {value!r} outside the domain of {var}"
            ) from None
        return self.states[:, v] == val

    def guard_mask(self, guard: Guard) -> np.ndarray:
        out = np.zeros(self.n_states, np.bool_)
        for term in guard.terms:
            term_mask = np.ones(self.n_states, np.bool_)
            for a in term:
                term_mask &= self.atom_mask(a.lhs, a.value)
            out |= term_mask
        return out

    def fair_states(self) -> np.ndarray:
        """States with some path visiting every fairness set infinitely often."""
        if self._fair is None:
            from .checker import eg_fair_mask

            self._fair = eg_fair_mask(self, np.ones(self.n_states, np.bool_))
        return self._fair


def build_state_space(
    ts: TransitionSystem, state_cap: int = DEFAULT_STATE_CAP
) -> KripkeStructure:
    """BFS closure of the initial assignments; raises
    :class:`StateCapExceeded` once more than ``state_cap`` states exist."""
    comp = compile_system(ts)
    impl = get_impl()
    tables = comp.tables()
    n_vars = comp.n_vars

    index: dict[bytes, int] = {}
    rows: list[np.ndarray] = []
    init_indices: list[int] = []
    for row in comp.init_rows:
        row = np.ascontiguousarray(row, dtype=VALUE_DTYPE)
        key = row.tobytes()
        idx = index.get(key)
        if idx is None:
            idx = len(rows)
            index[key] = idx
            rows.append(row.copy())
            init_indices.append(idx)

    edge_src: list[np.ndarray] = []
    edge_dst: list[np.ndarray] = []
    scan = 0
    while scan < len(rows):
        hi = len(rows)
        frontier = np.ascontiguousarray(
            np.vstack(rows[scan:hi]).reshape(hi - scan, n_vars), dtype=VALUE_DTYPE
        )
        succ, offsets = impl.expand_frontier(frontier, *tables)
        dst = np.empty(succ.shape[0], np.int64)
        for j in range(succ.shape[0]):
            key = succ[j].tobytes()
            idx = index.get(key)
            if idx is None:
                idx = len(rows)
                if idx >= state_cap:
                    raise StateCapExceeded(state_cap, idx)
                index[key] = idx
                rows.append(succ[j].copy())
            dst[j] = idx
        edge_src.append(
            np.repeat(np.arange(scan, hi, dtype=np.int64), np.diff(offsets))
        )
        edge_dst.append(dst)
        scan = hi

    n = len(rows)
    states = (
        np.vstack(rows).reshape(n, n_vars).astype(VALUE_DTYPE)
        if rows
        else np.zeros((0, n_vars), VALUE_DTYPE)
    )
    src = np.concatenate(edge_src) if edge_src else np.zeros(0, np.int64)
    dst = np.concatenate(edge_dst) if edge_dst else np.zeros(0, np.int64)
    # src is nondecreasing by construction, so CSR needs no sort
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, np.int64)
    np.cumsum(counts, out=indptr[1:])

    ks = KripkeStructure(
        ts=ts,
        compiled=comp,
        states=states,
        init_indices=np.asarray(init_indices, np.int64),
        succ_indptr=indptr,
        succ_indices=dst,
        fairness_masks=(),
    )
    ks.fairness_masks = tuple(ks.guard_mask(fc.guard) for fc in ts.fairness)
    return ks


def reachable_stats(
    ts: TransitionSystem, state_cap: int = DEFAULT_STATE_CAP
) -> tuple[int, str]:
    """Exact reachable-state count plus its base-2 logarithm, ``2^x.xxxx``."""
    ks = build_state_space(ts, state_cap)
    count = ks.n_states
    return count, format_state_count(count)


def format_state_count(count: int) -> str:
    return f"2^{math.log2(count):.4f}" if count else "2^-inf"
