"""Explicit-state CTL checking with fairness, plus lasso counterexamples.

Temporal operators quantify over fair paths only: a state is fair iff
some path from it visits every fairness set infinitely often. Existential
primitives: EX restricts targets to fair states, EU demands a fair
endpoint, EG uses the strongly-connected-component characterization (a
fair path staying in a set exists iff the set contains a path to a
nontrivial SCC of the induced subgraph that meets every fairness set).
Universal operators are the duals. Without fairness constraints every
state is fair (the relation is total) and evaluation is plain CTL.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CheckError
from .ir import (
    Assignment,
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
    is_propositional,
)
from .kernels import get_impl
from .kripke import DEFAULT_STATE_CAP, KripkeStructure, build_state_space


@dataclass(frozen=True)
class Trace:
    """Lasso (or finite) witness: prefix states, then a repeating loop."""

    prefix: tuple[Assignment, ...]
    loop: tuple[Assignment, ...]

    def states(self) -> tuple[Assignment, ...]:
        return self.prefix + self.loop


@dataclass(frozen=True)
class Verdict:
    spec: CtlFormula
    holds: bool
    counterexample: Trace | None = None


def _true_mask(ks: KripkeStructure) -> np.ndarray:
    return np.ones(ks.n_states, np.bool_)


def eg_fair_mask(ks: KripkeStructure, mask: np.ndarray) -> np.ndarray:
    """States with a fair path staying inside ``mask`` forever."""
    impl = get_impl()
    ids = impl.scc_ids(ks.succ_indptr, ks.succ_indices, mask)
    ncomp = int(ids.max()) + 1
    if ncomp == 0:
        return np.zeros(ks.n_states, np.bool_)
    src = np.repeat(
        np.arange(ks.n_states, dtype=np.int64), np.diff(ks.succ_indptr)
    )
    dst = ks.succ_indices
    internal = (ids[src] >= 0) & (ids[src] == ids[dst])
    nontrivial = np.zeros(ncomp, np.bool_)
    nontrivial[ids[src[internal]]] = True

    fair_comp = nontrivial
    for fmask in ks.fairness_masks:
        has = np.zeros(ncomp, np.bool_)
        sel = (ids >= 0) & fmask
        has[ids[sel]] = True
        fair_comp = fair_comp & has

    seeds = np.zeros(ks.n_states, np.bool_)
    in_comp = ids >= 0
    seeds[in_comp] = fair_comp[ids[in_comp]]
    pred_indptr, pred_indices = ks.pred_csr()
    return impl.eu_mask(
        ks.succ_indptr, ks.succ_indices, pred_indptr, pred_indices, mask, seeds
    )


def evaluate(ks: KripkeStructure, f: CtlFormula) -> np.ndarray:
    """Satisfaction mask of ``f`` over the reachable states (fair semantics)."""
    impl = get_impl()
    fair = ks.fair_states()
    pred_indptr, pred_indices = ks.pred_csr()

    def eu(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return impl.eu_mask(
            ks.succ_indptr, ks.succ_indices, pred_indptr, pred_indices, a, b
        )

    def ex(target: np.ndarray) -> np.ndarray:
        return impl.ex_mask(ks.succ_indptr, ks.succ_indices, target)

    def rec(g: CtlFormula) -> np.ndarray:
        if isinstance(g, CtlAtom):
            return ks.atom_mask(g.var, g.value)
        if isinstance(g, CtlNot):
            return ~rec(g.sub)
        if isinstance(g, CtlAnd):
            return rec(g.left) & rec(g.right)
        if isinstance(g, CtlOr):
            return rec(g.left) | rec(g.right)
        if isinstance(g, CtlImplies):
            return ~rec(g.left) | rec(g.right)
        if isinstance(g, CtlEX):
            return ex(rec(g.sub) & fair)
        if isinstance(g, CtlEU):
            return eu(rec(g.left), rec(g.right) & fair)
        if isinstance(g, CtlEF):
            return eu(_true_mask(ks), rec(g.sub) & fair)
        if isinstance(g, CtlEG):
            return eg_fair_mask(ks, rec(g.sub))
        if isinstance(g, CtlAX):
            return ~ex(~rec(g.sub) & fair)
        if isinstance(g, CtlAF):
            return ~eg_fair_mask(ks, ~rec(g.sub))
        if isinstance(g, CtlAG):
            return ~eu(_true_mask(ks), ~rec(g.sub) & fair)
        raise CheckError(f"cannot evaluate formula node {type(g).__name__}")

    return rec(f)


def check(
    source: TransitionSystem | KripkeStructure,
    f: CtlFormula,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Verdict:
    """Verdict over all fair initial states, with a counterexample when the
    top-level form supports a trace witness."""
    ks = (
        source
        if isinstance(source, KripkeStructure)
        else build_state_space(source, state_cap)
    )
    sat = evaluate(ks, f)
    fair = ks.fair_states()
    init = ks.init_indices
    holds = all(sat[i] or not fair[i] for i in init)
    cex = None if holds else _counterexample(ks, f, fair)
    return Verdict(spec=f, holds=holds, counterexample=cex)


# ---------------------------------------------------------------------------
# counterexample extraction


def _walk(parent: np.ndarray, target: int) -> list[int]:
    path = [target]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    return path[::-1]


def _nearest(dist: np.ndarray, candidates: np.ndarray) -> int | None:
    masked = np.where(candidates & (dist >= 0), dist, np.iinfo(np.int64).max)
    i = int(masked.argmin())
    return i if masked[i] != np.iinfo(np.int64).max else None


def _shortest_path(
    ks: KripkeStructure, sources: list[int], targets: np.ndarray,
    allowed: np.ndarray,
) -> list[int] | None:
    impl = get_impl()
    parent, dist = impl.bfs_tree(
        ks.succ_indptr, ks.succ_indices,
        np.asarray(sources, np.int64), allowed,
    )
    t = _nearest(dist, targets)
    return None if t is None else _walk(parent, t)


def _af_shape(body: CtlFormula) -> tuple[CtlFormula | None, CtlFormula] | None:
    """Match ``AF q`` or ``p -> AF q`` with propositional p, q."""
    if isinstance(body, CtlAF) and is_propositional(body.sub):
        return None, body.sub
    if (
        isinstance(body, CtlImplies)
        and is_propositional(body.left)
        and isinstance(body.right, CtlAF)
        and is_propositional(body.right.sub)
    ):
        return body.left, body.right.sub
    return None


def _counterexample(
    ks: KripkeStructure, f: CtlFormula, fair: np.ndarray
) -> Trace | None:
    if isinstance(f, CtlAG):
        body = f.sub
        bad = fair & ~evaluate(ks, body)
        start = _first_reaching_init(ks, bad)
        if start is None:
            return None
        head = _shortest_path(ks, [start], bad, _true_mask(ks))
        if head is None:
            return None
        shape = _af_shape(body)
        if shape is not None:
            return _lasso_trace(ks, head, shape[1])
        if is_propositional(body):
            return Trace(tuple(ks.assignment(i) for i in head), ())
        return None
    if isinstance(f, CtlAF) and is_propositional(f.sub):
        bad = fair & ~evaluate(ks, f)
        for i in ks.init_indices:
            if bad[i]:
                return _lasso_trace(ks, [int(i)], f.sub)
        return None
    return None


def _first_reaching_init(ks: KripkeStructure, bad: np.ndarray) -> int | None:
    """First initial state (enumeration order) that can reach a bad state."""
    impl = get_impl()
    pred_indptr, pred_indices = ks.pred_csr()
    can_reach = impl.eu_mask(
        ks.succ_indptr, ks.succ_indices, pred_indptr, pred_indices,
        _true_mask(ks), bad,
    )
    for i in ks.init_indices:
        if can_reach[i]:
            return int(i)
    return None


def _lasso_trace(
    ks: KripkeStructure, head: list[int], avoid: CtlFormula
) -> Trace | None:
    """Extend ``head`` (ending at a bad state) into a fair lasso whose loop
    avoids ``avoid``-states: path within the avoid-free region to a fair
    nontrivial SCC, then a loop around it meeting every fairness set."""
    impl = get_impl()
    region = ~evaluate(ks, avoid)
    ids = impl.scc_ids(ks.succ_indptr, ks.succ_indices, region)
    ncomp = int(ids.max()) + 1
    if ncomp == 0:
        return None
    src = np.repeat(
        np.arange(ks.n_states, dtype=np.int64), np.diff(ks.succ_indptr)
    )
    dst = ks.succ_indices
    internal = (ids[src] >= 0) & (ids[src] == ids[dst])
    fair_comp = np.zeros(ncomp, np.bool_)
    fair_comp[ids[src[internal]]] = True
    for fmask in ks.fairness_masks:
        has = np.zeros(ncomp, np.bool_)
        sel = (ids >= 0) & fmask
        has[ids[sel]] = True
        fair_comp &= has
    seeds = np.zeros(ks.n_states, np.bool_)
    in_comp = ids >= 0
    seeds[in_comp] = fair_comp[ids[in_comp]]

    b = head[-1]
    to_scc = _shortest_path(ks, [b], seeds, region)
    if to_scc is None:
        return None
    entry = to_scc[-1]
    comp_mask = ids == ids[entry]

    loop = [entry]
    cur = entry
    for fmask in ks.fairness_masks:
        if any(fmask[s] for s in loop):
            continue
        seg = _shortest_path(ks, [cur], fmask & comp_mask, comp_mask)
        if seg is None:
            return None
        loop.extend(seg[1:])
        cur = loop[-1]

    if cur != entry:
        back = _shortest_path(ks, [cur], _index_mask(ks, entry), comp_mask)
        if back is None or len(back) < 2:
            return None
        loop.extend(back[1:-1])
    else:
        if entry not in ks.successors_of(entry):
            nxt = next(
                (int(w) for w in ks.successors_of(entry) if comp_mask[w]), None
            )
            if nxt is None:
                return None
            back = _shortest_path(ks, [nxt], _index_mask(ks, entry), comp_mask)
            if back is None:
                return None
            loop.extend(back[:-1])

    full = head + to_scc[1:]
    prefix = full[:-1]
    return Trace(
        tuple(ks.assignment(i) for i in prefix),
        tuple(ks.assignment(i) for i in loop),
    )


def _index_mask(ks: KripkeStructure, i: int) -> np.ndarray:
    mask = np.zeros(ks.n_states, np.bool_)
    mask[i] = True
    return mask
