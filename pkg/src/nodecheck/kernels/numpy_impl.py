"""Vectorized fallback kernels (numpy, scipy for strong components).

Same contract and same result orderings as the numba backend; the test
suite checks the two against each other on fixtures and random systems.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

BACKEND = "numpy"

_SEL_CASE = 0
_SEL_DEFAULT = 1
_SEL_HOLD = 2


def expand_frontier(
    states,
    var_case_ptr,
    case_term_ptr,
    term_atom_ptr,
    atom_var,
    atom_val,
    case_choice_ptr,
    choice_val,
    default_ptr,
    default_val,
    default_hold,
):
    n, n_vars = states.shape
    sel_start = np.empty((n, n_vars), np.int64)
    sel_len = np.empty((n, n_vars), np.int64)
    sel_kind = np.empty((n, n_vars), np.int8)
    for v in range(n_vars):
        if default_hold[v]:
            start_col = np.zeros(n, np.int64)
            len_col = np.ones(n, np.int64)
            kind_col = np.full(n, _SEL_HOLD, np.int8)
        else:
            start_col = np.full(n, default_ptr[v], np.int64)
            len_col = np.full(n, default_ptr[v + 1] - default_ptr[v], np.int64)
            kind_col = np.full(n, _SEL_DEFAULT, np.int8)
        resolved = np.zeros(n, np.bool_)
        for c in range(var_case_ptr[v], var_case_ptr[v + 1]):
            case_ok = np.zeros(n, np.bool_)
            for t in range(case_term_ptr[c], case_term_ptr[c + 1]):
                term_ok = np.ones(n, np.bool_)
                for a in range(term_atom_ptr[t], term_atom_ptr[t + 1]):
                    term_ok &= states[:, atom_var[a]] == atom_val[a]
                case_ok |= term_ok
            hit = case_ok & ~resolved
            start_col[hit] = case_choice_ptr[c]
            len_col[hit] = case_choice_ptr[c + 1] - case_choice_ptr[c]
            kind_col[hit] = _SEL_CASE
            resolved |= case_ok
        sel_start[:, v] = start_col
        sel_len[:, v] = len_col
        sel_kind[:, v] = kind_col

    counts = (
        sel_len.prod(axis=1) if n_vars else np.ones(n, np.int64)
    ).astype(np.int64)
    offsets = np.zeros(n + 1, np.int64)
    np.cumsum(counts, out=offsets[1:])
    succ = np.empty((int(offsets[-1]), n_vars), states.dtype)

    det = counts == 1
    if det.any() and n_vars:
        rows = offsets[:-1][det]
        sub_start = sel_start[det]
        sub_kind = sel_kind[det]
        sub_states = states[det]
        vals = np.empty((int(det.sum()), n_vars), states.dtype)
        for v in range(n_vars):
            kind = sub_kind[:, v]
            col = np.empty(kind.size, states.dtype)
            m = kind == _SEL_CASE
            col[m] = choice_val[sub_start[m, v]]
            m = kind == _SEL_DEFAULT
            col[m] = default_val[sub_start[m, v]]
            m = kind == _SEL_HOLD
            col[m] = sub_states[m, v]
            vals[:, v] = col
        succ[rows] = vals

    for i in np.nonzero(~det)[0]:
        base = offsets[i]
        for j in range(counts[i]):
            rem = j
            row = base + j
            for v in range(n_vars - 1, -1, -1):
                length = sel_len[i, v]
                digit = rem % length
                rem //= length
                kind = sel_kind[i, v]
                if kind == _SEL_CASE:
                    succ[row, v] = choice_val[sel_start[i, v] + digit]
                elif kind == _SEL_DEFAULT:
                    succ[row, v] = default_val[sel_start[i, v] + digit]
                else:
                    succ[row, v] = states[i, v]
    return succ, offsets


def ex_mask(succ_indptr, succ_indices, target):
    n = succ_indptr.size - 1
    out = np.zeros(n, np.bool_)
    if succ_indices.size == 0:
        return out
    hit = target[succ_indices]
    nonempty = succ_indptr[:-1] < succ_indptr[1:]
    # reduceat over only the nonempty row starts: consecutive starts
    # delimit exactly one row because empty rows add no edges in between
    starts = succ_indptr[:-1][nonempty]
    out[nonempty] = np.logical_or.reduceat(hit, starts)
    return out


def eu_mask(succ_indptr, succ_indices, pred_indptr, pred_indices, a, b):
    res = b.copy()
    while True:
        grow = a & ~res & ex_mask(succ_indptr, succ_indices, res)
        if not grow.any():
            return res
        res |= grow


def scc_ids(succ_indptr, succ_indices, mask):
    n = mask.size
    ids = np.full(n, -1, np.int64)
    m = int(mask.sum())
    if m == 0:
        return ids
    remap = np.cumsum(mask) - 1
    src_all = np.repeat(np.arange(n), np.diff(succ_indptr))
    keep = mask[src_all] & mask[succ_indices]
    sub_src = remap[src_all[keep]]
    sub_dst = remap[succ_indices[keep]]
    graph = csr_matrix(
        (np.ones(sub_src.size, np.int8), (sub_src, sub_dst)), shape=(m, m)
    )
    _, labels = connected_components(graph, directed=True, connection="strong")
    ids[mask] = labels
    return ids


def _gather_ragged(succ_indptr, succ_indices, frontier):
    starts = succ_indptr[frontier]
    counts = succ_indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return (
            np.empty(0, frontier.dtype),
            np.empty(0, succ_indices.dtype),
        )
    shifts = np.zeros(frontier.size, np.int64)
    np.cumsum(counts[:-1], out=shifts[1:])
    positions = np.arange(total, dtype=np.int64) + np.repeat(starts - shifts, counts)
    return np.repeat(frontier, counts), succ_indices[positions]


def bfs_tree(succ_indptr, succ_indices, sources, allowed):
    n = allowed.size
    parent = np.full(n, -2, np.int64)
    dist = np.full(n, -1, np.int64)
    order: list[int] = []
    for s in sources:
        if allowed[s] and parent[s] == -2:
            parent[s] = -1
            dist[s] = 0
            order.append(int(s))
    frontier = np.asarray(order, np.int64)
    level = 0
    while frontier.size:
        level += 1
        srcs, dsts = _gather_ragged(succ_indptr, succ_indices, frontier)
        keep = allowed[dsts] & (parent[dsts] == -2)
        srcs, dsts = srcs[keep], dsts[keep]
        if dsts.size == 0:
            break
        uniq, first = np.unique(dsts, return_index=True)
        parent[uniq] = srcs[first]
        dist[uniq] = level
        # discovery order must match the queue-based backend
        frontier = uniq[np.argsort(first, kind="stable")]
    return parent, dist
