"""Loop kernels, JIT-compiled. See the package docstring for the contract."""

from __future__ import annotations

import numpy as np
from numba import njit

BACKEND = "numba"


@njit(cache=True)
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
    counts = np.empty(n, np.int64)
    for i in range(n):
        total = 1
        for v in range(n_vars):
            kind = 1
            start = np.int64(default_ptr[v])
            length = np.int64(default_ptr[v + 1] - default_ptr[v])
            matched = False
            for c in range(var_case_ptr[v], var_case_ptr[v + 1]):
                case_ok = False
                for t in range(case_term_ptr[c], case_term_ptr[c + 1]):
                    term_ok = True
                    for a in range(term_atom_ptr[t], term_atom_ptr[t + 1]):
                        if states[i, atom_var[a]] != atom_val[a]:
                            term_ok = False
                            break
                    if term_ok:
                        case_ok = True
                        break
                if case_ok:
                    kind = 0
                    start = np.int64(case_choice_ptr[c])
                    length = np.int64(case_choice_ptr[c + 1] - case_choice_ptr[c])
                    matched = True
                    break
            if not matched and default_hold[v]:
                kind = 2
                start = np.int64(0)
                length = np.int64(1)
            sel_kind[i, v] = kind
            sel_start[i, v] = start
            sel_len[i, v] = length
            total *= length
        counts[i] = total

    offsets = np.empty(n + 1, np.int64)
    offsets[0] = 0
    for i in range(n):
        offsets[i + 1] = offsets[i] + counts[i]
    succ = np.empty((offsets[n], n_vars), states.dtype)
    for i in range(n):
        base = offsets[i]
        for j in range(counts[i]):
            rem = j
            row = base + j
            for v in range(n_vars - 1, -1, -1):
                length = sel_len[i, v]
                digit = rem % length
                rem //= length
                kind = sel_kind[i, v]
                if kind == 0:
                    succ[row, v] = choice_val[sel_start[i, v] + digit]
                elif kind == 1:
                    succ[row, v] = default_val[sel_start[i, v] + digit]
                else:
                    succ[row, v] = states[i, v]
    return succ, offsets


@njit(cache=True)
def ex_mask(succ_indptr, succ_indices, target):
    n = succ_indptr.size - 1
    out = np.zeros(n, np.bool_)
    for v in range(n):
        for p in range(succ_indptr[v], succ_indptr[v + 1]):
            if target[succ_indices[p]]:
                out[v] = True
                break
    return out


@njit(cache=True)
def eu_mask(succ_indptr, succ_indices, pred_indptr, pred_indices, a, b):
    # backward worklist over the predecessor adjacency
    n = pred_indptr.size - 1
    res = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int64)
    tail = 0
    for i in range(n):
        if b[i]:
            res[i] = True
            queue[tail] = i
            tail += 1
    head = 0
    while head < tail:
        v = queue[head]
        head += 1
        for p in range(pred_indptr[v], pred_indptr[v + 1]):
            w = pred_indices[p]
            if a[w] and not res[w]:
                res[w] = True
                queue[tail] = w
                tail += 1
    return res


@njit(cache=True)
def scc_ids(succ_indptr, succ_indices, mask):
    # iterative Tarjan restricted to the induced subgraph on `mask`
    n = mask.size
    ids = np.full(n, -1, np.int64)
    index = np.full(n, -1, np.int64)
    low = np.zeros(n, np.int64)
    onstack = np.zeros(n, np.bool_)
    stack = np.empty(n, np.int64)
    sp = 0
    frame_node = np.empty(n, np.int64)
    frame_ptr = np.empty(n, np.int64)
    counter = 0
    ncomp = 0
    for root in range(n):
        if not mask[root] or index[root] >= 0:
            continue
        depth = 0
        frame_node[0] = root
        frame_ptr[0] = succ_indptr[root]
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        onstack[root] = True
        while depth >= 0:
            v = frame_node[depth]
            p = frame_ptr[depth]
            advanced = False
            while p < succ_indptr[v + 1]:
                w = succ_indices[p]
                p += 1
                if not mask[w]:
                    continue
                if index[w] < 0:
                    frame_ptr[depth] = p
                    depth += 1
                    frame_node[depth] = w
                    frame_ptr[depth] = succ_indptr[w]
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    advanced = True
                    break
                elif onstack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            frame_ptr[depth] = p
            if low[v] == index[v]:
                while True:
                    w = stack[sp - 1]
                    sp -= 1
                    onstack[w] = False
                    ids[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            depth -= 1
            if depth >= 0:
                u = frame_node[depth]
                if low[v] < low[u]:
                    low[u] = low[v]
    return ids


@njit(cache=True)
def bfs_tree(succ_indptr, succ_indices, sources, allowed):
    n = allowed.size
    parent = np.full(n, -2, np.int64)
    dist = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    tail = 0
    for k in range(sources.size):
        s = sources[k]
        if allowed[s] and parent[s] == -2:
            parent[s] = -1
            dist[s] = 0
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        v = queue[head]
        head += 1
        for p in range(succ_indptr[v], succ_indptr[v + 1]):
            w = succ_indices[p]
            if allowed[w] and parent[w] == -2:
                parent[w] = v
                dist[w] = dist[v] + 1
                queue[tail] = w
                tail += 1
    return parent, dist
