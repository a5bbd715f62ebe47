"""Scalar-loop kernels, written in the restricted style numba can compile.

These are the playout hot spots: line scans, capture flood fills,
connectivity labeling, and move-candidate generation. The package wraps
each function with ``@njit`` when JIT is enabled (see ``__init__``); the
same source also runs uncompiled, which the equivalence tests exploit.

Candidate generators return rows in loop order; callers re-sort moves into
a canonical order, so only the row *set* is contractual.
"""

from __future__ import annotations

import numpy as np


def max_run_through(owner, site, who, nbr, axes):
    """Longest consecutive run of ``who``-owned sites through ``site``."""
    best = 0
    if owner[site] != who:
        return 0
    for a in range(axes.shape[0]):
        run = 1
        for k in range(2):
            d = axes[a, k]
            cur = nbr[d, site]
            while cur >= 0 and owner[cur] == who:
                run += 1
                cur = nbr[d, cur]
        if run > best:
            best = run
    return best


def line_anywhere(owner, who, length, nbr, axes):
    """Whether any run of ``who`` with at least ``length`` sites exists."""
    n = owner.shape[0]
    for s in range(n):
        if owner[s] != who:
            continue
        for a in range(axes.shape[0]):
            back = nbr[axes[a, 1], s]
            if back >= 0 and owner[back] == who:
                continue  # not the start of the run on this axis
            run = 1
            cur = nbr[axes[a, 0], s]
            while cur >= 0 and owner[cur] == who:
                run += 1
                cur = nbr[axes[a, 0], cur]
            if run >= length:
                return True
    return False


def enclosed_captures(owner, target, from_site, nbr_rel):
    """Mark every ``target`` group adjacent to ``from_site`` that has no
    empty neighbor under the relation. Returns a uint8 capture mask."""
    n = owner.shape[0]
    captured = np.zeros(n, dtype=np.uint8)
    visited = np.zeros(n, dtype=np.uint8)
    stack = np.empty(n, dtype=np.int64)
    group = np.empty(n, dtype=np.int64)
    ndirs = nbr_rel.shape[0]
    for di in range(ndirs):
        seed = nbr_rel[di, from_site]
        if seed < 0 or target[seed] == 0 or visited[seed] == 1:
            continue
        top = 0
        stack[top] = seed
        top += 1
        visited[seed] = 1
        gsize = 0
        has_liberty = False
        while top > 0:
            top -= 1
            cur = stack[top]
            group[gsize] = cur
            gsize += 1
            for d in range(ndirs):
                nb = nbr_rel[d, cur]
                if nb < 0:
                    continue
                if owner[nb] == 0:
                    has_liberty = True
                elif target[nb] == 1 and visited[nb] == 0:
                    visited[nb] = 1
                    stack[top] = nb
                    top += 1
        if not has_liberty:
            for i in range(gsize):
                captured[group[i]] = 1
    return captured


def label_components(mask, nbr_rel):
    """Connected-component labels over ``mask`` sites; label = smallest
    member index, -1 outside the mask."""
    n = mask.shape[0]
    labels = np.full(n, -1, dtype=np.int32)
    stack = np.empty(n, dtype=np.int64)
    ndirs = nbr_rel.shape[0]
    for s in range(n):
        if mask[s] == 0 or labels[s] >= 0:
            continue
        labels[s] = s
        top = 0
        stack[top] = s
        top += 1
        while top > 0:
            top -= 1
            cur = stack[top]
            for d in range(ndirs):
                nb = nbr_rel[d, cur]
                if nb >= 0 and mask[nb] == 1 and labels[nb] < 0:
                    labels[nb] = s
                    stack[top] = nb
                    top += 1
    return labels


def hop_candidates(froms, dir_ids, nbr, between_ok, to_ok):
    """(from, between, to) rows for jumps over one site."""
    cap = froms.shape[0] * dir_ids.shape[0]
    out = np.empty((cap, 3), dtype=np.int32)
    m = 0
    for i in range(froms.shape[0]):
        f = froms[i]
        for j in range(dir_ids.shape[0]):
            d = dir_ids[j]
            b = nbr[d, f]
            if b < 0 or between_ok[b] == 0:
                continue
            t = nbr[d, b]
            if t < 0 or to_ok[t] == 0:
                continue
            out[m, 0] = f
            out[m, 1] = b
            out[m, 2] = t
            m += 1
    return out[:m]


def step_candidates(froms, dir_ids, nbr, to_ok):
    """(from, to) rows for single-step moves."""
    cap = froms.shape[0] * dir_ids.shape[0]
    out = np.empty((cap, 2), dtype=np.int32)
    m = 0
    for i in range(froms.shape[0]):
        f = froms[i]
        for j in range(dir_ids.shape[0]):
            t = nbr[dir_ids[j], f]
            if t >= 0 and to_ok[t] == 1:
                out[m, 0] = f
                out[m, 1] = t
                m += 1
    return out[:m]


def slide_candidates(froms, dir_ids, nbr, empty, to_ok):
    """(from, to) rows for straight slides across empty sites."""
    n = empty.shape[0]
    cap = froms.shape[0] * dir_ids.shape[0] * n
    out = np.empty((cap, 2), dtype=np.int32)
    m = 0
    for i in range(froms.shape[0]):
        f = froms[i]
        for j in range(dir_ids.shape[0]):
            d = dir_ids[j]
            cur = nbr[d, f]
            while cur >= 0 and empty[cur] == 1:
                if to_ok[cur] == 1:
                    out[m, 0] = f
                    out[m, 1] = cur
                    m += 1
                cur = nbr[d, cur]
    return out[:m]


def component_region_bits(owner, who, seed, nbr_rel, bits):
    """OR of region bits over the ``who``-component containing ``seed``."""
    n = owner.shape[0]
    if owner[seed] != who:
        return 0
    visited = np.zeros(n, dtype=np.uint8)
    stack = np.empty(n, dtype=np.int64)
    top = 0
    stack[top] = seed
    top += 1
    visited[seed] = 1
    acc = 0
    ndirs = nbr_rel.shape[0]
    while top > 0:
        top -= 1
        cur = stack[top]
        acc |= int(bits[cur])
        for d in range(ndirs):
            nb = nbr_rel[d, cur]
            if nb >= 0 and owner[nb] == who and visited[nb] == 0:
                visited[nb] = 1
                stack[top] = nb
                top += 1
    return acc
