"""Pure-numpy fallback kernels.

Vectorized counterparts of ``_scalar``; they must agree with it on the
returned *sets* of rows / mask contents for every input. Used when numba is
unavailable or JIT is switched off via ``LUDOFORGE_JIT=0``.
"""

from __future__ import annotations

import numpy as np


def max_run_through(owner, site, who, nbr, axes):
    if owner[site] != who:
        return 0
    best = 1
    for a in range(axes.shape[0]):
        run = 1
        for k in range(2):
            cur = nbr[axes[a, k], site]
            while cur >= 0 and owner[cur] == who:
                run += 1
                cur = nbr[axes[a, k], cur]
        best = max(best, run)
    return best


def line_anywhere(owner, who, length, nbr, axes):
    mine = owner == who
    for a in range(axes.shape[0]):
        fwd = nbr[axes[a, 0]]
        run = mine.astype(np.int32)
        cur = np.where(mine, fwd, -1)
        # extend every run vectorially one hop at a time
        for _ in range(1, int(length)):
            alive = cur >= 0
            hit = np.zeros_like(mine)
            hit[alive] = mine[cur[alive]]
            run = run + (hit & (run > 0)).astype(np.int32)
            nxt = np.full_like(cur, -1)
            nxt[alive] = fwd[cur[alive]]
            cur = np.where(hit, nxt, -1)
        if (run >= length).any():
            return True
    return False


def _propagate_labels(mask, nbr_rel):
    n = mask.shape[0]
    labels = np.where(mask.astype(bool), np.arange(n, dtype=np.int32), np.int32(-1))
    while True:
        best = labels.copy()
        for d in range(nbr_rel.shape[0]):
            nb = nbr_rel[d]
            valid = (nb >= 0) & mask.astype(bool)
            nb_labels = np.full(n, np.iinfo(np.int32).max, dtype=np.int32)
            vi = np.where(valid)[0]
            cand = labels[nb[vi]]
            ok = mask[nb[vi]].astype(bool)
            nb_labels[vi[ok]] = cand[ok]
            best = np.where(
                mask.astype(bool) & (nb_labels < best), nb_labels, best
            ).astype(np.int32)
        if np.array_equal(best, labels):
            return labels
        labels = best


def label_components(mask, nbr_rel):
    return _propagate_labels(np.asarray(mask), nbr_rel)


def enclosed_captures(owner, target, from_site, nbr_rel):
    n = owner.shape[0]
    captured = np.zeros(n, dtype=np.uint8)
    labels = _propagate_labels(np.asarray(target), nbr_rel)
    seeds = nbr_rel[:, from_site]
    seeds = seeds[seeds >= 0]
    seed_labels = np.unique(labels[seeds][labels[seeds] >= 0])
    if seed_labels.size == 0:
        return captured
    empty = owner == 0
    for lab in seed_labels:
        members = np.where(labels == lab)[0]
        nbs = nbr_rel[:, members].ravel()
        nbs = nbs[nbs >= 0]
        if not empty[nbs].any():
            captured[members] = 1
    return captured


def hop_candidates(froms, dir_ids, nbr, between_ok, to_ok):
    if froms.size == 0 or dir_ids.size == 0:
        return np.empty((0, 3), dtype=np.int32)
    f = np.repeat(froms, dir_ids.size)
    d = np.tile(dir_ids, froms.size)
    b = nbr[d, f]
    ok = b >= 0
    ok[ok] &= between_ok[b[ok]] == 1
    t = np.full_like(b, -1)
    t[ok] = nbr[d[ok], b[ok]]
    ok &= t >= 0
    ok[ok] &= to_ok[t[ok]] == 1
    return np.stack([f[ok], b[ok], t[ok]], axis=1).astype(np.int32)


def step_candidates(froms, dir_ids, nbr, to_ok):
    if froms.size == 0 or dir_ids.size == 0:
        return np.empty((0, 2), dtype=np.int32)
    f = np.repeat(froms, dir_ids.size)
    d = np.tile(dir_ids, froms.size)
    t = nbr[d, f]
    ok = t >= 0
    ok[ok] &= to_ok[t[ok]] == 1
    return np.stack([f[ok], t[ok]], axis=1).astype(np.int32)


def slide_candidates(froms, dir_ids, nbr, empty, to_ok):
    if froms.size == 0 or dir_ids.size == 0:
        return np.empty((0, 2), dtype=np.int32)
    f = np.repeat(froms, dir_ids.size)
    d = np.tile(dir_ids, froms.size)
    rows_f: list[np.ndarray] = []
    rows_t: list[np.ndarray] = []
    cur = nbr[d, f]
    alive = (cur >= 0)
    alive[alive] &= empty[cur[alive]] == 1
    while alive.any():
        landable = alive.copy()
        landable[alive] &= to_ok[cur[alive]] == 1
        rows_f.append(f[landable])
        rows_t.append(cur[landable])
        nxt = np.full_like(cur, -1)
        nxt[alive] = nbr[d[alive], cur[alive]]
        cur = nxt
        alive = cur >= 0
        alive[alive] &= empty[cur[alive]] == 1
    if not rows_f:
        return np.empty((0, 2), dtype=np.int32)
    return np.stack(
        [np.concatenate(rows_f), np.concatenate(rows_t)], axis=1
    ).astype(np.int32)


def component_region_bits(owner, who, seed, nbr_rel, bits):
    n = owner.shape[0]
    mask = owner == who
    if not mask[seed]:
        return 0
    comp = np.zeros(n, dtype=bool)
    comp[seed] = True
    frontier = comp.copy()
    while frontier.any():
        nxt = np.zeros(n, dtype=bool)
        for d in range(nbr_rel.shape[0]):
            nb = nbr_rel[d][frontier]
            nb = nb[nb >= 0]
            nxt[nb] = True
        nxt &= mask & ~comp
        comp |= nxt
        frontier = nxt
    return int(np.bitwise_or.reduce(bits[comp]))
