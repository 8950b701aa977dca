"""Compiled matching kernel: anchor scan, atom prefilter, and the
combination search over per-group parse choices, all on interned ints.

Must stay behaviorally identical to the pure-Python fallback in
``_match_py``; the randomized oracle suite cross-checks both.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"

DEF MAX_PARSES = 64


def match_anchors(es, er):
    """Return [(anchor, var_value_ids, per_group_parse_index_lists), ...]."""
    cdef int[:] tok_start = es.tok_start
    cdef int[:] parse_start = es.parse_start
    cdef int[:] feat_key = es.feat_key
    cdef int[:] feat_val = es.feat_val
    cdef int[:] offsets = er.offsets
    cdef int[:] sps = er.sps
    cdef int[:] con_start = er.con_start
    cdef int[:] con_key = er.con_key
    cdef int[:] con_kind = er.con_kind
    cdef int[:] con_arg = er.con_arg

    cdef int n = es.n_tokens
    cdef int begin_idx = es.begin_idx
    cdef int end_idx = es.end_idx
    cdef int n_groups = er.n_groups
    cdef int n_vars = er.n_vars

    cdef int max_con = 1
    cdef int g, c
    for g in range(n_groups):
        c = con_start[g + 1] - con_start[g]
        if c > max_con:
            max_con = c

    cdef int req_stride = MAX_PARSES * max_con
    cdef int *targets = <int *> malloc(n_groups * sizeof(int))
    cdef int *cand_count = <int *> malloc(n_groups * sizeof(int))
    cdef int *cand_local = <int *> malloc(n_groups * MAX_PARSES * sizeof(int))
    cdef int *req_len = <int *> malloc(n_groups * MAX_PARSES * sizeof(int))
    cdef int *req_slot = <int *> malloc(n_groups * req_stride * sizeof(int))
    cdef int *req_val = <int *> malloc(n_groups * req_stride * sizeof(int))
    cdef int *binding = <int *> malloc((n_vars + 1) * sizeof(int))
    cdef int *first = <int *> malloc((n_vars + 1) * sizeof(int))
    cdef int *chosen = <int *> malloc(n_groups * sizeof(int))
    cdef int *pos = <int *> malloc(n_groups * sizeof(int))
    cdef int *trail = <int *> malloc(n_groups * max_con * sizeof(int))
    cdef int *trail_len = <int *> malloc(n_groups * sizeof(int))
    cdef unsigned long long *used = <unsigned long long *> malloc(
        n_groups * sizeof(unsigned long long))
    if (targets == NULL or cand_count == NULL or cand_local == NULL
            or req_len == NULL or req_slot == NULL or req_val == NULL
            or binding == NULL or first == NULL or chosen == NULL
            or pos == NULL or trail == NULL or trail_len == NULL
            or used == NULL):
        free(targets); free(cand_count); free(cand_local); free(req_len)
        free(req_slot); free(req_val); free(binding); free(first)
        free(chosen); free(pos); free(trail); free(trail_len); free(used)
        raise MemoryError()

    results = []
    cdef int anchor, t, sp, row, base, ci, fi, key, value, ok, cnt, rl
    cdef int level, j, k, tl, slot, have_first, gg, i, advanced
    cdef unsigned long long mask
    try:
        for anchor in range(n):
            ok = 1
            for g in range(n_groups):
                t = anchor + offsets[g]
                if t < 0 or t >= n:
                    ok = 0
                    break
                sp = sps[g]
                if sp == 1 and t != begin_idx:
                    ok = 0
                    break
                if sp == 2 and t != end_idx:
                    ok = 0
                    break
                targets[g] = t
            if not ok:
                continue

            # atom prefilter per group; record variable requirements
            ok = 1
            for g in range(n_groups):
                t = targets[g]
                base = tok_start[t]
                cnt = 0
                for row in range(base, tok_start[t + 1]):
                    rl = 0
                    ok = 1
                    for ci in range(con_start[g], con_start[g + 1]):
                        key = con_key[ci]
                        value = -1
                        for fi in range(parse_start[row], parse_start[row + 1]):
                            if feat_key[fi] == key:
                                value = feat_val[fi]
                                break
                        if value < 0:
                            ok = 0
                            break
                        if con_kind[ci] == 0:
                            if value != con_arg[ci]:
                                ok = 0
                                break
                        else:
                            req_slot[g * req_stride + cnt * max_con + rl] = con_arg[ci]
                            req_val[g * req_stride + cnt * max_con + rl] = value
                            rl += 1
                    if ok:
                        cand_local[g * MAX_PARSES + cnt] = row - base
                        req_len[g * MAX_PARSES + cnt] = rl
                        cnt += 1
                cand_count[g] = cnt
                if cnt == 0:
                    ok = 0
                    break
                ok = 1
            if not ok:
                continue

            # search all combinations for consistent variable assignments
            for i in range(n_vars):
                binding[i] = -1
            for g in range(n_groups):
                used[g] = 0
            have_first = 0
            level = 0
            pos[0] = 0
            while True:
                advanced = 0
                while pos[level] < cand_count[level]:
                    j = pos[level]
                    pos[level] += 1
                    tl = 0
                    ok = 1
                    for k in range(req_len[level * MAX_PARSES + j]):
                        slot = req_slot[level * req_stride + j * max_con + k]
                        value = req_val[level * req_stride + j * max_con + k]
                        if binding[slot] < 0:
                            binding[slot] = value
                            trail[level * max_con + tl] = slot
                            tl += 1
                        elif binding[slot] != value:
                            ok = 0
                            break
                    if not ok:
                        for k in range(tl):
                            binding[trail[level * max_con + k]] = -1
                        continue
                    trail_len[level] = tl
                    chosen[level] = cand_local[level * MAX_PARSES + j]
                    if level == n_groups - 1:
                        if not have_first:
                            for i in range(n_vars):
                                first[i] = binding[i]
                            have_first = 1
                        for gg in range(n_groups):
                            used[gg] |= (<unsigned long long> 1) << chosen[gg]
                        for k in range(tl):
                            binding[trail[level * max_con + k]] = -1
                        continue
                    level += 1
                    pos[level] = 0
                    advanced = 1
                    break
                if advanced:
                    continue
                if level == 0:
                    break
                level -= 1
                for k in range(trail_len[level]):
                    binding[trail[level * max_con + k]] = -1

            if have_first:
                per_group = []
                for g in range(n_groups):
                    mask = used[g]
                    indices = []
                    for i in range(MAX_PARSES):
                        if mask >> i & 1:
                            indices.append(i)
                    per_group.append(indices)
                results.append(
                    (anchor, tuple(first[i] for i in range(n_vars)), per_group)
                )
    finally:
        free(targets); free(cand_count); free(cand_local); free(req_len)
        free(req_slot); free(req_val); free(binding); free(first)
        free(chosen); free(pos); free(trail); free(trail_len); free(used)
    return results
