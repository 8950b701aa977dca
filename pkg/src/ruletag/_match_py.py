"""Pure-Python matching kernel; behavior mirrors the compiled extension.

For each anchor position, resolve every group's target token, prefilter
the parses that pass the group's atom constraints, then search all
combinations of per-group parse choices for globally consistent variable
assignments.  A match reports the first consistent binding (groups
ascending, parses in token order) and, per group, every parse index that
participates in at least one consistent combination.
"""

from __future__ import annotations

BACKEND = "pure"


def match_anchors(es, er):
    """Return [(anchor, var_value_ids, per_group_parse_index_lists), ...]."""
    results = []
    n = es.n_tokens
    tok_start = es.tok_start
    parse_start = es.parse_start
    feat_key = es.feat_key
    feat_val = es.feat_val
    n_groups = er.n_groups
    offsets = er.offsets
    sps = er.sps
    con_start = er.con_start
    con_key = er.con_key
    con_kind = er.con_kind
    con_arg = er.con_arg
    n_vars = er.n_vars

    for anchor in range(n):
        targets = []
        for g in range(n_groups):
            t = anchor + offsets[g]
            if t < 0 or t >= n:
                break
            sp = sps[g]
            if sp == 1 and t != es.begin_idx:
                break
            if sp == 2 and t != es.end_idx:
                break
            targets.append(t)
        if len(targets) < n_groups:
            continue

        # Per group: parses passing the atom constraints, with the variable
        # requirements (slot, value id) they would impose.
        candidates = []
        for g in range(n_groups):
            t = targets[g]
            c0, c1 = con_start[g], con_start[g + 1]
            found = []
            base = tok_start[t]
            for row in range(base, tok_start[t + 1]):
                reqs = []
                ok = True
                for ci in range(c0, c1):
                    key = con_key[ci]
                    value = -1
                    for fi in range(parse_start[row], parse_start[row + 1]):
                        if feat_key[fi] == key:
                            value = feat_val[fi]
                            break
                    if value < 0:
                        ok = False
                        break
                    if con_kind[ci] == 0:
                        if value != con_arg[ci]:
                            ok = False
                            break
                    else:
                        reqs.append((con_arg[ci], value))
                if ok:
                    found.append((row - base, reqs))
            if not found:
                break
            candidates.append(found)
        if len(candidates) < n_groups:
            continue

        binding = [-1] * n_vars
        chosen = [0] * n_groups
        used = [0] * n_groups
        first: tuple[int, ...] | None = None

        def walk(g):
            nonlocal first
            if g == n_groups:
                if first is None:
                    first = tuple(binding)
                for gg in range(n_groups):
                    used[gg] |= 1 << chosen[gg]
                return
            for local, reqs in candidates[g]:
                trail = []
                ok = True
                for slot, value in reqs:
                    current = binding[slot]
                    if current < 0:
                        binding[slot] = value
                        trail.append(slot)
                    elif current != value:
                        ok = False
                        break
                if ok:
                    chosen[g] = local
                    walk(g + 1)
                for slot in trail:
                    binding[slot] = -1

        walk(0)
        if first is not None:
            per_group = []
            for g in range(n_groups):
                mask = used[g]
                per_group.append([i for i in range(mask.bit_length()) if mask >> i & 1])
            results.append((anchor, first, per_group))
    return results
