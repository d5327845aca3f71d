"""Pure-Python backtracking matcher; fallback for the compiled kernel.

Same contract as ``_matchcore.find_matches``: given a SentenceIndex and a
CompiledPattern, return bindings as tuples of token ids in eval-slot order.
``limit=0`` returns every match; ``limit=1`` stops at the first.
"""

KERNEL = "pure"


def _node_ok(sidx, cpat, slot, t):
    s = cpat.upos_set[slot]
    if s is not None and sidx.upos[t] not in s:
        return False
    s = cpat.form_set[slot]
    if s is not None and sidx.form[t] not in s:
        return False
    s = cpat.lemma_set[slot]
    if s is not None and sidx.lemma[t] not in s:
        return False
    s = cpat.dep_set[slot]
    if s is not None:
        if cpat.dep_exact[slot]:
            if sidx.dep_full[t] not in s:
                return False
        elif not any(
            p in s for p in sidx.pref[sidx.pref_off[t]:sidx.pref_off[t + 1]]
        ):
            return False
    req = cpat.feat_arr[slot]
    if req:
        have = sidx.feat[sidx.feat_off[t]:sidx.feat_off[t + 1]]
        for f in req:
            if f not in have:
                return False
    return True


def _rel_ok(sidx, cpat, slot, t):
    rels = cpat.edge_rels_set[slot]
    if rels is None:
        return True
    if cpat.edge_exact[slot]:
        return sidx.dep_full[t] in rels
    return any(p in rels for p in sidx.pref[sidx.pref_off[t]:sidx.pref_off[t + 1]])


def _candidates(sidx, parent, depth):
    """Token ids reachable from ``parent`` in 1..depth child steps."""
    frontier = [parent]
    for _ in range(depth):
        nxt = []
        for p in frontier:
            nxt.extend(sidx.child[sidx.child_off[p]:sidx.child_off[p + 1]])
        yield from nxt
        if not nxt:
            return
        frontier = nxt


def _orders_ok(sidx, cpat, bind):
    oc = cpat.orders
    for i in range(0, 3 * cpat.n_orders, 3):
        left, right = bind[oc[i]], bind[oc[i + 1]]
        if oc[i + 2]:
            if left + 1 != right:
                return False
        elif left >= right:
            return False
    return True


def find_matches(sidx, cpat, limit=0):
    k = cpat.k
    bind = [0] * k
    used = set()
    out = []

    def place(slot):
        if slot == k:
            if _orders_ok(sidx, cpat, bind):
                out.append(tuple(bind))
                return limit and len(out) >= limit
            return False
        if slot == 0:
            candidates = range(1, sidx.n + 1)
        else:
            candidates = _candidates(
                sidx, bind[cpat.edge_parent[slot]], cpat.edge_depth[slot]
            )
        for t in candidates:
            if t in used:
                continue
            if slot and not _rel_ok(sidx, cpat, slot, t):
                continue
            if not _node_ok(sidx, cpat, slot, t):
                continue
            bind[slot] = t
            used.add(t)
            stop = place(slot + 1)
            used.discard(t)
            if stop:
                return True
        return False

    place(0)
    return out
