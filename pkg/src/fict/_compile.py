"""Compact integer representations shared by the matcher kernels.

Sentences and patterns are lowered to arrays of interned string ids so the
inner matching loop is integer work.  The same structures feed both the
compiled kernel and the pure-Python fallback; the two kernels differ only in
how the backtracking search is executed.
"""

import threading
from array import array

_POOL: dict[str, int] = {}
_POOL_LOCK = threading.Lock()


def intern_id(s: str) -> int:
    """Process-global string id; stable within a process, thread-safe."""
    v = _POOL.get(s)
    if v is None:
        with _POOL_LOCK:
            v = _POOL.get(s)
            if v is None:
                v = len(_POOL)
                _POOL[s] = v
    return v


def _sorted_ids(strings) -> array:
    return array("i", sorted({intern_id(s) for s in strings}))


def deprel_prefixes(deprel: str) -> list[str]:
    """All ':'-boundary prefixes, e.g. acl:relcl -> [acl, acl:relcl]."""
    out = []
    idx = deprel.find(":")
    while idx != -1:
        out.append(deprel[:idx])
        idx = deprel.find(":", idx + 1)
    out.append(deprel)
    return out


class SentenceIndex:
    """Per-sentence arrays, 1-based by token id (slot 0 unused).

    ``child``/``child_off`` is a CSR adjacency over heads 0..n (head 0 =
    artificial root), children in ascending id order.
    """

    __slots__ = (
        "n", "head", "upos", "form", "lemma", "dep_full",
        "pref", "pref_off", "feat", "feat_off", "child", "child_off",
        "flat",
    )

    def __init__(self, sentence):
        tokens = sentence.tokens
        n = len(tokens)
        self.n = n
        head = array("i", [0]) * (n + 1)
        upos = array("i", head)
        form = array("i", head)
        lemma = array("i", head)
        dep_full = array("i", head)
        pref = array("i")
        pref_off = array("i", [0]) * (n + 2)
        feat = array("i")
        feat_off = array("i", [0]) * (n + 2)

        for tok in tokens:
            i = tok.id
            head[i] = tok.head
            upos[i] = intern_id(tok.upos)
            form[i] = intern_id(tok.form.casefold())
            lemma[i] = intern_id(tok.lemma)
            dep_full[i] = intern_id(tok.deprel)

        pos = 0
        fpos = 0
        for i, tok in enumerate(tokens, start=1):
            pref_off[i] = pos
            for p in deprel_prefixes(tok.deprel):
                pref.append(intern_id(p))
                pos += 1
            feat_off[i] = fpos
            for fid in sorted(intern_id(f) for f in tok.feats):
                feat.append(fid)
                fpos += 1
        pref_off[n + 1] = pos
        feat_off[n + 1] = fpos
        if not feat:
            feat.append(0)  # non-empty buffer for memoryview export

        counts = [0] * (n + 1)
        for tok in tokens:
            counts[tok.head] += 1
        child_off = array("i", [0]) * (n + 2)
        for h in range(n + 1):
            child_off[h + 1] = child_off[h] + counts[h]
        cursor = list(child_off[: n + 1])
        child = array("i", [0]) * max(n, 1)
        for tok in tokens:  # token ids ascend, so children stay sorted
            child[cursor[tok.head]] = tok.id
            cursor[tok.head] += 1

        self.head = head
        self.upos = upos
        self.form = form
        self.lemma = lemma
        self.dep_full = dep_full
        self.pref = pref
        self.pref_off = pref_off
        self.feat = feat
        self.feat_off = feat_off
        self.child = child
        self.child_off = child_off

        # single-buffer form consumed by the compiled kernel: one memoryview
        # per call instead of a dozen.  Layout:
        #   [0]=n [1]=len(pref) [2]=len(feat) [3]=len(child), then sections
        #   head/upos/form/lemma/dep_full (n+1 each),
        #   pref_off/feat_off/child_off (n+2 each), pref, feat, child.
        flat = array("i", [n, len(pref), len(feat), len(child)])
        for section in (head, upos, form, lemma, dep_full,
                        pref_off, feat_off, child_off, pref, feat, child):
            flat.extend(section)
        self.flat = flat


class CompiledPattern:
    """Pattern lowered to eval-slot order (each slot's parent precedes it).

    Per-slot constraint sets exist twice: as sorted int arrays (``*_arr``,
    consumed by the compiled kernel) and as frozensets (``*_set``, consumed
    by the pure kernel).  ``None`` means unconstrained.
    """

    __slots__ = (
        "k", "names", "decl_perm",
        "upos_arr", "form_arr", "lemma_arr", "dep_arr", "feat_arr",
        "upos_set", "form_set", "lemma_set", "dep_set",
        "dep_exact", "edge_parent", "edge_exact", "edge_depth",
        "edge_rels_arr", "edge_rels_set", "orders", "n_orders",
        "flat_data", "flat_meta",
    )

    # constraint-kind indices in the flattened layout
    K_UPOS, K_FORM, K_LEMMA, K_DEP, K_FEAT, K_RELS = range(6)

    def __init__(self, pattern):
        decl_names = list(pattern.nodes)
        k = len(decl_names)
        parent_of: dict[str, object] = {name: None for name in decl_names}
        edge_of = {}
        for edge in pattern.edges:
            parent_of[edge.child] = edge.parent
            edge_of[edge.child] = edge

        roots = [name for name in decl_names if parent_of[name] is None]
        order: list[str] = list(roots)  # pattern validation guarantees len 1
        while len(order) < k:
            for name in decl_names:
                if name not in order and parent_of[name] in order:
                    order.append(name)

        slot_of = {name: s for s, name in enumerate(order)}
        self.k = k
        self.names = tuple(order)
        self.decl_perm = array("i", [slot_of[name] for name in decl_names])

        def lower(values, casefold=False):
            if values is None:
                return None, None
            vals = [v.casefold() for v in values] if casefold else list(values)
            return _sorted_ids(vals), frozenset(intern_id(v) for v in vals)

        self.upos_arr, self.upos_set = [None] * k, [None] * k
        self.form_arr, self.form_set = [None] * k, [None] * k
        self.lemma_arr, self.lemma_set = [None] * k, [None] * k
        self.dep_arr, self.dep_set = [None] * k, [None] * k
        self.feat_arr = [array("i")] * k
        self.dep_exact = array("i", [0]) * k
        self.edge_parent = array("i", [-1]) * k
        self.edge_exact = array("i", [0]) * k
        self.edge_depth = array("i", [0]) * k
        self.edge_rels_arr = [None] * k
        self.edge_rels_set = [None] * k

        for name, pred in pattern.nodes.items():
            s = slot_of[name]
            self.upos_arr[s], self.upos_set[s] = lower(pred.upos_in)
            self.form_arr[s], self.form_set[s] = lower(pred.form_in, casefold=True)
            self.lemma_arr[s], self.lemma_set[s] = lower(pred.lemma_in)
            self.dep_arr[s], self.dep_set[s] = lower(pred.deprel_in)
            self.dep_exact[s] = 1 if pred.deprel_exact else 0
            if pred.feats_require:
                self.feat_arr[s] = _sorted_ids(pred.feats_require)

        for name, edge in edge_of.items():
            s = slot_of[name]
            self.edge_parent[s] = slot_of[edge.parent]
            self.edge_depth[s] = edge.max_depth
            self.edge_exact[s] = 1 if edge.rel_exact else 0
            self.edge_rels_arr[s], self.edge_rels_set[s] = lower(edge.rels)

        flat = array("i")
        for oc in pattern.order:
            flat.extend((slot_of[oc.left], slot_of[oc.right], 1 if oc.adjacent else 0))
        self.n_orders = len(pattern.order)
        if not flat:
            flat.append(0)  # non-empty buffer for memoryview export
        self.orders = flat

        # Flatten the per-(slot, kind) constraint arrays into one data array
        # with start/end offsets, for the compiled kernel.  An absent
        # constraint has flat_has == 0 (feat: an empty requirement list).
        by_kind = [
            self.upos_arr, self.form_arr, self.lemma_arr,
            self.dep_arr, self.feat_arr, self.edge_rels_arr,
        ]
        data = array("i")
        start = array("i", [0]) * (6 * k)
        end = array("i", [0]) * (6 * k)
        has = array("i", [0]) * (6 * k)
        for kind, per_slot in enumerate(by_kind):
            for s in range(k):
                arr = per_slot[s]
                idx = kind * k + s
                if arr is None or (kind == self.K_FEAT and len(arr) == 0):
                    continue
                has[idx] = 1
                start[idx] = len(data)
                data.extend(arr)
                end[idx] = len(data)
        if not data:
            data.append(0)  # keep the buffer non-empty for memoryview export
        self.flat_data = data

        # single-buffer pattern header for the compiled kernel:
        #   [0]=k, [1]=n_orders, then edge_parent/edge_exact/edge_depth/
        #   dep_exact (k each), fhas/fstart/fend (6k each), orders.
        meta = array("i", [k, self.n_orders])
        for section in (self.edge_parent, self.edge_exact, self.edge_depth,
                        self.dep_exact, has, start, end):
            meta.extend(section)
        for oc in pattern.order:
            meta.extend((slot_of[oc.left], slot_of[oc.right], 1 if oc.adjacent else 0))
        self.flat_meta = meta
