# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled backtracking matcher; the hot kernel of corpus filtering.

Mirrors ``_matchpure.find_matches`` exactly: same SentenceIndex /
CompiledPattern inputs, same set of result bindings (tuples of token ids in
eval-slot order).  It consumes the single-buffer forms built by ``_compile``
(``SentenceIndex.flat``, ``CompiledPattern.flat_meta`` / ``flat_data``), so
one call costs three memoryview exports and the search itself is C-only.
"""

from libc.stdlib cimport free, malloc

KERNEL = "compiled"

DEF MAX_SLOTS = 16

# constraint-kind indices; must match _compile.CompiledPattern
DEF K_RELS = 5


cdef inline bint _member(const int[:] data, int lo, int hi, int x) noexcept nogil:
    cdef int mid, left = lo, right = hi
    while left < right:
        mid = (left + right) >> 1
        if data[mid] < x:
            left = mid + 1
        else:
            right = mid
    return left < hi and data[left] == x


cdef inline bint _any_member(const int[:] data, int lo, int hi,
                             const int[:] items, int ilo, int ihi) noexcept nogil:
    cdef int i
    for i in range(ilo, ihi):
        if _member(data, lo, hi, items[i]):
            return True
    return False


def find_matches(sidx, cpat, int limit=0):
    cdef int[:] S = sidx.flat       # sentence buffer
    cdef int[:] M = cpat.flat_meta  # pattern header
    cdef int[:] D = cpat.flat_data  # pattern constraint ids

    cdef int n = S[0]
    cdef int k = M[0]
    cdef int n_orders = M[1]
    if k > MAX_SLOTS:
        raise ValueError("pattern too large for compiled kernel")
    out = []
    if n == 0 or k == 0:
        return out

    # sentence section bases
    cdef int m = n + 1, q = n + 2
    cdef int b_head = 4
    cdef int b_upos = b_head + m
    cdef int b_form = b_upos + m
    cdef int b_lemma = b_form + m
    cdef int b_dep = b_lemma + m
    cdef int b_pref_off = b_dep + m
    cdef int b_feat_off = b_pref_off + q
    cdef int b_child_off = b_feat_off + q
    cdef int b_pref = b_child_off + q
    cdef int b_feat = b_pref + S[1]
    cdef int b_child = b_feat + S[2]

    # pattern header bases
    cdef int e_parent = 2
    cdef int e_exact = e_parent + k
    cdef int e_depth = e_exact + k
    cdef int p_dep_exact = e_depth + k
    cdef int b_has = p_dep_exact + k
    cdef int b_start = b_has + 6 * k
    cdef int b_end = b_start + 6 * k
    cdef int b_orders = b_end + 6 * k

    cdef int stride = n + 1
    cdef int *cand = <int *> malloc(sizeof(int) * k * stride)
    cdef char *used = <char *> malloc(n + 1)
    if cand == NULL or used == NULL:
        free(cand)
        free(used)
        raise MemoryError()

    cdef int cand_len[MAX_SLOTS]
    cdef int cur[MAX_SLOTS]
    cdef int bind[MAX_SLOTS]
    cdef int slot = 0, t, i, idx, base, mlen, lvl_start, lvl_end, d, p
    cdef int plo, phi
    cdef bint advanced, ok

    try:
        for i in range(n + 1):
            used[i] = 0
        for i in range(n):
            cand[i] = i + 1
        cand_len[0] = n
        cur[0] = 0

        while True:
            advanced = False
            base = slot * stride
            while cur[slot] < cand_len[slot]:
                t = cand[base + cur[slot]]
                cur[slot] += 1
                if used[t]:
                    continue
                plo = S[b_pref_off + t]
                phi = S[b_pref_off + t + 1]

                # incoming-relation constraint (edges only)
                if slot > 0 and M[b_has + K_RELS * k + slot]:
                    idx = K_RELS * k + slot
                    if M[e_exact + slot]:
                        ok = _member(D, M[b_start + idx], M[b_end + idx], S[b_dep + t])
                    else:
                        ok = _any_member(D, M[b_start + idx], M[b_end + idx],
                                         S, b_pref + plo, b_pref + phi)
                    if not ok:
                        continue

                # node predicate: upos(0), form(1), lemma(2), dep(3), feat(4)
                idx = slot  # kind 0
                if M[b_has + idx] and not _member(
                        D, M[b_start + idx], M[b_end + idx], S[b_upos + t]):
                    continue
                idx = k + slot
                if M[b_has + idx] and not _member(
                        D, M[b_start + idx], M[b_end + idx], S[b_form + t]):
                    continue
                idx = 2 * k + slot
                if M[b_has + idx] and not _member(
                        D, M[b_start + idx], M[b_end + idx], S[b_lemma + t]):
                    continue
                idx = 3 * k + slot
                if M[b_has + idx]:
                    if M[p_dep_exact + slot]:
                        ok = _member(D, M[b_start + idx], M[b_end + idx], S[b_dep + t])
                    else:
                        ok = _any_member(D, M[b_start + idx], M[b_end + idx],
                                         S, b_pref + plo, b_pref + phi)
                    if not ok:
                        continue
                idx = 4 * k + slot
                if M[b_has + idx]:
                    ok = True
                    for i in range(M[b_start + idx], M[b_end + idx]):
                        if not _member(S, b_feat + S[b_feat_off + t],
                                       b_feat + S[b_feat_off + t + 1], D[i]):
                            ok = False
                            break
                    if not ok:
                        continue

                bind[slot] = t
                if slot == k - 1:
                    ok = True
                    for i in range(0, 3 * n_orders, 3):
                        if M[b_orders + i + 2]:
                            if bind[M[b_orders + i]] + 1 != bind[M[b_orders + i + 1]]:
                                ok = False
                                break
                        elif bind[M[b_orders + i]] >= bind[M[b_orders + i + 1]]:
                            ok = False
                            break
                    if ok:
                        out.append(tuple([bind[i] for i in range(k)]))
                        if limit and len(out) >= limit:
                            return out
                    continue

                used[t] = 1
                slot += 1
                # fill candidates: breadth-first over children up to edge depth
                base = slot * stride
                p = bind[M[e_parent + slot]]
                mlen = 0
                for i in range(S[b_child_off + p], S[b_child_off + p + 1]):
                    cand[base + mlen] = S[b_child + i]
                    mlen += 1
                lvl_start = 0
                d = 1
                while d < M[e_depth + slot] and lvl_start < mlen:
                    lvl_end = mlen
                    for idx in range(lvl_start, lvl_end):
                        p = cand[base + idx]
                        for i in range(S[b_child_off + p], S[b_child_off + p + 1]):
                            cand[base + mlen] = S[b_child + i]
                            mlen += 1
                    lvl_start = lvl_end
                    d += 1
                cand_len[slot] = mlen
                cur[slot] = 0
                advanced = True
                break

            if advanced:
                continue
            if slot == 0:
                break
            slot -= 1
            used[bind[slot]] = 0

        return out
    finally:
        free(cand)
        free(used)
