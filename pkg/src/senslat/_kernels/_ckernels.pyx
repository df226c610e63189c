# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; signatures and results match ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t, int32_t
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _popcount(uint64_t v) nogil:
    return __builtin_popcountll(v)


def sensitivity_counts(bits, int n):
    """Per-input sensitivity via word-level XOR of the packed table with its
    own stride-shifted copy, one variable at a time."""
    cdef const cnp.uint8_t[::1] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef Py_ssize_t size = b.shape[0]
    cdef Py_ssize_t nwords = (size + 63) // 64
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] packed_arr = np.zeros(nwords, dtype=np.uint64)
    cdef uint64_t[::1] packed = packed_arr
    counts_arr = np.zeros(size, dtype=np.int32)
    cdef int32_t[::1] counts = counts_arr
    cdef Py_ssize_t j, w, stride, wstride
    cdef uint64_t diff, low_mask
    cdef int i, k
    for j in range(size):
        if b[j]:
            packed[j >> 6] |= (<uint64_t>1) << (j & 63)
    with nogil:
        for i in range(n):
            stride = (<Py_ssize_t>1) << i
            if stride < 64:
                # lanes whose bit i is clear, inside one word
                low_mask = 0
                for k in range(64):
                    if not (k & stride):
                        low_mask |= (<uint64_t>1) << k
                for w in range(nwords):
                    diff = (packed[w] ^ (packed[w] >> stride)) & low_mask
                    diff |= diff << stride
                    while diff:
                        k = __builtin_ctzll(diff)
                        if (w << 6) + k < size:
                            counts[(w << 6) + k] += 1
                        diff &= diff - 1
            else:
                wstride = stride >> 6
                for w in range(nwords):
                    if (w & wstride) == 0:
                        diff = packed[w] ^ packed[w + wstride]
                        while diff:
                            k = __builtin_ctzll(diff)
                            counts[(w << 6) + k] += 1
                            counts[((w + wstride) << 6) + k] += 1
                            diff &= diff - 1
    return counts_arr


cdef struct PackState:
    const int64_t *masks
    int k
    int64_t full
    int best
    int *chosen
    int *best_set


cdef void _pack_rec(PackState *st, int start, int64_t used, int depth) nogil:
    cdef int i, free_bits, bound
    if depth > st.best:
        st.best = depth
        for i in range(depth):
            st.best_set[i] = st.chosen[i]
    free_bits = _popcount(<uint64_t>(st.full & ~used))
    for i in range(start, st.k):
        bound = st.k - i
        if free_bits < bound:
            bound = free_bits
        if depth + bound <= st.best:
            return
        if st.masks[i] & used:
            continue
        st.chosen[depth] = i
        _pack_rec(st, i + 1, used | st.masks[i], depth + 1)


cdef int _pack(const int64_t *masks, int k, int *best_set) nogil:
    cdef PackState st
    cdef int i
    cdef int *chosen
    if k == 0:
        return 0
    chosen = <int *> malloc(k * sizeof(int))
    st.masks = masks
    st.k = k
    st.full = 0
    for i in range(k):
        st.full |= masks[i]
    st.best = 0
    st.chosen = chosen
    st.best_set = best_set
    _pack_rec(&st, 0, 0, 0)
    free(chosen)
    return st.best


def max_packing(masks):
    """Largest pairwise-disjoint subfamily, lexicographically smallest."""
    cdef const cnp.int64_t[::1] m = np.ascontiguousarray(masks, dtype=np.int64)
    cdef int k = m.shape[0]
    if k == 0:
        return 0, np.zeros(0, dtype=np.int64)
    out = np.zeros(k, dtype=np.int32)
    cdef int[::1] o = out
    cdef int best
    with nogil:
        best = _pack(&m[0], k, &o[0])
    return int(best), out[:best].astype(np.int64)


def minimal_sensitive_blocks(bits, int n, int64_t x, masks):
    cdef const cnp.uint8_t[::1] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef const cnp.int64_t[::1] m = np.ascontiguousarray(masks, dtype=np.int64)
    cdef Py_ssize_t k = m.shape[0]
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(k, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef Py_ssize_t cnt = _minimal_at(&b[0], x, &m[0], k, &o[0], k)
    return out[:cnt]


cdef Py_ssize_t _minimal_at(const uint8_t *b, int64_t x, const int64_t *masks, Py_ssize_t k,
                            int64_t *out, Py_ssize_t cap) nogil:
    """Fill ``out`` with minimal sensitive blocks; returns count, or -1 past cap."""
    cdef Py_ssize_t j, t, cnt = 0
    cdef uint8_t fx = b[x]
    cdef int64_t mm
    cdef bint minimal
    for j in range(k):
        mm = masks[j]
        if b[x ^ mm] == fx:
            continue
        minimal = True
        for t in range(cnt):
            if (out[t] & mm) == out[t]:
                minimal = False
                break
        if minimal:
            if cnt >= cap:
                return -1
            out[cnt] = mm
            cnt += 1
    return cnt


def block_profile(bits, int n, masks, int lmax, Py_ssize_t candidate_cap):
    cdef const cnp.uint8_t[::1] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef const cnp.int64_t[::1] m = np.ascontiguousarray(masks, dtype=np.int64)
    cdef Py_ssize_t size = b.shape[0]
    cdef Py_ssize_t k = m.shape[0]
    values_arr = np.zeros(lmax + 1, dtype=np.int64)
    argx_arr = np.zeros(lmax + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] values = values_arr
    cdef cnp.int64_t[::1] argx = argx_arr
    if k == 0 or lmax < 1:
        return values_arr, argx_arr
    cdef Py_ssize_t cap = candidate_cap if candidate_cap < k else k
    cdef int64_t *minimal = <int64_t *> malloc((cap + 1) * sizeof(int64_t))
    cdef int64_t *cand = <int64_t *> malloc((cap + 1) * sizeof(int64_t))
    cdef int *best_set = <int *> malloc((cap + 1) * sizeof(int))
    cdef int64_t x
    cdef Py_ssize_t cnt, t, nc
    cdef int l, val, ub
    cdef int64_t bad_x = -1
    try:
        with nogil:
            for x in range(size):
                cnt = _minimal_at(&b[0], x, &m[0], k, minimal, cap)
                if cnt < 0:
                    bad_x = x
                    break
                if cnt == 0:
                    continue
                for l in range(1, lmax + 1):
                    nc = 0
                    for t in range(cnt):
                        if _popcount(<uint64_t>minimal[t]) <= l:
                            cand[nc] = minimal[t]
                            nc += 1
                    ub = nc if nc < n else n
                    if ub <= values[l]:
                        continue
                    val = _pack(cand, <int>nc, best_set)
                    if val > values[l]:
                        values[l] = val
                        argx[l] = x
    finally:
        free(minimal)
        free(cand)
        free(best_set)
    if bad_x >= 0:
        raise OverflowError(f"more than {candidate_cap} minimal blocks at input {bad_x}")
    return values_arr, argx_arr


def sliced_blue(points, axes, cs, zero_ptr, zero_idx):
    cdef const cnp.int64_t[:, ::1] p = np.ascontiguousarray(points, dtype=np.int64)
    cdef const cnp.int64_t[::1] ax = np.ascontiguousarray(axes, dtype=np.int64)
    cdef const cnp.int64_t[::1] c = np.ascontiguousarray(cs, dtype=np.int64)
    cdef const cnp.int64_t[::1] zp = np.ascontiguousarray(zero_ptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] zi = np.ascontiguousarray(zero_idx, dtype=np.int64)
    cdef Py_ssize_t npts = p.shape[0]
    cdef Py_ssize_t nsl = ax.shape[0]
    out = np.zeros(npts, dtype=np.uint8)
    cdef cnp.uint8_t[::1] o = out
    cdef Py_ssize_t i, s, t
    cdef bint hit
    with nogil:
        for i in range(npts):
            for s in range(nsl):
                if p[i, ax[s]] != c[s]:
                    continue
                hit = True
                for t in range(zp[s], zp[s + 1]):
                    if p[i, zi[t]] != 0:
                        hit = False
                        break
                if hit:
                    o[i] = 1
                    break
    return out
