"""Pure-Python / numpy implementations of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with an identical
signature and identical results; the twin is preferred when it compiled.
"""

import numpy as np

# rows of the boolean sensitivity matrix processed at once
_CHUNK_CELLS = 1 << 22


def sensitivity_counts(bits, n):
    """Per-input sensitivity of a truth table, all inputs at once.

    For each variable the table is compared against itself shifted by the
    variable's stride; the XOR marks every input sensitive to that variable.
    """
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    counts = np.zeros(bits.shape[0], dtype=np.int32)
    for i in range(n):
        stride = 1 << i
        view = bits.reshape(-1, 2, stride)
        diff = (view[:, 0, :] ^ view[:, 1, :]).astype(np.int32)
        cview = counts.reshape(-1, 2, stride)
        cview[:, 0, :] += diff
        cview[:, 1, :] += diff
    return counts


def max_packing(masks):
    """Largest pairwise-disjoint subfamily of ``masks`` (ascending order).

    Depth-first branch and bound in ascending mask order; the first family
    of maximum size found is the lexicographically smallest one. Returns
    ``(size, indices)``.
    """
    masks = [int(m) for m in masks]
    k = len(masks)
    if k == 0:
        return 0, np.zeros(0, dtype=np.int64)
    full = 0
    for m in masks:
        full |= m
    best = [0, []]
    chosen = []

    def rec(start, used, depth):
        if depth > best[0]:
            best[0] = depth
            best[1] = list(chosen)
        free = bin(full & ~used).count("1")
        for i in range(start, k):
            if depth + min(k - i, free) <= best[0]:
                return
            m = masks[i]
            if m & used:
                continue
            chosen.append(i)
            rec(i + 1, used | m, depth + 1)
            chosen.pop()

    rec(0, 0, 0)
    return best[0], np.asarray(best[1], dtype=np.int64)


def minimal_sensitive_blocks(bits, n, x, masks):
    """Minimal sensitive blocks at ``x`` among ``masks`` (ascending)."""
    bits = np.asarray(bits, dtype=np.uint8)
    masks = np.asarray(masks, dtype=np.int64)
    sens = masks[bits[x ^ masks] != bits[x]]
    minimal = []
    for m in sens.tolist():
        if not any((c & m) == c for c in minimal):
            minimal.append(m)
    return np.asarray(minimal, dtype=np.int64)


def _minimal_matrix(bits, xs, masks, pos, layers):
    """Boolean matrix [len(xs), len(masks)]: block is minimal sensitive at x.

    ``down[:, j]`` is true when mask j has a sensitive submask; it is built
    layer by layer in popcount order so each layer only looks one bit down.
    """
    fx = bits[xs][:, None]
    sens = bits[xs[:, None] ^ masks[None, :]] != fx
    down = sens.copy()
    minimal = sens.copy()
    for layer_idx, bit_lists in layers:
        if layer_idx.size == 0:
            continue
        below = np.zeros((xs.shape[0], layer_idx.size), dtype=bool)
        for sub_pos, rows in bit_lists:
            below[:, rows] |= down[:, sub_pos]
        down[:, layer_idx] |= below
        minimal[:, layer_idx] &= ~below
    return minimal


def _layers(masks, pos):
    """Precompute, per popcount layer >= 2, where each one-bit-smaller submask sits."""
    pcs = np.array([bin(int(m)).count("1") for m in masks], dtype=np.int64)
    out = []
    if masks.size == 0:
        return out
    nbits = int(masks.max()).bit_length()
    for size in range(2, int(pcs.max()) + 1):
        layer_idx = np.nonzero(pcs == size)[0]
        lm = masks[layer_idx]
        bit_lists = []
        for b in range(nbits):
            rows = np.nonzero(lm & (1 << b))[0]
            if rows.size:
                sub_pos = pos[lm[rows] ^ (1 << b)]
                bit_lists.append((sub_pos, rows))
        out.append((layer_idx, bit_lists))
    return out


def block_profile(bits, n, masks, lmax, candidate_cap):
    """Max over all inputs of the l-block sensitivity, for l = 1..lmax.

    ``masks`` are the candidate blocks (ascending, popcount <= lmax).
    Returns ``(values, argx)`` where ``values[l]`` is the maximum and
    ``argx[l]`` the smallest input achieving it (index 0 unused).
    Raises OverflowError when some input has more than ``candidate_cap``
    minimal sensitive blocks.
    """
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    size = bits.shape[0]
    values = np.zeros(lmax + 1, dtype=np.int64)
    argx = np.zeros(lmax + 1, dtype=np.int64)
    if masks.size == 0 or lmax < 1:
        return values, argx
    pcs = np.array([bin(int(m)).count("1") for m in masks], dtype=np.int64)
    pos = np.full(1 << n, -1, dtype=np.int64)
    pos[masks] = np.arange(masks.size)
    layers = _layers(masks, pos)
    chunk = max(1, _CHUNK_CELLS // masks.size)
    for start in range(0, size, chunk):
        xs = np.arange(start, min(size, start + chunk), dtype=np.int64)
        minimal = _minimal_matrix(bits, xs, masks, pos, layers)
        for row, x in enumerate(xs.tolist()):
            sel = np.nonzero(minimal[row])[0]
            if sel.size > candidate_cap:
                raise OverflowError(f"{sel.size} minimal blocks at input {x}")
            if sel.size == 0:
                continue
            row_masks = masks[sel]
            row_pcs = pcs[sel]
            for l in range(1, lmax + 1):
                cand = row_masks[row_pcs <= l]
                ub = min(cand.size, n)
                if ub <= values[l]:
                    continue
                val, _ = max_packing(cand)
                if val > values[l]:
                    values[l] = val
                    argx[l] = x
    return values, argx


def sliced_blue(points, axes, cs, zero_ptr, zero_idx):
    """Slice membership for a batch of points: 1 where some slice holds the point."""
    points = np.asarray(points, dtype=np.int64)
    out = np.zeros(points.shape[0], dtype=bool)
    for s in range(axes.shape[0]):
        hit = points[:, axes[s]] == cs[s]
        for z in zero_idx[zero_ptr[s]:zero_ptr[s + 1]]:
            hit &= points[:, z] == 0
        out |= hit
    return out.astype(np.uint8)
