"""Union-find worklist for congruence generation (JIT compiled)."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def _close(n, pa, pb, trans):
    parent = np.arange(n, dtype=np.int64)
    k = trans.shape[0]
    cap = max(16, pa.shape[0] * 2)
    sa = np.empty(cap, dtype=np.int64)
    sb = np.empty(cap, dtype=np.int64)
    top = 0
    for i in range(pa.shape[0]):
        sa[top] = pa[i]
        sb[top] = pb[i]
        top += 1
    merges = 0
    while top > 0:
        top -= 1
        x = sa[top]
        y = sb[top]
        rx = _find(parent, x)
        ry = _find(parent, y)
        if rx == ry:
            continue
        # the least element stays the root, so roots are class minima
        if rx < ry:
            parent[ry] = rx
        else:
            parent[rx] = ry
        merges += 1
        if top + k > cap:
            cap = 2 * (top + k)
            na = np.empty(cap, dtype=np.int64)
            nb = np.empty(cap, dtype=np.int64)
            na[:top] = sa[:top]
            nb[:top] = sb[:top]
            sa = na
            sb = nb
        for t in range(k):
            sa[top] = trans[t, x]
            sb[top] = trans[t, y]
            top += 1
    roots = np.empty(n, dtype=np.int64)
    for i in range(n):
        roots[i] = _find(parent, i)
    return roots, merges


def close_pairs(n: int, pa, pb, trans) -> np.ndarray:
    """Class minima of the least equivalence on range(n) that contains the
    pairs (pa[i], pb[i]) and is preserved by every row of ``trans``."""
    pa = np.ascontiguousarray(pa, dtype=np.int64).ravel()
    pb = np.ascontiguousarray(pb, dtype=np.int64).ravel()
    dtype = np.int32 if n < 2**31 else np.int64
    trans = np.ascontiguousarray(trans, dtype=dtype).reshape(-1, n)
    roots, _ = _close(n, pa, pb, trans)
    return roots
