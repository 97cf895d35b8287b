"""Pure-Python/numpy fallbacks for the compiled kernels in ``_kernels.pyx``."""
from collections import deque

import numpy as np

BACKEND = "python"


def field_table(amp, phase):
    """Cophased field sums for every (interferer, IRS, receiver | served pair).

    ``out[j, i, l, k, lp]`` is the complex field at destination ``l`` from
    source ``j`` through IRS ``i`` when IRS ``i`` is cophased for the pair
    ``(k, lp)``; ``idle[j, i, l]`` is the same with all reflection phases zero.
    """
    h = amp * np.exp(-1j * phase)
    w = np.exp(1j * phase)
    out = np.einsum("jiml,kimp->jilkp", h, w, optimize=True)
    idle = h.sum(axis=2)
    return out, idle


def deferred_acceptance(prio_p, rank_r):
    P, R = prio_p.shape
    match = np.full(P, -1, dtype=np.int64)
    holder = [-1] * R
    nxt = [0] * P
    free = deque(range(P))
    proposals = 0
    while free:
        p = free.popleft()
        if nxt[p] >= R:
            continue
        r = int(prio_p[p, nxt[p]])
        nxt[p] += 1
        proposals += 1
        q = holder[r]
        if q == -1:
            holder[r] = p
            match[p] = r
        elif rank_r[r, p] < rank_r[r, q]:
            holder[r] = p
            match[p] = r
            match[q] = -1
            free.append(q)
        else:
            free.append(p)
    return match, proposals
