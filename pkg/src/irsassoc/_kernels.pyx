# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: cophased field table and deferred acceptance."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

BACKEND = "cython"


def field_table(const double[:, :, :, ::1] amp, const double[:, :, :, ::1] phase):
    cdef Py_ssize_t K = amp.shape[0], N = amp.shape[1], M = amp.shape[2], L = amp.shape[3]
    cdef Py_ssize_t j, i, m, l, k, lp
    cdef double a, cj, sj, re, im
    cdef double[:, :, :, ::1] c = np.cos(phase)
    cdef double[:, :, :, ::1] s = np.sin(phase)
    out = np.zeros((K, N, L, K, L), dtype=np.complex128)
    idle = np.zeros((K, N, L), dtype=np.complex128)
    cdef double complex[:, :, :, :, ::1] g = out
    cdef double complex[:, :, ::1] g0 = idle
    cdef double[:, ::1] acc_re = np.zeros((K, L))
    cdef double[:, ::1] acc_im = np.zeros((K, L))
    cdef double re0, im0
    with nogil:
        for i in range(N):
            for j in range(K):
                for l in range(L):
                    for k in range(K):
                        for lp in range(L):
                            acc_re[k, lp] = 0.0
                            acc_im[k, lp] = 0.0
                    re0 = 0.0
                    im0 = 0.0
                    for m in range(M):
                        a = amp[j, i, m, l]
                        if a == 0.0:
                            continue
                        cj = c[j, i, m, l]
                        sj = s[j, i, m, l]
                        re0 = re0 + a * cj
                        im0 = im0 - a * sj
                        for k in range(K):
                            for lp in range(L):
                                acc_re[k, lp] += a * (cj * c[k, i, m, lp] + sj * s[k, i, m, lp])
                                acc_im[k, lp] += a * (cj * s[k, i, m, lp] - sj * c[k, i, m, lp])
                    g0[j, i, l] = re0 + 1j * im0
                    for k in range(K):
                        for lp in range(L):
                            g[j, i, l, k, lp] = acc_re[k, lp] + 1j * acc_im[k, lp]
    return out, idle


def deferred_acceptance(const long long[:, ::1] prio_p, const long long[:, ::1] rank_r):
    cdef Py_ssize_t P = prio_p.shape[0], R = prio_p.shape[1]
    match = np.full(P, -1, dtype=np.int64)
    cdef long long[::1] mp = match
    cdef long long[::1] holder = np.full(R, -1, dtype=np.int64)
    cdef long long[::1] nxt = np.zeros(P, dtype=np.int64)
    # ring buffer of free proposers; at most P are ever queued at once
    cdef long long[::1] queue = np.arange(P, dtype=np.int64)
    cdef Py_ssize_t head = 0, count = P
    cdef long long p, r, q, proposals = 0
    if P == 0:
        return match, 0
    with nogil:
        while count > 0:
            p = queue[head]
            head = (head + 1) % P
            count -= 1
            if nxt[p] >= R:
                continue
            r = prio_p[p, nxt[p]]
            nxt[p] += 1
            proposals += 1
            q = holder[r]
            if q == -1:
                holder[r] = p
                mp[p] = r
            elif rank_r[r, p] < rank_r[r, q]:
                holder[r] = p
                mp[p] = r
                mp[q] = -1
                queue[(head + count) % P] = q
                count += 1
            else:
                queue[(head + count) % P] = p
                count += 1
    return match, proposals
