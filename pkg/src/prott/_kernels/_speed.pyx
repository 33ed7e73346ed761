# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the pure-Python closure kernels.

Same contracts as prott._kernels.pure, but the multiplication table is a
C-contiguous int32 array and inner loops run without the interpreter.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def close_mask(cnp.int32_t[:, ::1] mul, object seed_mask):
    cdef int n = mul.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] member_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] member = member_arr
    cdef cnp.ndarray[cnp.int32_t, ndim=1] elems_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] elems = elems_arr
    cdef cnp.ndarray[cnp.int32_t, ndim=1] queue_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] queue = queue_arr
    cdef int n_elems = 0, n_queue = 0
    cdef int i, a, b, c, d, k
    cdef object mask = seed_mask | 1

    for i in range(n):
        if (mask >> i) & 1:
            member[i] = 1
            elems[n_elems] = i
            n_elems += 1
            queue[n_queue] = i
            n_queue += 1

    while n_queue > 0:
        n_queue -= 1
        a = queue[n_queue]
        k = n_elems
        for i in range(k):
            b = elems[i]
            c = mul[a, b]
            if not member[c]:
                member[c] = 1
                elems[n_elems] = c
                n_elems += 1
                queue[n_queue] = c
                n_queue += 1
            d = mul[b, a]
            if not member[d]:
                member[d] = 1
                elems[n_elems] = d
                n_elems += 1
                queue[n_queue] = d
                n_queue += 1

    mask = 0
    for i in range(n):
        if member[i]:
            mask |= 1 << i
    return mask


def conjugate_mask(cnp.int32_t[:, ::1] mul, cnp.int32_t[::1] inv, object mask, int g):
    cdef int n = mul.shape[0]
    cdef int gi = inv[g]
    cdef int x
    cdef object out = 0
    for x in range(n):
        if (mask >> x) & 1:
            out |= 1 << mul[mul[g, x], gi]
    return out
