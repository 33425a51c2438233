# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled reachability kernels over bitmask adjacency rows.

Mirrors `causalrnr._pykernels` for relations of at most 64 elements
(one machine word per row).  `causalrnr.kernels` dispatches larger
inputs to the pure-Python implementation.
"""

from libc.stdint cimport uint64_t

BACKEND = "compiled"
MAX_BITS = 64


def closure_rows(rows):
    cdef Py_ssize_t n = len(rows)
    if n > 64:
        raise ValueError("compiled kernel is limited to 64 elements")
    cdef uint64_t buf[64]
    cdef Py_ssize_t i, k
    cdef uint64_t row_k, bit, merged
    for i in range(n):
        buf[i] = rows[i]
    for k in range(n):
        row_k = buf[k]
        if row_k == 0:
            continue
        bit = (<uint64_t>1) << k
        for i in range(n):
            if buf[i] & bit:
                merged = buf[i] | row_k
                if merged != buf[i]:
                    buf[i] = merged
    return [buf[i] for i in range(n)]


def has_cycle_rows(rows):
    cdef Py_ssize_t n = len(rows)
    if n > 64:
        raise ValueError("compiled kernel is limited to 64 elements")
    closed = closure_rows(rows)
    cdef Py_ssize_t i
    for i in range(n):
        if (closed[i] >> i) & 1:
            return True
    return False


def reduction_rows(closed):
    cdef Py_ssize_t n = len(closed)
    if n > 64:
        raise ValueError("compiled kernel is limited to 64 elements")
    cdef uint64_t buf[64]
    cdef uint64_t out[64]
    cdef Py_ssize_t i, k
    cdef uint64_t succ, cover, rest
    for i in range(n):
        buf[i] = closed[i]
    for i in range(n):
        succ = buf[i]
        cover = 0
        rest = succ
        while rest:
            k = 0
            while not (rest >> k) & 1:
                k += 1
            cover |= buf[k]
            rest &= rest - 1
        out[i] = succ & ~cover
    return [out[i] for i in range(n)]
