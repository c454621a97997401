# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled execution core: runs a whole column-op program in one C loop."""

import numpy as np
cimport numpy as cnp

ctypedef unsigned long long u64


def run_ops(cnp.uint64_t[:, ::1] words, cnp.int32_t[::1] gates,
            cnp.int32_t[:, ::1] ins, cnp.int32_t[::1] outs):
    cdef Py_ssize_t n_ops = gates.shape[0]
    cdef Py_ssize_t nwords = words.shape[1]
    cdef Py_ssize_t k, w
    cdef int g
    cdef u64 *o
    cdef u64 *a
    cdef u64 *b
    cdef u64 *c
    with nogil:
        for k in range(n_ops):
            g = gates[k]
            o = &words[outs[k], 0]
            if g == 0:
                for w in range(nwords):
                    o[w] = 0
            elif g == 1:
                for w in range(nwords):
                    o[w] = 0xFFFFFFFFFFFFFFFFULL
            elif g == 2:
                a = &words[ins[k, 0], 0]
                for w in range(nwords):
                    o[w] = ~a[w]
            elif g == 3:
                a = &words[ins[k, 0], 0]
                b = &words[ins[k, 1], 0]
                for w in range(nwords):
                    o[w] = ~(a[w] | b[w])
            elif g == 4:
                a = &words[ins[k, 0], 0]
                b = &words[ins[k, 1], 0]
                c = &words[ins[k, 2], 0]
                for w in range(nwords):
                    o[w] = ~(a[w] | b[w] | c[w])
            elif g == 5:
                a = &words[ins[k, 0], 0]
                b = &words[ins[k, 1], 0]
                for w in range(nwords):
                    o[w] = a[w] & b[w]
            elif g == 6:
                a = &words[ins[k, 0], 0]
                b = &words[ins[k, 1], 0]
                for w in range(nwords):
                    o[w] = a[w] | b[w]
