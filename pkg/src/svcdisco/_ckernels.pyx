# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernel; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint32_t, uint64_t, int32_t, int64_t, uint8_t

cnp.import_array()


cdef inline uint32_t _spin(uint64_t n) noexcept nogil:
    cdef uint32_t s = 2463534242u
    cdef uint64_t k
    for k in range(n):
        s = s * 1103515245u + 12345u
    return s


def spin(uint64_t n):
    return _spin(n)


def scan(const uint8_t[::1] beh, const uint8_t[::1] mode,
         const int64_t[::1] indptr, const int32_t[::1] tokens,
         unsigned int bmask, unsigned int cmask,
         const int32_t[::1] kw, uint64_t nf_spin, uint64_t disc_spin):
    cdef Py_ssize_t n = beh.shape[0]
    cdef Py_ssize_t nkw = kw.shape[0]
    cdef cnp.ndarray[int64_t, ndim=1] hits = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] overlaps = np.empty(n, dtype=np.int32)
    cdef int64_t[::1] hv = hits
    cdef int32_t[::1] ov = overlaps
    cdef Py_ssize_t i, a, end, b, nhits = 0
    cdef int64_t x = 0
    cdef int32_t common, ta, tb
    cdef uint32_t sink = 0
    with nogil:
        for i in range(n):
            if nf_spin:
                sink ^= _spin(nf_spin)
            if not (((bmask >> beh[i]) & 1) and ((cmask >> mode[i]) & 1)):
                continue
            x += 1
            if disc_spin:
                sink ^= _spin(disc_spin)
            a = indptr[i]
            end = indptr[i + 1]
            b = 0
            common = 0
            while a < end and b < nkw:
                ta = tokens[a]
                tb = kw[b]
                if ta == tb:
                    common += 1
                    a += 1
                    b += 1
                elif ta < tb:
                    a += 1
                else:
                    b += 1
            if common:
                hv[nhits] = i
                ov[nhits] = common
                nhits += 1
    return hits[:nhits].copy(), overlaps[:nhits].copy(), x, sink
