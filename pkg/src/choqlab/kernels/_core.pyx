# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled backend for the angular kernel sums.

Same contract as ``_numpy_impl.angular_sums``; the loop runs without the
GIL so callers can shard work across Python threads.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport pow

BACKEND = "compiled"


def angular_sums(cnp.ndarray[cnp.float64_t, ndim=1] t,
                 cnp.ndarray[cnp.float64_t, ndim=1] shsq,
                 cnp.ndarray[cnp.float64_t, ndim=1] pre,
                 double mu,
                 cnp.ndarray[cnp.float64_t, ndim=1] out):
    cdef double[::1] tv = np.ascontiguousarray(t)
    cdef double[::1] sv = np.ascontiguousarray(shsq)
    cdef double[::1] pv = np.ascontiguousarray(pre)
    cdef double[::1] ov = out
    cdef Py_ssize_t n = tv.shape[0]
    cdef Py_ssize_t m = sv.shape[0]
    cdef Py_ssize_t i, k
    cdef double e = -0.5 * mu
    cdef double ti, omt2, fourt, acc
    with nogil:
        for i in range(n):
            ti = tv[i]
            omt2 = (1.0 - ti) * (1.0 - ti)
            fourt = 4.0 * ti
            acc = 0.0
            for k in range(m):
                acc += pv[k] * pow(omt2 + fourt * sv[k], e)
            ov[i] = acc
