# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot loops. Must stay bit-for-bit equivalent to ``_pykernels``."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "cython"


def count_hits(list postings, Py_ssize_t n_docs):
    """Number of posting arrays each doc number occurs in (arrays are duplicate-free)."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] out = np.zeros(n_docs, dtype=np.int32)
    cdef cnp.int32_t[::1] hits = out
    cdef const cnp.int32_t[::1] arr
    cdef Py_ssize_t i, n
    for p in postings:
        arr = p
        n = arr.shape[0]
        for i in range(n):
            hits[arr[i]] += 1
    return out


def cosine_rows(
    const cnp.int32_t[::1] q_ids,
    const double[::1] q_vals,
    const cnp.int64_t[::1] indptr,
    const cnp.int32_t[::1] ids,
    const double[::1] vals,
    const double[::1] sq_norms,
    Py_ssize_t n_types,
    rows=None,
):
    """Cosine between one sparse query and CSR rows (all rows when ``rows`` is None).

    ``sq_norms`` holds squared row norms; the denominator is taken as one
    square root of the product so identical vectors score exactly 1.
    """
    cdef double[::1] dense = np.zeros(n_types, dtype=np.float64)
    cdef Py_ssize_t i, k, r, n_out
    cdef double qn = 0.0, dot, denom, c
    for i in range(q_ids.shape[0]):
        if 0 <= q_ids[i] < n_types:
            dense[q_ids[i]] = q_vals[i]
    for i in range(q_vals.shape[0]):
        qn += q_vals[i] * q_vals[i]
    cdef const cnp.int32_t[::1] sel
    cdef bint all_rows = rows is None
    if all_rows:
        n_out = indptr.shape[0] - 1
    else:
        sel = rows
        n_out = sel.shape[0]
    out_arr = np.zeros(n_out, dtype=np.float64)
    cdef double[::1] out = out_arr
    for i in range(n_out):
        r = i if all_rows else sel[i]
        dot = 0.0
        for k in range(indptr[r], indptr[r + 1]):
            dot += dense[ids[k]] * vals[k]
        denom = sqrt(qn * sq_norms[r])
        if denom > 0.0:
            c = dot / denom
            out[i] = 1.0 if c > 1.0 else c
    return out_arr
