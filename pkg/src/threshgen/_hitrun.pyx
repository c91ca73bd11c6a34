# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hit-and-run step kernel.

Same contract as threshgen._hitrun_py.step_block; see that module for the
exact semantics. The walk spends essentially all of its time in this loop,
so it is written as straight C arithmetic over typed memoryviews.
"""

from libc.math cimport INFINITY, isfinite, sqrt


def step_block(double[:, ::1] rows, double[::1] rhs, double[::1] y,
               double[:, ::1] normals, double[::1] uniforms,
               double[:, ::1] out):
    cdef Py_ssize_t n_rows = rows.shape[0]
    cdef Py_ssize_t q = rows.shape[1]
    cdef Py_ssize_t block = uniforms.shape[0]
    cdef Py_ssize_t step, i, j
    cdef double norm2, inv_norm, along, slack, bound, lo, hi, t
    for step in range(block):
        norm2 = 0.0
        for j in range(q):
            norm2 += normals[step, j] * normals[step, j]
        if norm2 > 0.0:
            inv_norm = 1.0 / sqrt(norm2)
            lo = -INFINITY
            hi = INFINITY
            for i in range(n_rows):
                along = 0.0
                slack = rhs[i]
                for j in range(q):
                    along += rows[i, j] * normals[step, j]
                    slack -= rows[i, j] * y[j]
                along *= inv_norm
                if along > 0.0:
                    bound = slack / along
                    if bound < hi:
                        hi = bound
                elif along < 0.0:
                    bound = slack / along
                    if bound > lo:
                        lo = bound
            if isfinite(lo) and isfinite(hi) and hi >= lo:
                t = (lo + uniforms[step] * (hi - lo)) * inv_norm
                for j in range(q):
                    y[j] += t * normals[step, j]
        for j in range(q):
            out[step, j] = y[j]
