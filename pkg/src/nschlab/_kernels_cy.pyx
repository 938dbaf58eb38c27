# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled lattice kernels: support-restricted periodic convolution, the
velocity-increment commutator tensor, and max shifted-difference scans.

Offsets must be reduced to [0, n) per axis; an offset o addresses f(x - o).
"""

import numpy as np

from libc.math cimport sqrt


def convolve_offsets_2d(const double[:, :, ::1] fields,
                        const long[:, ::1] offsets,
                        const double[::1] weights):
    cdef Py_ssize_t m = fields.shape[0], n0 = fields.shape[1], n1 = fields.shape[2]
    cdef Py_ssize_t nj = offsets.shape[0]
    out_arr = np.zeros((m, n0, n1))
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t j, c, i0, i1, s0, s1, o0, o1
    cdef double w
    for j in range(nj):
        o0 = offsets[j, 0]; o1 = offsets[j, 1]; w = weights[j]
        for c in range(m):
            for i0 in range(n0):
                s0 = i0 - o0
                if s0 < 0:
                    s0 += n0
                for i1 in range(n1):
                    s1 = i1 - o1
                    if s1 < 0:
                        s1 += n1
                    out[c, i0, i1] += w * fields[c, s0, s1]
    return out_arr


def convolve_offsets_3d(const double[:, :, :, ::1] fields,
                        const long[:, ::1] offsets,
                        const double[::1] weights):
    cdef Py_ssize_t m = fields.shape[0], n0 = fields.shape[1], n1 = fields.shape[2], n2 = fields.shape[3]
    cdef Py_ssize_t nj = offsets.shape[0]
    out_arr = np.zeros((m, n0, n1, n2))
    cdef double[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t j, c, i0, i1, i2, s0, s1, s2, o0, o1, o2
    cdef double w
    for j in range(nj):
        o0 = offsets[j, 0]; o1 = offsets[j, 1]; o2 = offsets[j, 2]; w = weights[j]
        for c in range(m):
            for i0 in range(n0):
                s0 = i0 - o0
                if s0 < 0:
                    s0 += n0
                for i1 in range(n1):
                    s1 = i1 - o1
                    if s1 < 0:
                        s1 += n1
                    for i2 in range(n2):
                        s2 = i2 - o2
                        if s2 < 0:
                            s2 += n2
                        out[c, i0, i1, i2] += w * fields[c, s0, s1, s2]
    return out_arr


def commutator_2d(const double[:, :, ::1] u,
                  const long[:, ::1] offsets,
                  const double[::1] weights):
    cdef Py_ssize_t n0 = u.shape[1], n1 = u.shape[2]
    cdef Py_ssize_t nj = offsets.shape[0]
    out_arr = np.zeros((3, n0, n1))
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t j, i0, i1, s0, s1, o0, o1
    cdef double w, d0, d1
    for j in range(nj):
        o0 = offsets[j, 0]; o1 = offsets[j, 1]; w = weights[j]
        for i0 in range(n0):
            s0 = i0 - o0
            if s0 < 0:
                s0 += n0
            for i1 in range(n1):
                s1 = i1 - o1
                if s1 < 0:
                    s1 += n1
                d0 = u[0, s0, s1] - u[0, i0, i1]
                d1 = u[1, s0, s1] - u[1, i0, i1]
                out[0, i0, i1] += w * d0 * d0
                out[1, i0, i1] += w * d0 * d1
                out[2, i0, i1] += w * d1 * d1
    return out_arr


def commutator_3d(const double[:, :, :, ::1] u,
                  const long[:, ::1] offsets,
                  const double[::1] weights):
    cdef Py_ssize_t n0 = u.shape[1], n1 = u.shape[2], n2 = u.shape[3]
    cdef Py_ssize_t nj = offsets.shape[0]
    out_arr = np.zeros((6, n0, n1, n2))
    cdef double[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t j, i0, i1, i2, s0, s1, s2, o0, o1, o2
    cdef double w, d0, d1, d2
    for j in range(nj):
        o0 = offsets[j, 0]; o1 = offsets[j, 1]; o2 = offsets[j, 2]; w = weights[j]
        for i0 in range(n0):
            s0 = i0 - o0
            if s0 < 0:
                s0 += n0
            for i1 in range(n1):
                s1 = i1 - o1
                if s1 < 0:
                    s1 += n1
                for i2 in range(n2):
                    s2 = i2 - o2
                    if s2 < 0:
                        s2 += n2
                    d0 = u[0, s0, s1, s2] - u[0, i0, i1, i2]
                    d1 = u[1, s0, s1, s2] - u[1, i0, i1, i2]
                    d2 = u[2, s0, s1, s2] - u[2, i0, i1, i2]
                    out[0, i0, i1, i2] += w * d0 * d0
                    out[1, i0, i1, i2] += w * d0 * d1
                    out[2, i0, i1, i2] += w * d0 * d2
                    out[3, i0, i1, i2] += w * d1 * d1
                    out[4, i0, i1, i2] += w * d1 * d2
                    out[5, i0, i1, i2] += w * d2 * d2
    return out_arr


def shift_maxdiff_2d(const double[:, :, ::1] fields,
                     const long[:, ::1] offsets):
    cdef Py_ssize_t m = fields.shape[0], n0 = fields.shape[1], n1 = fields.shape[2]
    cdef Py_ssize_t nj = offsets.shape[0]
    out_arr = np.empty(nj)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j, c, i0, i1, s0, s1, o0, o1
    cdef double best, acc, d
    for j in range(nj):
        o0 = offsets[j, 0]; o1 = offsets[j, 1]
        best = 0.0
        for i0 in range(n0):
            s0 = i0 - o0
            if s0 < 0:
                s0 += n0
            for i1 in range(n1):
                s1 = i1 - o1
                if s1 < 0:
                    s1 += n1
                acc = 0.0
                for c in range(m):
                    d = fields[c, s0, s1] - fields[c, i0, i1]
                    acc += d * d
                if acc > best:
                    best = acc
        out[j] = sqrt(best)
    return out_arr


def shift_maxdiff_3d(const double[:, :, :, ::1] fields,
                     const long[:, ::1] offsets):
    cdef Py_ssize_t m = fields.shape[0], n0 = fields.shape[1], n1 = fields.shape[2], n2 = fields.shape[3]
    cdef Py_ssize_t nj = offsets.shape[0]
    out_arr = np.empty(nj)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j, c, i0, i1, i2, s0, s1, s2, o0, o1, o2
    cdef double best, acc, d
    for j in range(nj):
        o0 = offsets[j, 0]; o1 = offsets[j, 1]; o2 = offsets[j, 2]
        best = 0.0
        for i0 in range(n0):
            s0 = i0 - o0
            if s0 < 0:
                s0 += n0
            for i1 in range(n1):
                s1 = i1 - o1
                if s1 < 0:
                    s1 += n1
                for i2 in range(n2):
                    s2 = i2 - o2
                    if s2 < 0:
                        s2 += n2
                    acc = 0.0
                    for c in range(m):
                        d = fields[c, s0, s1, s2] - fields[c, i0, i1, i2]
                        acc += d * d
                    if acc > best:
                        best = acc
        out[j] = sqrt(best)
    return out_arr
