# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels; see ``_fallback`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos

cnp.import_array()

cdef enum:
    DIAG = 0


def apply_program(const long[:, ::1] program, const double[:, ::1] angles, int n):
    cdef Py_ssize_t batch = angles.shape[0]
    cdef Py_ssize_t nops = program.shape[0]
    out = np.zeros((batch, n, n), dtype=np.complex128)
    cdef double complex[:, :, ::1] g = out
    cdef Py_ssize_t t, o, r, j, a, b, slot
    cdef double x, c, s
    cdef double complex ph, phk, gp, gq
    with nogil:
        for t in range(batch):
            for r in range(n):
                g[t, r, r] = 1.0
            for o in range(nops):
                a = program[o, 1]
                b = program[o, 2]
                slot = program[o, 3]
                x = angles[t, slot]
                if program[o, 0] == DIAG:
                    ph = cos(x) + 1j * sin(x)
                    phk = cos(a * x) - 1j * sin(a * x)
                    for r in range(n):
                        for j in range(a):
                            g[t, r, j] = g[t, r, j] * ph
                        g[t, r, a] = g[t, r, a] * phk
                else:
                    c = cos(x)
                    s = sin(x)
                    for r in range(n):
                        gp = g[t, r, a]
                        gq = g[t, r, b]
                        g[t, r, a] = c * gp - s * gq
                        g[t, r, b] = s * gp + c * gq
    return out


cdef inline double ipow(double x, int k) noexcept nogil:
    cdef double r = 1.0
    while k > 0:
        if k & 1:
            r *= x
        x *= x
        k >>= 1
    return r


# powers are small non-negative integers stored as doubles
def density_terms(const double[:, ::1] angles, const long[::1] sin_slots, const double[::1] sin_pows,
                  const long[::1] cos_slots, const double[::1] cos_pows, double scale):
    cdef Py_ssize_t batch = angles.shape[0]
    cdef Py_ssize_t ns = sin_slots.shape[0]
    cdef Py_ssize_t nc = cos_slots.shape[0]
    out = np.empty(batch, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t t, k
    cdef double v
    with nogil:
        for t in range(batch):
            v = scale
            for k in range(ns):
                v *= ipow(sin(angles[t, sin_slots[k]]), <int>sin_pows[k])
            for k in range(nc):
                v *= ipow(cos(angles[t, cos_slots[k]]), <int>cos_pows[k])
            res[t] = v
    return out
