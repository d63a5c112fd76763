# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernels: Neumaier-compensated, fixed left-to-right order."""

from libc.math cimport fabs, isinf

BACKEND = "fast"


cdef inline double _neumaier_add(double s, double x, double *carry) nogil:
    cdef double t = s + x
    if fabs(s) >= fabs(x):
        carry[0] += (s - t) + x
    else:
        carry[0] += (x - t) + s
    return t


def comp_sum(double[::1] xs):
    cdef double s = 0.0, c = 0.0
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        s = _neumaier_add(s, xs[i], &c)
    return s + c + 0.0


def pos_neg_dot(double[::1] values, double[::1] masses):
    cdef double ps = 0.0, pc = 0.0, ns = 0.0, nc = 0.0
    cdef double v, m
    cdef bint pos_inf = False, neg_inf = False
    cdef Py_ssize_t i
    for i in range(values.shape[0]):
        m = masses[i]
        v = values[i]
        if m == 0.0 or v == 0.0:
            continue
        if v > 0.0:
            if isinf(v):
                pos_inf = True
            else:
                ps = _neumaier_add(ps, v * m, &pc)
        else:
            if isinf(v):
                neg_inf = True
            else:
                ns = _neumaier_add(ns, -v * m, &nc)
    return ps + pc + 0.0, ns + nc + 0.0, pos_inf, neg_inf


def tail_dot(double[::1] values, double[::1] masses, double k):
    cdef double s = 0.0, c = 0.0, a, m
    cdef bint has_inf = False
    cdef Py_ssize_t i
    for i in range(values.shape[0]):
        m = masses[i]
        if m == 0.0:
            continue
        a = fabs(values[i])
        if a >= k:
            if isinf(a):
                has_inf = True
            else:
                s = _neumaier_add(s, a * m, &c)
    return s + c + 0.0, has_inf
