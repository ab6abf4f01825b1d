# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Draws come straight from the ``bitgen_t`` behind a ``numpy.random.Generator``
via ``next_double``, which is the same routine ``Generator.random`` uses, so
these kernels consume exactly the stream the numpy kernels consume.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.string cimport memcpy
from numpy.random cimport bitgen_t

cdef enum:
    KIND_ONEMAX = 0
    KIND_BINVAL = 1
    KIND_LEADINGONES = 2
    KIND_LINEAR = 3


cdef bitgen_t* _bitgen(object rng) except NULL:
    return <bitgen_t*> PyCapsule_GetPointer(rng.bit_generator.capsule, "BitGenerator")


cdef inline Py_ssize_t _sample(const double* tau, unsigned char* out,
                               Py_ssize_t n, bitgen_t* bg) noexcept nogil:
    cdef Py_ssize_t i, ones = 0
    for i in range(n):
        if bg.next_double(bg.state) < tau[i]:
            out[i] = 1
            ones += 1
        else:
            out[i] = 0
    return ones


cdef inline void _update(double* tau, const unsigned char* best, Py_ssize_t n,
                         double rho, double lo, double hi) noexcept nogil:
    cdef Py_ssize_t i
    cdef double keep = 1.0 - rho
    cdef double t
    for i in range(n):
        if best[i]:
            t = keep * tau[i] + rho
            if t > hi:
                t = hi
        else:
            t = keep * tau[i]
            if t < lo:
                t = lo
        tau[i] = t


cdef inline Py_ssize_t _leading_ones(const unsigned char* x, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(n):
        if not x[i]:
            return i
    return n


cdef inline double _weighted(const unsigned char* x, const double* w, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(n):
        if x[i]:
            s += w[i]
    return s


cdef inline int _lex(const unsigned char* x, const unsigned char* y, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(n):
        if x[i] != y[i]:
            return 1 if x[i] > y[i] else -1
    return 0


def sample_into(double[::1] tau, object rng, unsigned char[::1] out):
    """Fill ``out`` with one ant's path; returns the number of ones."""
    cdef bitgen_t* bg = _bitgen(rng)
    cdef Py_ssize_t n = tau.shape[0]
    cdef Py_ssize_t ones
    with nogil:
        ones = _sample(&tau[0], &out[0], n, bg)
    return ones


def update_inplace(double[::1] tau, const unsigned char[::1] best,
                   double rho, double lo, double hi):
    with nogil:
        _update(&tau[0], &best[0], tau.shape[0], rho, lo, hi)


def run_loop(double[::1] tau, unsigned char[::1] best, unsigned char[::1] x,
             double rho, double lo, double hi, int kind, const double[::1] weights,
             bint accept_equal, long long max_iterations, object rng):
    """Run the whole best-so-far loop from the current ``tau``.

    Returns ``(iterations, found)``. On exit ``best`` holds x* and ``tau`` the
    pheromones after the last update.
    """
    cdef bitgen_t* bg = _bitgen(rng)
    cdef Py_ssize_t n = tau.shape[0]
    cdef long long it = 0
    cdef Py_ssize_t ones_x, ones_best = 0, lo_x, lo_best = 0
    cdef double f_x, f_best = 0.0
    cdef int cmp
    cdef bint found = False
    cdef const double* w = NULL
    if kind == KIND_LINEAR:
        w = &weights[0]
    with nogil:
        while it < max_iterations:
            it += 1
            ones_x = _sample(&tau[0], &x[0], n, bg)
            if it == 1:
                cmp = 1
            elif kind == KIND_ONEMAX:
                cmp = (ones_x > ones_best) - (ones_x < ones_best)
            elif kind == KIND_BINVAL:
                cmp = _lex(&x[0], &best[0], n)
            elif kind == KIND_LEADINGONES:
                lo_x = _leading_ones(&x[0], n)
                cmp = (lo_x > lo_best) - (lo_x < lo_best)
            else:
                f_x = _weighted(&x[0], w, n)
                cmp = (f_x > f_best) - (f_x < f_best)
            if cmp > 0 or (cmp == 0 and accept_equal):
                memcpy(&best[0], &x[0], n)
                ones_best = ones_x
                if kind == KIND_LEADINGONES:
                    lo_best = _leading_ones(&x[0], n)
                elif kind == KIND_LINEAR:
                    f_best = _weighted(&x[0], w, n)
            _update(&tau[0], &best[0], n, rho, lo, hi)
            if ones_best == n:
                found = True
                break
    return it, found
