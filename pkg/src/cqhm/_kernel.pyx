# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled eigen-trajectory kernel.

Stage-for-stage mirror of ``integrate.dopri45`` specialised to the
oscillator-family guidance field, so the whole step loop runs without
touching Python objects.
"""
from libc.math cimport fabs, fmax, fmin, pow
from libc.stdlib cimport malloc, realloc, free

import numpy as np

from .errors import IntegrationError, NodeApproach

cdef extern from "complex.h":
    double cabs(double complex) nogil

DEF OK = 0
DEF POLE = 1
DEF UNDERFLOW = 2
DEF BUDGET = 3

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40
cdef double SAFETY = 0.9, FAC_MIN = 0.2, FAC_MAX = 10.0, ALPHA = 0.17, BETA = 0.04


cdef struct Field:
    double complex a
    double complex b
    int n
    double guard


cdef inline int field(Field* fd, double complex x, double complex* out) nogil:
    cdef double complex u = fd.a * x + fd.b
    cdef double complex hn, hp, tmp
    cdef int k
    if fd.n == 0:
        hn = 1.0
        hp = 0.0
    else:
        hp = 1.0
        hn = 2.0 * u
        for k in range(1, fd.n):
            tmp = hn
            hn = 2.0 * u * hn - 2.0 * k * hp
            hp = tmp
    if cabs(hn) < fd.guard:
        return POLE
    out[0] = -1j * (2.0 * fd.n * hp / hn - u) / fd.a
    return OK


cdef int step(Field* fd, double complex x, double complex k1, double h,
              double complex* x_new, double complex* k7, double complex* err) nogil:
    cdef double complex k2, k3, k4, k5, k6
    if field(fd, x + h * A21 * k1, &k2): return POLE
    if field(fd, x + h * (A31 * k1 + A32 * k2), &k3): return POLE
    if field(fd, x + h * (A41 * k1 + A42 * k2 + A43 * k3), &k4): return POLE
    if field(fd, x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), &k5): return POLE
    if field(fd, x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), &k6): return POLE
    x_new[0] = x + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
    if field(fd, x_new[0], k7): return POLE
    err[0] = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7[0])
    return OK


cdef double initial_step(Field* fd, double complex x0, double complex f0,
                         double rtol, double atol, int* status) nogil:
    cdef double sk = atol + rtol * cabs(x0)
    cdef double d0 = cabs(x0) / sk
    cdef double d1 = cabs(f0) / sk
    cdef double h0, d2, h1
    cdef double complex f1
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    status[0] = field(fd, x0 + h0 * f0, &f1)
    if status[0]:
        return 0.0
    d2 = cabs(f1 - f0) / sk / h0
    if fmax(d1, d2) <= 1e-15:
        h1 = fmax(1e-6, h0 * 1e-3)
    else:
        h1 = pow(0.01 / fmax(d1, d2), 0.2)
    return fmin(100.0 * h0, h1)


def eigen_flow(a, b, int n, x0, double t_end, double rtol, double atol,
               double h_min=1e-14, double guard=1e-8, long max_steps=1000000):
    cdef Field fd
    fd.a = a
    fd.b = b
    fd.n = n
    fd.guard = guard
    cdef double t = 0.0, h, err, fac, scale, err_old = 1e-4
    cdef double complex x = x0, k1, x_new, k7, err_vec
    cdef int status = OK, rejected = 0, last
    cdef long steps = 0, size = 0, cap = 1024
    cdef double* ts = <double*> malloc(cap * sizeof(double))
    cdef double complex* xs = <double complex*> malloc(cap * sizeof(double complex))
    cdef double complex* vs = <double complex*> malloc(cap * sizeof(double complex))
    if not t_end > 0:
        raise ValueError("t_end must exceed t0")
    try:
        with nogil:
            status = field(&fd, x, &k1)
            if status == OK:
                ts[0] = t
                xs[0] = x
                vs[0] = k1
                size = 1
                h = initial_step(&fd, x, k1, rtol, atol, &status)
            while status == OK and t < t_end:
                if steps >= max_steps:
                    status = BUDGET
                    break
                steps += 1
                last = t + h >= t_end
                if last:
                    h = t_end - t
                status = step(&fd, x, k1, h, &x_new, &k7, &err_vec)
                if status:
                    break
                scale = atol + rtol * fmax(cabs(x), cabs(x_new))
                err = cabs(err_vec) / scale
                if err <= 1.0:
                    err = fmax(err, 1e-10)
                    fac = SAFETY * pow(err, -ALPHA) * pow(err_old, BETA)
                    fac = fmin(FAC_MAX, fmax(FAC_MIN, fac))
                    if rejected:
                        fac = fmin(fac, 1.0)
                    t = t_end if last else t + h
                    x = x_new
                    k1 = k7
                    if size == cap:
                        cap *= 2
                        ts = <double*> realloc(ts, cap * sizeof(double))
                        xs = <double complex*> realloc(xs, cap * sizeof(double complex))
                        vs = <double complex*> realloc(vs, cap * sizeof(double complex))
                    ts[size] = t
                    xs[size] = x
                    vs[size] = k1
                    size += 1
                    err_old = err
                    rejected = 0
                    h *= fac
                else:
                    fac = fmax(FAC_MIN, SAFETY * pow(err, -ALPHA))
                    h *= fac
                    rejected = 1
                if h < h_min and t < t_end:
                    status = UNDERFLOW
        if status == POLE:
            raise NodeApproach(f"trajectory reached the node neighbourhood near x={complex(x)!r}")
        if status == UNDERFLOW:
            raise NodeApproach(f"step size collapsed below {h_min:g} at t={t:.6g}, x={complex(x)!r}")
        if status == BUDGET:
            raise IntegrationError(f"step budget {max_steps} exhausted at t={t:.6g}")
        t_arr = np.empty(size, dtype=np.float64)
        x_arr = np.empty(size, dtype=np.complex128)
        v_arr = np.empty(size, dtype=np.complex128)
        for i in range(size):
            t_arr[i] = ts[i]
            x_arr[i] = xs[i]
            v_arr[i] = vs[i]
        return t_arr, x_arr, v_arr
    finally:
        free(ts)
        free(xs)
        free(vs)
