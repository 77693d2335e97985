# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels with the same surface as ``_pykernels``."""
from libc.math cimport cos, sin, M_PI

import numpy as np

BACKEND = "cython"


cdef struct Scn:
    int mode
    double complex t00, t01, t10, t11
    double complex p0, p1
    double complex a00, a01, a10, a11


cdef inline double complex _cj(double complex z) noexcept nogil:
    return z.conjugate()


cdef inline void _chi(double t, double p, bint use_perp,
                      double complex* ca, double complex* cb) noexcept nogil:
    cdef double s = sin(t), c = cos(t)
    if use_perp:
        ca[0] = -cos(p) * s + 1j * (sin(p) * s)
        cb[0] = c
    else:
        ca[0] = c
        cb[0] = cos(p) * s + 1j * (sin(p) * s)


cdef inline double _prob(Scn* k, double complex c1a, double complex c1b,
                         double complex c2a, double complex c2b) noexcept nogil:
    cdef double complex z, bridge, d2a, d2b
    if k.mode == 0:
        bridge = _cj(c2a) * (k.t00 * c1a + k.t01 * c1b) + _cj(c2b) * (k.t10 * c1a + k.t11 * c1b)
        z = bridge * (_cj(c1a) * k.p0 + _cj(c1b) * k.p1)
    else:
        d2a = _cj(c2a)
        d2b = _cj(c2b)
        z = _cj(c1a) * (d2a * k.a00 + d2b * k.a01) + _cj(c1b) * (d2a * k.a10 + d2b * k.a11)
    return z.real * z.real + z.imag * z.imag


cdef double _correlator(Scn* k, double ta, double pa, double tb, double pb) noexcept nogil:
    cdef double complex a0a, a0b, a1a, a1b, b0a, b0b, b1a, b1b
    _chi(ta, pa, False, &a0a, &a0b)
    _chi(ta, pa, True, &a1a, &a1b)
    _chi(tb, pb, False, &b0a, &b0b)
    _chi(tb, pb, True, &b1a, &b1b)
    return (_prob(k, a0a, a0b, b0a, b0b) - _prob(k, a1a, a1b, b0a, b0b)
            - _prob(k, a0a, a0b, b1a, b1b) + _prob(k, a1a, a1b, b1a, b1b))


cdef class Kernel:
    """Squared projection amplitudes and CHSH combinations for one scenario."""

    cdef Scn k
    cdef readonly int mode
    cdef readonly object T, psi, A

    def __init__(self, int mode, T, psi, A):
        self.mode = mode
        self.T = np.ascontiguousarray(T, dtype=np.complex128)
        self.psi = np.ascontiguousarray(psi, dtype=np.complex128)
        self.A = np.ascontiguousarray(A, dtype=np.complex128)
        self.k.mode = mode
        self.k.t00, self.k.t01 = self.T[0, 0], self.T[0, 1]
        self.k.t10, self.k.t11 = self.T[1, 0], self.T[1, 1]
        self.k.p0, self.k.p1 = self.psi[0], self.psi[1]
        self.k.a00, self.k.a01 = self.A[0, 0], self.A[0, 1]
        self.k.a10, self.k.a11 = self.A[1, 0], self.A[1, 1]

    def prob(self, double t1, double p1, double t2, double p2, bint perp1=False, bint perp2=False):
        cdef double complex c1a, c1b, c2a, c2b
        _chi(t1, p1, perp1, &c1a, &c1b)
        _chi(t2, p2, perp2, &c2a, &c2b)
        return _prob(&self.k, c1a, c1b, c2a, c2b)

    def correlator(self, double ta, double pa, double tb, double pb):
        return _correlator(&self.k, ta, pa, tb, pb)

    def s_tilde(self, quad):
        cdef double t1, p1, t2, p2, t3, p3, t4, p4
        t1, p1, t2, p2, t3, p3, t4, p4 = quad
        return (_correlator(&self.k, t1, p1, t2, p2) - _correlator(&self.k, t1, p1, t4, p4)
                + _correlator(&self.k, t3, p3, t2, p2) + _correlator(&self.k, t3, p3, t4, p4))

    def grid_probs(self, int n, int lo=0, hi=None):
        """Probabilities on the uniform ``n^4`` grid for t1-theta indices ``lo:hi``, C order."""
        cdef int h = n if hi is None else hi
        cdef int i1, j1, i2, j2, m = n * n
        cdef Py_ssize_t pos = 0
        nodes = 2.0 * M_PI * np.arange(n) / n
        ca_arr = np.empty(m, dtype=np.complex128)
        cb_arr = np.empty(m, dtype=np.complex128)
        cdef double complex[::1] ca = ca_arr
        cdef double complex[::1] cb = cb_arr
        cdef double[::1] nd = nodes
        for i1 in range(n):
            for j1 in range(n):
                _chi(nd[i1], nd[j1], False, &ca[i1 * n + j1], &cb[i1 * n + j1])
        out_arr = np.empty(max(h - lo, 0) * n * m, dtype=np.float64)
        cdef double[::1] out = out_arr
        cdef int q1, q2
        cdef double complex u, v, w, z
        cdef Scn* k = &self.k
        with nogil:
            for i1 in range(lo, h):
                for j1 in range(n):
                    q1 = i1 * n + j1
                    # t1 factors hoisted: Proj = w * (conj(c2a) u + conj(c2b) v)
                    if k.mode == 0:
                        u = k.t00 * ca[q1] + k.t01 * cb[q1]
                        v = k.t10 * ca[q1] + k.t11 * cb[q1]
                        w = _cj(ca[q1]) * k.p0 + _cj(cb[q1]) * k.p1
                    else:
                        u = _cj(ca[q1]) * k.a00 + _cj(cb[q1]) * k.a10
                        v = _cj(ca[q1]) * k.a01 + _cj(cb[q1]) * k.a11
                        w = 1.0
                    u = u * w
                    v = v * w
                    for q2 in range(m):
                        z = _cj(ca[q2]) * u + _cj(cb[q2]) * v
                        out[pos] = z.real * z.real + z.imag * z.imag
                        pos += 1
        return out_arr

    def point_probs(self, angles):
        a_arr = np.ascontiguousarray(angles, dtype=np.float64)
        cdef double[:, ::1] a = a_arr
        cdef Py_ssize_t i, m = a.shape[0]
        out_arr = np.empty(m, dtype=np.float64)
        cdef double[::1] out = out_arr
        cdef double complex c1a, c1b, c2a, c2b
        with nogil:
            for i in range(m):
                _chi(a[i, 0], a[i, 1], False, &c1a, &c1b)
                _chi(a[i, 2], a[i, 3], False, &c2a, &c2b)
                out[i] = _prob(&self.k, c1a, c1b, c2a, c2b)
        return out_arr
