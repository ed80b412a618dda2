# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled numerical hot kernels: Airy evaluation and state superposition.

Same algorithms as the pure-NumPy twin in `_kernels_np`; scalar C loops avoid
the multi-pass masking the vectorized fallback needs.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, cos, exp, fabs, pow, sin, sqrt

cnp.import_array()

cdef double C1 = 0.3550280538878172      # Ai(0)
cdef double C2 = 0.2588194037928068      # -Ai'(0)
cdef double SQRT3 = 1.7320508075688772

cdef double CHEB_A = 4.0
cdef double CHEB_B = 9.5
cdef int N_CHEB = 21
cdef double[21] CHEB_AI
CHEB_AI[0] = 0.3525145268861484
CHEB_AI[1] = -0.018130514115984753
CHEB_AI[2] = 0.00229469833134224
CHEB_AI[3] = -0.0003451214639709723
CHEB_AI[4] = 5.583582737098027e-05
CHEB_AI[5] = -9.400235511498292e-06
CHEB_AI[6] = 1.6225421162569348e-06
CHEB_AI[7] = -2.849061176511779e-07
CHEB_AI[8] = 5.0663964971732084e-08
CHEB_AI[9] = -9.098649810700495e-09
CHEB_AI[10] = 1.647203232564414e-09
CHEB_AI[11] = -3.002457653041178e-10
CHEB_AI[12] = 5.50545758789123e-11
CHEB_AI[13] = -1.0149118065270192e-11
CHEB_AI[14] = 1.880106191189579e-12
CHEB_AI[15] = -3.498673464582837e-13
CHEB_AI[16] = 6.538397350316905e-14
CHEB_AI[17] = -1.2268390082753415e-14
CHEB_AI[18] = 2.310740627090895e-15
CHEB_AI[19] = -4.362914134510911e-16
CHEB_AI[20] = 7.986885413481217e-17

cdef double[40] UK
UK[0] = 1.0
cdef int _k
for _k in range(39):
    UK[_k + 1] = UK[_k] * (6 * _k + 1) * (6 * _k + 5) / (72.0 * (_k + 1))


cdef void _series_fg(double x, double* f_out, double* g_out) nogil:
    cdef double x3 = x * x * x
    cdef double f = 1.0, g = x, tf = 1.0, tg = x
    cdef int k
    for k in range(80):
        tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
        f += tf
        g += tg
        if fabs(tf) < 1e-18 * fabs(f) and fabs(tg) < 1e-18 * (fabs(g) + 1e-300):
            break
    f_out[0] = f
    g_out[0] = g


cdef double _cheb(double t) nogil:
    cdef double b0 = 0.0, b1 = 0.0, tmp
    cdef int j
    for j in range(N_CHEB - 1, 0, -1):
        tmp = CHEB_AI[j] + 2.0 * t * b0 - b1
        b1 = b0
        b0 = tmp
    return 0.5 * CHEB_AI[0] + t * b0 - b1


cdef void _asym_pos(double zeta, double* sa, double* sb) nogil:
    cdef double a = 1.0, b = 1.0, term = UK[1] / zeta, prev = 1e308
    cdef int k, sign = -1
    for k in range(1, 38):
        if fabs(term) >= prev:
            break
        a += sign * term
        b += term
        prev = fabs(term)
        term = term * UK[k + 1] / UK[k] / zeta
        sign = -sign
    sa[0] = a
    sb[0] = b


cdef void _asym_neg(double t, double* s_even, double* s_odd) nogil:
    cdef double inv2 = 1.0 / (t * t)
    cdef double se = 1.0, so = UK[1] / t
    cdef double te = 1.0, to = UK[1] / t, ne, no
    cdef int k, sign = -1
    for k in range(1, 18):
        ne = te * (UK[2 * k] / UK[2 * k - 2]) * inv2
        no = to * (UK[2 * k + 1] / UK[2 * k - 1]) * inv2
        if fabs(ne) >= fabs(te) or fabs(no) >= fabs(to):
            break
        se += sign * ne
        so += sign * no
        te = ne
        to = no
        sign = -sign
    s_even[0] = se
    s_odd[0] = so


cdef void _airy_point(double x, double* ai, double* bi,
                      double* ai_s, double* bi_s) nogil:
    cdef double f, g, z, t, pref, c, s, zeta, se, so, sa, sb, a, b
    if x < -7.0:
        z = -x
        t = (2.0 / 3.0) * z * sqrt(z)
        _asym_neg(t, &se, &so)
        pref = 1.0 / (sqrt(M_PI) * pow(z, 0.25))
        c = cos(t - 0.25 * M_PI)
        s = sin(t - 0.25 * M_PI)
        ai[0] = pref * (c * se + s * so)
        bi[0] = pref * (-s * se + c * so)
        ai_s[0] = ai[0]
        bi_s[0] = bi[0]
    elif x <= CHEB_A:
        _series_fg(x, &f, &g)
        a = C1 * f - C2 * g
        b = SQRT3 * (C1 * f + C2 * g)
        ai[0] = a
        bi[0] = b
        if x > 0:
            zeta = (2.0 / 3.0) * x * sqrt(x)
            ai_s[0] = a * exp(zeta)
            bi_s[0] = b * exp(-zeta)
        else:
            ai_s[0] = a
            bi_s[0] = b
    elif x <= CHEB_B:
        zeta = (2.0 / 3.0) * x * sqrt(x)
        a = _cheb((2.0 * x - (CHEB_A + CHEB_B)) / (CHEB_B - CHEB_A))
        _series_fg(x, &f, &g)
        b = SQRT3 * (C1 * f + C2 * g)
        ai_s[0] = a
        ai[0] = a * exp(-zeta)
        bi[0] = b
        bi_s[0] = b * exp(-zeta)
    else:
        zeta = (2.0 / 3.0) * x * sqrt(x)
        _asym_pos(zeta, &sa, &sb)
        pref = 1.0 / (sqrt(M_PI) * pow(x, 0.25))
        ai_s[0] = 0.5 * pref * sa
        bi_s[0] = pref * sb
        ai[0] = 0.5 * pref * sa * exp(-zeta)
        bi[0] = pref * sb * exp(zeta) if zeta < 700.0 else 1e308
    return


cdef cnp.ndarray _dispatch(object x, int which):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = \
        np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(xv.shape[0])
    cdef Py_ssize_t i
    cdef double ai, bi, ai_s, bi_s
    for i in range(xv.shape[0]):
        _airy_point(xv[i], &ai, &bi, &ai_s, &bi_s)
        if which == 0:
            out[i] = ai
        elif which == 1:
            out[i] = bi
        elif which == 2:
            out[i] = ai_s
        else:
            out[i] = bi_s
    return out.reshape(np.shape(np.atleast_1d(x)))


def airy_ai(x):
    """Ai(x), elementwise."""
    out = _dispatch(x, 0)
    return float(out[0]) if np.isscalar(x) else out


def airy_bi(x):
    """Bi(x), elementwise (overflows for x beyond ~105; use airy_bi_scaled)."""
    out = _dispatch(x, 1)
    return float(out[0]) if np.isscalar(x) else out


def airy_ai_scaled(x):
    """Ai(x)*exp(+(2/3)x^(3/2)) for x > 0; Ai(x) for x <= 0."""
    out = _dispatch(x, 2)
    return float(out[0]) if np.isscalar(x) else out


def airy_bi_scaled(x):
    """Bi(x)*exp(-(2/3)x^(3/2)) for x > 0; Bi(x) for x <= 0."""
    out = _dispatch(x, 3)
    return float(out[0]) if np.isscalar(x) else out


def superpose_intensity(amps, rates, t):
    """|sum_i amps[i] * exp(rates[i] * t)|^2 evaluated on a time grid."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = \
        np.ascontiguousarray(amps, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] r = \
        np.ascontiguousarray(rates, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tv = \
        np.ascontiguousarray(t, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(tv.shape[0])
    cdef Py_ssize_t i, j, n = a.shape[0], m = tv.shape[0]
    cdef double re, im, er, phase, mag, cr, ci
    for j in range(m):
        re = 0.0
        im = 0.0
        for i in range(n):
            mag = exp(r[i].real * tv[j])
            phase = r[i].imag * tv[j]
            cr = mag * cos(phase)
            ci = mag * sin(phase)
            re += a[i].real * cr - a[i].imag * ci
            im += a[i].real * ci + a[i].imag * cr
        out[j] = re * re + im * im
    return out


def superpose_fields(coeffs, psis, phases):
    """Sum_i coeffs[i]*phases[i]*psis[i, :] -> complex field on the grid."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c = \
        np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] ph = \
        np.ascontiguousarray(phases, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] p = \
        np.ascontiguousarray(psis, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = \
        np.zeros(p.shape[1], dtype=np.complex128)
    cdef Py_ssize_t i, j
    cdef double complex w
    for i in range(c.shape[0]):
        w = c[i] * ph[i]
        for j in range(p.shape[1]):
            out[j] = out[j] + w * p[i, j]
    return out
